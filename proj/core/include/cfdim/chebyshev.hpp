#pragma once

// Chebyshev-Lobatto collocation on [0, 1]: barycentric interpolation,
// Clenshaw-Curtis quadrature and derivative functionals at 0.

#include <cstddef>
#include <span>
#include <vector>

namespace cfdim {

class ChebyshevGrid {
 public:
  // `size` points x_0 = 0 < ... < x_{size-1} = 1, size >= 2.
  explicit ChebyshevGrid(std::size_t size);

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }

  // Cardinal functions l_j(y) for every node, written into `row`.
  void interpolation_row(double y, std::span<double> row) const;
  double interpolate(std::span<const double> values, double y) const;

  // Quadrature weights for the interpolant over [0, 1].
  const std::vector<double>& quadrature_weights() const noexcept { return quadrature_; }
  double integrate(std::span<const double> values) const;

  // rows[k][j]: the Taylor coefficient f^(k)(0)/k! of the interpolant is
  // sum_j rows[k][j] f(x_j), for k = 0..order.
  std::vector<std::vector<double>> taylor_rows(std::size_t order) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> bary_;
  std::vector<double> quadrature_;
};

}  // namespace cfdim
