#include "cfdim/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cfdim/errors.hpp"

namespace cfdim {

ChebyshevGrid::ChebyshevGrid(std::size_t size) {
  if (size < 2) throw DomainError("a Chebyshev grid needs at least 2 points");
  const std::size_t n = size - 1;
  nodes_.resize(size);
  bary_.resize(size);
  for (std::size_t j = 0; j < size; ++j) {
    // sin form keeps the points near 0 accurate to full relative precision
    const double half = std::sin(std::numbers::pi * static_cast<double>(j) / (2.0 * static_cast<double>(n)));
    nodes_[j] = half * half;
    bary_[j] = (j % 2 == 0) ? 1.0 : -1.0;
  }
  nodes_.front() = 0.0;
  nodes_.back() = 1.0;
  bary_.front() *= 0.5;
  bary_.back() *= 0.5;

  quadrature_.assign(size, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    const double theta = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    double v = 1.0;
    for (std::size_t j = 1; j <= n / 2; ++j) {
      const double b = (2 * j == n) ? 1.0 : 2.0;
      v -= b * std::cos(2.0 * static_cast<double>(j) * theta) / (4.0 * static_cast<double>(j * j) - 1.0);
    }
    const double c = (k == 0 || k == n) ? 1.0 : 2.0;
    // weights on [-1, 1] halve on [0, 1]; node order is symmetric
    quadrature_[k] = 0.5 * c * v / static_cast<double>(n);
  }
}

void ChebyshevGrid::interpolation_row(double y, std::span<double> row) const {
  const std::size_t size = nodes_.size();
  double total = 0.0;
  for (std::size_t j = 0; j < size; ++j) {
    const double d = y - nodes_[j];
    if (d == 0.0) {
      std::fill(row.begin(), row.end(), 0.0);
      row[j] = 1.0;
      return;
    }
    row[j] = bary_[j] / d;
    total += row[j];
  }
  const double inv = 1.0 / total;
  for (std::size_t j = 0; j < size; ++j) row[j] *= inv;
}

double ChebyshevGrid::interpolate(std::span<const double> values, double y) const {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const double d = y - nodes_[j];
    if (d == 0.0) return values[j];
    const double t = bary_[j] / d;
    num += t * values[j];
    den += t;
  }
  return num / den;
}

double ChebyshevGrid::integrate(std::span<const double> values) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) sum += quadrature_[j] * values[j];
  return sum;
}

std::vector<std::vector<double>> ChebyshevGrid::taylor_rows(std::size_t order) const {
  const std::size_t size = nodes_.size();
  // Differentiation matrix from the barycentric weights, diagonal by the
  // negative-sum trick.
  std::vector<double> d(size * size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < size; ++j) {
      if (i == j) continue;
      const double v = (bary_[j] / bary_[i]) / (nodes_[i] - nodes_[j]);
      d[i * size + j] = v;
      diag -= v;
    }
    d[i * size + i] = diag;
  }
  std::vector<std::vector<double>> rows(order + 1, std::vector<double>(size, 0.0));
  rows[0][0] = 1.0;
  for (std::size_t k = 1; k <= order; ++k) {
    // row_k = row_{k-1} * D / k
    for (std::size_t i = 0; i < size; ++i) {
      const double r = rows[k - 1][i];
      if (r == 0.0) continue;
      for (std::size_t j = 0; j < size; ++j) rows[k][j] += r * d[i * size + j];
    }
    for (double& v : rows[k]) v /= static_cast<double>(k);
  }
  return rows;
}

}  // namespace cfdim
