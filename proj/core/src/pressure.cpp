#include "cfdim/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>

#include "cfdim/chebyshev.hpp"
#include "cfdim/errors.hpp"

namespace cfdim {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_summable(double s) {
  if (!(s > 0.5) || !std::isfinite(s)) throw DomainError("pressure needs s > 1/2");
}

}  // namespace

PressureEstimate pressure_eigen(double s, const EigenOptions& options) {
  require_summable(s);
  const ChebyshevGrid grid(options.grid_size);
  TransferOptions topts;
  topts.cap = options.cap;
  topts.tail = options.tail;
  topts.workers = options.workers;
  const TransferOperator op(grid, s, topts);

  const std::size_t n = grid.size();
  std::vector<double> v(n, 1.0);
  PressureEstimate est;
  est.s = s;
  est.method = PressureMethod::eigen;
  est.grid_size = n;
  est.cap = options.cap;
  double lo = 0.0, hi = 0.0;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    std::vector<double> w = op.apply(v);
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(w[i] > 0.0)) {
        throw ConvergenceError("power iteration left the positive cone at s = " + std::to_string(s) +
                               "; increase the grid size");
      }
      const double ratio = w[i] / v[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      peak = std::max(peak, w[i]);
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / peak;
    est.iterations = it;
    if ((hi - lo) <= options.tol * hi) break;
    if (it == options.max_iterations) {
      std::ostringstream msg;
      msg << "power iteration did not converge at s = " << s << " after " << it
          << " iterations; ratio spread " << (hi - lo) / hi;
      throw ConvergenceError(msg.str());
    }
  }
  const double widen = op.relative_error_bound() + 8.0 * kEps;
  est.value = std::log(0.5 * (lo + hi));
  est.lower = std::log(lo) - widen;
  est.upper = std::log(hi) + widen;
  return est;
}

std::vector<double> cylinder_sums(double s, std::size_t depth, const CylinderOptions& options) {
  if (depth < 1) throw DomainError("cylinder depth must be >= 1");
  const ChebyshevGrid grid(options.grid_size);
  TransferOptions topts;
  topts.workers = options.workers;
  if (options.cap == 0) {
    require_summable(s);
    topts.cap = 2000;
    topts.tail = TailMode::zeta;
  } else {
    topts.digits = {1, options.cap};
    topts.cap = options.cap;
    topts.tail = TailMode::none;
  }
  const TransferOperator op(grid, s, topts);
  std::vector<double> v(grid.size(), 1.0);
  std::vector<double> sums;
  sums.reserve(depth);
  for (std::size_t k = 0; k < depth; ++k) {
    v = op.apply(v);
    sums.push_back(v[0]);  // node 0 is x = 0
  }
  return sums;
}

PressureEstimate pressure_cylinder(double s, std::size_t depth, const CylinderOptions& options) {
  const std::vector<double> z = cylinder_sums(s, depth, options);
  PressureEstimate est;
  est.s = s;
  est.method = PressureMethod::cylinder;
  est.grid_size = options.grid_size;
  est.depth = depth;
  est.cap = options.cap;
  const double n = static_cast<double>(depth);
  est.value = std::log(z.back()) / n;
  est.upper = est.value;
  est.lower = est.value - s * std::log(4.0) / n;
  est.ratio_estimate = depth >= 2 ? std::log(z.back() / z[depth - 2]) : est.value;
  return est;
}

PressureCurve::PressureCurve(const CurveOptions& options) : s_max_(options.s_max) {
  if (!(s_max_ > 0.5)) throw DomainError("pressure curve needs s_max > 1/2");
  const std::size_t m = options.nodes;
  std::vector<double> values(m);
  double eigen_err = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    // first-kind nodes never touch s = 1/2
    const double t = std::cos(std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(m));
    const double s = 0.5 + 0.5 * (t + 1.0) * (s_max_ - 0.5);
    const PressureEstimate est = pressure_eigen(s, options.eigen);
    values[k] = est.value + std::log(2.0 * s - 1.0);
    eigen_err = std::max(eigen_err, est.upper - est.lower);
  }
  coeffs_.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      sum += values[k] * std::cos(std::numbers::pi * static_cast<double>(j) * (static_cast<double>(k) + 0.5) /
                                  static_cast<double>(m));
    }
    coeffs_[j] = (j == 0 ? 1.0 : 2.0) * sum / static_cast<double>(m);
  }
  double tail = 0.0;
  for (std::size_t j = m - std::min<std::size_t>(m, 4); j < m; ++j) tail += std::abs(coeffs_[j]);
  error_ = tail + eigen_err;
}

double PressureCurve::q_value(double s) const {
  const double t = t_of(s) ;
  // Clenshaw
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t j = coeffs_.size(); j-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + coeffs_[j];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + coeffs_[0];
}

double PressureCurve::operator()(double s) const {
  require_summable(s);
  if (s > s_max_) throw DomainError("s lies beyond the cached pressure curve");
  return q_value(s) - std::log(2.0 * s - 1.0);
}

double PressureCurve::derivative(double s) const {
  require_summable(s);
  if (s > s_max_) throw DomainError("s lies beyond the cached pressure curve");
  // derivative of the Chebyshev series via U polynomials: T_j' = j U_{j-1}
  const double t = t_of(s);
  double u_prev = 0.0, u = 1.0;  // U_{-1}, U_0
  double dq = 0.0;
  for (std::size_t j = 1; j < coeffs_.size(); ++j) {
    dq += coeffs_[j] * static_cast<double>(j) * u;
    const double next = 2.0 * t * u - u_prev;
    u_prev = u;
    u = next;
  }
  dq *= 2.0 / (s_max_ - 0.5);
  return dq - 2.0 / (2.0 * s - 1.0);
}

namespace {
std::mutex g_curve_mutex;
std::shared_ptr<const PressureCurve> g_curve;
CurveOptions g_curve_options;
}  // namespace

std::shared_ptr<const PressureCurve> PressureCurve::shared() {
  std::lock_guard lock(g_curve_mutex);
  if (!g_curve) g_curve = std::make_shared<const PressureCurve>(g_curve_options);
  return g_curve;
}

void PressureCurve::clear_shared() {
  std::lock_guard lock(g_curve_mutex);
  g_curve.reset();
}

void PressureCurve::configure_shared(const CurveOptions& options) {
  std::lock_guard lock(g_curve_mutex);
  g_curve_options = options;
  g_curve.reset();
}

}  // namespace cfdim
