#include "cfdim/dimension.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cfdim/errors.hpp"

namespace cfdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_inputs(int r, double log_B) {
  if (r < 1) throw DomainError("r must be >= 1");
  if (!(log_B > 0.0) || std::isinf(log_B)) throw DomainError("the finite-B regime needs 1 < B < inf");
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::b_equals_one: return "B=1";
    case Regime::finite_b: return "finite-B";
    case Regime::b_infinite: return "B=inf";
  }
  return "finite-B";
}

DimensionResult solve_dimension(int r, double B, double tol, std::shared_ptr<const PressureCurve> curve) {
  if (!(B > 1.0)) throw DomainError("the finite-B regime needs 1 < B < inf");
  return solve_dimension_log(r, std::log(B), tol, std::move(curve));
}

DimensionResult solve_dimension_log(int r, double log_B, double tol, std::shared_ptr<const PressureCurve> curve) {
  require_inputs(r, log_B);
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (!curve) curve = PressureCurve::shared();
  const PressureCurve& P = *curve;
  const double rm1 = static_cast<double>(r - 1);
  auto g = [&](double s) { return P(s) - (s + (2.0 * s - 1.0) * rm1) * log_B; };

  DimensionResult out;
  out.regime = Regime::finite_b;
  out.r = r;
  out.log_B = log_B;

  double eps = 1e-3;
  while (g(0.5 + eps) <= 0.0) {
    eps *= 0.1;
    if (eps < 1e-14) throw DomainError("B is too large for the root to be separated from 1/2 in double precision");
  }
  double lo = 0.5 + eps, hi = 1.0;
  out.lower_endpoint = lo;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    out.trace.push_back({lo, hi, mid, gm});
    if (gm > 0.0) lo = mid;
    else hi = mid;
  }
  out.value = 0.5 * (lo + hi);
  const double slope = P.derivative(out.value) - (1.0 + 2.0 * rm1) * log_B;
  out.achievable = P.error_estimate() / std::abs(slope);
  if (tol < out.achievable) {
    std::ostringstream msg;
    msg << "tolerance " << tol << " is below the accuracy " << out.achievable
        << " reachable with the cached pressure curve; use a larger grid or a looser tolerance";
    throw DomainError(msg.str());
  }
  return out;
}

DimensionResult dimension_dispatch(int r, const ThresholdFn& psi, double tol) {
  if (r < 1) throw DomainError("r must be >= 1");
  const GrowthExponents e = growth_exponents(psi);
  DimensionResult out;
  if (std::isinf(e.log_B)) {
    out.regime = Regime::b_infinite;
    out.value = std::isinf(e.log_b) ? 0.0 : 1.0 / (1.0 + std::exp(e.log_b));
  } else if (e.log_B <= 0.0) {
    out.regime = Regime::b_equals_one;
    out.value = 1.0;
  } else {
    out = solve_dimension_log(r, e.log_B, tol);
  }
  out.r = r;
  out.log_B = e.log_B;
  out.log_b = e.log_b;
  out.estimate = e.estimate;
  return out;
}

ExponentResult hussain_shulga_exponent(int r, double B, double tol, const EigenOptions& eigen) {
  if (!(B > 1.0) || std::isinf(B)) throw DomainError("the finite-B regime needs 1 < B < inf");
  if (r < 1) throw DomainError("r must be >= 1");
  const double log_B = std::log(B);
  ExponentResult out;
  out.value = kInf;
  for (int i = 0; i < r; ++i) {
    const double log_beta = (i + 1) * log_B;
    const double log_beta_prev = i * log_B;
    auto h = [&](double s) { return pressure_eigen(s, eigen).value - s * log_beta + (1.0 - s) * log_beta_prev; };

    double a = 0.5 + 1e-3, b = 1.0;
    double fa = h(a);
    while (fa <= 0.0) {
      a = 0.5 + (a - 0.5) * 0.1;
      if (a - 0.5 < 1e-14) throw DomainError("B is too large for the root to be separated from 1/2");
      fa = h(a);
    }
    double fb = h(b);
    // Illinois variant of regula falsi
    int side = 0;
    double c = b;
    for (int it = 0; it < 200 && b - a > tol; ++it) {
      c = (a * fb - b * fa) / (fb - fa);
      const double fc = h(c);
      if (fc == 0.0) {
        a = b = c;
        break;
      }
      if ((fc > 0.0) == (fa > 0.0)) {
        a = c;
        fa = fc;
        if (side == -1) fb *= 0.5;
        side = -1;
      } else {
        b = c;
        fb = fc;
        if (side == 1) fa *= 0.5;
        side = 1;
      }
    }
    const double d = (b - a <= tol) ? 0.5 * (a + b) : c;
    out.d.push_back(d);
    if (d < out.value) {
      out.value = d;
      out.argmin = i;
    }
  }
  return out;
}

}  // namespace cfdim
