#include "cfdim/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cfdim/errors.hpp"

namespace cfdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string shortest(double v) {
  for (int prec = 1; prec <= 17; ++prec) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    if (std::stod(os.str()) == v) return os.str();
  }
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

MonotoneHint nondecreasing() { return {MonotoneHint::Kind::nondecreasing, 1}; }

double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

std::optional<std::uint64_t> snap_ceil(double v) {
  if (!(v < 0x1p62)) return std::nullopt;
  if (v <= 1.0) return 1;
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-12 * v) return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::ceil(v));
}

std::optional<std::uint64_t> exact_power(std::uint64_t base, std::uint64_t exponent) {
  constexpr std::uint64_t limit = std::uint64_t{1} << 62;
  std::uint64_t acc = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    if (base != 0 && acc > limit / base) return std::nullopt;
    acc *= base;
  }
  return acc;
}

bool is_small_integer(double v) { return v >= 0.0 && v <= 64.0 && v == std::floor(v); }

}  // namespace

ThresholdFn ThresholdFn::poly_log(double alpha, double c) {
  require_finite(alpha, "poly_log exponent");
  require_finite(c, "poly_log log-exponent");
  if (alpha < 0.0 || (alpha == 0.0 && c < 0.0)) {
    throw DomainError("poly_log(alpha, c) must not tend to zero: need alpha > 0, or alpha = 0 and c >= 0");
  }
  MonotoneHint hint = nondecreasing();
  if (c < 0.0) {
    const double n0 = std::ceil(std::exp(-c / alpha));
    hint = {MonotoneHint::Kind::eventually_nondecreasing,
            static_cast<std::uint64_t>(std::max(2.0, n0))};
  }
  return ThresholdFn(psi::PolyLog{alpha, c}, hint);
}

ThresholdFn ThresholdFn::geometric(double base) {
  require_finite(base, "geometric base");
  if (base < 1.0) throw DomainError("geometric(B) needs B >= 1");
  return ThresholdFn(psi::Geometric{base}, nondecreasing());
}

ThresholdFn ThresholdFn::scaled_geometric(double delta, ThresholdFn inner) {
  require_finite(delta, "scaled_geometric factor");
  if (delta < 1.0) throw DomainError("scaled_geometric(delta, psi) needs delta >= 1");
  const MonotoneHint hint = inner.hint();
  return ThresholdFn(psi::ScaledGeometric{delta, std::make_shared<const ThresholdFn>(std::move(inner))}, hint);
}

ThresholdFn ThresholdFn::double_exp(double c, double b) {
  require_finite(c, "double_exp base");
  require_finite(b, "double_exp exponent base");
  if (c <= 1.0 || b <= 1.0) throw DomainError("double_exp(c, b) needs c > 1 and b > 1");
  return ThresholdFn(psi::DoubleExp{c, b}, nondecreasing());
}

ThresholdFn ThresholdFn::table(std::vector<double> values, MonotoneHint hint, std::string source) {
  if (values.empty()) throw DomainError("table threshold needs at least one value");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("table threshold values must be positive and finite");
  }
  return ThresholdFn(psi::Table{std::move(values), std::move(source)}, hint);
}

ThresholdFn monotone_envelope(const ThresholdFn& fn) {
  if (std::holds_alternative<psi::Enveloped>(fn.kind())) return fn;
  if (fn.hint().kind == MonotoneHint::Kind::unknown && !fn.domain_limit()) {
    throw DomainError("envelope of a threshold with unknown monotonicity needs a finite table");
  }
  return ThresholdFn(psi::Enveloped{std::make_shared<const ThresholdFn>(fn)}, nondecreasing());
}

bool ThresholdFn::is_table() const noexcept { return domain_limit().has_value(); }

std::optional<std::uint64_t> ThresholdFn::domain_limit() const {
  return std::visit(Overloaded{
                        [](const psi::Table& t) -> std::optional<std::uint64_t> { return t.values.size(); },
                        [](const psi::ScaledGeometric& s) { return s.inner->domain_limit(); },
                        [](const psi::Enveloped& e) { return e.inner->domain_limit(); },
                        [](const auto&) -> std::optional<std::uint64_t> { return std::nullopt; },
                    },
                    kind_);
}

double ThresholdFn::log_value(std::uint64_t n) const {
  if (n == 0) throw DomainError("threshold functions are defined for n >= 1");
  const double nd = static_cast<double>(n);
  return std::visit(
      Overloaded{
          [&](const psi::PolyLog& p) {
            double v = p.alpha * std::log(nd);
            if (p.c != 0.0) v += p.c * std::log(std::log(std::max(nd, 2.0)));
            return v;
          },
          [&](const psi::Geometric& g) { return nd * std::log(g.base); },
          [&](const psi::ScaledGeometric& s) { return nd * std::log(s.delta) + s.inner->log_value(n); },
          [&](const psi::DoubleExp& d) { return std::exp(nd * std::log(d.b) + std::log(std::log(d.c))); },
          [&](const psi::Table& t) {
            if (n > t.values.size()) throw DomainError("threshold table does not cover n = " + std::to_string(n));
            return std::log(t.values[n - 1]);
          },
          [&](const psi::Enveloped& e) {
            const ThresholdFn& inner = *e.inner;
            const MonotoneHint& h = inner.hint();
            if (h.kind == MonotoneHint::Kind::nondecreasing) return inner.log_value(n);
            std::uint64_t last = 0;
            if (h.kind == MonotoneHint::Kind::eventually_nondecreasing) {
              if (n >= h.from) return inner.log_value(n);
              last = h.from;
            } else {
              last = *inner.domain_limit();
              if (n > last) throw DomainError("threshold table does not cover n = " + std::to_string(n));
            }
            double best = kInf;
            for (std::uint64_t m = n; m <= last; ++m) best = std::min(best, inner.log_value(m));
            return best;
          },
      },
      kind_);
}

double ThresholdFn::log_log_value(std::uint64_t n) const {
  if (const auto* d = std::get_if<psi::DoubleExp>(&kind_)) {
    return static_cast<double>(n) * std::log(d->b) + std::log(std::log(d->c));
  }
  if (const auto* s = std::get_if<psi::ScaledGeometric>(&kind_)) {
    const double inner_ll = s->inner->log_log_value(n);
    if (inner_ll > 700.0) return inner_ll;  // the geometric factor is invisible at this scale
  }
  const double l = log_value(n);
  if (!(l > 0.0)) return kNaN;
  return std::log(l);
}

std::optional<std::uint64_t> ThresholdFn::ceil_value(std::uint64_t n) const {
  if (const auto* p = std::get_if<psi::PolyLog>(&kind_); p && p->c == 0.0 && is_small_integer(p->alpha)) {
    return exact_power(n, static_cast<std::uint64_t>(p->alpha));
  }
  if (const auto* g = std::get_if<psi::Geometric>(&kind_); g && is_small_integer(g->base)) {
    return exact_power(static_cast<std::uint64_t>(g->base), n);
  }
  if (const auto* t = std::get_if<psi::Table>(&kind_)) {
    if (n == 0 || n > t->values.size()) throw DomainError("threshold table does not cover n = " + std::to_string(n));
    return snap_ceil(t->values[n - 1]);
  }
  const double l = log_value(n);
  if (!(l < 62.0 * std::numbers::ln2)) return std::nullopt;
  return snap_ceil(std::exp(l));
}

std::string ThresholdFn::describe() const {
  return std::visit(
      Overloaded{
          [](const psi::PolyLog& p) { return "poly_log(" + shortest(p.alpha) + "," + shortest(p.c) + ")"; },
          [](const psi::Geometric& g) { return "geometric(" + shortest(g.base) + ")"; },
          [](const psi::ScaledGeometric& s) {
            return "scaled_geometric(" + shortest(s.delta) + "," + s.inner->describe() + ")";
          },
          [](const psi::DoubleExp& d) { return "double_exp(" + shortest(d.c) + "," + shortest(d.b) + ")"; },
          [](const psi::Table& t) {
            return t.source.empty() ? "table[" + std::to_string(t.values.size()) + "]" : "table:" + t.source;
          },
          [](const psi::Enveloped& e) { return "envelope(" + e.inner->describe() + ")"; },
      },
      kind_);
}

EnvelopeTable envelope(const ThresholdFn& fn, std::uint64_t horizon) {
  if (horizon < 1) throw DomainError("envelope horizon must be >= 1");
  EnvelopeTable out;
  const MonotoneHint& h = fn.hint();
  if (h.kind == MonotoneHint::Kind::nondecreasing) {
    out.log_values.resize(horizon);
    for (std::uint64_t n = 1; n <= horizon; ++n) out.log_values[n - 1] = fn.log_value(n);
    return out;
  }
  std::uint64_t last = horizon;
  if (h.kind == MonotoneHint::Kind::eventually_nondecreasing) {
    last = std::max(horizon, h.from);
  } else {
    const auto limit = fn.domain_limit();
    if (!limit) throw DomainError("envelope of a threshold with unknown monotonicity needs a finite table");
    if (horizon > *limit) throw DomainError("envelope horizon exceeds the threshold table");
    last = *limit;
    out.upper_bound_only = true;
  }
  std::vector<double> suffix(last);
  double running = kInf;
  for (std::uint64_t n = last; n >= 1; --n) {
    running = std::min(running, fn.log_value(n));
    suffix[n - 1] = running;
  }
  suffix.resize(horizon);
  out.log_values = std::move(suffix);
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::convergent: return "convergent";
    case Verdict::divergent: return "divergent";
    case Verdict::undetermined: return "undetermined";
  }
  return "undetermined";
}

std::string_view to_string(VerdictMethod m) { return m == VerdictMethod::analytic ? "analytic" : "numeric"; }

namespace {

struct AnalyticVerdict {
  Verdict verdict;
  std::string rule;
};

std::optional<AnalyticVerdict> analytic_verdict(int r, const ThresholdFn& fn) {
  return std::visit(
      Overloaded{
          [&](const psi::PolyLog& p) -> std::optional<AnalyticVerdict> {
            // terms ~ n^(r-1-r*alpha) (log n)^(-r*c): integral test
            std::string rule = "integral test on n^(r-1-r*alpha) (log n)^(-r*c)";
            if (p.alpha > 1.0) return AnalyticVerdict{Verdict::convergent, rule};
            if (p.alpha < 1.0) return AnalyticVerdict{Verdict::divergent, rule};
            return AnalyticVerdict{p.c * r > 1.0 ? Verdict::convergent : Verdict::divergent, rule + " with alpha = 1"};
          },
          [&](const psi::Geometric& g) -> std::optional<AnalyticVerdict> {
            if (g.base > 1.0) return AnalyticVerdict{Verdict::convergent, "n^(r-1) B^(-r n) decays geometrically"};
            return AnalyticVerdict{Verdict::divergent, "psi = 1: terms n^(r-1) do not tend to zero"};
          },
          [&](const psi::ScaledGeometric& s) -> std::optional<AnalyticVerdict> {
            if (s.delta == 1.0) return analytic_verdict(r, *s.inner);
            if (s.inner->is_table()) return std::nullopt;
            return AnalyticVerdict{Verdict::convergent, "delta^(-r n) factor with delta > 1 and psi_inner >= psi_inner(1)"};
          },
          [&](const psi::DoubleExp&) -> std::optional<AnalyticVerdict> {
            return AnalyticVerdict{Verdict::convergent, "doubly exponential threshold"};
          },
          [&](const psi::Table&) -> std::optional<AnalyticVerdict> { return std::nullopt; },
          [&](const psi::Enveloped& e) -> std::optional<AnalyticVerdict> {
            // psi~ = psi beyond the monotonicity point, so the tails agree.
            return analytic_verdict(r, *e.inner);
          },
      },
      fn.kind());
}

}  // namespace

SeriesVerdict series_classify(int r, const ThresholdFn& fn, std::uint64_t horizon) {
  if (r < 1) throw DomainError("series_classify needs r >= 1");
  SeriesVerdict out;
  if (const auto limit = fn.domain_limit()) horizon = std::min(horizon, *limit);
  horizon = std::max<std::uint64_t>(horizon, 1);
  out.horizon = horizon;

  const EnvelopeTable env = envelope(fn, horizon);
  double log_sum = -kInf;
  std::uint64_t next_sample = 1;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    const double term = (r - 1) * std::log(static_cast<double>(n)) - r * env.log_values[n - 1];
    log_sum = log_sum_exp(log_sum, term);
    if (n == next_sample || n == horizon) {
      out.partial_sums.emplace_back(n, std::exp(log_sum));
      if (n == next_sample) next_sample *= 2;
    }
  }

  if (const auto analytic = analytic_verdict(r, fn)) {
    out.verdict = analytic->verdict;
    out.rule = analytic->rule;
    out.method = VerdictMethod::analytic;
    return out;
  }

  // Dyadic block sums b_j = S(2^{j+1}-1) - S(2^j - 1), from the sampled partial sums.
  out.method = VerdictMethod::numeric;
  std::vector<double> blocks;
  double previous = 0.0;
  for (const auto& [n, s] : out.partial_sums) {
    if ((n & (n - 1)) != 0) continue;  // only powers of two
    if (n > 1) blocks.push_back(s - previous);
    previous = s;
  }
  out.rule = "dyadic block ratios over the last 4 blocks up to N = " + std::to_string(horizon);
  if (blocks.size() < 5) {
    out.verdict = Verdict::undetermined;
    return out;
  }
  bool all_small = true, all_large = true;
  for (std::size_t i = blocks.size() - 4; i < blocks.size(); ++i) {
    const double ratio = blocks[i] / blocks[i - 1];
    all_small = all_small && ratio <= 0.75;
    all_large = all_large && ratio >= 0.95;
  }
  out.verdict = all_small ? Verdict::convergent : all_large ? Verdict::divergent : Verdict::undetermined;
  return out;
}

DyadicReport dyadic_equivalence_check(int r, const ThresholdFn& fn, int max_j) {
  if (r < 1) throw DomainError("dyadic_equivalence_check needs r >= 1");
  if (max_j < 0 || max_j > 26) throw DomainError("dyadic_equivalence_check supports 0 <= J <= 26");
  if (fn.hint().kind != MonotoneHint::Kind::nondecreasing) {
    throw DomainError("dyadic_equivalence_check needs a nondecreasing threshold");
  }
  auto log_reference = [&](int j) {
    const double n = std::ldexp(1.0, j);
    return r * (std::log(n) - fn.log_value(static_cast<std::uint64_t>(n)));
  };
  DyadicReport out;
  out.sandwich_holds = true;
  const double log2r = r * std::numbers::ln2;
  double next_ref = log_reference(0);
  for (int j = 0; j <= max_j; ++j) {
    const std::uint64_t lo = std::uint64_t{1} << j;
    double log_block = -kInf;
    for (std::uint64_t n = lo; n < 2 * lo; ++n) {
      log_block = log_sum_exp(log_block, (r - 1) * std::log(static_cast<double>(n)) - r * fn.log_value(n));
    }
    const double ref = next_ref;
    next_ref = log_reference(j + 1);
    DyadicBlock b;
    b.j = j;
    b.block_sum = std::exp(log_block);
    b.reference = std::exp(ref);
    b.lower_slack = std::exp(log_block + log2r - next_ref);
    b.upper_slack = std::exp(log2r + ref - log_block);
    out.worst_constant = std::max({out.worst_constant, b.lower_slack, b.upper_slack});
    out.sandwich_holds = out.sandwich_holds && b.lower_slack >= 1.0 - 1e-12 && b.upper_slack >= 1.0 - 1e-12;
    out.blocks.push_back(b);
  }
  out.within_constant = out.worst_constant <= std::pow(4.0, r);
  return out;
}

GrowthExponents growth_exponents(const ThresholdFn& fn, std::uint64_t horizon) {
  return std::visit(
      Overloaded{
          [](const psi::PolyLog&) { return GrowthExponents{}; },
          [](const psi::Geometric& g) {
            GrowthExponents e;
            e.log_B = std::log(g.base);
            return e;
          },
          [&](const psi::ScaledGeometric& s) {
            GrowthExponents e = growth_exponents(*s.inner, horizon);
            if (std::isinf(e.log_B)) return e;
            e.log_B += std::log(s.delta);
            e.log_b = 0.0;
            return e;
          },
          [](const psi::DoubleExp& d) {
            GrowthExponents e;
            e.log_B = kInf;
            e.log_b = std::log(d.b);
            return e;
          },
          [&](const psi::Table&) {
            if (horizon < 10) throw DomainError("growth_exponents needs a horizon >= 10");
            const std::uint64_t n_max = std::min<std::uint64_t>(horizon, *fn.domain_limit());
            if (n_max < 10) throw DomainError("growth_exponents needs a table of at least 10 values");
            const EnvelopeTable env = envelope(fn, n_max);
            GrowthExponents e;
            e.estimate = true;
            e.log_B = kInf;
            e.log_b = kInf;
            for (std::uint64_t n = (n_max + 1) / 2; n <= n_max; ++n) {
              const double l = env.log_values[n - 1];
              const double nd = static_cast<double>(n);
              if (l / nd < e.log_B) {
                e.log_B = l / nd;
                e.argmin_B = n;
              }
              if (!(l > 0.0)) {
                e.skipped_points = true;
                continue;
              }
              if (std::log(l) / nd < e.log_b) {
                e.log_b = std::log(l) / nd;
                e.argmin_b = n;
              }
            }
            e.log_B = std::max(e.log_B, 0.0);
            if (std::isinf(e.log_b)) e.log_b = 0.0;
            e.log_b = std::max(e.log_b, 0.0);
            return e;
          },
          [&](const psi::Enveloped& e) { return growth_exponents(*e.inner, horizon); },
      },
      fn.kind());
}

}  // namespace cfdim
