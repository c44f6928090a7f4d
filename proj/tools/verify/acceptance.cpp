#include "acceptance.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "cfdim/chebyshev.hpp"
#include "cfdim/digit_stream.hpp"
#include "cfdim/dimension.hpp"
#include "cfdim/fractal.hpp"
#include "cfdim/measure.hpp"
#include "cfdim/parallel.hpp"
#include "cfdim/pressure.hpp"
#include "cfdim/thresholds.hpp"
#include "cfdim/transfer.hpp"

namespace cfdim::verify {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Criterion conformality(const VerifyOptions& o) {
  Criterion c{1, "conformality anchor"};
  const auto start = Clock::now();
  EigenOptions eo;
  eo.grid_size = 128;
  eo.cap = 10000;
  eo.workers = o.workers;
  const PressureEstimate p = pressure_eigen(1.0, eo);
  c.seconds = seconds_since(start);
  c.pass = std::abs(p.value) <= 1e-6 && p.lower <= 0.0 && 0.0 <= p.upper && c.seconds < 5.0;
  c.detail = fmt::format("P(1) = {:.3e}, bracket [{:.3e}, {:.3e}], grid 128, cap 10^4, {} iterations", p.value,
                         p.lower, p.upper, p.iterations);
  return c;
}

Criterion telescoping(const VerifyOptions& o) {
  Criterion c{2, "telescoping eigenfunction"};
  const auto start = Clock::now();
  const ChebyshevGrid grid(128);
  TransferOptions to;
  to.cap = 10000;
  to.workers = o.workers;
  const TransferOperator op(grid, 1.0, to);
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 1.0 / (1.0 + grid.nodes()[i]);
  const BracketedValues lf = op.apply_bracketed(f);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    worst = std::max({worst, std::abs(lf.value[i] - f[i]), std::abs(lf.lower[i] - f[i]), std::abs(lf.upper[i] - f[i])});
  }
  c.seconds = seconds_since(start);
  c.pass = worst <= 1e-10 && c.seconds < 1.0;
  c.detail = fmt::format("max nodewise |L1 f - f| including bracket = {:.3e} at 128 nodes", worst);
  return c;
}

Criterion limits(const VerifyOptions&) {
  Criterion c{3, "dimension limits in B"};
  const auto start = Clock::now();
  bool ok = true;
  std::string parts;
  for (int r = 1; r <= 3; ++r) {
    const double near_one = solve_dimension(r, 1.001, 1e-6).value;
    const double huge = solve_dimension(r, 1e6, 1e-6).value;
    bool decreasing = true;
    double prev = 2.0;
    for (double B : {1.5, 2.0, 4.0, 16.0, 256.0}) {
      const double s = solve_dimension(r, B, 1e-6).value;
      decreasing = decreasing && s < prev;
      prev = s;
    }
    ok = ok && near_one > 0.95 && huge < 0.55 && decreasing;
    parts += fmt::format("{}r={}: s(1.001)={:.4f} s(1e6)={:.4f} {}", r > 1 ? "; " : "", r, near_one, huge,
                         decreasing ? "decreasing" : "NOT decreasing");
  }
  c.seconds = seconds_since(start);
  c.pass = ok && c.seconds < 60.0;
  c.detail = parts;
  return c;
}

Criterion independent_paths(const VerifyOptions& o) {
  Criterion c{4, "independent-path equality"};
  const auto start = Clock::now();
  double worst = 0.0;
  bool argmin_ok = true;
  EigenOptions eo{56, 1500, TailMode::zeta, 1e-13, 10000, o.workers};
  for (int r = 1; r <= 3; ++r) {
    for (double B : {1.5, 2.0, 10.0}) {
      const ExponentResult hs = hussain_shulga_exponent(r, B, 1e-7, eo);
      const double s = solve_dimension(r, B, 1e-7).value;
      worst = std::max(worst, std::abs(hs.value - s));
      argmin_ok = argmin_ok && hs.argmin == r - 1;
    }
  }
  c.seconds = seconds_since(start);
  c.pass = worst <= 2e-4;
  c.detail = fmt::format("max |d_min - s(r,B)| = {:.2e} over r in 1..3, B in {{1.5, 2, 10}}; minimum at i = r-1: {}",
                         worst, argmin_ok ? "yes" : "no");
  return c;
}

Criterion cross_validation(const VerifyOptions& o) {
  Criterion c{5, "pressure cross-validation"};
  const auto start = Clock::now();
  double worst = 0.0;
  bool in_bracket = true;
  EigenOptions eo;
  eo.workers = o.workers;
  CylinderOptions co;
  co.workers = o.workers;
  for (double s : {0.6, 0.75, 0.9, 1.0}) {
    const PressureEstimate eig = pressure_eigen(s, eo);
    const PressureEstimate cyl = pressure_cylinder(s, 12, co);
    worst = std::max(worst, std::abs(eig.value - cyl.ratio_estimate));
    in_bracket = in_bracket && cyl.lower <= eig.value && eig.value <= cyl.upper;
  }
  CylinderOptions capped;
  capped.cap = 10;
  capped.workers = o.workers;
  const double z2 = cylinder_sums(1.0, 2, capped).back();
  double explicit_sum = 0.0;
  for (int a = 10; a >= 1; --a) {
    for (int b = 10; b >= 1; --b) explicit_sum += 1.0 / ((a * b + 1.0) * (a * b + 1.0));
  }
  const double diff = std::abs(z2 - explicit_sum);
  c.seconds = seconds_since(start);
  c.pass = worst <= 2e-3 && in_bracket && diff <= 1e-12;
  c.detail = fmt::format(
      "max |eigen - cylinder(n=12)| = {:.2e}, eigen inside every cylinder bracket: {}; "
      "n=2 A=10 s=1 sum vs 100-term enumeration: {:.2e}",
      worst, in_bracket ? "yes" : "no", diff);
  return c;
}

Criterion measure_oracle(const VerifyOptions& o) {
  Criterion c{6, "measure oracle"};
  const auto start = Clock::now();
  const double target = 0.28037;
  const MeasureBracket b = event_measure_exact({{1, 2}, 2.0}, 1000000, SamplingMeasure::lebesgue);
  const bool brackets = b.lower - 1e-4 <= target && target <= b.upper + 1e-4 && b.upper - b.lower <= 1e-4;

  constexpr std::size_t samples = 100000;
  std::vector<std::uint8_t> hit(samples);
  parallel_for(samples, o.workers, [&](std::size_t i) {
    StreamOptions so;
    so.measure = SamplingMeasure::lebesgue;
    GaussDigitStream stream(o.seed, i, so);
    const cf::Digit a1 = stream.next();
    const cf::Digit a2 = stream.next();
    hit[i] = a1 >= 2 && a2 >= 2;
  });
  std::size_t hits = 0;
  for (auto h : hit) hits += h;
  const double p = static_cast<double>(hits) / samples;
  const double sigma = std::sqrt(p * (1.0 - p) / samples);
  const bool mc_ok = b.lower - 3.0 * sigma <= p && p <= b.upper + 3.0 * sigma;

  const RatioBracket q = quasi_independence_ratio({{1, 51}, 100.0});
  const bool ratio_ok = q.lower >= 0.9 && q.upper <= 1.1;
  c.seconds = seconds_since(start);
  c.pass = brackets && mc_ok && ratio_ok;
  c.detail = fmt::format(
      "Lebesgue mu(a1>=2, a2>=2) in [{:.7f}, {:.7f}]; Monte Carlo {:.5f} +- {:.5f} (1e5 samples); "
      "ratio S={{1,51}} t=100 in [{:.5f}, {:.5f}]",
      b.lower, b.upper, p, sigma, q.lower, q.upper);
  return c;
}

Criterion dichotomy(const VerifyOptions& o) {
  Criterion c{7, "dichotomy at desk scale"};
  const auto start = Clock::now();
  DichotomyOptions opts;
  opts.workers = o.workers;
  const DichotomyReport linear = dichotomy_experiment(1, ThresholdFn::poly_log(1.0, 0.0), 1000, 6, 16, o.seed, opts);
  const DichotomyReport square = dichotomy_experiment(1, ThresholdFn::poly_log(2.0, 0.0), 1000, 6, 16, o.seed, opts);
  const double linear_cum = linear.rows.back().cum_freq;
  const double square_cum = square.rows.back().cum_freq;
  bool monotone = true;
  for (std::size_t i = 1; i < square.rows.size(); ++i) {
    const auto& a = square.rows[i - 1];
    const auto& b = square.rows[i];
    const double band = 3.0 * std::hypot(a.stderr_block, b.stderr_block);
    monotone = monotone && b.block_freq <= a.block_freq + band;
  }
  c.seconds = seconds_since(start);
  c.pass = linear_cum >= 0.99 && monotone && square_cum <= 0.5 && c.seconds < 300.0;
  std::string blocks;
  for (const auto& row : square.rows) blocks += fmt::format("{}{:.3f}", blocks.empty() ? "" : " ", row.block_freq);
  c.detail = fmt::format(
      "psi(n)=n: cumulative hit frequency {:.3f} by m=16; psi(n)=n^2: block frequencies [{}] {}, cumulative {:.3f}",
      linear_cum, blocks, monotone ? "non-increasing within 3 sigma" : "NOT monotone", square_cum);
  return c;
}

Criterion threshold(const VerifyOptions&) {
  Criterion c{8, "series threshold c > 1/2"};
  const auto start = Clock::now();
  const SeriesVerdict lo = series_classify(2, ThresholdFn::poly_log(1.0, 0.4));
  const SeriesVerdict hi = series_classify(2, ThresholdFn::poly_log(1.0, 0.6));
  c.seconds = seconds_since(start);
  c.pass = lo.verdict == Verdict::divergent && lo.method == VerdictMethod::analytic &&
           hi.verdict == Verdict::convergent && hi.method == VerdictMethod::analytic;
  c.detail = fmt::format("r=2: n(log n)^0.4 {} ({}), n(log n)^0.6 {} ({})", to_string(lo.verdict),
                         to_string(lo.method), to_string(hi.verdict), to_string(hi.method));
  return c;
}

std::uint64_t brute_force_pairs(int m) {
  const std::int64_t lo = (std::int64_t{1} << (m - 1)) + static_cast<std::int64_t>(m) * m;  // k > lo
  const std::int64_t hi = std::int64_t{1} << m;
  const auto g = static_cast<std::int64_t>(default_gap(m));
  std::uint64_t count = 0;
  for (std::int64_t k1 = lo + 1; k1 <= hi; ++k1) {
    if (k1 - 1 - 1 < g) continue;  // gap to k_0 = 1
    for (std::int64_t k2 = k1 + 1; k2 <= hi; ++k2) count += (k2 - k1 - 1 >= g);
  }
  return count;
}

Criterion counting(const VerifyOptions&) {
  Criterion c{9, "separated tuple counting"};
  const auto start = Clock::now();
  bool increasing = true;
  double prev = 0.0, last = 0.0;
  for (int m = 10; m <= 20; ++m) {
    const TupleCount t = count_separated_tuples(m, 2);
    const mpq_class ratio(t.count * 2, mpz_class(1) << (2 * (m - 1)));
    last = ratio.get_d();
    increasing = increasing && last > prev;
    prev = last;
  }
  bool dp_ok = true;
  for (int m = 2; m <= 14; ++m) dp_ok = dp_ok && count_separated_tuples(m, 2).count == brute_force_pairs(m);
  c.seconds = seconds_since(start);
  c.pass = increasing && last > 0.9 && dp_ok;
  c.detail = fmt::format("r=2 ratio increasing over m=10..20: {}, ratio(20) = {:.6f}; DP = brute force for m <= 14: {}",
                         increasing ? "yes" : "no", last, dp_ok ? "yes" : "no");
  return c;
}

Criterion fractal(const VerifyOptions&) {
  Criterion c{10, "fractal cross-check"};
  const auto start = Clock::now();
  const std::vector<std::uint64_t> gens{3, 4, 5, 6};
  const FractalEstimate e = cover_dimension_estimate(CantorSpec::uniform(1, 10.0, 50), gens);
  const double s = solve_dimension(1, 10.0, 1e-6).value;
  c.seconds = seconds_since(start);
  c.pass = std::abs(e.extrapolated - s) <= 0.1 && c.seconds < 120.0;
  c.detail = fmt::format("cover estimate {:.4f} (t_6 = {:.4f}{}) vs s(1,10) = {:.4f}, difference {:.4f}; "
                         "loose sanity check, fillers capped at 50",
                         e.extrapolated, e.rows.back().t_n, e.low_confidence ? ", low confidence" : "", s,
                         std::abs(e.extrapolated - s));
  return c;
}

std::vector<Criterion> run_first_ten(const VerifyOptions& o, const Progress& progress) {
  CurveOptions curve;
  curve.eigen.workers = o.workers;
  PressureCurve::configure_shared(curve);
  using Check = Criterion (*)(const VerifyOptions&);
  const Check checks[] = {conformality, telescoping, limits,    independent_paths, cross_validation,
                          measure_oracle, dichotomy, threshold, counting,          fractal};
  std::vector<Criterion> out;
  for (Check check : checks) {
    Criterion c;
    const auto start = Clock::now();
    try {
      c = check(o);
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("error: ") + e.what();
      c.seconds = seconds_since(start);
    }
    if (c.id == 0) c.id = static_cast<int>(out.size()) + 1;
    if (progress) progress(c);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::string report_line(const Criterion& c) {
  return fmt::format("{} C{} {}: {}", c.pass ? "PASS" : "FAIL", c.id, c.title, c.detail);
}

std::vector<Criterion> run_criteria(const VerifyOptions& options, const Progress& progress) {
  std::vector<Criterion> out = run_first_ten(options, progress);
  if (!options.determinism) return out;

  Criterion c{11, "determinism across worker counts"};
  const auto start = Clock::now();
  VerifyOptions alt = options;
  alt.workers = options.alternate_workers;
  const std::vector<Criterion> rerun = run_first_ten(alt, {});
  std::size_t differing = 0;
  for (std::size_t i = 0; i < out.size(); ++i) differing += report_line(out[i]) != report_line(rerun[i]);
  PressureCurve::configure_shared(CurveOptions{});
  c.seconds = seconds_since(start);
  c.pass = differing == 0;
  c.detail = fmt::format("criteria 1-10 rerun with {} workers vs {}: {} of {} report lines differ",
                         alt.workers, options.workers, differing, out.size());
  if (progress) progress(c);
  out.push_back(std::move(c));
  return out;
}

}  // namespace cfdim::verify
