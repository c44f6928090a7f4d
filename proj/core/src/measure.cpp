#include "cfdim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cfdim/chebyshev.hpp"
#include "cfdim/errors.hpp"
#include "cfdim/parallel.hpp"
#include "cfdim/transfer.hpp"

namespace cfdim {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Smallest integer digit satisfying a >= t; 0 when no 64-bit digit does.
cf::Digit digit_threshold(double t) {
  if (!(t <= 0x1p63)) return 0;
  return t <= 1.0 ? 1 : static_cast<cf::Digit>(std::ceil(t));
}

void validate(const EventSpec& spec) {
  if (spec.positions.empty()) throw DomainError("an event needs at least one position");
  if (spec.positions.front() < 1) throw DomainError("positions start at 1");
  for (std::size_t i = 1; i < spec.positions.size(); ++i) {
    if (spec.positions[i] <= spec.positions[i - 1]) throw DomainError("positions must be strictly increasing");
  }
  if (!(spec.threshold >= 1.0) || !std::isfinite(spec.threshold)) throw DomainError("threshold must be >= 1");
}

// Convergent state of a prefix in doubles; only ratios and products are used.
struct Prefix {
  double p = 0.0, q = 1.0, p_prev = 1.0, q_prev = 0.0;
  std::uint64_t depth = 0;

  Prefix extend(double a) const { return {a * p + p_prev, a * q + q_prev, p, q, depth + 1}; }
};

// Measure of {x in I(prefix) : a_{depth+1}(x) >= T}, an interval with
// endpoints p/q and (pT + p')/(qT + q').
double tail_interval(const Prefix& w, double T, SamplingMeasure measure) {
  const double len = 1.0 / (w.q * (w.q * T + w.q_prev));
  if (measure == SamplingMeasure::lebesgue) return len;
  const double u = w.p / w.q;
  const double signed_len = (w.depth % 2 == 0) ? len : -len;  // v - u = (-1)^depth len
  return std::abs(std::log1p(signed_len / (1.0 + u))) / std::numbers::ln2;
}

double single_event(cf::Digit T, SamplingMeasure measure) {
  const double t = static_cast<double>(T);
  return measure == SamplingMeasure::lebesgue ? 1.0 / t : std::log1p(1.0 / t) / std::numbers::ln2;
}

}  // namespace

std::uint64_t count_large(std::span<const cf::Digit> digits, std::uint64_t n, double t) {
  if (digits.size() < n) {
    throw DomainError("count_large needs " + std::to_string(n) + " digits, got " + std::to_string(digits.size()));
  }
  const cf::Digit T = digit_threshold(t);
  if (T == 0) return 0;
  return static_cast<std::uint64_t>(std::count_if(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(n),
                                                  [T](cf::Digit a) { return a >= T; }));
}

std::vector<std::uint64_t> hit_levels(std::span<const cf::Digit> digits, int r, const ThresholdFn& psi,
                                      std::uint64_t horizon) {
  if (r < 1) throw DomainError("r must be >= 1");
  if (digits.size() < horizon) throw DomainError("hit_levels needs N digits");
  std::vector<cf::Digit> values(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(horizon));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  // Fenwick tree over the compressed digit values.
  std::vector<std::uint64_t> tree(values.size() + 1, 0);
  auto insert = [&](cf::Digit a) {
    for (std::size_t i = static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), a) - values.begin()) + 1;
         i < tree.size(); i += i & (~i + 1)) {
      ++tree[i];
    }
  };
  auto below = [&](cf::Digit T) {  // #digits < T
    std::uint64_t c = 0;
    for (std::size_t i = static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), T) - values.begin());
         i > 0; i -= i & (~i + 1)) {
      c += tree[i];
    }
    return c;
  };
  std::vector<std::uint64_t> hits;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    insert(digits[n - 1]);
    const auto T = psi.ceil_value(n);
    if (!T) continue;
    if (n - below(*T) >= static_cast<std::uint64_t>(r)) hits.push_back(n);
  }
  return hits;
}

MeasureBracket event_measure_exact(const EventSpec& spec, cf::Digit cap, SamplingMeasure measure,
                                   std::uint64_t word_budget) {
  validate(spec);
  if (cap < 1) throw DomainError("digit cap must be >= 1");
  const cf::Digit T = digit_threshold(spec.threshold);
  if (T == 0) throw DomainError("threshold exceeds the digit range");
  const std::uint64_t last = spec.positions.back();

  // lowest admissible digit per position 1..last-1
  std::vector<cf::Digit> low(last, 1);
  for (std::uint64_t k : spec.positions) low[k - 1] = T;

  double words = 1.0;
  for (std::uint64_t k = 1; k < last; ++k) {
    const double range = low[k - 1] > cap ? 0.0 : static_cast<double>(cap - low[k - 1] + 1);
    words *= range;
    if (words > static_cast<double>(word_budget)) {
      throw BudgetError("exact enumeration would visit more than " + std::to_string(word_budget) +
                        " prefixes; lower the cap, use fewer or earlier positions, or use the operator route");
    }
  }

  MeasureBracket out;
  out.measure = measure;
  out.cap = cap;
  out.method = MeasureMethod::enumeration;
  double lower = 0.0, slack = 0.0;
  std::uint64_t visited = 0;
  const double Td = static_cast<double>(T);

  // explicit stack: (prefix, next digit to try)
  struct Frame {
    Prefix w;
    cf::Digit next;
  };
  std::vector<Frame> stack;
  stack.push_back({Prefix{}, 0});
  while (!stack.empty()) {
    Frame& top = stack.back();
    const std::uint64_t pos = top.w.depth + 1;  // position being chosen
    if (pos == last) {
      lower += tail_interval(top.w, Td, measure);
      ++visited;
      stack.pop_back();
      continue;
    }
    if (top.next == 0) {
      // first visit: digits above the cap are an upper-bound-only interval
      top.next = low[pos - 1];
      const double above = static_cast<double>(std::max(low[pos - 1], cap + 1));
      slack += tail_interval(top.w, above, measure);
    }
    if (top.next > cap) {
      stack.pop_back();
      continue;
    }
    const Prefix child = top.w.extend(static_cast<double>(top.next));
    ++top.next;
    stack.push_back({child, 0});
  }
  const double rounding = 4.0 * kEps * static_cast<double>(visited + 1) * lower;
  out.lower = std::max(0.0, lower - rounding);
  out.upper = std::min(1.0, lower + slack + rounding);
  out.words = visited;
  return out;
}

namespace {

double operator_measure(const EventSpec& spec, SamplingMeasure measure, std::size_t grid_size, unsigned workers) {
  const ChebyshevGrid grid(grid_size);
  const cf::Digit T = digit_threshold(spec.threshold);
  TransferOptions all;
  all.cap = 1000;
  all.workers = workers;
  TransferOptions large = all;
  large.digits = {T, 0};
  const TransferOperator full(grid, 1.0, all);
  const TransferOperator restricted(grid, 1.0, large);

  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f[i] = measure == SamplingMeasure::gauss ? 1.0 / ((1.0 + grid.nodes()[i]) * std::numbers::ln2) : 1.0;
  }
  std::size_t next = 0;
  for (std::uint64_t k = 1; k <= spec.positions.back(); ++k) {
    const bool constrained = next < spec.positions.size() && spec.positions[next] == k;
    if (constrained) ++next;
    f = (constrained ? restricted : full).apply(f);
  }
  return grid.integrate(f);
}

}  // namespace

MeasureBracket event_measure_operator(const EventSpec& spec, SamplingMeasure measure, std::size_t grid_size,
                                      unsigned workers) {
  validate(spec);
  if (digit_threshold(spec.threshold) == 0) throw DomainError("threshold exceeds the digit range");
  const double coarse = operator_measure(spec, measure, grid_size, workers);
  const double fine = operator_measure(spec, measure, grid_size + 16, workers);
  const double half = std::abs(fine - coarse) + 1e-13 + 64.0 * kEps * std::abs(fine);
  MeasureBracket out;
  out.lower = std::max(0.0, fine - half);
  out.upper = std::min(1.0, fine + half);
  out.measure = measure;
  out.method = MeasureMethod::operator_iteration;
  return out;
}

RatioBracket quasi_independence_ratio(const EventSpec& spec, cf::Digit cap, SamplingMeasure measure) {
  validate(spec);
  RatioBracket out;
  try {
    out.joint = event_measure_exact(spec, cap, measure);
  } catch (const BudgetError&) {
    out.joint = event_measure_operator(spec, measure);
  }
  out.single = single_event(digit_threshold(spec.threshold), measure);
  const double denom = std::pow(out.single, static_cast<double>(spec.positions.size()));
  out.lower = out.joint.lower / denom;
  out.upper = out.joint.upper / denom;
  return out;
}

std::uint64_t default_gap(int m) {
  const double v = static_cast<double>(m) * std::numbers::ln2;
  return static_cast<std::uint64_t>(std::ceil(v * v));
}

TupleCount count_separated_tuples(int m, int r, std::uint64_t gap_override) {
  if (m < 1 || r < 1) throw DomainError("count_separated_tuples needs m >= 1 and r >= 1");
  if (m > 26) throw BudgetError("count_separated_tuples enumerates 2^(m-1) positions; m <= 26 supported");
  TupleCount out;
  out.valid = m >= 10;
  out.gap = gap_override ? gap_override : default_gap(m);
  out.length = (std::int64_t{1} << (m - 1)) - static_cast<std::int64_t>(m) * m;
  if (out.length <= 0) return out;
  const std::uint64_t L = static_cast<std::uint64_t>(out.length);
  const std::uint64_t g = out.gap;
  const std::size_t ring = static_cast<std::size_t>(g + 2);

  // F[j][i mod ring] = # j-tuples inside positions 1..i; position i - g - 1
  // shares slot (i + 1) mod ring, which is only overwritten at step i + 1.
  std::vector<std::vector<mpz_class>> F(static_cast<std::size_t>(r) + 1, std::vector<mpz_class>(ring, 0));
  auto at = [&](int j, std::int64_t i) -> mpz_class {
    if (j == 0) return 1;
    if (i <= 0) return 0;
    return F[static_cast<std::size_t>(j)][static_cast<std::size_t>(i) % ring];
  };
  for (std::uint64_t i = 1; i <= L; ++i) {
    const auto si = static_cast<std::int64_t>(i);
    for (int j = r; j >= 1; --j) {
      mpz_class v = at(j, si - 1) + at(j - 1, si - static_cast<std::int64_t>(g) - 1);
      F[static_cast<std::size_t>(j)][i % ring] = std::move(v);
    }
  }
  out.count = at(r, static_cast<std::int64_t>(L));

  const std::int64_t top = out.length - static_cast<std::int64_t>(r - 1) * static_cast<std::int64_t>(g);
  if (top >= r) mpz_bin_uiui(out.closed_form.get_mpz_t(), static_cast<unsigned long>(top), static_cast<unsigned long>(r));
  return out;
}

DichotomyReport dichotomy_experiment(int r, const ThresholdFn& psi, std::uint64_t samples, int m_lo, int m_hi,
                                     std::uint64_t seed, const DichotomyOptions& options) {
  if (r < 1) throw DomainError("r must be >= 1");
  if (samples < 100) throw DomainError("samples must be >= 100");
  if (m_lo < 0 || m_hi < m_lo || m_hi > 62) throw DomainError("bad dyadic block range");
  const std::uint64_t horizon = std::uint64_t{1} << m_hi;
  if (horizon > options.digit_budget) {
    throw BudgetError("block 2^" + std::to_string(m_hi) + " exceeds the per-stream digit budget of " +
                      std::to_string(options.digit_budget));
  }
  if (options.iid_digits && options.measure != SamplingMeasure::gauss) {
    throw DomainError("the i.i.d. surrogate only models the Gauss measure");
  }
  const std::size_t blocks = static_cast<std::size_t>(m_hi - m_lo + 1);
  std::vector<cf::Digit> thresholds(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto T = psi.ceil_value(std::uint64_t{1} << (m_lo + static_cast<int>(b)));
    thresholds[b] = T ? *T : 0;  // 0: unreachable
  }

  std::vector<std::uint8_t> hit(samples * blocks, 0);
  parallel_for(samples, options.workers, [&](std::size_t i) {
    std::vector<cf::Digit> digits(horizon);
    if (options.iid_digits) {
      IidGaussKuzminStream stream(seed, i);
      for (auto& d : digits) d = stream.next();
    } else {
      StreamOptions so;
      so.measure = options.measure;
      GaussDigitStream stream(seed, i, so);
      for (auto& d : digits) d = stream.next();
    }
    for (std::size_t b = 0; b < blocks; ++b) {
      if (thresholds[b] == 0) continue;
      const std::uint64_t n = std::uint64_t{1} << (m_lo + static_cast<int>(b));
      std::uint64_t c = 0;
      for (std::uint64_t k = 0; k < n && c < static_cast<std::uint64_t>(r); ++k) c += digits[k] >= thresholds[b];
      hit[i * blocks + b] = c >= static_cast<std::uint64_t>(r);
    }
  });

  DichotomyReport report;
  report.r = r;
  report.samples = samples;
  report.seed = seed;
  std::vector<std::uint8_t> any(samples, 0);
  const double ns = static_cast<double>(samples);
  for (std::size_t b = 0; b < blocks; ++b) {
    DichotomyRow row;
    row.m = m_lo + static_cast<int>(b);
    row.n = std::uint64_t{1} << row.m;
    row.threshold = thresholds[b];
    for (std::size_t i = 0; i < samples; ++i) {
      const bool h = hit[i * blocks + b];
      row.block_hits += h;
      any[i] = any[i] || h;
      row.cumulative_hits += any[i];
    }
    row.block_freq = static_cast<double>(row.block_hits) / ns;
    row.cum_freq = static_cast<double>(row.cumulative_hits) / ns;
    row.stderr_block = std::sqrt(row.block_freq * (1.0 - row.block_freq) / ns);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace cfdim
