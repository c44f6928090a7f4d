#include "cfdim/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cfdim/chebyshev.hpp"
#include "cfdim/errors.hpp"
#include "cfdim/parallel.hpp"
#include "cfdim/transfer.hpp"

namespace cfdim {

namespace {

void validate(const CantorSpec& spec) {
  if (spec.r < 1) throw DomainError("r must be >= 1");
  if (spec.bases.size() != static_cast<std::size_t>(spec.r) || spec.scales.size() != spec.bases.size()) {
    throw DomainError("need one base and one scale per offset");
  }
  for (std::size_t i = 0; i < spec.bases.size(); ++i) {
    if (!(spec.bases[i] > 1.0)) throw DomainError("bases must exceed 1");
    if (!(spec.scales[i] > 0.0)) throw DomainError("scales must be positive");
  }
  if (spec.filler_cap < 1) throw DomainError("filler cap must be >= 1");
  if (spec.occurrence.step < 1 || spec.occurrence.start < 1) throw DomainError("bad occurrence set");
}

TransferOperator window_operator(const ChebyshevGrid& grid, double t, const DigitWindow& w) {
  TransferOptions o;
  o.digits = {w.first, w.last};
  o.cap = 256;
  o.tail = TailMode::zeta;
  return TransferOperator(grid, t, o);
}

TransferOperator filler_operator(const ChebyshevGrid& grid, double t, cf::Digit M) {
  TransferOptions o;
  o.digits = {1, M};
  o.cap = M;
  o.tail = TailMode::none;
  return TransferOperator(grid, t, o);
}

}  // namespace

CantorSpec CantorSpec::uniform(int r, double B, cf::Digit M) {
  CantorSpec spec;
  spec.r = r;
  spec.bases.assign(static_cast<std::size_t>(std::max(r, 0)), B);
  spec.scales.assign(spec.bases.size(), 1.0);
  spec.filler_cap = M;
  return spec;
}

namespace {

// ceil that treats values within rounding of an integer as that integer
double snapped_ceil(double x) {
  const double r = std::nearbyint(x);
  return std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x)) ? r : std::ceil(x);
}

}  // namespace

std::vector<DigitWindow> windows(const CantorSpec& spec, std::uint64_t n) {
  validate(spec);
  if (!spec.occurrence.contains(n)) throw DomainError("generation " + std::to_string(n) + " is not in the occurrence set");
  std::vector<DigitWindow> out;
  for (int i = 0; i < spec.r; ++i) {
    const double log_lo = std::log(spec.scales[i]) + static_cast<double>(n) * std::log(spec.bases[i]);
    if (log_lo + std::log(2.0) > 62.0 * std::log(2.0)) throw BudgetError("window digits exceed 2^62");
    const double lo = std::exp(log_lo);
    DigitWindow w;
    w.first = static_cast<cf::Digit>(snapped_ceil(lo));
    const auto end = static_cast<cf::Digit>(snapped_ceil(2.0 * lo));  // exclusive
    if (end <= w.first) {
      throw DomainError("window at offset " + std::to_string(i) + " of generation " + std::to_string(n) + " is empty");
    }
    w.last = end - 1;
    out.push_back(w);
  }
  return out;
}

std::vector<cf::Cylinder> generate_cover(const CantorSpec& spec, std::uint64_t n, std::uint64_t budget,
                                         unsigned workers) {
  const std::vector<DigitWindow> win = windows(spec, n);
  double total = std::pow(static_cast<double>(spec.filler_cap), static_cast<double>(n - 1));
  for (const auto& w : win) total *= w.size();
  if (total > static_cast<double>(budget)) {
    throw BudgetError("generation " + std::to_string(n) + " has " + std::to_string(total) +
                      " cylinders; use a smaller filler cap or generation");
  }
  const std::size_t depth = static_cast<std::size_t>(n - 1) + win.size();
  // ranges per position
  std::vector<std::pair<cf::Digit, cf::Digit>> ranges;
  for (std::uint64_t k = 1; k < n; ++k) ranges.emplace_back(1, spec.filler_cap);
  for (const auto& w : win) ranges.emplace_back(w.first, w.last);

  const std::size_t leading = static_cast<std::size_t>(ranges[0].second - ranges[0].first + 1);
  std::vector<std::vector<cf::Cylinder>> parts(leading);
  parallel_for(leading, workers, [&](std::size_t lead) {
    std::vector<cf::Digit> word(depth);
    word[0] = ranges[0].first + lead;
    // odometer over positions 1..depth-1
    for (std::size_t k = 1; k < depth; ++k) word[k] = ranges[k].first;
    while (true) {
      parts[lead].push_back(cf::cylinder(cf::DigitWord(word)));
      std::size_t k = depth;
      while (k-- > 1) {
        if (word[k] < ranges[k].second) {
          ++word[k];
          break;
        }
        word[k] = ranges[k].first;
      }
      if (k == 0 || depth == 1) break;
    }
  });
  std::vector<cf::Cylinder> out;
  out.reserve(static_cast<std::size_t>(total));
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(out));
  return out;
}

double cover_exponent(std::span<const double> lengths, double tol) {
  if (lengths.empty()) throw DomainError("cover_exponent needs at least one interval");
  for (double l : lengths) {
    if (!(l > 0.0 && l <= 1.0)) throw DomainError("interval lengths must lie in (0, 1]");
  }
  // sorted summation makes the result independent of the input order
  std::vector<double> logs;
  logs.reserve(lengths.size());
  for (double l : lengths) logs.push_back(std::log(l));
  std::sort(logs.begin(), logs.end());
  auto sum = [&](double t) {
    double s = 0.0;
    for (double v : logs) s += std::exp(t * v);
    return s;
  };
  if (sum(0.0) <= 1.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (sum(hi) > 1.0) hi *= 2.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (sum(mid) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// Cover sums for all groupings at one generation, reusing the t-independent
// inner factors K_i = L_{1,W_i} ... L_{1,W_{r-1}} g.
class GenerationSums {
 public:
  GenerationSums(const CantorSpec& spec, std::uint64_t n, std::size_t grid_size)
      : spec_(spec), n_(n), grid_(grid_size), win_(windows(spec, n)) {
    const std::size_t size = grid_.size();
    std::vector<double> g(size);
    for (std::size_t j = 0; j < size; ++j) g[j] = 1.0 / (1.0 + grid_.nodes()[j]);
    inner_.assign(win_.size() + 1, {});
    inner_[win_.size()] = g;
    for (std::size_t i = win_.size(); i-- > 0;) {
      inner_[i] = window_operator(grid_, 1.0, win_[i]).apply(inner_[i + 1]);
    }
  }

  double operator()(double t, int group) const {
    std::vector<double> f = inner_[static_cast<std::size_t>(group)];
    for (double& v : f) v = std::pow(v, t);
    for (int i = group; i-- > 0;) f = window_operator(grid_, t, win_[static_cast<std::size_t>(i)]).apply(f);
    if (n_ > 1) {
      const TransferOperator filler = filler_operator(grid_, t, spec_.filler_cap);
      for (std::uint64_t k = 1; k < n_; ++k) f = filler.apply(f);
    }
    return f[0];
  }

 private:
  const CantorSpec& spec_;
  std::uint64_t n_;
  ChebyshevGrid grid_;
  std::vector<DigitWindow> win_;
  std::vector<std::vector<double>> inner_;
};

double solve_unit(const GenerationSums& sums, int group) {
  if (sums(0.0, group) <= 1.0 + 1e-12) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (sums(hi, group) > 1.0) {
    hi *= 2.0;
    if (hi > 64.0) throw ConvergenceError("cover sum does not fall below 1");
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (sums(mid, group) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double cover_sum(const CantorSpec& spec, std::uint64_t n, double t, int group, std::size_t grid_size) {
  if (group < 0 || group > spec.r) throw DomainError("group must lie in 0..r");
  return GenerationSums(spec, n, grid_size)(t, group);
}

FractalEstimate cover_dimension_estimate(const CantorSpec& spec, std::span<const std::uint64_t> generations,
                                         std::size_t grid_size) {
  validate(spec);
  if (generations.size() < 3) throw DomainError("cover_dimension_estimate needs at least 3 generations");
  for (std::size_t i = 1; i < generations.size(); ++i) {
    if (generations[i] <= generations[i - 1]) throw DomainError("generations must be increasing");
  }
  FractalEstimate out;
  std::vector<double> box_logs;  // (log count, -mean log length) of the grouped cover
  std::vector<double> box_scales;
  for (std::uint64_t n : generations) {
    const GenerationSums sums(spec, n, grid_size);
    GenerationRow row;
    row.n = n;
    row.count = sums(0.0, spec.r);
    row.total_length = sums(1.0, spec.r);
    row.t_n = 2.0;
    for (int i = 0; i < spec.r; ++i) {
      const double t = solve_unit(sums, i);
      if (t < row.t_n) {
        row.t_n = t;
        row.group = i;
      }
    }
    // mean log length of the grouped cover from d/dt log S at t = 0
    const double h = 1e-6;
    const double s0 = sums(0.0, row.group);
    const double mean_log = (std::log(sums(h, row.group)) - std::log(s0)) / h;
    row.box_ratio = mean_log < 0.0 ? std::log(s0) / -mean_log : 0.0;
    box_logs.push_back(std::log(s0));
    box_scales.push_back(-mean_log);
    out.rows.push_back(row);
  }
  const std::size_t k = out.rows.size();
  const double n1 = static_cast<double>(out.rows[k - 2].n), n2 = static_cast<double>(out.rows[k - 1].n);
  out.extrapolated = (n2 * out.rows[k - 1].t_n - n1 * out.rows[k - 2].t_n) / (n2 - n1);
  out.box_slope = (box_logs[k - 1] - box_logs[k - 2]) / (box_scales[k - 1] - box_scales[k - 2]);
  bool increasing = true, decreasing = true;
  for (std::size_t i = 1; i < k; ++i) {
    increasing = increasing && out.rows[i].t_n >= out.rows[i - 1].t_n;
    decreasing = decreasing && out.rows[i].t_n <= out.rows[i - 1].t_n;
  }
  out.low_confidence = !(increasing || decreasing);
  return out;
}

}  // namespace cfdim
