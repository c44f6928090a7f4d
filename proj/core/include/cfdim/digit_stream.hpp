#pragma once

// Exact lazy sampling of continued-fraction digit sequences.
//
// After digits a_1..a_k have been emitted, the conditional law of T^k x on
// [0,1) has density proportional to 1 / ((1 + t1 y)(1 + t2 y)) with
//   t1 = q_{k-1}/q_k,  t2 = (q_{k-1} + p_{k-1}) / (q_k + p_k)   (Gauss measure)
//   t1 = t2 = q_{k-1}/q_k                                       (Lebesgue)
// so the next digit is drawn by inverting that conditional distribution with
// fresh uniform bits. A digit is emitted only once the uniform's dyadic
// enclosure lies strictly inside one digit's CDF interval, which makes the
// emitted process exactly distributed as the chosen measure. Ties that double
// arithmetic cannot resolve are settled with exact convergents and MPFR.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cfdim/cf.hpp"
#include "cfdim/rng.hpp"

namespace cfdim {

enum class SamplingMeasure { gauss, lebesgue };

struct StreamOptions {
  SamplingMeasure measure = SamplingMeasure::gauss;
  std::size_t max_bits_per_digit = 4096;
  bool force_exact = false;  // always take the multiprecision path (testing)
};

class GaussDigitStream {
 public:
  GaussDigitStream(std::uint64_t seed, std::uint64_t stream_index, StreamOptions options = {});

  cf::Digit next();

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }
  std::uint64_t bits_consumed() const noexcept { return bits_consumed_; }
  std::size_t digits_emitted() const noexcept { return history_.size(); }
  const std::vector<cf::Digit>& history() const noexcept { return history_; }
  std::uint64_t exact_fallbacks() const noexcept { return exact_fallbacks_; }

  // Cylinder of the emitted prefix: exact rational enclosure of the sampled point.
  cf::Cylinder enclosure() const;

 private:
  double tail_probability(double a) const;  // P(next digit >= a), double path
  cf::Digit decide_exact(std::uint64_t first_word, cf::Digit guess);
  void advance(cf::Digit a);

  std::uint64_t seed_;
  std::uint64_t stream_index_;
  StreamOptions options_;
  CounterBits bits_;
  std::uint64_t bits_consumed_ = 0;
  std::uint64_t exact_fallbacks_ = 0;
  std::vector<cf::Digit> history_;

  // Conditional-law state; delta = t1 - t2 is carried separately because it
  // decays like q_k^-2 and would be lost to cancellation.
  double t1_;
  double t2_;
  double delta_;
  double t_err_ = 0.0;      // absolute error bound on t1_, t2_
  double delta_rel_ = 0.0;  // relative error bound on delta_
};

// Independent Gauss-Kuzmin digits (the digits of a mu-random point are not
// independent; this is the faster surrogate model).
class IidGaussKuzminStream {
 public:
  IidGaussKuzminStream(std::uint64_t seed, std::uint64_t stream_index) : bits_(seed, stream_index) {}
  cf::Digit next();

 private:
  CounterBits bits_;
};

}  // namespace cfdim
