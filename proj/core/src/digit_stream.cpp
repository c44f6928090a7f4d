#include "cfdim/digit_stream.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <mpfr.h>

#include "cfdim/errors.hpp"

namespace cfdim {

namespace {

constexpr double kUnitRoundoff = 0x1p-53;
constexpr cf::Digit kMaxDigit = cf::Digit{1} << 62;
constexpr int kRefineBits = 32;

// log1p(z)/z, continuous at 0.
double log1p_ratio(double z) {
  if (std::abs(z) < 1e-8) return 1.0 - z / 2.0 + z * z / 3.0;
  return std::log1p(z) / z;
}

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }

 private:
  mpfr_t v_;
};

// Multiprecision evaluation of P(next digit >= a) from the exact state.
class ExactTail {
 public:
  ExactTail(const mpq_class& t2, const mpq_class& delta, mpfr_prec_t prec)
      : prec_(prec), t2_(prec), delta_(prec), norm_(prec) {
    mpfr_set_q(t2_.get(), t2.get_mpq_t(), MPFR_RNDN);
    mpfr_set_q(delta_.get(), delta.get_mpq_t(), MPFR_RNDN);
    // norm = phi(delta/(1+t2)) / (1+t2)
    Mpfr one_plus(prec_);
    mpfr_add_ui(one_plus.get(), t2_.get(), 1, MPFR_RNDN);
    phi_over(norm_.get(), one_plus.get());
  }

  // out = P(digit >= a)
  void operator()(mpfr_ptr out, const mpz_class& a) {
    if (a == 1) {
      mpfr_set_ui(out, 1, MPFR_RNDN);
      return;
    }
    Mpfr denom(prec_);
    mpfr_set_z(denom.get(), a.get_mpz_t(), MPFR_RNDN);
    mpfr_add(denom.get(), denom.get(), t2_.get(), MPFR_RNDN);
    phi_over(out, denom.get());
    mpfr_div(out, out, norm_.get(), MPFR_RNDN);
  }

 private:
  // out = phi(delta/denom) / denom
  void phi_over(mpfr_ptr out, mpfr_srcptr denom) {
    Mpfr z(prec_);
    mpfr_div(z.get(), delta_.get(), denom, MPFR_RNDN);
    if (mpfr_zero_p(z.get())) {
      mpfr_ui_div(out, 1, denom, MPFR_RNDN);
      return;
    }
    Mpfr l(prec_);
    mpfr_log1p(l.get(), z.get(), MPFR_RNDN);
    mpfr_div(l.get(), l.get(), z.get(), MPFR_RNDN);
    mpfr_div(out, l.get(), denom, MPFR_RNDN);
  }

  mpfr_prec_t prec_;
  Mpfr t2_;
  Mpfr delta_;
  Mpfr norm_;
};

}  // namespace

GaussDigitStream::GaussDigitStream(std::uint64_t seed, std::uint64_t stream_index, StreamOptions options)
    : seed_(seed), stream_index_(stream_index), options_(options), bits_(seed, stream_index) {
  if (options_.measure == SamplingMeasure::gauss) {
    t1_ = 0.0;
    t2_ = 1.0;
    delta_ = -1.0;
  } else {
    t1_ = t2_ = delta_ = 0.0;
  }
}

double GaussDigitStream::tail_probability(double a) const {
  if (a <= 1.0) return 1.0;
  const double lead = (1.0 + t2_) / (a + t2_);
  return lead * log1p_ratio(delta_ / (a + t2_)) / log1p_ratio(delta_ / (1.0 + t2_));
}

void GaussDigitStream::advance(cf::Digit a) {
  history_.push_back(a);
  const double ad = static_cast<double>(a);
  if (options_.measure == SamplingMeasure::lebesgue) {
    t2_ = 1.0 / (ad + t2_);
    t1_ = t2_;
    t_err_ = t_err_ * t2_ * t2_ + 2.0 * kUnitRoundoff * t2_;
    return;
  }
  const double n1 = 1.0 / (ad + t1_);
  const double n2 = 1.0 / (ad + t2_);
  delta_ = -delta_ * n1 * n2;
  delta_rel_ += 6.0 * kUnitRoundoff + t_err_ * (n1 + n2);
  const double m = std::max(n1, n2);
  t_err_ = t_err_ * m * m + 2.0 * kUnitRoundoff * m;
  t1_ = n1;
  t2_ = n2;
}

cf::Digit GaussDigitStream::next() {
  const std::uint64_t u = bits_.next();
  bits_consumed_ += 64;

  if (options_.force_exact || u == 0) {
    const cf::Digit d = decide_exact(u, 1);
    advance(d);
    return d;
  }

  // Conservative double enclosure of U in [u, u+1) * 2^-64.
  const double lo = std::nextafter(static_cast<double>(u), 0.0) * 0x1p-64;
  const double hi = std::nextafter(static_cast<double>(u) + 1.0, 2.0 * static_cast<double>(u) + 2.0) * 0x1p-64;
  const double mid = 0.5 * (lo + hi);
  const double eps = 1e-13 + 4.0 * t_err_ + 2.0 * std::abs(delta_) * delta_rel_;

  // Largest a with P(digit >= a) >= mid: galloping search from an estimate
  // that is exact when delta = 0.
  double estimate = std::floor((1.0 + t2_) / mid - t2_);
  if (!(estimate < static_cast<double>(kMaxDigit))) {
    const cf::Digit d = decide_exact(u, kMaxDigit);
    advance(d);
    return d;
  }
  cf::Digit a = static_cast<cf::Digit>(std::max(1.0, estimate));
  if (tail_probability(static_cast<double>(a)) >= mid) {
    cf::Digit step = 1;
    while (a + step < kMaxDigit && tail_probability(static_cast<double>(a + step)) >= mid) {
      a += step;
      step *= 2;
    }
    cf::Digit hi_a = std::min(a + step, kMaxDigit);  // P(hi_a) < mid unless capped
    while (hi_a - a > 1) {
      const cf::Digit m = a + (hi_a - a) / 2;
      if (tail_probability(static_cast<double>(m)) >= mid) a = m; else hi_a = m;
    }
  } else {
    cf::Digit lo_a = a;  // P(lo_a) < mid
    cf::Digit step = 1;
    while (lo_a > 1) {
      const cf::Digit cand = lo_a > step ? lo_a - step : 1;
      if (tail_probability(static_cast<double>(cand)) >= mid) {
        a = cand;
        break;
      }
      lo_a = cand;
      step *= 2;
    }
    if (lo_a == 1) a = 1;
    while (lo_a - a > 1) {
      const cf::Digit m = a + (lo_a - a) / 2;
      if (tail_probability(static_cast<double>(m)) >= mid) a = m; else lo_a = m;
    }
  }

  const double upper_cut = tail_probability(static_cast<double>(a));
  const double lower_cut = tail_probability(static_cast<double>(a) + 1.0);
  const bool below_upper = a == 1 || hi <= upper_cut * (1.0 - eps);
  const bool above_lower = lo >= lower_cut * (1.0 + eps);
  if (below_upper && above_lower && a < kMaxDigit) {
    advance(a);
    return a;
  }
  const cf::Digit d = decide_exact(u, a);
  advance(d);
  return d;
}

cf::Digit GaussDigitStream::decide_exact(std::uint64_t first_word, cf::Digit guess) {
  ++exact_fallbacks_;
  const cf::ConvergentState st = cf::final_convergents(history_);
  mpq_class t2, delta;
  if (options_.measure == SamplingMeasure::gauss) {
    t2 = mpq_class(st.q_prev + st.p_prev, st.q + st.p);
    mpq_class t1(st.q_prev, st.q);
    t1.canonicalize();
    t2.canonicalize();
    delta = t1 - t2;
  } else {
    t2 = mpq_class(st.q_prev, st.q);
    t2.canonicalize();
    delta = 0;
  }

  mpz_class numer(static_cast<unsigned long>(first_word));
  std::size_t nbits = 64;
  mpz_class a(static_cast<unsigned long>(std::max<cf::Digit>(guess, 1)));
  const mpz_class max_digit(static_cast<unsigned long>(kMaxDigit));

  for (;;) {
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(nbits + 160);
    ExactTail tail(t2, delta, prec);
    Mpfr u_lo(prec), u_hi(prec), u_mid(prec), c_hi(prec), c_lo(prec), slack(prec), bound(prec);
    mpfr_set_z_2exp(u_lo.get(), numer.get_mpz_t(), -static_cast<long>(nbits), MPFR_RNDN);
    const mpz_class numer_up = numer + 1;
    mpfr_set_z_2exp(u_hi.get(), numer_up.get_mpz_t(), -static_cast<long>(nbits), MPFR_RNDN);
    mpfr_add(u_mid.get(), u_lo.get(), u_hi.get(), MPFR_RNDN);
    mpfr_div_2ui(u_mid.get(), u_mid.get(), 1, MPFR_RNDN);
    // Relative error budget for a handful of correctly rounded operations.
    mpfr_set_ui_2exp(slack.get(), 1, -(prec - 24), MPFR_RNDN);

    auto at_least_mid = [&](const mpz_class& cand) {
      tail(c_hi.get(), cand);
      return mpfr_cmp(c_hi.get(), u_mid.get()) >= 0;
    };

    // Relocate a if the current candidate is inconsistent with the midpoint.
    if (!at_least_mid(a)) {
      mpz_class hi_a = a, step = 1;
      while (a > 1) {
        a = hi_a > step ? mpz_class(hi_a - step) : mpz_class(1);
        if (at_least_mid(a)) break;
        hi_a = a;
        step *= 2;
      }
      while (hi_a - a > 1) {
        const mpz_class m = a + (hi_a - a) / 2;
        if (at_least_mid(m)) a = m; else hi_a = m;
      }
    } else {
      mpz_class step = 1;
      mpz_class hi_a = a + step;
      while (hi_a <= max_digit && at_least_mid(hi_a)) {
        a = hi_a;
        step *= 2;
        hi_a = a + step;
      }
      while (hi_a - a > 1) {
        const mpz_class m = a + (hi_a - a) / 2;
        if (at_least_mid(m)) a = m; else hi_a = m;
      }
    }
    if (a >= max_digit) throw BudgetError("sampled partial quotient exceeds 2^62");

    tail(c_hi.get(), a);
    tail(c_lo.get(), mpz_class(a + 1));
    bool below_upper = a == 1;
    if (!below_upper) {
      mpfr_mul(bound.get(), c_hi.get(), slack.get(), MPFR_RNDN);
      mpfr_sub(bound.get(), c_hi.get(), bound.get(), MPFR_RNDN);
      below_upper = mpfr_cmp(u_hi.get(), bound.get()) <= 0;
    }
    mpfr_mul(bound.get(), c_lo.get(), slack.get(), MPFR_RNDN);
    mpfr_add(bound.get(), c_lo.get(), bound.get(), MPFR_RNDN);
    const bool above_lower = mpfr_cmp(u_lo.get(), bound.get()) >= 0;
    if (below_upper && above_lower) return a.get_ui();

    if (nbits + kRefineBits > options_.max_bits_per_digit) {
      throw BudgetError("digit sampler exceeded its per-digit bit budget");
    }
    numer <<= kRefineBits;
    numer += static_cast<unsigned long>(bits_.next() >> (64 - kRefineBits));
    nbits += kRefineBits;
    bits_consumed_ += kRefineBits;
  }
}

cf::Cylinder GaussDigitStream::enclosure() const {
  if (history_.empty()) {
    cf::Cylinder whole;
    whole.left = 0;
    whole.right = 1;
    whole.closed_left = true;
    return whole;
  }
  return cf::cylinder(cf::DigitWord(history_));
}

cf::Digit IidGaussKuzminStream::next() {
  const std::uint64_t u = bits_.next();
  const double uniform = (static_cast<double>(u >> 11) + 0.5) * 0x1p-53;
  // P(a >= k) = log2(1 + 1/k)  =>  a = floor(1 / (2^U - 1)).
  const double a = std::floor(1.0 / std::expm1(uniform * std::numbers::ln2));
  if (!(a < static_cast<double>(kMaxDigit))) throw BudgetError("sampled partial quotient exceeds 2^62");
  return static_cast<cf::Digit>(std::max(1.0, a));
}

}  // namespace cfdim
