#pragma once

// Exact continued-fraction arithmetic on [0, 1): expansions, convergents,
// cylinder sets and the Gauss measure.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace cfdim::cf {

using Digit = std::uint64_t;

// A finite word of partial quotients a_1..a_n, every digit >= 1.
// The empty word stands for the whole interval [0, 1).
class DigitWord {
 public:
  DigitWord() = default;
  explicit DigitWord(std::vector<Digit> digits);
  DigitWord(std::initializer_list<Digit> digits);

  std::size_t size() const noexcept { return digits_.size(); }
  bool empty() const noexcept { return digits_.empty(); }
  Digit operator[](std::size_t i) const { return digits_[i]; }
  std::span<const Digit> digits() const noexcept { return digits_; }

  DigitWord concat(const DigitWord& other) const;
  DigitWord prefix(std::size_t n) const;
  DigitWord without(std::size_t index) const;

  // "[a1, a2, ...]"
  std::string to_string() const;

  friend bool operator==(const DigitWord&, const DigitWord&) = default;

 private:
  std::vector<Digit> digits_;
};

struct ConvergentPair {
  mpz_class p;
  mpz_class q;
  double log_q = 0.0;  // natural log of q
};

// (p_k, q_k) for k = 1..n, seeded with p_{-1}=1, q_{-1}=0, p_0=0, q_0=1.
std::vector<ConvergentPair> convergents(const DigitWord& word);

// (p_n, q_n, p_{n-1}, q_{n-1}) of the full word; the empty word gives (0, 1, 1, 0).
struct ConvergentState {
  mpz_class p, q, p_prev, q_prev;
};
ConvergentState final_convergents(std::span<const Digit> digits);

double log_of(const mpz_class& value);

// Value of the finite fraction [0; a_1, ..., a_n].
mpq_class evaluate(const DigitWord& word);

// Canonical expansion of p/q in [0, 1): the last digit is >= 2 when length >= 2.
DigitWord expand_rational(const mpz_class& p, const mpz_class& q);
DigitWord expand_rational(const mpq_class& x);

// Digits of a binary floating point number are only trusted up to
// floor(precision_bits / 2.4).
constexpr std::size_t reliable_depth(int precision_bits) noexcept {
  return static_cast<std::size_t>(precision_bits * 5 / 12);
}

struct RealExpansion {
  DigitWord word;
  bool truncated = false;  // requested depth exceeded the reliable depth
  std::size_t reliable_depth = 0;
};

// Expands the exact value of x, stopping at `depth` digits or at the reliable
// depth for double precision, whichever comes first.
RealExpansion expand_real(double x, std::size_t depth);

// The cylinder I_n(word): all x whose expansion starts with `word`.
// Endpoints are p_n/q_n and (p_n + p_{n-1})/(q_n + q_{n-1}); the endpoint
// p_n/q_n is the closed one and is on the left for even n.
struct Cylinder {
  DigitWord word;
  mpq_class left;
  mpq_class right;
  bool closed_left = false;
  bool closed_right = false;

  mpq_class length() const { return right - left; }
  bool contains(const mpq_class& x) const;
};

Cylinder cylinder(const DigitWord& word);

struct DigitRemovalRatio {
  mpq_class ratio;        // q_n(a) / q_{n-1}(a with a_k removed)
  mpq_class lower_bound;  // (a_k + 1) / 2
  mpq_class upper_bound;  // a_k + 1
  bool within = false;    // lower_bound <= ratio <= upper_bound
};

// k is 1-based.
DigitRemovalRatio remove_digit_ratio(const DigitWord& word, std::size_t k);

// Gauss measure of [a, b]: (ln(1+b) - ln(1+a)) / ln 2.
double gauss_measure(const mpq_class& a, const mpq_class& b);
double gauss_measure(double a, double b);

// Gauss-Kuzmin law: mu(a_1 = k) = log2(1 + 1/(k(k+2))).
double gauss_kuzmin(Digit k);

}  // namespace cfdim::cf
