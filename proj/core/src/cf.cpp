#include "cfdim/cf.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cfdim/errors.hpp"

namespace cfdim::cf {

namespace {

void check_digits(std::span<const Digit> digits) {
  for (Digit d : digits) {
    if (d == 0) throw DomainError("partial quotients must be >= 1");
  }
}

mpz_class to_mpz(Digit d) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(Digit), 0, 0, &d);
  return z;
}

}  // namespace

DigitWord::DigitWord(std::vector<Digit> digits) : digits_(std::move(digits)) {
  check_digits(digits_);
}

DigitWord::DigitWord(std::initializer_list<Digit> digits) : digits_(digits) {
  check_digits(digits_);
}

DigitWord DigitWord::concat(const DigitWord& other) const {
  std::vector<Digit> out(digits_);
  out.insert(out.end(), other.digits_.begin(), other.digits_.end());
  return DigitWord(std::move(out));
}

DigitWord DigitWord::prefix(std::size_t n) const {
  if (n > digits_.size()) throw DomainError("prefix longer than word");
  return DigitWord(std::vector<Digit>(digits_.begin(), digits_.begin() + n));
}

DigitWord DigitWord::without(std::size_t index) const {
  if (index >= digits_.size()) throw DomainError("digit index out of range");
  std::vector<Digit> out(digits_);
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(index));
  return DigitWord(std::move(out));
}

std::string DigitWord::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (i) os << ", ";
    os << digits_[i];
  }
  os << ']';
  return os.str();
}

double log_of(const mpz_class& value) {
  if (sgn(value) <= 0) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2;
}

ConvergentState final_convergents(std::span<const Digit> digits) {
  check_digits(digits);
  ConvergentState st{0, 1, 1, 0};
  for (Digit d : digits) {
    const mpz_class a = to_mpz(d);
    mpz_class p = a * st.p + st.p_prev;
    mpz_class q = a * st.q + st.q_prev;
    st.p_prev = std::move(st.p);
    st.q_prev = std::move(st.q);
    st.p = std::move(p);
    st.q = std::move(q);
  }
  return st;
}

std::vector<ConvergentPair> convergents(const DigitWord& word) {
  std::vector<ConvergentPair> out;
  out.reserve(word.size());
  mpz_class p_prev = 1, q_prev = 0, p = 0, q = 1;
  for (Digit d : word.digits()) {
    const mpz_class a = to_mpz(d);
    mpz_class pn = a * p + p_prev;
    mpz_class qn = a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = pn;
    q = qn;
    out.push_back({p, q, log_of(q)});
  }
  return out;
}

mpq_class evaluate(const DigitWord& word) {
  const ConvergentState st = final_convergents(word.digits());
  mpq_class x(st.p, st.q);
  x.canonicalize();
  return x;
}

DigitWord expand_rational(const mpz_class& p, const mpz_class& q) {
  if (sgn(q) <= 0) throw DomainError("expand_rational: denominator must be positive");
  if (sgn(p) < 0 || p >= q) throw DomainError("expand_rational: need 0 <= p < q");
  std::vector<Digit> digits;
  // x = num/den in (0,1): a = floor(den/num), then x <- (den mod num)/num.
  mpz_class num = p, den = q;
  while (sgn(num) != 0) {
    mpz_class a, rem;
    mpz_fdiv_qr(a.get_mpz_t(), rem.get_mpz_t(), den.get_mpz_t(), num.get_mpz_t());
    if (!a.fits_ulong_p()) throw DomainError("expand_rational: partial quotient exceeds 64 bits");
    digits.push_back(a.get_ui());
    den = num;
    num = rem;
  }
  return DigitWord(std::move(digits));
}

DigitWord expand_rational(const mpq_class& x) {
  mpq_class c(x);
  c.canonicalize();
  return expand_rational(c.get_num(), c.get_den());
}

RealExpansion expand_real(double x, std::size_t depth) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("expand_real: need 0 <= x < 1");
  mpq_class exact(x);  // every double is a dyadic rational
  const DigitWord full = expand_rational(exact);
  RealExpansion out;
  out.reliable_depth = reliable_depth(std::numeric_limits<double>::digits);
  std::size_t n = std::min(depth, full.size());
  if (n > out.reliable_depth) {
    n = out.reliable_depth;
    out.truncated = true;
  }
  out.word = full.prefix(n);
  return out;
}

bool Cylinder::contains(const mpq_class& x) const {
  const bool above = closed_left ? x >= left : x > left;
  const bool below = closed_right ? x <= right : x < right;
  return above && below;
}

Cylinder cylinder(const DigitWord& word) {
  if (word.empty()) throw DomainError("cylinder: word must be non-empty");
  const ConvergentState st = final_convergents(word.digits());
  mpq_class exact_end(st.p, st.q);
  mpq_class other_end(st.p + st.p_prev, st.q + st.q_prev);
  exact_end.canonicalize();
  other_end.canonicalize();
  Cylinder c;
  c.word = word;
  if (word.size() % 2 == 0) {
    c.left = exact_end;
    c.right = other_end;
    c.closed_left = true;
  } else {
    c.left = other_end;
    c.right = exact_end;
    c.closed_right = true;
  }
  return c;
}

DigitRemovalRatio remove_digit_ratio(const DigitWord& word, std::size_t k) {
  if (k < 1 || k > word.size()) throw DomainError("remove_digit_ratio: need 1 <= k <= n");
  const mpz_class q_full = final_convergents(word.digits()).q;
  const DigitWord reduced = word.without(k - 1);
  const mpz_class q_reduced = final_convergents(reduced.digits()).q;
  DigitRemovalRatio out;
  out.ratio = mpq_class(q_full, q_reduced);
  out.ratio.canonicalize();
  const mpz_class ak = to_mpz(word[k - 1]);
  out.lower_bound = mpq_class(ak + 1, 2);
  out.lower_bound.canonicalize();
  out.upper_bound = mpq_class(ak + 1);
  // closed on the right: [a, 1] with k = 1 gives exactly a + 1
  out.within = out.ratio >= out.lower_bound && out.ratio <= out.upper_bound;
  return out;
}

double gauss_measure(const mpq_class& a, const mpq_class& b) {
  if (a < 0 || b > 1 || a > b) throw DomainError("gauss_measure: need 0 <= a <= b <= 1");
  const mpq_class ratio = (b - a) / (1 + a);
  return std::log1p(ratio.get_d()) / std::numbers::ln2;
}

double gauss_measure(double a, double b) {
  if (!(a >= 0.0 && b <= 1.0 && a <= b)) throw DomainError("gauss_measure: need 0 <= a <= b <= 1");
  return std::log1p((b - a) / (1.0 + a)) / std::numbers::ln2;
}

double gauss_kuzmin(Digit k) {
  if (k == 0) throw DomainError("gauss_kuzmin: digit must be >= 1");
  const double kk = static_cast<double>(k);
  return std::log1p(1.0 / (kk * (kk + 2.0))) / std::numbers::ln2;
}

}  // namespace cfdim::cf
