#include <cctype>
#include <charconv>
#include <fstream>
#include <string>

#include "cfdim/errors.hpp"
#include "cfdim/thresholds.hpp"

namespace cfdim {

namespace {

class PsiParser {
 public:
  explicit PsiParser(std::string_view text) : text_(text) {}

  ThresholdFn parse_all() {
    ThresholdFn fn = parse();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return fn;
  }

 private:
  ThresholdFn parse() {
    skip_space();
    const std::string name = identifier();
    skip_space();
    if (name == "table") {
      expect(':');
      return load_table(std::string(trim(text_.substr(pos_))));
    }
    expect('(');
    ThresholdFn fn = [&] {
      if (name == "poly_log") {
        const double a = number();
        expect(',');
        return ThresholdFn::poly_log(a, number());
      }
      if (name == "geometric") return ThresholdFn::geometric(number());
      if (name == "double_exp") {
        const double c = number();
        expect(',');
        return ThresholdFn::double_exp(c, number());
      }
      if (name == "scaled_geometric") {
        const double d = number();
        expect(',');
        return ThresholdFn::scaled_geometric(d, parse());
      }
      if (name == "envelope") return monotone_envelope(parse());
      fail("unknown threshold kind '" + name + "'");
    }();
    expect(')');
    return fn;
  }

  ThresholdFn load_table(const std::string& path) {
    pos_ = text_.size();
    if (path.empty()) fail("table: needs a file name");
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open threshold table '" + path + "'");
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
      const std::string_view v = trim(line);
      if (v.empty() || v.front() == '#') continue;
      values.push_back(std::stod(std::string(v)));
    }
    bool sorted = true;
    for (std::size_t i = 1; i < values.size(); ++i) sorted = sorted && values[i - 1] <= values[i];
    MonotoneHint hint;
    if (sorted) hint.kind = MonotoneHint::Kind::nondecreasing;
    return ThresholdFn::table(std::move(values), hint, path);
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected a threshold kind");
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    skip_space();
    double v = 0.0;
    const char* first = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, text_.data() + text_.size(), v);
    if (ec != std::errc()) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("bad threshold '" + std::string(text_) + "': " + what + " at offset " + std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ThresholdFn parse_psi(std::string_view text) { return PsiParser(text).parse_all(); }

}  // namespace cfdim
