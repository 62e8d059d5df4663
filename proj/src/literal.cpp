#include "dvr/literal.hpp"

#include <cctype>
#include <string>

#include "dvr/errors.hpp"

namespace dvr {
namespace {

using Poly = std::map<std::pair<int, Rational>, Rational>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r;
  for (auto& [ka, ca] : a)
    for (auto& [kb, cb] : b) {
      auto& slot = r[{ka.first + kb.first, ka.second + kb.second}];
      slot += ca * cb;
    }
  std::erase_if(r, [](auto& kv) { return kv.second.is_zero(); });
  return r;
}

void poly_add_into(Poly& a, const Poly& b, int sign) {
  for (auto& [k, c] : b) a[k] += sign > 0 ? c : -c;
  std::erase_if(a, [](auto& kv) { return kv.second.is_zero(); });
}

class Parser {
 public:
  explicit Parser(std::string_view text) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
    src_ = std::string(text);
  }

  ParsedPoly run() {
    if (s_.empty()) fail("empty expression");
    ParsedPoly out;
    out.terms = expr(true, &out.u_precision);
    if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    out.mentions_T = saw_T_;
    out.mentions_u = saw_u_;
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError(msg + " in '" + src_ + "'");
  }
  bool at(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  bool eat(char c) {
    if (at(c)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  std::string digits() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return s_.substr(start, pos_ - start);
  }

  long long integer() {
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    std::string d = digits();
    if (d.size() > 9) fail("exponent too large");
    long long v = std::stoll(d);
    return neg ? -v : v;
  }

  Rational exponent_rational() {
    if (eat('(')) {
      long long n = integer();
      long long d = 1;
      if (eat('/')) d = integer();
      expect(')');
      if (d == 0) fail("zero denominator in exponent");
      return Rational(n, d);
    }
    return Rational(std::int64_t(integer()));
  }

  int exponent_int() {
    if (eat('(')) {
      long long v = integer();
      expect(')');
      return int(v);
    }
    return int(integer());
  }

  Poly expr(bool top, std::optional<int>* oterm) {
    Poly acc;
    bool first = true;
    while (true) {
      int sign = 1;
      if (eat('-')) sign = -1;
      else if (!eat('+') && !first) break;
      if (first && pos_ >= s_.size()) fail("dangling sign");
      first = false;
      if (at('O')) {
        if (!top || !oterm) fail("O-term only allowed at top level");
        ++pos_;
        expect('(');
        if (!eat('u')) fail("O-term must be O(u^N)");
        int n = 1;
        if (eat('^')) n = exponent_int();
        expect(')');
        if (sign < 0) fail("negative O-term");
        if (*oterm) fail("duplicate O-term");
        *oterm = n;
        saw_u_ = true;
      } else {
        if (oterm && *oterm) fail("terms after O-term");
        poly_add_into(acc, term(), sign);
      }
      if (!at('+') && !at('-')) break;
    }
    return acc;
  }

  Poly term() {
    Poly p = factor();
    while (eat('*')) p = poly_mul(p, factor());
    return p;
  }

  Poly factor() {
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly inner = expr(false, nullptr);
      expect(')');
      return inner;
    }
    if (c == 'T') {
      ++pos_;
      saw_T_ = true;
      Rational e(1);
      if (eat('^')) e = exponent_rational();
      return Poly{{{0, e}, Rational(1)}};
    }
    if (c == 'u') {
      ++pos_;
      saw_u_ = true;
      int e = 1;
      if (eat('^')) e = exponent_int();
      return Poly{{{0 + e, Rational(0)}, Rational(1)}};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string n = digits();
      std::string d = "1";
      if (at('/') ) {
        ++pos_;
        d = digits();
      }
      Rational v = Rational::parse(n + "/" + d);
      if (v.is_zero()) return Poly{};
      return Poly{{{0, Rational(0)}, v}};
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string s_;
  std::string src_;
  std::size_t pos_ = 0;
  bool saw_T_ = false;
  bool saw_u_ = false;
};

}  // namespace

ParsedPoly parse_poly(std::string_view text) { return Parser(text).run(); }

}  // namespace dvr
