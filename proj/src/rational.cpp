#include "dvr/rational.hpp"

#include <cctype>
#include <limits>

namespace dvr {
namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

u128 uabs(i128 x) { return x < 0 ? u128(0) - u128(x) : u128(x); }

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(i128 x) { return x >= kMin && x <= kMax; }

mpz_class mpz_from(i128 x) {
  u128 m = uabs(x);
  std::uint64_t words[2] = {std::uint64_t(m), std::uint64_t(m >> 64)};
  mpz_class z;
  mpz_import(z.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, words);
  if (x < 0) z = -z;
  return z;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw DomainError("rational with zero denominator");
  *this = from_i128(n, d);
}

Rational::Rational(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  if (c.get_num().fits_slong_p() && c.get_den().fits_slong_p()) {
    num_ = c.get_num().get_si();
    den_ = c.get_den().get_si();
  } else {
    big_ = std::make_shared<const mpq_class>(c);
  }
}

Rational Rational::from_i128(i128 n, i128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  u128 g = gcd128(uabs(n), u128(d));
  if (g > 1) {
    n /= i128(g);
    d /= i128(g);
  }
  Rational r;
  if (fits64(n) && fits64(d)) {
    r.num_ = std::int64_t(n);
    r.den_ = std::int64_t(d);
    return r;
  }
  mpq_class q(mpz_from(n), mpz_from(d));
  r.big_ = std::make_shared<const mpq_class>(q);
  return r;
}

void Rational::normalize_big() {
  if (!big_) return;
  const mpq_class& q = *big_;
  if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p()) {
    num_ = q.get_num().get_si();
    den_ = q.get_den().get_si();
    big_.reset();
  }
}

Rational Rational::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw InputError("empty rational literal");
  auto valid_int = [](const std::string& t) {
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto slash = s.find('/');
  std::string ns = s.substr(0, slash);
  std::string ds = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(ns) || !valid_int(ds) || ds[0] == '-' || ds[0] == '+')
    throw InputError("bad rational literal '" + std::string(text) + "'");
  if (ns[0] == '+') ns.erase(0, 1);
  mpz_class n(ns), d(ds);
  if (d == 0) throw InputError("rational literal with zero denominator");
  return Rational(mpq_class(n, d));
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  mpq_class q(mpz_from(num_), mpz_from(den_));
  return q;
}

std::string Rational::to_string() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

double Rational::to_double() const {
  if (big_) return big_->get_d();
  return double(num_) / double(den_);
}

std::int64_t Rational::floor() const {
  if (big_) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
    return f.get_si();
  }
  std::int64_t q = num_ / den_;
  if ((num_ % den_ != 0) && (num_ < 0)) --q;
  return q;
}

Rational Rational::operator-() const {
  if (big_) return Rational(mpq_class(-*big_));
  if (num_ == kMin) return from_i128(-i128(num_), den_);
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rational Rational::inv() const {
  if (is_zero()) throw DomainError("inverse of zero");
  if (big_) return Rational(mpq_class(1 / *big_));
  return from_i128(den_, num_);
}

Rational operator+(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.den_ == b.den_) return Rational::from_i128(i128(a.num_) + b.num_, a.den_);
    return Rational::from_i128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                               i128(a.den_) * b.den_);
  }
  return Rational(mpq_class(a.to_mpq() + b.to_mpq()));
}

Rational operator-(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.den_ == b.den_) return Rational::from_i128(i128(a.num_) - b.num_, a.den_);
    return Rational::from_i128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                               i128(a.den_) * b.den_);
  }
  return Rational(mpq_class(a.to_mpq() - b.to_mpq()));
}

Rational operator*(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.num_ == 0 || b.num_ == 0) return Rational();
    if (a.den_ == 1 && b.den_ == 1) {
      i128 p = i128(a.num_) * b.num_;
      if (fits64(p)) return Rational(std::int64_t(p));
      return Rational::from_i128(p, 1);
    }
    return Rational::from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  return Rational(mpq_class(a.to_mpq() * b.to_mpq()));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  if (!a.big_ && !b.big_)
    return Rational::from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  return Rational(mpq_class(a.to_mpq() / b.to_mpq()));
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (bool(a.big_) != bool(b.big_)) return false;  // both canonical
  return *a.big_ == *b.big_;
}

int compare(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    i128 l = i128(a.num_) * b.den_, r = i128(b.num_) * a.den_;
    return (l > r) - (l < r);
  }
  return cmp(a.to_mpq(), b.to_mpq());
}

Rational abs(const Rational& a) { return a.sign() < 0 ? -a : a; }

}  // namespace dvr
