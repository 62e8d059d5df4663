#pragma once

#include <climits>
#include <string>
#include <utility>
#include <vector>

#include "dvr/field.hpp"

namespace dvr {

enum class SeriesKind { power, laurent, tail };

// Precision value meaning "no truncation": an exact (finite) series.
inline constexpr int kExact = INT_MAX;
// Working precision applied when an exact series must be inverted.
inline constexpr int kDefaultPrecision = 16;

// Saturating precision arithmetic (kExact absorbs).
inline int prec_add(int p, int s) {
  if (p == kExact || s == kExact) return kExact;
  long long v = (long long)p + s;
  if (v >= kExact) return kExact - 1;
  if (v <= INT_MIN / 2) return INT_MIN / 2;
  return int(v);
}

struct Valuation {
  enum class Kind { finite, infinite, at_least };
  Kind kind = Kind::infinite;
  int value = 0;  // exponent for finite, bound N for at_least

  static Valuation finite(int v) { return {Kind::finite, v}; }
  static Valuation infinite() { return {Kind::infinite, 0}; }
  static Valuation at_least(int n) { return {Kind::at_least, n}; }

  bool is_finite() const { return kind == Kind::finite; }
  bool is_infinite() const { return kind == Kind::infinite; }
  bool is_at_least() const { return kind == Kind::at_least; }
  // Largest certified lower bound (finite value, or N for at_least).
  int lower_bound() const { return kind == Kind::infinite ? kExact : value; }
  std::string to_string() const;
  friend bool operator==(const Valuation&, const Valuation&) = default;
};

// Series in u: K[[u]] (power), K((u)) (laurent) or an element of
// 𝔽 = K((u))/uK[[u]] (tail).  Power/laurent terms with exponent >= precision
// are unknown; tails are exact and only carry exponents <= 0.
template <class F>
class USeries {
 public:
  using Term = std::pair<int, F>;

  USeries() = default;
  explicit USeries(SeriesKind kind) : kind_(kind) {}

  static USeries zero(SeriesKind kind = SeriesKind::power) { return USeries(kind); }
  static USeries constant(const F& c, SeriesKind kind = SeriesKind::power);
  static USeries monomial(const F& c, int exp, SeriesKind kind = SeriesKind::power);
  // Terms may be unsorted and repeated; they are merged and zeros dropped.
  static USeries from_terms(std::vector<Term> terms, int precision = kExact,
                            SeriesKind kind = SeriesKind::power);
  // O(u^n).
  static USeries unknown(int n, SeriesKind kind = SeriesKind::power);

  SeriesKind kind() const { return kind_; }
  int precision() const { return prec_; }
  bool exact() const { return prec_ == kExact; }
  const std::vector<Term>& terms() const { return terms_; }
  // No stored coefficient (exact zero or O(u^N)).
  bool no_terms() const { return terms_.empty(); }
  bool is_exact_zero() const { return terms_.empty() && prec_ == kExact; }
  int min_exponent() const { return terms_.front().first; }
  int max_exponent() const { return terms_.back().first; }

  // Coefficient of u^k; raises PrecisionError if k is not below precision.
  F coefficient(int k) const;
  Valuation valuation() const;

  USeries operator-() const;
  USeries operator+(const USeries& o) const;
  USeries operator-(const USeries& o) const;
  USeries operator*(const USeries& o) const;
  USeries& operator+=(const USeries& o) { return *this = *this + o; }
  USeries& operator-=(const USeries& o) { return *this = *this - o; }
  USeries scaled(const F& c) const;

  // Multiplicative inverse; exact non-monomial inputs are truncated at `cap`.
  USeries inv(int cap = kDefaultPrecision) const;
  // Multiply by u^k (k may be negative).  For power kind the result must
  // have no negative exponent; a negative shift must be an exact division.
  USeries shifted(int k) const;
  // Lower the precision to n (drop exponents >= n).
  USeries truncated(int n) const;

  USeries localise() const;
  USeries tail_project() const;
  USeries tail_u_mul(int k) const;

  // Structural equality (kind, coefficients, precision).
  bool operator==(const USeries& o) const;
  // this - o has no stored coefficient: equal up to the coarser precision.
  bool agrees_with(const USeries& o) const;

  std::string to_string() const;

 private:
  void normalize();

  SeriesKind kind_ = SeriesKind::power;
  std::vector<Term> terms_;
  int prec_ = kExact;
};

// Literal parser for series: `c*u^k` terms with an optional trailing
// `+ O(u^N)`.  Without an O-term the literal is an exact polynomial.
template <class F>
USeries<F> parse_series(std::string_view text, const FieldConfig& cfg,
                        SeriesKind kind = SeriesKind::power);

template <class F>
USeries<F> series_mul(const USeries<F>& a, const USeries<F>& b) { return a * b; }
template <class F>
USeries<F> series_inv(const USeries<F>& a, int cap = kDefaultPrecision) { return a.inv(cap); }
template <class F>
Valuation valuation_nu(const USeries<F>& a) { return a.valuation(); }
template <class F>
USeries<F> localise(const USeries<F>& a) { return a.localise(); }
template <class F>
USeries<F> tail_project(const USeries<F>& a) { return a.tail_project(); }
template <class F>
USeries<F> tail_u_mul(const USeries<F>& a, int k) { return a.tail_u_mul(k); }

using QSeries = USeries<Rational>;
using NSeries = USeries<NovikovElem>;

extern template class USeries<Rational>;
extern template class USeries<NovikovElem>;

}  // namespace dvr
