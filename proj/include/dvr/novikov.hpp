#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dvr/rational.hpp"

namespace dvr {

// Truncated Novikov series  Σ c_a T^a  with rational exponents.
// Terms at or above t_precision are unknown; an unset precision means exact.
class NovikovElem {
 public:
  using Term = std::pair<Rational, Rational>;  // (exponent, coefficient)

  static constexpr int kAnyGrading = -1;
  // Relative T-precision used when inverting an exact multi-term element.
  static constexpr int kDefaultInversePrecision = 16;

  NovikovElem() = default;
  NovikovElem(int c) : NovikovElem(Rational(c)) {}  // NOLINT
  NovikovElem(const Rational& c);                   // NOLINT

  static NovikovElem monomial(const Rational& coef, const Rational& exponent,
                              std::optional<Rational> precision = std::nullopt,
                              int grading = kAnyGrading);
  static NovikovElem from_terms(std::vector<Term> terms, std::optional<Rational> precision,
                                int grading);
  // O(T^precision): no known terms.
  static NovikovElem unknown(const Rational& precision, int grading);

  const std::vector<Term>& terms() const { return terms_; }
  const std::optional<Rational>& precision() const { return prec_; }
  bool exact() const { return !prec_; }
  int grading() const { return grading_; }

  // No known nonzero term.  Such an element is treated as zero by the
  // series layer (it cannot be certified nonzero).
  bool is_zero() const { return terms_.empty(); }
  bool is_exact_zero() const { return terms_.empty() && !prec_; }
  // Leading exponent; requires !is_zero().
  const Rational& valuation() const;
  // Leading exponent, or the precision when no term is known.
  std::optional<Rational> valuation_lower_bound() const;

  NovikovElem inv() const;
  NovikovElem operator-() const;
  friend NovikovElem operator+(const NovikovElem& a, const NovikovElem& b);
  friend NovikovElem operator-(const NovikovElem& a, const NovikovElem& b);
  friend NovikovElem operator*(const NovikovElem& a, const NovikovElem& b);
  friend NovikovElem operator/(const NovikovElem& a, const NovikovElem& b) { return a * b.inv(); }
  NovikovElem& operator+=(const NovikovElem& o) { return *this = *this + o; }
  NovikovElem& operator-=(const NovikovElem& o) { return *this = *this - o; }
  NovikovElem& operator*=(const NovikovElem& o) { return *this = *this * o; }

  // Equal known terms and equal precision.
  friend bool operator==(const NovikovElem& a, const NovikovElem& b);
  friend bool operator!=(const NovikovElem& a, const NovikovElem& b) { return !(a == b); }
  // a - b has no known term (agreement to the coarser precision).
  friend bool agree(const NovikovElem& a, const NovikovElem& b) { return (a - b).is_zero(); }

  // Drop every term at or above p and lower the precision to p.
  NovikovElem truncated(const Rational& p) const;
  NovikovElem with_grading(int g) const;

  std::string to_string() const;

 private:
  void normalize();
  static int merge_grading(int a, int b);

  std::vector<Term> terms_;
  std::optional<Rational> prec_;
  int grading_ = kAnyGrading;
};

bool agree(const NovikovElem& a, const NovikovElem& b);

std::optional<Rational> min_precision(const std::optional<Rational>& a,
                                      const std::optional<Rational>& b);

}  // namespace dvr
