#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dvr/novikov.hpp"
#include "dvr/rational.hpp"

namespace dvr {

enum class FieldKind { rational, novikov };

struct FieldConfig {
  FieldKind kind = FieldKind::rational;
  Rational t_precision = Rational(16);  // novikov only
  int t_grading = 0;                    // degree of T, novikov only

  static FieldConfig rational() { return {}; }
  static FieldConfig novikov(const Rational& tprec, int grading);

  void validate() const;
  std::string to_string() const;
  friend bool operator==(const FieldConfig& a, const FieldConfig& b);
};

// Per-field glue used by the templated layers.
template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static constexpr FieldKind kind = FieldKind::rational;
  static Rational from_rational(const Rational& c, const FieldConfig&) { return c; }
  // Coefficient literal `p/q` or `p`.
  static Rational parse(std::string_view text, const FieldConfig&) { return Rational::parse(text); }
  static std::string to_string(const Rational& c) { return c.to_string(); }
  // T-exponents occurring in c (the constant field has only T^0).
  static std::vector<Rational> t_exponents(const Rational&) { return {Rational(0)}; }
  static bool is_single_term(const Rational&) { return true; }
  static void check(const Rational&, const FieldConfig& cfg) {
    if (cfg.kind != FieldKind::rational) throw ConfigError("rational element under novikov config");
  }
};

template <>
struct FieldTraits<NovikovElem> {
  static constexpr FieldKind kind = FieldKind::novikov;
  static NovikovElem from_rational(const Rational& c, const FieldConfig& cfg) {
    return NovikovElem::monomial(c, Rational(0), cfg.t_precision, cfg.t_grading);
  }
  // Sum of `c*T^(a/b)` terms; T, T^n, bare rationals also accepted.
  static NovikovElem parse(std::string_view text, const FieldConfig& cfg);
  static std::string to_string(const NovikovElem& c) { return c.to_string(); }
  static std::vector<Rational> t_exponents(const NovikovElem& c);
  static bool is_single_term(const NovikovElem& c) { return c.terms().size() <= 1; }
  static void check(const NovikovElem& c, const FieldConfig& cfg);
};

// Convenience wrappers named after the coefficient-field operations.
template <class F>
F field_add(const F& a, const F& b) { return a + b; }
template <class F>
F field_mul(const F& a, const F& b) { return a * b; }
template <class F>
F field_inv(const F& a) { return a.inv(); }

}  // namespace dvr
