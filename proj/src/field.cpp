#include "dvr/field.hpp"

#include "dvr/literal.hpp"

namespace dvr {

FieldConfig FieldConfig::novikov(const Rational& tprec, int grading) {
  FieldConfig c;
  c.kind = FieldKind::novikov;
  c.t_precision = tprec;
  c.t_grading = grading;
  c.validate();
  return c;
}

void FieldConfig::validate() const {
  if (kind == FieldKind::novikov) {
    if (t_precision.sign() <= 0) throw ConfigError("novikov t_precision must be positive");
    if (t_grading != 0 && t_grading != 2) throw ConfigError("novikov grading must be 0 or 2");
  }
}

std::string FieldConfig::to_string() const {
  if (kind == FieldKind::rational) return "field rational";
  return "field novikov grading=" + std::to_string(t_grading) + " tprec=" + t_precision.to_string();
}

bool operator==(const FieldConfig& a, const FieldConfig& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == FieldKind::rational) return true;
  return a.t_precision == b.t_precision && a.t_grading == b.t_grading;
}

NovikovElem FieldTraits<NovikovElem>::parse(std::string_view text, const FieldConfig& cfg) {
  ParsedPoly p = parse_poly(text);
  if (p.mentions_u) throw InputError("u is not allowed in a Novikov coefficient: '" + std::string(text) + "'");
  std::vector<NovikovElem::Term> terms;
  for (auto& [k, c] : p.terms) terms.push_back({k.second, c});
  return NovikovElem::from_terms(std::move(terms), cfg.t_precision, cfg.t_grading);
}

std::vector<Rational> FieldTraits<NovikovElem>::t_exponents(const NovikovElem& c) {
  std::vector<Rational> out;
  for (auto& t : c.terms()) out.push_back(t.first);
  return out;
}

void FieldTraits<NovikovElem>::check(const NovikovElem& c, const FieldConfig& cfg) {
  if (cfg.kind != FieldKind::novikov) throw ConfigError("novikov element under rational config");
  if (c.grading() != NovikovElem::kAnyGrading && c.grading() != cfg.t_grading)
    throw ConfigError("novikov element grading differs from the configuration");
}

}  // namespace dvr
