#include "dvr/novikov.hpp"

#include <algorithm>
#include <map>

namespace dvr {

std::optional<Rational> min_precision(const std::optional<Rational>& a,
                                      const std::optional<Rational>& b) {
  if (!a) return b;
  if (!b) return a;
  return *a < *b ? a : b;
}

namespace {

std::optional<Rational> shifted(const std::optional<Rational>& p, const std::optional<Rational>& s) {
  if (!p) return std::nullopt;
  if (!s) return std::nullopt;  // shift by +infinity (exact zero factor)
  return *p + *s;
}

}  // namespace

NovikovElem::NovikovElem(const Rational& c) {
  if (!c.is_zero()) terms_.push_back({Rational(0), c});
}

NovikovElem NovikovElem::monomial(const Rational& coef, const Rational& exponent,
                                  std::optional<Rational> precision, int grading) {
  NovikovElem r;
  r.prec_ = std::move(precision);
  r.grading_ = grading;
  if (!coef.is_zero()) r.terms_.push_back({exponent, coef});
  r.normalize();
  return r;
}

NovikovElem NovikovElem::from_terms(std::vector<Term> terms, std::optional<Rational> precision,
                                    int grading) {
  std::map<Rational, Rational> acc;
  for (auto& [e, c] : terms) acc[e] += c;
  NovikovElem r;
  for (auto& [e, c] : acc) r.terms_.push_back({e, c});
  r.prec_ = std::move(precision);
  r.grading_ = grading;
  r.normalize();
  return r;
}

NovikovElem NovikovElem::unknown(const Rational& precision, int grading) {
  NovikovElem r;
  r.prec_ = precision;
  r.grading_ = grading;
  return r;
}

void NovikovElem::normalize() {
  std::erase_if(terms_, [&](const Term& t) {
    return t.second.is_zero() || (prec_ && t.first >= *prec_);
  });
}

int NovikovElem::merge_grading(int a, int b) {
  if (a == kAnyGrading) return b;
  if (b == kAnyGrading) return a;
  if (a != b) throw ConfigError("Novikov elements with different T-gradings");
  return a;
}

const Rational& NovikovElem::valuation() const {
  if (terms_.empty()) throw PrecisionError("T-valuation of an element with no known term");
  return terms_.front().first;
}

std::optional<Rational> NovikovElem::valuation_lower_bound() const {
  if (!terms_.empty()) return terms_.front().first;
  return prec_;
}

NovikovElem NovikovElem::operator-() const {
  NovikovElem r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

NovikovElem operator+(const NovikovElem& a, const NovikovElem& b) {
  NovikovElem r;
  r.grading_ = NovikovElem::merge_grading(a.grading_, b.grading_);
  r.prec_ = min_precision(a.prec_, b.prec_);
  std::size_t i = 0, j = 0;
  auto& x = a.terms_;
  auto& y = b.terms_;
  r.terms_.reserve(x.size() + y.size());
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      r.terms_.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      r.terms_.push_back(y[j++]);
    } else {
      Rational c = x[i].second + y[j].second;
      if (!c.is_zero()) r.terms_.push_back({x[i].first, c});
      ++i;
      ++j;
    }
  }
  r.normalize();
  return r;
}

NovikovElem operator-(const NovikovElem& a, const NovikovElem& b) { return a + (-b); }

NovikovElem operator*(const NovikovElem& a, const NovikovElem& b) {
  NovikovElem r;
  r.grading_ = NovikovElem::merge_grading(a.grading_, b.grading_);
  if (a.is_exact_zero() || b.is_exact_zero()) return r;
  r.prec_ = min_precision(shifted(a.prec_, b.valuation_lower_bound()),
                          shifted(b.prec_, a.valuation_lower_bound()));
  std::map<Rational, Rational> acc;
  for (auto& [ea, ca] : a.terms_)
    for (auto& [eb, cb] : b.terms_) {
      Rational e = ea + eb;
      if (r.prec_ && e >= *r.prec_) continue;
      acc[e] += ca * cb;
    }
  for (auto& [e, c] : acc) r.terms_.push_back({e, c});
  r.normalize();
  return r;
}

NovikovElem NovikovElem::inv() const {
  if (terms_.empty()) {
    if (!prec_) throw DomainError("inverse of zero");
    throw PrecisionError("Novikov element indistinguishable from zero at T-precision " +
                         prec_->to_string());
  }
  const Rational v = terms_.front().first;
  const Rational cinv = terms_.front().second.inv();
  if (terms_.size() == 1 && !prec_) return monomial(cinv, -v, std::nullopt, grading_);
  // Relative precision of a / (c T^v).
  Rational rel = prec_ ? *prec_ - v : Rational(kDefaultInversePrecision);
  // x = a/(c T^v) - 1, all exponents > 0.
  std::vector<Term> xt;
  for (std::size_t i = 1; i < terms_.size(); ++i)
    xt.push_back({terms_[i].first - v, -(terms_[i].second * cinv)});  // this is -x
  NovikovElem negx = from_terms(xt, rel, grading_);
  NovikovElem sum = NovikovElem(1).truncated(rel);
  NovikovElem power = sum;
  while (!power.is_zero()) {
    power = (power * negx).truncated(rel);
    sum = sum + power;
  }
  NovikovElem shift = monomial(cinv, -v, std::nullopt, grading_);
  NovikovElem out = sum * shift;
  out.grading_ = grading_;
  return out;
}

NovikovElem NovikovElem::truncated(const Rational& p) const {
  NovikovElem r = *this;
  if (!r.prec_ || p < *r.prec_) r.prec_ = p;
  r.normalize();
  return r;
}

NovikovElem NovikovElem::with_grading(int g) const {
  NovikovElem r = *this;
  r.grading_ = g;
  return r;
}

bool operator==(const NovikovElem& a, const NovikovElem& b) {
  return a.terms_ == b.terms_ && a.prec_ == b.prec_;
}

std::string NovikovElem::to_string() const {
  std::string s;
  for (auto& [e, c] : terms_) {
    std::string cs;
    bool neg = c.sign() < 0;
    Rational ac = abs(c);
    bool unit_exp = e.is_zero();
    if (!ac.is_one() || unit_exp) cs = ac.to_string();
    std::string ts;
    if (!unit_exp) {
      ts = "T";
      if (!e.is_one()) ts += e.is_integer() && e.sign() > 0 ? "^" + e.to_string() : "^(" + e.to_string() + ")";
    }
    std::string term = cs.empty() ? ts : (ts.empty() ? cs : cs + "*" + ts);
    if (s.empty())
      s = neg ? "-" + term : term;
    else
      s += (neg ? " - " : " + ") + term;
  }
  if (prec_) {
    std::string o = "O(T^" + (prec_->is_integer() && prec_->sign() >= 0 ? prec_->to_string()
                                                                       : "(" + prec_->to_string() + ")") + ")";
    s = s.empty() ? o : s + " + " + o;
  }
  return s.empty() ? "0" : s;
}

}  // namespace dvr
