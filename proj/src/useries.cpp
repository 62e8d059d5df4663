#include "dvr/useries.hpp"

#include <algorithm>
#include <map>

#include "dvr/literal.hpp"

namespace dvr {

std::string Valuation::to_string() const {
  switch (kind) {
    case Kind::finite: return std::to_string(value);
    case Kind::infinite: return "inf";
    case Kind::at_least: return ">=" + std::to_string(value);
  }
  return "?";
}

namespace {

const char* kind_name(SeriesKind k) {
  switch (k) {
    case SeriesKind::power: return "power";
    case SeriesKind::laurent: return "laurent";
    case SeriesKind::tail: return "tail";
  }
  return "?";
}

// Lower bound on the valuation: first stored exponent, else precision.
template <class F>
int val_lb(const USeries<F>& a) {
  return a.no_terms() ? a.precision() : a.min_exponent();
}

}  // namespace

template <class F>
void USeries<F>::normalize() {
  std::erase_if(terms_, [&](const Term& t) {
    if (t.second.is_zero()) return true;
    if (kind_ == SeriesKind::tail) return t.first > 0;
    return t.first >= prec_;
  });
  if (kind_ == SeriesKind::tail) prec_ = kExact;
  if (kind_ == SeriesKind::power && !terms_.empty() && terms_.front().first < 0)
    throw DomainError("power series with a negative exponent");
}

template <class F>
USeries<F> USeries<F>::constant(const F& c, SeriesKind kind) {
  return monomial(c, 0, kind);
}

template <class F>
USeries<F> USeries<F>::monomial(const F& c, int exp, SeriesKind kind) {
  USeries r(kind);
  r.terms_.push_back({exp, c});
  r.normalize();
  return r;
}

template <class F>
USeries<F> USeries<F>::from_terms(std::vector<Term> terms, int precision, SeriesKind kind) {
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.first < b.first; });
  USeries r(kind);
  r.prec_ = kind == SeriesKind::tail ? kExact : precision;
  for (auto& t : terms) {
    if (!r.terms_.empty() && r.terms_.back().first == t.first)
      r.terms_.back().second += t.second;
    else
      r.terms_.push_back(std::move(t));
  }
  r.normalize();
  return r;
}

template <class F>
USeries<F> USeries<F>::unknown(int n, SeriesKind kind) {
  if (kind == SeriesKind::tail) throw DomainError("tail elements carry no precision");
  USeries r(kind);
  r.prec_ = n;
  return r;
}

template <class F>
F USeries<F>::coefficient(int k) const {
  if (kind_ != SeriesKind::tail && k >= prec_)
    throw PrecisionError("coefficient of u^" + std::to_string(k) + " is beyond precision " +
                         std::to_string(prec_));
  auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                             [](const Term& t, int e) { return t.first < e; });
  if (it != terms_.end() && it->first == k) return it->second;
  return F(0);
}

template <class F>
Valuation USeries<F>::valuation() const {
  if (kind_ == SeriesKind::tail) throw DomainError("valuation is defined on power/laurent series");
  if (!terms_.empty()) return Valuation::finite(terms_.front().first);
  if (prec_ == kExact) return Valuation::infinite();
  return Valuation::at_least(prec_);
}

template <class F>
USeries<F> USeries<F>::operator-() const {
  USeries r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

template <class F>
USeries<F> USeries<F>::operator+(const USeries& o) const {
  if (kind_ != o.kind_)
    throw DomainError(std::string("adding ") + kind_name(kind_) + " and " + kind_name(o.kind_) +
                      " series");
  USeries r(kind_);
  r.prec_ = std::min(prec_, o.prec_);
  r.terms_.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
      r.terms_.push_back(terms_[i++]);
    } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      F c = terms_[i].second + o.terms_[j].second;
      if (!c.is_zero()) r.terms_.push_back({terms_[i].first, std::move(c)});
      ++i;
      ++j;
    }
  }
  r.normalize();
  return r;
}

template <class F>
USeries<F> USeries<F>::operator-(const USeries& o) const {
  return *this + (-o);
}

template <class F>
USeries<F> USeries<F>::scaled(const F& c) const {
  if (c.is_zero()) {
    USeries r(kind_);
    r.prec_ = prec_;
    return r;
  }
  USeries r = *this;
  for (auto& t : r.terms_) t.second = t.second * c;
  r.normalize();
  return r;
}

template <class F>
USeries<F> USeries<F>::operator*(const USeries& o) const {
  // K[[u]] acting on 𝔽.
  if (kind_ == SeriesKind::tail || o.kind_ == SeriesKind::tail) {
    if (kind_ == SeriesKind::tail && o.kind_ == SeriesKind::tail)
      throw DomainError("no multiplication on F = K((u))/uK[[u]] (tail x tail)");
    const USeries& t = kind_ == SeriesKind::tail ? *this : o;
    const USeries& p = kind_ == SeriesKind::tail ? o : *this;
    if (p.kind_ != SeriesKind::power)
      throw DomainError("only K[[u]] acts on tail elements");
    if (t.terms_.empty()) return USeries(SeriesKind::tail);
    int need = -t.terms_.front().first;  // coefficients of p up to u^need
    if (p.prec_ <= need)
      throw PrecisionError("power series precision " + std::to_string(p.prec_) +
                           " too small to act on a tail reaching u^" +
                           std::to_string(t.terms_.front().first));
    std::map<int, F> acc;
    for (auto& [ep, cp] : p.terms_) {
      if (ep > need) break;
      for (auto& [et, ct] : t.terms_) {
        int e = ep + et;
        if (e > 0) break;
        acc[e] += cp * ct;
      }
    }
    USeries r(SeriesKind::tail);
    for (auto& [e, c] : acc) r.terms_.push_back({e, c});
    r.normalize();
    return r;
  }
  if (kind_ != o.kind_)
    throw DomainError(std::string("multiplying ") + kind_name(kind_) + " and " +
                      kind_name(o.kind_) + " series");
  USeries r(kind_);
  if (is_exact_zero() || o.is_exact_zero()) return r;
  r.prec_ = std::min(prec_add(prec_, val_lb(o)), prec_add(o.prec_, val_lb(*this)));
  if (terms_.empty() || o.terms_.empty()) return r;
  const int lo = terms_.front().first + o.terms_.front().first;
  long long hi_ll = (long long)terms_.back().first + o.terms_.back().first + 1;
  if (r.prec_ != kExact) hi_ll = std::min<long long>(hi_ll, r.prec_);
  if (hi_ll <= lo) return r;
  const long long span = hi_ll - lo;
  if (span <= 4096) {
    std::vector<F> dense(std::size_t(span), F(0));
    std::vector<char> touched(std::size_t(span), 0);
    for (auto& [ea, ca] : terms_) {
      if (ea + o.terms_.front().first >= hi_ll) break;
      for (auto& [eb, cb] : o.terms_) {
        long long e = (long long)ea + eb;
        if (e >= hi_ll) break;
        std::size_t idx = std::size_t(e - lo);
        if (touched[idx]) {
          dense[idx] += ca * cb;
        } else {
          dense[idx] = ca * cb;
          touched[idx] = 1;
        }
      }
    }
    for (std::size_t i = 0; i < dense.size(); ++i)
      if (touched[i] && !dense[i].is_zero()) r.terms_.push_back({int(lo + (long long)i), std::move(dense[i])});
  } else {
    std::map<int, F> acc;
    for (auto& [ea, ca] : terms_)
      for (auto& [eb, cb] : o.terms_) {
        long long e = (long long)ea + eb;
        if (e >= hi_ll) break;
        acc[int(e)] += ca * cb;
      }
    for (auto& [e, c] : acc) r.terms_.push_back({e, c});
  }
  r.normalize();
  return r;
}

template <class F>
USeries<F> USeries<F>::inv(int cap) const {
  if (kind_ == SeriesKind::tail) throw DomainError("tail elements are not invertible");
  if (terms_.empty()) {
    if (prec_ == kExact) throw DomainError("inverse of zero");
    throw PrecisionError("series indistinguishable from zero at precision " + std::to_string(prec_));
  }
  const int v = terms_.front().first;
  if (kind_ == SeriesKind::power && v != 0) {
    if (v >= prec_) throw PrecisionError("unit test beyond precision");
    throw DomainError("power series with zero u^0-coefficient is not a unit");
  }
  const F c0inv = terms_.front().second.inv();
  if (terms_.size() == 1 && prec_ == kExact) return monomial(c0inv, -v, kind_);
  // Relative precision of w = u^{-v} * this.
  const int rel = prec_ == kExact ? cap : prec_ - v;
  if (rel <= 0) throw PrecisionError("no certified coefficient to invert");
  std::vector<F> a(std::size_t(rel), F(0));
  for (auto& [e, c] : terms_) {
    int k = e - v;
    if (k < rel) a[std::size_t(k)] = c;
  }
  std::vector<F> b(std::size_t(rel), F(0));
  b[0] = c0inv;
  for (int n = 1; n < rel; ++n) {
    F s(0);
    for (int k = 1; k <= n; ++k)
      if (!a[std::size_t(k)].is_zero() && !b[std::size_t(n - k)].is_zero())
        s += a[std::size_t(k)] * b[std::size_t(n - k)];
    b[std::size_t(n)] = -(s * c0inv);
  }
  USeries r(kind_);
  r.prec_ = rel - v;
  for (int n = 0; n < rel; ++n)
    if (!b[std::size_t(n)].is_zero()) r.terms_.push_back({n - v, std::move(b[std::size_t(n)])});
  r.normalize();
  return r;
}

template <class F>
USeries<F> USeries<F>::shifted(int k) const {
  USeries r = *this;
  for (auto& t : r.terms_) t.first += k;
  if (kind_ == SeriesKind::tail) {
    r.normalize();
    return r;
  }
  r.prec_ = prec_add(prec_, k);
  if (kind_ == SeriesKind::power && !r.terms_.empty() && r.terms_.front().first < 0)
    throw DomainError("division by u^" + std::to_string(-k) + " is not exact");
  if (kind_ == SeriesKind::power && r.prec_ < 0) r.prec_ = 0;
  r.normalize();
  return r;
}

template <class F>
USeries<F> USeries<F>::truncated(int n) const {
  if (kind_ == SeriesKind::tail) return *this;
  USeries r = *this;
  r.prec_ = std::min(prec_, n);
  r.normalize();
  return r;
}

template <class F>
USeries<F> USeries<F>::localise() const {
  if (kind_ != SeriesKind::power) throw DomainError("localise expects a power series");
  USeries r = *this;
  r.kind_ = SeriesKind::laurent;
  return r;
}

template <class F>
USeries<F> USeries<F>::tail_project() const {
  if (kind_ == SeriesKind::tail) return *this;
  if (prec_ <= 0)
    throw PrecisionError("tail projection needs certified coefficients up to u^0 (precision " +
                         std::to_string(prec_) + ")");
  USeries r(SeriesKind::tail);
  for (auto& t : terms_)
    if (t.first <= 0) r.terms_.push_back(t);
  return r;
}

template <class F>
USeries<F> USeries<F>::tail_u_mul(int k) const {
  if (kind_ != SeriesKind::tail) throw DomainError("tail_u_mul expects a tail element");
  if (k < 0) throw DomainError("u acts on F only by nonnegative powers");
  return shifted(k);
}

template <class F>
bool USeries<F>::operator==(const USeries& o) const {
  return kind_ == o.kind_ && prec_ == o.prec_ && terms_ == o.terms_;
}

template <class F>
bool USeries<F>::agrees_with(const USeries& o) const {
  return (*this - o).no_terms();
}

template <class F>
std::string USeries<F>::to_string() const {
  std::string s;
  for (auto& [e, c] : terms_) {
    bool single = FieldTraits<F>::is_single_term(c);
    std::string cs = FieldTraits<F>::to_string(c);
    bool neg = single && !cs.empty() && cs[0] == '-';
    if (neg) cs.erase(0, 1);
    if (!single) cs = "(" + cs + ")";
    std::string term;
    if (e == 0) {
      term = cs;
    } else {
      std::string us = "u^" + (e < 0 ? "(" + std::to_string(e) + ")" : std::to_string(e));
      term = cs == "1" ? us : cs + "*" + us;
    }
    if (s.empty())
      s = neg ? "-" + term : term;
    else
      s += (neg ? " - " : " + ") + term;
  }
  if (kind_ != SeriesKind::tail && prec_ != kExact) {
    std::string o = "O(u^" + (prec_ < 0 ? "(" + std::to_string(prec_) + ")" : std::to_string(prec_)) + ")";
    s = s.empty() ? o : s + " + " + o;
  }
  return s.empty() ? "0" : s;
}

template <class F>
USeries<F> parse_series(std::string_view text, const FieldConfig& cfg, SeriesKind kind) {
  ParsedPoly p = parse_poly(text);
  if (p.mentions_T && cfg.kind != FieldKind::novikov)
    throw InputError("T appears in a rational-field literal: '" + std::string(text) + "'");
  if (kind == SeriesKind::tail && p.u_precision)
    throw InputError("tail literals take no O-term");
  std::map<int, std::vector<std::pair<Rational, Rational>>> by_u;
  for (auto& [k, c] : p.terms) by_u[k.first].push_back({k.second, c});
  std::vector<typename USeries<F>::Term> terms;
  for (auto& [e, list] : by_u) {
    if (kind == SeriesKind::power && e < 0)
      throw InputError("negative u-exponent in a power-series literal: '" + std::string(text) + "'");
    if (kind == SeriesKind::tail && e > 0)
      throw InputError("tail literal with positive u-exponent: '" + std::string(text) + "'");
    if constexpr (FieldTraits<F>::kind == FieldKind::rational) {
      terms.push_back({e, list.front().second});
    } else {
      std::vector<NovikovElem::Term> nt(list.begin(), list.end());
      terms.push_back({e, NovikovElem::from_terms(std::move(nt), cfg.t_precision, cfg.t_grading)});
    }
  }
  return USeries<F>::from_terms(std::move(terms), p.u_precision.value_or(kExact), kind);
}

template class USeries<Rational>;
template class USeries<NovikovElem>;
template USeries<Rational> parse_series<Rational>(std::string_view, const FieldConfig&, SeriesKind);
template USeries<NovikovElem> parse_series<NovikovElem>(std::string_view, const FieldConfig&,
                                                        SeriesKind);

}  // namespace dvr
