#include "dvr/homology.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

#include "dvr/degreewise.hpp"

namespace dvr {

int monomial_degree(int gen_degree, int u_exp, const Rational& t_exp, int t_grading) {
  Rational t = t_exp * Rational(t_grading);
  if (!t.is_integer()) throw InputError("T^" + t_exp.to_string() + " has non-integer degree");
  return gen_degree + 2 * u_exp + int(t.num_small());
}

template <class F>
int EqChainComplex<F>::index_of(const std::string& gen) const {
  for (int i = 0; i < size(); ++i)
    if (gens[i].name == gen) return i;
  return -1;
}

template <class F>
void EqChainComplex<F>::validate() const {
  std::set<std::string> seen;
  for (auto& g : gens) {
    if (g.name.empty()) throw InputError("generator with an empty name");
    if (!seen.insert(g.name).second) throw InputError("duplicate generator '" + g.name + "'");
  }
  int n = size();
  if (d.rows() != n || d.cols() != n)
    throw InputError("differential is " + std::to_string(d.rows()) + "x" +
                     std::to_string(d.cols()) + " but there are " + std::to_string(n) +
                     " generators");
  const int grading = config().kind == FieldKind::novikov ? config().t_grading : 0;
  for (int h = 0; h < n; ++h)
    for (int g = 0; g < n; ++g)
      for (auto& [k, c] : d(h, g).terms())
        for (const Rational& a : FieldTraits<F>::t_exponents(c)) {
          int deg = monomial_degree(gens[h].degree, k, a, grading);
          if (deg != gens[g].degree + 1)
            throw InputError("d(" + gens[g].name + ") -> " + gens[h].name + ": term of u^" +
                             std::to_string(k) + " lands in degree " + std::to_string(deg) +
                             ", expected " + std::to_string(gens[g].degree + 1));
        }
  DVRMatrix<F> dd = d * d;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!dd(i, j).no_terms())
        throw InputError("d∘d != 0: entry (" + gens[i].name + ", " + gens[j].name + ") is " +
                         dd(i, j).to_string());
}

void FGModuleShape::normalize() {
  std::sort(free_power.begin(), free_power.end());
  std::sort(free_laurent.begin(), free_laurent.end());
  std::sort(tails.begin(), tails.end());
  std::sort(torsion.begin(), torsion.end());
}

bool FGModuleShape::is_zero() const { return total_rank() == 0; }

namespace {

bool same_parity(int a, int b) { return ((a - b) % 2) == 0; }

}  // namespace

int FGModuleShape::dim_in_degree(int m) const {
  int n = 0;
  for (int d : free_power) n += (m >= d && same_parity(m, d));
  for (int d : free_laurent) n += same_parity(m, d);
  for (int d : tails) n += (m <= d && same_parity(m, d));
  for (auto [k, g] : torsion) n += (m >= g && m <= g + 2 * (k - 1) && same_parity(m, g));
  return n;
}

int FGModuleShape::u_kernel_dim(int m) const {
  int n = 0;
  for (int d : tails) n += (m == d);
  for (auto [k, g] : torsion) n += (m == g + 2 * (k - 1));
  return n;
}

int FGModuleShape::u_cokernel_dim(int m) const {
  int n = 0;
  for (int d : free_power) n += (m == d);
  for (auto [k, g] : torsion) n += (m == g);
  return n;
}

std::string FGModuleShape::to_string() const {
  auto list = [](const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
  };
  std::string s = "free:" + list(free_power) + " laurent:" + list(free_laurent) +
                  " tails:" + list(tails) + " torsion:[";
  for (std::size_t i = 0; i < torsion.size(); ++i)
    s += (i ? "," : "") + std::string("(") + std::to_string(torsion[i].first) + "," +
         std::to_string(torsion[i].second) + ")";
  return s + "]";
}

bool operator==(const FGModuleShape& a, const FGModuleShape& b) {
  FGModuleShape x = a, y = b;
  x.normalize();
  y.normalize();
  return x.free_power == y.free_power && x.free_laurent == y.free_laurent && x.tails == y.tails &&
         x.torsion == y.torsion;
}

namespace {

// Degree of the homogeneous element Σ_g col[g]·g.
template <class F>
int element_degree(const std::vector<USeries<F>>& col, const std::vector<Generator>& gens,
                   int grading) {
  for (std::size_t g = 0; g < col.size(); ++g) {
    if (col[g].no_terms()) continue;
    const auto& [k, c] = col[g].terms().front();
    Rational a = FieldTraits<F>::t_exponents(c).front();
    return monomial_degree(gens[g].degree, k, a, grading);
  }
  throw InvariantError("basis vector with no certified entry");
}

}  // namespace

template <class F>
MinusHomology<F> homology_minus_detail(const EqChainComplex<F>& C, const SNFOptions& opt) {
  C.validate();
  MinusHomology<F> out;
  const int n = C.size();
  if (n == 0) return out;
  const int grading = C.config().kind == FieldKind::novikov ? C.config().t_grading : 0;
  SNFOptions o = opt;
  o.track_transforms = true;
  SNFResult<F> snf = smith_normal_form(C.d, o);
  out.exponents = snf.exponents;
  std::multiset<int> kernel_degrees, image_degrees;
  for (int i = 0; i < n; ++i) {
    int deg = element_degree(snf.V.column(i), C.gens, grading);
    out.source_degrees.push_back(deg);
    int j = snf.exponents[i];
    if (j == kInfinite) {
      kernel_degrees.insert(deg);
    } else {
      int tdeg = deg + 1 - 2 * j;
      out.torsion_gen_degrees.push_back(tdeg);
      image_degrees.insert(tdeg);
      if (j > 0) out.shape.torsion.push_back({j, tdeg});
    }
  }
  std::vector<int> unmatched;
  for (int d : image_degrees) {
    auto it = kernel_degrees.find(d);
    if (it == kernel_degrees.end()) {
      unmatched.push_back(d);
      continue;
    }
    kernel_degrees.erase(it);
  }
  // With |T| = 2 a unit T^a shifts degrees, so summand degrees are only
  // defined up to T-degrees; pair each leftover with the nearest kernel degree.
  for (int d : unmatched) {
    if (grading == 0 || kernel_degrees.empty())
      throw InvariantError("image generator in degree " + std::to_string(d) +
                           " has no matching kernel degree");
    auto best = kernel_degrees.begin();
    for (auto it = kernel_degrees.begin(); it != kernel_degrees.end(); ++it)
      if (std::abs(*it - d) < std::abs(*best - d)) best = it;
    kernel_degrees.erase(best);
  }
  out.shape.free_power.assign(kernel_degrees.begin(), kernel_degrees.end());
  out.shape.normalize();
  return out;
}

template <class F>
FGModuleShape homology_minus(const EqChainComplex<F>& C, const SNFOptions& opt) {
  return homology_minus_detail(C, opt).shape;
}

template <class F>
FGModuleShape homology_infty(const EqChainComplex<F>& C, const SNFOptions& opt) {
  FGModuleShape m = homology_minus(C, opt), out;
  out.free_laurent = m.free_power;
  out.normalize();
  return out;
}

template <class F>
FGModuleShape homology_plus(const EqChainComplex<F>& C, const SNFOptions& opt) {
  FGModuleShape m = homology_minus(C, opt), out;
  out.tails = m.free_power;
  // T[-1]: the summand generated by u^{1-k} e_i sits one degree above ẽ_i.
  for (auto [k, g] : m.torsion) out.torsion.push_back({k, g + 1});
  out.normalize();
  return out;
}

template <class F>
std::vector<DegreeCount> ordinary_cohomology(const EqChainComplex<F>& C) {
  C.validate();
  std::map<int, int> dims;
  const FieldConfig& cfg = C.config();
  if (cfg.kind == FieldKind::novikov && cfg.t_grading != 0) {
    // H^m(ord C) ≅ coker(u : W_{m-2} -> W_m) ⊕ ker(u : W_{m-1} -> W_{m+1}).
    FGModuleShape w = homology_minus(C);
    for (int d : w.free_power) dims[d] += 1;
    for (auto [k, g] : w.torsion) {
      dims[g] += 1;
      dims[g + 2 * k - 1] += 1;
    }
  } else {
    DegreewiseModel<F> ord(C, Model::ord);
    std::set<int> degs;
    for (auto& g : C.gens) degs.insert(g.degree);
    for (int m : degs) {
      int h = ord.homology_dim(m);
      if (h) dims[m] = h;
    }
  }
  std::vector<DegreeCount> out;
  for (auto [m, h] : dims)
    if (h) out.push_back({m, h});
  return out;
}

namespace {

// Exactness of  A_m -α-> B_m -β-> C_m -γ-> A_{m+1}  given all dims and ranks.
struct LESDegree {
  int dimA, dimB, dimC, rank_alpha, rank_beta, rank_gamma, dimA_next, rank_alpha_next;
  std::string check() const {
    if (dimB - rank_beta != rank_alpha) return "not exact at the middle term";
    if (dimC - rank_gamma != rank_beta) return "not exact at the third term";
    if (dimA_next - rank_alpha_next != rank_gamma) return "not exact after the connecting map";
    return "";
  }
};

template <class F>
LESDegree les_degree(const DegreewiseModel<F>& A, const DegreewiseModel<F>& B,
                     const DegreewiseModel<F>& Cm, int alpha_shift, int m) {
  // A-term in degree m is A at degree m - 2 (the [-2] shift).
  LESDegree r{};
  r.dimA = A.homology_dim(m - 2);
  r.dimB = B.homology_dim(m);
  r.dimC = Cm.homology_dim(m);
  r.rank_alpha = induced_rank(A, m - 2, B, m, A.map_to(B, m - 2, alpha_shift, false));
  r.rank_beta = induced_rank(B, m, Cm, m, B.map_to(Cm, m, 0, false));
  // Connecting map: lift to C_u, apply d, divide by u; lands in A at degree m - 1.
  r.rank_gamma = induced_rank(Cm, m, A, m - 1, Cm.map_to(A, m, -1, true));
  r.dimA_next = A.homology_dim(m - 1);
  r.rank_alpha_next = induced_rank(A, m - 1, B, m + 1, A.map_to(B, m - 1, alpha_shift, false));
  return r;
}

}  // namespace

template <class F>
LESReport check_les(const EqChainComplex<F>& C, int lo, int hi) {
  C.validate();
  LESReport rep;
  DegreewiseModel<F> minus(C, Model::minus), infty(C, Model::infty), plus(C, Model::plus),
      ord(C, Model::ord);
  for (int m = lo; m <= hi; ++m) {
    std::string e = les_degree(minus, infty, plus, 1, m).check();
    if (!e.empty()) {
      rep.ok = false;
      rep.first_failing_degree = m;
      rep.failing_sequence = "W-[-2] -> Winf -> W+";
      rep.detail = e;
      return rep;
    }
    e = les_degree(minus, minus, ord, 1, m).check();
    if (!e.empty()) {
      rep.ok = false;
      rep.first_failing_degree = m;
      rep.failing_sequence = "W-[-2] -> W- -> ord";
      rep.detail = e;
      return rep;
    }
  }
  return rep;
}

template <class F>
UAdicReport u_adic_pages(const EqChainComplex<F>& C, int max_page, int lo, int hi) {
  C.validate();
  UAdicReport rep;
  DegreewiseModel<F> plus(C, Model::plus);
  FilteredCells<F> fc;
  // Level -k for the cell u^k g, so F_p = {k >= -p} is increasing in p.
  fc.differential = [&](int m) { return plus.differential(m); };
  fc.levels = [&](int m) {
    std::vector<int> lev;
    for (int g : plus.cells(m)) lev.push_back(-plus.u_exponent(g, m));
    return lev;
  };
  for (int m = lo; m <= hi; ++m) {
    std::vector<int> lev = fc.levels(m);
    if (lev.empty()) continue;
    int pmax = *std::max_element(lev.begin(), lev.end());
    int pmin = *std::min_element(lev.begin(), lev.end());
    // Boundaries come from degree m - 1 and d lands in degree m + 1; E_r is
    // stationary once r exceeds the level spread of all three degrees.
    int spread_hi = pmax, spread_lo = pmin;
    for (int mm : {m - 1, m + 1})
      for (int l : fc.levels(mm)) {
        spread_hi = std::max(spread_hi, l);
        spread_lo = std::min(spread_lo, l);
      }
    int r_inf = spread_hi - spread_lo + 2;
    int total_inf = 0;
    for (int r = 0; r <= std::max(max_page, r_inf); ++r) {
      bool record = r <= max_page;
      for (int p = pmin; p <= pmax; ++p) {
        int dim = page_dim(fc, m, p, r);
        if (record && dim) rep.cells.push_back({r, -p, m, dim});
        if (r == std::max(max_page, r_inf)) total_inf += dim;
      }
    }
    if (total_inf != plus.homology_dim(m)) rep.converges = false;
  }
  FGModuleShape wplus = homology_plus(C);
  rep.plus_zero = wplus.is_zero();
  rep.ord_zero = ordinary_cohomology(C).empty();
  rep.vanishing_consistent = rep.ord_zero == rep.plus_zero;
  return rep;
}

#define DVR_INSTANTIATE(F)                                                                    \
  template struct EqChainComplex<F>;                                                          \
  template MinusHomology<F> homology_minus_detail<F>(const EqChainComplex<F>&, const SNFOptions&); \
  template FGModuleShape homology_minus<F>(const EqChainComplex<F>&, const SNFOptions&);      \
  template FGModuleShape homology_infty<F>(const EqChainComplex<F>&, const SNFOptions&);      \
  template FGModuleShape homology_plus<F>(const EqChainComplex<F>&, const SNFOptions&);       \
  template std::vector<DegreeCount> ordinary_cohomology<F>(const EqChainComplex<F>&);         \
  template LESReport check_les<F>(const EqChainComplex<F>&, int, int);                        \
  template UAdicReport u_adic_pages<F>(const EqChainComplex<F>&, int, int, int);

DVR_INSTANTIATE(Rational)
DVR_INSTANTIATE(NovikovElem)
#undef DVR_INSTANTIATE

}  // namespace dvr
