#include "dvr/floerlab.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace dvr {

std::string Weight::to_string() const {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

bool free_weight(const Weight& w, const std::vector<int>& positive_weights) {
  if (positive_weights.empty()) throw InputError("free_weight: no positive weights given");
  for (int m : positive_weights)
    if (m <= 0) throw InputError("free_weight: weight " + std::to_string(m) + " is not positive");
  if (w.a == 0 && w.b == 0) return false;
  for (int m : positive_weights) {
    long long ma = 1LL * m * w.a;
    if (w.b == 0) {
      if (ma == 0) return false;
      continue;
    }
    // ma ∈ {b, 2b, ...} iff ma = q·b with an integer q >= 1.
    if (ma % w.b == 0 && ma / w.b >= 1) return false;
  }
  return true;
}

std::string example_name(ExampleId id) {
  switch (id) {
    case ExampleId::c_plane: return "C";
    case ExampleId::tcp1: return "TCP1";
    case ExampleId::tcp1_twisted: return "TCP1_TWISTED";
    case ExampleId::oneg1: return "ONEG1";
    case ExampleId::monotone: return "MONOTONE_GENERIC";
  }
  return "?";
}

ExampleId parse_example_id(std::string_view text) {
  for (ExampleId id : {ExampleId::c_plane, ExampleId::tcp1, ExampleId::tcp1_twisted,
                       ExampleId::oneg1, ExampleId::monotone})
    if (example_name(id) == text) return id;
  throw InputError("unknown example '" + std::string(text) +
                   "' (expected C, TCP1, TCP1_TWISTED, ONEG1 or MONOTONE_GENERIC)");
}

namespace {

void require_free(const Weight& w, const std::vector<int>& weights) {
  if (!free_weight(w, weights)) throw DomainError("weight " + w.to_string() + " is not free");
}

template <class F>
USeries<F> mono(const Rational& c, int e, const FieldConfig& cfg) {
  if (c.is_zero()) return USeries<F>::zero();
  return USeries<F>::monomial(FieldTraits<F>::from_rational(c, cfg), e);
}

}  // namespace

// ---------------------------------------------------------------------------
// SlopeComplex

template <class F>
std::vector<Rational> SlopeComplex<F>::columns() const {
  std::set<Rational> s(slopes.begin(), slopes.end());
  return {s.begin(), s.end()};
}

template <class F>
int SlopeComplex<F>::column_of(int g) const {
  std::vector<Rational> cols = columns();
  return int(std::lower_bound(cols.begin(), cols.end(), slopes.at(g)) - cols.begin());
}

template <class F>
std::vector<int> SlopeComplex<F>::generators_up_to(const Rational& lambda) const {
  std::vector<int> out;
  for (int g = 0; g < int(slopes.size()); ++g)
    if (slopes[g] <= lambda) out.push_back(g);
  return out;
}

namespace {

template <class F>
EqChainComplex<F> subcomplex(const EqChainComplex<F>& C, const std::vector<int>& keep,
                             const std::string& name) {
  EqChainComplex<F> out;
  out.name = name;
  for (int g : keep) out.gens.push_back(C.gens[g]);
  out.d = keep.empty() ? DVRMatrix<F>(0, 0, C.config()) : C.d.submatrix(keep, keep);
  return out;
}

}  // namespace

template <class F>
SlopeComplex<F> SlopeComplex<F>::truncated(const Rational& lambda) const {
  std::vector<int> keep = generators_up_to(lambda);
  SlopeComplex out;
  out.complex = subcomplex(complex, keep, complex.name + "<=" + lambda.to_string());
  for (int g : keep) out.slopes.push_back(slopes[g]);
  return out;
}

template <class F>
EqChainComplex<F> SlopeComplex<F>::column_complex(int column) const {
  std::vector<int> keep;
  for (int g = 0; g < int(slopes.size()); ++g)
    if (column_of(g) == column) keep.push_back(g);
  return subcomplex(complex, keep, complex.name + "[col " + std::to_string(column) + "]");
}

template <class F>
void SlopeComplex<F>::validate() const {
  if (int(slopes.size()) != complex.size())
    throw InputError("slope list has " + std::to_string(slopes.size()) + " entries for " +
                     std::to_string(complex.size()) + " generators");
  complex.validate();
  for (int h = 0; h < complex.size(); ++h)
    for (int g = 0; g < complex.size(); ++g)
      if (!complex.d(h, g).no_terms() && slopes[h] > slopes[g])
        throw InputError("filtration violated by d: d(" + complex.gens[g].name + ") reaches " +
                         complex.gens[h].name + " of higher slope");
}

// ---------------------------------------------------------------------------
// Homology bases and continuation maps

namespace {

// Free K[[u]]-basis of H⁻ by homogeneous cycles, as cell vectors.
template <class F>
struct CycleBasis {
  FGModuleShape shape;
  std::vector<int> degrees;
  std::vector<std::vector<F>> reps;
};

template <class F>
KMatrix<F> column_of_vector(const std::vector<F>& v) {
  return KMatrix<F>::from_columns(int(v.size()), {v});
}

template <class F>
CycleBasis<F> cycle_basis(const DegreewiseModel<F>& M) {
  CycleBasis<F> out;
  out.shape = homology_minus(M.complex());
  if (!out.shape.torsion.empty())
    throw DomainError("homology of " + M.complex().name + " has torsion; no free cycle basis");
  std::map<int, int> wanted;
  for (int g : out.shape.free_power) wanted[g] += 1;
  for (auto [g, n] : wanted) {
    const int ncell = M.dim(g);
    KMatrix<F> span = M.boundaries(g);
    if (M.dim(g - 2) > 0) span = span.hcat(M.map_to(M, g - 2, 1, false) * M.cycles(g - 2));
    KMatrix<F> dm = M.differential(g);
    std::vector<std::vector<F>> cands;
    for (int c = 0; c < ncell; ++c) {
      bool cycle = true;
      for (int i = 0; i < dm.rows(); ++i)
        if (!(dm(i, c) == F(0))) cycle = false;
      if (!cycle) continue;
      std::vector<F> e(ncell, F(0));
      e[c] = F(1);
      cands.push_back(e);
    }
    KMatrix<F> Z = M.cycles(g);
    for (int c = 0; c < Z.cols(); ++c) cands.push_back(Z.column(c));
    int r = rank(span), found = 0;
    for (auto& v : cands) {
      if (found == n) break;
      KMatrix<F> ext = span.cols() ? span.hcat(column_of_vector(v)) : column_of_vector(v);
      int r2 = rank(ext);
      if (r2 > r) {
        span = ext;
        r = r2;
        out.degrees.push_back(g);
        out.reps.push_back(v);
        ++found;
      }
    }
    if (found != n)
      throw InvariantError("found " + std::to_string(found) + " of " + std::to_string(n) +
                           " homology generators in degree " + std::to_string(g));
  }
  return out;
}

// K-coordinates c_i of a homogeneous cycle e of degree m in
// e = Σ c_i u^{(m - g_i)/2} z_i mod boundaries.
template <class F>
std::vector<F> cycle_coordinates(const DegreewiseModel<F>& M, const CycleBasis<F>& B, int m,
                                 const std::vector<F>& e) {
  const int ncell = M.dim(m);
  std::vector<int> used;
  KMatrix<F> A(ncell, 0);
  for (std::size_t i = 0; i < B.degrees.size(); ++i) {
    int g = B.degrees[i];
    if (g > m || (m - g) % 2 != 0) continue;
    KMatrix<F> col = M.map_to(M, g, (m - g) / 2, false) * column_of_vector(B.reps[i]);
    A = A.cols() ? A.hcat(col) : col;
    used.push_back(int(i));
  }
  KMatrix<F> Bd = M.boundaries(m);
  KMatrix<F> full = A.cols() ? (Bd.cols() ? A.hcat(Bd) : A) : Bd;
  std::vector<F> out(B.degrees.size(), F(0));
  if (full.cols() == 0) {
    for (const F& x : e)
      if (!(x == F(0))) throw InvariantError("cycle outside the span of the homology basis");
    return out;
  }
  auto x = solve_linear(full, e);
  if (!x) throw InvariantError("element is not a cycle of degree " + std::to_string(m));
  for (std::size_t a = 0; a < used.size(); ++a) out[used[a]] = (*x)[a];
  return out;
}

// Cell-level inclusion of degree m for the generator map small -> big.
template <class F>
KMatrix<F> inclusion_cells(const DegreewiseModel<F>& small, const DegreewiseModel<F>& big,
                           const std::vector<int>& gen_map, int m) {
  std::vector<int> sc = small.cells(m), bc = big.cells(m);
  KMatrix<F> f(int(bc.size()), int(sc.size()));
  for (std::size_t a = 0; a < sc.size(); ++a) {
    int G = gen_map[sc[a]];
    auto it = std::find(bc.begin(), bc.end(), G);
    if (it == bc.end()) throw InvariantError("inclusion misses a cell");
    f(int(it - bc.begin()), int(a)) = F(1);
  }
  return f;
}

// Position in C_{<=to} of each generator of C_{<=from}.
template <class F>
std::vector<int> generator_map(const SlopeComplex<F>& C, const Rational& from, const Rational& to) {
  if (to < from) throw InputError("continuation from slope " + from.to_string() + " down to " +
                                  to.to_string());
  std::vector<int> small = C.generators_up_to(from), big = C.generators_up_to(to);
  std::vector<int> out;
  for (int g : small) out.push_back(int(std::find(big.begin(), big.end(), g) - big.begin()));
  return out;
}

}  // namespace

template <class F>
ContinuationMap<F> continuation_map(const SlopeComplex<F>& C, const Rational& from,
                                    const Rational& to) {
  std::vector<int> gmap = generator_map(C, from, to);
  SlopeComplex<F> S = C.truncated(from), T = C.truncated(to);
  DegreewiseModel<F> Ms(S.complex, Model::minus), Mt(T.complex, Model::minus);
  CycleBasis<F> bs = cycle_basis(Ms), bt = cycle_basis(Mt);
  ContinuationMap<F> out;
  out.source = bs.shape;
  out.target = bt.shape;
  out.source_degrees = bs.degrees;
  out.target_degrees = bt.degrees;
  const FieldConfig& cfg = C.complex.config();
  out.matrix = DVRMatrix<F>(int(bt.degrees.size()), int(bs.degrees.size()), cfg);
  for (std::size_t i = 0; i < bs.degrees.size(); ++i) {
    int m = bs.degrees[i];
    KMatrix<F> img = inclusion_cells(Ms, Mt, gmap, m) * column_of_vector(bs.reps[i]);
    std::vector<F> coords = cycle_coordinates(Mt, bt, m, img.column(0));
    for (std::size_t l = 0; l < coords.size(); ++l)
      if (!(coords[l] == F(0)))
        out.matrix(int(l), int(i)) = USeries<F>::monomial(coords[l], (m - bt.degrees[l]) / 2);
  }
  return out;
}

template <class F>
int continuation_rank(const SlopeComplex<F>& C, Model model, const Rational& from,
                      const Rational& to, int m) {
  std::vector<int> gmap = generator_map(C, from, to);
  SlopeComplex<F> S = C.truncated(from), T = C.truncated(to);
  DegreewiseModel<F> Ms(S.complex, model), Mt(T.complex, model);
  return induced_rank(Ms, m, Mt, m, inclusion_cells(Ms, Mt, gmap, m));
}

template <class F>
CokernelIdentity cokernel_identity(const SlopeComplex<F>& C, const Rational& from,
                                   const Rational& to, int lo, int hi) {
  CokernelIdentity out;
  std::vector<int> gmap = generator_map(C, from, to);
  SlopeComplex<F> S = C.truncated(from), T = C.truncated(to);
  DegreewiseModel<F> Ps(S.complex, Model::plus), Pt(T.complex, Model::plus);
  for (int m = lo; m <= hi; ++m)
    out.plus_kernel += Ps.homology_dim(m) - induced_rank(Ps, m, Pt, m, inclusion_cells(Ps, Pt, gmap, m));
  ContinuationMap<F> cm = continuation_map(C, from, to);
  if (cm.matrix.rows() != cm.matrix.cols()) {
    out.minus_cokernel = kInfinite;
    return out;
  }
  long long sum = 0;
  for (int e : smith_normal_form(cm.matrix).exponents) {
    if (e == kInfinite) {
      out.minus_cokernel = kInfinite;
      return out;
    }
    sum += e;
  }
  out.minus_cokernel = int(sum);
  return out;
}

// ---------------------------------------------------------------------------
// Slope spectral sequence

template <class F>
SlopeCells<F>::SlopeCells(const SlopeComplex<F>& C, Model model) : C_(&C), dw_(C.complex, model) {
  std::vector<int> col(C.complex.size());
  for (int g = 0; g < C.complex.size(); ++g) col[g] = C.column_of(g);
  fc_.differential = [this](int m) { return dw_.differential(m); };
  fc_.levels = [this, col](int m) {
    std::vector<int> lev;
    for (int g : dw_.cells(m)) lev.push_back(col[g]);
    return lev;
  };
}

template <class F>
std::vector<F> SlopeCells<F>::unit(int m, int g) const {
  std::vector<int> cells = dw_.cells(m);
  std::vector<F> v(cells.size(), F(0));
  auto it = std::find(cells.begin(), cells.end(), g);
  if (it == cells.end())
    throw InputError("generator " + C_->complex.gens.at(g).name + " has no cell in degree " +
                     std::to_string(m));
  v[it - cells.begin()] = F(1);
  return v;
}

int SlopeSS::dim(Model model, int page, int column, int degree) const {
  for (auto& c : cells)
    if (c.model == model && c.page == page && c.column == column && c.degree == degree) return c.dim;
  return 0;
}

int SlopeSS::column_total(Model model, int page, int column) const {
  int n = 0;
  for (auto& c : cells)
    if (c.model == model && c.page == page && c.column == column) n += c.dim;
  return n;
}

std::string SlopeSS::table(Model model, int page) const {
  std::ostringstream os;
  os << "E_" << page << " " << model_name(model) << "\n";
  os << "deg |";
  for (auto& s : columns) {
    std::string t = s.to_string();
    os << " " << std::string(t.size() < 4 ? 4 - t.size() : 0, ' ') << t;
  }
  os << "\n";
  for (int m = hi; m >= lo; --m) {
    std::string ds = std::to_string(m);
    os << std::string(ds.size() < 3 ? 3 - ds.size() : 0, ' ') << ds << " |";
    for (std::size_t p = 0; p < columns.size(); ++p) {
      int d = dim(model, page, int(p), m);
      std::string t = d ? std::to_string(d) : ".";
      os << " " << std::string(4 - t.size(), ' ') << t;
    }
    os << "\n";
  }
  return os.str();
}

template <class F>
SlopeSS slope_ss(const SlopeComplex<F>& C, const Weight& w, int max_page, int lo, int hi,
                 const std::vector<int>& positive_weights) {
  C.validate();
  if (max_page < 0) throw InputError("slope_ss: negative page count");
  if (lo > hi) throw InputError("slope_ss: empty degree window");
  SlopeSS ss;
  ss.columns = C.columns();
  ss.lo = lo;
  ss.hi = hi;
  ss.max_page = max_page;
  ss.free = free_weight(w, positive_weights);
  const int P = int(ss.columns.size());
  for (Model model : {Model::minus, Model::infty, Model::plus}) {
    SlopeCells<F> sc(C, model);
    for (int m = lo; m <= hi; ++m)
      for (int r = 0; r <= std::max(max_page, 1); ++r)
        for (int p = 0; p < P; ++p) {
          int d = page_dim(sc.cells(), m, p, r);
          if (r == 1 && p > 0 && model == Model::infty && d) ss.infty_higher_vanish = false;
          if (r <= max_page && d) ss.cells.push_back({model, r, p, m, d});
        }
  }
  for (int p = 1; p < P; ++p) {
    FGModuleShape col = homology_minus(C.column_complex(p));
    if (!col.free_power.empty() || !col.free_laurent.empty()) ss.minus_higher_torsion = false;
  }
  if (!ss.free) {
    ss.infty_higher_vanish = true;
    ss.minus_higher_torsion = true;
  }
  return ss;
}

// ---------------------------------------------------------------------------
// The plane

CLabParams CLabParams::specialization(int k_max) {
  CLabParams p;
  p.k_max = k_max;
  for (int k = 1; k <= k_max; ++k) {
    p.alpha.push_back(Rational(1));
    p.beta.push_back(Rational(k));
  }
  return p;
}

CLabParams CLabParams::sample(int k_max, Sampler& s) {
  CLabParams p;
  p.k_max = k_max;
  for (int k = 1; k <= k_max; ++k) {
    p.alpha.push_back(s.nonzero_rational());
    p.beta.push_back(s.nonzero_rational());
  }
  return p;
}

void CLabParams::validate() const {
  if (k_max < 0) throw InputError("k_max must be nonnegative");
  if (int(alpha.size()) < k_max || int(beta.size()) < k_max)
    throw InputError("need " + std::to_string(k_max) + " values of alpha and beta");
  for (int k = 0; k < k_max; ++k) {
    if (beta[k].is_zero()) throw InputError("beta_" + std::to_string(k + 1) + " must be nonzero");
    if (alpha[k].is_zero() && !allow_zero_alpha)
      throw InputError("alpha_" + std::to_string(k + 1) + " must be nonzero");
  }
  require_free(weight, {1});
}

SlopeComplex<Rational> build_C(const CLabParams& p) {
  p.validate();
  const int K = p.k_max;
  SlopeComplex<Rational> C;
  C.complex.name = "C";
  // Order x_0, x_1, y_1, x_2, y_2, ...
  auto xi = [](int k) { return k == 0 ? 0 : 2 * k - 1; };
  auto yi = [](int k) { return 2 * k; };
  C.complex.gens.push_back({"x0", 0});
  C.slopes.push_back(Rational(0));
  for (int k = 1; k <= K; ++k) {
    C.complex.gens.push_back({"x" + std::to_string(k), -2 * k});
    C.complex.gens.push_back({"y" + std::to_string(k), -2 * k + 1});
    C.slopes.push_back(Rational(k));
    C.slopes.push_back(Rational(k));
  }
  const FieldConfig cfg = FieldConfig::rational();
  C.complex.d = QMatrix(2 * K + 1, 2 * K + 1, cfg);
  for (int k = 1; k <= K; ++k) {
    C.complex.d(xi(k - 1), yi(k)) = mono<Rational>(p.alpha[k - 1], 0, cfg);
    C.complex.d(xi(k), yi(k)) = mono<Rational>(p.beta[k - 1], 1, cfg);
  }
  C.validate();
  return C;
}

bool CLabReport::ok() const {
  for (auto& r : rows)
    if (!r.ok()) return false;
  for (auto& c : zigzag_coefficients)
    if (c.is_zero()) return false;
  return deaths_ok;
}

namespace {

IntPoly poly_of(std::vector<long long> c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
  return IntPoly{c};
}

FGModuleShape free_shape(std::vector<int> degrees) {
  FGModuleShape s;
  s.free_power = std::move(degrees);
  s.normalize();
  return s;
}

}  // namespace

CLabReport c_lab_report(const CLabParams& p) {
  SlopeComplex<Rational> C = build_C(p);
  const int K = p.k_max;
  CLabReport rep;
  rep.params = p;
  Rational gamma_expected(1);
  for (int k = 0; k <= K; ++k) {
    if (k > 0) {
      if (p.alpha[k - 1].is_zero())
        gamma_expected = Rational(0);
      else
        gamma_expected = gamma_expected * (-p.beta[k - 1] / p.alpha[k - 1]);
    }
    CLabTruncation t;
    t.k = k;
    SlopeComplex<Rational> T = C.truncated(Rational(k));
    t.minus = homology_minus(T.complex);
    t.infty = homology_infty(T.complex);
    t.plus = homology_plus(T.complex);
    t.ordinary = ordinary_cohomology(T.complex);
    FGModuleShape em = free_shape({-2 * k}), ei, ep;
    ei.free_laurent = {-2 * k};
    ep.tails = {-2 * k};
    t.shape_ok = t.minus == em && t.infty == ei && t.plus == ep;
    if (t.minus.torsion.empty()) {
      ContinuationMap<Rational> cm = continuation_map(C, Rational(0), Rational(k));
      t.exponents = smith_normal_form(cm.matrix).exponents;
      const QSeries& e = cm.matrix(0, 0);
      t.gamma = e.no_terms() ? Rational(0) : e.coefficient(k);
      t.valuation = valuation_of<Rational>({QSeries::constant(Rational(1))}, cm.matrix, cm.target);
      InducedFiltration<Rational> f = induced_filtration(cm.matrix, cm.target);
      t.slice = reduced_slice(f);
      t.filtration = filtration_polynomial(f);
      t.cokernel = cokernel_identity(C, Rational(0), Rational(k), -2 * k - 4, 4);
    }
    std::vector<long long> ones(std::size_t(k) + 1, 1), tk(std::size_t(k) + 1, 0);
    tk[std::size_t(k)] = 1;
    t.slice_ok = t.slice == poly_of(ones);
    t.filtration_ok = t.filtration == poly_of(tk) && t.valuation.is_finite() &&
                      t.valuation.value == k && t.gamma == gamma_expected;
    t.ord_ok = t.ordinary == std::vector<DegreeCount>{{-2 * k, 1}};
    if (k < K) {
      t.ord_step_rank = continuation_rank(C, Model::ord, Rational(k), Rational(k + 1), -2 * k);
      t.ord_ok = t.ord_ok && t.ord_step_rank == 0;
    }
    rep.rows.push_back(t);
  }
  SlopeCells<Rational> sc(C, Model::plus);
  rep.deaths_ok = true;
  for (int j = 0; j < K; ++j) {
    int last = -1;
    const int top = K + 2;
    for (int r = 0; r <= top; ++r)
      if (page_dim(sc.cells(), -2 * j, 0, r) > 0) last = r;
    if (last == top) last = -1;
    rep.death_page.push_back(last);
    if (last != j + 1) rep.deaths_ok = false;
    int y = 2 * (j + 1);
    auto res = zigzag(sc.cells(), -2 * j - 1, j + 1, j + 1, sc.unit(-2 * j - 1, y));
    Rational c(0);
    if (res) {
      std::vector<int> cells = sc.model().cells(-2 * j);
      auto it = std::find(cells.begin(), cells.end(), 0);
      if (it != cells.end()) c = (*res)[it - cells.begin()];
    }
    rep.zigzag_coefficients.push_back(c);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Slice classes

IntPoly n_poly(int k) {
  if (k < 1) throw DomainError("N_k needs k >= 1");
  std::vector<long long> c(std::size_t(k) + 2, 2);
  c[std::size_t(k)] = 1;
  c[std::size_t(k) + 1] = 1;
  return poly_of(c);
}

IntPoly z_poly(int k) {
  if (k < 0) throw DomainError("Z_k needs k >= 0");
  return poly_of(std::vector<long long>(std::size_t(k) + 1, 2));
}

IntPoly x_poly(int k) {
  if (k < 0) throw DomainError("X_k needs k >= 0");
  std::vector<long long> c(std::size_t(k) + 2, 2);
  c[std::size_t(k) + 1] = 1;
  return poly_of(c);
}

IntPoly SliceLabel::poly() const {
  switch (cls) {
    case SliceClass::N: return n_poly(index);
    case SliceClass::Z: return z_poly(index);
    case SliceClass::X: return x_poly(index);
    case SliceClass::other: break;
  }
  throw DomainError("no slice polynomial for an unclassified pair");
}

std::string SliceLabel::to_string() const {
  switch (cls) {
    case SliceClass::N: return "N_" + std::to_string(index);
    case SliceClass::Z: return "Z_" + std::to_string(index);
    case SliceClass::X: return "X_" + std::to_string(index);
    case SliceClass::other: break;
  }
  return "other";
}

SliceLabel classify(const std::vector<int>& exponents) {
  SliceLabel l;
  if (exponents.size() != 2) return l;
  int a = std::min(exponents[0], exponents[1]), b = std::max(exponents[0], exponents[1]);
  if (b == kInfinite) return l;
  if (a == b) l = {SliceClass::Z, a};
  else if (b == a + 1) l = {SliceClass::X, a};
  else if (b == a + 2) l = {SliceClass::N, a + 1};
  return l;
}

// ---------------------------------------------------------------------------
// Cotangent bundle of the sphere

TCP1Params TCP1Params::sample(int k_max, Sampler& s, double force_z) {
  TCP1Params p;
  p.k_max = k_max;
  Rational A, B, C, D;
  for (int k = 0; k < k_max; ++k) {
    Rational beta = s.nonzero_rational();
    Rational alpha = s.rational();
    if (k >= 1 && !B.is_zero() && s.coin(force_z)) alpha = A * beta / B;
    p.alpha.push_back(alpha);
    p.beta.push_back(beta);
    if (k == 0) {
      A = Rational(0);
      B = Rational(1);
      C = beta.inv();
      D = -alpha / beta;
    } else {
      Rational A2 = B / beta, B2 = A - alpha * B / beta, C2 = D / beta, D2 = C - alpha * D / beta;
      A = A2;
      B = B2;
      C = C2;
      D = D2;
    }
  }
  return p;
}

void TCP1Params::validate() const {
  if (k_max < 0) throw InputError("k_max must be nonnegative");
  if (int(alpha.size()) < k_max || int(beta.size()) < k_max)
    throw InputError("need " + std::to_string(k_max) + " values of alpha and beta");
  for (int k = 0; k < k_max; ++k)
    if (beta[k].is_zero()) throw InputError("beta_" + std::to_string(k + 1) + " must be nonzero");
  require_free(weight, {1});
}

DirectedSystem<Rational> tcp1_system(const TCP1Params& p) {
  p.validate();
  const FieldConfig cfg = FieldConfig::rational();
  DirectedSystem<Rational> sys;
  sys.rank = 2;
  sys.config = cfg;
  for (int k = 0; k < p.k_max; ++k) {
    QMatrix M(2, 2, cfg);
    M(0, 1) = mono<Rational>(p.beta[k].inv(), 2, cfg);
    M(1, 0) = QSeries::constant(Rational(1));
    M(1, 1) = mono<Rational>(-p.alpha[k] / p.beta[k], 1, cfg);
    sys.steps.push_back(M);
  }
  sys.validate();
  return sys;
}

bool TCP1Report::ok() const {
  for (auto& s : steps)
    if (!s.ok) return false;
  return z_then_n;
}

namespace {

// Coefficient of u^e in a monomial entry; sets ok = false if the entry has
// any other term.
Rational monomial_coefficient(const QSeries& s, int e, bool& ok) {
  if (s.no_terms()) return Rational(0);
  if (s.terms().size() != 1 || s.terms().front().first != e) ok = false;
  return s.coefficient(e);
}

}  // namespace

TCP1Report tcp1_report(const TCP1Params& p, Exec exec) {
  DirectedSystem<Rational> sys = tcp1_system(p);
  const int K = p.k_max;
  std::vector<std::vector<int>> table = composite_factor_table(sys, K, exec);
  FGModuleShape W = free_shape({0, 0});
  TCP1Report rep;
  Rational A, B, C, D;
  for (int k = 0; k <= K; ++k) {
    TCP1Step st;
    st.k = k;
    st.exponents = table[k];
    QMatrix R = composite(sys, k);
    InducedFiltration<Rational> f = induced_filtration(R, W);
    st.slice = reduced_slice(f);
    st.label = classify(st.exponents);
    st.valuation = valuation_of<Rational>({QSeries::constant(Rational(1)), QSeries::zero()}, R, W);
    bool ok = (st.label.cls == SliceClass::N || st.label.cls == SliceClass::Z) && st.label.index == k;
    if (ok) ok = st.slice == st.label.poly();
    if (k == 0) {
      st.form_ok = R == QMatrix::identity(2, sys.config);
      ok = ok && st.form_ok && st.label == SliceLabel{SliceClass::Z, 0};
    } else {
      const Rational al = p.alpha[k - 1], be = p.beta[k - 1];
      if (k == 1) {
        A = Rational(0);
        B = Rational(1);
        C = be.inv();
        D = -al / be;
      } else {
        Rational A2 = B / be, B2 = A - al * B / be, C2 = D / be, D2 = C - al * D / be;
        A = A2;
        B = B2;
        C = C2;
        D = D2;
      }
      st.B_recursion = B;
      st.form_ok = true;
      st.A = monomial_coefficient(R(0, 0), k, st.form_ok);
      st.C = monomial_coefficient(R(0, 1), k + 1, st.form_ok);
      st.B = monomial_coefficient(R(1, 0), k - 1, st.form_ok);
      st.D = monomial_coefficient(R(1, 1), k, st.form_ok);
      bool is_z = st.label.cls == SliceClass::Z;
      ok = ok && st.form_ok && st.B == st.B_recursion && st.A == A && st.C == C && st.D == D;
      ok = ok && !(st.A * st.D - st.B * st.C).is_zero();
      ok = ok && (st.B.is_zero() == is_z);
      ok = ok && st.valuation.is_finite() && (st.valuation.value >= k) == is_z;
      if (!is_z) ok = ok && st.valuation.value == k - 1;
      if (k == 1) ok = ok && st.label == SliceLabel{SliceClass::N, 1} && st.B == Rational(1);
    }
    st.ok = ok;
    rep.steps.push_back(st);
  }
  for (int k = 0; k + 1 <= K; ++k)
    if (rep.steps[k].label.cls == SliceClass::Z && rep.steps[k + 1].label.cls != SliceClass::N)
      rep.z_then_n = false;
  return rep;
}

DirectedSystem<Rational> tcp1_rotation_system(const TCP1Rotation& r, int count) {
  const FieldConfig cfg = FieldConfig::rational();
  QMatrix Q(2, 2, cfg);
  Q(0, 0) = mono<Rational>(r.A, 1, cfg);
  Q(0, 1) = mono<Rational>(r.B, 2, cfg);
  Q(1, 0) = mono<Rational>(Rational(-2) * (Rational(1) + r.lambda), 0, cfg);
  Q(1, 1) = mono<Rational>(r.C, 1, cfg);
  return DirectedSystem<Rational>::constant(Q, count);
}

PeriodicityReport periodicity_check(const DirectedSystem<Rational>& sys, int K) {
  PeriodicityReport rep;
  std::vector<std::vector<int>> table = composite_factor_table(sys, K);
  for (auto& e : table) rep.labels.push_back(classify(e));
  for (int k = 1; k <= K; ++k) {
    if (rep.labels[k] != SliceLabel{SliceClass::Z, k}) continue;
    for (int N = 2; N * k <= K; ++N) {
      rep.implications.push_back({k, N * k});
      if (rep.labels[N * k] != SliceLabel{SliceClass::Z, N * k}) rep.ok = false;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Twisted action

std::vector<Rational> twisted_slopes(int k_max) {
  std::vector<Rational> out{Rational(0)};
  for (int k = 0; k < k_max; ++k) {
    out.push_back(Rational(3 * k + 1, 3));
    out.push_back(Rational(3 * k + 2, 3));
    out.push_back(Rational(k + 1));
  }
  return out;
}

namespace {

// Generator degrees of E⁻ at the i-th twisted slope.
std::vector<int> twisted_expected(int i) {
  if (i == 0) return {0, 2};
  int k = (i - 1) / 3, r = (i - 1) % 3;
  if (r == 0) return {-4 * k, -4 * k};
  if (r == 1) return {-4 * k - 2, -4 * k};
  return {-4 * k - 4, -4 * k - 2};
}

}  // namespace

namespace {

struct TwistedBuilder {
  const FieldConfig cfg = FieldConfig::rational();
  std::vector<Generator> gens;
  std::vector<Rational> slopes;
  std::map<std::pair<int, int>, QSeries> d;

  SlopeComplex<Rational> assemble() const {
    SlopeComplex<Rational> C;
    C.complex.name = "twisted";
    C.complex.gens = gens;
    C.slopes = slopes;
    const int n = int(gens.size());
    C.complex.d = QMatrix(n, n, cfg);
    for (auto& [ij, v] : d) C.complex.d(ij.first, ij.second) = v;
    return C;
  }

  // Adds the chain of the degree-m cell vector w of P to d(q).
  void add_to_boundary(const DegreewiseModel<Rational>& M, int m, const std::vector<Rational>& w, int q) {
    std::vector<int> cells = M.cells(m);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (w[c].is_zero()) continue;
      QSeries& e = d[{cells[c], q}];
      e = e + QSeries::monomial(w[c], M.u_exponent(cells[c], m));
    }
  }
};

std::vector<Rational> combine(const std::vector<std::vector<Rational>>& vs, const std::vector<Rational>& cs,
                              std::size_t n) {
  std::vector<Rational> out(n, Rational(0));
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t c = 0; c < n; ++c) out[c] = out[c] + cs[i] * vs[i][c];
  return out;
}

int index_of_degree(const std::vector<int>& degrees, int g) {
  auto it = std::find(degrees.begin(), degrees.end(), g);
  if (it == degrees.end()) throw InvariantError("no homology generator in degree " + std::to_string(g));
  return int(it - degrees.begin());
}

}  // namespace

SlopeComplex<Rational> build_twisted(const TwistedParams& p) {
  if (p.k_max < 0) throw InputError("k_max must be nonnegative");
  if (p.p_zero < 0 || p.p_zero > 1 || p.p_z_branch < 0 || p.p_z_branch > 1)
    throw InputError("probabilities must lie in [0, 1]");
  require_free(p.weight, {1, 3});
  Sampler s(p.seed);
  std::vector<Rational> slopes = twisted_slopes(p.k_max);
  for (int attempt = 0; attempt < 200; ++attempt) {
    TwistedBuilder tb;
    tb.gens = {{"x0", 0}, {"y0", 2}};
    tb.slopes = {Rational(0), Rational(0)};
    std::vector<int> cycle_gens{0, 1};
    bool good = true;
    for (std::size_t i = 1; i < slopes.size() && good; ++i) {
      const int k = int(i - 1) / 3, r = int(i - 1) % 3;
      const int p_deg = r == 0 ? -4 * k : r == 1 ? -4 * k - 2 : -4 * k - 4;
      const int e = r == 2 ? 2 : 1;
      const int target = p_deg + 2 * e;  // degree of d(q)
      SlopeComplex<Rational> P = tb.assemble();
      DegreewiseModel<Rational> M(P.complex, Model::minus);
      std::vector<int> cells = M.cells(target);
      std::vector<Rational> w(cells.size(), Rational(0));
      for (std::size_t c = 0; c < cells.size(); ++c)
        if (std::find(cycle_gens.begin(), cycle_gens.end(), cells[c]) != cycle_gens.end() &&
            !s.coin(p.p_zero))
          w[c] = s.nonzero_rational();
      if (r == 1 && s.coin(p.p_z_branch)) {
        // Kill the image of x_0 modulo u: d(q) = t · (R x_0 / u^{2k}).
        ContinuationMap<Rational> cm = continuation_map(P, Rational(0), slopes[i - 1]);
        CycleBasis<Rational> B = cycle_basis(M);
        std::vector<Rational> rho;
        for (int l = 0; l < cm.matrix.rows(); ++l) rho.push_back(cm.matrix(l, 0).coefficient(2 * k));
        w = combine(B.reps, rho, cells.size());
        Rational t = s.nonzero_rational();
        for (auto& x : w) x = x * t;
      } else if (r == 2) {
        // Step to k+1 with e_1, e_2 in degrees -4k-2, -4k: w = a u e_1 + b e_2.
        // The composite has B = r11 - (a/b) r21, so a = b r11 / r21 gives Z.
        CycleBasis<Rational> B = cycle_basis(M);
        std::vector<Rational> coords = cycle_coordinates(M, B, target, w);
        const int i1 = index_of_degree(B.degrees, -4 * k - 2), i2 = index_of_degree(B.degrees, -4 * k);
        if (coords[i2].is_zero()) {
          good = false;
          break;
        }
        ContinuationMap<Rational> cm = continuation_map(P, Rational(0), slopes[i - 1]);
        Rational r11 = cm.matrix(i1, 0).coefficient(2 * k + 1), r21 = cm.matrix(i2, 0).coefficient(2 * k);
        if (!r21.is_zero()) {
          Rational shift = coords[i2] * r11 / r21 - coords[i1];
          KMatrix<Rational> ue1 = M.map_to(M, -4 * k - 2, 1, false) * column_of_vector(B.reps[i1]);
          for (std::size_t c = 0; c < cells.size(); ++c) w[c] = w[c] + shift * ue1(int(c), 0);
        }
      }
      const int pi = int(tb.gens.size()), q = pi + 1;
      std::string tag = slopes[i].to_string();
      tb.gens.push_back({"p" + tag, p_deg});
      tb.gens.push_back({"q" + tag, target - 1});
      tb.slopes.push_back(slopes[i]);
      tb.slopes.push_back(slopes[i]);
      tb.d[{pi, q}] = QSeries::monomial(s.nonzero_rational(), e);
      tb.add_to_boundary(M, target, w, q);
      cycle_gens.push_back(pi);
      SlopeComplex<Rational> N = tb.assemble();
      N.validate();
      good = homology_minus(N.complex) == free_shape(twisted_expected(int(i)));
    }
    if (good) return tb.assemble();
  }
  throw InvariantError("no torsion-free twisted complex found for seed " + std::to_string(p.seed));
}

DirectedSystem<Rational> twisted_tcp1_system(const SlopeComplex<Rational>& C, int k_max) {
  std::vector<Rational> slopes = twisted_slopes(k_max);
  DirectedSystem<Rational> sys;
  sys.rank = 2;
  sys.config = C.complex.config();
  for (std::size_t i = 0; i + 1 < slopes.size(); ++i)
    sys.steps.push_back(continuation_map(C, slopes[i], slopes[i + 1]).matrix);
  sys.validate();
  return sys;
}

TwistedReport twisted_report(const TwistedParams& p, int lo, int hi) {
  SlopeComplex<Rational> C = build_twisted(p);
  std::vector<Rational> slopes = twisted_slopes(p.k_max);
  DirectedSystem<Rational> sys = twisted_tcp1_system(C, p.k_max);
  FGModuleShape W = free_shape({0, 0});
  TwistedReport rep;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    TwistedStep st;
    st.slope = slopes[i];
    SlopeComplex<Rational> T = C.truncated(slopes[i]);
    st.minus = homology_minus(T.complex);
    st.expected_degrees = twisted_expected(int(i));
    st.shape_ok = st.minus == free_shape(st.expected_degrees);
    ContinuationMap<Rational> cm = continuation_map(C, Rational(0), slopes[i]);
    QMatrix R = composite(sys, int(i));
    if (!(cm.matrix == R)) rep.composite_ok = false;
    st.exponents = smith_normal_form(cm.matrix).exponents;
    if (smith_normal_form(R).exponents != st.exponents) rep.composite_ok = false;
    st.slice = reduced_slice(induced_filtration(cm.matrix, W));
    SliceLabel l = classify(st.exponents);
    st.label = l.to_string();
    if (l.cls != SliceClass::other && !(st.slice == l.poly())) rep.x_ok = false;
    if (i == 0 && !(l == SliceLabel{SliceClass::Z, 0})) rep.x_ok = false;
    if (i > 0 && (i - 1) % 3 == 0) {
      int k = int(i - 1) / 3;
      if (!(l == SliceLabel{SliceClass::X, 2 * k})) rep.x_ok = false;
    }
    // E_∞ of the truncated slope spectral sequence against the free shape.
    SlopeCells<Rational> sc(T, Model::minus);
    const int P = int(T.columns().size());
    FGModuleShape exp = free_shape(st.expected_degrees);
    for (int m = lo; m <= hi; ++m) {
      int total = 0;
      for (int q = 0; q < P; ++q) total += page_dim(sc.cells(), m, q, P + 1);
      if (total != exp.dim_in_degree(m)) rep.ss_ok = false;
    }
    if (!st.shape_ok) rep.ss_ok = false;
    rep.steps.push_back(st);
  }
  for (int k = 0; k < p.k_max; ++k) {
    SliceLabel a = classify(rep.steps[3 * k + 2].exponents);
    SliceLabel b = classify(rep.steps[3 * k + 3].exponents);
    bool first = a == SliceLabel{SliceClass::N, 2 * k + 1} && b == SliceLabel{SliceClass::Z, 2 * k + 2};
    bool second = a == SliceLabel{SliceClass::Z, 2 * k + 1} && b == SliceLabel{SliceClass::N, 2 * k + 2};
    if (!first && !second) rep.dichotomy_ok = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Negative line bundle

ONeg1Params ONeg1Params::sample(int k_max, Sampler& s, const std::vector<int>& degenerate_at) {
  ONeg1Params p;
  p.k_max = k_max;
  for (int k = 0; k < k_max; ++k) {
    bool degenerate = std::find(degenerate_at.begin(), degenerate_at.end(), k) != degenerate_at.end();
    std::array<Rational, 4> a{s.rational(), s.rational(), s.rational(), s.nonzero_rational()};
    if (degenerate) {
      a[1] = s.nonzero_rational();
      a[2] = s.nonzero_rational();
      a[3] = Rational(0);
    }
    p.A.push_back(a);
  }
  return p;
}

void ONeg1Params::validate() const {
  if (k_max < 0) throw InputError("k_max must be nonnegative");
  if (int(A.size()) < k_max) throw InputError("need " + std::to_string(k_max) + " matrices A");
  for (int k = 0; k < k_max; ++k)
    if (A[k][3].is_zero() && (A[k][1] * A[k][2]).is_zero())
      throw InputError("step " + std::to_string(k) + ": det r vanishes (A22 = 0 and A12·A21 = 0)");
  require_free(weight, {1});
}

DirectedSystem<NovikovElem> oneg1_system(const ONeg1Params& p) {
  p.validate();
  const FieldConfig cfg = FieldConfig::novikov(Rational(16), 2);
  DirectedSystem<NovikovElem> sys;
  sys.rank = 2;
  sys.config = cfg;
  NovikovElem T = NovikovElem::monomial(Rational(1), Rational(1), std::nullopt, 2);
  for (int k = 0; k < p.k_max; ++k) {
    const auto& a = p.A[k];
    NMatrix Q(2, 2, cfg);
    std::vector<NSeries::Term> t00{{0, T}};
    if (!a[0].is_zero()) t00.push_back({1, FieldTraits<NovikovElem>::from_rational(a[0], cfg)});
    Q(0, 0) = NSeries::from_terms(t00);
    Q(0, 1) = mono<NovikovElem>(a[1], 1, cfg);
    Q(1, 0) = mono<NovikovElem>(a[2], 1, cfg);
    Q(1, 1) = mono<NovikovElem>(a[3], 1, cfg);
    sys.steps.push_back(Q);
  }
  sys.validate();
  return sys;
}

bool ONeg1Report::ok() const {
  for (auto& s : steps)
    if (!s.ok) return false;
  return limit_ok;
}

ONeg1Report oneg1_report(const ONeg1Params& p) {
  DirectedSystem<NovikovElem> sys = oneg1_system(p);
  const int K = p.k_max;
  FGModuleShape W = free_shape({0, 0});
  ONeg1Report rep;
  int m = 0;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) m += p.A[k - 1][3].is_zero() ? 2 : 1;
    ONeg1Step st;
    st.k = k;
    st.expected_m = m;
    NMatrix R = composite(sys, k);
    st.exponents = smith_normal_form(R).exponents;
    InducedFiltration<NovikovElem> f = induced_filtration(R, W);
    st.slice = reduced_slice(f);
    st.filtration = filtration_polynomial(f);
    std::vector<long long> s(std::size_t(m) + 1, 1), fp(std::size_t(m) + 1, 0);
    s[0] = 2;
    fp[0] += 1;
    fp[std::size_t(m)] += 1;
    st.ok = st.exponents == std::vector<int>{0, m} && st.slice == poly_of(s) &&
            st.filtration == poly_of(fp);
    rep.steps.push_back(st);
  }
  rep.limit = limit_shape(sys, K);
  rep.limit_ok = rep.limit.to_string() == (K >= 1 ? "K[[u]] ⊕ K((u))" : "K[[u]]^2");
  return rep;
}

bool generates_power_summand(const DirectedSystem<NovikovElem>& sys, int k,
                             const std::vector<NSeries>& w) {
  if (int(w.size()) != sys.rank) throw InputError("vector has the wrong length");
  bool unimodular = false;
  for (auto& x : w)
    if (x.valuation().is_finite() && x.valuation().value == 0) unimodular = true;
  if (!unimodular) return false;
  NMatrix R = composite(sys, k);
  for (int i = 0; i < R.rows(); ++i) {
    NSeries acc = NSeries::zero();
    for (int j = 0; j < R.cols(); ++j) acc = acc + R(i, j) * w[j];
    Valuation v = acc.valuation();
    if (v.is_finite() && v.value == 0) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Monotone block structure

std::function<QMatrix(int)> monotone_sampler(int t, int s, std::uint64_t seed) {
  if (t < 0 || s < 0 || t + s == 0) throw InputError("monotone blocks need t, s >= 0, t + s > 0");
  return [t, s, seed](int k) {
    Sampler smp(seed * 1000003ULL + std::uint64_t(k) * 7919ULL + 17);
    const int n = t + s;
    const FieldConfig cfg = FieldConfig::rational();
    for (;;) {
      KMatrix<Rational> W(t, t);
      for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) W(i, j) = smp.rational();
      if (rank(W) != t) continue;
      QMatrix Q(n, n, cfg);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          std::vector<QSeries::Term> terms;
          if (i < t && j < t) terms.push_back({0, W(i, j)});
          Rational c1 = smp.coin(0.15) ? Rational(0) : smp.nonzero_rational();
          terms.push_back({1, c1});
          if (smp.coin(0.3)) terms.push_back({2, smp.nonzero_rational()});
          Q(i, j) = QSeries::from_terms(terms);
        }
      if (det(Q).value.no_terms()) continue;
      return Q;
    }
  };
}

namespace {

std::string monotone_expected(int t, int s) {
  std::vector<std::string> parts;
  if (t > 0) parts.push_back(t == 1 ? "K[[u]]" : "K[[u]]^" + std::to_string(t));
  if (s > 0) parts.push_back(s == 1 ? "K((u))" : "K((u))^" + std::to_string(s));
  if (parts.empty()) return "0";
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out += " ⊕ " + parts[i];
  return out;
}
}  // namespace

MonotoneReport monotone_structure(int t, int s, int k_max, const std::function<QMatrix(int)>& sampler,
                                  int noninjective_at, int kernel_dim) {
  if (k_max < 1) throw InputError("k_max must be positive");
  if (noninjective_at >= 0 && (kernel_dim < 1 || kernel_dim > s))
    throw InputError("kernel_dim must lie in [1, s]");
  if (noninjective_at >= k_max) throw InputError("injected failure beyond the computed steps");
  const int n = t + s;
  DirectedSystem<Rational> sys;
  sys.rank = n;
  sys.config = FieldConfig::rational();
  for (int k = 0; k < k_max; ++k) {
    QMatrix Q = sampler(k);
    if (Q.rows() != n || Q.cols() != n) throw InputError("sampler returned a matrix of the wrong size");
    if (k == noninjective_at)
      for (int i = 0; i < n; ++i)
        for (int j = n - kernel_dim; j < n; ++j) Q(i, j) = QSeries::zero();
    sys.steps.push_back(Q);
  }
  sys.validate();
  MonotoneReport rep;
  rep.t = t;
  rep.s = s;
  rep.k_max = k_max;
  rep.expected = monotone_expected(t, s);
  std::vector<std::vector<int>> table = composite_factor_table(sys, k_max);
  rep.factors_ok = true;
  for (int k = 1; k <= k_max; ++k) {
    int units = 0, inf = 0;
    bool big = true;
    for (int e : table[k]) {
      if (e == 0) ++units;
      else if (e == kInfinite) ++inf;
      else if (e < k) big = false;
    }
    bool failed = noninjective_at >= 0 && k > noninjective_at;
    int want_inf = failed ? kernel_dim : 0;
    if (units != t || inf != want_inf || (!failed && !big)) rep.factors_ok = false;
  }
  rep.limit = limit_shape(sys, k_max);
  rep.kernel_rank = rep.limit.kernel_rank;
  rep.shape_ok = rep.limit.to_string() == rep.expected &&
                 rep.kernel_rank == (noninjective_at >= 0 ? kernel_dim : 0);
  QMatrix R = composite(sys, k_max);
  SNFResult<Rational> snf = smith_normal_form(R);
  std::vector<std::vector<Rational>> ker;
  for (int c = 0; c < n; ++c)
    if (snf.exponents[c] == kInfinite) {
      std::vector<Rational> v;
      for (int i = 0; i < n; ++i) v.push_back(snf.V(i, c).coefficient(0));
      ker.push_back(v);
    }
  rep.kernel_in_s_block = int(ker.size()) == rep.kernel_rank;
  for (auto& v : ker)
    for (int i = 0; i < t; ++i)
      if (!v[i].is_zero()) rep.kernel_in_s_block = false;
  if (!ker.empty()) rep.kernel_in_s_block = rep.kernel_in_s_block && rank(KMatrix<Rational>::from_columns(n, ker)) == int(ker.size());
  return rep;
}

// ---------------------------------------------------------------------------
// Rotation maps

template <class F>
void check_grading(const DVRMatrix<F>& A, const std::vector<int>& degrees, int shift) {
  if (A.rows() != int(degrees.size()) || A.cols() != int(degrees.size()))
    throw InputError("rotation step is " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
                     " but " + std::to_string(degrees.size()) + " degrees are given");
  const FieldConfig& cfg = A.config();
  const int grading = cfg.kind == FieldKind::novikov ? cfg.t_grading : 0;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      for (auto& [m, c] : A(i, j).terms())
        for (const Rational& a : FieldTraits<F>::t_exponents(c))
          if (monomial_degree(degrees[i] - shift, m, a, grading) != degrees[j])
            throw InputError("grading constraint violated at entry (" + std::to_string(i) + ", " +
                             std::to_string(j) + "): u^" + std::to_string(m) + " needs 2m = " +
                             std::to_string(shift - degrees[i] + degrees[j]));
}

template <class F>
RotationMap<F> rotation_compose(const Weight& w, int mu, const std::vector<int>& degrees,
                                const std::vector<DVRMatrix<F>>& steps) {
  const int n = int(degrees.size());
  RotationMap<F> out;
  out.degrees = degrees;
  out.mu = mu;
  out.steps = int(steps.size());
  out.from = w;
  out.to = {w.a - out.steps * w.b, w.b};
  FieldConfig cfg = steps.empty() ? FieldConfig::rational() : steps.front().config();
  out.matrix = DVRMatrix<F>::identity(n, cfg);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    check_grading(steps[k], degrees, 2 * mu);
    if (w.b == 0 && !(steps[k] == steps.front()))
      throw InputError("weight " + w.to_string() + " has b = 0, so every step must be the same matrix");
    out.matrix = steps[k] * out.matrix;
  }
  return out;
}

bool filtration_compatible(const RotationMap<Rational>& ER, int max_j) {
  const int n = ER.matrix.cols();
  const int N = max_j + 1;
  std::vector<int> ex = smith_normal_form(ER.matrix).exponents;
  int kernel = n - int(std::count_if(ex.begin(), ex.end(), [](int e) { return e != kInfinite; }));
  for (int j = 0; j <= max_j; ++j) {
    int expected = kernel * N;
    for (int e : ex)
      if (e != kInfinite) expected += N - std::max(0, j - e);
    if (divisibility_kernel(ER.matrix, 0, N, j).cols() != expected) return false;
  }
  return true;
}

#define DVR_INSTANTIATE(F)                                                                     \
  template struct SlopeComplex<F>;                                                             \
  template class SlopeCells<F>;                                                                \
  template ContinuationMap<F> continuation_map<F>(const SlopeComplex<F>&, const Rational&,     \
                                                  const Rational&);                            \
  template int continuation_rank<F>(const SlopeComplex<F>&, Model, const Rational&,            \
                                    const Rational&, int);                                     \
  template CokernelIdentity cokernel_identity<F>(const SlopeComplex<F>&, const Rational&,      \
                                                 const Rational&, int, int);                   \
  template SlopeSS slope_ss<F>(const SlopeComplex<F>&, const Weight&, int, int, int,           \
                               const std::vector<int>&);                                       \
  template void check_grading<F>(const DVRMatrix<F>&, const std::vector<int>&, int);           \
  template RotationMap<F> rotation_compose<F>(const Weight&, int, const std::vector<int>&,      \
                                              const std::vector<DVRMatrix<F>>&);

DVR_INSTANTIATE(Rational)
DVR_INSTANTIATE(NovikovElem)
#undef DVR_INSTANTIATE

}  // namespace dvr
