#include "dvr/limits.hpp"

#include <algorithm>
#include <climits>
#include <exception>

#include "dvr/filtration.hpp"
#include "dvr/linalg.hpp"

namespace dvr {

template <class F>
DirectedSystem<F> DirectedSystem<F>::constant(const DVRMatrix<F>& Q, int count) {
  DirectedSystem<F> s;
  s.rank = Q.rows();
  s.config = Q.config();
  s.steps.assign(std::size_t(std::max(count, 0)), Q);
  s.validate();
  return s;
}

template <class F>
DirectedSystem<F> DirectedSystem<F>::from_generator(int rank, std::function<DVRMatrix<F>(int)> gen,
                                                    FieldConfig cfg) {
  DirectedSystem<F> s;
  s.rank = rank;
  s.config = cfg;
  s.generator = std::move(gen);
  return s;
}

template <class F>
DVRMatrix<F> DirectedSystem<F>::step(int k) const {
  if (k < 0) throw DomainError("negative step index");
  if (k < int(steps.size())) return steps[k];
  if (!generator)
    throw InputError("system has " + std::to_string(steps.size()) + " steps; step " +
                     std::to_string(k) + " requested");
  DVRMatrix<F> Q = generator(k);
  if (Q.rows() != rank || Q.cols() != rank)
    throw InputError("generated step " + std::to_string(k) + " is not " + std::to_string(rank) +
                     "x" + std::to_string(rank));
  return Q;
}

template <class F>
int DirectedSystem<F>::available() const {
  return generator ? INT_MAX / 2 : int(steps.size());
}

template <class F>
void DirectedSystem<F>::validate() const {
  for (std::size_t k = 0; k < steps.size(); ++k)
    if (steps[k].rows() != rank || steps[k].cols() != rank)
      throw InputError("step " + std::to_string(k) + " is " + std::to_string(steps[k].rows()) + "x" +
                       std::to_string(steps[k].cols()) + ", expected " + std::to_string(rank) + "x" +
                       std::to_string(rank));
}

template <class F>
DVRMatrix<F> composite(const DirectedSystem<F>& sys, int k) {
  DVRMatrix<F> R = DVRMatrix<F>::identity(sys.rank, sys.config);
  for (int i = 0; i < k; ++i) R = sys.step(i) * R;
  return R;
}

namespace {

template <class F>
std::vector<int> factors_of(const DVRMatrix<F>& A, SNFOptions opt) {
  if (A.rows() == 0 || A.cols() == 0) return {};
  opt.track_transforms = false;
  opt.track_u_inverse = false;
  return smith_normal_form(A, opt).exponents;
}

// Factors of an exact polynomial matrix: the working precision is doubled
// until the SNF certifies, up to one past rows x (max entry degree).
template <class F>
std::vector<int> exact_factors(const DVRMatrix<F>& A) {
  int degree = 0;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      if (!A(i, j).terms().empty()) degree = std::max(degree, A(i, j).terms().back().first);
  const int bound = std::max(A.rows(), 1) * degree + 1;
  SNFOptions opt;
  for (;;) {
    try {
      return factors_of(A, opt);
    } catch (const PrecisionError&) {
      if (opt.precision > bound) throw;
      opt.precision *= 2;
    }
  }
}

template <class F>
bool injective(const DVRMatrix<F>& A) {
  for (int e : factors_of(A, SNFOptions{})) if (e == kInfinite) return false;
  return true;
}

void check_monotone(const std::vector<std::vector<int>>& table, int first) {
  for (std::size_t k = 1; k < table.size(); ++k)
    for (std::size_t i = 0; i < table[k].size() && i < table[k - 1].size(); ++i)
      if (table[k][i] < table[k - 1][i])
        throw InvariantError("exponent " + std::to_string(i + 1) + " drops from " +
                             std::to_string(table[k - 1][i]) + " to " + std::to_string(table[k][i]) +
                             " at step " + std::to_string(first + int(k)));
}

// Per-index stabilization of table rows (entries kInfinite skipped by the caller).
void classify(const std::vector<std::vector<int>>& table, int window, std::vector<int>& final,
              std::vector<LimitShape::Status>& status, std::vector<int>& stable, int& laurent) {
  final = table.back();
  status.assign(final.size(), LimitShape::Status::stabilized);
  stable.clear();
  laurent = 0;
  const int K = int(table.size()) - 1;
  for (std::size_t i = 0; i < final.size(); ++i) {
    bool same = true;
    for (int k = std::max(0, K - window); k <= K; ++k) same = same && table[k][i] == final[i];
    if (same) {
      stable.push_back(final[i]);
    } else {
      status[i] = LimitShape::Status::diverging_at_window;
      ++laurent;
    }
  }
}

template <class F>
void require_steps(const DirectedSystem<F>& sys, int K, int window) {
  if (K < 0) throw InputError("number of steps must be >= 0");
  if (K > sys.available())
    throw InputError("system has " + std::to_string(sys.available()) + " steps; " + std::to_string(K) +
                     " requested");
  if (window < 1 || window > K)
    throw InputError("window " + std::to_string(window) + " needs between 1 and " + std::to_string(K) +
                     " steps");
}

std::string summand(int j) { return j == 0 ? "K[[u]]" : "u^{-" + std::to_string(j) + "}K[[u]]"; }

}  // namespace

template <class F>
std::vector<int> composite_factors(const DirectedSystem<F>& sys, int k, const SNFOptions& opt) {
  return factors_of(composite(sys, k), opt);
}

template <class F>
std::vector<std::vector<int>> composite_factor_table(const DirectedSystem<F>& sys, int K, Exec exec,
                                                     const SNFOptions& opt) {
  std::vector<DVRMatrix<F>> R;
  R.push_back(DVRMatrix<F>::identity(sys.rank, sys.config));
  for (int k = 0; k < K; ++k) R.push_back(sys.step(k) * R.back());
  std::vector<std::vector<int>> table(R.size());
  if (exec == Exec::serial) {
    for (std::size_t k = 0; k < R.size(); ++k) table[k] = factors_of(R[k], opt);
  } else {
    std::exception_ptr err;
    const int n = int(R.size());
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < n; ++k) {
      try {
        table[k] = factors_of(R[k], opt);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  }
  check_monotone(table, 0);
  return table;
}

std::vector<int> LimitShape::lattice_exponents() const {
  std::vector<int> all = stable_exponents;
  all.insert(all.end(), cokernel_stable.begin(), cokernel_stable.end());
  std::sort(all.begin(), all.end());
  return all;
}

std::string LimitShape::to_string() const {
  std::vector<std::string> parts;
  std::vector<int> all = lattice_exponents();
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    std::string s = summand(all[i]);
    if (j - i > 1) s += "^" + std::to_string(j - i);
    parts.push_back(s);
    i = j;
  }
  int s = total_laurent();
  if (s > 0) parts.push_back(s == 1 ? "K((u))" : "K((u))^" + std::to_string(s));
  if (parts.empty()) return "0";
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out += " ⊕ " + parts[i];
  return out;
}

std::string status_name(LimitShape::Status s) {
  return s == LimitShape::Status::stabilized ? "stabilized" : "diverging-at-window";
}

template <class F>
KMatrix<F> constant_part(const DVRMatrix<F>& A) {
  KMatrix<F> P(A.rows(), A.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) P(i, j) = A(i, j).coefficient(0);
  return P;
}

template <class F>
DVRMatrix<F> invert(const DVRMatrix<F>& A, const SNFOptions& opt) {
  if (A.rows() != A.cols()) throw DomainError("only square matrices are invertible");
  if (A.rows() == 0) return A;
  SNFOptions o = opt;
  o.track_transforms = true;
  SNFResult<F> s = smith_normal_form(A, o);
  for (int e : s.exponents)
    if (e != 0) throw DomainError("matrix is not invertible over K[[u]]");
  return s.V * s.U;
}

template <class F>
LimitShape limit_shape(const DirectedSystem<F>& sys, int K, int window) {
  sys.validate();
  if (window < 0) window = std::max(sys.rank, 1);
  require_steps(sys, K, window);
  std::vector<int> failures;
  for (int k = 0; k < K; ++k)
    if (!injective(sys.step(k))) failures.push_back(k);
  if (!failures.empty()) return noninjective_limit(sys, failures.front() + 1, K, window);

  LimitShape L;
  L.rank = sys.rank;
  L.steps_used = K;
  L.window = window;
  auto table = composite_factor_table(sys, K);
  classify(table, window, L.final_exponents, L.status, L.stable_exponents, L.laurent_count);

  // Common nilpotent u^0-part: the limit is all of K((u))^r.
  if (K >= 1 && sys.rank > 0) {
    KMatrix<F> P = constant_part(sys.step(0));
    bool same = true;
    for (int k = 1; k < K && same; ++k) {
      KMatrix<F> Pk = constant_part(sys.step(k));
      for (int i = 0; i < P.rows() && same; ++i)
        for (int j = 0; j < P.cols() && same; ++j) same = Pk(i, j) == P(i, j);
    }
    KMatrix<F> Pr = KMatrix<F>::identity(sys.rank);
    for (int i = 0; i < sys.rank; ++i) Pr = Pr * P;
    if (same && Pr.is_zero()) {
      L.certified = true;
      L.stable_exponents.clear();
      L.laurent_count = sys.rank;
    }
  }
  return L;
}

template <class F>
LimitShape localise_at_element(const DVRMatrix<F>& Q, int K, int window) {
  if (Q.rows() != Q.cols()) throw InputError("localisation needs a square matrix");
  const int r = Q.rows();
  if (injective(Q)) return limit_shape(DirectedSystem<F>::constant(Q, K), K, window);
  // The limit only sees V/ker Q^r, on which Q acts injectively.
  DVRMatrix<F> Qr = DVRMatrix<F>::identity(r, Q.config());
  for (int i = 0; i < r; ++i) Qr = Q * Qr;
  SNFResult<F> s = smith_normal_form(Qr);
  const int q = s.rank();
  LimitShape L;
  if (q == 0) {
    L.rank = r;
    L.kernel_rank = r;
    L.steps_used = K;
    L.window = window < 0 ? std::max(r, 1) : window;
    return L;
  }
  DVRMatrix<F> Qp = invert(s.V) * Q * s.V;
  std::vector<int> top(q), rest(r - q), all_top(q);
  for (int i = 0; i < q; ++i) top[i] = i;
  for (int i = q; i < r; ++i) rest[i - q] = i;
  for (int i = 0; i < q; ++i)
    for (int j = q; j < r; ++j)
      if (!Qp(i, j).no_terms()) throw InvariantError("Q does not preserve ker Q^r");
  DVRMatrix<F> Qbar = Qp.submatrix(top, top);
  L = limit_shape(DirectedSystem<F>::constant(Qbar, K), K, window);
  L.rank = r;
  L.kernel_rank = r - q;
  return L;
}

template <class F>
LimitShape noninjective_limit(const DirectedSystem<F>& sys, int p, int K, int window) {
  sys.validate();
  const int r = sys.rank;
  if (window < 0) window = std::max(r, 1);
  if (K > sys.available())
    throw InputError("system has " + std::to_string(sys.available()) + " steps; " + std::to_string(K) +
                     " requested");
  std::vector<int> failures;
  for (int k = 0; k < K; ++k)
    if (!injective(sys.step(k))) failures.push_back(k);
  if (failures.size() > 1)
    throw DomainError("steps " + std::to_string(failures[0]) + " and " + std::to_string(failures[1]) +
                      " are both non-injective; only one failure is supported");
  if (p == 0) {
    if (!failures.empty())
      throw InputError("step " + std::to_string(failures[0]) +
                       " is not injective but no failure index was declared");
    return limit_shape(sys, K, window);
  }
  if (failures.empty())
    throw InputError("failure declared at step " + std::to_string(p - 1) + " but every step is injective");
  if (failures[0] != p - 1)
    throw InputError("failure declared at step " + std::to_string(p - 1) + " but step " +
                     std::to_string(failures[0]) + " is the non-injective one");
  require_steps(sys, K, window);
  if (K - p < window)
    throw InputError("need at least " + std::to_string(p + window) + " steps after the failure");

  // Exponents grow with K; transforms truncated shallower than that lose the
  // cokernel factors.
  SNFOptions o;
  o.precision = std::max(kDefaultPrecision, 2 * (K + 2));
  o.track_transforms = true;
  o.track_u_inverse = true;
  SNFOptions ofac;
  ofac.precision = o.precision;
  std::vector<std::vector<int>> image, coker;
  DVRMatrix<F> Rk = composite(sys, p);
  DVRMatrix<F> mid = DVRMatrix<F>::identity(r, sys.config);  // Q_{k-1} ... Q_p
  DVRMatrix<F> section;
  int n = -1;
  for (int k = p; k <= K; ++k) {
    if (k > p) {
      DVRMatrix<F> Q = sys.step(k - 1);
      Rk = Q * Rk;
      mid = Q * mid;
    }
    SNFResult<F> s = smith_normal_form(Rk, o);
    const int q = s.rank();
    if (n < 0) n = r - q;
    if (r - q != n) throw InvariantError("kernel of R_k changes after the failing step");
    image.push_back(std::vector<int>(s.exponents.begin(), s.exponents.begin() + q));
    if (n == 0) continue;
    std::vector<int> free_rows(n), all(r);
    for (int i = 0; i < n; ++i) free_rows[i] = q + i;
    for (int i = 0; i < r; ++i) all[i] = i;
    if (k == p) section = s.U_inv->submatrix(all, free_rows);
    DVRMatrix<F> proj = s.U.submatrix(free_rows, all);
    std::vector<int> ell = factors_of(proj * mid * section, ofac);
    for (int e : ell)
      if (e == kInfinite) throw InvariantError("induced map on cokernels is not injective");
    coker.push_back(ell);
  }
  check_monotone(image, p);
  if (n > 0) check_monotone(coker, p);

  LimitShape L;
  L.rank = r;
  L.steps_used = K;
  L.window = window;
  L.kernel_rank = n;
  L.failure_index = p;
  classify(image, window, L.final_exponents, L.status, L.stable_exponents, L.laurent_count);
  if (n > 0)
    classify(coker, window, L.cokernel_final, L.cokernel_status, L.cokernel_stable,
             L.cokernel_laurent);
  return L;
}

template <class F>
BlockCompositeReport block_composite_factors(int t, int s, int k,
                                             const std::function<DVRMatrix<F>(int)>& step_sampler) {
  if (t < 0 || s < 0 || k < 1) throw InputError("block sizes must be >= 0 and k >= 1");
  const int n = t + s;
  BlockCompositeReport rep;
  rep.t = t;
  rep.s = s;
  rep.k = k;
  DVRMatrix<F> R;
  for (int j = 1; j <= k; ++j) {
    DVRMatrix<F> f = step_sampler(j);
    if (f.rows() != n || f.cols() != n) throw InputError("step " + std::to_string(j) + " has the wrong size");
    KMatrix<F> P = constant_part(f);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        F want = (a == b && a < t) ? F(1) : F(0);
        if (!(P(a, b) == want))
          throw InputError("step " + std::to_string(j) +
                           " is not I + O(u) on the first block and O(u) elsewhere");
      }
    R = j == 1 ? f : f * R;
  }
  rep.exponents = exact_factors(R);
  for (int e : rep.exponents) {
    if (e == 0) ++rep.unit_count;
    else rep.min_nonunit = std::min(rep.min_nonunit, e);
    if (e == kInfinite) ++rep.nullity;
  }
  return rep;
}

std::string PersistenceLattice::barcode() const {
  std::string s;
  for (const Bar& b : bars)
    s += "row " + std::to_string(b.row) + " col " + std::to_string(b.column) + " born " +
         std::to_string(b.birth) + "\n";
  return s;
}

template <class F>
PersistenceLattice persistence_lattice(const DirectedSystem<F>& sys, int K) {
  auto table = composite_factor_table(sys, K);
  PersistenceLattice P;
  std::vector<int> prev;
  for (int k = 0; k <= K; ++k) {
    std::vector<int> shape;
    for (int e : table[k]) {
      if (e == kInfinite)
        throw DomainError("composite R_" + std::to_string(k) + " is not injective");
      if (e > 0) shape.push_back(e);
    }
    std::sort(shape.rbegin(), shape.rend());
    if (shape.size() < prev.size()) throw InvariantError("Young diagrams are not nested");
    for (std::size_t i = 0; i < shape.size(); ++i) {
      int before = i < prev.size() ? prev[i] : 0;
      if (shape[i] < before) throw InvariantError("Young diagrams are not nested");
      for (int c = before + 1; c <= shape[i]; ++c) P.bars.push_back({int(i) + 1, c, k});
    }
    P.duals.push_back(conjugate_partition(shape));
    P.shapes.push_back(shape);
    prev = shape;
  }
  return P;
}

template <class F>
WeightChangeReport weight_change_bounds(const DirectedSystem<F>& sys, int K) {
  WeightChangeReport rep;
  DVRMatrix<F> Q0 = sys.step(0);
  std::vector<int> e0 = factors_of(Q0, SNFOptions{});
  if (e0.empty() || e0.back() == kInfinite) throw DomainError("first step must be injective");
  rep.alpha = e0.front();
  rep.beta = e0.back();
  DVRMatrix<F> rest = DVRMatrix<F>::identity(sys.rank, sys.config);  // Q_k ... Q_1
  for (int k = 0; k < K; ++k) {
    if (k > 0) rest = sys.step(k) * rest;
    std::vector<int> a = factors_of(rest * Q0, SNFOptions{}), b = factors_of(rest, SNFOptions{});
    std::vector<int> g;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == kInfinite || b[i] == kInfinite) throw DomainError("composite is not injective");
      g.push_back(a[i] - b[i]);
      if (g.back() < rep.alpha || g.back() > rep.beta) rep.ok = false;
    }
    rep.gamma.push_back(g);
  }
  return rep;
}

#define DVR_INSTANTIATE(F)                                                                       \
  template struct DirectedSystem<F>;                                                             \
  template DVRMatrix<F> composite<F>(const DirectedSystem<F>&, int);                             \
  template std::vector<int> composite_factors<F>(const DirectedSystem<F>&, int, const SNFOptions&); \
  template std::vector<std::vector<int>> composite_factor_table<F>(const DirectedSystem<F>&, int, \
                                                                   Exec, const SNFOptions&);     \
  template LimitShape limit_shape<F>(const DirectedSystem<F>&, int, int);                        \
  template LimitShape localise_at_element<F>(const DVRMatrix<F>&, int, int);                     \
  template LimitShape noninjective_limit<F>(const DirectedSystem<F>&, int, int, int);            \
  template BlockCompositeReport block_composite_factors<F>(int, int, int,                        \
                                                           const std::function<DVRMatrix<F>(int)>&); \
  template PersistenceLattice persistence_lattice<F>(const DirectedSystem<F>&, int);             \
  template WeightChangeReport weight_change_bounds<F>(const DirectedSystem<F>&, int);            \
  template KMatrix<F> constant_part<F>(const DVRMatrix<F>&);                                     \
  template DVRMatrix<F> invert<F>(const DVRMatrix<F>&, const SNFOptions&);

DVR_INSTANTIATE(Rational)
DVR_INSTANTIATE(NovikovElem)
#undef DVR_INSTANTIATE

}  // namespace dvr
