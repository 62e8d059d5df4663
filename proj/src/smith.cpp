#include "dvr/smith.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <unordered_map>

namespace dvr {

namespace {

template <class F>
void swap_rows(DVRMatrix<F>& M, int a, int b) {
  if (a == b) return;
  for (int j = 0; j < M.cols(); ++j) std::swap(M(a, j), M(b, j));
}

template <class F>
void swap_cols(DVRMatrix<F>& M, int a, int b) {
  if (a == b) return;
  for (int i = 0; i < M.rows(); ++i) std::swap(M(i, a), M(i, b));
}

// Smallest finite valuation and smallest undetermined bound over a set of series.
struct ValScan {
  int best = INT_MAX;
  int bound = INT_MAX;
  bool any_inexact_zero = false;

  template <class S>
  bool add(const S& s) {
    Valuation v = s.valuation();
    if (v.is_finite()) {
      if (v.value < best) {
        best = v.value;
        return true;
      }
    } else if (v.is_at_least()) {
      bound = std::min(bound, v.value);
      any_inexact_zero = true;
    }
    return false;
  }
  bool has_finite() const { return best != INT_MAX; }
  void require_certified(const char* what) const {
    if (has_finite() && bound <= best)
      throw PrecisionError(std::string(what) + ": an entry is O(u^" + std::to_string(bound) +
                           ") but the candidate valuation is " + std::to_string(best));
  }
};

// Exact quotient a / b of exact polynomials in u (b divides a).
template <class F>
USeries<F> poly_divexact(USeries<F> a, const USeries<F>& b) {
  if (b.is_exact_zero()) throw DomainError("polynomial division by zero");
  std::vector<typename USeries<F>::Term> q;
  const auto& lead = b.terms().back();
  F lead_inv = lead.second.inv();
  int guard = 0;
  while (!a.no_terms()) {
    const auto& top = a.terms().back();
    int e = top.first - lead.first;
    if (e < 0 || ++guard > 1 << 20) throw InvariantError("inexact polynomial division");
    F c = top.second * lead_inv;
    q.push_back({e, c});
    a -= b.shifted(e).scaled(c);
  }
  return USeries<F>::from_terms(std::move(q));
}

}  // namespace

template <class F>
int SNFResult<F>::rank() const {
  return int(std::count_if(exponents.begin(), exponents.end(),
                           [](int e) { return e != kInfinite; }));
}

template <class F>
int exact_rank(const DVRMatrix<F>& A) {
  if (!A.is_exact()) throw DomainError("exact_rank needs an exact matrix");
  DVRMatrix<F> M = A;
  int m = M.rows(), n = M.cols();
  USeries<F> prev = USeries<F>::constant(F(1));
  int k = 0;
  for (; k < std::min(m, n); ++k) {
    int pi = -1, pj = -1;
    for (int i = k; i < m && pi < 0; ++i)
      for (int j = k; j < n; ++j)
        if (!M(i, j).no_terms()) {
          pi = i;
          pj = j;
          break;
        }
    if (pi < 0) break;
    swap_rows(M, k, pi);
    swap_cols(M, k, pj);
    for (int i = k + 1; i < m; ++i) {
      for (int j = k + 1; j < n; ++j)
        M(i, j) = poly_divexact(M(k, k) * M(i, j) - M(i, k) * M(k, j), prev);
      M(i, k) = USeries<F>();
    }
    prev = M(k, k);
  }
  return k;
}

template <class F>
SNFResult<F> smith_normal_form(const DVRMatrix<F>& A, const SNFOptions& opt) {
  if (A.empty()) throw DomainError("smith_normal_form of an empty matrix");
  using S = USeries<F>;
  const int m = A.rows(), n = A.cols(), r = std::min(m, n);
  const FieldConfig& cfg = A.config();
  const bool track = opt.track_transforms;
  const bool track_inv = track && opt.track_u_inverse;
  DVRMatrix<F> M = A;
  DVRMatrix<F> U, V, Ui;
  if (track) {
    U = DVRMatrix<F>::identity(m, cfg);
    V = DVRMatrix<F>::identity(n, cfg);
  }
  if (track_inv) Ui = DVRMatrix<F>::identity(m, cfg);
  std::optional<int> rank_cache;

  std::vector<int> ex;
  for (int t = 0; t < r; ++t) {
    ValScan scan;
    int bi = -1, bj = -1;
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j)
        if (scan.add(M(i, j))) {
          bi = i;
          bj = j;
        }
    if (!scan.has_finite()) {
      if (scan.any_inexact_zero) {
        if (!A.is_exact())
          throw PrecisionError("residual block of size " + std::to_string(m - t) + "x" +
                               std::to_string(n - t) + " is O(u^" + std::to_string(scan.bound) +
                               "); cannot tell a zero factor from a deep one");
        if (!rank_cache) rank_cache = exact_rank(A);
        if (*rank_cache != t)
          throw PrecisionError("exact rank " + std::to_string(*rank_cache) +
                               " exceeds the certified pivots; raise the precision");
      }
      ex.resize(r, kInfinite);
      break;
    }
    scan.require_certified("smith_normal_form");
    const int v = scan.best;

    swap_rows(M, t, bi);
    swap_cols(M, t, bj);
    if (track) {
      swap_rows(U, t, bi);
      swap_cols(V, t, bj);
    }
    if (track_inv) swap_cols(Ui, t, bi);

    S w = M(t, t).shifted(-v);
    S winv = w.inv(opt.precision);
    for (int j = t + 1; j < n; ++j)
      if (!M(t, j).is_exact_zero()) M(t, j) = M(t, j) * winv;
    M(t, t) = S::monomial(F(1), v);
    if (track)
      for (int j = 0; j < m; ++j)
        if (!U(t, j).is_exact_zero()) U(t, j) = U(t, j) * winv;
    if (track_inv)
      for (int i = 0; i < m; ++i)
        if (!Ui(i, t).is_exact_zero()) Ui(i, t) = Ui(i, t) * w;

    for (int i = t + 1; i < m; ++i) {
      if (M(i, t).is_exact_zero()) continue;
      S q = M(i, t).shifted(-v);
      for (int j = t + 1; j < n; ++j)
        if (!M(t, j).is_exact_zero()) M(i, j) -= q * M(t, j);
      M(i, t) = S();
      if (track)
        for (int j = 0; j < m; ++j)
          if (!U(t, j).is_exact_zero()) U(i, j) -= q * U(t, j);
      if (track_inv)
        for (int k = 0; k < m; ++k)
          if (!Ui(k, i).is_exact_zero()) Ui(k, t) += q * Ui(k, i);
    }
    for (int j = t + 1; j < n; ++j) {
      if (M(t, j).is_exact_zero()) continue;
      S q = M(t, j).shifted(-v);
      if (track)
        for (int k = 0; k < n; ++k)
          if (!V(k, t).is_exact_zero()) V(k, j) -= q * V(k, t);
      M(t, j) = S();
    }
    ex.push_back(v);
  }

  SNFResult<F> res;
  res.exponents = ex;
  res.D = DVRMatrix<F>::diag_u(ex, m, n, cfg);
  if (track) {
    res.U = std::move(U);
    res.V = std::move(V);
  }
  if (track_inv) res.U_inv = std::move(Ui);
  return res;
}

template <class F>
std::vector<int> factors_via_minors(const DVRMatrix<F>& A) {
  if (A.empty()) throw DomainError("factors_via_minors of an empty matrix");
  const int m = A.rows(), n = A.cols(), r = std::min(m, n);
  if (m > 24 || n > 24) throw DomainError("factors_via_minors supports at most 24 rows/columns");
  using S = USeries<F>;
  using Key = std::uint64_t;
  auto key = [](std::uint32_t rm, std::uint32_t cm) { return (Key(rm) << 32) | cm; };

  // Level k: all k x k minors keyed by (row mask, column mask).
  std::unordered_map<Key, S> level;
  level[key(0, 0)] = S::constant(F(1));
  std::vector<int> out;
  int prev_sum = 0;
  for (int k = 1; k <= r; ++k) {
    std::unordered_map<Key, S> next;
    ValScan scan;
    bool all_exact_zero = true;
    // Enumerate row sets R of size k; expand along the smallest row of R.
    for (std::uint32_t rm = 0; rm < (1u << m); ++rm) {
      if (std::popcount(rm) != k) continue;
      int top = std::countr_zero(rm);
      std::uint32_t rest_r = rm & ~(1u << top);
      for (std::uint32_t cm = 0; cm < (1u << n); ++cm) {
        if (std::popcount(cm) != k) continue;
        S acc;
        int pos = 0;
        for (int c = 0; c < n; ++c) {
          if (!(cm >> c & 1)) continue;
          const S& a = A(top, c);
          if (!a.is_exact_zero()) {
            auto it = level.find(key(rest_r, cm & ~(1u << c)));
            if (it != level.end() && !it->second.is_exact_zero()) {
              S term = a * it->second;
              if (pos & 1) acc -= term;
              else acc += term;
            }
          }
          ++pos;
        }
        if (!acc.is_exact_zero()) {
          all_exact_zero = false;
          scan.add(acc);
          next.emplace(key(rm, cm), std::move(acc));
        }
      }
    }
    if (all_exact_zero) {
      out.resize(r, kInfinite);
      return out;
    }
    if (!scan.has_finite())
      throw PrecisionError("every " + std::to_string(k) + "x" + std::to_string(k) +
                           " minor is O(u^" + std::to_string(scan.bound) + ")");
    scan.require_certified("factors_via_minors");
    out.push_back(scan.best - prev_sum);
    prev_sum = scan.best;
    level = std::move(next);
  }
  return out;
}

template <class F>
Determinant<F> det(const DVRMatrix<F>& A) {
  if (A.rows() != A.cols()) throw DomainError("det of a non-square matrix");
  const int n = A.rows();
  if (n > 24) throw DomainError("det supports at most 24 rows");
  using S = USeries<F>;
  // f[mask]: determinant of the first popcount(mask) rows on the columns in mask.
  std::vector<S> f(std::size_t(1) << n);
  f[0] = S::constant(F(1));
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    int k = std::popcount(mask);
    S acc;
    for (int c = 0; c < n; ++c) {
      if (!(mask >> c & 1)) continue;
      const S& a = A(k - 1, c);
      const S& sub = f[mask & ~(1u << c)];
      if (a.is_exact_zero() || sub.is_exact_zero()) continue;
      int after = std::popcount(mask >> (c + 1));
      S term = a * sub;
      if (after & 1) acc -= term;
      else acc += term;
    }
    f[mask] = std::move(acc);
  }
  Determinant<F> d;
  d.value = f[(std::size_t(1) << n) - 1];
  d.order = d.value.valuation();
  return d;
}

template <class F>
DVRMatrix<F> adjugate(const DVRMatrix<F>& A) {
  if (A.rows() != A.cols()) throw DomainError("adjugate of a non-square matrix");
  const int n = A.rows();
  DVRMatrix<F> adj(n, n, A.config());
  if (n == 1) {
    adj(0, 0) = USeries<F>::constant(F(1));
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<int> rows, cols;
      for (int k = 0; k < n; ++k) {
        if (k != j) rows.push_back(k);
        if (k != i) cols.push_back(k);
      }
      USeries<F> c = det(A.submatrix(rows, cols)).value;
      adj(i, j) = ((i + j) & 1) ? -c : c;
    }
  return adj;
}

template <class F>
std::pair<int, int> two_by_two_factors(const DVRMatrix<F>& A) {
  if (A.rows() != 2 || A.cols() != 2) throw DomainError("two_by_two_factors needs a 2x2 matrix");
  ValScan scan;
  bool all_zero = true;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      scan.add(A(i, j));
      if (!A(i, j).is_exact_zero()) all_zero = false;
    }
  if (all_zero) return {kInfinite, kInfinite};
  if (!scan.has_finite()) throw PrecisionError("two_by_two_factors: entries are O(u^N)");
  scan.require_certified("two_by_two_factors");
  Valuation dv = det(A).order;
  if (dv.is_infinite()) return {scan.best, kInfinite};
  if (!dv.is_finite()) throw PrecisionError("two_by_two_factors: determinant not certified");
  return {scan.best, dv.value - scan.best};
}

std::string exponents_to_string(const std::vector<int>& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ' ';
    s += e[i] == kInfinite ? std::string("0") : "u^" + std::to_string(e[i]);
  }
  return s;
}

#define DVR_INSTANTIATE(F)                                                               \
  template struct SNFResult<F>;                                                          \
  template SNFResult<F> smith_normal_form<F>(const DVRMatrix<F>&, const SNFOptions&);    \
  template std::vector<int> factors_via_minors<F>(const DVRMatrix<F>&);                  \
  template Determinant<F> det<F>(const DVRMatrix<F>&);                                   \
  template DVRMatrix<F> adjugate<F>(const DVRMatrix<F>&);                                \
  template std::pair<int, int> two_by_two_factors<F>(const DVRMatrix<F>&);               \
  template int exact_rank<F>(const DVRMatrix<F>&);

DVR_INSTANTIATE(Rational)
DVR_INSTANTIATE(NovikovElem)
#undef DVR_INSTANTIATE

}  // namespace dvr
