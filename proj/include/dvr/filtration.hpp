#pragma once

#include <string>
#include <vector>

#include "dvr/homology.hpp"
#include "dvr/linalg.hpp"

namespace dvr {

// Integer polynomial in t, coefficient of t^j at index j.
struct IntPoly {
  std::vector<long long> coeffs;

  long long operator[](std::size_t j) const { return j < coeffs.size() ? coeffs[j] : 0; }
  long long sum() const;
  // "3 + 3t + 2t^2"; the zero polynomial renders as "0".
  std::string to_string() const;
  friend bool operator==(const IntPoly& a, const IntPoly& b);
};

// Filtration F_j = c^{-1}(F_j W) on V = K[[u]]^n for c : V -> W, in adapted
// form: a basis f_1..f_{a+b} of V with c~(f_i) = u^{j_i}·(basis of W/T) for
// i <= a and f_{a+1..} spanning c^{-1}(T).
template <class F>
struct InducedFiltration {
  int source_rank = 0;        // a + b
  int kernel_rank = 0;        // b
  std::vector<int> exponents;  // j_1 <= ... <= j_a
  DVRMatrix<F> basis;          // columns f_i
  std::vector<int> basis_degrees;  // degrees of f_i when the domain is graded

  int finite_rank() const { return int(exponents.size()); }
  int max_exponent() const { return exponents.empty() ? 0 : exponents.back(); }
  bool injective() const { return kernel_rank == 0; }
  // d_j = b + #{i : j <= j_i} (d_j = a + b for j <= 0).
  int slice_dim(int j) const;
};

// Rows of c for the free summands of W (W/T), in the order of
// W.free_power.  c has one row per free_power entry followed by one row
// per torsion entry; laurent or tail summands are rejected.
template <class F>
DVRMatrix<F> torsion_free_part(const DVRMatrix<F>& c, const FGModuleShape& W);

template <class F>
InducedFiltration<F> induced_filtration(const DVRMatrix<F>& c, const FGModuleShape& W,
                                        const std::vector<int>& domain_degrees = {},
                                        const SNFOptions& opt = {});

// Slice series d_0, d_1, ...: finite prefix up to J = max j_i, then the
// constant tail b.
struct SliceSeries {
  std::vector<int> prefix;
  int tail = 0;

  int coefficient(int j) const;
  // Σ_{j>=1} d_j over the prefix (the tail must vanish for it to be finite).
  int positive_sum() const;
  // "1 + t + t^2 + t^3"; a nonzero tail adds "+ b·(t^{J+1} + …)".
  std::string to_string() const;
};

template <class F>
SliceSeries slice_series(const InducedFiltration<F>& f);
template <class F>
IntPoly reduced_slice(const InducedFiltration<F>& f);
template <class F>
IntPoly filtration_polynomial(const InducedFiltration<F>& f);

struct YoungDiagramPair {
  std::vector<int> shape;  // row lengths j_i (nonincreasing, zeros dropped)
  std::vector<int> dual;   // d_1, d_2, ... (nonzero)
};

std::vector<int> conjugate_partition(const std::vector<int>& p);
template <class F>
YoungDiagramPair young_diagrams(const InducedFiltration<F>& f);
// Rows of □, left-aligned, first row on top.
std::string render_young(const std::vector<int>& rows);
// French convention: first row at the bottom.
std::string render_young_french(const std::vector<int>& rows);

// max j with c(v) u^j-divisible modulo torsion; infinite iff c(v) ∈ T.
template <class F>
Valuation valuation_of(const std::vector<USeries<F>>& v, const DVRMatrix<F>& c,
                       const FGModuleShape& W);

// One layer F_j(V⁺) of the 𝔽-side filtration read off the SNF data.  The
// finite summands contribute span{u^{j-j_i}, ..., u^0}·f_i for j <= j_i;
// the kernel contributes b copies of 𝔽.
template <class F>
struct PlusLayer {
  int j = 0;
  int finite_dim = 0;   // K-dimension away from the kernel summand
  int kernel_tails = 0;  // b
  // Generators u^{j-j_i} f_i of the cyclic finite summands (tail vectors).
  std::vector<std::vector<USeries<F>>> generators;
};

template <class F>
PlusLayer<F> plus_filtration(const InducedFiltration<F>& f, int j);

// One summand of a filtration layer: zero, a lattice u^e K[[u]] (in
// K[[u]] or K((u))), u^e K[[u]]/uK[[u]] in 𝔽, or the whole ambient module.
struct Layer {
  enum class Ambient { minus, infty, plus };
  enum class Kind { zero, lattice, all };
  Ambient ambient = Ambient::minus;
  Kind kind = Kind::zero;
  int exponent = 0;

  std::string to_string() const;
  friend bool operator==(const Layer&, const Layer&) = default;
};

// The six filtration layers at index j (minus, infty and plus models), per
// adapted summand of V and for one free summand of W.
struct FiltrationTableColumn {
  int j = 0;
  std::vector<Layer> v_minus;  // F_{j-1}(V⁻), one per f_i
  std::vector<Layer> v_infty;  // F_j(V^∞)
  std::vector<Layer> v_plus;   // F_j(V⁺)
  Layer w_minus, w_infty, w_plus;  // F_{j-1}(W⁻), F_j(W^∞), F_j(W⁺_𝔽)
};

template <class F>
FiltrationTableColumn filtration_table(const InducedFiltration<F>& f, int j);

// K-dimensions of the windowed pieces of
//   0 -> F_{j-1}(V⁻) -u-> F_j(V^∞) -> F_j(V⁺) -> 0
// (V⁻ mod u^{N-1}, V^∞ ∩ u^{-M}V mod u^N, V⁺ ∩ 𝔽_M), computed by K-linear
// algebra on the coefficients of c and predicted from the SNF.
struct SESReport {
  int j = 0, window = 0;
  int dim_minus = 0, dim_infty = 0, dim_plus = 0;
  int snf_minus = 0, snf_infty = 0, snf_plus = 0;
  bool exact() const { return dim_minus + dim_plus == dim_infty; }
  bool matches_snf() const {
    return dim_minus == snf_minus && dim_infty == snf_infty && dim_plus == snf_plus;
  }
};

template <class F>
SESReport ses_of_filtrations(const DVRMatrix<F>& c, const FGModuleShape& W, int j, int window = -1);

// Bridge between V⁻ and V⁺ filtrations for j >= max(0, m - 1):
//   F_{j+1}/(F_{j+1} ∩ u^{j+2-m}V)  ≅  F_m(V⁺) ∩ 𝔽_{j-m+1},  v -> [u^{m-1-j} v].
// m = 1 is the embedding F_{j+1}/u^{j+1}V -> E_1 ∩ 𝔽_j.
struct BridgeReport {
  int j = 0, m = 1;
  int source_dim = 0, source_snf = 0;  // left side
  int target_dim = 0, target_snf = 0;  // right side
  // dim (F_{j+1} ∩ u^{j+2-m}V)/u^{j+1}V: zero iff v -> [u^{m-1-j}v] is
  // injective on F_{j+1}/u^{j+1}V.
  int literal_kernel_dim = 0;
  bool stable = false;  // j >= max j_i
  // For injective c: dim E_1 and, when stable, whether the m = 1 side equals it.
  int e1_dim = -1;
  bool stable_ok = true;

  bool ok() const {
    return source_dim == target_dim && source_dim == source_snf && target_dim == target_snf &&
           stable_ok;
  }
};

template <class F>
BridgeReport minus_plus_bridge(const DVRMatrix<F>& c, const FGModuleShape& W, int j, int m = 1);

// Sum identities of the slice dimensions, each side computed independently.
struct SliceSumReport {
  int sum_d_positive = 0;   // Σ_{j>=1} (d_j - b), from the SNF
  int sum_exponents = 0;    // Σ j_i
  int prefix_sum = 0;       // d_0 + ... + d_J with J = max j_i
  int rank_plus_exponents = 0;  // rank V + Σ j_i
  // dim F_j/u^jV == d_1 + ... + d_j for j = 1..J+1, by K-linear algebra.
  bool layer_sums_ok = true;
  // dim E_1/K⁺ by K-linear algebra (finite part of ker[c_u]).
  int e1_reduced_dim = 0;
  bool ok() const {
    return sum_d_positive == sum_exponents && layer_sums_ok && e1_reduced_dim == sum_d_positive &&
           (prefix_sum == rank_plus_exponents);
  }
};

template <class F>
SliceSumReport slice_sum_identities(const DVRMatrix<F>& c, const FGModuleShape& W);

// K-linear building blocks (c~ = torsion-free rows of c).
// Basis of {v ∈ ⊕_{lo <= e < N} u^e K^n : c~v ≡ 0 mod u^j}; coordinate of
// u^e g at g·(N - lo) + (e - lo).
template <class F>
KMatrix<F> divisibility_kernel(const DVRMatrix<F>& ct, int lo, int N, int j);
// Basis of F_j(V⁺) ∩ 𝔽_J; coordinate of u^{-e} g (0 <= e <= J) at g·(J+1) + e.
template <class F>
KMatrix<F> plus_layer_basis(const DVRMatrix<F>& ct, int j, int J);

}  // namespace dvr
