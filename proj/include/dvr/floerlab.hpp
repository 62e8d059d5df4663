#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dvr/degreewise.hpp"
#include "dvr/filtration.hpp"
#include "dvr/homology.hpp"
#include "dvr/limits.hpp"
#include "dvr/sampling.hpp"

namespace dvr {

// Weight (a, b) of the circle action on loops: a on the target, b on time.
struct Weight {
  int a = 0, b = 1;
  std::string to_string() const;  // "(a,b)"
  friend bool operator==(const Weight&, const Weight&) = default;
};

// True iff m·a ∉ {b, 2b, 3b, ...} for every m; with b = 0 only a = 0 fails.
// Throws InputError if the list is empty or holds a nonpositive entry.
bool free_weight(const Weight& w, const std::vector<int>& positive_weights);

enum class ExampleId { c_plane, tcp1, tcp1_twisted, oneg1, monotone };
std::string example_name(ExampleId id);  // "C", "TCP1", ...
ExampleId parse_example_id(std::string_view text);

// ---------------------------------------------------------------------------
// Slope-filtered complexes

// A complex whose generators carry slopes; d must not raise the slope.
template <class F>
struct SlopeComplex {
  EqChainComplex<F> complex;
  std::vector<Rational> slopes;  // one per generator

  std::vector<Rational> columns() const;  // distinct slopes, increasing
  int column_of(int g) const;             // index into columns()
  std::vector<int> generators_up_to(const Rational& lambda) const;
  // Subcomplex on the generators of slope <= lambda, in their original order.
  SlopeComplex truncated(const Rational& lambda) const;
  // Subcomplex on one column, with the part of d inside that column.
  EqChainComplex<F> column_complex(int column) const;
  // Complex validation plus InputError("filtration violated by d").
  void validate() const;
};

// Map on H⁻ induced by the inclusion C_{<=from} -> C_{<=to}, in bases of
// homogeneous cycles (cells of the complex are preferred as basis cycles).
// Both homologies must be torsion-free.
template <class F>
struct ContinuationMap {
  DVRMatrix<F> matrix;
  std::vector<int> source_degrees, target_degrees;
  FGModuleShape source, target;
};

template <class F>
ContinuationMap<F> continuation_map(const SlopeComplex<F>& C, const Rational& from,
                                    const Rational& to);

// Rank of the map H(C_{<=from}) -> H(C_{<=to}) in degree m for one model.
template <class F>
int continuation_rank(const SlopeComplex<F>& C, Model model, const Rational& from,
                      const Rational& to, int m);

// dim_K ker E⁺c over degrees [lo, hi] and dim_K coker E⁻c (kInfinite unless c
// is injective between free modules of equal rank) for c = C_{<=from} -> C_{<=to}.
struct CokernelIdentity {
  int plus_kernel = 0;
  int minus_cokernel = 0;
  bool holds() const { return plus_kernel == minus_cokernel; }
};

template <class F>
CokernelIdentity cokernel_identity(const SlopeComplex<F>& C, const Rational& from,
                                   const Rational& to, int lo, int hi);

// ---------------------------------------------------------------------------
// Slope spectral sequence

struct SlopeSSCell {
  Model model = Model::minus;
  int page = 0, column = 0, degree = 0, dim = 0;
};

struct SlopeSS {
  std::vector<Rational> columns;
  int lo = 0, hi = 0, max_page = 0;
  bool free = true;
  std::vector<SlopeSSCell> cells;  // nonzero cells of pages 0..max_page
  // Checks on E_1, recorded for free weights (always true otherwise).
  bool infty_higher_vanish = true;   // columns > 0 of E_1^∞ are zero
  bool minus_higher_torsion = true;  // columns > 0 of E_1⁻ are u-torsion modules

  int dim(Model model, int page, int column, int degree) const;
  // Sum over all degrees of the window.
  int column_total(Model model, int page, int column) const;
  // Rows "degree | col0 col1 ..." for one model and page.
  std::string table(Model model, int page) const;
};

// Pages 0..max_page of the slope filtration for the models -, ∞, + in
// degrees [lo, hi].
template <class F>
SlopeSS slope_ss(const SlopeComplex<F>& C, const Weight& w, int max_page, int lo, int hi,
                 const std::vector<int>& positive_weights = {1});

// Degreewise filtered cells of one model, levels given by slope columns.
template <class F>
class SlopeCells {
 public:
  SlopeCells(const SlopeComplex<F>& C, Model model);
  const FilteredCells<F>& cells() const { return fc_; }
  const DegreewiseModel<F>& model() const { return dw_; }
  // Cell vector of degree m with coefficient 1 on generator g.
  std::vector<F> unit(int m, int g) const;

 private:
  const SlopeComplex<F>* C_;
  DegreewiseModel<F> dw_;
  FilteredCells<F> fc_;
};

// ---------------------------------------------------------------------------
// The plane: d(x_k) = 0, d(y_k) = α_k x_{k-1} + β_k u x_k

struct CLabParams {
  int k_max = 3;
  Weight weight{0, 1};
  std::vector<Rational> alpha, beta;  // alpha[k-1] = α_k for k = 1..k_max
  bool allow_zero_alpha = false;      // admits α_k = 0 (outside the free regime)

  // α_k = 1, β_k = k.
  static CLabParams specialization(int k_max);
  static CLabParams sample(int k_max, Sampler& s);
  void validate() const;
};

// Generators x_0..x_K (|x_k| = -2k, slope k) and y_1..y_K (|y_k| = -2k+1, slope k).
SlopeComplex<Rational> build_C(const CLabParams& p);

struct CLabTruncation {
  int k = 0;
  FGModuleShape minus, infty, plus;
  std::vector<DegreeCount> ordinary;
  std::vector<int> exponents;  // continuation from column 0
  Rational gamma;              // [x_0] = γ u^k [x_k]
  Valuation valuation;         // of x_0
  IntPoly slice, filtration;
  CokernelIdentity cokernel;
  int ord_step_rank = -1;      // ord H(C_{<=k}) -> ord H(C_{<=k+1}) in degree -2k
  bool shape_ok = false, slice_ok = false, filtration_ok = false, ord_ok = false;
  bool ok() const { return shape_ok && slice_ok && filtration_ok && ord_ok && cokernel.holds(); }
};

struct CLabReport {
  CLabParams params;
  std::vector<CLabTruncation> rows;  // k = 0..k_max
  // Last page on which [u^{-j} x_0] is present in E⁺ (j = 0..k_max-1), or -1
  // if it is still present on the last computed page.
  std::vector<int> death_page;
  // Coefficient of [u^{-j} x_0] in D_{j+1}[y_{j+1}].
  std::vector<Rational> zigzag_coefficients;
  bool deaths_ok = false;  // death_page[j] == j + 1 for every j
  bool ok() const;
};

CLabReport c_lab_report(const CLabParams& p);

// ---------------------------------------------------------------------------
// Slice classes of rank-two composites

enum class SliceClass { N, Z, X, other };
// N_k: factors (k-1, k+1); Z_k: (k, k); X_k: (k, k+1).
IntPoly n_poly(int k);
IntPoly z_poly(int k);
IntPoly x_poly(int k);
struct SliceLabel {
  SliceClass cls = SliceClass::other;
  int index = 0;
  IntPoly poly() const;           // throws DomainError for other
  std::string to_string() const;  // "N_3", "Z_0", "X_2", "other"
  friend bool operator==(const SliceLabel&, const SliceLabel&) = default;
};
// Label of a sorted pair of finite exponents.
SliceLabel classify(const std::vector<int>& exponents);

// ---------------------------------------------------------------------------
// Cotangent bundle of the sphere: continuation steps
//   M_k = [[0, u²/β_{k+1}], [1, -α_{k+1}u/β_{k+1}]]

struct TCP1Params {
  int k_max = 4;
  Weight weight{0, 1};
  std::vector<Rational> alpha, beta;  // alpha[k] = α_{k+1}, k = 0..k_max-1

  // force_z: chance of choosing α_{k+1} so that B_{k+1} = 0 when B_k ≠ 0.
  static TCP1Params sample(int k_max, Sampler& s, double force_z = 0.3);
  void validate() const;
};

DirectedSystem<Rational> tcp1_system(const TCP1Params& p);

struct TCP1Step {
  int k = 0;
  std::vector<int> exponents;
  IntPoly slice;
  SliceLabel label;
  // c_{k+} = u^{k-1}[[A u, C u²], [B, D u]] read off the composite (k >= 1).
  Rational A, B, C, D;
  Rational B_recursion;  // from B_{k+1} = A_k - α_{k+1}B_k/β_{k+1}
  Valuation valuation;   // of x_0
  bool form_ok = false;  // composite has the monomial form above
  bool ok = false;       // every per-step check
};

struct TCP1Report {
  std::vector<TCP1Step> steps;  // k = 0..k_max
  bool z_then_n = true;         // Z_k => N_{k+1}
  bool ok() const;
};

TCP1Report tcp1_report(const TCP1Params& p, Exec exec = Exec::serial);

// Constant rotation step r = [[A u, B u²], [-2(1 + λ), C u]] (weights with b = 0).
struct TCP1Rotation {
  Rational A, B, C, lambda;
};
DirectedSystem<Rational> tcp1_rotation_system(const TCP1Rotation& r, int count);

struct PeriodicityReport {
  std::vector<SliceLabel> labels;                 // of R_k, k = 0..K
  std::vector<std::pair<int, int>> implications;  // (k, N k) pairs checked
  bool ok = true;
};
// Z_k => Z_{Nk} for every Nk <= K.
PeriodicityReport periodicity_check(const DirectedSystem<Rational>& sys, int K);

// ---------------------------------------------------------------------------
// Cotangent bundle of the sphere with a twisted action (μ = 2)

struct TwistedParams {
  int k_max = 2;
  Weight weight{0, 1};
  std::uint64_t seed = 1;
  double p_zero = 0.1;      // chance of a zero linking coefficient
  double p_z_branch = 0.5;  // chance of s_{k+2/3} = Z_{2k+1} rather than N_{2k+1}
};

// Columns 0 (x_0, y_0 in degrees 0, 2) and, for each k < k_max,
// k+1/3 and k+2/3 (circles) and k+1 (a three-sphere); linking coefficients
// are sampled and resampled until every truncation is torsion-free.  At
// k+2/3 the image of x_0 is made divisible by u with chance p_z_branch;
// otherwise the step to k+1 is solved so that a single invariant factor
// of the composite grows, by u^2.
SlopeComplex<Rational> build_twisted(const TwistedParams& p);

// Slopes 0, 1/3, 2/3, 1, 4/3, ... up to k_max.
std::vector<Rational> twisted_slopes(int k_max);

// Continuation steps between consecutive truncations (rank two each).
DirectedSystem<Rational> twisted_tcp1_system(const SlopeComplex<Rational>& C, int k_max);

struct TwistedStep {
  Rational slope;
  FGModuleShape minus;
  std::vector<int> expected_degrees;  // generator degrees of E⁻ at this slope
  std::vector<int> exponents;
  IntPoly slice;
  std::string label;
  bool shape_ok = false;
};

struct TwistedReport {
  std::vector<TwistedStep> steps;
  bool x_ok = true;          // s_{k+1/3} = X_{2k}
  bool dichotomy_ok = true;  // (N_{2k+1}, Z_{2k+2}) or (Z_{2k+1}, N_{2k+2})
  bool composite_ok = true;  // direct continuation agrees with the step composite
  bool ss_ok = true;         // E_∞ column sums match the free shapes in the window
  bool ok() const { return x_ok && dichotomy_ok && composite_ok && ss_ok; }
};

TwistedReport twisted_report(const TwistedParams& p, int lo = -12, int hi = 4);

// ---------------------------------------------------------------------------
// Negative line bundle over the sphere: Novikov field with |T| = 2,
// r_k = diag(T, 0) + u A^{(k)}, A entries rational.

struct ONeg1Params {
  int k_max = 4;
  Weight weight{0, 1};
  std::vector<std::array<Rational, 4>> A;  // A11, A12, A21, A22 per step

  // Generic steps have A22 ≠ 0; the listed steps get A22 = 0 (A12·A21 ≠ 0).
  static ONeg1Params sample(int k_max, Sampler& s, const std::vector<int>& degenerate_at = {});
  void validate() const;
};

DirectedSystem<NovikovElem> oneg1_system(const ONeg1Params& p);

struct ONeg1Step {
  int k = 0;
  std::vector<int> exponents;
  int expected_m = 0;  // Σ ν(det r_i)
  IntPoly slice, filtration;
  bool ok = false;
};

struct ONeg1Report {
  std::vector<ONeg1Step> steps;
  LimitShape limit;
  bool limit_ok = false;
  bool ok() const;
};

ONeg1Report oneg1_report(const ONeg1Params& p);

// w (not u-divisible) maps to a non-u-divisible vector under R_k, so it can
// open an SNF basis with invariant factor 1.
bool generates_power_summand(const DirectedSystem<NovikovElem>& sys, int k,
                             const std::vector<NSeries>& w);

// ---------------------------------------------------------------------------
// Monotone block structure

// Steps [[W + uA, uB], [uC, uD]] with W invertible t x t.
std::function<QMatrix(int)> monotone_sampler(int t, int s, std::uint64_t seed);

struct MonotoneReport {
  int t = 0, s = 0, k_max = 0;
  LimitShape limit;
  std::string expected;  // "K[[u]]^t ⊕ K((u))^s"
  bool shape_ok = false;
  bool factors_ok = false;  // t unit factors, the rest >= k (injective case)
  int kernel_rank = 0;
  // The saturated kernel of R_{k_max} reduced mod u has zero t-coordinates
  // and rank kernel_rank: it lies in the s-block up to higher corrections.
  bool kernel_in_s_block = true;
  bool ok() const { return shape_ok && factors_ok && kernel_in_s_block; }
};

// noninjective_at = k kills the last kernel_dim columns of Q_k (k >= 0).
MonotoneReport monotone_structure(int t, int s, int k_max,
                                  const std::function<QMatrix(int)>& sampler,
                                  int noninjective_at = -1, int kernel_dim = 1);

// ---------------------------------------------------------------------------
// Rotation maps

template <class F>
struct RotationMap {
  DVRMatrix<F> matrix;
  std::vector<int> degrees;  // basis degrees of the source
  int mu = 1;
  int steps = 0;
  Weight from, to;
  int degree_shift() const { return 2 * steps * mu; }
};

// Every monomial of entry (i, j) satisfies 2m + |T|·a = shift - |y_i| + |y_j|;
// InputError("grading constraint violated ...") otherwise.
template <class F>
void check_grading(const DVRMatrix<F>& A, const std::vector<int>& degrees, int shift);

// ER_k = step_{k-1} ... step_0 with weight (a, b) -> (a - kb, b) and shift 2kμ.
// With b = 0 all steps must coincide.
template <class F>
RotationMap<F> rotation_compose(const Weight& w, int mu, const std::vector<int>& degrees,
                                const std::vector<DVRMatrix<F>>& steps);

// dim {v mod u^N : ER v ∈ u^j} from the divisibility kernel equals the count
// Σ_i (N - max(0, j - j_i)) + N·b implied by the invariant factors, for
// j = 0..max_j (rational field).
bool filtration_compatible(const RotationMap<Rational>& ER, int max_j);

}  // namespace dvr
