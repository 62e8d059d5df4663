#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dvr/linalg.hpp"
#include "dvr/smith.hpp"

namespace dvr {

enum class Exec { serial, parallel };

// V_0 -Q_0-> V_1 -Q_1-> V_2 -> ... with every V_k = K[[u]]^r.
template <class F>
struct DirectedSystem {
  int rank = 0;
  FieldConfig config = FieldConfig::rational();
  std::vector<DVRMatrix<F>> steps;
  std::vector<int> shifts;  // degree shift of each step; empty means 0
  // Produces Q_k for k >= steps.size(); must be deterministic.
  std::function<DVRMatrix<F>(int)> generator;

  static DirectedSystem constant(const DVRMatrix<F>& Q, int count);
  static DirectedSystem from_generator(int rank, std::function<DVRMatrix<F>(int)> gen,
                                       FieldConfig cfg = FieldConfig::rational());

  DVRMatrix<F> step(int k) const;
  int shift(int k) const { return k < int(shifts.size()) ? shifts[k] : 0; }
  // Number of steps that can be requested (a large bound with a generator).
  int available() const;
  // Every stored step is rank x rank.
  void validate() const;
};

// R_k = Q_{k-1} ... Q_0 (the identity for k = 0).
template <class F>
DVRMatrix<F> composite(const DirectedSystem<F>& sys, int k);

// Invariant factor exponents of R_k, nondecreasing, kInfinite for each
// dimension of ker R_k.
template <class F>
std::vector<int> composite_factors(const DirectedSystem<F>& sys, int k, const SNFOptions& opt = {});

// composite_factors for k = 0..K; the SNFs run in parallel under Exec::parallel.
// Throws InvariantError if some j_i(k) > j_i(k+1).
template <class F>
std::vector<std::vector<int>> composite_factor_table(const DirectedSystem<F>& sys, int K,
                                                     Exec exec = Exec::serial,
                                                     const SNFOptions& opt = {});

struct LimitShape {
  enum class Status { stabilized, diverging_at_window };
  int rank = 0;
  int steps_used = 0, window = 0;
  // Image block: exponents of R_K (finite ones), status of each.
  std::vector<int> final_exponents;
  std::vector<Status> status;
  std::vector<int> stable_exponents;  // u^{-j} K[[u]] summands
  int laurent_count = 0;                // K((u)) summands s
  bool certified = false;               // nilpotent u^0-part criterion applied
  // Single-failure systems: rank of ker R_p and the reborn cokernel block.
  int kernel_rank = 0;
  int failure_index = -1;  // p with Q_{p-1} the non-injective step
  std::vector<int> cokernel_final;
  std::vector<Status> cokernel_status;
  std::vector<int> cokernel_stable;
  int cokernel_laurent = 0;  // s'

  // Rank of the image of V_0 in the limit.
  int canonical_rank() const { return rank - kernel_rank; }
  int total_laurent() const { return laurent_count + cokernel_laurent; }
  // All stable exponents of both blocks, sorted.
  std::vector<int> lattice_exponents() const;
  // "u^{-1}K[[u]] ⊕ K[[u]]^2 ⊕ K((u))".
  std::string to_string() const;
};

// Windowed direct limit over K steps: an exponent unchanged over the last
// `window` steps (default: the rank) is stabilized, otherwise it counts
// toward K((u)).  If every examined step is injective with one common
// nilpotent u^0-part, the limit is the full localisation and is certified.
// A single non-injective step is handed to noninjective_limit.
template <class F>
LimitShape limit_shape(const DirectedSystem<F>& sys, int K, int window = -1);

// Limit of V -Q-> V -Q-> ... (localisation at Q).
template <class F>
LimitShape localise_at_element(const DVRMatrix<F>& Q, int K, int window = -1);

// Image block from the finite exponents of R_k and the cokernel block from
// R'_k : C_p -> C_k with C_k = coker R_k / torsion, for k in [p, K].
// p = 0 means no failure is expected.  Throws DomainError on two or more
// non-injective steps and InputError if the failing step is not Q_{p-1}.
template <class F>
LimitShape noninjective_limit(const DirectedSystem<F>& sys, int p, int K, int window = -1);

// Composite of steps of the form [[I + uA, uB], [uC, uD]] with I of size t.
struct BlockCompositeReport {
  int t = 0, s = 0, k = 0;
  std::vector<int> exponents;
  int unit_count = 0;
  int nullity = 0;
  int min_nonunit = kInfinite;  // least exponent > 0 (kInfinite if none)
  bool ok() const { return unit_count == t && (min_nonunit >= k); }
};

template <class F>
BlockCompositeReport block_composite_factors(int t, int s, int k,
                                             const std::function<DVRMatrix<F>(int)>& step_sampler);

// One cell (row, column) of the composite's Young diagram, born at step k.
struct Bar {
  int row = 0, column = 0, birth = 0;
};

struct PersistenceLattice {
  std::vector<std::vector<int>> shapes;  // nonincreasing rows (positive j_i(k))
  std::vector<std::vector<int>> duals;   // conjugate partitions
  std::vector<Bar> bars;
  std::string barcode() const;  // one line per bar: "row 1 col 3 born 3"
};

// Young diagrams of R_0, ..., R_K; throws DomainError for a non-injective
// composite and InvariantError if consecutive diagrams are not nested.
template <class F>
PersistenceLattice persistence_lattice(const DirectedSystem<F>& sys, int K);

// Crude composition bounds: with alpha, beta the least and largest exponents
// of an injective first step Q_0, j_i(Q_k...Q_0) - j_i(Q_k...Q_1) ∈ [alpha, beta].
struct WeightChangeReport {
  int alpha = 0, beta = 0;
  std::vector<std::vector<int>> gamma;  // per k, per i
  bool ok = true;
};

template <class F>
WeightChangeReport weight_change_bounds(const DirectedSystem<F>& sys, int K);

// u^0-part of a matrix (constant coefficients).
template <class F>
KMatrix<F> constant_part(const DVRMatrix<F>& A);

// Inverse over K[[u]] via the SNF; throws DomainError if A is not invertible.
template <class F>
DVRMatrix<F> invert(const DVRMatrix<F>& A, const SNFOptions& opt = {});

std::string status_name(LimitShape::Status s);

}  // namespace dvr
