#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dvr/smith.hpp"

namespace dvr {

struct Generator {
  std::string name;
  int degree = 0;
};

// Free K[[u]]-complex on named graded generators.  d(i, j) is the
// coefficient of generator i in d(generator j); |u| = 2 and d has degree +1.
template <class F>
struct EqChainComplex {
  std::string name;
  std::vector<Generator> gens;
  DVRMatrix<F> d;

  int size() const { return int(gens.size()); }
  const FieldConfig& config() const { return d.config(); }
  int index_of(const std::string& gen) const;  // -1 if absent

  // Unique names, square d of matching size, every monomial of every entry
  // respects the degree constraint, and d∘d = 0 to precision.  All
  // violations raise InputError.
  void validate() const;
};

// Degree of T^a u^k g, for the given T-grading.
int monomial_degree(int gen_degree, int u_exp, const Rational& t_exp, int t_grading);

// Graded module presented by summand degrees:
//   free_power: K[[u]] at m (degrees m, m+2, ...),
//   free_laurent: K((u)) at m (all degrees of that parity),
//   tails: 𝔽 at m (degrees m, m-2, ...),
//   torsion: T_k generated in degree g (degrees g, g+2, ..., g+2(k-1)).
struct FGModuleShape {
  std::vector<int> free_power, free_laurent, tails;
  std::vector<std::pair<int, int>> torsion;  // (k, degree)

  void normalize();  // sort every list; torsion by (k, degree)
  bool is_zero() const;
  int total_rank() const {
    return int(free_power.size() + free_laurent.size() + tails.size() + torsion.size());
  }
  // K-dimension in degree m (T-grading 0).
  int dim_in_degree(int m) const;
  // Dimensions of ker / coker of u : M_m -> M_{m+2}.
  int u_kernel_dim(int m) const;
  int u_cokernel_dim(int m) const;
  std::string to_string() const;
  friend bool operator==(const FGModuleShape& a, const FGModuleShape& b);
};

// Full SNF-route data for W⁻ = H(C).
template <class F>
struct MinusHomology {
  FGModuleShape shape;
  std::vector<int> exponents;          // invariant factors of d
  std::vector<int> source_degrees;     // degree of V e_i (the new source basis)
  std::vector<int> torsion_gen_degrees;  // degree of ẽ_i for finite exponents
};

template <class F>
MinusHomology<F> homology_minus_detail(const EqChainComplex<F>& C, const SNFOptions& opt = {});
template <class F>
FGModuleShape homology_minus(const EqChainComplex<F>& C, const SNFOptions& opt = {});
template <class F>
FGModuleShape homology_infty(const EqChainComplex<F>& C, const SNFOptions& opt = {});
template <class F>
FGModuleShape homology_plus(const EqChainComplex<F>& C, const SNFOptions& opt = {});

struct DegreeCount {
  int degree;
  int dim;
  friend bool operator==(const DegreeCount&, const DegreeCount&) = default;
};

// Betti numbers of H(D, δ₀), one entry per degree with nonzero dimension.
// Computed from δ₀ for T-grading 0; for |T| = 2 from the W⁻ shape through
// the u-multiplication sequence.
template <class F>
std::vector<DegreeCount> ordinary_cohomology(const EqChainComplex<F>& C);

struct LESReport {
  bool ok = true;
  std::optional<int> first_failing_degree;
  std::string failing_sequence;  // "W-[-2] -> Winf -> W+" or "W-[-2] -> W- -> ord"
  std::string detail;
};

// Degreewise dimension-exactness of both long exact sequences in [lo, hi].
// Every space and every induced map is computed at chain level over K.
template <class F>
LESReport check_les(const EqChainComplex<F>& C, int lo, int hi);

struct SSPageCell {
  int page;
  int p;       // u-exponent of the filtration step (p <= 0)
  int degree;  // total degree
  int dim;
};

struct UAdicReport {
  std::vector<SSPageCell> cells;  // nonzero cells only
  bool ord_zero = false;
  bool plus_zero = false;
  bool vanishing_consistent = true;  // ord W = 0 <=> W⁺ = 0
  // E_∞ total per degree agrees with dim W⁺ computed degreewise.
  bool converges = true;
};

// Pages E_r (r = 0..max_page, plus E_∞) of the u-adic filtration of C⁺
// in degrees [lo, hi].
template <class F>
UAdicReport u_adic_pages(const EqChainComplex<F>& C, int max_page, int lo, int hi);

}  // namespace dvr
