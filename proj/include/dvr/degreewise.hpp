#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dvr/homology.hpp"
#include "dvr/linalg.hpp"

namespace dvr {

// Which cells u^k g of C_u a model keeps: C⁻ (k >= 0), C^∞ (all k),
// C⁺ = C_u/uC (k <= 0) or ord C = C/uC (k = 0).
enum class Model { minus, infty, plus, ord };

const char* model_name(Model m);

// One degree of a model as a finite K-vector space.  With T-grading 0 each
// generator contributes at most one cell u^k g to a given degree.
template <class F>
class DegreewiseModel {
 public:
  DegreewiseModel(const EqChainComplex<F>& C, Model model);

  Model model() const { return model_; }
  const EqChainComplex<F>& complex() const { return *C_; }
  // Generator indices of the cells in degree m, in increasing order.
  std::vector<int> cells(int m) const;
  int dim(int m) const { return int(cells(m).size()); }
  // u-exponent of generator g in degree m.
  int u_exponent(int g, int m) const { return (m - C_->gens[g].degree) / 2; }

  // Differential C_m -> C_{m+1}.
  KMatrix<F> differential(int m) const;
  // x -> proj_dst(u^shift * (apply_d ? d x : x)), taken in the full C_u,
  // from degree m of this model to degree m + 2*shift + (apply_d ? 1 : 0) of dst.
  KMatrix<F> map_to(const DegreewiseModel& dst, int m, int shift, bool apply_d) const;

  // Cycles and boundaries in degree m (columns in cell coordinates).
  KMatrix<F> cycles(int m) const;
  KMatrix<F> boundaries(int m) const;
  int homology_dim(int m) const;

 private:
  bool keeps(int k) const;

  const EqChainComplex<F>* C_;
  Model model_;
};

// Rank of the map induced on homology by a chain-level map f from degree m
// of src to degree m' of dst (f must send cycles to cycles and boundaries
// to boundaries).
template <class F>
int induced_rank(const DegreewiseModel<F>& src, int m, const DegreewiseModel<F>& dst, int m2,
                 const KMatrix<F>& f);

// Degreewise complex with an increasing filtration: a cell of level p lies in
// F_p.  The differential must not raise levels.
template <class F>
struct FilteredCells {
  std::function<KMatrix<F>(int)> differential;  // C_m -> C_{m+1}
  std::function<std::vector<int>(int)> levels;  // level of each cell of C_m
};

// dim E_r^p in degree m, with
//   Z_r^p = {x in F_p : dx in F_{p-r}},
//   E_r^p = Z_r^p / (Z_{r-1}^{p-1} + d Z_{r-1}^{p+r-1}).
// r = 0 gives F_p / F_{p-1}.
template <class F>
int page_dim(const FilteredCells<F>& fc, int m, int p, int r);

// Edge differential D_r on the class of f (a cell vector of degree m lying in
// F_p): the level p - r part of d(f + g) for a correction g in F_{p-1} with
// d(f + g) in F_{p-r}, as a cell vector of degree m + 1.  nullopt if no such
// g exists (f does not survive to E_r).
template <class F>
std::optional<std::vector<F>> zigzag(const FilteredCells<F>& fc, int m, int p, int r,
                                     const std::vector<F>& f);

// Some x with A x = b, or nullopt.
template <class F>
std::optional<std::vector<F>> solve_linear(const KMatrix<F>& A, const std::vector<F>& b);

}  // namespace dvr
