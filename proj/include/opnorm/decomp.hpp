#pragma once

#include "opnorm/estimate.hpp"
#include "opnorm/space.hpp"

namespace opnorm {

// Element of E (x) F at matrix level n, tagged with its factor spaces so the
// tensor basis index r * dim(F) + s stays interpretable.
struct TensorElement {
  SpacePtr e_space, f_space;
  MatElement u;

  TensorElement(SpacePtr e, SpacePtr f, MatElement elem)
      : e_space(std::move(e)), f_space(std::move(f)), u(std::move(elem)) {
    if (u.space()->dim() != e_space->dim() * f_space->dim())
      throw std::invalid_argument("element does not live over the factors");
  }

  int level() const { return u.level(); }
  double min_norm() const { return u.min_norm(); }
};

TensorElement tensor_element(const MatElement& x, const MatElement& y);
TensorElement zero_tensor(const SpacePtr& e, const SpacePtr& f, int level);

// Rectangular matrix over a concrete space: one rows x cols slice per basis
// element, realized as sum_r slice_r (x) B_r.
struct RectElement {
  SpacePtr space;
  int rows = 0, cols = 0;
  std::vector<Matrix> slices;

  Matrix realize() const;
  double norm() const { return spectral_norm(realize()); }
};

enum class DecompMode { otimes, odot, bullet };

// u ~ alpha * (e op f) * beta with op the mode's combination: full tensor
// (otimes), matrix-style product of blocks (odot), entrywise (bullet).
struct Decomposition {
  Matrix alpha, beta;
  RectElement e, f;
  DecompMode mode = DecompMode::odot;
  double residual = std::numeric_limits<double>::infinity();

  double cost() const {
    return spectral_norm(alpha) * e.norm() * f.norm() * spectral_norm(beta);
  }
};

// Alternating-least-squares upper bounds for the three decomposition norms,
// each paired with the min-norm lower bound. A decomposition counts only if
// its assembly reproduces u to relative residual 1e-8; otherwise the upper is
// +inf and converged is false. `out` receives the best decomposition found,
// `warm` seeds the search (padded to the current cap as needed).
NormEstimate haagerup_upper(const TensorElement& u, int rank_cap,
                            const EstimatorConfig& cfg,
                            Decomposition* out = nullptr,
                            const Decomposition* warm = nullptr);
NormEstimate projective_upper(const TensorElement& u, int size_cap,
                              const EstimatorConfig& cfg,
                              Decomposition* out = nullptr,
                              const Decomposition* warm = nullptr);
NormEstimate schur_upper(const TensorElement& u, int size_cap,
                         const EstimatorConfig& cfg,
                         Decomposition* out = nullptr,
                         const Decomposition* warm = nullptr);

}  // namespace opnorm
