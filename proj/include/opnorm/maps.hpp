#pragma once

#include <functional>
#include <optional>

#include "opnorm/estimate.hpp"
#include "opnorm/space.hpp"

namespace opnorm {

// Linear (or conjugate-linear) map between concrete spaces, acting on basis
// coordinates. A conjugate-linear map conjugates coordinates before applying
// the coefficient matrix.
struct LinearMapRep {
  SpacePtr domain;
  SpacePtr codomain;
  Matrix coeff;  // dim(codomain) x dim(domain)
  bool conj_linear = false;

  Vector apply_coords(const Vector& in) const {
    return conj_linear ? Vector(coeff * in.conjugate()) : Vector(coeff * in);
  }
  // Entrywise application at any level.
  MatElement apply(const MatElement& x) const;
};

LinearMapRep identity_map(const SpacePtr& space);
LinearMapRep zero_map(const SpacePtr& domain, const SpacePtr& codomain);
LinearMapRep scale_map(const SpacePtr& space, Complex factor);
// Transpose on M_n (a level-1 isometry with cb norm n).
LinearMapRep transpose_map(int n);
// x -> x^*, conjugate-linear.
LinearMapRep adjoint_map(int n);
LinearMapRep trace_functional(int n);
// Functional picking the (i, j) coordinate of M_n.
LinearMapRep coordinate_functional(int n, int i, int j);
LinearMapRep random_map(const SpacePtr& domain, const SpacePtr& codomain,
                        Rng& rng);
LinearMapRep compose(const LinearMapRep& psi, const LinearMapRep& phi);

// phi^{(n)}: entrywise application, as a map between level spaces.
LinearMapRep amplify(const LinearMapRep& phi, int n);

// Weight sequence lambda = (lambda_n : M_n -> M_n). Uniform boundedness is
// certified only on [1, N_max] for tabulated kinds.
enum class WeightKind { identity, transpose, unitary_conjugation, custom };

class WeightSequence {
 public:
  static WeightSequence identity();
  static WeightSequence transpose();
  // U_n in M_n for n = 1..N; lambda_n(A) = U_n^* A U_n.
  static WeightSequence unitary_conjugation(std::vector<Matrix> unitaries);
  // Table of n^2 x n^2 matrices acting on vec(A), column-major.
  static WeightSequence custom(std::vector<Matrix> tables);

  WeightKind kind() const { return kind_; }
  int n_max() const { return n_max_; }
  Matrix apply(int n, const Matrix& a) const;
  // Upper bound on sup_{n <= N_max} ||lambda_n|| (exact 1 for the isometric
  // kinds, Frobenius relaxation for custom tables).
  double range_bound() const { return range_bound_; }

 private:
  WeightKind kind_ = WeightKind::identity;
  int n_max_ = 0;
  std::vector<Matrix> unitaries_;
  std::vector<Matrix> tables_;
  double range_bound_ = 1.0;
};

// phi (x) lambda_n as a map between level-n element spaces:
// x = [x_ij] |-> sum_ij phi(x_ij) (x) lambda_n(eps_ij).
LinearMapRep weighted_amplify(const LinearMapRep& phi,
                              const WeightSequence& lambda, int n);

// Bracketed operator norm sup_{||x|| <= 1} ||Phi(x)|| over the min-norm unit
// ball of the domain. Lower bound by projected ascent (with polar pullback
// candidates), upper bound by the Frobenius relaxation
// sigma_max(orthonormalized coordinate matrix) * sqrt(domain side length).
// `extra_starts` are deterministic warm starts appended to the restarts.
NormEstimate induced_norm(const LinearMapRep& phi, const EstimatorConfig& cfg,
                          const std::vector<Vector>& extra_starts = {});

// Re-evaluate ||Phi(x)|| at a witness coordinate vector.
double evaluate_at(const LinearMapRep& phi, const Vector& witness);

// cb norm bracket with per-level profile. Levels are warm-started from the
// embedded previous witness, so the profile is nondecreasing. The upper
// bound uses the finite-dimensional stabilization level min(level_max, d_F)
// and is heuristic below it (+inf when level_max stops short).
NormEstimate cb_norm(const LinearMapRep& phi, int level_max,
                     const EstimatorConfig& cfg);

// Weighted cb norm profile sup_n ||phi (x) lambda_n||. The upper bound
// range_bound * ||phi||-upper applies for functionals and commutative
// codomains, +inf otherwise.
NormEstimate lambda_cb_norm(const LinearMapRep& phi,
                            const WeightSequence& lambda, int level_max,
                            const EstimatorConfig& cfg);

// Bundle an n x n array of maps E -> F into one map E -> M_n(F).
LinearMapRep bundle_matrix_of_maps(
    const std::vector<std::vector<LinearMapRep>>& entries);

// Norm of a matrix of maps under the M_n(CB_lambda(E,F)) = CB_lambda(E,M_n(F))
// identification. Pass a weight for the lambda-cb structure, nothing for cb.
NormEstimate matrix_of_maps_norm(
    const std::vector<std::vector<LinearMapRep>>& entries,
    const std::optional<WeightSequence>& lambda, int level_max,
    const EstimatorConfig& cfg);

}  // namespace opnorm
