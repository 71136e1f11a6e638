#pragma once

#include "opnorm/maps.hpp"

namespace opnorm {

// Finite collection of concrete spaces standing in for a (possibly large)
// class Lambda.
struct LambdaCollection {
  std::vector<SpacePtr> members;
  std::string label;

  LambdaCollection(std::vector<SpacePtr> m, std::string l)
      : members(std::move(m)), label(std::move(l)) {
    if (members.empty())
      throw std::invalid_argument("collection must be nonempty");
  }
};

// phi (x) I_X between the min tensor spaces E (x) X and F (x) X.
LinearMapRep tensor_with_identity(const LinearMapRep& phi, const SpacePtr& x);

// sup_{X in Lambda} ||phi (x) I_X||. level_profile records one lower bound
// per member, in member order. The upper is the max of the member uppers,
// which is finite (each member norm has a Frobenius relaxation bound).
NormEstimate lambda_class_norm(const LinearMapRep& phi,
                               const LambdaCollection& lambda,
                               const EstimatorConfig& cfg);

// Bracket chain ||phi|| <= ||phi||_Lambda <= ||phi||_cb, checked at bracket
// level: base.lower <= class.upper + tol and class.lower <= cb.upper + tol.
struct SandwichReport {
  bool ok = false;
  NormEstimate base, cls, cb;
};
SandwichReport sandwich_check(const LinearMapRep& phi,
                              const LambdaCollection& lambda, int level_max,
                              const EstimatorConfig& cfg, double tol = 1e-6);

// ||phi (x) I_X|| for X the k_points-fold direct sum of M_n (a finite model
// of C(K, M_n)); equals ||phi^{(n)}|| for every k_points.
NormEstimate ckmn_model_norm(const LinearMapRep& phi, int n, int k_points,
                             const EstimatorConfig& cfg);

// Lambda-norm of an n x n array of functionals on E, viewed as one map
// E -> M_n. The cb counterpart is matrix_of_maps_norm(psi, cb).
NormEstimate lambda_dual_matrix_norm(
    const std::vector<std::vector<LinearMapRep>>& psi,
    const LambdaCollection& lambda, const EstimatorConfig& cfg);

}  // namespace opnorm
