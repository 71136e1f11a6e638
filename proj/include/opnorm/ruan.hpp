#pragma once

#include <functional>

#include "opnorm/estimate.hpp"
#include "opnorm/space.hpp"

namespace opnorm {

// Candidate matrix-norm sequence over a base space with m coordinates.
// Level-n data is given as m slices of size n x n.
struct MatrixNormOracle {
  std::string label;
  int dim = 0;
  std::function<double(int level, const std::vector<Matrix>& slices)> eval;
};

MatrixNormOracle min_norm_oracle(const SpacePtr& space);
// Frobenius norm of the realization at every level (violates R1).
MatrixNormOracle frobenius_oracle(const SpacePtr& space);
// Entrywise l1 norm of the realization (violates R2).
MatrixNormOracle entrywise_l1_oracle(const SpacePtr& space);

// Normed space X with a sampled dual ball for the MIN quantization.
struct NormedSpaceOracle {
  std::string label;
  int dim = 0;
  std::function<double(const Vector&)> norm;
  std::vector<Vector> dual_points;  // functionals of dual norm at most one
};

// l^p coordinate space, p in {1, inf}; the dual sample enumerates extreme
// points of the dual ball on a phase grid.
NormedSpaceOracle lp_space_oracle(int dim, double p, int phases = 32);

// ||u||_MIN = sup_{f in Ball(X*)} ||(id_n (x) f)(u)||, evaluated over the
// sampled dual points; upper bound sum_r ||x_r|| ||U_r||.
NormEstimate min_quantize_norm(const NormedSpaceOracle& x,
                               const std::vector<Matrix>& slices);

MatrixNormOracle min_quantized_oracle(const NormedSpaceOracle& x);

struct RuanCertificate {
  // R1: the two summands; R2: e1 holds the element, alpha/beta the scalars.
  std::vector<Matrix> e1, e2;
  int level1 = 0, level2 = 0;
  Matrix alpha, beta;
  double lhs = 0.0, bound = 0.0, excess = 0.0;
};

struct RuanReport {
  int samples = 0;
  std::vector<RuanCertificate> violations;
  double worst_excess = 0.0;
  bool clean() const { return violations.empty(); }
};

// Evaluate a certificate's excess from scratch.
double reevaluate_r1(const MatrixNormOracle& oracle, const RuanCertificate& c);
double reevaluate_r2(const MatrixNormOracle& oracle, const RuanCertificate& c);

// Sample pairs (budget many), record positive excesses of
// ||e1 (+) e2|| - max(||e1||, ||e2||), then hill-climb from the worst.
RuanReport check_r1(const MatrixNormOracle& oracle, int budget, int max_level,
                    Rng& rng);
// Same for ||alpha e beta|| - ||alpha|| ||e|| ||beta||.
RuanReport check_r2(const MatrixNormOracle& oracle, int budget, int max_level,
                    Rng& rng);

}  // namespace opnorm
