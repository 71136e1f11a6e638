#include "doctest.h"
#include "opnorm/decomp.hpp"

using namespace opnorm;

namespace {

TensorElement diag_pair_element() {
  // eps_11 (x) eps_11 + eps_22 (x) eps_22 in M_2 (x) M_2.
  SpacePtr m2 = matrix_algebra(2);
  SpacePtr tp = tensor_space(m2, m2);
  Vector coords = Vector::Zero(16);
  coords(0 * 4 + 0) = 1.0;  // eps_11 (x) eps_11
  coords(3 * 4 + 3) = 1.0;  // eps_22 (x) eps_22
  return TensorElement(m2, m2, MatElement::from_coords(tp, 1, coords));
}

}  // namespace

TEST_CASE("rank-one elements are pinned at the product of norms") {
  Rng rng(113);
  SpacePtr m2 = matrix_algebra(2);
  EstimatorConfig cfg;
  MatElement x = MatElement::random(m2, 1, rng);
  MatElement y = MatElement::random(m2, 1, rng);
  TensorElement u = tensor_element(x, y);
  double prod = x.min_norm() * y.min_norm();

  Decomposition dec;
  for (auto* fn : {&haagerup_upper, &projective_upper, &schur_upper}) {
    NormEstimate est = (*fn)(u, 2, cfg, &dec, nullptr);
    CHECK(est.converged);
    CHECK(dec.residual <= 1e-8);
    CHECK(est.upper <= prod + 1e-6);
    CHECK(est.lower >= prod - 1e-9);
    CHECK(est.upper == doctest::Approx(std::max(dec.cost(), est.lower)));
  }
}

TEST_CASE("the diagonal pair has Haagerup norm one") {
  TensorElement u = diag_pair_element();
  EstimatorConfig cfg;
  NormEstimate est = haagerup_upper(u, 2, cfg);
  CHECK(est.converged);
  CHECK(est.lower == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(est.upper <= 1.0 + 1e-6);
}

TEST_CASE("zero element has zero decomposition norms") {
  SpacePtr m2 = matrix_algebra(2);
  TensorElement u = zero_tensor(m2, m2, 2);
  EstimatorConfig cfg;
  CHECK(haagerup_upper(u, 1, cfg).upper == 0.0);
  CHECK(projective_upper(u, 1, cfg).upper == 0.0);
  CHECK(schur_upper(u, 1, cfg).upper == 0.0);
}

TEST_CASE("upper bounds dominate the min norm") {
  Rng rng(127);
  SpacePtr m2 = matrix_algebra(2);
  SpacePtr tp = tensor_space(m2, m2);
  EstimatorConfig cfg;
  for (int t = 0; t < 5; ++t) {
    MatElement x = MatElement::random(tp, 1, rng);
    TensorElement u(m2, m2, x);
    NormEstimate h = haagerup_upper(u, 4, cfg);
    NormEstimate p = projective_upper(u, 4, cfg);
    NormEstimate s = schur_upper(u, 4, cfg);
    CHECK(h.converged);
    CHECK(p.converged);
    CHECK(s.converged);
    double mn = u.min_norm();
    CHECK(h.upper >= mn - 1e-9);
    CHECK(p.upper >= mn - 1e-9);
    CHECK(s.upper >= mn - 1e-9);
  }
}

TEST_CASE("growing the cap with a warm start never hurts") {
  Rng rng(131);
  SpacePtr m2 = matrix_algebra(2);
  SpacePtr tp = tensor_space(m2, m2);
  EstimatorConfig cfg;
  MatElement x = MatElement::random(tp, 1, rng);
  TensorElement u(m2, m2, x);
  Decomposition small;
  NormEstimate e2 = haagerup_upper(u, 2, cfg, &small);
  NormEstimate e4 = haagerup_upper(u, 4, cfg, nullptr, &small);
  if (e2.converged) CHECK(e4.upper <= e2.upper + 1e-9);
  CHECK(e4.converged);

  // A rank-two element is feasible at cap 2 already; the padded warm start
  // keeps the larger cap at least as good.
  TensorElement v = diag_pair_element();
  Decomposition warm2;
  NormEstimate v2 = haagerup_upper(v, 2, cfg, &warm2);
  REQUIRE(v2.converged);
  NormEstimate v3 = haagerup_upper(v, 3, cfg, nullptr, &warm2);
  CHECK(v3.converged);
  CHECK(v3.upper <= v2.upper + 1e-9);
}

TEST_CASE("infeasible caps report an open upper bound") {
  TensorElement u = diag_pair_element();
  EstimatorConfig cfg;
  NormEstimate est = haagerup_upper(u, 1, cfg);
  CHECK(!est.converged);
  CHECK(std::isinf(est.upper));
  CHECK(est.lower == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("factor bookkeeping is validated") {
  SpacePtr m2 = matrix_algebra(2);
  SpacePtr d3 = diagonal_algebra(3);
  CHECK_THROWS_AS(
      TensorElement(m2, d3, MatElement::zero(tensor_space(m2, m2), 1)),
      std::invalid_argument);
}
