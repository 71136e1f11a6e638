#include "doctest.h"
#include "opnorm/ruan.hpp"

using namespace opnorm;

TEST_CASE("the min norm passes both Ruan checks") {
  for (SpacePtr space : {matrix_algebra(2), diagonal_algebra(3)}) {
    MatrixNormOracle oracle = min_norm_oracle(space);
    Rng rng(181);
    RuanReport r1 = check_r1(oracle, 300, 2, rng);
    CHECK(r1.clean());
    CHECK(r1.samples > 250);
    RuanReport r2 = check_r2(oracle, 300, 2, rng);
    CHECK(r2.clean());
  }
}

TEST_CASE("the Frobenius sequence fails R1 by sqrt(2) - 1") {
  SpacePtr m2 = matrix_algebra(2);
  MatrixNormOracle oracle = frobenius_oracle(m2);
  Rng rng(191);
  RuanReport rep = check_r1(oracle, 200, 2, rng);
  CHECK(!rep.clean());
  CHECK(rep.worst_excess >= std::sqrt(2.0) - 1.0 - 1e-9);
  // Certificates re-evaluate independently.
  for (size_t i = 0; i < std::min<size_t>(5, rep.violations.size()); ++i)
    CHECK(reevaluate_r1(oracle, rep.violations[i]) > 5e-9);

  // The explicit eps_11 pair gives the exact excess.
  RuanCertificate c;
  c.level1 = c.level2 = 1;
  c.e1.assign(4, Matrix::Zero(1, 1));
  c.e1[0](0, 0) = 1.0;
  c.e2 = c.e1;
  CHECK(reevaluate_r1(oracle, c) ==
        doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("the entrywise l1 sequence fails R2") {
  SpacePtr m2 = matrix_algebra(2);
  MatrixNormOracle oracle = entrywise_l1_oracle(m2);
  Rng rng(193);
  RuanReport rep = check_r2(oracle, 1000, 2, rng);
  CHECK(!rep.clean());
  for (size_t i = 0; i < std::min<size_t>(5, rep.violations.size()); ++i)
    CHECK(reevaluate_r2(oracle, rep.violations[i]) > 5e-9);
}

TEST_CASE("identity compressions never show excess") {
  SpacePtr m2 = matrix_algebra(2);
  MatrixNormOracle oracle = min_norm_oracle(m2);
  Rng rng(197);
  for (int t = 0; t < 20; ++t) {
    RuanCertificate c;
    c.level1 = 2;
    c.e1.clear();
    for (int r = 0; r < 4; ++r) c.e1.push_back(random_matrix(2, 2, rng));
    c.alpha = Matrix::Identity(2, 2);
    c.beta = Matrix::Identity(2, 2);
    CHECK(reevaluate_r2(oracle, c) <= 1e-10);
  }

  RuanCertificate z;
  z.level1 = z.level2 = 1;
  z.e1.assign(4, Matrix::Zero(1, 1));
  z.e2 = z.e1;
  CHECK(reevaluate_r1(oracle, z) == 0.0);
}

TEST_CASE("MIN quantization at level one is the base norm") {
  Rng rng(199);
  NormedSpaceOracle linf = lp_space_oracle(3, std::numeric_limits<double>::infinity(), 16);
  NormedSpaceOracle l1 = lp_space_oracle(2, 1.0, 32);
  for (int t = 0; t < 10; ++t) {
    Vector v = random_unit_vector(3, rng);
    std::vector<Matrix> slices;
    for (int r = 0; r < 3; ++r)
      slices.push_back(Matrix::Constant(1, 1, v(r)));
    double mq = min_quantize_norm(linf, slices).lower;
    CHECK(mq == doctest::Approx(linf.norm(v)).epsilon(1e-10));
  }
  for (int t = 0; t < 10; ++t) {
    Vector v = random_unit_vector(2, rng);
    std::vector<Matrix> slices;
    for (int r = 0; r < 2; ++r)
      slices.push_back(Matrix::Constant(1, 1, v(r)));
    double mq = min_quantize_norm(l1, slices).lower;
    CHECK(mq <= l1.norm(v) + 1e-12);
    CHECK(mq >= l1.norm(v) * 0.99);  // phase-grid resolution
  }
}

TEST_CASE("the coordinatewise sup example evaluates to one") {
  NormedSpaceOracle linf2 = lp_space_oracle(2, std::numeric_limits<double>::infinity(), 16);
  std::vector<Matrix> slices(2, Matrix::Zero(2, 2));
  slices[0](0, 0) = 1.0;  // eps_11 (x) delta_1
  slices[1](1, 1) = 1.0;  // eps_22 (x) delta_2
  NormEstimate est = min_quantize_norm(linf2, slices);
  CHECK(est.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(est.upper >= 1.0);

  // MIN is dominated by the concrete diagonal-algebra norm.
  SpacePtr d2 = diagonal_algebra(2);
  MatElement x(d2, 2, slices);
  CHECK(est.lower <= x.min_norm() + 1e-9);
}

TEST_CASE("MIN-quantized sequences pass both Ruan checks") {
  for (double p : {1.0, std::numeric_limits<double>::infinity()}) {
    NormedSpaceOracle x = lp_space_oracle(2, p, 8);
    MatrixNormOracle oracle = min_quantized_oracle(x);
    Rng rng(211);
    CHECK(check_r1(oracle, 200, 2, rng).clean());
    CHECK(check_r2(oracle, 200, 2, rng).clean());
  }
}
