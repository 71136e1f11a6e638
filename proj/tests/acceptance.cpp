// Acceptance gate: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "opnorm/bilinear.hpp"
#include "opnorm/io.hpp"
#include "opnorm/lambda_class.hpp"
#include "opnorm/ruan.hpp"

using namespace opnorm;

namespace {

EstimatorConfig make_cfg(int restarts, int max_iter, double tol = 1e-10) {
  EstimatorConfig cfg;
  cfg.restarts = restarts;
  cfg.max_iter = max_iter;
  cfg.tol = tol;
  return cfg;
}

SpacePtr random_subspace(int ambient, int dim, Rng& rng) {
  std::vector<Matrix> basis;
  for (int r = 0; r < dim; ++r)
    basis.push_back(random_matrix(ambient, ambient, rng));
  return ConcreteSpace::make(ambient, basis, "sub");
}

// SWAP element sum_ij eps_ij (x) eps_ji in M_n(M_n); a permutation unitary.
MatElement swap_element(int n) {
  SpacePtr mn = matrix_algebra(n);
  MatElement x = MatElement::zero(mn, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      x = x + MatElement::basis_element(mn, n, i, j, j * n + i);
  return x;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

// 1. Tensor products of random elements have multiplicative min norms.
bool matrix_cross_exactness(std::string& detail) {
  Rng rng(2201);
  std::vector<SpacePtr> pool = {matrix_algebra(1),    matrix_algebra(2),
                                matrix_algebra(3),    diagonal_algebra(2),
                                diagonal_algebra(3),  random_subspace(2, 2, rng),
                                random_subspace(3, 3, rng)};
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const SpacePtr& e = pool[t % pool.size()];
    const SpacePtr& f = pool[(t / 2) % pool.size()];
    MatElement x = MatElement::random(e, 1 + t % 2, rng);
    MatElement y = MatElement::random(f, 1 + (t / 2) % 2, rng);
    double dev =
        std::abs(min_tensor(x, y).min_norm() - x.min_norm() * y.min_norm());
    worst = std::max(worst, dev);
  }
  detail = "200 pairs, max deviation " + fmt(worst);
  return worst <= 1e-9;
}

// 2. The min norm passes both Ruan checks at budget 1000.
bool ruan_axioms_for_min(std::string& detail) {
  Rng rng(2203);
  int total = 0, bad = 0;
  for (const SpacePtr& space :
       {matrix_algebra(3), diagonal_algebra(3), random_subspace(3, 2, rng)}) {
    MatrixNormOracle oracle = min_norm_oracle(space);
    RuanReport r1 = check_r1(oracle, 1000, 2, rng);
    RuanReport r2 = check_r2(oracle, 1000, 2, rng);
    total += r1.samples + r2.samples;
    bad += static_cast<int>(r1.violations.size() + r2.violations.size());
  }
  detail = std::to_string(total) + " samples, " + std::to_string(bad) +
           " violations";
  return bad == 0;
}

// 3. Transpose amplification norms reach n, with the permutation witness
// confirmed by a direct singular value computation.
bool transpose_cb_growth(std::string& detail) {
  EstimatorConfig cfg = make_cfg(24, 500, 1e-12);
  bool ok = true;
  std::string lows;
  for (int n = 2; n <= 4; ++n) {
    NormEstimate est = cb_norm(transpose_map(n), n, cfg);
    ok = ok && est.lower >= n - 1e-6;
    lows += (lows.empty() ? "" : ", ") + fmt(est.lower);

    MatElement swap = swap_element(n);
    LinearMapRep amp = amplify(transpose_map(n), n);
    Matrix image = MatElement::from_coords(amp.codomain, 1,
                                           amp.apply_coords(swap.coords()))
                       .realize();
    ok = ok && std::abs(swap.min_norm() - 1.0) <= 1e-9 &&
         std::abs(top_singular(image).sigma - n) <= 1e-9;
  }
  detail = "lower bounds " + lows + " for n = 2, 3, 4";
  return ok;
}

// 4. Under the transpose weight the identity on M_4 has linearly growing
// profile while the adjoint stays flat at one.
bool transpose_weight_separation(std::string& detail) {
  EstimatorConfig cfg = make_cfg(24, 500, 1e-12);
  WeightSequence lambda = WeightSequence::transpose();
  NormEstimate id_est =
      lambda_cb_norm(identity_map(matrix_algebra(4)), lambda, 4, cfg);
  NormEstimate adj_est = lambda_cb_norm(adjoint_map(4), lambda, 4, cfg);
  bool ok = id_est.level_profile.size() == 4 &&
            adj_est.level_profile.size() == 4;
  std::string lows;
  for (int n = 1; n <= 4 && ok; ++n) {
    ok = id_est.level_profile[n - 1] >= n - 1e-6 &&
         std::abs(adj_est.level_profile[n - 1] - 1.0) <= 1e-6;
    lows += (lows.empty() ? "" : ", ") + fmt(id_est.level_profile[n - 1]);
  }
  detail = "identity profile " + lows + ", adjoint flat at 1";
  return ok;
}

// 5. Composition lower bounds stay below the products of factor uppers,
// in both composition orders.
bool composition_submultiplicativity(std::string& detail) {
  Rng rng(2207);
  EstimatorConfig cfg = make_cfg(6, 150);
  WeightSequence lambda = WeightSequence::transpose();
  SpacePtr m2 = matrix_algebra(2);
  SpacePtr d3 = diagonal_algebra(3);
  double worst_slack = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (int t = 0; t < 50; ++t) {
    double composed, bound;
    if (t % 2 == 0) {
      // weighted-cb factor after a cb factor
      LinearMapRep phi = random_map(m2, m2, rng);
      LinearMapRep psi = random_map(m2, d3, rng);
      composed = lambda_cb_norm(compose(psi, phi), lambda, 2, cfg).lower;
      bound = lambda_cb_norm(psi, lambda, 2, cfg).upper *
              cb_norm(phi, 2, cfg).upper;
    } else {
      // cb factor after a weighted-cb factor
      LinearMapRep phi = random_map(m2, d3, rng);
      LinearMapRep psi = random_map(d3, m2, rng);
      composed = lambda_cb_norm(compose(psi, phi), lambda, 2, cfg).lower;
      bound = cb_norm(psi, 3, cfg).upper *
              lambda_cb_norm(phi, lambda, 2, cfg).upper;
    }
    worst_slack = std::min(worst_slack, bound - composed);
    ok = ok && composed <= bound + 1e-6;
  }
  detail = "50 pairs, min slack " + fmt(worst_slack);
  return ok;
}

// 6. Weighted profiles of functionals and of maps into a commutative range
// stay below range_bound times the plain norm upper.
bool commutative_range_bound(std::string& detail) {
  Rng rng(2209);
  EstimatorConfig cfg = make_cfg(2, 60);
  EstimatorConfig upper_cfg = make_cfg(0, 1);
  WeightSequence lambda = WeightSequence::transpose();
  SpacePtr m3 = matrix_algebra(3);
  double worst_slack = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (int t = 0; t < 100; ++t) {
    SpacePtr cod = t < 50 ? matrix_algebra(1) : diagonal_algebra(4);
    LinearMapRep phi = random_map(m3, cod, rng);
    double bound =
        lambda.range_bound() * induced_norm(phi, upper_cfg).upper;
    NormEstimate est = lambda_cb_norm(phi, lambda, 4, cfg);
    for (double v : est.level_profile) {
      worst_slack = std::min(worst_slack, bound - v);
      ok = ok && v <= bound + 1e-6;
    }
  }
  detail = "100 maps, 4 levels, min slack " + fmt(worst_slack);
  return ok;
}

// 7. Over commutative collections the class norm equals the plain norm.
bool commutative_collection_equality(std::string& detail) {
  Rng rng(2211);
  EstimatorConfig cfg = make_cfg(12, 400, 1e-12);
  LambdaCollection lambda({diagonal_algebra(1), diagonal_algebra(2),
                           diagonal_algebra(3), diagonal_algebra(4)},
                          "diagonals");
  double worst = 0.0;
  bool ok = true;
  for (int t = 0; t < 50; ++t) {
    SpacePtr e = random_subspace(3, 2 + t % 3, rng);
    SpacePtr f = random_subspace(3, 2 + (t / 3) % 3, rng);
    LinearMapRep phi = random_map(e, f, rng);
    NormEstimate cls = lambda_class_norm(phi, lambda, cfg);
    NormEstimate base = induced_norm(phi, cfg);
    worst = std::max(worst, std::abs(cls.lower - base.lower));
    ok = ok && std::abs(cls.lower - base.lower) <= 1e-6 &&
         base.lower <= cls.upper + 1e-6 && cls.lower <= base.upper + 1e-6;
  }
  detail = "50 maps, max |class - base| " + fmt(worst);
  return ok;
}

// 8. The bracket chain plain <= class <= cb holds on random maps.
bool sandwich_chain(std::string& detail) {
  Rng rng(2213);
  EstimatorConfig cfg = make_cfg(6, 150);
  LambdaCollection lambda({matrix_algebra(2), diagonal_algebra(4)}, "mixed");
  SpacePtr m2 = matrix_algebra(2);
  int bad = 0;
  for (int t = 0; t < 50; ++t) {
    LinearMapRep phi = random_map(m2, m2, rng);
    if (!sandwich_check(phi, lambda, 2, cfg).ok) ++bad;
  }
  detail = "50 maps, " + std::to_string(bad) + " chain failures";
  return bad == 0;
}

// 9. The transpose-derived functional array separates the class dual norm
// (value 2) from the cb dual norm (value 3).
bool dual_norm_gap(std::string& detail) {
  EstimatorConfig cfg = make_cfg(24, 500, 1e-12);
  std::vector<std::vector<LinearMapRep>> psi(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      psi[i].push_back(coordinate_functional(3, j, i));
  LambdaCollection lambda({matrix_algebra(2)}, "M2");
  NormEstimate dual = lambda_dual_matrix_norm(psi, lambda, cfg);
  NormEstimate cb_dual = matrix_of_maps_norm(psi, std::nullopt, 3, cfg);
  detail = "class dual " + fmt(dual.lower) + ", cb dual " + fmt(cb_dual.lower);
  return dual.lower >= 2.0 - 1e-3 && dual.lower <= 2.0 + 1e-3 &&
         cb_dual.lower >= 3.0 - 1e-3;
}

// 10. Matrix pairings against form arrays obey the certified product bound.
bool pairing_bound(std::string& detail) {
  Rng rng(2217);
  SpacePtr m2 = matrix_algebra(2);
  SpacePtr d3 = diagonal_algebra(3);
  double worst_slack = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (int t = 0; t < 100; ++t) {
    const SpacePtr& e = t % 2 == 0 ? m2 : d3;
    const SpacePtr& f = t % 3 == 0 ? d3 : m2;
    MatElement x = MatElement::random(e, 1 + t % 2, rng);
    MatElement y = MatElement::random(f, 1 + (t / 2) % 2, rng);
    TensorElement u = tensor_element(x, y);
    std::vector<std::vector<BilinearMapRep>> psi(2);
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q)
        psi[p].push_back(random_bilinear(e, f, matrix_algebra(1), rng));
    double bound = form_array_upper(psi) * x.min_norm() * y.min_norm();
    double val = spectral_norm(matrix_pairing(u, psi));
    worst_slack = std::min(worst_slack, bound - val);
    ok = ok && val <= bound + 1e-6;
  }
  detail = "100 instances, min slack " + fmt(worst_slack);
  return ok;
}

// 11. Tensor norm lower bounds are flip invariant for the symmetric weights.
bool flip_invariance(std::string& detail) {
  Rng rng(2219);
  SpacePtr m2 = matrix_algebra(2);
  SpacePtr tp = tensor_space(m2, m2);
  EstimatorConfig cfg = make_cfg(8, 150);
  double worst_rel = 0.0;
  bool ok = true;
  for (int t = 0; t < 20; ++t) {
    TensorElement u(m2, m2, MatElement::random(tp, 1, rng));
    for (const BilinearWeight& w :
         {BilinearWeight::kronecker(), BilinearWeight::schur()}) {
      double a = lambda_tensor_norm(u, w, 2, cfg).lower;
      double b = lambda_tensor_norm(flip(u), w, 2, cfg).lower;
      double rel = std::abs(a - b) / std::max({a, b, 1e-12});
      worst_rel = std::max(worst_rel, rel);
      ok = ok && rel <= 0.05;
    }
  }
  detail = "20 elements, max relative flip gap " + fmt(worst_rel);
  return ok;
}

// 12. Dual lower bounds stay below the matching decomposition uppers, and
// rank-one tensors are pinned to the product of factor norms.
bool duality_decomposition_consistency(std::string& detail) {
  Rng rng(2221);
  SpacePtr m2 = matrix_algebra(2);
  SpacePtr tp = tensor_space(m2, m2);
  EstimatorConfig cfg = make_cfg(6, 150);
  double worst_slack = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (int t = 0; t < 30; ++t) {
    TensorElement u(m2, m2, MatElement::random(tp, 1, rng));
    double uppers[3] = {haagerup_upper(u, 4, cfg).upper,
                        projective_upper(u, 4, cfg).upper,
                        schur_upper(u, 4, cfg).upper};
    const BilinearWeight weights[3] = {BilinearWeight::product(),
                                       BilinearWeight::kronecker(),
                                       BilinearWeight::schur()};
    for (int c = 0; c < 3; ++c) {
      double lower = lambda_tensor_norm(u, weights[c], 2, cfg).lower;
      worst_slack = std::min(worst_slack, uppers[c] - lower);
      ok = ok && lower <= uppers[c] + 1e-6;
    }
  }

  double worst_pin = 0.0;
  for (int t = 0; t < 5; ++t) {
    MatElement x = MatElement::random(m2, 1, rng);
    MatElement y = MatElement::random(m2, 1, rng);
    TensorElement u = tensor_element(x, y);
    double prod = x.min_norm() * y.min_norm();
    for (const BilinearWeight& w :
         {BilinearWeight::product(), BilinearWeight::kronecker(),
          BilinearWeight::schur()}) {
      NormEstimate est = lambda_tensor_norm(u, w, 2, cfg);
      worst_pin = std::max({worst_pin, prod - est.lower, est.upper - prod});
      ok = ok && est.lower >= prod - 1e-6 && est.upper <= prod + 1e-6;
    }
  }
  detail = "30 elements, min slack " + fmt(worst_slack) +
           "; rank-one pin gap " + fmt(worst_pin);
  return ok;
}

// 13. The Frobenius-at-every-level oracle is caught with the known excess.
bool falsification_power(std::string& detail) {
  Rng rng(2223);
  MatrixNormOracle oracle = frobenius_oracle(matrix_algebra(2));
  RuanReport rep = check_r1(oracle, 1000, 2, rng);
  double reeval = rep.violations.empty()
                      ? 0.0
                      : reevaluate_r1(oracle, rep.violations.front());
  detail = std::to_string(rep.violations.size()) + " certificates, excess " +
           fmt(rep.worst_excess);
  return !rep.violations.empty() && reeval > 5e-9 &&
         rep.worst_excess >= std::sqrt(2.0) - 1.0 - 1e-9;
}

struct Criterion {
  const char* name;
  bool (*run)(std::string&);
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"matrix-cross exactness", matrix_cross_exactness},
      {"Ruan axioms for min", ruan_axioms_for_min},
      {"transpose cb growth", transpose_cb_growth},
      {"transpose-weight separation", transpose_weight_separation},
      {"composition submultiplicativity", composition_submultiplicativity},
      {"commutative range bound", commutative_range_bound},
      {"commutative collection equality", commutative_collection_equality},
      {"sandwich chain", sandwich_chain},
      {"dual norm gap", dual_norm_gap},
      {"pairing bound", pairing_bound},
      {"flip invariance", flip_invariance},
      {"duality-decomposition consistency", duality_decomposition_consistency},
      {"falsification power", falsification_power},
  };

  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    std::string detail;
    bool ok = false;
    auto start = std::chrono::steady_clock::now();
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    std::printf("%s %2d %s (%s; %.1fs)\n", ok ? "pass" : "FAIL", index,
                c.name, detail.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
