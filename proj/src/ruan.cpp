#include "opnorm/ruan.hpp"

#include <cmath>

namespace opnorm {

namespace {

Matrix realize_slices(const SpacePtr& space, const std::vector<Matrix>& s) {
  Matrix out = Matrix::Zero(s[0].rows() * space->ambient_dim(),
                            s[0].cols() * space->ambient_dim());
  for (size_t r = 0; r < s.size(); ++r)
    out += kron(s[r], space->basis_matrix(static_cast<int>(r)));
  return out;
}

constexpr double kExcessTol = 1e-8;

}  // namespace

MatrixNormOracle min_norm_oracle(const SpacePtr& space) {
  return {"min:" + space->label(), space->dim(),
          [space](int, const std::vector<Matrix>& s) {
            return spectral_norm(realize_slices(space, s));
          }};
}

MatrixNormOracle frobenius_oracle(const SpacePtr& space) {
  return {"frobenius:" + space->label(), space->dim(),
          [space](int, const std::vector<Matrix>& s) {
            return realize_slices(space, s).norm();
          }};
}

MatrixNormOracle entrywise_l1_oracle(const SpacePtr& space) {
  return {"l1:" + space->label(), space->dim(),
          [space](int, const std::vector<Matrix>& s) {
            return realize_slices(space, s).cwiseAbs().sum();
          }};
}

NormedSpaceOracle lp_space_oracle(int dim, double p, int phases) {
  NormedSpaceOracle x;
  x.dim = dim;
  const bool is_l1 = p == 1.0;
  x.label = is_l1 ? "l1" : "linf";
  x.norm = [dim, is_l1](const Vector& v) {
    return is_l1 ? v.cwiseAbs().sum() : v.cwiseAbs().maxCoeff();
  };
  auto phase = [phases](int t) {
    double a = 2.0 * M_PI * t / phases;
    return Complex(std::cos(a), std::sin(a));
  };
  if (is_l1) {
    // Dual is l-infinity: extreme points have every coordinate on the circle.
    std::vector<Vector> pts(1, Vector::Zero(dim));
    for (int c = 0; c < dim; ++c) {
      std::vector<Vector> next;
      for (const Vector& base : pts)
        for (int t = 0; t < phases; ++t) {
          Vector v = base;
          v(c) = phase(t);
          next.push_back(v);
        }
      pts = std::move(next);
    }
    x.dual_points = std::move(pts);
  } else {
    // Dual is l1: extreme points are single-coordinate phases.
    for (int c = 0; c < dim; ++c)
      for (int t = 0; t < phases; ++t) {
        Vector v = Vector::Zero(dim);
        v(c) = phase(t);
        x.dual_points.push_back(v);
      }
  }
  return x;
}

NormEstimate min_quantize_norm(const NormedSpaceOracle& x,
                               const std::vector<Matrix>& slices) {
  if (static_cast<int>(slices.size()) != x.dim)
    throw std::invalid_argument("min_quantize_norm: slice count mismatch");
  NormEstimate est;
  for (const Vector& f : x.dual_points) {
    Matrix acc = Matrix::Zero(slices[0].rows(), slices[0].cols());
    for (int r = 0; r < x.dim; ++r) acc += f(r) * slices[r];
    double v = spectral_norm(acc);
    if (v > est.lower) {
      est.lower = v;
      est.witnesses = {f};
    }
  }
  double upper = 0.0;
  for (int r = 0; r < x.dim; ++r) {
    Vector basis = Vector::Zero(x.dim);
    basis(r) = 1.0;
    upper += x.norm(basis) * spectral_norm(slices[r]);
  }
  est.upper = std::max(upper, est.lower);
  est.converged = true;
  return est;
}

MatrixNormOracle min_quantized_oracle(const NormedSpaceOracle& x) {
  return {"min-quantized:" + x.label, x.dim,
          [x](int, const std::vector<Matrix>& s) {
            return min_quantize_norm(x, s).lower;
          }};
}

namespace {

std::vector<Matrix> random_slices(int m, int n, Rng& rng) {
  std::vector<Matrix> s;
  for (int r = 0; r < m; ++r) s.push_back(random_matrix(n, n, rng));
  return s;
}

void scale_slices(std::vector<Matrix>& s, double factor) {
  for (Matrix& m : s) m *= factor;
}

std::vector<Matrix> direct_sum_slices(const std::vector<Matrix>& a,
                                      const std::vector<Matrix>& b) {
  std::vector<Matrix> out;
  for (size_t r = 0; r < a.size(); ++r) {
    Matrix m = Matrix::Zero(a[r].rows() + b[r].rows(),
                            a[r].cols() + b[r].cols());
    m.topLeftCorner(a[r].rows(), a[r].cols()) = a[r];
    m.bottomRightCorner(b[r].rows(), b[r].cols()) = b[r];
    out.push_back(m);
  }
  return out;
}

std::vector<Matrix> compress_slices(const Matrix& alpha,
                                    const std::vector<Matrix>& s,
                                    const Matrix& beta) {
  std::vector<Matrix> out;
  for (const Matrix& m : s) out.push_back(alpha * m * beta);
  return out;
}

}  // namespace

double reevaluate_r1(const MatrixNormOracle& oracle,
                     const RuanCertificate& c) {
  double n1 = oracle.eval(c.level1, c.e1);
  double n2 = oracle.eval(c.level2, c.e2);
  return oracle.eval(c.level1 + c.level2, direct_sum_slices(c.e1, c.e2)) -
         std::max(n1, n2);
}

double reevaluate_r2(const MatrixNormOracle& oracle,
                     const RuanCertificate& c) {
  double ne = oracle.eval(c.level1, c.e1);
  return oracle.eval(static_cast<int>(c.alpha.rows()),
                     compress_slices(c.alpha, c.e1, c.beta)) -
         spectral_norm(c.alpha) * ne * spectral_norm(c.beta);
}

RuanReport check_r1(const MatrixNormOracle& oracle, int budget, int max_level,
                    Rng& rng) {
  if (budget < 1) throw std::invalid_argument("check_r1: budget >= 1");
  RuanReport rep;
  RuanCertificate worst;
  bool have_worst = false;

  auto consider = [&](RuanCertificate c) {
    c.lhs = oracle.eval(c.level1 + c.level2,
                        direct_sum_slices(c.e1, c.e2));
    c.bound = std::max(oracle.eval(c.level1, c.e1),
                       oracle.eval(c.level2, c.e2));
    c.excess = c.lhs - c.bound;
    if (c.excess > rep.worst_excess || !have_worst) {
      rep.worst_excess = std::max(rep.worst_excess, c.excess);
      worst = c;
      have_worst = true;
    }
    if (c.excess > kExcessTol) rep.violations.push_back(c);
  };

  for (int t = 0; t < budget; ++t) {
    RuanCertificate c;
    c.level1 = 1 + static_cast<int>(rng() % max_level);
    c.level2 = 1 + static_cast<int>(rng() % max_level);
    c.e1 = random_slices(oracle.dim, c.level1, rng);
    c.e2 = random_slices(oracle.dim, c.level2, rng);
    double n1 = oracle.eval(c.level1, c.e1);
    double n2 = oracle.eval(c.level2, c.e2);
    if (n1 < 1e-12 || n2 < 1e-12) continue;
    scale_slices(c.e1, 1.0 / n1);
    scale_slices(c.e2, 1.0 / n2);
    consider(c);
    rep.samples++;
  }

  // Hill climb from the worst sample.
  if (have_worst) {
    RuanCertificate cur = worst;
    for (int it = 0; it < 100; ++it) {
      RuanCertificate cand = cur;
      for (Matrix& m : cand.e1)
        m += 0.05 * random_matrix(m.rows(), m.cols(), rng);
      for (Matrix& m : cand.e2)
        m += 0.05 * random_matrix(m.rows(), m.cols(), rng);
      double n1 = oracle.eval(cand.level1, cand.e1);
      double n2 = oracle.eval(cand.level2, cand.e2);
      if (n1 < 1e-12 || n2 < 1e-12) continue;
      scale_slices(cand.e1, 1.0 / n1);
      scale_slices(cand.e2, 1.0 / n2);
      double before = rep.worst_excess;
      consider(cand);
      if (rep.worst_excess > before) cur = cand;
    }
  }
  return rep;
}

RuanReport check_r2(const MatrixNormOracle& oracle, int budget, int max_level,
                    Rng& rng) {
  if (budget < 1) throw std::invalid_argument("check_r2: budget >= 1");
  RuanReport rep;
  RuanCertificate worst;
  bool have_worst = false;

  auto consider = [&](RuanCertificate c) {
    c.lhs = oracle.eval(static_cast<int>(c.alpha.rows()),
                        compress_slices(c.alpha, c.e1, c.beta));
    c.bound = spectral_norm(c.alpha) * oracle.eval(c.level1, c.e1) *
              spectral_norm(c.beta);
    c.excess = c.lhs - c.bound;
    if (c.excess > rep.worst_excess || !have_worst) {
      rep.worst_excess = std::max(rep.worst_excess, c.excess);
      worst = c;
      have_worst = true;
    }
    if (c.excess > kExcessTol) rep.violations.push_back(c);
  };

  for (int t = 0; t < budget; ++t) {
    RuanCertificate c;
    c.level1 = 1 + static_cast<int>(rng() % max_level);
    int m = 1 + static_cast<int>(rng() % max_level);
    c.e1 = random_slices(oracle.dim, c.level1, rng);
    double ne = oracle.eval(c.level1, c.e1);
    if (ne < 1e-12) continue;
    scale_slices(c.e1, 1.0 / ne);
    c.alpha = random_matrix(m, c.level1, rng);
    c.beta = random_matrix(c.level1, m, rng);
    double na = spectral_norm(c.alpha), nb = spectral_norm(c.beta);
    if (na < 1e-12 || nb < 1e-12) continue;
    c.alpha /= na;
    c.beta /= nb;
    consider(c);
    rep.samples++;
  }

  if (have_worst) {
    RuanCertificate cur = worst;
    for (int it = 0; it < 100; ++it) {
      RuanCertificate cand = cur;
      for (Matrix& m : cand.e1)
        m += 0.05 * random_matrix(m.rows(), m.cols(), rng);
      cand.alpha += 0.05 * random_matrix(cand.alpha.rows(),
                                         cand.alpha.cols(), rng);
      cand.beta += 0.05 * random_matrix(cand.beta.rows(), cand.beta.cols(),
                                        rng);
      double ne = oracle.eval(cand.level1, cand.e1);
      double na = spectral_norm(cand.alpha), nb = spectral_norm(cand.beta);
      if (ne < 1e-12 || na < 1e-12 || nb < 1e-12) continue;
      scale_slices(cand.e1, 1.0 / ne);
      cand.alpha /= na;
      cand.beta /= nb;
      double before = rep.worst_excess;
      consider(cand);
      if (rep.worst_excess > before) cur = cand;
    }
  }
  return rep;
}

}  // namespace opnorm
