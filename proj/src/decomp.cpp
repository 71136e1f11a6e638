#include "opnorm/decomp.hpp"

#include <limits>

namespace opnorm {

namespace {

constexpr double kResidualTol = 1e-8;
constexpr int kAlsRounds = 200;
constexpr int kAlsRestarts = 8;

Matrix combine(DecompMode mode, const Matrix& a, const Matrix& b) {
  switch (mode) {
    case DecompMode::otimes:
      return kron(a, b);
    case DecompMode::odot:
      return a * b;
    case DecompMode::bullet:
      return a.cwiseProduct(b);
  }
  throw std::logic_error("bad mode");
}

// Coefficient target, row (i*n + j), column (r*mF + s).
Matrix target_of(const TensorElement& u) {
  int n = u.level(), mE = u.e_space->dim(), mF = u.f_space->dim();
  Matrix t(n * n, mE * mF);
  for (int r = 0; r < mE; ++r)
    for (int s = 0; s < mF; ++s) {
      const Matrix& slice = u.u.slice(r * mF + s);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t(i * n + j, r * mF + s) = slice(i, j);
    }
  return t;
}

Matrix predict(const Decomposition& d, int mE, int mF, int n) {
  Matrix t(n * n, mE * mF);
  for (int r = 0; r < mE; ++r)
    for (int s = 0; s < mF; ++s) {
      Matrix p = d.alpha * combine(d.mode, d.e.slices[r], d.f.slices[s]) *
                 d.beta;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t(i * n + j, r * mF + s) = p(i, j);
    }
  return t;
}

double residual_of(const Decomposition& d, const Matrix& target, int mE,
                   int mF, int n) {
  return (predict(d, mE, mF, n) - target).norm() /
         std::max(1.0, target.norm());
}

enum class Block { e, f, alpha, beta };

// Least-squares update of one block, everything else held fixed. Assembly is
// linear in each block, so columns come from unit perturbations.
void solve_block(Decomposition& d, Block which, const Matrix& target, int mE,
                 int mF, int n) {
  auto slice_count = [&](Block b) {
    switch (b) {
      case Block::e:
        return static_cast<int>(d.e.slices.size());
      case Block::f:
        return static_cast<int>(d.f.slices.size());
      default:
        return 1;
    }
  };
  auto block_rows = [&](Block b) -> Matrix& {
    return b == Block::alpha ? d.alpha : d.beta;
  };

  int slices = slice_count(which);
  Eigen::Index per_slice;
  if (which == Block::e)
    per_slice = d.e.slices[0].size();
  else if (which == Block::f)
    per_slice = d.f.slices[0].size();
  else
    per_slice = block_rows(which).size();
  Eigen::Index unknowns = slices * per_slice;

  Matrix a(target.size(), unknowns);
  Decomposition probe = d;
  auto set_flat = [&](Decomposition& dst, Eigen::Index flat, Complex v,
                      bool clear) {
    auto fill = [&](std::vector<Matrix>& sl) {
      if (clear)
        for (Matrix& m : sl) m.setZero();
      sl[flat / per_slice](Eigen::Index(flat % per_slice) %
                               sl[0].rows(),
                           Eigen::Index(flat % per_slice) / sl[0].rows()) = v;
    };
    switch (which) {
      case Block::e:
        fill(dst.e.slices);
        break;
      case Block::f:
        fill(dst.f.slices);
        break;
      case Block::alpha:
        if (clear) dst.alpha.setZero();
        dst.alpha(flat % dst.alpha.rows(), flat / dst.alpha.rows()) = v;
        break;
      case Block::beta:
        if (clear) dst.beta.setZero();
        dst.beta(flat % dst.beta.rows(), flat / dst.beta.rows()) = v;
        break;
    }
  };

  for (Eigen::Index c = 0; c < unknowns; ++c) {
    set_flat(probe, c, 1.0, true);
    a.col(c) = vec(predict(probe, mE, mF, n));
    set_flat(probe, c, 0.0, true);
  }
  Vector rhs = vec(target);
  Vector x = Eigen::CompleteOrthogonalDecomposition<Matrix>(a).solve(rhs);
  for (Eigen::Index c = 0; c < unknowns; ++c) set_flat(d, c, x(c), false);
}

void balance(Decomposition& d) {
  double na = spectral_norm(d.alpha), nb = spectral_norm(d.beta);
  if (na > 1e-14 && nb > 1e-14) {
    double t = std::sqrt(nb / na);
    d.alpha *= t;
    d.beta /= t;
  }
  double ne = d.e.norm(), nf = d.f.norm();
  if (ne > 1e-14 && nf > 1e-14) {
    double t = std::sqrt(nf / ne);
    for (Matrix& m : d.e.slices) m *= t;
    for (Matrix& m : d.f.slices) m /= t;
  }
}

Decomposition shape_of(const TensorElement& u, DecompMode mode, int cap) {
  int n = u.level();
  Decomposition d;
  d.mode = mode;
  d.e.space = u.e_space;
  d.f.space = u.f_space;
  switch (mode) {
    case DecompMode::odot:
      d.e.rows = n, d.e.cols = cap;
      d.f.rows = cap, d.f.cols = n;
      d.alpha = Matrix::Identity(n, n);
      d.beta = Matrix::Identity(n, n);
      break;
    case DecompMode::otimes:
      d.e.rows = d.e.cols = cap;
      d.f.rows = d.f.cols = cap;
      d.alpha = Matrix::Zero(n, cap * cap);
      d.beta = Matrix::Zero(cap * cap, n);
      break;
    case DecompMode::bullet:
      d.e.rows = d.e.cols = cap;
      d.f.rows = d.f.cols = cap;
      d.alpha = Matrix::Zero(n, cap);
      d.beta = Matrix::Zero(cap, n);
      break;
  }
  d.e.slices.assign(u.e_space->dim(), Matrix::Zero(d.e.rows, d.e.cols));
  d.f.slices.assign(u.f_space->dim(), Matrix::Zero(d.f.rows, d.f.cols));
  return d;
}

// Exact (up to cap truncation) starting point from a singular value
// decomposition of the coefficient data.
Decomposition structured_init(const TensorElement& u, DecompMode mode,
                              int cap) {
  int n = u.level(), mE = u.e_space->dim(), mF = u.f_space->dim();
  Decomposition d = shape_of(u, mode, cap);

  if (mode == DecompMode::odot) {
    // Rows (i, r), columns (j, s): any factorization X = E'F' is a
    // decomposition with scalar parts the identity.
    Matrix x(n * mE, n * mF);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int r = 0; r < mE; ++r)
          for (int s = 0; s < mF; ++s)
            x(i * mE + r, j * mF + s) = u.u.slice(r * mF + s)(i, j);
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    int k = std::min<int>(cap, svd.nonzeroSingularValues());
    for (int q = 0; q < k; ++q) {
      double root = std::sqrt(svd.singularValues()(q));
      for (int r = 0; r < mE; ++r)
        for (int i = 0; i < n; ++i)
          d.e.slices[r](i, q) = root * svd.matrixU()(i * mE + r, q);
      for (int s = 0; s < mF; ++s)
        for (int j = 0; j < n; ++j)
          d.f.slices[s](q, j) =
              root * std::conj(svd.matrixV()(j * mF + s, q));
    }
    return d;
  }

  if (n != 1) return d;  // refined from random starts instead

  // Level one: diagonal placement of the terms of C = sum sigma g h^H.
  Matrix c(mE, mF);
  for (int r = 0; r < mE; ++r)
    for (int s = 0; s < mF; ++s) c(r, s) = u.u.slice(r * mF + s)(0, 0);
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  int k = std::min<int>(cap, svd.nonzeroSingularValues());
  for (int q = 0; q < k; ++q) {
    double root = std::sqrt(svd.singularValues()(q));
    for (int r = 0; r < mE; ++r)
      d.e.slices[r](q, q) = svd.matrixU()(r, q);
    for (int s = 0; s < mF; ++s)
      d.f.slices[s](q, q) = std::conj(svd.matrixV()(s, q));
    if (mode == DecompMode::otimes) {
      d.alpha(0, q * cap + q) = root;
      d.beta(q * cap + q, 0) = root;
    } else {
      d.alpha(0, q) = root;
      d.beta(q, 0) = root;
    }
  }
  return d;
}

Decomposition random_init(const TensorElement& u, DecompMode mode, int cap,
                          Rng& rng) {
  Decomposition d = shape_of(u, mode, cap);
  for (Matrix& m : d.e.slices) m = random_matrix(d.e.rows, d.e.cols, rng);
  for (Matrix& m : d.f.slices) m = random_matrix(d.f.rows, d.f.cols, rng);
  d.alpha = random_matrix(d.alpha.rows(), d.alpha.cols(), rng);
  d.beta = random_matrix(d.beta.rows(), d.beta.cols(), rng);
  return d;
}

// Embed a smaller decomposition of the same mode into the current shape.
Decomposition pad_warm(const Decomposition& warm, const TensorElement& u,
                       DecompMode mode, int cap) {
  Decomposition d = shape_of(u, mode, cap);
  if (warm.mode != mode || warm.e.rows == 0 || warm.f.rows == 0 ||
      warm.e.rows > d.e.rows || warm.e.cols > d.e.cols ||
      warm.f.rows > d.f.rows || warm.f.cols > d.f.cols ||
      warm.e.slices.size() != d.e.slices.size() ||
      warm.f.slices.size() != d.f.slices.size())
    return d;
  for (size_t r = 0; r < d.e.slices.size(); ++r)
    d.e.slices[r].topLeftCorner(warm.e.rows, warm.e.cols) = warm.e.slices[r];
  for (size_t s = 0; s < d.f.slices.size(); ++s)
    d.f.slices[s].topLeftCorner(warm.f.rows, warm.f.cols) = warm.f.slices[s];
  if (mode == DecompMode::otimes) {
    // The inner pair index (a, c) re-flattens when the block size grows.
    int q_old = warm.f.rows, q_new = d.f.rows;
    d.alpha.setZero();
    d.beta.setZero();
    for (int a = 0; a < warm.e.rows; ++a)
      for (int c = 0; c < q_old; ++c) {
        d.alpha.col(a * q_new + c) = warm.alpha.col(a * q_old + c);
        d.beta.row(a * q_new + c) = warm.beta.row(a * q_old + c);
      }
  } else if (mode == DecompMode::bullet) {
    d.alpha.setZero();
    d.beta.setZero();
    d.alpha.leftCols(warm.alpha.cols()) = warm.alpha;
    d.beta.topRows(warm.beta.rows()) = warm.beta;
  } else {
    d.alpha = warm.alpha;
    d.beta = warm.beta;
  }
  return d;
}

NormEstimate decomposition_upper(const TensorElement& u, DecompMode mode,
                                 int cap, const EstimatorConfig& cfg,
                                 Decomposition* out,
                                 const Decomposition* warm) {
  if (cap < 1) throw std::invalid_argument("cap must be positive");
  int n = u.level(), mE = u.e_space->dim(), mF = u.f_space->dim();
  Matrix target = target_of(u);

  NormEstimate est;
  est.lower = u.min_norm();
  est.upper = std::numeric_limits<double>::infinity();
  est.converged = false;

  std::vector<Decomposition> starts;
  starts.push_back(structured_init(u, mode, cap));
  if (warm) starts.push_back(pad_warm(*warm, u, mode, cap));
  for (int t = 0; t < kAlsRestarts; ++t) {
    Rng rng(cfg.seed + 1000 + t);
    starts.push_back(random_init(u, mode, cap, rng));
  }

  Decomposition best;
  for (Decomposition d : starts) {
    double res = residual_of(d, target, mE, mF, n);
    double best_here = res <= kResidualTol
                           ? d.cost()
                           : std::numeric_limits<double>::infinity();
    Decomposition best_d = d;
    for (int round = 0; round < kAlsRounds; ++round) {
      solve_block(d, Block::e, target, mE, mF, n);
      solve_block(d, Block::f, target, mE, mF, n);
      solve_block(d, Block::alpha, target, mE, mF, n);
      solve_block(d, Block::beta, target, mE, mF, n);
      double next = residual_of(d, target, mE, mF, n);
      est.iterations++;
      if (next <= kResidualTol && d.cost() < best_here) {
        best_here = d.cost();
        best_d = d;
      }
      if (std::abs(res - next) < 1e-13) break;
      res = next;
    }
    best_d.residual = residual_of(best_d, target, mE, mF, n);
    if (best_here < est.upper) {
      est.upper = best_here;
      best = best_d;
      est.converged = true;
    }
  }

  if (est.converged) {
    balance(best);
    best.residual = residual_of(best, target, mE, mF, n);
    est.upper = std::max(best.cost(), est.lower);
  }
  if (out) *out = best;
  return est;
}

}  // namespace

Matrix RectElement::realize() const {
  int d = space->ambient_dim();
  Matrix m = Matrix::Zero(rows * d, cols * d);
  for (size_t r = 0; r < slices.size(); ++r)
    m += kron(slices[r], space->basis_matrix(static_cast<int>(r)));
  return m;
}

TensorElement tensor_element(const MatElement& x, const MatElement& y) {
  return TensorElement(x.space(), y.space(), min_tensor(x, y));
}

TensorElement zero_tensor(const SpacePtr& e, const SpacePtr& f, int level) {
  return TensorElement(e, f, MatElement::zero(tensor_space(e, f), level));
}

NormEstimate haagerup_upper(const TensorElement& u, int rank_cap,
                            const EstimatorConfig& cfg, Decomposition* out,
                            const Decomposition* warm) {
  return decomposition_upper(u, DecompMode::odot, rank_cap, cfg, out, warm);
}

NormEstimate projective_upper(const TensorElement& u, int size_cap,
                              const EstimatorConfig& cfg, Decomposition* out,
                              const Decomposition* warm) {
  return decomposition_upper(u, DecompMode::otimes, size_cap, cfg, out, warm);
}

NormEstimate schur_upper(const TensorElement& u, int size_cap,
                         const EstimatorConfig& cfg, Decomposition* out,
                         const Decomposition* warm) {
  return decomposition_upper(u, DecompMode::bullet, size_cap, cfg, out, warm);
}

}  // namespace opnorm
