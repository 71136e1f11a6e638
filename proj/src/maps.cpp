#include "opnorm/maps.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace opnorm {

MatElement LinearMapRep::apply(const MatElement& x) const {
  if (!same_space(*x.space(), *domain))
    throw std::invalid_argument("LinearMapRep::apply: domain mismatch");
  const int n = x.level();
  const int mf = codomain->dim();
  std::vector<Matrix> slices(mf, Matrix::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vector in(domain->dim());
      for (int r = 0; r < domain->dim(); ++r) in(r) = x.coeff(i, j, r);
      Vector out = apply_coords(in);
      for (int s = 0; s < mf; ++s) slices[s](i, j) = out(s);
    }
  return MatElement(codomain, n, std::move(slices));
}

LinearMapRep identity_map(const SpacePtr& space) {
  return {space, space, Matrix::Identity(space->dim(), space->dim()), false};
}

LinearMapRep zero_map(const SpacePtr& domain, const SpacePtr& codomain) {
  return {domain, codomain, Matrix::Zero(codomain->dim(), domain->dim()),
          false};
}

LinearMapRep scale_map(const SpacePtr& space, Complex factor) {
  return {space, space,
          factor * Matrix::Identity(space->dim(), space->dim()), false};
}

LinearMapRep transpose_map(int n) {
  SpacePtr mn = matrix_algebra(n);
  Matrix coeff = Matrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) coeff(j * n + i, i * n + j) = 1.0;
  return {mn, mn, std::move(coeff), false};
}

LinearMapRep adjoint_map(int n) {
  LinearMapRep t = transpose_map(n);
  t.conj_linear = true;
  return t;
}

LinearMapRep trace_functional(int n) {
  Matrix coeff = Matrix::Zero(1, n * n);
  for (int i = 0; i < n; ++i) coeff(0, i * n + i) = 1.0;
  return {matrix_algebra(n), matrix_algebra(1), std::move(coeff), false};
}

LinearMapRep coordinate_functional(int n, int i, int j) {
  Matrix coeff = Matrix::Zero(1, n * n);
  coeff(0, i * n + j) = 1.0;
  return {matrix_algebra(n), matrix_algebra(1), std::move(coeff), false};
}

LinearMapRep random_map(const SpacePtr& domain, const SpacePtr& codomain,
                        Rng& rng) {
  return {domain, codomain, random_matrix(codomain->dim(), domain->dim(), rng),
          false};
}

LinearMapRep compose(const LinearMapRep& psi, const LinearMapRep& phi) {
  if (!same_space(*phi.codomain, *psi.domain))
    throw std::invalid_argument("compose: space mismatch");
  Matrix inner = psi.conj_linear ? phi.coeff.conjugate() : phi.coeff;
  return {phi.domain, psi.codomain, psi.coeff * inner,
          psi.conj_linear != phi.conj_linear};
}

LinearMapRep amplify(const LinearMapRep& phi, int n) {
  if (n < 1) throw std::invalid_argument("amplify: n must be >= 1");
  const int me = phi.domain->dim();
  const int mf = phi.codomain->dim();
  Matrix coeff = Matrix::Zero(n * n * mf, n * n * me);
  for (int ij = 0; ij < n * n; ++ij)
    coeff.block(ij * mf, ij * me, mf, me) = phi.coeff;
  return {level_space(phi.domain, n), level_space(phi.codomain, n),
          std::move(coeff), phi.conj_linear};
}

WeightSequence WeightSequence::identity() {
  WeightSequence w;
  w.kind_ = WeightKind::identity;
  w.n_max_ = std::numeric_limits<int>::max();
  w.range_bound_ = 1.0;
  return w;
}

WeightSequence WeightSequence::transpose() {
  WeightSequence w;
  w.kind_ = WeightKind::transpose;
  w.n_max_ = std::numeric_limits<int>::max();
  w.range_bound_ = 1.0;  // transpose is a level-1 isometry on each M_n
  return w;
}

WeightSequence WeightSequence::unitary_conjugation(
    std::vector<Matrix> unitaries) {
  WeightSequence w;
  w.kind_ = WeightKind::unitary_conjugation;
  w.n_max_ = static_cast<int>(unitaries.size());
  for (int n = 1; n <= w.n_max_; ++n) {
    const Matrix& u = unitaries[n - 1];
    if (u.rows() != n || u.cols() != n)
      throw std::invalid_argument("WeightSequence: unitary size mismatch");
    if ((u.adjoint() * u - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() >
        1e-12)
      throw std::invalid_argument("WeightSequence: matrix not unitary");
  }
  w.unitaries_ = std::move(unitaries);
  w.range_bound_ = 1.0;
  return w;
}

WeightSequence WeightSequence::custom(std::vector<Matrix> tables) {
  WeightSequence w;
  w.kind_ = WeightKind::custom;
  w.n_max_ = static_cast<int>(tables.size());
  double bound = 0.0;
  for (int n = 1; n <= w.n_max_; ++n) {
    const Matrix& t = tables[n - 1];
    if (t.rows() != n * n || t.cols() != n * n)
      throw std::invalid_argument("WeightSequence: table size mismatch");
    if (t.cwiseAbs().maxCoeff() == 0.0)
      throw std::invalid_argument("WeightSequence: zero weight entry");
    // ||lambda_n(A)|| <= ||lambda_n(A)||_F <= sigma_max(T) sqrt(n) ||A||.
    bound = std::max(bound, spectral_norm(t) * std::sqrt(double(n)));
  }
  w.tables_ = std::move(tables);
  w.range_bound_ = bound;
  return w;
}

Matrix WeightSequence::apply(int n, const Matrix& a) const {
  if (a.rows() != n || a.cols() != n)
    throw std::invalid_argument("WeightSequence::apply: shape mismatch");
  switch (kind_) {
    case WeightKind::identity:
      return a;
    case WeightKind::transpose:
      return a.transpose();
    case WeightKind::unitary_conjugation: {
      if (n > n_max_)
        throw std::out_of_range("WeightSequence: level beyond N_max");
      const Matrix& u = unitaries_[n - 1];
      return u.adjoint() * a * u;
    }
    case WeightKind::custom: {
      if (n > n_max_)
        throw std::out_of_range("WeightSequence: level beyond N_max");
      return unvec(tables_[n - 1] * vec(a), n, n);
    }
  }
  throw std::logic_error("WeightSequence: bad kind");
}

LinearMapRep weighted_amplify(const LinearMapRep& phi,
                              const WeightSequence& lambda, int n) {
  if (n > lambda.n_max())
    throw std::out_of_range("weighted_amplify: level beyond N_max");
  const int me = phi.domain->dim();
  const int mf = phi.codomain->dim();
  Matrix coeff = Matrix::Zero(n * n * mf, n * n * me);
  Matrix eps = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      eps(i, j) = 1.0;
      Matrix l = lambda.apply(n, eps);
      eps(i, j) = 0.0;
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          if (l(k, m) == Complex(0.0)) continue;
          coeff.block((k * n + m) * mf, (i * n + j) * me, mf, me) +=
              l(k, m) * phi.coeff;
        }
    }
  return {level_space(phi.domain, n), level_space(phi.codomain, n),
          std::move(coeff), phi.conj_linear};
}

namespace {

// Ascent workspace for one induced-norm problem. The domain is used at
// level 1, i.e. elements are coordinate vectors over phi.domain.
struct AscentProblem {
  const LinearMapRep& phi;
  Matrix k_map;  // d_F^2 x N, vec(realize(phi(e_r))) columns
  int d_dom, d_cod, n_coords;

  explicit AscentProblem(const LinearMapRep& p) : phi(p) {
    d_dom = p.domain->ambient_dim();
    d_cod = p.codomain->ambient_dim();
    n_coords = p.domain->dim();
    k_map = p.codomain->vectorized_basis() * p.coeff;
  }

  Matrix image(const Vector& t) const {
    Vector y = phi.conj_linear ? Vector(t.conjugate()) : t;
    return unvec(k_map * y, d_cod, d_cod);
  }
  double domain_norm(const Vector& t) const {
    return spectral_norm(phi.domain->realize_coords(t));
  }
  double value(const Vector& t) const { return spectral_norm(image(t)); }
};

double frobenius_upper(const AscentProblem& pr) {
  Eigen::JacobiSVD<Matrix> svd(pr.phi.domain->vectorized_basis(),
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd inv = svd.singularValues().cwiseInverse();
  Matrix t = pr.k_map * svd.matrixV() *
             inv.asDiagonal().toDenseMatrix().cast<Complex>();
  return spectral_norm(t) * std::sqrt(double(pr.d_dom));
}

struct AscentResult {
  double value = 0.0;
  Vector witness;
  int iterations = 0;
  bool converged = false;
};

// Frobenius projection onto {X in span : ||X|| <= 1} by Dykstra's
// alternating projections (span projection and singular value clamp),
// returned in coordinates.
Vector project_ball(const ConcreteSpace& dom, const Vector& t0,
                    int sweeps = 15) {
  Matrix x = dom.realize_coords(t0);
  Matrix p = Matrix::Zero(x.rows(), x.cols());
  Matrix q = p;
  for (int k = 0; k < sweeps; ++k) {
    Matrix xp = x + p;
    Eigen::JacobiSVD<Matrix> svd(xp, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd s = svd.singularValues().cwiseMin(1.0);
    Matrix y = svd.matrixU() * s.asDiagonal().toDenseMatrix().cast<Complex>() *
               svd.matrixV().adjoint();
    p = xp - y;
    Matrix yq = y + q;
    Matrix z = dom.realize_coords(dom.coords_of(yq));
    q = yq - z;
    x = z;
  }
  return dom.coords_of(x);
}

// Maximize the linear functional Re(g^H t) over the domain unit ball. The
// ball is convex, so projected ascent has no spurious local maxima; this is
// the exact subproblem obtained by freezing the top singular pair of the
// image.
Vector linear_subproblem(const AscentProblem& pr, const Vector& t0,
                         const Vector& g) {
  double gn = g.norm();
  if (gn <= 0.0) return t0;
  const ConcreteSpace& dom = *pr.phi.domain;
  auto score = [&](const Vector& t) { return (g.adjoint() * t)(0).real(); };
  Vector best = t0;
  double best_f = score(t0);
  for (double tau : {2.0 / gn, 0.5 / gn}) {
    Vector cur = t0;
    for (int k = 0; k < 10; ++k) {
      cur = project_ball(dom, cur + tau * g);
      double f = score(cur);
      if (f > best_f) {
        best_f = f;
        best = cur;
      }
    }
  }
  return best;
}

AscentResult ascend(const AscentProblem& pr, Vector t,
                    const EstimatorConfig& cfg) {
  AscentResult res;
  double dn = pr.domain_norm(t);
  if (dn <= 0.0) return res;
  t /= dn;
  double best = pr.value(t);
  int stall = 0;
  int lin_budget = 6;
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    SingularTriple top = top_singular(pr.image(t));
    Vector w = pr.k_map.adjoint() * vec(top.u * top.v.adjoint());
    Vector g = pr.phi.conj_linear ? Vector(w.conjugate()) : w;

    double accepted = best;
    Vector t_next = t;

    // Backtracking line search along the gradient.
    double step = 1.0;
    for (int h = 0; h < 30; ++h) {
      Vector cand = t + step * g;
      double cn = pr.domain_norm(cand);
      if (cn > 0.0) {
        cand /= cn;
        double f = pr.value(cand);
        if (f > accepted) {
          accepted = f;
          t_next = cand;
          break;
        }
      }
      step *= 0.5;
    }

    // Polar pullback of the gradient direction: project the realized
    // gradient to the nearest contraction and re-extract coordinates.
    Matrix d = pr.phi.domain->realize_coords(g);
    if (d.cwiseAbs().maxCoeff() > 0.0) {
      Eigen::JacobiSVD<Matrix> svd(d,
                                   Eigen::ComputeThinU | Eigen::ComputeThinV);
      Matrix p = svd.matrixU() * svd.matrixV().adjoint();
      Vector cand = pr.phi.domain->coords_of(p);
      double cn = pr.domain_norm(cand);
      if (cn > 0.0) {
        cand /= cn;
        double f = pr.value(cand);
        if (f > accepted) {
          accepted = f;
          t_next = cand;
        }
      }
    }

    // On a fresh stall, solve the convex linearized subproblem for the
    // frozen top singular pair; it escapes local maxima of the line search.
    // Budgeted so late-stage micro-improvements cannot dominate the run.
    if (accepted <= best + cfg.tol * std::max(1.0, best) && stall == 0 &&
        lin_budget > 0) {
      --lin_budget;
      Vector cand = linear_subproblem(pr, t, g);
      double cn = pr.domain_norm(cand);
      if (cn > 0.0) {
        cand /= cn;
        double f = pr.value(cand);
        if (f > accepted) {
          accepted = f;
          t_next = cand;
        }
      }
    }

    if (accepted > best + cfg.tol * std::max(1.0, best)) {
      best = accepted;
      t = t_next;
      stall = 0;
    } else if (++stall >= 3) {
      res.converged = true;
      break;
    }
  }
  res.value = best;
  res.witness = t;
  res.iterations = it;
  return res;
}

}  // namespace

NormEstimate induced_norm(const LinearMapRep& phi, const EstimatorConfig& cfg,
                          const std::vector<Vector>& extra_starts) {
  AscentProblem pr(phi);
  NormEstimate est;
  est.upper = frobenius_upper(pr);
  est.converged = true;

  auto consider = [&](Vector start) {
    AscentResult r = ascend(pr, std::move(start), cfg);
    est.iterations += r.iterations;
    if (r.witness.size() && r.value > est.lower) {
      est.lower = r.value;
      est.witnesses = {r.witness};
      est.converged = r.converged;
    }
  };

  for (const Vector& s : extra_starts)
    if (s.size() == pr.n_coords) consider(s);
  for (int i = 0; i < cfg.restarts; ++i) {
    Rng rng(cfg.seed + static_cast<std::uint64_t>(i));
    consider(random_unit_vector(pr.n_coords, rng));
  }
  est.upper = std::max(est.upper, est.lower);
  return est;
}

double evaluate_at(const LinearMapRep& phi, const Vector& witness) {
  AscentProblem pr(phi);
  double dn = pr.domain_norm(witness);
  if (dn <= 0.0) return 0.0;
  return pr.value(witness) / dn;
}

namespace {

// Embed a level-(n-1) witness over E into level n (top-left corner).
Vector embed_witness(const SpacePtr& base, const Vector& w, int from_level,
                     int to_level) {
  MatElement x = MatElement::from_coords(base, from_level, w);
  return embed(x, to_level).coords();
}

}  // namespace

NormEstimate cb_norm(const LinearMapRep& phi, int level_max,
                     const EstimatorConfig& cfg) {
  if (level_max < 1) throw std::invalid_argument("cb_norm: level_max >= 1");
  NormEstimate out;
  out.upper = std::numeric_limits<double>::infinity();
  const int stab = phi.codomain->ambient_dim();
  Vector prev_witness;
  double upper_from_stab = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= level_max; ++n) {
    std::vector<Vector> starts;
    if (prev_witness.size())
      starts.push_back(embed_witness(phi.domain, prev_witness, n - 1, n));
    NormEstimate lvl = induced_norm(amplify(phi, n), cfg, starts);
    out.iterations += lvl.iterations;
    double v = lvl.lower;
    if (!out.level_profile.empty()) v = std::max(v, out.level_profile.back());
    out.level_profile.push_back(v);
    if (v >= out.lower) {
      out.lower = v;
      out.witnesses = lvl.witnesses;
      out.converged = lvl.converged;
    }
    if (n >= stab) upper_from_stab = std::min(upper_from_stab, lvl.upper);
    prev_witness = lvl.witnesses.empty() ? Vector() : lvl.witnesses[0];
  }
  out.upper = std::max(upper_from_stab, out.lower);
  return out;
}

NormEstimate lambda_cb_norm(const LinearMapRep& phi,
                            const WeightSequence& lambda, int level_max,
                            const EstimatorConfig& cfg) {
  if (level_max > lambda.n_max())
    throw std::out_of_range("lambda_cb_norm: level beyond N_max");
  NormEstimate out;
  Vector prev_witness;
  for (int n = 1; n <= level_max; ++n) {
    std::vector<Vector> starts;
    if (prev_witness.size())
      starts.push_back(embed_witness(phi.domain, prev_witness, n - 1, n));
    NormEstimate lvl = induced_norm(weighted_amplify(phi, lambda, n), cfg,
                                    starts);
    out.iterations += lvl.iterations;
    out.level_profile.push_back(lvl.lower);
    if (lvl.lower >= out.lower) {
      out.lower = lvl.lower;
      out.witnesses = lvl.witnesses;
      out.converged = lvl.converged;
    }
    prev_witness = lvl.witnesses.empty() ? Vector() : lvl.witnesses[0];
  }
  if (phi.codomain->dim() == 1 || phi.codomain->is_commutative()) {
    out.upper = std::max(out.lower,
                         lambda.range_bound() * induced_norm(phi, cfg).upper);
  } else {
    out.upper = std::numeric_limits<double>::infinity();
  }
  return out;
}

LinearMapRep bundle_matrix_of_maps(
    const std::vector<std::vector<LinearMapRep>>& entries) {
  const int k = static_cast<int>(entries.size());
  if (k == 0) throw std::invalid_argument("bundle: empty array");
  const LinearMapRep& first = entries[0][0];
  const int me = first.domain->dim();
  const int mf = first.codomain->dim();
  Matrix coeff = Matrix::Zero(k * k * mf, me);
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(entries[i].size()) != k)
      throw std::invalid_argument("bundle: ragged array");
    for (int j = 0; j < k; ++j) {
      const LinearMapRep& e = entries[i][j];
      if (!same_space(*e.domain, *first.domain) ||
          !same_space(*e.codomain, *first.codomain) ||
          e.conj_linear != first.conj_linear)
        throw std::invalid_argument("bundle: mismatched entries");
      coeff.block((i * k + j) * mf, 0, mf, me) = e.coeff;
    }
  }
  return {first.domain, level_space(first.codomain, k), std::move(coeff),
          first.conj_linear};
}

NormEstimate matrix_of_maps_norm(
    const std::vector<std::vector<LinearMapRep>>& entries,
    const std::optional<WeightSequence>& lambda, int level_max,
    const EstimatorConfig& cfg) {
  LinearMapRep bundled = bundle_matrix_of_maps(entries);
  return lambda ? lambda_cb_norm(bundled, *lambda, level_max, cfg)
                : cb_norm(bundled, level_max, cfg);
}

}  // namespace opnorm
