#include "opnorm/bilinear.hpp"

#include <algorithm>

namespace opnorm {

BilinearWeight BilinearWeight::product() {
  BilinearWeight w;
  w.kind_ = BilinearKind::product;
  return w;
}

BilinearWeight BilinearWeight::kronecker() {
  BilinearWeight w;
  w.kind_ = BilinearKind::kronecker;
  return w;
}

BilinearWeight BilinearWeight::schur() {
  BilinearWeight w;
  w.kind_ = BilinearKind::schur;
  return w;
}

BilinearWeight BilinearWeight::custom(std::vector<Matrix> tables,
                                      std::vector<int> k_sizes) {
  if (tables.size() != k_sizes.size())
    throw std::invalid_argument("custom weight: table/size mismatch");
  BilinearWeight w;
  w.kind_ = BilinearKind::custom;
  w.n_max_ = static_cast<int>(tables.size());
  for (int n = 1; n <= w.n_max_; ++n) {
    int k = k_sizes[n - 1];
    if (tables[n - 1].rows() != k * k ||
        tables[n - 1].cols() != n * n * n * n)
      throw std::invalid_argument("custom weight: table shape mismatch");
  }
  w.tables_ = std::move(tables);
  w.k_sizes_ = std::move(k_sizes);
  return w;
}

int BilinearWeight::k_of(int n) const {
  switch (kind_) {
    case BilinearKind::product:
    case BilinearKind::schur:
      return n;
    case BilinearKind::kronecker:
      return n * n;
    case BilinearKind::custom:
      if (n > n_max_) throw std::out_of_range("weight: level beyond N_max");
      return k_sizes_[n - 1];
  }
  throw std::logic_error("bad kind");
}

Matrix BilinearWeight::apply(int n, const Matrix& a, const Matrix& b) const {
  if (a.rows() != n || a.cols() != n || b.rows() != n || b.cols() != n)
    throw std::invalid_argument("weight apply: shape mismatch");
  switch (kind_) {
    case BilinearKind::product:
      return a * b;
    case BilinearKind::kronecker:
      return kron(a, b);
    case BilinearKind::schur:
      return a.cwiseProduct(b);
    case BilinearKind::custom: {
      if (n > n_max_) throw std::out_of_range("weight: level beyond N_max");
      int k = k_sizes_[n - 1];
      return unvec(tables_[n - 1] * kron(vec(a), vec(b)), k, k);
    }
  }
  throw std::logic_error("bad kind");
}

std::optional<Matrix> BilinearWeight::symmetry_witness(int n) const {
  if (kind_ == BilinearKind::schur)
    return Matrix::Identity(n, n);
  if (kind_ == BilinearKind::kronecker) {
    Matrix k = Matrix::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) k(j * n + i, i * n + j) = 1.0;
    return k;
  }
  return std::nullopt;
}

Vector BilinearMapRep::apply_coords(const Vector& ec, const Vector& fc) const {
  Vector out(g_space->dim());
  for (size_t t = 0; t < coeff.size(); ++t)
    out(static_cast<Eigen::Index>(t)) = (ec.transpose() * coeff[t] * fc)(0, 0);
  return out;
}

BilinearMapRep random_bilinear(const SpacePtr& e, const SpacePtr& f,
                               const SpacePtr& g, Rng& rng) {
  std::vector<Matrix> coeff;
  for (int t = 0; t < g->dim(); ++t)
    coeff.push_back(random_matrix(e->dim(), f->dim(), rng));
  return {e, f, g, std::move(coeff)};
}

BilinearMapRep form_from_matrix(const SpacePtr& e, const SpacePtr& f,
                                const Matrix& c) {
  if (c.rows() != e->dim() || c.cols() != f->dim())
    throw std::invalid_argument("form coefficient shape mismatch");
  return {e, f, matrix_algebra(1), {c}};
}

BilinearMapRep vector_pair_form(const SpacePtr& e, const SpacePtr& f,
                                const Vector& a, const Vector& b,
                                const Vector& c, const Vector& d) {
  Vector an = a.normalized(), bn = b.normalized();
  Vector cn = c.normalized(), dn = d.normalized();
  Matrix coeff(e->dim(), f->dim());
  for (int r = 0; r < e->dim(); ++r)
    for (int s = 0; s < f->dim(); ++s)
      coeff(r, s) = (an.adjoint() * e->basis_matrix(r) * bn)(0, 0) *
                    (cn.adjoint() * f->basis_matrix(s) * dn)(0, 0);
  return form_from_matrix(e, f, coeff);
}

BilinearMapRep flip_form(const BilinearMapRep& psi) {
  if (!psi.is_form()) throw std::invalid_argument("flip_form: not a form");
  return form_from_matrix(psi.f_space, psi.e_space,
                          psi.coeff[0].transpose());
}

MatElement bilinear_apply(const BilinearMapRep& phi,
                          const BilinearWeight& lambda, const MatElement& u1,
                          const MatElement& u2) {
  if (!same_space(*u1.space(), *phi.e_space) ||
      !same_space(*u2.space(), *phi.f_space) || u1.level() != u2.level())
    throw std::invalid_argument("bilinear_apply: shape mismatch");
  const int n = u1.level();
  const int k = lambda.k_of(n);
  const int mg = phi.g_space->dim();
  std::vector<Matrix> out(mg, Matrix::Zero(k, k));
  for (int r = 0; r < phi.e_space->dim(); ++r)
    for (int s = 0; s < phi.f_space->dim(); ++s) {
      bool used = false;
      Matrix l;
      for (int t = 0; t < mg; ++t) {
        Complex c = phi.coeff[t](r, s);
        if (c == Complex(0.0)) continue;
        if (!used) {
          l = lambda.apply(n, u1.slice(r), u2.slice(s));
          used = true;
        }
        out[t] += c * l;
      }
    }
  return MatElement(phi.g_space, k, std::move(out));
}

namespace {

EstimatorConfig upper_only_cfg(const EstimatorConfig& cfg) {
  EstimatorConfig c = cfg;
  c.restarts = 0;
  c.max_iter = 0;
  return c;
}

// Certified norm upper bound of the functional with coefficient row w.
double functional_upper(const SpacePtr& space, const Vector& w,
                        const EstimatorConfig& cfg) {
  LinearMapRep f{space, matrix_algebra(1), w.transpose(), false};
  return induced_norm(f, upper_only_cfg(cfg)).upper;
}

// Freeze the second argument: u1 -> phi_n(u1, u2) between level spaces.
LinearMapRep freeze_second(const BilinearMapRep& phi,
                           const BilinearWeight& lambda, int n,
                           const MatElement& u2) {
  SpacePtr dom = level_space(phi.e_space, n);
  SpacePtr cod = level_space(phi.g_space, lambda.k_of(n));
  Matrix coeff(cod->dim(), dom->dim());
  for (int c = 0; c < dom->dim(); ++c) {
    Vector unit = Vector::Zero(dom->dim());
    unit(c) = 1.0;
    MatElement basis = MatElement::from_coords(phi.e_space, n, unit);
    coeff.col(c) = bilinear_apply(phi, lambda, basis, u2).coords();
  }
  return {dom, cod, std::move(coeff), false};
}

LinearMapRep freeze_first(const BilinearMapRep& phi,
                          const BilinearWeight& lambda, int n,
                          const MatElement& u1) {
  SpacePtr dom = level_space(phi.f_space, n);
  SpacePtr cod = level_space(phi.g_space, lambda.k_of(n));
  Matrix coeff(cod->dim(), dom->dim());
  for (int c = 0; c < dom->dim(); ++c) {
    Vector unit = Vector::Zero(dom->dim());
    unit(c) = 1.0;
    MatElement basis = MatElement::from_coords(phi.f_space, n, unit);
    coeff.col(c) = bilinear_apply(phi, lambda, u1, basis).coords();
  }
  return {dom, cod, std::move(coeff), false};
}

// Coordinates of the identity matrix when the space represents it; empty
// otherwise.
Vector identity_coords(const SpacePtr& space) {
  Matrix id = Matrix::Identity(space->ambient_dim(), space->ambient_dim());
  Vector c = space->coords_of(id);
  if ((space->realize_coords(c) - id).cwiseAbs().maxCoeff() < 1e-10) return c;
  return Vector();
}

MatElement normalized_or_zero(const SpacePtr& space, int n, const Vector& c) {
  MatElement x = MatElement::from_coords(space, n, c);
  double nrm = x.min_norm();
  if (nrm < 1e-14) return MatElement::zero(space, n);
  return x * Complex(1.0 / nrm);
}

}  // namespace

NormEstimate bilinear_lambda_norm(const BilinearMapRep& phi,
                                  const BilinearWeight& lambda, int level_max,
                                  const EstimatorConfig& cfg) {
  NormEstimate out;
  EstimatorConfig inner = cfg;
  inner.restarts = 2;

  const int restarts = std::clamp(cfg.restarts / 2, 2, 8);
  const int rounds = 4;
  Vector id_f = identity_coords(phi.f_space);

  for (int n = 1; n <= level_max; ++n) {
    double level_value = 0.0;
    for (int t = 0; t < restarts; ++t) {
      Vector start;
      if (t == 0 && id_f.size()) {
        // Block-diagonal identity: a norm-one starting point that attains
        // the sup for the algebraic weights.
        MatElement block = MatElement::zero(phi.f_space, n);
        for (int i = 0; i < n; ++i) {
          std::vector<Matrix> slices;
          for (int r = 0; r < phi.f_space->dim(); ++r) {
            Matrix m = Matrix::Zero(n, n);
            m(i, i) = id_f(r);
            slices.push_back(m);
          }
          block = block + MatElement(phi.f_space, n, slices);
        }
        start = block.coords();
      } else {
        Rng rng(cfg.seed + 977 * n + t);
        start = random_unit_vector(n * n * phi.f_space->dim(), rng);
      }
      MatElement u2 = normalized_or_zero(phi.f_space, n, start);
      if (u2.min_norm() == 0.0) continue;

      Vector u1c;
      double val = 0.0;
      for (int round = 0; round < rounds; ++round) {
        std::vector<Vector> starts1;
        if (u1c.size()) starts1.push_back(u1c);
        NormEstimate e1 = induced_norm(freeze_second(phi, lambda, n, u2),
                                       inner, starts1);
        out.iterations += e1.iterations;
        if (e1.witnesses.empty()) break;
        u1c = e1.witnesses[0];
        val = std::max(val, e1.lower);

        MatElement u1 = normalized_or_zero(phi.e_space, n, u1c);
        NormEstimate e2 = induced_norm(freeze_first(phi, lambda, n, u1),
                                       inner, {u2.coords()});
        out.iterations += e2.iterations;
        if (e2.witnesses.empty()) break;
        u2 = normalized_or_zero(phi.f_space, n, e2.witnesses[0]);
        val = std::max(val, e2.lower);
      }
      level_value = std::max(level_value, val);
    }
    out.level_profile.push_back(level_value);
    out.lower = std::max(out.lower, level_value);
  }

  if (phi.is_form() && lambda.kind() != BilinearKind::custom)
    out.upper = std::max(out.lower, bilinear_form_upper(phi));
  else
    out.upper = std::numeric_limits<double>::infinity();
  out.converged = true;
  return out;
}

double bilinear_form_upper(const BilinearMapRep& phi) {
  if (!phi.is_form())
    throw std::invalid_argument("bilinear_form_upper: not a form");
  EstimatorConfig cfg;
  Eigen::JacobiSVD<Matrix> svd(phi.coeff[0],
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  double total = 0.0;
  for (int k = 0; k < svd.nonzeroSingularValues(); ++k) {
    double ge = functional_upper(phi.e_space, svd.matrixU().col(k), cfg);
    double hf =
        functional_upper(phi.f_space, svd.matrixV().col(k).conjugate(), cfg);
    total += svd.singularValues()(k) * ge * hf;
  }
  return total;
}

double form_array_upper(const std::vector<std::vector<BilinearMapRep>>& psi) {
  const int m = static_cast<int>(psi.size());
  if (m == 0) throw std::invalid_argument("form_array_upper: empty array");
  const SpacePtr& e = psi[0][0].e_space;
  const SpacePtr& f = psi[0][0].f_space;
  Matrix t(m * m, e->dim() * f->dim());
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q)
      for (int r = 0; r < e->dim(); ++r)
        for (int s = 0; s < f->dim(); ++s)
          t(p * m + q, r * f->dim() + s) = psi[p][q].coeff[0](r, s);
  Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double total = 0.0;
  for (int k = 0; k < svd.nonzeroSingularValues(); ++k) {
    Matrix block = unvec(svd.matrixU().col(k), m, m).transpose();
    Matrix c(e->dim(), f->dim());
    for (int r = 0; r < e->dim(); ++r)
      for (int s = 0; s < f->dim(); ++s)
        c(r, s) = std::conj(svd.matrixV()(r * f->dim() + s, k));
    total += svd.singularValues()(k) * spectral_norm(block) *
             bilinear_form_upper(form_from_matrix(e, f, c));
  }
  return total;
}

Matrix matrix_pairing(const TensorElement& u,
                      const std::vector<std::vector<BilinearMapRep>>& psi) {
  const int m = static_cast<int>(psi.size());
  const int n = u.level();
  const int mf = u.f_space->dim();
  Matrix p = Matrix::Zero(n * m, n * m);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      for (int pp = 0; pp < m; ++pp) {
        if (static_cast<int>(psi[pp].size()) != m)
          throw std::invalid_argument("matrix_pairing: ragged array");
        for (int q = 0; q < m; ++q) {
          const Matrix& c = psi[pp][q].coeff[0];
          Complex v = 0.0;
          for (int r = 0; r < u.e_space->dim(); ++r)
            for (int s = 0; s < mf; ++s)
              v += u.u.slice(r * mf + s)(i, l) * c(r, s);
          p(i * m + pp, l * m + q) = v;
        }
      }
    }
  return p;
}

namespace {

// Unit vector pairs for the dual search, keyed by the ambient dimension so
// that the candidate set over (E, F) mirrors the one over (F, E).
std::vector<std::pair<Vector, Vector>> side_vectors(int dim,
                                                    std::uint64_t seed,
                                                    int count) {
  std::vector<std::pair<Vector, Vector>> out;
  for (int t = 0; t < count; ++t) {
    Rng rng(seed + 1013 * static_cast<std::uint64_t>(dim) + t);
    out.emplace_back(random_unit_vector(dim, rng),
                     random_unit_vector(dim, rng));
  }
  return out;
}

}  // namespace

NormEstimate lambda_tensor_norm(const TensorElement& u,
                                const BilinearWeight& lambda, int m_cap,
                                const EstimatorConfig& cfg) {
  const SpacePtr& e = u.e_space;
  const SpacePtr& f = u.f_space;
  const int n = u.level();
  const int mf = f->dim();

  // Candidate rank-one dual forms with structural norm at most one.
  std::vector<BilinearMapRep> forms;
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      Matrix c(e->dim(), mf);
      for (int r = 0; r < e->dim(); ++r)
        for (int s = 0; s < mf; ++s) c(r, s) = u.u.slice(r * mf + s)(i, l);
      Eigen::JacobiSVD<Matrix> svd(c,
                                   Eigen::ComputeThinU | Eigen::ComputeThinV);
      int terms = std::min<int>(3, svd.nonzeroSingularValues());
      for (int k = 0; k < terms; ++k) {
        Matrix re = e->realize_coords(svd.matrixU().col(k));
        Matrix rf = f->realize_coords(svd.matrixV().col(k).conjugate());
        SingularTriple te = top_singular(re), tf = top_singular(rf);
        if (te.sigma < 1e-14 || tf.sigma < 1e-14) continue;
        forms.push_back(vector_pair_form(e, f, te.u, te.v, tf.u, tf.v));
      }
    }
  auto evecs = side_vectors(e->ambient_dim(), cfg.seed, 4);
  auto fvecs = side_vectors(f->ambient_dim(), cfg.seed, 4);
  for (const auto& [a, b] : evecs)
    for (const auto& [c, d] : fvecs)
      forms.push_back(vector_pair_form(e, f, a, b, c, d));

  NormEstimate out;
  std::vector<std::pair<double, const BilinearMapRep*>> scored;
  for (const BilinearMapRep& psi : forms) {
    double v = spectral_norm(matrix_pairing(u, {{psi}}));
    scored.emplace_back(v, &psi);
    out.lower = std::max(out.lower, v);
  }

  // Diagonal arrays of the best candidates keep the structural bound one.
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  int m = std::min<int>(m_cap, static_cast<int>(scored.size()));
  if (m >= 2) {
    BilinearMapRep zero = form_from_matrix(e, f, Matrix::Zero(e->dim(), mf));
    std::vector<std::vector<BilinearMapRep>> arr(m,
                                                 std::vector<BilinearMapRep>(
                                                     m, zero));
    for (int p = 0; p < m; ++p) arr[p][p] = *scored[p].second;
    out.lower = std::max(out.lower, spectral_norm(matrix_pairing(u, arr)));
  }

  int cap = std::min(n * e->dim(), n * mf);
  NormEstimate dec;
  switch (lambda.kind()) {
    case BilinearKind::product:
      dec = haagerup_upper(u, cap, cfg);
      break;
    case BilinearKind::kronecker:
      dec = projective_upper(u, cap, cfg);
      break;
    case BilinearKind::schur:
      dec = schur_upper(u, cap, cfg);
      break;
    case BilinearKind::custom:
      dec.upper = std::numeric_limits<double>::infinity();
      dec.converged = false;
      break;
  }
  out.upper = std::max(dec.upper, out.lower);
  out.converged = dec.converged;
  return out;
}

SymmetryReport symmetry_check(const BilinearWeight& lambda, int n, Rng& rng) {
  SymmetryReport rep;
  Matrix candidate;
  if (auto w = lambda.symmetry_witness(n)) {
    candidate = *w;
  } else {
    // Least-squares fit of u with u lambda(b,a) = lambda(a,b) u, projected
    // to the nearest unitary.
    int k = lambda.k_of(n);
    Matrix l = Matrix::Zero(0, k * k);
    for (int t = 0; t < 20; ++t) {
      Matrix a = random_matrix(n, n, rng), b = random_matrix(n, n, rng);
      Matrix m1 = lambda.apply(n, a, b), m2 = lambda.apply(n, b, a);
      Matrix row = kron(m2.transpose(), Matrix::Identity(k, k)) -
                   kron(Matrix::Identity(k, k), m1);
      Matrix stacked(l.rows() + row.rows(), k * k);
      stacked << l, row;
      l = std::move(stacked);
    }
    Eigen::JacobiSVD<Matrix> svd(l, Eigen::ComputeThinV);
    Vector null = svd.matrixV().col(svd.matrixV().cols() - 1);
    Eigen::JacobiSVD<Matrix> polar(unvec(null, k, k),
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
    candidate = polar.matrixU() * polar.matrixV().adjoint();
  }

  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    Matrix a = random_matrix(n, n, rng), b = random_matrix(n, n, rng);
    Matrix diff = lambda.apply(n, b, a) -
                  candidate.adjoint() * lambda.apply(n, a, b) * candidate;
    worst = std::max(worst, spectral_norm(diff) /
                                std::max(1.0, spectral_norm(
                                                  lambda.apply(n, a, b))));
  }
  rep.witness = candidate;
  rep.residual = worst;
  rep.symmetric = worst <= 1e-6;
  return rep;
}

TensorElement flip(const TensorElement& u) {
  const int mE = u.e_space->dim(), mF = u.f_space->dim();
  SpacePtr tp = tensor_space(u.f_space, u.e_space);
  std::vector<Matrix> slices(mE * mF);
  for (int r = 0; r < mE; ++r)
    for (int s = 0; s < mF; ++s) slices[s * mE + r] = u.u.slice(r * mF + s);
  return TensorElement(u.f_space, u.e_space,
                       MatElement(tp, u.level(), std::move(slices)));
}

}  // namespace opnorm
