#include "opnorm/space.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <utility>

namespace opnorm {

namespace {

constexpr int kDenseSvdLimit = 512;

double power_iteration_norm(const Matrix& m) {
  const double tol = 1e-10;
  const int max_iter = 10000;
  Rng rng(0x9e3779b97f4a7c15ull);
  Vector v = random_unit_vector(static_cast<int>(m.cols()), rng);
  double sigma = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = m.adjoint() * (m * v);
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    double next = std::sqrt(nw);
    if (std::abs(next - sigma) <= tol * std::max(1.0, next)) return next;
    sigma = next;
  }
  return sigma;
}

}  // namespace

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (std::max(m.rows(), m.cols()) <= kDenseSvdLimit) {
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
  }
  return power_iteration_norm(m);
}

SingularTriple top_singular(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SingularTriple t;
  t.sigma = svd.singularValues()(0);
  t.u = svd.matrixU().col(0);
  t.v = svd.matrixV().col(0);
  return t;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ConcreteSpace::ConcreteSpace(int ambient_dim, std::vector<Matrix> basis,
                             std::string label)
    : ambient_dim_(ambient_dim),
      basis_(std::move(basis)),
      label_(std::move(label)) {
  const int m = static_cast<int>(basis_.size());
  if (ambient_dim_ < 1 || m < 1 || m > ambient_dim_ * ambient_dim_)
    throw std::invalid_argument("ConcreteSpace: bad dimensions");
  basis_vec_.resize(ambient_dim_ * ambient_dim_, m);
  for (int r = 0; r < m; ++r) {
    if (basis_[r].rows() != ambient_dim_ || basis_[r].cols() != ambient_dim_)
      throw std::invalid_argument("ConcreteSpace: basis matrix shape mismatch");
    basis_vec_.col(r) = vec(basis_[r]);
  }
  Eigen::JacobiSVD<Matrix> svd(basis_vec_,
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  // Gram eigenvalues are squared singular values.
  if (sv(m - 1) * sv(m - 1) <= 1e-12 * sv(0) * sv(0))
    throw std::invalid_argument("ConcreteSpace: basis not linearly independent");
  Eigen::VectorXd inv = sv.cwiseInverse();
  dual_ = svd.matrixV() * inv.asDiagonal().toDenseMatrix().cast<Complex>() *
          svd.matrixU().adjoint();
}

Matrix ConcreteSpace::realize_coords(const Vector& coords) const {
  return unvec(basis_vec_ * coords, ambient_dim_, ambient_dim_);
}

bool ConcreteSpace::is_commutative(double tol) const {
  double scale = 0.0;
  for (const auto& b : basis_) scale = std::max(scale, b.cwiseAbs().maxCoeff());
  for (size_t r = 0; r < basis_.size(); ++r)
    for (size_t s = r + 1; s < basis_.size(); ++s) {
      Matrix comm = basis_[r] * basis_[s] - basis_[s] * basis_[r];
      if (comm.cwiseAbs().maxCoeff() > tol * std::max(1.0, scale * scale))
        return false;
    }
  return true;
}

SpacePtr ConcreteSpace::make(int ambient_dim, std::vector<Matrix> basis,
                             std::string label) {
  return std::make_shared<ConcreteSpace>(ambient_dim, std::move(basis),
                                         std::move(label));
}

SpacePtr matrix_algebra(int n, std::string label) {
  std::vector<Matrix> basis;
  basis.reserve(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix b = Matrix::Zero(n, n);
      b(i, j) = 1.0;
      basis.push_back(std::move(b));
    }
  if (label.empty()) label = "M:" + std::to_string(n);
  return ConcreteSpace::make(n, std::move(basis), std::move(label));
}

SpacePtr diagonal_algebra(int d, std::string label) {
  std::vector<Matrix> basis;
  basis.reserve(d);
  for (int i = 0; i < d; ++i) {
    Matrix b = Matrix::Zero(d, d);
    b(i, i) = 1.0;
    basis.push_back(std::move(b));
  }
  if (label.empty()) label = "D:" + std::to_string(d);
  return ConcreteSpace::make(d, std::move(basis), std::move(label));
}

SpacePtr tensor_space(const SpacePtr& e, const SpacePtr& f) {
  std::vector<Matrix> basis;
  basis.reserve(e->dim() * f->dim());
  for (int r = 0; r < e->dim(); ++r)
    for (int s = 0; s < f->dim(); ++s)
      basis.push_back(kron(e->basis_matrix(r), f->basis_matrix(s)));
  return ConcreteSpace::make(e->ambient_dim() * f->ambient_dim(),
                             std::move(basis),
                             e->label() + "(x)" + f->label());
}

SpacePtr level_space(const SpacePtr& e, int n) {
  if (n < 1) throw std::invalid_argument("level_space: n must be positive");
  const int d = e->ambient_dim();
  std::vector<Matrix> basis;
  basis.reserve(n * n * e->dim());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < e->dim(); ++r) {
        Matrix b = Matrix::Zero(n * d, n * d);
        b.block(i * d, j * d, d, d) = e->basis_matrix(r);
        basis.push_back(std::move(b));
      }
  return ConcreteSpace::make(n * d, std::move(basis),
                             "M" + std::to_string(n) + "(" + e->label() + ")");
}

SpacePtr block_diagonal_algebra(int n, int k_points, std::string label) {
  std::vector<Matrix> basis;
  basis.reserve(k_points * n * n);
  for (int c = 0; c < k_points; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Matrix b = Matrix::Zero(k_points * n, k_points * n);
        b(c * n + i, c * n + j) = 1.0;
        basis.push_back(std::move(b));
      }
  if (label.empty())
    label = "C(" + std::to_string(k_points) + ",M" + std::to_string(n) + ")";
  return ConcreteSpace::make(k_points * n, std::move(basis), std::move(label));
}

bool same_space(const ConcreteSpace& a, const ConcreteSpace& b, double tol) {
  if (&a == &b) return true;
  if (a.ambient_dim() != b.ambient_dim() || a.dim() != b.dim()) return false;
  for (int r = 0; r < a.dim(); ++r)
    if ((a.basis_matrix(r) - b.basis_matrix(r)).cwiseAbs().maxCoeff() > tol)
      return false;
  return true;
}

MatElement::MatElement(SpacePtr space, int level, std::vector<Matrix> slices)
    : space_(std::move(space)), level_(level), slices_(std::move(slices)) {
  if (level_ < 1) throw std::invalid_argument("MatElement: level must be >= 1");
  if (static_cast<int>(slices_.size()) != space_->dim())
    throw std::invalid_argument("MatElement: slice count mismatch");
  for (const auto& s : slices_)
    if (s.rows() != level_ || s.cols() != level_)
      throw std::invalid_argument("MatElement: slice shape mismatch");
}

MatElement MatElement::zero(SpacePtr space, int level) {
  std::vector<Matrix> slices(space->dim(), Matrix::Zero(level, level));
  return MatElement(std::move(space), level, std::move(slices));
}

MatElement MatElement::basis_element(SpacePtr space, int level, int i, int j,
                                     int r) {
  MatElement x = zero(std::move(space), level);
  if (i < 0 || j < 0 || i >= level || j >= level || r < 0 ||
      r >= static_cast<int>(x.slices_.size()))
    throw std::out_of_range("basis_element: index out of range");
  x.slices_[r](i, j) = 1.0;
  return x;
}

MatElement MatElement::from_coords(SpacePtr space, int level,
                                   const Vector& coords) {
  const int n = level;
  const int m = space->dim();
  if (coords.size() != static_cast<Eigen::Index>(n) * n * m)
    throw std::invalid_argument("MatElement::from_coords: size mismatch");
  std::vector<Matrix> slices(m, Matrix::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < m; ++r)
        slices[r](i, j) = coords((i * n + j) * m + r);
  return MatElement(std::move(space), level, std::move(slices));
}

MatElement MatElement::random(SpacePtr space, int level, Rng& rng) {
  const int m = space->dim();
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector coords(level * level * m);
  for (Eigen::Index k = 0; k < coords.size(); ++k)
    coords(k) = Complex(dist(rng), dist(rng));
  return from_coords(std::move(space), level, coords);
}

Vector MatElement::coords() const {
  const int n = level_;
  const int m = space_->dim();
  Vector out(n * n * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < m; ++r) out((i * n + j) * m + r) = slices_[r](i, j);
  return out;
}

Matrix MatElement::realize() const {
  const int d = space_->ambient_dim();
  const int n = level_;
  Matrix out = Matrix::Zero(n * d, n * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix block = Matrix::Zero(d, d);
      for (int r = 0; r < space_->dim(); ++r)
        block += slices_[r](i, j) * space_->basis_matrix(r);
      out.block(i * d, j * d, d, d) = block;
    }
  return out;
}

MatElement MatElement::operator+(const MatElement& other) const {
  if (level_ != other.level_ || !same_space(*space_, *other.space_))
    throw std::invalid_argument("MatElement: incompatible addition");
  std::vector<Matrix> slices(slices_);
  for (size_t r = 0; r < slices.size(); ++r) slices[r] += other.slices_[r];
  return MatElement(space_, level_, std::move(slices));
}

MatElement MatElement::operator-(const MatElement& other) const {
  return *this + other * Complex(-1.0);
}

MatElement MatElement::operator*(Complex scalar) const {
  std::vector<Matrix> slices(slices_);
  for (auto& s : slices) s *= scalar;
  return MatElement(space_, level_, std::move(slices));
}

MatElement MatElement::as_level_one() const {
  return MatElement::from_coords(level_space(space_, level_), 1,
                                 coords());
}

MatElement direct_sum(const MatElement& x1, const MatElement& x2) {
  if (!same_space(*x1.space(), *x2.space()))
    throw std::invalid_argument("direct_sum: space mismatch");
  const int n = x1.level(), k = x2.level();
  std::vector<Matrix> slices(x1.space()->dim(), Matrix::Zero(n + k, n + k));
  for (int r = 0; r < x1.space()->dim(); ++r) {
    slices[r].topLeftCorner(n, n) = x1.slice(r);
    slices[r].bottomRightCorner(k, k) = x2.slice(r);
  }
  return MatElement(x1.space(), n + k, std::move(slices));
}

MatElement compress(const Matrix& alpha, const MatElement& x,
                    const Matrix& beta) {
  const int n = x.level();
  if (alpha.cols() != n || beta.rows() != n || alpha.rows() != beta.cols())
    throw std::invalid_argument("compress: shape mismatch");
  const int p = static_cast<int>(alpha.rows());
  std::vector<Matrix> slices(x.space()->dim(), Matrix::Zero(p, p));
  for (int r = 0; r < x.space()->dim(); ++r)
    slices[r] = alpha * x.slice(r) * beta;
  return MatElement(x.space(), p, std::move(slices));
}

MatElement min_tensor(const MatElement& x, const MatElement& y) {
  SpacePtr ts = tensor_space(x.space(), y.space());
  const int n = x.level(), k = y.level();
  const int mf = y.space()->dim();
  std::vector<Matrix> slices(ts->dim(), Matrix::Zero(n * k, n * k));
  for (int r = 0; r < x.space()->dim(); ++r)
    for (int s = 0; s < mf; ++s) {
      Matrix& sl = slices[r * mf + s];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Complex c = x.coeff(i, j, r);
          if (c == Complex(0.0)) continue;
          sl.block(i * k, j * k, k, k) += c * y.slice(s);
        }
    }
  return MatElement(std::move(ts), n * k, std::move(slices));
}

MatElement embed(const MatElement& x, int level) {
  if (level < x.level()) throw std::invalid_argument("embed: level too small");
  std::vector<Matrix> slices(x.space()->dim(), Matrix::Zero(level, level));
  for (int r = 0; r < x.space()->dim(); ++r)
    slices[r].topLeftCorner(x.level(), x.level()) = x.slice(r);
  return MatElement(x.space(), level, std::move(slices));
}

Vector random_unit_vector(int n, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(dist(rng), dist(rng));
  double nrm = v.norm();
  return nrm > 0 ? Vector(v / nrm) : v;
}

Matrix random_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = Complex(dist(rng), dist(rng));
  return m;
}

}  // namespace opnorm
