#pragma once

#include <complex>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace opnorm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

// Largest singular value. Dense SVD below side 512, power iteration on the
// Hermitian dilation above (tol 1e-10, at most 1e4 iterations).
double spectral_norm(const Matrix& m);

struct SingularTriple {
  double sigma = 0.0;
  Vector u, v;  // m v = sigma u
};
SingularTriple top_singular(const Matrix& m);

Matrix kron(const Matrix& a, const Matrix& b);

inline Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}
inline Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

class ConcreteSpace;
using SpacePtr = std::shared_ptr<const ConcreteSpace>;

// A subspace of M_d given by a basis of d x d matrices. Basis matrices need
// not be orthogonal; coordinate extraction goes through the pseudoinverse of
// the vectorized basis.
class ConcreteSpace {
 public:
  ConcreteSpace(int ambient_dim, std::vector<Matrix> basis, std::string label);

  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::string& label() const { return label_; }
  const std::vector<Matrix>& basis() const { return basis_; }
  const Matrix& basis_matrix(int r) const { return basis_[r]; }

  // d^2 x m matrix whose columns are vec(B_r).
  const Matrix& vectorized_basis() const { return basis_vec_; }

  Matrix realize_coords(const Vector& coords) const;
  Vector coords_of(const Matrix& m) const { return dual_ * vec(m); }

  // All basis matrices commute pairwise (diagonal algebras in particular).
  bool is_commutative(double tol = 1e-12) const;
  // Basis spans all of M_d.
  bool is_full_algebra() const { return dim() == ambient_dim_ * ambient_dim_; }

  static SpacePtr make(int ambient_dim, std::vector<Matrix> basis,
                       std::string label);

 private:
  int ambient_dim_;
  std::vector<Matrix> basis_;
  std::string label_;
  Matrix basis_vec_;  // d^2 x m
  Matrix dual_;       // m x d^2, pinv of basis_vec_
};

// Full matrix algebra M_n with the elementary-matrix basis (row-major eps_ij).
SpacePtr matrix_algebra(int n, std::string label = "");
// Diagonal algebra D_d, the d-point model of C(K).
SpacePtr diagonal_algebra(int d, std::string label = "");
// E tensor F with basis {B_r (x) C_s}, index r * dim(F) + s.
SpacePtr tensor_space(const SpacePtr& e, const SpacePtr& f);
// M_n(E) as a concrete space with basis {eps_ij (x) B_r}, index (i*n+j)*m + r.
SpacePtr level_space(const SpacePtr& e, int n);
// Direct sum of k copies of M_n inside M_{k*n} (the C(K, M_n) model).
SpacePtr block_diagonal_algebra(int n, int k_points, std::string label = "");

bool same_space(const ConcreteSpace& a, const ConcreteSpace& b,
                double tol = 1e-12);

// Element of M_n(E): an n x n x m coefficient tensor stored as m slices of
// size n x n, slice r holding the coefficients of basis matrix r.
class MatElement {
 public:
  MatElement(SpacePtr space, int level, std::vector<Matrix> slices);

  static MatElement zero(SpacePtr space, int level);
  // Coefficient 1 for basis r at position (i, j), zero elsewhere.
  static MatElement basis_element(SpacePtr space, int level, int i, int j,
                                  int r);
  static MatElement from_coords(SpacePtr space, int level,
                                const Vector& coords);
  static MatElement random(SpacePtr space, int level, Rng& rng);

  const SpacePtr& space() const { return space_; }
  int level() const { return level_; }
  const Matrix& slice(int r) const { return slices_[r]; }
  Complex coeff(int i, int j, int r) const { return slices_[r](i, j); }

  // Coordinates in the level-space basis order (i*n + j)*m + r.
  Vector coords() const;

  // The (n d) x (n d) matrix sum_{i,j,r} coeff(i,j,r) eps_ij (x) B_r.
  Matrix realize() const;
  double min_norm() const { return spectral_norm(realize()); }

  MatElement operator+(const MatElement& other) const;
  MatElement operator-(const MatElement& other) const;
  MatElement operator*(Complex scalar) const;

  // View an element of M_n(E) as a level-1 element over level_space(E, n).
  MatElement as_level_one() const;

 private:
  SpacePtr space_;
  int level_;
  std::vector<Matrix> slices_;
};

// Block-diagonal placement; exact R1 equality for the min norm.
MatElement direct_sum(const MatElement& x1, const MatElement& x2);
// alpha * x * beta on the matrix index only (R2 contraction).
MatElement compress(const Matrix& alpha, const MatElement& x,
                    const Matrix& beta);
// x (x) y in M_{nk}(E (x) F); min norm is multiplicative.
MatElement min_tensor(const MatElement& x, const MatElement& y);
// Top-left embedding into a higher level (direct sum with zero).
MatElement embed(const MatElement& x, int level);

Vector random_unit_vector(int n, Rng& rng);
Matrix random_matrix(int rows, int cols, Rng& rng);

}  // namespace opnorm
