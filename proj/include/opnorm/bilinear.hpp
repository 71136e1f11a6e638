#pragma once

#include <optional>

#include "opnorm/decomp.hpp"
#include "opnorm/maps.hpp"

namespace opnorm {

enum class BilinearKind { product, kronecker, schur, custom };

// Bilinear weight sequence lambda_n : M_n x M_n -> M_{k(n)}.
class BilinearWeight {
 public:
  static BilinearWeight product();
  static BilinearWeight kronecker();
  static BilinearWeight schur();
  // tables[n-1] maps vec(a) (x) vec(b) to vec(lambda_n(a, b)); k_sizes gives
  // the output side length per level.
  static BilinearWeight custom(std::vector<Matrix> tables,
                               std::vector<int> k_sizes);

  BilinearKind kind() const { return kind_; }
  int k_of(int n) const;
  int n_max() const { return n_max_; }
  Matrix apply(int n, const Matrix& a, const Matrix& b) const;
  // Unitary u with lambda_n(b, a) = u^* lambda_n(a, b) u, when one is known
  // structurally (identity for schur, the vec-transpose permutation for
  // kronecker).
  std::optional<Matrix> symmetry_witness(int n) const;

 private:
  BilinearKind kind_ = BilinearKind::product;
  int n_max_ = 0;  // 0 means unbounded
  std::vector<Matrix> tables_;
  std::vector<int> k_sizes_;
};

// Bilinear map phi : E x F -> G in coordinates; coeff[t](r, s) is the
// G-coordinate t of phi(B_r, C_s).
struct BilinearMapRep {
  SpacePtr e_space, f_space, g_space;
  std::vector<Matrix> coeff;

  Vector apply_coords(const Vector& ec, const Vector& fc) const;
  bool is_form() const { return g_space->dim() == 1; }
};

BilinearMapRep random_bilinear(const SpacePtr& e, const SpacePtr& f,
                               const SpacePtr& g, Rng& rng);
// Scalar form from a coefficient matrix c (dim E x dim F).
BilinearMapRep form_from_matrix(const SpacePtr& e, const SpacePtr& f,
                                const Matrix& c);
// psi(x (x) y) = (a^H R(x) b)(c^H R(y) d) for ambient vectors a, b, c, d;
// bounded by 1 when all four are unit vectors.
BilinearMapRep vector_pair_form(const SpacePtr& e, const SpacePtr& f,
                                const Vector& a, const Vector& b,
                                const Vector& c, const Vector& d);
// Argument-swapped form over (F, E).
BilinearMapRep flip_form(const BilinearMapRep& psi);

// phi_n(u1, u2) in M_{k(n)}(G) for u1 in M_n(E), u2 in M_n(F).
MatElement bilinear_apply(const BilinearMapRep& phi,
                          const BilinearWeight& lambda, const MatElement& u1,
                          const MatElement& u2);

// sup over unit pairs of ||phi_n(u1, u2)||, estimated level by level with
// alternating ascent. The upper is the rank-decomposition bound for scalar
// forms under the three named weights, +inf otherwise.
NormEstimate bilinear_lambda_norm(const BilinearMapRep& phi,
                                  const BilinearWeight& lambda, int level_max,
                                  const EstimatorConfig& cfg);

// Certified upper bound on sup_n ||phi_n|| for a scalar form under the named
// weights: sum of sigma_k ||g_k|| ||h_k|| over a singular value decomposition
// of the coefficient matrix.
double bilinear_form_upper(const BilinearMapRep& phi);
// Same bound for an m x m array of forms viewed as one map into M_m.
double form_array_upper(const std::vector<std::vector<BilinearMapRep>>& psi);

// Block matrix [psi_pq(u_il)] of size (n m) x (n m), row index i*m + p.
Matrix matrix_pairing(const TensorElement& u,
                      const std::vector<std::vector<BilinearMapRep>>& psi);

// Dual-defined tensor norm bracket: lower from normalized pairings against
// candidate form arrays (sizes up to m_cap), upper delegated to the matching
// decomposition norm (product -> Haagerup, kronecker -> projective, schur ->
// Schur).
NormEstimate lambda_tensor_norm(const TensorElement& u,
                                const BilinearWeight& lambda, int m_cap,
                                const EstimatorConfig& cfg);

struct SymmetryReport {
  bool symmetric = false;
  Matrix witness;
  double residual = std::numeric_limits<double>::infinity();
};
SymmetryReport symmetry_check(const BilinearWeight& lambda, int n, Rng& rng);

TensorElement flip(const TensorElement& u);

}  // namespace opnorm
