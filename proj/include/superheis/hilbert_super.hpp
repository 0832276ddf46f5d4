#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

#include "superheis/grassmann.hpp"

namespace superheis {

/// Finite-dimensional Hilbert superspace: graded basis, parity-homogeneous
/// superhermitian gram matrix, and a lazily computed fundamental symmetry.
struct HilbertSuper {
  std::vector<int> degs;   // degree (0/1) of each basis vector
  int parity = 0;          // homogeneity degree of the inner product
  Eigen::MatrixXcd gram;   // G_ij = <e_i, e_j>, sesquilinear (left antilinear)
  mutable std::optional<Eigen::MatrixXcd> J;  // cached fundamental symmetry

  int dim() const { return int(degs.size()); }
  int d0() const;
  int d1() const;
  int deg(int i) const { return degs[i]; }

  static HilbertSuper make(std::vector<int> degs, int parity, Eigen::MatrixXcd gram);
  /// Standard sorted constructor: first d0 even vectors, then d1 odd ones.
  static HilbertSuper sorted(int d0, int d1, int parity, Eigen::MatrixXcd gram);

  /// <x, y> with the stored gram.
  cplx inner(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const;

  /// Entrywise superhermitian + homogeneity + nondegeneracy check.
  void validate(double tol = 1e-10) const;

  Eigen::MatrixXcd parity_op() const;
};

struct GradedOperator {
  Eigen::MatrixXcd mat;
  int degree = 0;  // 0 or 1
};

struct FundamentalDecomposition {
  Eigen::MatrixXcd J;
  std::array<int, 4> sgn;  // dims of the [1], [i], [-1], [-i] components
  std::array<Eigen::MatrixXcd, 4> projectors;
};

/// Builds the fundamental symmetry from eigenprojectors of the Hermitian
/// forms carried by the gram; deterministic. Throws on degenerate input and
/// on parity-1 spaces with d0 != d1.
FundamentalDecomposition fundamental_decomposition(const HilbertSuper& h, double tol = 1e-10);

/// Superadjoint w.r.t. the two graded inner products:
/// <T^dag x, y>_dom = (-1)^{|T||x|} <x, T y>_cod for T: dom -> cod.
GradedOperator superadjoint(const HilbertSuper& dom, const HilbertSuper& cod,
                            const GradedOperator& T);
GradedOperator superadjoint(const HilbertSuper& h, const GradedOperator& T);

bool is_superunitary(const HilbertSuper& dom, const HilbertSuper& cod, const GradedOperator& Phi,
                     double tol = 1e-10);
double superunitarity_residual(const HilbertSuper& dom, const HilbertSuper& cod,
                               const GradedOperator& Phi);

/// Graded tensor product with the sign-twisted gram; basis ordered as
/// (i1, i2) -> i1*dim2 + i2.
HilbertSuper tensor(const HilbertSuper& h1, const HilbertSuper& h2);
/// Fundamental symmetry of the tensor product built from J1, J2.
Eigen::MatrixXcd tensor_J(const HilbertSuper& h1, const HilbertSuper& h2,
                          const Eigen::MatrixXcd& J1, const Eigen::MatrixXcd& J2);
/// Graded tensor product of operators: (A ox B)(x ox y) with the Koszul sign
/// (-1)^{|B||x|}.
GradedOperator tensor_op(const HilbertSuper& h1, const HilbertSuper& h2, const GradedOperator& A,
                         const GradedOperator& B);

HilbertSuper direct_sum(const HilbertSuper& h1, const HilbertSuper& h2);
HilbertSuper dual(const HilbertSuper& h);

/// Gram-orthogonal projector onto the span of the given (graded) columns;
/// requires the restricted gram to be invertible.
Eigen::MatrixXcd orthogonal_projector(const HilbertSuper& h, const Eigen::MatrixXcd& V);

}  // namespace superheis
