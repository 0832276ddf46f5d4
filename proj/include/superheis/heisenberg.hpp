#pragma once

#include <map>
#include <vector>

#include "superheis/grassmann.hpp"

namespace superheis {

/// Finite-dimensional Lie superalgebra by structure constants. Basis order:
/// dim0 even elements first, then dim1 odd ones.
struct LieSuperAlg {
  int dim0 = 0, dim1 = 0;
  // brackets[i][j] = list of (k, coefficient) for [b_i, b_j]
  std::vector<std::vector<std::map<int, double>>> brackets;

  int dim() const { return dim0 + dim1; }
  int deg(int i) const { return i < dim0 ? 0 : 1; }
  void set_bracket(int i, int j, int k, double c);
  /// Max residual of super skew-symmetry and the super Jacobi identity over
  /// all basis triples.
  double jacobi_residual() const;
};

/// Element with Grassmann coefficients; coefficient parity should match the
/// basis parity for elements of the even part of the scalar extension.
struct AlgVec {
  const LieSuperAlg* alg = nullptr;
  std::vector<GrassmannElement> coeff;

  static AlgVec zero(const LieSuperAlg& a, int ngens);
  AlgVec operator+(const AlgVec& o) const;
  AlgVec operator-(const AlgVec& o) const;
  AlgVec scaled(const GrassmannElement& s) const;
  AlgVec scaled(cplx s) const;
  bool approx_zero(double tol = 1e-12) const;
  double max_abs() const;
};

/// Graded bracket with the scalar-extension rule [aX, bY] = (-1)^{|X||b|} ab [X, Y].
AlgVec bracket(const AlgVec& a, const AlgVec& b);

/// Heisenberg superalgebra h_{2m|p,q} in normal form: basis c_1..c_2m (even),
/// e_1..e_{p+q} (odd, omega = +1 for the first p, -1 afterwards), Z.
struct HeisAlg {
  int m = 0, p = 0, q = 0;
  int eps = 1;     // sign of p - q (+1 when p >= q)
  int r = 0;       // hyperbolic rank: min(p, q)
  int sprime = 0;  // |p - q|
  LieSuperAlg lie;

  static HeisAlg make(int m, int p, int q);
  // LieSuperAlg layout: [c_0..c_{2m-1}, Z, e_0..e_{p+q-1}]
  int ci(int i) const { return i; }
  int zi() const { return 2 * m; }
  int ei(int a) const { return 2 * m + 1 + a; }
  double omega_even(int i, int j) const;  // on the c-basis
  double omega_odd(int a, int b) const;   // on the e-basis
};

/// Group element of the Heisenberg supergroup: coordinates over the (c, e)
/// basis with Grassmann scalars (even coordinates in A_0, odd in A_1) and a
/// central coordinate.
struct HeisElement {
  const HeisAlg* alg = nullptr;
  std::vector<GrassmannElement> xc;  // 2m even coordinates
  std::vector<GrassmannElement> xe;  // p+q odd coordinates
  GrassmannElement t{0};

  static HeisElement identity(const HeisAlg& a, int ngens);
  void check_parities() const;
};

/// Symplectic pairing on group coordinates (scalar-extension convention).
GrassmannElement heis_omega(const HeisElement& a, const HeisElement& b);

HeisElement group_mul(const HeisElement& a, const HeisElement& b);
HeisElement group_inv(const HeisElement& a);

/// Splits g = g0 * exp(X) with g0 free of odd coordinates and X in the odd
/// sector with A_1 coefficients; for the Heisenberg group the factors are the
/// coordinate split with equal central part.
std::pair<HeisElement, HeisElement> wod_split(const HeisElement& g);

/// Algebra element X + a Z in the same coordinates.
struct HeisAlgVec {
  const HeisAlg* alg = nullptr;
  std::vector<GrassmannElement> xc, xe;
  GrassmannElement z{0};
};

HeisAlgVec adjoint(const HeisElement& g, const HeisAlgVec& X);
/// Coadjoint action on the flat coordinates of X + a Z.
HeisAlgVec coadjoint(const HeisElement& g, const HeisAlgVec& mu);

}  // namespace superheis
