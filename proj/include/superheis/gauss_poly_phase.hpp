#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "superheis/grassmann.hpp"

namespace superheis {

struct NonIntegrable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sparse multivariate polynomial over the complex numbers (internal helper).
struct Poly {
  int nvars = 0;
  std::map<std::vector<int>, cplx> terms;

  static Poly zero(int nvars) { return Poly{nvars, {}}; }
  static Poly constant(int nvars, cplx c);
  static Poly variable(int nvars, int i);

  Poly operator+(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(cplx c) const;
  Poly derivative(int i) const;
  void add(const std::vector<int>& mono, cplx c);
  /// Substitute each variable by an affine expression in new variables.
  Poly subst_affine(int new_nvars, const std::vector<Poly>& images) const;
  int degree() const;
};

/// One term c * x^nu * exp(-x.Q x + b.x) on nvars real variables.
struct GppTerm {
  cplx c;
  std::vector<int> nu;
  Eigen::MatrixXcd Q;  // symmetric
  Eigen::VectorXcd b;
};

/// Finite sums of Gaussian-polynomial-phase terms. Closed under products,
/// affine substitution, differentiation, coordinate multiplication and
/// Gaussian integration over any subset of variables (quadratic phases with
/// vanishing real part are allowed as factors; integrability is checked only
/// when a variable is actually integrated).
class GaussPolyPhase {
 public:
  explicit GaussPolyPhase(int nvars = 0) : nvars_(nvars) {}

  static GaussPolyPhase zero(int nvars) { return GaussPolyPhase(nvars); }
  static GaussPolyPhase constant(int nvars, cplx c);
  static GaussPolyPhase monomial(int nvars, const std::vector<int>& nu, cplx c = 1.0);
  static GaussPolyPhase gaussian(int nvars, const Eigen::MatrixXcd& Q, const Eigen::VectorXcd& b,
                                 cplx c = 1.0);
  static GaussPolyPhase from_poly(const Poly& p);

  int nvars() const { return nvars_; }
  const std::vector<GppTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(GppTerm t);

  GaussPolyPhase operator+(const GaussPolyPhase& o) const;
  GaussPolyPhase operator-(const GaussPolyPhase& o) const;
  GaussPolyPhase operator*(const GaussPolyPhase& o) const;
  GaussPolyPhase operator*(cplx c) const;
  GaussPolyPhase operator-() const { return *this * cplx(-1.0); }

  GaussPolyPhase conjugate() const;
  GaussPolyPhase derivative(int var) const;
  GaussPolyPhase mul_coord(int var) const;

  /// f(x) -> f(L x + t) where L is nvars x new_nvars.
  GaussPolyPhase pullback(const Eigen::MatrixXcd& L, const Eigen::VectorXcd& t) const;

  /// Integrate out the listed variables (joint Gaussian integration). The
  /// variable count is preserved; integrated variables no longer occur.
  /// Throws NonIntegrable unless Re Q restricted to them is positive definite
  /// for every term.
  GaussPolyPhase integrate(const std::vector<int>& vars) const;

  cplx eval(const Eigen::VectorXcd& x) const;
  /// Extract the scalar value of a function of no remaining variables.
  cplx as_constant() const;

  /// Merge structurally identical terms and drop zero coefficients.
  void compress(double tol = 1e-12);
  double max_coeff() const;

  /// True if every term is a pure polynomial (Q = 0, b = 0).
  bool is_polynomial() const;
  /// If polynomial of degree <= 2, decompose as c0 + b.x - x.Q x (exponent
  /// convention), so that exp(this) = gaussian(Q, b)*exp(c0). Throws otherwise.
  void quadratic_parts(Eigen::MatrixXcd& Q, Eigen::VectorXcd& b, cplx& c0) const;

 private:
  int nvars_;
  std::vector<GppTerm> terms_;
};

/// Principal square root of det(Q) for complex symmetric Q with eigenvalues in
/// the open right half-plane (continuous deformation from Re Q > 0).
cplx sqrt_det_right_halfplane(const Eigen::MatrixXcd& Q);

}  // namespace superheis
