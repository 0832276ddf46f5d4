#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace superheis {

using cplx = std::complex<double>;

/// Thrown when a computation needs more odd generators than the algebra owns.
struct BudgetOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Element of the complex Grassmann algebra on N anticommuting generators.
///
/// Monomials are subsets of {0,...,N-1} stored as bitmasks with generators in
/// ascending index order; the empty subset is the body. All arithmetic is
/// exact at the monomial level (coefficients are complex doubles).
class GrassmannElement {
 public:
  using Mask = std::uint32_t;
  static constexpr int kMaxGenerators = 30;

  explicit GrassmannElement(int n_generators = 16);

  static GrassmannElement scalar(int n, cplx c);
  static GrassmannElement generator(int n, int i);
  static GrassmannElement monomial(int n, Mask m, cplx c = 1.0);

  int generators() const { return n_; }
  const std::map<Mask, cplx>& terms() const { return terms_; }
  cplx coeff(Mask m) const;
  cplx body() const { return coeff(0); }
  bool is_zero() const { return terms_.empty(); }
  bool is_nilpotent() const;
  int max_degree() const;
  /// 0 = even, 1 = odd, -1 = mixed or zero treated as even (0 for zero).
  int parity() const;

  GrassmannElement& add_term(Mask m, cplx c);

  GrassmannElement operator-() const;
  GrassmannElement operator+(const GrassmannElement& o) const;
  GrassmannElement operator-(const GrassmannElement& o) const;
  GrassmannElement operator*(const GrassmannElement& o) const;
  GrassmannElement operator*(cplx c) const;
  GrassmannElement& operator+=(const GrassmannElement& o);

  bool approx_equal(const GrassmannElement& o, double tol = 1e-12) const;
  double max_abs() const;

  std::string str() const;

  /// Sign (+1/-1) of reordering the concatenation a|b into ascending order;
  /// masks must be disjoint.
  static int merge_sign(Mask a, Mask b);

 private:
  int n_;
  std::map<Mask, cplx> terms_;
  void prune(Mask m);
};

GrassmannElement operator*(cplx c, const GrassmannElement& g);

/// Body map: coefficient of the empty monomial.
cplx gr_body(const GrassmannElement& a);

/// Complex conjugation: antilinear algebra homomorphism fixing the generators.
GrassmannElement gr_conj(const GrassmannElement& a);

/// Exponential of a nilpotent element (finite sum). Throws if the body is
/// nonzero and no truncation order is supplied.
GrassmannElement gr_exp(const GrassmannElement& a);
GrassmannElement gr_exp(const GrassmannElement& a, int truncation_order);

}  // namespace superheis
