#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "superheis/gauss_poly_phase.hpp"
#include "superheis/grassmann.hpp"

namespace superheis {

/// Superfunction: finite Grassmann expansion over `ngens` odd generators with
/// GaussPolyPhase coefficients in `nvars` even variables. Models functions on
/// R^{m|n} as well as Grassmann-parameter-valued states; the caller decides
/// which generators are function variables and which are external parameters.
class SuperFun {
 public:
  using Mask = std::uint32_t;

  SuperFun() : nvars_(0), ngens_(0) {}
  SuperFun(int nvars, int ngens) : nvars_(nvars), ngens_(ngens) {}

  static SuperFun zero(int nvars, int ngens) { return SuperFun(nvars, ngens); }
  static SuperFun constant(int nvars, int ngens, cplx c);
  static SuperFun generator(int nvars, int ngens, int g);
  static SuperFun from_even(int ngens, const GaussPolyPhase& f);
  static SuperFun from_grassmann(int nvars, const GrassmannElement& a);

  int nvars() const { return nvars_; }
  int ngens() const { return ngens_; }
  const std::map<Mask, GaussPolyPhase>& comps() const { return comps_; }
  GaussPolyPhase comp(Mask m) const;
  bool is_zero() const { return comps_.empty(); }
  void set_comp(Mask m, GaussPolyPhase f);
  void add_comp(Mask m, const GaussPolyPhase& f);

  SuperFun operator+(const SuperFun& o) const;
  SuperFun operator-(const SuperFun& o) const;
  SuperFun operator*(const SuperFun& o) const;
  SuperFun operator*(cplx c) const;
  SuperFun operator-() const { return *this * cplx(-1.0); }

  /// Parity of the Grassmann expansion: 0 even, 1 odd, -1 mixed (0 for zero).
  int parity() const;

  /// Antilinear conjugation; `pairing[g]` names the conjugate generator of g
  /// (equal to g for real generators).
  SuperFun conjugate(const std::vector<int>& pairing) const;

  /// Left derivative with respect to generator g.
  SuperFun derive_odd(int g) const;
  /// Berezin integration: apply left derivatives for the listed generators in
  /// order (first entry acts first).
  SuperFun berezin(const std::vector<int>& order) const;

  SuperFun derive_even(int var) const;
  SuperFun mul_coord(int var) const;
  SuperFun integrate_even(const std::vector<int>& vars) const;

  /// Affine substitution on the even variables (variable count preserved).
  SuperFun pullback_even(const Eigen::MatrixXcd& L, const Eigen::VectorXcd& t) const;

  /// Simultaneous substitution x_i -> x_i - shift_i for the listed even
  /// variables. Shift expressions must be free of Gaussian factors; their
  /// body components must be affine, nilpotent parts are Taylor-expanded.
  SuperFun translate_even(const std::vector<std::pair<int, SuperFun>>& shifts) const;

  /// Simultaneous substitution g -> images[g] for generators listed in the
  /// map (other generators map to themselves). Images must be odd.
  SuperFun subst_odd(const std::map<int, SuperFun>& images) const;

  /// Evaluate even variables at a point; returns the Grassmann expansion.
  std::map<Mask, cplx> eval_even(const Eigen::VectorXcd& x) const;
  /// For a function with no remaining even dependence, the Grassmann value.
  GrassmannElement as_grassmann() const;

  double max_coeff() const;
  void compress(double tol = 1e-12);

 private:
  int nvars_, ngens_;
  std::map<Mask, GaussPolyPhase> comps_;
};

SuperFun operator*(cplx c, const SuperFun& f);

/// exp of an even superfunction whose body component is a polynomial of
/// degree <= 2 and whose higher components are nilpotent.
SuperFun exp_superfun(const SuperFun& e);

/// Parity sign helper: (-1)^{popcount(m)}.
inline int mask_sign(std::uint32_t m) { return (std::popcount(m) & 1) ? -1 : 1; }

}  // namespace superheis
