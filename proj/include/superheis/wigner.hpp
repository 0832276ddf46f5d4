#pragma once

#include <functional>

#include "superheis/schrodinger.hpp"

namespace superheis {

/// Canonical single-slot frame for functions on the flat phase space: the
/// coordinates occupy the leading variables/generators of the ambient.
struct E0Frame {
  SchrodParams par;
  Ambient amb;
  PhaseSpace x;
  static E0Frame make(const SchrodParams& par);
};

/// Builds a state in a given ambient/state slot.
using StateFactory = std::function<SuperFun(const Ambient&, const StateVars&)>;

/// Coordinate expressions for one phase-space slot.
struct PhaseCoordExprs {
  std::vector<SuperFun> qv, pv;  // m even expressions each
  std::vector<SuperFun> qg, pg;  // r odd expressions
  std::vector<SuperFun> zg, zbg;
  static PhaseCoordExprs identity(const Ambient& amb, const PhaseSpace& ps);
  PhaseCoordExprs negated() const;
  PhaseCoordExprs minus(const PhaseCoordExprs& o) const;
};

/// Substitute the coordinates of `src` by expressions (affine even bodies).
SuperFun substitute_phase(const SuperFun& f, const PhaseSpace& src, int dest_nvars,
                          int dest_ngens, const PhaseCoordExprs& to);

/// Group coordinates of a phase-space slot (central part zero).
SchrodCoords coords_from_exprs(const SchrodParams& par, const Ambient& amb,
                               const PhaseCoordExprs& e);

/// Wigner matrix coefficient V(phi,psi)(x) = <phi, U(x) psi> as a function on
/// the canonical frame.
SuperFun wigner_fn(const E0Frame& fr, const StateFactory& phi, const StateFactory& psi);

/// Evaluate a canonical-frame function on coordinate expressions in another
/// ambient (used for arguments like x - y or -x).
SuperFun wigner_eval(const E0Frame& fr, const SuperFun& f, int dest_nvars, int dest_ngens,
                     const PhaseCoordExprs& to);

/// Twisted convolution of two canonical-frame functions.
SuperFun twisted_convolution(const E0Frame& fr, const SuperFun& f1, const SuperFun& f2);

/// Full invariant integral over the phase space; other content passes through.
SuperFun e0_integrate(const E0Frame& fr, const SuperFun& f);
cplx e0_integral_scalar(const E0Frame& fr, const SuperFun& f);

/// Sign-flip operators on states: M negates the even variables only, the
/// parity operator negates every odd state generator.
SuperFun apply_M(const StateVars& st, const SuperFun& f);
SuperFun apply_parity(const SchrodParams& par, const StateVars& st, const SuperFun& f);

struct ResolutionReport {
  cplx lhs, rhs;
  double residual;
};
/// Residual of the resolution of the identity
/// int dx V(phi,phi')(-x) V(psi',psi)(x) = kappa <phi,psi> <psi', P phi'> for
/// phi, psi free of holomorphic generators.
ResolutionReport resolution_of_identity_check(const SchrodParams& par, const StateFactory& phi,
                                              const StateFactory& phip, const StateFactory& psip,
                                              const StateFactory& psi);

/// Residual of the composition law
/// V(phi',psi) * V(phi,psi') = kappa <phi',psi'> V(phi, P psi).
double wigner_composition_check(const SchrodParams& par, const StateFactory& phip,
                                const StateFactory& psi, const StateFactory& phi,
                                const StateFactory& psip);

}  // namespace superheis
