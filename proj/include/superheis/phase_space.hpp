#pragma once

#include <utility>
#include <vector>

#include "superheis/superfun.hpp"

namespace superheis {

/// Allocator for the even variables and odd generators of a computation.
/// Generators carry a conjugation involution (real generators are fixed,
/// complex pairs are swapped).
struct Ambient {
  int nvars = 0;
  int ngens = 0;
  std::vector<int> conj;

  int add_var() { return nvars++; }
  std::vector<int> add_vars(int k) {
    std::vector<int> v(k);
    for (int i = 0; i < k; ++i) v[i] = add_var();
    return v;
  }
  int add_real_gen() {
    conj.push_back(ngens);
    return ngens++;
  }
  std::vector<int> add_real_gens(int k) {
    std::vector<int> v(k);
    for (int i = 0; i < k; ++i) v[i] = add_real_gen();
    return v;
  }
  std::pair<int, int> add_pair() {
    int g = ngens++, gb = ngens++;
    conj.push_back(gb);
    conj.push_back(g);
    return {g, gb};
  }

  SuperFun zero() const { return SuperFun::zero(nvars, ngens); }
  SuperFun constant(cplx c) const { return SuperFun::constant(nvars, ngens, c); }
  SuperFun gen(int g) const { return SuperFun::generator(nvars, ngens, g); }
  SuperFun var(int i) const {
    std::vector<int> nu(nvars, 0);
    nu[i] = 1;
    return SuperFun::from_even(ngens, GaussPolyPhase::monomial(nvars, nu));
  }
};

/// One copy of the flat phase-space coordinates (q, p, zeta) inside an
/// ambient: m even q's and p's, r odd q's and p's, s complex odd pairs.
struct PhaseSpace {
  int m = 0, r = 0, s = 0;
  int eps = 1;
  std::vector<int> qv, pv;   // even variable indices (size m each)
  std::vector<int> qg, pg;   // odd generator indices (size r each)
  std::vector<int> zg, zbg;  // zeta / conjugate pair indices (size s each)

  static PhaseSpace alloc(Ambient& a, int m, int r, int s, int eps) {
    PhaseSpace ps;
    ps.m = m;
    ps.r = r;
    ps.s = s;
    ps.eps = eps;
    ps.qv = a.add_vars(m);
    ps.pv = a.add_vars(m);
    ps.qg = a.add_real_gens(r);
    ps.pg = a.add_real_gens(r);
    for (int j = 0; j < s; ++j) {
      auto [z, zb] = a.add_pair();
      ps.zg.push_back(z);
      ps.zbg.push_back(zb);
    }
    return ps;
  }

  int odd_dim() const { return 2 * r + 2 * s; }

  /// Berezin order for the invariant measure dx = (2i)^s dq dp dzeta dzetabar
  /// (rightmost differential acts first).
  std::vector<int> berezin_order() const {
    std::vector<int> o;
    for (int j = 0; j < s; ++j) {
      o.push_back(zbg[j]);
      o.push_back(zg[j]);
    }
    for (int a = 0; a < r; ++a) o.push_back(pg[a]);
    for (int a = 0; a < r; ++a) o.push_back(qg[a]);
    return o;
  }
  std::vector<int> even_vars() const {
    std::vector<int> v = qv;
    v.insert(v.end(), pv.begin(), pv.end());
    return v;
  }
  cplx measure_prefactor() const { return std::pow(cplx(0, 2), s); }
};

/// Coordinate expressions of a group-element slot; entries are superfunctions
/// in an ambient space. Used to feed representations with body, nilpotent or
/// fully symbolic coordinates.
struct PhasePoint {
  std::vector<SuperFun> q, p;      // length m + r (even then odd coordinates)
  std::vector<SuperFun> z, zb;     // length s
  SuperFun tau;                    // odd-dimension extra coordinate (optional)
  SuperFun t;                      // central coordinate

  static PhasePoint symbolic(const Ambient& a, const PhaseSpace& ps,
                             bool with_t = false, int tvar = -1) {
    PhasePoint g;
    for (int i = 0; i < ps.m; ++i) g.q.push_back(a.var(ps.qv[i]));
    for (int i = 0; i < ps.r; ++i) g.q.push_back(a.gen(ps.qg[i]));
    for (int i = 0; i < ps.m; ++i) g.p.push_back(a.var(ps.pv[i]));
    for (int i = 0; i < ps.r; ++i) g.p.push_back(a.gen(ps.pg[i]));
    for (int j = 0; j < ps.s; ++j) {
      g.z.push_back(a.gen(ps.zg[j]));
      g.zb.push_back(a.gen(ps.zbg[j]));
    }
    g.tau = a.zero();
    g.t = with_t ? a.var(tvar) : a.zero();
    return g;
  }
};

/// omega(x, y) on coordinate expressions: sum_i (q_i p'_i - q'_i p_i)
/// + (eps/2) sum_a (z_a zb'_a + zb_a z'_a) [+ eps tau tau' when present].
SuperFun omega_points(const PhasePoint& x, const PhasePoint& y, int eps);

/// kappa_hbar = (2 pi / hbar)^m (i hbar)^r (eps hbar)^s (-1)^{r(r+1)/2}.
cplx kappa_hbar(int m, int r, int s, int eps, double hbar);

/// Report from verifying the three delta-type integral identities on a seeded
/// family of Gaussian superfunctions.
struct DiracReport {
  double residual_qp = 0;     // iterated q/p Fourier identity
  double residual_zeta = 0;   // holomorphic pair identity
  double residual_omega = 0;  // full symplectic double integral
  double max_residual() const;
};
DiracReport dirac_identities_check(int m, int r, int s, int eps, double hbar,
                                   std::uint64_t seed = 12345, int trials = 4);

}  // namespace superheis
