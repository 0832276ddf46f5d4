#include "superheis/wigner.hpp"

#include <bit>

namespace superheis {

E0Frame E0Frame::make(const SchrodParams& par) {
  if (par.odd_case)
    throw std::invalid_argument("phase-space machinery requires even p+q");
  E0Frame fr;
  fr.par = par;
  fr.x = PhaseSpace::alloc(fr.amb, par.m, par.r, par.s, par.eps);
  return fr;
}

PhaseCoordExprs PhaseCoordExprs::identity(const Ambient& amb, const PhaseSpace& ps) {
  PhaseCoordExprs e;
  for (int i = 0; i < ps.m; ++i) {
    e.qv.push_back(amb.var(ps.qv[i]));
    e.pv.push_back(amb.var(ps.pv[i]));
  }
  for (int a = 0; a < ps.r; ++a) {
    e.qg.push_back(amb.gen(ps.qg[a]));
    e.pg.push_back(amb.gen(ps.pg[a]));
  }
  for (int j = 0; j < ps.s; ++j) {
    e.zg.push_back(amb.gen(ps.zg[j]));
    e.zbg.push_back(amb.gen(ps.zbg[j]));
  }
  return e;
}

PhaseCoordExprs PhaseCoordExprs::negated() const {
  PhaseCoordExprs e = *this;
  for (auto* v : {&e.qv, &e.pv, &e.qg, &e.pg, &e.zg, &e.zbg})
    for (auto& f : *v) f = -f;
  return e;
}

PhaseCoordExprs PhaseCoordExprs::minus(const PhaseCoordExprs& o) const {
  PhaseCoordExprs e = *this;
  auto sub = [](std::vector<SuperFun>& a, const std::vector<SuperFun>& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] = a[i] - b[i];
  };
  sub(e.qv, o.qv);
  sub(e.pv, o.pv);
  sub(e.qg, o.qg);
  sub(e.pg, o.pg);
  sub(e.zg, o.zg);
  sub(e.zbg, o.zbg);
  return e;
}

SuperFun substitute_phase(const SuperFun& f, const PhaseSpace& src, int dest_nvars,
                          int dest_ngens, const PhaseCoordExprs& to) {
  // destination expression for each source generator
  std::vector<SuperFun> gen_expr(f.ngens(), SuperFun::zero(dest_nvars, dest_ngens));
  for (int a = 0; a < src.r; ++a) {
    gen_expr[src.qg[a]] = to.qg[a];
    gen_expr[src.pg[a]] = to.pg[a];
  }
  for (int j = 0; j < src.s; ++j) {
    gen_expr[src.zg[j]] = to.zg[j];
    gen_expr[src.zbg[j]] = to.zbg[j];
  }
  // affine data of the even substitution
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(f.nvars(), dest_nvars);
  Eigen::VectorXcd t = Eigen::VectorXcd::Zero(f.nvars());
  auto fill_even = [&](int srcvar, const SuperFun& expr) {
    if (expr.comps().size() > 1 || (expr.comps().size() == 1 && !expr.comps().count(0)))
      throw std::logic_error("substitute_phase: even expression carries odd content");
    GaussPolyPhase body = expr.comp(0);
    if (!body.is_polynomial())
      throw std::logic_error("substitute_phase: even expression must be polynomial");
    for (auto& tm : body.terms()) {
      int deg = 0, which = -1;
      for (int v = 0; v < dest_nvars; ++v)
        for (int k = 0; k < tm.nu[v]; ++k) {
          ++deg;
          which = v;
        }
      if (deg == 0)
        t(srcvar) += tm.c;
      else if (deg == 1)
        L(srcvar, which) += tm.c;
      else
        throw std::logic_error("substitute_phase: even expression must be affine");
    }
  };
  for (int i = 0; i < src.m; ++i) {
    fill_even(src.qv[i], to.qv[i]);
    fill_even(src.pv[i], to.pv[i]);
  }

  SuperFun out = SuperFun::zero(dest_nvars, dest_ngens);
  for (auto& [mask, g] : f.comps()) {
    SuperFun term = SuperFun::from_even(dest_ngens, g.pullback(L, t));
    for (int gi = 0; gi < f.ngens(); ++gi)
      if (mask & (SuperFun::Mask(1) << gi)) term = term * gen_expr[gi];
    out = out + term;
  }
  return out;
}

SchrodCoords coords_from_exprs(const SchrodParams& par, const Ambient& amb,
                               const PhaseCoordExprs& e) {
  SchrodCoords c = SchrodCoords::zero(amb, par);
  for (int i = 0; i < par.m; ++i) {
    c.q[i] = e.qv[i];
    c.p[i] = e.pv[i];
  }
  for (int a = 0; a < par.r; ++a) {
    c.q[par.m + a] = e.qg[a];
    c.p[par.m + a] = e.pg[a];
  }
  for (int j = 0; j < par.s; ++j) {
    c.z[j] = e.zg[j];
    c.zb[j] = e.zbg[j];
  }
  return c;
}

SuperFun wigner_fn(const E0Frame& fr, const StateFactory& phi, const StateFactory& psi) {
  Ambient amb = fr.amb;  // copy: x slot first, then the state slot
  StateVars st = allocate_state(amb, fr.par);
  PhaseCoordExprs xc = PhaseCoordExprs::identity(amb, fr.x);
  SchrodCoords gx = coords_from_exprs(fr.par, amb, xc);
  SuperFun f = schrod_inner(fr.par, amb, st, phi(amb, st),
                            schrod_act(fr.par, st, gx, psi(amb, st)));
  // restrict to the frame sizes (content beyond the x slot must be gone)
  SuperFun out = SuperFun::zero(fr.amb.nvars, fr.amb.ngens);
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(amb.nvars, fr.amb.nvars);
  for (int i = 0; i < fr.amb.nvars; ++i) L(i, i) = 1.0;
  for (auto& [mask, g] : f.comps()) {
    if (mask >> fr.amb.ngens)
      throw std::logic_error("wigner_fn: state generator left after integration");
    out.add_comp(mask, g.pullback(L, Eigen::VectorXcd::Zero(amb.nvars)));
  }
  return out;
}

SuperFun wigner_eval(const E0Frame& fr, const SuperFun& f, int dest_nvars, int dest_ngens,
                     const PhaseCoordExprs& to) {
  return substitute_phase(f, fr.x, dest_nvars, dest_ngens, to);
}

SuperFun twisted_convolution(const E0Frame& fr, const SuperFun& f1, const SuperFun& f2) {
  // two-slot ambient: y (integrated) then x
  Ambient amb;
  PhaseSpace y = PhaseSpace::alloc(amb, fr.par.m, fr.par.r, fr.par.s, fr.par.eps);
  PhaseSpace x = PhaseSpace::alloc(amb, fr.par.m, fr.par.r, fr.par.s, fr.par.eps);
  PhaseCoordExprs ye = PhaseCoordExprs::identity(amb, y);
  PhaseCoordExprs xe = PhaseCoordExprs::identity(amb, x);
  SuperFun a = substitute_phase(f1, fr.x, amb.nvars, amb.ngens, ye);
  SuperFun b = substitute_phase(f2, fr.x, amb.nvars, amb.ngens, xe.minus(ye));
  PhasePoint py = PhasePoint::symbolic(amb, y), px = PhasePoint::symbolic(amb, x);
  SuperFun phase = exp_superfun(omega_points(py, px, fr.par.eps) * cplx(0, 0.5 * fr.par.hbar));
  SuperFun integrand = a * b * phase;
  SuperFun val =
      integrand.integrate_even(y.even_vars()).berezin(y.berezin_order()) * y.measure_prefactor();
  // re-host on the canonical frame: x slot occupies the tail indices
  PhaseCoordExprs back;
  const Ambient& fa = fr.amb;
  for (int i = 0; i < fr.par.m; ++i) {
    back.qv.push_back(fa.var(fr.x.qv[i]));
    back.pv.push_back(fa.var(fr.x.pv[i]));
  }
  for (int a2 = 0; a2 < fr.par.r; ++a2) {
    back.qg.push_back(fa.gen(fr.x.qg[a2]));
    back.pg.push_back(fa.gen(fr.x.pg[a2]));
  }
  for (int j = 0; j < fr.par.s; ++j) {
    back.zg.push_back(fa.gen(fr.x.zg[j]));
    back.zbg.push_back(fa.gen(fr.x.zbg[j]));
  }
  return substitute_phase(val, x, fr.amb.nvars, fr.amb.ngens, back);
}

SuperFun e0_integrate(const E0Frame& fr, const SuperFun& f) {
  return f.integrate_even(fr.x.even_vars()).berezin(fr.x.berezin_order()) *
         fr.x.measure_prefactor();
}

cplx e0_integral_scalar(const E0Frame& fr, const SuperFun& f) {
  return e0_integrate(fr, f).comp(0).as_constant();
}

SuperFun apply_M(const StateVars& st, const SuperFun& f) {
  if (st.qv.empty()) return f;
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Identity(f.nvars(), f.nvars());
  for (int v : st.qv) L(v, v) = -1.0;
  return f.pullback_even(L, Eigen::VectorXcd::Zero(f.nvars()));
}

SuperFun apply_parity(const SchrodParams& par, const StateVars& st, const SuperFun& f) {
  SuperFun r = f;
  std::map<int, SuperFun> flip;
  for (int g : st.holo_gens(par))
    flip[g] = -SuperFun::generator(f.nvars(), f.ngens(), g);
  return f.subst_odd(flip);
}

ResolutionReport resolution_of_identity_check(const SchrodParams& par, const StateFactory& phi,
                                              const StateFactory& phip, const StateFactory& psip,
                                              const StateFactory& psi) {
  E0Frame fr = E0Frame::make(par);
  {
    // hypothesis: phi and psi must not depend on the holomorphic generators
    Ambient amb = fr.amb;
    StateVars st = allocate_state(amb, par);
    for (const StateFactory* f : {&phi, &psi}) {
      SuperFun v = (*f)(amb, st);
      for (auto& [mask, g] : v.comps())
        for (int j : st.zg)
          if (mask & (1u << j))
            throw std::invalid_argument("resolution check: state depends on zeta");
    }
  }
  SuperFun V1 = wigner_fn(fr, phi, phip);
  SuperFun V2 = wigner_fn(fr, psip, psi);
  PhaseCoordExprs xid = PhaseCoordExprs::identity(fr.amb, fr.x);
  SuperFun V1m = wigner_eval(fr, V1, fr.amb.nvars, fr.amb.ngens, xid.negated());
  cplx lhs = e0_integral_scalar(fr, V1m * V2);

  Ambient amb = fr.amb;
  StateVars st = allocate_state(amb, par);
  cplx ip1 = schrod_inner(par, amb, st, phi(amb, st), psi(amb, st)).comp(0).as_constant();
  cplx ip2 = schrod_inner(par, amb, st, psip(amb, st), apply_parity(par, st, phip(amb, st)))
                 .comp(0)
                 .as_constant();
  ResolutionReport rep;
  rep.lhs = lhs;
  rep.rhs = par.kappa() * ip1 * ip2;
  rep.residual = std::abs(rep.lhs - rep.rhs);
  return rep;
}

double wigner_composition_check(const SchrodParams& par, const StateFactory& phip,
                                const StateFactory& psi, const StateFactory& phi,
                                const StateFactory& psip) {
  E0Frame fr = E0Frame::make(par);
  SuperFun lhs = twisted_convolution(fr, wigner_fn(fr, phip, psi), wigner_fn(fr, phi, psip));
  Ambient amb = fr.amb;
  StateVars st = allocate_state(amb, par);
  cplx ip = schrod_inner(par, amb, st, phip(amb, st), psip(amb, st)).comp(0).as_constant();
  SuperFun rhs = wigner_fn(fr, phi,
                           [&](const Ambient& a, const StateVars& s) {
                             return apply_parity(par, s, psi(a, s));
                           }) *
                 (par.kappa() * ip);
  SuperFun diff = lhs - rhs;
  double res = 0;
  for (double pt : {0.0, 0.6, -1.1}) {
    Eigen::VectorXcd xx = Eigen::VectorXcd::Constant(fr.amb.nvars, pt);
    for (auto& [m, g] : diff.comps()) res = std::max(res, std::abs(g.eval(xx)));
  }
  return res;
}

}  // namespace superheis
