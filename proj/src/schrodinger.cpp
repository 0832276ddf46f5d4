#include "superheis/schrodinger.hpp"

#include <bit>
#include <cmath>

#include "superheis/rng.hpp"

namespace superheis {

SchrodParams SchrodParams::make(int m, int p, int q, double hbar, int sigma) {
  if (hbar == 0.0) throw std::invalid_argument("hbar must be nonzero");
  SchrodParams par;
  par.m = m;
  par.p = p;
  par.q = q;
  par.hbar = hbar;
  par.odd_case = ((p + q) & 1) != 0;
  if (par.odd_case) {
    if (sigma != 0 && sigma != 1)
      throw std::invalid_argument("odd p+q requires a parity sigma in {0,1}");
    par.sigma = sigma;
  } else if (sigma != -1) {
    throw std::invalid_argument("sigma is only meaningful for odd p+q");
  }
  par.eps = (p >= q) ? 1 : -1;
  par.r = std::min(p, q);
  par.s = (std::abs(p - q) - (par.odd_case ? 1 : 0)) / 2;
  return par;
}

cplx SchrodParams::kappa() const { return kappa_hbar(m, r, s, eps, hbar); }

std::vector<int> StateVars::holo_gens(const SchrodParams& par) const {
  std::vector<int> g = qg;
  g.insert(g.end(), zg.begin(), zg.end());
  if (par.odd_case) g.push_back(tg);
  return g;
}

StateVars allocate_state(Ambient& amb, const SchrodParams& par) {
  StateVars st;
  st.qv = amb.add_vars(par.m);
  st.qg = amb.add_real_gens(par.r);
  for (int j = 0; j < par.s; ++j) {
    auto [z, zb] = amb.add_pair();
    st.zg.push_back(z);
    st.zbg.push_back(zb);
  }
  if (par.odd_case) {
    if (par.tau_real()) {
      st.tg = amb.add_real_gen();
    } else {
      auto [t, tb] = amb.add_pair();
      st.tg = t;
      st.tbg = tb;
    }
  }
  return st;
}

SchrodCoords SchrodCoords::zero(const Ambient& amb, const SchrodParams& par) {
  SchrodCoords c;
  c.q.assign(par.m + par.r, amb.zero());
  c.p.assign(par.m + par.r, amb.zero());
  c.z.assign(par.s, amb.zero());
  c.zb.assign(par.s, amb.zero());
  c.tau = amb.zero();
  c.t = amb.zero();
  return c;
}

SuperFun schrod_act(const SchrodParams& par, const StateVars& st, const SchrodCoords& g,
                    const SuperFun& phi) {
  int nvars = phi.nvars(), ngens = phi.ngens();
  auto var = [&](int i) {
    std::vector<int> nu(nvars, 0);
    nu[i] = 1;
    return SuperFun::from_even(ngens, GaussPolyPhase::monomial(nvars, nu));
  };
  auto gen = [&](int i) { return SuperFun::generator(nvars, ngens, i); };

  // phase exponent: t + sum (q/2 - q0) p + (eps/2) sum (z/2 - z0) zb
  //                 + (eps/2) tau tau0
  SuperFun ph = g.t;
  for (int i = 0; i < par.m; ++i)
    ph = ph + (g.q[i] * cplx(0.5) - var(st.qv[i])) * g.p[i];
  for (int a = 0; a < par.r; ++a)
    ph = ph + (g.q[par.m + a] * cplx(0.5) - gen(st.qg[a])) * g.p[par.m + a];
  for (int j = 0; j < par.s; ++j)
    ph = ph + (g.z[j] * cplx(0.5) - gen(st.zg[j])) * g.zb[j] * cplx(0.5 * par.eps);
  if (par.odd_case) ph = ph + g.tau * gen(st.tg) * cplx(0.5 * par.eps);

  // translated argument
  std::map<int, SuperFun> odd_shift;
  for (int a = 0; a < par.r; ++a) odd_shift[st.qg[a]] = gen(st.qg[a]) - g.q[par.m + a];
  for (int j = 0; j < par.s; ++j) odd_shift[st.zg[j]] = gen(st.zg[j]) - g.z[j];
  if (par.odd_case) odd_shift[st.tg] = gen(st.tg) - g.tau;
  SuperFun moved = phi.subst_odd(odd_shift);
  std::vector<std::pair<int, SuperFun>> even_shift;
  for (int i = 0; i < par.m; ++i) even_shift.emplace_back(st.qv[i], g.q[i]);
  if (par.m > 0) moved = moved.translate_even(even_shift);

  return exp_superfun(ph * cplx(0, par.hbar)) * moved;
}

SuperFun schrod_inner(const SchrodParams& par, const Ambient& amb, const StateVars& st,
                      const SuperFun& f, const SuperFun& g) {
  SuperFun w = amb.zero();
  for (int j = 0; j < par.s; ++j)
    w = w + amb.gen(st.zg[j]) * amb.gen(st.zbg[j]);
  int pairs = par.s;
  if (par.odd_case && !par.tau_real()) {
    w = w + amb.gen(st.tg) * amb.gen(st.tbg);
    ++pairs;
  }
  SuperFun integrand = f.conjugate(amb.conj) * g;
  if (pairs > 0) integrand = integrand * exp_superfun(w * cplx(0, 0.5 * par.hbar * par.eps));
  // measure: pairs first (zbar, z alternating), then real odd q's, then tau
  std::vector<int> order;
  for (int j = 0; j < par.s; ++j) {
    order.push_back(st.zbg[j]);
    order.push_back(st.zg[j]);
  }
  if (par.odd_case && !par.tau_real()) {
    order.push_back(st.tbg);
    order.push_back(st.tg);
  }
  for (int a = 0; a < par.r; ++a) order.push_back(st.qg[a]);
  if (par.odd_case && par.tau_real()) order.push_back(st.tg);
  SuperFun v = integrand.berezin(order);
  if (par.m > 0) v = v.integrate_even(st.qv);
  return v * std::pow(cplx(0, 2), pairs);
}

SuperFun schrod_omega(const SchrodParams& par, const SchrodCoords& x, const SchrodCoords& y) {
  SuperFun w;
  bool started = false;
  auto acc = [&](const SuperFun& f) {
    if (!started) {
      w = f;
      started = true;
    } else
      w = w + f;
  };
  for (size_t i = 0; i < x.q.size(); ++i) {
    acc(x.q[i] * y.p[i]);
    acc(-(y.q[i] * x.p[i]));
  }
  for (size_t j = 0; j < x.z.size(); ++j) {
    acc(x.z[j] * y.zb[j] * cplx(0.5 * par.eps));
    acc(x.zb[j] * y.z[j] * cplx(0.5 * par.eps));
  }
  if (par.odd_case) acc(x.tau * y.tau * cplx(double(par.eps)));
  if (!started) throw std::invalid_argument("schrod_omega: empty coordinates");
  return w;
}

SchrodCoords coords_add(const SchrodCoords& a, const SchrodCoords& b) {
  SchrodCoords c = a;
  for (size_t i = 0; i < c.q.size(); ++i) c.q[i] = c.q[i] + b.q[i];
  for (size_t i = 0; i < c.p.size(); ++i) c.p[i] = c.p[i] + b.p[i];
  for (size_t j = 0; j < c.z.size(); ++j) {
    c.z[j] = c.z[j] + b.z[j];
    c.zb[j] = c.zb[j] + b.zb[j];
  }
  c.tau = c.tau + b.tau;
  c.t = c.t + b.t;
  return c;
}

SuperFun SchrodingerRep::basis_state(const Ambient& a, const StateVars& s, int I) const {
  auto gens = s.holo_gens(par);
  SuperFun f = a.constant(1.0);
  for (size_t k = 0; k < gens.size(); ++k)
    if (I & (1 << k)) f = f * a.gen(gens[k]);
  return f;
}

Eigen::VectorXcd SchrodingerRep::state_vector(const StateVars& s, const SuperFun& f) const {
  auto gens = s.holo_gens(par);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim());
  for (auto& [mask, g] : f.comps()) {
    int I = 0;
    std::uint32_t rest = mask;
    for (size_t k = 0; k < gens.size(); ++k)
      if (mask & (1u << gens[k])) {
        I |= 1 << k;
        rest &= ~(1u << gens[k]);
      }
    if (rest != 0) throw std::logic_error("state_vector: stray generator in state");
    v(I) += g.as_constant();
  }
  return v;
}

Eigen::MatrixXcd extract_matrix(const SchrodParams& par, const StateVars& st,
                                const std::vector<SuperFun>& images, std::uint32_t param_mask) {
  auto gens = st.holo_gens(par);
  std::uint32_t state_mask = 0;
  for (int g : gens) state_mask |= 1u << g;
  int d = int(images.size());
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d, d);
  for (int in = 0; in < d; ++in)
    for (auto& [mask, f] : images[in].comps()) {
      if ((mask & ~state_mask) != param_mask) continue;
      int out = 0;
      for (size_t k = 0; k < gens.size(); ++k)
        if (mask & (1u << gens[k])) out |= 1 << k;
      M(out, in) += f.as_constant();
    }
  return M;
}

SchrodingerRep SchrodingerRep::build(int m, int p, int q, double hbar, int sigma) {
  SchrodingerRep R;
  R.par = SchrodParams::make(0, p, q, hbar, sigma);  // odd sector is m-independent
  R.par.m = m;
  R.theta = R.amb.add_real_gen();
  SchrodParams odd_par = R.par;
  odd_par.m = 0;
  R.st = allocate_state(R.amb, odd_par);

  int d = 1 << R.par.n_state_gens();
  // gram through the Berezin pairing
  Eigen::MatrixXcd G(d, d);
  std::vector<int> degs(d);
  for (int a = 0; a < d; ++a) {
    degs[a] = std::popcount(unsigned(a)) & 1;
    for (int b = 0; b < d; ++b) {
      SuperFun fa = R.basis_state(R.amb, R.st, a), fb = R.basis_state(R.amb, R.st, b);
      G(a, b) = schrod_inner(odd_par, R.amb, R.st, fa, fb).comp(0).as_constant();
    }
  }
  R.odd_space = HilbertSuper::make(degs, R.par.space_parity(), G);
  R.J_odd = fundamental_decomposition(R.odd_space).J;

  // direction operators via coefficient extraction
  auto images_for = [&](const SchrodCoords& g) {
    std::vector<SuperFun> im(d);
    for (int I = 0; I < d; ++I)
      im[I] = schrod_act(odd_par, R.st, g, R.basis_state(R.amb, R.st, I));
    return im;
  };
  SuperFun th = R.amb.gen(R.theta);
  auto dir_matrix = [&](auto&& fill) {
    SchrodCoords g = SchrodCoords::zero(R.amb, odd_par);
    fill(g);
    return extract_matrix(odd_par, R.st, images_for(g), 1u << R.theta);
  };
  for (int a = 0; a < R.par.r; ++a)
    R.pi_dir.push_back(dir_matrix([&](SchrodCoords& g) { g.q[a] = th; }));
  for (int a = 0; a < R.par.r; ++a)
    R.pi_dir.push_back(dir_matrix([&](SchrodCoords& g) { g.p[a] = th; }));
  for (int b = 0; b < 2 * R.par.s; ++b)
    R.pi_dir.push_back(dir_matrix([&](SchrodCoords& g) {
      if (b < R.par.s) {
        g.z[b] = th;
        g.zb[b] = th;
      } else {
        g.z[b - R.par.s] = th * cplx(0, 1);
        g.zb[b - R.par.s] = th * cplx(0, -1);
      }
    }));
  if (R.par.odd_case)
    R.pi_dir.push_back(dir_matrix([&](SchrodCoords& g) { g.tau = th; }));

  // normalized Clifford generators in +/- order
  std::vector<Eigen::MatrixXcd> plus, minus;
  double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < R.par.r; ++a) {
    plus.push_back((R.pi_dir[a] - R.pi_dir[R.par.r + a]) * inv_sqrt2);
    minus.push_back((R.pi_dir[a] + R.pi_dir[R.par.r + a]) * inv_sqrt2);
  }
  std::vector<Eigen::MatrixXcd> vgens;
  for (int b = 0; b < 2 * R.par.s; ++b) vgens.push_back(cplx(0, 1) * R.pi_dir[2 * R.par.r + b]);
  if (R.par.odd_case) vgens.push_back(cplx(0, 1) * R.pi_dir.back());
  if (R.par.eps == 1) {
    for (auto& v : vgens) plus.push_back(v);
  } else {
    // keep the definite block ahead of the hyperbolic minus block
    std::vector<Eigen::MatrixXcd> nm = vgens;
    nm.insert(nm.end(), minus.begin(), minus.end());
    minus = std::move(nm);
  }
  R.gamma = plus;
  R.gamma.insert(R.gamma.end(), minus.begin(), minus.end());
  R.centralZ = cplx(0, hbar) * Eigen::MatrixXcd::Identity(d, d);
  return R;
}

namespace {

double residual_superfun(const SuperFun& f) {
  if (f.nvars() == 0) {
    double v = 0;
    for (auto& [m, g] : f.comps()) v = std::max(v, std::abs(g.as_constant()));
    return v;
  }
  double v = 0;
  for (double pt : {0.0, 0.7, -1.3}) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Constant(f.nvars(), pt);
    for (auto& [m, g] : f.comps()) v = std::max(v, std::abs(g.eval(x)));
  }
  return v;
}

}  // namespace

double group_homomorphism_check(const SchrodParams& par, int trials, std::uint64_t seed) {
  Rng rng(seed);
  double res = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Ambient amb;
    std::vector<int> pool = amb.add_real_gens(6);
    SchrodParams sp = par;
    StateVars st = allocate_state(amb, sp);
    auto random_odd = [&]() {
      SuperFun f = amb.zero();
      for (int k = 0; k < 2; ++k)
        f = f + rng.crand() * amb.gen(pool[rng.uniform_int(0, 5)]);
      return f;
    };
    auto random_even = [&](bool with_body) {
      SuperFun f = amb.constant(with_body ? cplx(rng.uniform(-1, 1)) : cplx(0.0));
      f = f + rng.crand() * (amb.gen(pool[0]) * amb.gen(pool[rng.uniform_int(1, 5)]));
      return f;
    };
    auto random_coords = [&]() {
      SchrodCoords g = SchrodCoords::zero(amb, par);
      for (int i = 0; i < par.m; ++i) {
        g.q[i] = random_even(true);
        g.p[i] = random_even(true);
      }
      for (int a = 0; a < par.r; ++a) {
        g.q[par.m + a] = random_odd();
        g.p[par.m + a] = random_odd();
      }
      for (int j = 0; j < par.s; ++j) {
        g.z[j] = random_odd();
        g.zb[j] = random_odd();
      }
      if (par.odd_case) g.tau = random_odd();
      g.t = random_even(true);
      return g;
    };
    SchrodCoords x = random_coords(), y = random_coords();
    SuperFun phase = exp_superfun(schrod_omega(par, x, y) * cplx(0, 0.5 * par.hbar));
    SchrodCoords xy = coords_add(x, y);
    int d = 1 << par.n_state_gens();
    for (int I = 0; I < d; ++I) {
      SuperFun basis = amb.constant(1.0);
      auto gens = st.holo_gens(par);
      for (size_t k = 0; k < gens.size(); ++k)
        if (I & (1 << k)) basis = basis * amb.gen(gens[k]);
      SuperFun lhs = schrod_act(par, st, x, schrod_act(par, st, y, basis));
      SuperFun rhs = phase * schrod_act(par, st, xy, basis);
      res = std::max(res, residual_superfun(lhs - rhs));
    }
  }
  return res;
}

double odd_expansion_check(const SchrodingerRep& rep) {
  // U(x^odd) phi == exp(N) phi where N = sum theta_d pi_d lives in the algebra
  // of operator-valued Grassmann expansions (mask-merge sign convention)
  SchrodParams par = rep.par;
  par.m = 0;
  Ambient amb;
  int ndir = int(rep.pi_dir.size());
  std::vector<int> th = amb.add_real_gens(ndir);
  StateVars st = allocate_state(amb, par);
  SchrodCoords g = SchrodCoords::zero(amb, par);
  for (int a = 0; a < par.r; ++a) {
    g.q[a] = amb.gen(th[a]);
    g.p[a] = amb.gen(th[par.r + a]);
  }
  for (int b = 0; b < par.s; ++b) {
    g.z[b] = amb.gen(th[2 * par.r + b]) + cplx(0, 1) * amb.gen(th[2 * par.r + par.s + b]);
    g.zb[b] = amb.gen(th[2 * par.r + b]) + cplx(0, -1) * amb.gen(th[2 * par.r + par.s + b]);
  }
  if (par.odd_case) g.tau = amb.gen(th.back());

  int d = rep.dim();
  // exp of N in the mask-merge algebra
  std::map<std::uint32_t, Eigen::MatrixXcd> N, expN, pw;
  for (int k = 0; k < ndir; ++k) N[1u << th[k]] = rep.pi_dir[k];
  expN[0] = Eigen::MatrixXcd::Identity(d, d);
  pw = expN;
  double fact = 1.0;
  for (int order = 1; order <= ndir + 1; ++order) {
    std::map<std::uint32_t, Eigen::MatrixXcd> nxt;
    for (auto& [ma, Ma] : pw)
      for (auto& [mb, Mb] : N) {
        if (ma & mb) continue;
        double sgn = GrassmannElement::merge_sign(ma, mb);
        auto [it, ins] = nxt.try_emplace(ma | mb, Eigen::MatrixXcd::Zero(d, d));
        it->second += sgn * Ma * Mb;
      }
    if (nxt.empty()) break;
    pw = nxt;
    fact *= order;
    for (auto& [m, M] : pw) {
      auto [it, ins] = expN.try_emplace(m, Eigen::MatrixXcd::Zero(d, d));
      it->second += M / fact;
    }
  }

  // compare with the coefficient extraction of the symbolic action
  std::vector<SuperFun> images(d);
  for (int I = 0; I < d; ++I)
    images[I] = schrod_act(par, st, g, rep.basis_state(amb, st, I));
  double res = 0;
  for (std::uint32_t mask = 0; mask < (1u << ndir); ++mask) {
    std::uint32_t amask = 0;
    for (int k = 0; k < ndir; ++k)
      if (mask & (1u << k)) amask |= 1u << th[k];
    Eigen::MatrixXcd got = extract_matrix(par, st, images, amask);
    Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(d, d);
    auto it = expN.find(amask);
    if (it != expN.end()) want = it->second;
    res = std::max(res, (got - want).cwiseAbs().maxCoeff());
  }
  return res;
}

CliffordReport clifford_structure(const SchrodingerRep& rep) {
  if (rep.par.odd_case) throw std::invalid_argument("clifford_structure requires even p+q");
  CliffordReport rp;
  int n = rep.par.p + rep.par.q;
  int d = rep.dim();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double w = (a == b) ? (a < rep.par.p ? 1.0 : -1.0) : 0.0;
      Eigen::MatrixXcd anti = rep.gamma[a] * rep.gamma[b] + rep.gamma[b] * rep.gamma[a] -
                              cplx(0, rep.par.hbar * w) * Eigen::MatrixXcd::Identity(d, d);
      rp.relations_residual = std::max(rp.relations_residual, anti.cwiseAbs().maxCoeff());
    }
  // rank of the monomial span
  int nmono = 1 << n;
  Eigen::MatrixXcd span(nmono, d * d);
  for (int Smask = 0; Smask < nmono; ++Smask) {
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(d, d);
    for (int a = 0; a < n; ++a)
      if (Smask & (1 << a)) prod = prod * rep.gamma[a];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) span(Smask, i * d + j) = prod(i, j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(span);
  double top = svd.singularValues()(0);
  rp.span_rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-10 * top) ++rp.span_rank;
  rp.full_rank = nmono;
  rp.surjective = (rp.span_rank == d * d) && (rp.span_rank == nmono);
  return rp;
}

RepMats rep_mats(const SchrodingerRep& rep) {
  RepMats r;
  r.space = rep.odd_space;
  r.ops = rep.gamma;
  r.hbar = rep.par.hbar;
  return r;
}

std::vector<Eigen::MatrixXcd> intertwiner_space(const RepMats& a, const RepMats& b, int degree,
                                                double tol) {
  if (std::abs(a.hbar - b.hbar) > 1e-14) return {};
  if (a.ops.size() != b.ops.size())
    throw std::invalid_argument("intertwiner_space: generator count mismatch");
  int d1 = a.space.dim(), d2 = b.space.dim();
  // unknown entries: T(i,j) with deg2(i)+deg1(j) = degree (mod 2)
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < d2; ++i)
    for (int j = 0; j < d1; ++j)
      if (((b.space.degs[i] + a.space.degs[j]) & 1) == degree) slots.emplace_back(i, j);
  if (slots.empty()) return {};
  int nu = int(slots.size());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(int(a.ops.size()) * d2 * d1, nu);
  int row0 = 0;
  for (size_t k = 0; k < a.ops.size(); ++k) {
    for (int u = 0; u < nu; ++u) {
      auto [i, j] = slots[u];
      // (B_k T - T A_k)(r, c): contribution of T(i,j)
      for (int r = 0; r < d2; ++r)
        A(row0 + r * d1 + j, u) += b.ops[k](r, i);
      for (int c = 0; c < d1; ++c)
        A(row0 + i * d1 + c, u) -= a.ops[k](j, c);
    }
    row0 += d2 * d1;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
  double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  std::vector<Eigen::MatrixXcd> basis;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol * std::max(1.0, top)) ++rank;
  for (int k = rank; k < nu; ++k) {
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(d2, d1);
    for (int u = 0; u < nu; ++u) T(slots[u].first, slots[u].second) = svd.matrixV()(u, k);
    basis.push_back(T);
  }
  return basis;
}

std::optional<Eigen::MatrixXcd> superunitary_scaling(const RepMats& a, const RepMats& b,
                                                     const Eigen::MatrixXcd& T, double tol) {
  GradedOperator op{T, 0};
  GradedOperator dag = superadjoint(a.space, b.space, op);
  Eigen::MatrixXcd TdT = dag.mat * T;
  cplx c = TdT.trace() / double(a.space.dim());
  if ((TdT - c * Eigen::MatrixXcd::Identity(a.space.dim(), a.space.dim())).cwiseAbs().maxCoeff() >
      tol * std::max(1.0, std::abs(c)))
    return std::nullopt;
  if (!(c.real() > tol) || std::abs(c.imag()) > tol * std::max(1.0, c.real()))
    return std::nullopt;
  Eigen::MatrixXcd scaled = T / std::sqrt(c.real());
  if (superunitarity_residual(a.space, b.space, GradedOperator{scaled, 0}) > 1e-8)
    return std::nullopt;
  return scaled;
}

TensorDescendReport tensor_descend(const SchrodingerRep& A, const SchrodingerRep& B) {
  if (std::abs(A.par.hbar - B.par.hbar) > 1e-14)
    throw std::invalid_argument("tensor_descend requires equal parameters");
  TensorDescendReport rep;
  HilbertSuper hs = tensor(A.odd_space, B.odd_space);
  // combined generators: A's act as gamma ox 1, B's as 1 ox gamma
  RepMats t;
  t.space = hs;
  t.hbar = A.par.hbar;
  auto push = [&](const Eigen::MatrixXcd& M, const HilbertSuper& which, bool left) {
    GradedOperator op{M, 1};
    GradedOperator one0{Eigen::MatrixXcd::Identity(left ? B.dim() : A.dim(),
                                                   left ? B.dim() : A.dim()),
                        0};
    t.ops.push_back(left ? tensor_op(A.odd_space, B.odd_space, op, one0).mat
                         : tensor_op(A.odd_space, B.odd_space, one0, op).mat);
    (void)which;
  };
  // + blocks then - blocks, A before B inside each block
  for (int a = 0; a < A.par.p; ++a) push(A.gamma[a], A.odd_space, true);
  for (int b = 0; b < B.par.p; ++b) push(B.gamma[b], B.odd_space, false);
  for (int a = 0; a < A.par.q; ++a) push(A.gamma[A.par.p + a], A.odd_space, true);
  for (int b = 0; b < B.par.q; ++b) push(B.gamma[B.par.p + b], B.odd_space, false);

  int sigma = -1;
  if (((A.par.p + B.par.p + A.par.q + B.par.q) & 1) != 0)
    sigma = (A.par.space_parity() + B.par.space_parity()) & 1;
  SchrodingerRep target = SchrodingerRep::build(0, A.par.p + B.par.p, A.par.q + B.par.q,
                                                A.par.hbar, sigma);
  RepMats tm = rep_mats(target);
  // intertwiners from the target into the tensor product measure multiplicity
  auto from_target = intertwiner_space(tm, t, 0);
  rep.multiplicity = int(from_target.size());
  auto basis = intertwiner_space(t, tm, 0);
  for (auto& T : basis) {
    auto scaled = superunitary_scaling(t, tm, T);
    if (scaled) {
      rep.equivalent = true;
      rep.residual = superunitarity_residual(t.space, tm.space, GradedOperator{*scaled, 0});
      return rep;
    }
  }
  if (rep.multiplicity > 1) {
    // the embedded copies must jointly fill the tensor space
    int dt = target.dim(), dT = t.space.dim();
    Eigen::MatrixXcd all(dT, dt * rep.multiplicity);
    for (int k = 0; k < rep.multiplicity; ++k) all.middleCols(k * dt, dt) = from_target[k];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(all);
    rep.spans = svd.singularValues()(dT - 1) > 1e-10 * svd.singularValues()(0);
  }
  return rep;
}

}  // namespace superheis
