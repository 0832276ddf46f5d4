#include "superheis/phase_space.hpp"

#include <cmath>
#include <numbers>

#include "superheis/rng.hpp"

namespace superheis {

namespace {
cplx ipow(cplx z, int k) {
  cplx r = 1.0;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}
}  // namespace

SuperFun omega_points(const PhasePoint& x, const PhasePoint& y, int eps) {
  if (x.q.size() != y.q.size() || x.z.size() != y.z.size())
    throw std::invalid_argument("omega_points: coordinate mismatch");
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
  for (size_t a = 0; a < x.z.size(); ++a) {
    acc(x.z[a] * y.zb[a] * cplx(0.5 * eps));
    acc(x.zb[a] * y.z[a] * cplx(0.5 * eps));
  }
  if (!x.tau.is_zero() || !y.tau.is_zero()) acc(x.tau * y.tau * cplx(double(eps)));
  if (!started) throw std::invalid_argument("omega_points: empty coordinates");
  return w;
}

cplx kappa_hbar(int m, int r, int s, int eps, double hbar) {
  cplx k = ipow(cplx(2.0 * std::numbers::pi / hbar), m);
  k *= ipow(cplx(0.0, hbar), r);
  k *= ipow(cplx(eps * hbar), s);
  if (((r * (r + 1)) / 2) & 1) k = -k;
  return k;
}

double DiracReport::max_residual() const {
  return std::max({residual_qp, residual_zeta, residual_omega});
}

namespace {

// Random Schwartz-class function of the q-slot of a phase space: Gaussian
// times optional coordinate factors on the even variables, arbitrary
// Grassmann expansion in the odd q-generators.
SuperFun random_q_function(Rng& rng, const Ambient& amb, const std::vector<int>& vars,
                           const std::vector<int>& gens) {
  int nv = amb.nvars, ng = amb.ngens;
  int m = int(vars.size());
  Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(nv, nv);
  if (m > 0) {
    Eigen::MatrixXd A(m, m), B(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        A(i, j) = rng.uniform(-1, 1);
        B(i, j) = rng.uniform(-0.3, 0.3);
      }
    Eigen::MatrixXd Re = A.transpose() * A / m + 0.4 * Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd Im = 0.5 * (B + B.transpose());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) Q(vars[i], vars[j]) = cplx(Re(i, j), Im(i, j));
  }
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(nv);
  for (int i = 0; i < m; ++i) b(vars[i]) = rng.crand(0.7);
  GaussPolyPhase g = GaussPolyPhase::gaussian(nv, Q, b, rng.crand(1.0) + cplx(0.3));

  SuperFun f = SuperFun::from_even(ng, g);
  SuperFun expansion = SuperFun::constant(nv, ng, 1.0);
  for (int gi : gens) {
    SuperFun factor = SuperFun::constant(nv, ng, 1.0) + rng.crand() * SuperFun::generator(nv, ng, gi);
    expansion = expansion * factor;
  }
  return f * expansion;
}

cplx value_at_zero(const SuperFun& f) {
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(f.nvars());
  return f.comp(0).eval(z);
}

}  // namespace

DiracReport dirac_identities_check(int m, int r, int s, int eps, double hbar, std::uint64_t seed,
                                   int trials) {
  DiracReport rep;
  Rng rng(seed);

  for (int trial = 0; trial < trials; ++trial) {
    // (1) iterated Fourier identity on the q/p block
    {
      Ambient amb;
      PhaseSpace x = PhaseSpace::alloc(amb, m, r, 0, eps);
      PhasePoint gx = PhasePoint::symbolic(amb, x);
      SuperFun phi = random_q_function(rng, amb, x.qv, x.qg);
      SuperFun qp = amb.constant(0.0);
      {
        bool started = false;
        for (size_t i = 0; i < gx.q.size(); ++i) {
          SuperFun t = gx.q[i] * gx.p[i];
          qp = started ? qp + t : t;
          started = true;
        }
        if (!started) qp = amb.constant(0.0);
      }
      SuperFun integrand = exp_superfun(qp * cplx(0, hbar)) * phi;
      SuperFun val = integrand.integrate_even(x.qv).integrate_even(x.pv).berezin(
          x.berezin_order());
      cplx lhs = val.comp(0).as_constant();
      cplx rhs = kappa_hbar(m, r, s, eps, hbar) / ipow(cplx(eps * hbar), s) * value_at_zero(phi);
      rep.residual_qp = std::max(rep.residual_qp, std::abs(lhs - rhs));
    }
    // (2) holomorphic pair identity
    {
      Ambient amb;
      PhaseSpace x = PhaseSpace::alloc(amb, 0, 0, s, eps);
      SuperFun phi = amb.constant(rng.crand() + cplx(0.5));
      for (int j = 0; j < s; ++j)
        phi = phi * (amb.constant(1.0) + rng.crand() * amb.gen(x.zg[j]));
      SuperFun w = amb.constant(0.0);
      for (int j = 0; j < s; ++j) w = w + amb.gen(x.zg[j]) * amb.gen(x.zbg[j]);
      SuperFun integrand = exp_superfun(w * cplx(0, 0.5 * hbar * eps)) * phi;
      SuperFun val = integrand.berezin(x.berezin_order()) * x.measure_prefactor();
      cplx lhs = val.comp(0).as_constant();
      cplx rhs = ipow(cplx(hbar * eps), s) * value_at_zero(phi);
      rep.residual_zeta = std::max(rep.residual_zeta, std::abs(lhs - rhs));
    }
    // (3) full symplectic double integral
    {
      Ambient amb;
      PhaseSpace x = PhaseSpace::alloc(amb, m, r, s, eps);
      PhaseSpace y = PhaseSpace::alloc(amb, m, r, s, eps);
      PhasePoint gx = PhasePoint::symbolic(amb, x);
      PhasePoint gy = PhasePoint::symbolic(amb, y);
      std::vector<int> xg = x.qg;
      xg.insert(xg.end(), x.pg.begin(), x.pg.end());
      xg.insert(xg.end(), x.zg.begin(), x.zg.end());
      xg.insert(xg.end(), x.zbg.begin(), x.zbg.end());
      std::vector<int> xv = x.even_vars();
      SuperFun f = random_q_function(rng, amb, xv, xg);
      SuperFun w = omega_points(gx, gy, eps);
      SuperFun integrand = exp_superfun(w * cplx(0, hbar)) * f;
      // inner dy applies first on the odd side; x evens integrate first.
      std::vector<int> order = y.berezin_order();
      auto xo = x.berezin_order();
      order.insert(order.end(), xo.begin(), xo.end());
      SuperFun val = integrand.integrate_even(x.even_vars())
                         .integrate_even(y.even_vars())
                         .berezin(order) *
                     (x.measure_prefactor() * y.measure_prefactor());
      cplx lhs = val.comp(0).as_constant();
      cplx k = kappa_hbar(m, r, s, eps, hbar);
      cplx rhs = k * k * value_at_zero(f);
      rep.residual_omega = std::max(rep.residual_omega, std::abs(lhs - rhs));
    }
  }
  return rep;
}

}  // namespace superheis
