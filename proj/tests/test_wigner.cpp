#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "superheis/rng.hpp"
#include "superheis/wigner.hpp"

using namespace superheis;

namespace {

// state factories
StateFactory basis_factory(const SchrodParams& par, int I) {
  return [par, I](const Ambient& a, const StateVars& st) {
    SuperFun f = a.constant(1.0);
    auto gens = st.holo_gens(par);
    for (size_t k = 0; k < gens.size(); ++k)
      if (I & (1 << k)) f = f * a.gen(gens[k]);
    return f;
  };
}

StateFactory random_state(const SchrodParams& par, Rng& rng, bool q_sector_only,
                          bool homogeneous_deg = false, int want_deg = 0) {
  // coefficients chosen up front so repeated invocations agree
  std::vector<cplx> coef(1 << par.n_state_gens());
  for (auto& c : coef) c = rng.crand();
  double width = rng.uniform(0.5, 1.5);
  cplx lin = rng.crand();
  return [par, coef, q_sector_only, homogeneous_deg, want_deg, width,
          lin](const Ambient& a, const StateVars& st) {
    auto gens = st.holo_gens(par);
    SuperFun f = a.zero();
    for (int I = 0; I < int(coef.size()); ++I) {
      int deg = std::popcount(unsigned(I)) & 1;
      if (homogeneous_deg && deg != want_deg) continue;
      if (q_sector_only) {
        bool uses_z = false;
        for (size_t k = 0; k < gens.size(); ++k)
          if ((I & (1 << k)))
            for (int zj : st.zg)
              if (gens[k] == zj) uses_z = true;
        if (uses_z) continue;
      }
      SuperFun mono = a.constant(coef[I]);
      for (size_t k = 0; k < gens.size(); ++k)
        if (I & (1 << k)) mono = mono * a.gen(gens[k]);
      f = f + mono;
    }
    if (!st.qv.empty()) {
      Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(a.nvars, a.nvars);
      Eigen::VectorXcd b = Eigen::VectorXcd::Zero(a.nvars);
      for (int v : st.qv) Q(v, v) = width;
      b(st.qv[0]) = lin;
      f = f * SuperFun::from_even(a.ngens, GaussPolyPhase::gaussian(a.nvars, Q, b));
    }
    return f;
  };
}

cplx inner_of(const SchrodParams& par, const StateFactory& f, const StateFactory& g) {
  Ambient amb;
  StateVars st = allocate_state(amb, par);
  return schrod_inner(par, amb, st, f(amb, st), g(amb, st)).comp(0).as_constant();
}

}  // namespace

TEST_CASE("wigner function at the origin is the inner product") {
  Rng rng(5);
  for (auto [p, q] : {std::pair{2, 0}, {1, 1}}) {
    SchrodParams par = SchrodParams::make(0, p, q, 1.0);
    E0Frame fr = E0Frame::make(par);
    auto phi = random_state(par, rng, false);
    auto psi = random_state(par, rng, false);
    SuperFun V = wigner_fn(fr, phi, psi);
    CHECK(std::abs(V.comp(0).as_constant() - inner_of(par, phi, psi)) < 1e-13);
  }
  // m = 1 with Gaussian states
  SchrodParams par = SchrodParams::make(1, 2, 0, 1.0);
  E0Frame fr = E0Frame::make(par);
  Rng rng2(9);
  auto phi = random_state(par, rng2, false);
  auto psi = random_state(par, rng2, false);
  SuperFun V = wigner_fn(fr, phi, psi);
  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(fr.amb.nvars);
  CHECK(std::abs(V.comp(0).eval(zero) - inner_of(par, phi, psi)) < 1e-12);
}

TEST_CASE("wigner parity identity") {
  Rng rng(21);
  for (auto [m, p, q] : {std::tuple{0, 1, 1}, {0, 2, 0}, {1, 1, 1}}) {
    SchrodParams par = SchrodParams::make(m, p, q, 1.0);
    E0Frame fr = E0Frame::make(par);
    for (int dphi : {0, 1})
      for (int dpsi : {0, 1}) {
        auto phi = random_state(par, rng, false, true, dphi);
        auto psi = random_state(par, rng, false, true, dpsi);
        SuperFun V = wigner_fn(fr, phi, psi);
        PhaseCoordExprs xid = PhaseCoordExprs::identity(fr.amb, fr.x);
        SuperFun Vm = wigner_eval(fr, V, fr.amb.nvars, fr.amb.ngens, xid.negated());
        auto Mphi = [&](const Ambient& a, const StateVars& st) {
          return apply_M(st, phi(a, st));
        };
        auto Mpsi = [&](const Ambient& a, const StateVars& st) {
          return apply_M(st, psi(a, st));
        };
        SuperFun VM = wigner_fn(fr, Mphi, Mpsi);
        double sgn = ((par.r + dphi + dpsi) % 2) ? -1.0 : 1.0;
        SuperFun diff = Vm - VM * cplx(sgn);
        double res = 0;
        for (double pt : {0.0, 0.8}) {
          Eigen::VectorXcd xx = Eigen::VectorXcd::Constant(fr.amb.nvars, pt);
          for (auto& [mask, g] : diff.comps()) res = std::max(res, std::abs(g.eval(xx)));
        }
        CHECK(res < 1e-12);
      }
  }
}

TEST_CASE("wigner function against numeric quadrature at m = 1") {
  // V(phi,psi)(q,p) = int dq0 conj(phi)(q0) e^{i hbar (q/2 - q0) p} psi(q0 - q)
  SchrodParams par = SchrodParams::make(1, 0, 0, 1.0);
  E0Frame fr = E0Frame::make(par);
  double aw = 0.8, bw = 1.1;  // Gaussian widths
  StateFactory phi = [&](const Ambient& a, const StateVars& st) {
    Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(a.nvars, a.nvars);
    Q(st.qv[0], st.qv[0]) = aw;
    return SuperFun::from_even(a.ngens,
                               GaussPolyPhase::gaussian(a.nvars, Q, Eigen::VectorXcd::Zero(a.nvars)));
  };
  StateFactory psi = [&](const Ambient& a, const StateVars& st) {
    Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(a.nvars, a.nvars);
    Q(st.qv[0], st.qv[0]) = bw;
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(a.nvars);
    b(st.qv[0]) = 0.4;
    return SuperFun::from_even(a.ngens, GaussPolyPhase::gaussian(a.nvars, Q, b, cplx(0.9, 0.2)));
  };
  SuperFun V = wigner_fn(fr, phi, psi);
  Rng rng(33);
  for (int k = 0; k < 10; ++k) {
    double qq = rng.uniform(-1.2, 1.2), pp = rng.uniform(-1.2, 1.2);
    // Simpson quadrature oracle
    auto f = [&](double q0) {
      cplx ph = std::exp(cplx(0, 1) * ((qq / 2 - q0) * pp));
      cplx a = std::exp(-aw * q0 * q0);
      double y = q0 - qq;
      cplx b = cplx(0.9, 0.2) * std::exp(-bw * y * y + 0.4 * y);
      return std::conj(a) * ph * b;
    };
    double L = 14.0;
    int N = 4000;
    cplx acc = 0;
    double h = 2 * L / N;
    for (int i = 0; i <= N; ++i) {
      double x0 = -L + i * h;
      double w = (i == 0 || i == N) ? 1 : (i % 2 ? 4 : 2);
      acc += w * f(x0);
    }
    acc *= h / 3;
    Eigen::VectorXcd xx(2);
    xx << qq, pp;
    CHECK(std::abs(V.comp(0).eval(xx) - acc) < 1e-8);
  }
}

TEST_CASE("twisted convolution is associative at m = 0") {
  Rng rng(65);
  SchrodParams par = SchrodParams::make(0, 1, 1, 1.0);
  E0Frame fr = E0Frame::make(par);
  auto random_e0 = [&]() {
    SuperFun f = fr.amb.zero();
    for (int t = 0; t < 4; ++t)
      f.add_comp(std::uint32_t(rng.next() & ((1u << fr.amb.ngens) - 1)),
                 GaussPolyPhase::constant(0, rng.crand()));
    return f;
  };
  for (int rep = 0; rep < 6; ++rep) {
    SuperFun a = random_e0(), b = random_e0(), c = random_e0();
    SuperFun lhs = twisted_convolution(fr, twisted_convolution(fr, a, b), c);
    SuperFun rhs = twisted_convolution(fr, a, twisted_convolution(fr, b, c));
    CHECK((lhs - rhs).max_coeff() < 1e-12);
  }
}

TEST_CASE("composition law for wigner functions") {
  Rng rng(77);
  for (auto [p, q] : {std::pair{1, 1}, {2, 0}}) {
    SchrodParams par = SchrodParams::make(0, p, q, 1.0);
    auto phip = random_state(par, rng, true, true, 0);
    auto psi = random_state(par, rng, true, true, par.r % 2);
    auto phi = random_state(par, rng, false);
    auto psip = random_state(par, rng, false);
    CHECK(wigner_composition_check(par, phip, psi, phi, psip) < 1e-12);
  }
}

TEST_CASE("narrow-Gaussian unit for the twisted convolution at m = 1") {
  SchrodParams par = SchrodParams::make(1, 0, 0, 1.0);
  E0Frame fr = E0Frame::make(par);
  // f1: smooth Gaussian; f2: narrow normalized Gaussian at the origin
  Eigen::MatrixXcd Q1 = Eigen::MatrixXcd::Zero(2, 2);
  Q1(0, 0) = 0.6;
  Q1(1, 1) = 0.9;
  SuperFun f1 = SuperFun::from_even(0, GaussPolyPhase::gaussian(2, Q1, Eigen::VectorXcd::Zero(2)));
  double prev = 1e9;
  for (double w : {0.05, 0.02, 0.008}) {
    Eigen::MatrixXcd Q2 = Eigen::MatrixXcd::Identity(2, 2) / (w * w);
    cplx norm = 1.0 / (std::numbers::pi * w * w);
    SuperFun f2 =
        SuperFun::from_even(0, GaussPolyPhase::gaussian(2, Q2, Eigen::VectorXcd::Zero(2), norm));
    SuperFun conv = twisted_convolution(fr, f1, f2);
    double res = 0;
    for (double pt : {0.0, 0.5, -0.9}) {
      Eigen::VectorXcd xx = Eigen::VectorXcd::Constant(2, pt);
      res = std::max(res, std::abs(conv.comp(0).eval(xx) - f1.comp(0).eval(xx)));
    }
    CHECK(res < prev);
    prev = res;
    if (w == 0.008) CHECK(res < 1e-3);
  }
}

TEST_CASE("resolution of the identity") {
  Rng rng(99);
  // m=0 even signatures
  for (auto [p, q] : {std::pair{2, 0}, {1, 1}, {0, 2}, {2, 2}}) {
    SchrodParams par = SchrodParams::make(0, p, q, 1.0);
    for (int rep = 0; rep < 3; ++rep) {
      auto phi = random_state(par, rng, true);
      auto psi = random_state(par, rng, true);
      auto phip = random_state(par, rng, false);
      auto psip = random_state(par, rng, false);
      auto r = resolution_of_identity_check(par, phi, phip, psip, psi);
      CHECK(r.residual < 1e-12);
    }
  }
  // m=1 classical limit (p = q = 0)
  {
    SchrodParams par = SchrodParams::make(1, 0, 0, 1.0);
    for (int rep = 0; rep < 2; ++rep) {
      auto phi = random_state(par, rng, true);
      auto psi = random_state(par, rng, true);
      auto phip = random_state(par, rng, true);
      auto psip = random_state(par, rng, true);
      auto r = resolution_of_identity_check(par, phi, phip, psip, psi);
      CHECK(r.residual < 1e-9);
    }
  }
  // m=1, (2,0)
  {
    SchrodParams par = SchrodParams::make(1, 2, 0, 1.0);
    auto phi = random_state(par, rng, true);
    auto psi = random_state(par, rng, true);
    auto phip = random_state(par, rng, false);
    auto psip = random_state(par, rng, false);
    auto r = resolution_of_identity_check(par, phi, phip, psip, psi);
    CHECK(r.residual < 1e-9);
  }
  // hypothesis violation is rejected
  {
    SchrodParams par = SchrodParams::make(0, 2, 0, 1.0);
    auto zdep = basis_factory(par, 1);  // zeta monomial
    CHECK_THROWS(resolution_of_identity_check(par, zdep, zdep, zdep, zdep));
  }
}

TEST_CASE("M and parity bookkeeping") {
  SchrodParams par = SchrodParams::make(1, 1, 1, 1.0);
  Ambient amb;
  StateVars st = allocate_state(amb, par);
  Rng rng(3);
  auto f = random_state(par, rng, false)(amb, st);
  CHECK((apply_M(st, apply_M(st, f)) - f).max_coeff() < 1e-13);
  CHECK((apply_parity(par, st, apply_parity(par, st, f)) - f).max_coeff() < 1e-13);
  // M and P commute here
  SuperFun a = apply_M(st, apply_parity(par, st, f));
  SuperFun b = apply_parity(par, st, apply_M(st, f));
  CHECK((a - b).max_coeff() < 1e-13);
}
