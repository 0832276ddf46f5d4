#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "superheis/phase_space.hpp"
#include "superheis/rng.hpp"
#include "superheis/superfun.hpp"

using namespace superheis;
constexpr double kPi = std::numbers::pi;

namespace {

// Closed-form one-dimensional oracle: integral of x^k exp(-q x^2 + b x) over
// the real line, via I_0 = sqrt(pi/q) e^{b^2/4q} and the recurrence
// I_{k+1} = dI_k/db.
cplx oracle_1d(int k, cplx q, cplx b) {
  // I_k = P_k(b) * I_0 with P via symbolic differentiation in b
  // P_0 = 1; P_{k+1} = P_k' + (b/2q) P_k. Use a small coefficient vector.
  std::vector<cplx> P{1.0};
  for (int step = 0; step < k; ++step) {
    std::vector<cplx> next(P.size() + 1, cplx(0.0));
    for (size_t i = 0; i < P.size(); ++i) {
      if (i >= 1) next[i - 1] += double(i) * P[i] * 0.0;  // placeholder
    }
    // derivative
    std::vector<cplx> dP(P.size(), cplx(0.0));
    for (size_t i = 1; i < P.size(); ++i) dP[i - 1] = double(i) * P[i];
    // (b/2q) * P
    std::vector<cplx> shift(P.size() + 1, cplx(0.0));
    for (size_t i = 0; i < P.size(); ++i) shift[i + 1] = P[i] / (2.0 * q);
    next.assign(std::max(dP.size(), shift.size()), cplx(0.0));
    for (size_t i = 0; i < dP.size(); ++i) next[i] += dP[i];
    for (size_t i = 0; i < shift.size(); ++i) next[i] += shift[i];
    P = next;
  }
  cplx val = 0.0, bp = 1.0;
  for (size_t i = 0; i < P.size(); ++i) {
    val += P[i] * bp;
    bp *= b;
  }
  return val * std::sqrt(kPi / q) * std::exp(b * b / (4.0 * q));
}

}  // namespace

TEST_CASE("gaussian moments match the 1-d closed form") {
  Rng rng(555);
  for (int rep = 0; rep < 24; ++rep) {
    cplx q(rng.uniform(0.3, 2.0), rng.uniform(-1.0, 1.0));
    cplx b = rng.crand(1.0);
    int k = rep % 6;
    std::vector<int> nu{k};
    Eigen::MatrixXcd Q(1, 1);
    Q << q;
    Eigen::VectorXcd bb(1);
    bb << b;
    GaussPolyPhase f = GaussPolyPhase::gaussian(1, Q, bb);
    for (int j = 0; j < k; ++j) f = f.mul_coord(0);
    cplx got = f.integrate({0}).as_constant();
    cplx want = oracle_1d(k, q, b);
    CHECK(std::abs(got - want) < 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("partial integration agrees with iterated full integration") {
  Rng rng(77);
  for (int rep = 0; rep < 10; ++rep) {
    // random 3-variable Gaussian-polynomial, integrate var 1 then var {0,2}
    Eigen::MatrixXd A(3, 3), B(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        A(i, j) = rng.uniform(-1, 1);
        B(i, j) = rng.uniform(-0.2, 0.2);
      }
    Eigen::MatrixXcd Q = (A.transpose() * A / 3 + 0.5 * Eigen::MatrixXd::Identity(3, 3))
                             .cast<cplx>() +
                         cplx(0, 1) * (0.5 * (B + B.transpose())).cast<cplx>();
    Eigen::VectorXcd b(3);
    for (int i = 0; i < 3; ++i) b(i) = rng.crand();
    GaussPolyPhase f = GaussPolyPhase::gaussian(3, Q, b);
    f = f.mul_coord(0).mul_coord(1);  // x0 x1 factor
    cplx two_step = f.integrate({1}).integrate({0, 2}).as_constant();
    cplx one_step = f.integrate({0, 1, 2}).as_constant();
    CHECK(std::abs(two_step - one_step) < 1e-11 * std::max(1.0, std::abs(one_step)));
  }
}

TEST_CASE("pullback is substitution") {
  Rng rng(31);
  Eigen::MatrixXcd Q(2, 2);
  Q << cplx(1.0, 0.3), cplx(0.2, 0.1), cplx(0.2, 0.1), cplx(0.8, -0.2);
  Eigen::VectorXcd b(2);
  b << rng.crand(), rng.crand();
  GaussPolyPhase f = GaussPolyPhase::gaussian(2, Q, b).mul_coord(0);
  Eigen::MatrixXcd L(2, 3);
  L << 1, 0, -1, 0, 2, cplx(0, 1);
  Eigen::VectorXcd t(2);
  t << 0.5, cplx(-0.25, 0.75);
  GaussPolyPhase g = f.pullback(L, t);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::VectorXcd x(3);
    for (int i = 0; i < 3; ++i) x(i) = rng.uniform(-1, 1);
    CHECK(std::abs(g.eval(x) - f.eval(L * x + t)) < 1e-12);
  }
}

TEST_CASE("berezin conventions") {
  // m=0, n=2: integral of g0 g1 is 1
  {
    SuperFun f = SuperFun::generator(0, 2, 0) * SuperFun::generator(0, 2, 1);
    auto v = f.berezin({0, 1});  // d xi^2 d xi^1 applies xi^1 first
    CHECK(std::abs(v.comp(0).as_constant() - 1.0) < 1e-15);
  }
  // m=1, n=0: plain Gaussian
  {
    Eigen::MatrixXcd Q(1, 1);
    Q << 1.0;
    SuperFun f = SuperFun::from_even(0, GaussPolyPhase::gaussian(1, Q, Eigen::VectorXcd::Zero(1)));
    cplx v = f.integrate_even({0}).comp(0).as_constant();
    CHECK(std::abs(v - std::sqrt(kPi)) < 1e-14);
  }
  // complex pairs: integral of zb1 z1 ... zbs zs equals 1
  for (int s = 1; s <= 3; ++s) {
    Ambient amb;
    PhaseSpace ps = PhaseSpace::alloc(amb, 0, 0, s, 1);
    SuperFun f = amb.constant(1.0);
    for (int j = 0; j < s; ++j) f = f * amb.gen(ps.zbg[j]) * amb.gen(ps.zg[j]);
    cplx v = f.berezin(ps.berezin_order()).comp(0).as_constant();
    CHECK(std::abs(v - 1.0) < 1e-15);
  }
}

TEST_CASE("berezin equals top-component extraction on random superfunctions") {
  Rng rng(4242);
  for (int rep = 0; rep < 10; ++rep) {
    int n = 4;
    SuperFun f(1, n);
    for (int tm = 0; tm < 6; ++tm) {
      std::uint32_t mask = std::uint32_t(rng.next() & ((1u << n) - 1));
      Eigen::MatrixXcd Q(1, 1);
      Q << cplx(rng.uniform(0.4, 1.5), rng.uniform(-0.4, 0.4));
      Eigen::VectorXcd b(1);
      b << rng.crand();
      f.add_comp(mask, GaussPolyPhase::gaussian(1, Q, b, rng.crand()));
    }
    // ascending order d xi^n ... d xi^1 picks out the top coefficient
    SuperFun top = f.berezin({0, 1, 2, 3});
    GaussPolyPhase expect = f.comp((1u << n) - 1);
    GaussPolyPhase diff = top.comp(0) - expect;
    Eigen::VectorXcd x(1);
    x << 0.37;
    CHECK(std::abs(diff.eval(x)) < 1e-13);
    // full integral is translation invariant in the even variable
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Identity(1, 1);
    Eigen::VectorXcd t(1);
    t << 1.7;
    cplx i1 = f.berezin({0, 1, 2, 3}).integrate_even({0}).comp(0).as_constant();
    cplx i2 = f.pullback_even(L, t).berezin({0, 1, 2, 3}).integrate_even({0}).comp(0).as_constant();
    CHECK(std::abs(i1 - i2) < 1e-11 * std::max(1.0, std::abs(i1)));
  }
}

TEST_CASE("superfunction products match a brute-force monomial oracle") {
  Rng rng(909);
  int n = 5;
  for (int rep = 0; rep < 8; ++rep) {
    SuperFun a(0, n), b(0, n);
    GrassmannElement ga(n), gb(n);
    for (int t = 0; t < 5; ++t) {
      std::uint32_t ma = std::uint32_t(rng.next() & 0x1f), mb = std::uint32_t(rng.next() & 0x1f);
      cplx ca = rng.crand(), cb = rng.crand();
      a.add_comp(ma, GaussPolyPhase::constant(0, ca));
      ga.add_term(ma, ca);
      b.add_comp(mb, GaussPolyPhase::constant(0, cb));
      gb.add_term(mb, cb);
    }
    auto prod = (a * b).as_grassmann();
    CHECK(prod.approx_equal(ga * gb, 1e-12));
  }
}

TEST_CASE("odd substitution and translation") {
  // f(x0, g0) = (1 + g0) e^{-x^2}; shift x -> x - c and g0 -> g0 - g1
  Eigen::MatrixXcd Q(1, 1);
  Q << 1.0;
  SuperFun f = SuperFun::from_even(2, GaussPolyPhase::gaussian(1, Q, Eigen::VectorXcd::Zero(1)));
  f = f * (SuperFun::constant(1, 2, 1.0) + SuperFun::generator(1, 2, 0));
  SuperFun shifted = f.subst_odd(
      {{0, SuperFun::generator(1, 2, 0) - SuperFun::generator(1, 2, 1)}});
  // coefficient of g1 must be -e^{-x^2}
  GaussPolyPhase c1 = shifted.comp(0b10);
  Eigen::VectorXcd x(1);
  x << 0.3;
  CHECK(std::abs(c1.eval(x) + std::exp(-0.09)) < 1e-13);

  SuperFun moved = f.translate_even({{0, SuperFun::constant(1, 2, 0.5)}});
  CHECK(std::abs(moved.comp(0).eval(x) - std::exp(-0.04)) < 1e-13);

  // nilpotent translation: x -> x - g0 g1 * 0.7
  SuperFun nil = SuperFun::zero(1, 2);
  nil.add_comp(0b11, GaussPolyPhase::constant(1, 0.7));
  SuperFun g = SuperFun::from_even(2, GaussPolyPhase::gaussian(1, Q, Eigen::VectorXcd::Zero(1)));
  SuperFun gm = g.translate_even({{0, nil}});
  // f(x - n) = f(x) - n f'(x) for n^2 = 0
  GaussPolyPhase expect = g.comp(0).derivative(0) * cplx(-0.7);
  CHECK(std::abs(gm.comp(0b11).eval(x) - expect.eval(x)) < 1e-13);
}

TEST_CASE("delta-type integral identities") {
  // m=0, r=0, s=1, eps=1, hbar=2: kappa = 2
  CHECK(std::abs(kappa_hbar(0, 0, 1, 1, 2.0) - cplx(2.0)) < 1e-15);

  struct Case {
    int m, r, s, eps;
    double hbar;
  };
  for (Case c : {Case{0, 0, 1, 1, 2.0}, Case{0, 1, 0, 1, 1.0}, Case{0, 1, 1, -1, 1.5},
                 Case{1, 0, 0, 1, 1.0}, Case{1, 1, 0, 1, 0.7}, Case{0, 0, 2, -1, 1.0},
                 Case{1, 0, 1, 1, 1.0}}) {
    auto rep = dirac_identities_check(c.m, c.r, c.s, c.eps, c.hbar, 99, 3);
    CAPTURE(c.m);
    CAPTURE(c.r);
    CAPTURE(c.s);
    CHECK(rep.max_residual() < 1e-10);
  }
}

TEST_CASE("conjugation swaps complex pairs") {
  Ambient amb;
  PhaseSpace ps = PhaseSpace::alloc(amb, 0, 1, 1, 1);
  SuperFun f = amb.gen(ps.zg[0]) * cplx(0, 1) + amb.gen(ps.qg[0]);
  SuperFun fc = f.conjugate(amb.conj);
  CHECK(std::abs((fc.comp(1u << ps.zbg[0]).as_constant() - cplx(0, -1))) < 1e-15);
  CHECK(std::abs((fc.comp(1u << ps.qg[0]).as_constant() - cplx(1))) < 1e-15);
  // involution holds with the pair ordering signs
  Rng rng(5);
  SuperFun g(0, amb.ngens);
  for (int t = 0; t < 6; ++t)
    g.add_comp(std::uint32_t(rng.next() & 0xf), GaussPolyPhase::constant(0, rng.crand()));
  CHECK((g.conjugate(amb.conj).conjugate(amb.conj) - g).max_coeff() < 1e-14);
}
