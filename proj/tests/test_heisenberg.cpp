#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "superheis/bch.hpp"
#include "superheis/heisenberg.hpp"
#include "superheis/rng.hpp"

using namespace superheis;

namespace {

GrassmannElement random_even(Rng& rng, int n) {
  GrassmannElement g = GrassmannElement::scalar(n, rng.crand());
  for (int t = 0; t < 2; ++t) {
    int i = rng.uniform_int(0, n - 1), j = rng.uniform_int(0, n - 1);
    if (i != j)
      g += GrassmannElement::monomial(n, (GrassmannElement::Mask(1) << i) |
                                             (GrassmannElement::Mask(1) << j),
                                      rng.crand());
  }
  return g;
}

GrassmannElement random_odd(Rng& rng, int n) {
  GrassmannElement g(n);
  for (int t = 0; t < 2; ++t)
    g += GrassmannElement::monomial(n, GrassmannElement::Mask(1) << rng.uniform_int(0, n - 1),
                                    rng.crand());
  return g;
}

HeisElement random_element(Rng& rng, const HeisAlg& H, int ngens, bool with_body = true) {
  HeisElement g = HeisElement::identity(H, ngens);
  for (auto& c : g.xc) {
    c = random_even(rng, ngens);
    if (!with_body) c = c - GrassmannElement::scalar(ngens, c.body());
  }
  for (auto& c : g.xe) c = random_odd(rng, ngens);
  g.t = random_even(rng, ngens);
  if (!with_body) g.t = g.t - GrassmannElement::scalar(ngens, g.t.body());
  return g;
}

bool elements_equal(const HeisElement& a, const HeisElement& b, double tol = 1e-12) {
  for (size_t i = 0; i < a.xc.size(); ++i)
    if (!a.xc[i].approx_equal(b.xc[i], tol)) return false;
  for (size_t i = 0; i < a.xe.size(); ++i)
    if (!a.xe[i].approx_equal(b.xe[i], tol)) return false;
  return a.t.approx_equal(b.t, tol);
}

}  // namespace

TEST_CASE("structure constants satisfy the super Jacobi identity") {
  for (auto [m, p, q] : {std::tuple{0, 2, 0}, {0, 1, 1}, {1, 2, 1}, {2, 3, 3}, {1, 0, 2}}) {
    HeisAlg H = HeisAlg::make(m, p, q);
    CHECK(H.lie.jacobi_residual() == 0.0);
  }
}

TEST_CASE("group law") {
  Rng rng(42);
  HeisAlg H = HeisAlg::make(1, 2, 1);
  int n = 12;
  for (int rep = 0; rep < 10; ++rep) {
    HeisElement g = random_element(rng, H, n);
    CHECK(elements_equal(group_mul(g, group_inv(g)), HeisElement::identity(H, n)));
  }
  // commutators land in the center with value omega(x, x')
  for (int rep = 0; rep < 10; ++rep) {
    HeisElement a = random_element(rng, H, n), b = random_element(rng, H, n);
    a.t = GrassmannElement(n);
    b.t = GrassmannElement(n);
    HeisElement c = group_mul(group_mul(a, b), group_mul(group_inv(a), group_inv(b)));
    for (auto& x : c.xc) CHECK(x.max_abs() < 1e-12);
    for (auto& x : c.xe) CHECK(x.max_abs() < 1e-12);
    CHECK(c.t.approx_equal(heis_omega(a, b), 1e-12));
  }
  // associativity on random triples with nilpotent coordinates
  for (int rep = 0; rep < 10; ++rep) {
    HeisElement a = random_element(rng, H, n, false), b = random_element(rng, H, n, false),
                c = random_element(rng, H, n, false);
    CHECK(elements_equal(group_mul(group_mul(a, b), c), group_mul(a, group_mul(b, c)), 1e-11));
  }
}

TEST_CASE("factorization through the odd-free part") {
  Rng rng(77);
  HeisAlg H = HeisAlg::make(1, 1, 2);
  for (int rep = 0; rep < 5; ++rep) {
    HeisElement g = random_element(rng, H, 10);
    auto [g0, ex] = wod_split(g);
    for (auto& c : g0.xe) CHECK(c.is_zero());
    CHECK(elements_equal(group_mul(g0, ex), g, 1e-12));
  }
}

TEST_CASE("adjoint and coadjoint actions") {
  Rng rng(4711);
  HeisAlg H = HeisAlg::make(1, 2, 0);
  int n = 12;
  auto random_algvec = [&](bool zero_z) {
    HeisAlgVec X;
    X.alg = &H;
    X.xc.assign(2 * H.m, GrassmannElement(n));
    X.xe.assign(H.p + H.q, GrassmannElement(n));
    X.z = GrassmannElement(n);
    for (auto& c : X.xc) c = random_even(rng, n);
    for (auto& c : X.xe) c = random_odd(rng, n);
    if (!zero_z) X.z = random_even(rng, n);
    return X;
  };
  auto vec_equal = [](const HeisAlgVec& a, const HeisAlgVec& b, double tol = 1e-11) {
    for (size_t i = 0; i < a.xc.size(); ++i)
      if (!a.xc[i].approx_equal(b.xc[i], tol)) return false;
    for (size_t i = 0; i < a.xe.size(); ++i)
      if (!a.xe[i].approx_equal(b.xe[i], tol)) return false;
    return a.z.approx_equal(b.z, tol);
  };

  // central elements act trivially
  HeisElement central = HeisElement::identity(H, n);
  central.t = random_even(rng, n);
  HeisAlgVec X = random_algvec(false);
  CHECK(vec_equal(adjoint(central, X), X));

  // Z is fixed
  HeisAlgVec Z;
  Z.alg = &H;
  Z.xc.assign(2 * H.m, GrassmannElement(n));
  Z.xe.assign(H.p + H.q, GrassmannElement(n));
  Z.z = GrassmannElement::scalar(n, 1.0);
  HeisElement g = random_element(rng, H, n);
  CHECK(vec_equal(adjoint(g, Z), Z));

  // Ad is a group action
  for (int rep = 0; rep < 8; ++rep) {
    HeisElement a = random_element(rng, H, n), b = random_element(rng, H, n);
    HeisAlgVec Y = random_algvec(false);
    CHECK(vec_equal(adjoint(group_mul(a, b), Y), adjoint(a, adjoint(b, Y))));
  }

  // coadjoint orbit through hbar Z-flat sweeps hbar(Z - x)-flat
  double hbar = 1.7;
  HeisAlgVec mu;
  mu.alg = &H;
  mu.xc.assign(2 * H.m, GrassmannElement(n));
  mu.xe.assign(H.p + H.q, GrassmannElement(n));
  mu.z = GrassmannElement::scalar(n, hbar);
  HeisAlgVec moved = coadjoint(g, mu);
  CHECK(moved.z.approx_equal(mu.z));
  for (size_t i = 0; i < moved.xc.size(); ++i)
    CHECK(moved.xc[i].approx_equal(-(g.xc[i] * cplx(hbar)), 1e-12));
  for (size_t i = 0; i < moved.xe.size(); ++i)
    CHECK(moved.xe[i].approx_equal(-(g.xe[i] * cplx(hbar)), 1e-12));
}

TEST_CASE("free series sanity") {
  FreeSeries X = FreeSeries::symbol(5, 0);
  FreeSeries r = fs_log1p(fs_exp(X) - FreeSeries::one(5));
  CHECK((r - X).terms.empty());
}

TEST_CASE("graded BCH split: paper coefficients at order 3") {
  auto [a, b] = bch1_order3_coefficients();
  CHECK(a == Rational(1, 3));
  CHECK(b == Rational(1, 6));
}

TEST_CASE("graded BCH split: word parities") {
  for (int order : {3, 5}) {
    BchSplit s = bch_split(order);
    for (auto& t : s.B0) CHECK(int(t.word.size()) % 2 == 0);
    for (auto& t : s.B1) CHECK(int(t.word.size()) % 2 == 1);
  }
}

TEST_CASE("graded BCH on the Heisenberg algebra") {
  Rng rng(8);
  HeisAlg H = HeisAlg::make(0, 2, 1);
  int n = 12;
  for (int rep = 0; rep < 6; ++rep) {
    AlgVec X = AlgVec::zero(H.lie, n), Y = AlgVec::zero(H.lie, n);
    for (int a = 0; a < H.p + H.q; ++a) {
      X.coeff[H.ei(a)] = random_odd(rng, n);
      Y.coeff[H.ei(a)] = random_odd(rng, n);
    }
    auto [B0, B1] = bch_graded(X, Y, 5);
    // two-step nilpotency: B0 = (1/2)[X, Y], B1 = X + Y
    AlgVec wantB0 = bracket(X, Y).scaled(cplx(0.5));
    CHECK((B0 - wantB0).approx_zero(1e-12));
    CHECK((B1 - (X + Y)).approx_zero(1e-12));

    // group-level identity
    auto to_group = [&](const AlgVec& v) {
      HeisElement g = HeisElement::identity(H, n);
      for (int a = 0; a < H.p + H.q; ++a) g.xe[a] = v.coeff[H.ei(a)];
      g.t = v.coeff[H.zi()];
      return g;
    };
    HeisElement lhs = group_mul(to_group(X), to_group(Y));
    HeisElement rhs = group_mul(to_group(B0), to_group(B1));
    CHECK(elements_equal(lhs, rhs, 1e-12));
  }

  // commuting arguments in disjoint directions: B0 = 0, B1 = X + Y
  AlgVec X = AlgVec::zero(H.lie, n), Y = AlgVec::zero(H.lie, n);
  X.coeff[H.ei(0)] = GrassmannElement::generator(n, 0);
  Y.coeff[H.ei(1)] = GrassmannElement::generator(n, 1);
  auto [B0, B1] = bch_graded(X, Y, 5);
  CHECK(B0.approx_zero(1e-14));
  CHECK((B1 - (X + Y)).approx_zero(1e-14));
}
