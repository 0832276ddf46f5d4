#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "superheis/rng.hpp"
#include "superheis/stone_von_neumann.hpp"

using namespace superheis;

TEST_CASE("integrated representation is an algebra morphism at m = 0") {
  Rng rng(12321);
  for (auto [p, q] : {std::pair{2, 0}, {1, 1}}) {
    SchrodParams par = SchrodParams::make(0, p, q, 1.0);
    SchrodingerRep S = SchrodingerRep::build(0, p, q, 1.0);
    MatrixRep rep = schrodinger_matrix_rep(S);
    E0Frame fr = E0Frame::make(par);
    auto random_e0 = [&]() {
      SuperFun f = fr.amb.zero();
      for (int t = 0; t < 4; ++t)
        f.add_comp(std::uint32_t(rng.next() & ((1u << fr.amb.ngens) - 1)),
                   GaussPolyPhase::constant(0, rng.crand()));
      return f;
    };
    for (int rep_i = 0; rep_i < 5; ++rep_i) {
      SuperFun f1 = random_e0(), f2 = random_e0();
      Eigen::MatrixXcd lhs = integrated_rep(fr, rep, twisted_convolution(fr, f1, f2));
      Eigen::MatrixXcd rhs = integrated_rep(fr, rep, f1) * integrated_rep(fr, rep, f2);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
    // covariance against the complete weak form: pairing the symbolic
    // identity with every monomial g reduces it to pi(f * g) = pi(f) pi(g)
    SuperFun f = random_e0();
    double res = 0;
    for (std::uint32_t gm = 0; gm < (1u << fr.amb.ngens); ++gm) {
      SuperFun g = fr.amb.zero();
      g.add_comp(gm, GaussPolyPhase::constant(0, 1.0));
      Eigen::MatrixXcd lhs = integrated_rep(fr, rep, f) * integrated_rep(fr, rep, g);
      Eigen::MatrixXcd rhs = integrated_rep(fr, rep, twisted_convolution(fr, f, g));
      res = std::max(res, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    CHECK(res < 1e-12);
  }
}

TEST_CASE("projector states satisfy the defining conditions") {
  for (auto [p, q] : {std::pair{2, 0}, {1, 1}, {0, 2}, {2, 2}, {4, 0}}) {
    SchrodingerRep S = SchrodingerRep::build(0, p, q, 1.0);
    ProjectorStates ps = select_projector_states(S);
    CHECK(ps.conditions_residual < 1e-12);
  }
}

TEST_CASE("faithfulness of the integrated representation at m = 0") {
  SchrodParams par = SchrodParams::make(0, 1, 1, 1.0);
  SchrodingerRep S = SchrodingerRep::build(0, 1, 1, 1.0);
  MatrixRep rep = schrodinger_matrix_rep(S);
  E0Frame fr = E0Frame::make(par);
  // the map (monomial coefficients) -> pi(f) must be injective
  int nmono = 1 << fr.amb.ngens;
  int d = rep.U.dim;
  Eigen::MatrixXcd A(nmono, d * d);
  for (int mono = 0; mono < nmono; ++mono) {
    SuperFun f = fr.amb.zero();
    f.add_comp(std::uint32_t(mono), GaussPolyPhase::constant(0, 1.0));
    Eigen::MatrixXcd M = integrated_rep(fr, rep, f);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) A(mono, i * d + j) = M(i, j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  CHECK(svd.singularValues()(nmono - 1) > 1e-10 * svd.singularValues()(0));
}

TEST_CASE("decomposition recovers the plain representation with multiplicity one") {
  for (auto [p, q] : {std::pair{2, 0}, {1, 1}}) {
    SchrodingerRep S = SchrodingerRep::build(0, p, q, 1.3);
    MatrixRep rep = schrodinger_matrix_rep(S);
    SvnDecomposition d = svn_decompose(rep);
    CHECK(d.dimHR == 1);
    CHECK(std::abs(d.hbar_recovered - 1.3) < 1e-12);
    CHECK(d.projector_idempotent < 1e-12);
    CHECK(d.projector_identity < 1e-12);
    CHECK(d.phi_superunitarity < 1e-10);
    CHECK(d.phi_intertwine < 1e-10);
    CHECK(d.phi_on_HR < 1e-10);
  }
}

TEST_CASE("decomposition of conjugated tensor fixtures") {
  Rng rng(777);
  int fixture = 0;
  for (auto [p, q] : {std::pair{2, 0}, {1, 1}, {2, 2}}) {
    for (int k : {2, 3}) {
      ++fixture;
      SchrodingerRep S = SchrodingerRep::build(0, p, q, -0.9);
      MatrixRep base = schrodinger_matrix_rep(S);
      // multiplicity space with mixed signature
      std::vector<int> degs(k, 0);
      if (k == 3) degs[2] = 1;
      Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(k, k);
      G(0, 0) = 1;
      if (k >= 2) G(1, 1) = -1;
      if (k == 3) G(2, 2) = cplx(0, 1);
      HilbertSuper mult = HilbertSuper::make(degs, 0, G);
      MatrixRep big = tensor_trivial(base, mult);
      Eigen::MatrixXcd W = random_superunitary(big.space, 1000 + fixture);
      MatrixRep rep = conjugated(big, W);
      SvnDecomposition d = svn_decompose(rep);
      CHECK(d.dimHR == k);
      CHECK(std::abs(d.hbar_recovered + 0.9) < 1e-12);
      CHECK(d.projector_idempotent < 1e-11);
      CHECK(d.projector_identity < 1e-11);
      CHECK(d.phi_superunitarity < 1e-10);
      CHECK(d.phi_intertwine < 1e-9);
      CHECK(d.phi_on_HR < 1e-9);
      // the recovered tensor factor reproduces the total space up to
      // superunitary equivalence: parities and signatures agree
      SchrodingerRep S2 = SchrodingerRep::build(0, p, q, -0.9);
      HilbertSuper ts = tensor(S2.odd_space, d.HR);
      CHECK(fundamental_decomposition(ts).sgn == fundamental_decomposition(rep.space).sgn);
      CHECK(ts.parity == rep.space.parity);
    }
  }
}

TEST_CASE("commutant elements factor through the multiplicity space") {
  SchrodingerRep S = SchrodingerRep::build(0, 2, 0, 1.0);
  MatrixRep base = schrodinger_matrix_rep(S);
  HilbertSuper mult = HilbertSuper::sorted(2, 0, 0, (Eigen::MatrixXcd(2, 2) << 1, 0, 0, -1).finished());
  MatrixRep big = tensor_trivial(base, mult);
  Eigen::MatrixXcd W = random_superunitary(big.space, 4242);
  MatrixRep rep = conjugated(big, W);
  SvnDecomposition d = svn_decompose(rep);
  REQUIRE(d.dimHR == 2);
  // commutant element: W (1 ox B) W^-1
  Rng rng(5);
  Eigen::MatrixXcd B(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) B(i, j) = rng.crand();
  int dS = S.dim();
  Eigen::MatrixXcd oneB = Eigen::MatrixXcd::Zero(2 * dS, 2 * dS);
  for (int I = 0; I < dS; ++I)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) oneB(I * 2 + a, I * 2 + b) = B(a, b);
  Eigen::MatrixXcd A = W * oneB * W.inverse();
  // A commutes with the symbolic family
  GrassOp diff = rep.U.lmul(A) - rep.U.rmul(A);
  CHECK(diff.max_abs() < 1e-10);
  // Phi^{-1} A Phi = 1 ox A_R
  Eigen::MatrixXcd C = d.Phi.inverse() * A * d.Phi;
  Eigen::MatrixXcd AR = C.topLeftCorner(2, 2);
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(2 * dS, 2 * dS);
  for (int I = 0; I < dS; ++I)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) expect(I * 2 + a, I * 2 + b) = AR(a, b);
  CHECK((C - expect).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("odd-case extension reproduces the even representations") {
  struct Case {
    int p, q, sigma, ep, eq;  // input and expected extension
  };
  for (Case c : {Case{1, 0, 0, 2, 0}, Case{0, 1, 1, 1, 1}, Case{1, 0, 1, 1, 1},
                 Case{0, 1, 0, 0, 2}}) {
    double hbar = 1.0;
    SchrodingerRep S = SchrodingerRep::build(0, c.p, c.q, hbar, c.sigma);
    SchrodParams par = S.par;
    OddExtension ext = extend_odd_rep(par, S.odd_space, S.pi_dir, hbar);
    CHECK(ext.bracket_residual < 1e-12);
    CHECK(ext.adjoint_residual < 1e-12);
    CHECK(ext.block_identity_residual < 1e-12);
    CHECK(ext.extended.par.p == c.ep);
    CHECK(ext.extended.par.q == c.eq);
    // equivalence with the directly built even representation
    SchrodingerRep T = SchrodingerRep::build(0, c.ep, c.eq, hbar);
    RepMats a{ext.extended.space, ext.extended.gammas, hbar};
    RepMats b{T.odd_space, rho_dirs(T), hbar};
    bool equiv = false;
    for (auto& X : intertwiner_space(a, b, 0))
      if (superunitary_scaling(a, b, X)) equiv = true;
    CHECK(equiv);
  }
}

TEST_CASE("dual classification tables") {
  // odd case: the predicate i^{j+j'-1} = (-1)^q sign(hbar)
  for (auto [p, q] : {std::pair{1, 0}, {0, 1}}) {
    for (int sigma : {0, 1}) {
      DualTable t = dual_classify(p, q, sigma, 1.0);
      CHECK(t.matches_predicate);
      CHECK(t.rows.size() == 8);  // 4 ordered pairs per sign of hbar
    }
  }
  // even case: all classes distinct
  DualTable te = dual_classify(2, 0, -1, 1.0);
  CHECK(te.matches_predicate);
  CHECK(te.rows.empty());
}

TEST_CASE("symbolic decomposition at m = 1") {
  for (int k : {1, 2}) {
    SymbolicFixture fx;
    fx.par = SchrodParams::make(1, 2, 0, 1.0);
    std::vector<int> degs(k, 0);
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Identity(k, k);
    if (k == 2) G(1, 1) = -1;
    fx.mult = HilbertSuper::make(degs, 0, G);
    for (int j = 0; j < k; ++j) {
      Eigen::VectorXd sh(2);
      sh << 0.4 * j, -0.3 * j + 0.2;
      fx.shifts.push_back(sh);
    }
    fx.w = random_superunitary(fx.mult, 99 + k);
    SvnSymbolicReport r = svn_decompose_symbolic(fx);
    CHECK(r.dimHR == k);
    CHECK(std::abs(r.hbar_recovered - 1.0) < 1e-10);
    CHECK(r.projector_residual < 1e-9);
    CHECK(r.phi_isometry < 1e-9);
    CHECK(r.phi_on_HR < 1e-9);
    CHECK(r.phi_intertwine < 1e-9);
  }
}
