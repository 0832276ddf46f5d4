#pragma once

#include "superheis/wigner.hpp"

namespace superheis {

/// Operator-valued Grassmann expansion over the phase-space generators.
struct GrassOp {
  int ngens = 0;
  int dim = 0;
  std::map<std::uint32_t, Eigen::MatrixXcd> t;

  static GrassOp from_matrix(int ngens, const Eigen::MatrixXcd& M);
  GrassOp mul(const GrassOp& o) const;
  GrassOp lmul(const Eigen::MatrixXcd& M) const;  // M * this
  GrassOp rmul(const Eigen::MatrixXcd& M) const;  // this * M
  GrassOp scale_superfun(const SuperFun& f) const;  // scalar expansion times op
  GrassOp operator-(const GrassOp& o) const;
  double max_abs() const;
};

/// Finite-data representation of a Heisenberg supergroup with even p+q at
/// m = 0: the symbolic operator family on the canonical phase-space frame,
/// plus the odd generators and a fundamental-symmetry witness.
struct MatrixRep {
  SchrodParams par;
  HilbertSuper space;
  GrassOp U;                           // pi(x) over the frame generators
  std::vector<Eigen::MatrixXcd> gammas;
  Eigen::MatrixXcd centralZ;
  Eigen::MatrixXcd Jwit;
};

MatrixRep schrodinger_matrix_rep(const SchrodingerRep& rep);
/// Tensor with the trivial representation on a multiplicity superspace.
MatrixRep tensor_trivial(const MatrixRep& rep, const HilbertSuper& mult);
MatrixRep conjugated(const MatrixRep& rep, const Eigen::MatrixXcd& W);
/// Seeded superunitary built as exp of a gram-skew even operator.
Eigen::MatrixXcd random_superunitary(const HilbertSuper& h, std::uint64_t seed);

/// Integrated representation pi(f) = int dx f(x) pi(x) for f on the frame.
Eigen::MatrixXcd integrated_rep(const E0Frame& fr, const MatrixRep& rep, const SuperFun& f);

/// Projector-state pair built by the fundamental-symmetry recipe from the
/// constant seed state; all defining conditions are verified.
struct ProjectorStates {
  Eigen::VectorXcd phiP, psiP;  // odd-sector coordinates (m = 0 realization)
  double conditions_residual = 0;
};
ProjectorStates select_projector_states(const SchrodingerRep& S);

/// Fundamental symmetry of the Schrodinger odd sector that factors through
/// the real and holomorphic blocks (maps the q-sector to itself).
Eigen::MatrixXcd factored_J(const SchrodingerRep& S);

struct SvnDecomposition {
  int dimHR = 0;
  double hbar_recovered = 0;
  HilbertSuper HR;
  std::array<int, 4> HR_sgn{0, 0, 0, 0};
  Eigen::MatrixXcd Phi;  // H_S (x) H_R -> H
  double projector_idempotent = 0;   // |P^2 - P|
  double projector_identity = 0;     // P pi(y) P - kappa V(y) P, symbolic in y
  double phi_superunitarity = 0;
  double phi_intertwine = 0;         // symbolic in x
  double phi_on_HR = 0;              // |Phi(psiP (x) v) - v|
};

SvnDecomposition svn_decompose(const MatrixRep& rep);

/// Anti-self-adjoint generator list in the two anticommutator sign blocks
/// ([+i hbar] then [-i hbar]); the abstract dictionary used when solving for
/// equivalences between representations.
std::vector<Eigen::MatrixXcd> rho_dirs(const SchrodParams& par,
                                       const std::vector<Eigen::MatrixXcd>& pi_dir);
std::vector<Eigen::MatrixXcd> rho_dirs(const SchrodingerRep& rep);

/// Odd-case extension: adds one odd generator through the parity-operator
/// commutator on the raw direction operators; reports the verified bracket,
/// adjoint and block identities. `extended.gammas` holds the rho-normalized
/// generator list of the extended representation.
struct OddExtension {
  MatrixRep extended;
  int new_plus = 0;  // 1 when the extension lands in (p+1, q)
  double bracket_residual = 0;
  double adjoint_residual = 0;
  double block_identity_residual = 0;
};
OddExtension extend_odd_rep(const SchrodParams& par, const HilbertSuper& space,
                            const std::vector<Eigen::MatrixXcd>& pi_dir, double hbar);

/// Strong superunitary dual classification: equivalence table of the twisted
/// representations (j, hbar) resolved by the intertwiner solver.
struct DualTable {
  int p, q, sigma;
  std::vector<std::array<int, 3>> rows;  // (j, j', hbar_sign) for equivalent pairs
  bool matches_predicate = true;
};
DualTable dual_classify(int p, int q, int sigma, double hbar0 = 1.0);

/// Rank-one trivial space with <e, e> = i^j (degree j mod 2).
HilbertSuper trivial_line(int j);

// ---------------------------------------------------------------------------
// m >= 1: fixtures built from controlled body translations and a multiplicity
// mixer; decomposition validated on probe families.

struct SymbolicFixture {
  SchrodParams par;              // m >= 1, even p+q
  HilbertSuper mult;             // all-even multiplicity space, diagonal gram
  std::vector<Eigen::VectorXd> shifts;  // per component: (q, p) in R^{2m}
  Eigen::MatrixXcd w;            // superunitary mixer on the multiplicity
};

struct SvnSymbolicReport {
  int dimHR = 0;
  double hbar_recovered = 0;
  std::array<int, 4> HR_sgn{0, 0, 0, 0};
  double projector_residual = 0;  // on probe states
  double phi_isometry = 0;
  double phi_intertwine = 0;
  double phi_on_HR = 0;
};

SvnSymbolicReport svn_decompose_symbolic(const SymbolicFixture& fx);

}  // namespace superheis
