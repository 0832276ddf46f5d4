#pragma once

#include <optional>

#include "superheis/hilbert_super.hpp"
#include "superheis/phase_space.hpp"

namespace superheis {

/// Parameters of a Schrodinger-type representation of H_{2m|p,q}. For odd
/// p+q the parity sigma (0 or 1) selects which of the two inner products the
/// representation space carries.
struct SchrodParams {
  int m = 0, p = 0, q = 0;
  double hbar = 1.0;
  int sigma = -1;
  int eps = 1, r = 0, s = 0;
  bool odd_case = false;

  static SchrodParams make(int m, int p, int q, double hbar, int sigma = -1);
  int n_state_gens() const { return r + s + (odd_case ? 1 : 0); }
  int space_parity() const { return odd_case ? sigma : (r & 1); }
  /// Odd case: the extra coordinate is realized as a real generator exactly
  /// when the requested parity differs from r mod 2.
  bool tau_real() const { return odd_case && (((sigma + r) & 1) == 1); }
  cplx kappa() const;
};

/// Placement of the state variables/generators inside an ambient space.
struct StateVars {
  std::vector<int> qv;       // m even variables
  std::vector<int> qg;       // r real odd generators
  std::vector<int> zg, zbg;  // s holomorphic pairs
  int tg = -1, tbg = -1;     // extra odd-case generator (pair when sigma = 0)

  /// Generators that carry state monomials, in basis-bit order.
  std::vector<int> holo_gens(const SchrodParams& par) const;
};

StateVars allocate_state(Ambient& amb, const SchrodParams& par);

/// Group-element coordinates as expressions in an ambient space; q and p hold
/// the m even entries followed by the r odd ones.
struct SchrodCoords {
  std::vector<SuperFun> q, p;
  std::vector<SuperFun> z, zb;
  SuperFun tau, t;
  static SchrodCoords zero(const Ambient& amb, const SchrodParams& par);
};

/// Representation operator on a state expression (translation plus phase).
SuperFun schrod_act(const SchrodParams& par, const StateVars& st, const SchrodCoords& g,
                    const SuperFun& phi);

/// Superhermitian inner product of two state expressions; parameter content
/// passes through. Conjugation uses the ambient involution.
SuperFun schrod_inner(const SchrodParams& par, const Ambient& amb, const StateVars& st,
                      const SuperFun& f, const SuperFun& g);

/// omega(x, y) in representation coordinates.
SuperFun schrod_omega(const SchrodParams& par, const SchrodCoords& x, const SchrodCoords& y);

/// Componentwise sum of coordinates.
SchrodCoords coords_add(const SchrodCoords& a, const SchrodCoords& b);

/// Concrete Schrodinger representation with the odd sector realized on the
/// 2^{r+s(+1)} monomial basis.
class SchrodingerRep {
 public:
  SchrodParams par;
  Ambient amb;   // canonical ambient: one parameter generator, then the state
  int theta = 0;
  StateVars st;
  HilbertSuper odd_space;
  Eigen::MatrixXcd J_odd;
  // operators of the real odd coordinate directions, ordered
  // [q-odd 1..r][p-odd 1..r][xi 1..2s][tau?]
  std::vector<Eigen::MatrixXcd> pi_dir;
  // normalized Clifford generators in the +/- basis order (first p carry
  // anticommutator +i hbar, the remaining q carry -i hbar)
  std::vector<Eigen::MatrixXcd> gamma;
  Eigen::MatrixXcd centralZ;

  static SchrodingerRep build(int m, int p, int q, double hbar, int sigma = -1);
  int dim() const { return odd_space.dim(); }

  /// Monomial basis state I (bitmask over holo generators) in an ambient with
  /// the same state layout.
  SuperFun basis_state(const Ambient& a, const StateVars& s, int I) const;
  /// Read a parameter-free state expression into basis coordinates (m = 0).
  Eigen::VectorXcd state_vector(const StateVars& s, const SuperFun& f) const;
};

/// Matrix of coefficient `param_mask` across images of the basis states.
Eigen::MatrixXcd extract_matrix(const SchrodParams& par, const StateVars& st,
                                const std::vector<SuperFun>& images,
                                std::uint32_t param_mask);

/// Residual of U(x)U(x') = e^{i hbar/2 omega(x,x')} U(x+x') on seeded random
/// Grassmann-valued coordinates.
double group_homomorphism_check(const SchrodParams& par, int trials = 4,
                                std::uint64_t seed = 12345);

/// Residual of the finite expansion U(x^odd) = exp(sum theta_d pi_d).
double odd_expansion_check(const SchrodingerRep& rep);

struct CliffordReport {
  double relations_residual = 0;
  int span_rank = 0;
  int full_rank = 0;
  bool surjective = false;
};
/// Anticommutator table of the normalized generators and the rank of their
/// monomial span (p+q even, m = 0).
CliffordReport clifford_structure(const SchrodingerRep& rep);

/// Finite-dimensional representation data for intertwiner computations.
struct RepMats {
  HilbertSuper space;
  std::vector<Eigen::MatrixXcd> ops;  // odd generators (consistent ordering)
  double hbar = 1.0;
};
RepMats rep_mats(const SchrodingerRep& rep);

/// Basis of homogeneous intertwiners T with T op1_k = op2_k T of the given
/// degree; empty when the central characters differ.
std::vector<Eigen::MatrixXcd> intertwiner_space(const RepMats& a, const RepMats& b, int degree,
                                                double tol = 1e-10);

/// Tries to scale an intertwiner to a superunitary equivalence; returns the
/// scaled operator if T^dag T is a positive multiple of the identity.
std::optional<Eigen::MatrixXcd> superunitary_scaling(const RepMats& a, const RepMats& b,
                                                     const Eigen::MatrixXcd& T,
                                                     double tol = 1e-9);

struct TensorDescendReport {
  bool equivalent = false;   // superunitarily equivalent to the combined rep
  int multiplicity = 0;      // dim of the even intertwiner space from the target
  double residual = 1.0;     // superunitarity residual when equivalent
  bool spans = false;        // for multiplicity > 1: intertwiner images fill the space
};
/// Tensor product of two m = 0 representations with equal parameter descends
/// to the combined signature; checks equivalence with the directly built
/// target (multiplicity one) or reports the multiplicity of the target inside
/// the tensor product (both factors of odd type double the dimension).
TensorDescendReport tensor_descend(const SchrodingerRep& A, const SchrodingerRep& B);

}  // namespace superheis
