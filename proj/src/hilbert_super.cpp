#include "superheis/hilbert_super.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace superheis {

int HilbertSuper::d0() const {
  int n = 0;
  for (int d : degs) n += (d == 0);
  return n;
}
int HilbertSuper::d1() const { return dim() - d0(); }

HilbertSuper HilbertSuper::make(std::vector<int> degs, int parity, Eigen::MatrixXcd gram) {
  HilbertSuper h;
  h.degs = std::move(degs);
  h.parity = parity;
  h.gram = std::move(gram);
  return h;
}

HilbertSuper HilbertSuper::sorted(int d0, int d1, int parity, Eigen::MatrixXcd gram) {
  std::vector<int> degs(d0 + d1, 0);
  for (int i = d0; i < d0 + d1; ++i) degs[i] = 1;
  return make(std::move(degs), parity, std::move(gram));
}

cplx HilbertSuper::inner(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const {
  return (x.conjugate().transpose() * gram * y).value();
}

void HilbertSuper::validate(double tol) const {
  int n = dim();
  if (gram.rows() != n || gram.cols() != n)
    throw std::invalid_argument("gram dimension mismatch");
  double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = ((degs[i] & degs[j]) & 1) ? -1.0 : 1.0;
      if (std::abs(std::conj(gram(i, j)) - s * gram(j, i)) > tol * scale)
        throw std::invalid_argument("gram is not superhermitian");
      if (((degs[i] + degs[j]) & 1) != parity && std::abs(gram(i, j)) > tol * scale)
        throw std::invalid_argument("gram is not homogeneous of the declared parity");
    }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gram);
  if (svd.singularValues()(n - 1) <= tol * svd.singularValues()(0))
    throw std::invalid_argument("gram is degenerate");
}

Eigen::MatrixXcd HilbertSuper::parity_op() const {
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i) P(i, i) = degs[i] ? -1.0 : 1.0;
  return P;
}

namespace {

// Eigen-projectors of a Hermitian form H onto its positive/negative parts,
// restricted to the index set `idx`, embedded back into the full space.
void hermitian_split(const Eigen::MatrixXcd& H, const std::vector<int>& idx, int fulldim,
                     double tol, Eigen::MatrixXcd& Ppos, Eigen::MatrixXcd& Pneg, int& npos,
                     int& nneg) {
  int k = int(idx.size());
  Ppos = Eigen::MatrixXcd::Zero(fulldim, fulldim);
  Pneg = Eigen::MatrixXcd::Zero(fulldim, fulldim);
  npos = nneg = 0;
  if (k == 0) return;
  Eigen::MatrixXcd Hs(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) Hs(i, j) = H(idx[i], idx[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (Hs + Hs.adjoint()));
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::MatrixXcd Pp = Eigen::MatrixXcd::Zero(k, k), Pn = Eigen::MatrixXcd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    double lam = es.eigenvalues()(i);
    if (std::abs(lam) <= tol * scale)
      throw std::invalid_argument("degenerate gram in fundamental decomposition");
    Eigen::VectorXcd v = es.eigenvectors().col(i);
    if (lam > 0) {
      Pp += v * v.adjoint();
      ++npos;
    } else {
      Pn += v * v.adjoint();
      ++nneg;
    }
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Ppos(idx[i], idx[j]) = Pp(i, j);
      Pneg(idx[i], idx[j]) = Pn(i, j);
    }
}

}  // namespace

FundamentalDecomposition fundamental_decomposition(const HilbertSuper& h, double tol) {
  h.validate(tol);
  int n = h.dim();
  FundamentalDecomposition fd;
  for (auto& P : fd.projectors) P = Eigen::MatrixXcd::Zero(n, n);
  fd.sgn = {0, 0, 0, 0};

  if (h.parity == 0) {
    std::vector<int> even, odd;
    for (int i = 0; i < n; ++i) (h.degs[i] ? odd : even).push_back(i);
    // <.,.> restricted to the even part is Hermitian; -i<.,.> on the odd part.
    int npos, nneg;
    hermitian_split(h.gram, even, n, tol, fd.projectors[0], fd.projectors[2], npos, nneg);
    fd.sgn[0] = npos;
    fd.sgn[2] = nneg;
    Eigen::MatrixXcd Hodd = cplx(0, -1) * h.gram;
    hermitian_split(Hodd, odd, n, tol, fd.projectors[1], fd.projectors[3], npos, nneg);
    fd.sgn[1] = npos;
    fd.sgn[3] = nneg;
  } else {
    if (h.d0() != h.d1())
      throw std::invalid_argument("parity-1 space requires equal graded dimensions");
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    int npos, nneg;
    hermitian_split(h.gram, all, n, tol, fd.projectors[0], fd.projectors[2], npos, nneg);
    fd.sgn = {npos, 0, nneg, 0};
    if (npos != nneg)
      throw std::invalid_argument("parity-1 decomposition must split evenly");
  }
  fd.J = fd.projectors[0] - cplx(0, 1) * fd.projectors[1] - fd.projectors[2] +
         cplx(0, 1) * fd.projectors[3];

  // Postcondition checks of the structural invariants.
  double scale = std::max(1.0, fd.J.cwiseAbs().maxCoeff());
  Eigen::MatrixXcd J2 = fd.J * fd.J;
  Eigen::MatrixXcd P = h.parity_op();
  Eigen::MatrixXcd expect = (h.parity == 0) ? P : Eigen::MatrixXcd::Identity(n, n);
  if ((J2 - expect).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::logic_error("fundamental symmetry fails J^2 = P^(parity+1)");
  if ((fd.J.adjoint() * h.gram * fd.J - h.gram).cwiseAbs().maxCoeff() >
      1e-9 * std::max(1.0, h.gram.cwiseAbs().maxCoeff()))
    throw std::logic_error("fundamental symmetry is not an isometry");
  Eigen::MatrixXcd GJ = h.gram * fd.J;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (GJ + GJ.adjoint()));
  if (es.eigenvalues().minCoeff() <= 0)
    throw std::logic_error("<x, Jx> is not positive definite");
  if ((GJ - GJ.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, GJ.cwiseAbs().maxCoeff()))
    throw std::logic_error("<x, Jy> is not Hermitian");

  h.J = fd.J;
  return fd;
}

GradedOperator superadjoint(const HilbertSuper& dom, const HilbertSuper& cod,
                            const GradedOperator& T) {
  if (T.degree != 0 && T.degree != 1) throw std::invalid_argument("operator degree must be 0/1");
  int n2 = cod.dim();
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Identity(n2, n2);
  if (T.degree == 1)
    for (int i = 0; i < n2; ++i) S(i, i) = cod.degs[i] ? -1.0 : 1.0;
  // <T'x,y>_dom = (-1)^{|T||x|}<x,Ty>_cod resolves to T' = (S G_cod T G_dom^-1)^H.
  Eigen::MatrixXcd M = S * cod.gram * T.mat * dom.gram.inverse();
  return GradedOperator{M.adjoint(), T.degree};
}

GradedOperator superadjoint(const HilbertSuper& h, const GradedOperator& T) {
  return superadjoint(h, h, T);
}

double superunitarity_residual(const HilbertSuper& dom, const HilbertSuper& cod,
                               const GradedOperator& Phi) {
  GradedOperator dag = superadjoint(dom, cod, Phi);
  Eigen::MatrixXcd a = dag.mat * Phi.mat - Eigen::MatrixXcd::Identity(dom.dim(), dom.dim());
  Eigen::MatrixXcd b = Phi.mat * dag.mat - Eigen::MatrixXcd::Identity(cod.dim(), cod.dim());
  return std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
}

bool is_superunitary(const HilbertSuper& dom, const HilbertSuper& cod, const GradedOperator& Phi,
                     double tol) {
  if (Phi.degree != 0) return false;
  for (int i = 0; i < cod.dim(); ++i)
    for (int j = 0; j < dom.dim(); ++j)
      if (cod.degs[i] != dom.degs[j] && std::abs(Phi.mat(i, j)) > tol) return false;
  return superunitarity_residual(dom, cod, Phi) <= tol;
}

HilbertSuper tensor(const HilbertSuper& h1, const HilbertSuper& h2) {
  int n1 = h1.dim(), n2 = h2.dim();
  std::vector<int> degs(n1 * n2);
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(n1 * n2, n1 * n2);
  for (int x1 = 0; x1 < n1; ++x1)
    for (int x2 = 0; x2 < n2; ++x2) {
      degs[x1 * n2 + x2] = (h1.degs[x1] + h2.degs[x2]) & 1;
      for (int y1 = 0; y1 < n1; ++y1)
        for (int y2 = 0; y2 < n2; ++y2) {
          int sexp = h1.parity * h2.parity + h2.degs[x2] * h1.degs[y1];
          double s = (sexp & 1) ? -1.0 : 1.0;
          G(x1 * n2 + x2, y1 * n2 + y2) = s * h1.gram(x1, y1) * h2.gram(x2, y2);
        }
    }
  return HilbertSuper::make(std::move(degs), (h1.parity + h2.parity) & 1, std::move(G));
}

Eigen::MatrixXcd tensor_J(const HilbertSuper& h1, const HilbertSuper& h2,
                          const Eigen::MatrixXcd& J1, const Eigen::MatrixXcd& J2) {
  int n1 = h1.dim(), n2 = h2.dim();
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n1 * n2, n1 * n2);
  // J(x1 ox x2) = (-1)^{s1 s2 + (s1+|x1|)|x2|} J1 x1 ox J2 x2; the sign
  // depends on the source degrees, i.e. on the column index.
  for (int x1 = 0; x1 < n1; ++x1)
    for (int x2 = 0; x2 < n2; ++x2) {
      int sexp = h1.parity * h2.parity + (h1.parity + h1.degs[x1]) * h2.degs[x2];
      double s = (sexp & 1) ? -1.0 : 1.0;
      for (int y1 = 0; y1 < n1; ++y1)
        for (int y2 = 0; y2 < n2; ++y2)
          J(y1 * n2 + y2, x1 * n2 + x2) = s * J1(y1, x1) * J2(y2, x2);
    }
  return J;
}

GradedOperator tensor_op(const HilbertSuper& h1, const HilbertSuper& h2, const GradedOperator& A,
                         const GradedOperator& B) {
  int n1 = h1.dim(), n2 = h2.dim();
  GradedOperator R;
  R.degree = (A.degree + B.degree) & 1;
  R.mat = Eigen::MatrixXcd::Zero(n1 * n2, n1 * n2);
  for (int x1 = 0; x1 < n1; ++x1)
    for (int x2 = 0; x2 < n2; ++x2) {
      double s = ((B.degree * h1.degs[x1]) & 1) ? -1.0 : 1.0;
      for (int y1 = 0; y1 < n1; ++y1)
        for (int y2 = 0; y2 < n2; ++y2)
          R.mat(y1 * n2 + y2, x1 * n2 + x2) = s * A.mat(y1, x1) * B.mat(y2, x2);
    }
  return R;
}

HilbertSuper direct_sum(const HilbertSuper& h1, const HilbertSuper& h2) {
  if (h1.parity != h2.parity)
    throw std::invalid_argument("direct sum requires equal parities");
  int n1 = h1.dim(), n2 = h2.dim();
  std::vector<int> degs = h1.degs;
  degs.insert(degs.end(), h2.degs.begin(), h2.degs.end());
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(n1 + n2, n1 + n2);
  G.topLeftCorner(n1, n1) = h1.gram;
  G.bottomRightCorner(n2, n2) = h2.gram;
  return HilbertSuper::make(std::move(degs), h1.parity, std::move(G));
}

HilbertSuper dual(const HilbertSuper& h) {
  // <flat x, flat y> := <x, y>; in flat coordinates the gram conjugates.
  return HilbertSuper::make(h.degs, h.parity, h.gram.conjugate());
}

Eigen::MatrixXcd orthogonal_projector(const HilbertSuper& h, const Eigen::MatrixXcd& V) {
  Eigen::MatrixXcd Gf = V.adjoint() * h.gram * V;
  return V * Gf.inverse() * V.adjoint() * h.gram;
}

}  // namespace superheis
