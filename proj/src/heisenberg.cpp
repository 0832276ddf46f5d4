#include "superheis/heisenberg.hpp"

#include <bit>
#include <cmath>

namespace superheis {

void LieSuperAlg::set_bracket(int i, int j, int k, double c) {
  if (brackets.empty()) brackets.assign(dim(), std::vector<std::map<int, double>>(dim()));
  if (c != 0.0) brackets[i][j][k] += c;
}

double LieSuperAlg::jacobi_residual() const {
  int n = dim();
  static const std::map<int, double> empty;
  auto br = [&](int i, int j) -> const std::map<int, double>& {
    if (brackets.empty()) return empty;
    return brackets[i][j];
  };
  auto add_scaled = [&](std::map<int, double>& acc, const std::map<int, double>& v, double s) {
    for (auto& [k, c] : v) acc[k] += s * c;
  };
  double res = 0;
  // super skew-symmetry: [b_i,b_j] + (-1)^{|i||j|} [b_j,b_i] = 0
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::map<int, double> acc;
      add_scaled(acc, br(i, j), 1.0);
      add_scaled(acc, br(j, i), (deg(i) && deg(j)) ? -1.0 : 1.0);
      for (auto& [k, c] : acc) res = std::max(res, std::abs(c));
    }
  // [b_i,[b_j,b_k]] - [[b_i,b_j],b_k] - (-1)^{|i||j|}[b_j,[b_i,b_k]] = 0
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        std::map<int, double> acc;
        for (auto& [l, c] : br(j, k)) add_scaled(acc, br(i, l), c);
        for (auto& [l, c] : br(i, j)) add_scaled(acc, br(l, k), -c);
        double f = (deg(i) && deg(j)) ? 1.0 : -1.0;  // -(-1)^{|i||j|}
        for (auto& [l, c] : br(i, k)) add_scaled(acc, br(j, l), f * c);
        for (auto& [l, c] : acc) res = std::max(res, std::abs(c));
      }
  return res;
}

AlgVec AlgVec::zero(const LieSuperAlg& a, int ngens) {
  AlgVec v;
  v.alg = &a;
  v.coeff.assign(a.dim(), GrassmannElement(ngens));
  return v;
}

AlgVec AlgVec::operator+(const AlgVec& o) const {
  AlgVec r = *this;
  for (size_t i = 0; i < r.coeff.size(); ++i) r.coeff[i] += o.coeff[i];
  return r;
}

AlgVec AlgVec::operator-(const AlgVec& o) const {
  AlgVec r = *this;
  for (size_t i = 0; i < r.coeff.size(); ++i) r.coeff[i] += -o.coeff[i];
  return r;
}

AlgVec AlgVec::scaled(const GrassmannElement& s) const {
  AlgVec r = *this;
  for (auto& c : r.coeff) c = s * c;
  return r;
}

AlgVec AlgVec::scaled(cplx s) const {
  AlgVec r = *this;
  for (auto& c : r.coeff) c = c * s;
  return r;
}

bool AlgVec::approx_zero(double tol) const { return max_abs() <= tol; }

double AlgVec::max_abs() const {
  double v = 0;
  for (auto& c : coeff) v = std::max(v, c.max_abs());
  return v;
}

AlgVec bracket(const AlgVec& a, const AlgVec& b) {
  const LieSuperAlg& L = *a.alg;
  int ngens = a.coeff.empty() ? 0 : a.coeff[0].generators();
  AlgVec r = AlgVec::zero(L, ngens);
  if (L.brackets.empty()) return r;
  for (int i = 0; i < L.dim(); ++i) {
    if (a.coeff[i].is_zero()) continue;
    for (int j = 0; j < L.dim(); ++j) {
      if (b.coeff[j].is_zero()) continue;
      // [a_i b_i, b_j b_j]: split the right coefficient by parity for the
      // scalar-extension sign (-1)^{|basis_i||coeff_j|}
      GrassmannElement beven(ngens), bodd(ngens);
      for (auto& [mask, c] : b.coeff[j].terms())
        ((std::popcount(mask) & 1) ? bodd : beven).add_term(mask, c);
      for (int pass = 0; pass < 2; ++pass) {
        const GrassmannElement& bc = pass ? bodd : beven;
        if (bc.is_zero()) continue;
        double sign = (pass == 1 && L.deg(i) == 1) ? -1.0 : 1.0;
        GrassmannElement prod = a.coeff[i] * bc * cplx(sign);
        for (auto& [k, c] : L.brackets[i][j]) r.coeff[k] += prod * cplx(c);
      }
    }
  }
  return r;
}

HeisAlg HeisAlg::make(int m, int p, int q) {
  HeisAlg h;
  h.m = m;
  h.p = p;
  h.q = q;
  h.eps = (p >= q) ? 1 : -1;
  h.r = std::min(p, q);
  h.sprime = std::abs(p - q);
  h.lie.dim0 = 2 * m + 1;
  h.lie.dim1 = p + q;
  h.lie.brackets.assign(h.lie.dim(), std::vector<std::map<int, double>>(h.lie.dim()));
  for (int i = 0; i < 2 * m; ++i)
    for (int j = 0; j < 2 * m; ++j) {
      double w = h.omega_even(i, j);
      if (w != 0.0) h.lie.set_bracket(h.ci(i), h.ci(j), h.zi(), w);
    }
  for (int a = 0; a < p + q; ++a) h.lie.set_bracket(h.ei(a), h.ei(a), h.zi(), h.omega_odd(a, a));
  return h;
}

double HeisAlg::omega_even(int i, int j) const {
  // first m coordinates are positions, last m momenta: omega(q_i, p_i) = 1
  if (j == i + m && i < m) return 1.0;
  if (j == i - m && i >= m) return -1.0;
  return 0.0;
}

double HeisAlg::omega_odd(int a, int b) const {
  if (a != b) return 0.0;
  return a < p ? 1.0 : -1.0;
}

HeisElement HeisElement::identity(const HeisAlg& a, int ngens) {
  HeisElement g;
  g.alg = &a;
  g.xc.assign(2 * a.m, GrassmannElement(ngens));
  g.xe.assign(a.p + a.q, GrassmannElement(ngens));
  g.t = GrassmannElement(ngens);
  return g;
}

void HeisElement::check_parities() const {
  for (auto& c : xc)
    if (c.parity() != 0)
      throw std::invalid_argument("even coordinate with odd Grassmann content");
  for (auto& c : xe)
    if (!c.is_zero() && c.parity() != 1)
      throw std::invalid_argument("odd coordinate with even Grassmann content");
  if (t.parity() != 0) throw std::invalid_argument("central coordinate must be even");
}

GrassmannElement heis_omega(const HeisElement& a, const HeisElement& b) {
  const HeisAlg& H = *a.alg;
  int ngens = a.t.generators();
  GrassmannElement w(ngens);
  for (int i = 0; i < 2 * H.m; ++i)
    for (int j = 0; j < 2 * H.m; ++j) {
      double c = H.omega_even(i, j);
      if (c != 0.0) w += a.xc[i] * b.xc[j] * cplx(c);
    }
  // scalar extension with left coefficients: odd-odd pairings flip sign
  for (int al = 0; al < H.p + H.q; ++al)
    w += a.xe[al] * b.xe[al] * cplx(-H.omega_odd(al, al));
  return w;
}

HeisElement group_mul(const HeisElement& a, const HeisElement& b) {
  HeisElement g = a;
  for (size_t i = 0; i < g.xc.size(); ++i) g.xc[i] += b.xc[i];
  for (size_t i = 0; i < g.xe.size(); ++i) g.xe[i] += b.xe[i];
  g.t += b.t + heis_omega(a, b) * cplx(0.5);
  return g;
}

HeisElement group_inv(const HeisElement& a) {
  HeisElement g = a;
  for (auto& c : g.xc) c = -c;
  for (auto& c : g.xe) c = -c;
  g.t = -g.t;
  return g;
}

std::pair<HeisElement, HeisElement> wod_split(const HeisElement& g) {
  HeisElement g0 = g, ex = HeisElement::identity(*g.alg, g.t.generators());
  for (auto& c : g0.xe) c = GrassmannElement(g.t.generators());
  ex.xe = g.xe;
  return {g0, ex};
}

HeisAlgVec adjoint(const HeisElement& g, const HeisAlgVec& X) {
  const HeisAlg& H = *g.alg;
  HeisAlgVec r = X;
  HeisElement xe;
  xe.alg = &H;
  xe.xc = X.xc;
  xe.xe = X.xe;
  xe.t = GrassmannElement(X.z.generators());
  r.z = X.z + heis_omega(g, xe);
  return r;
}

HeisAlgVec coadjoint(const HeisElement& g, const HeisAlgVec& mu) {
  HeisAlgVec r = mu;
  for (size_t i = 0; i < r.xc.size(); ++i) r.xc[i] = mu.xc[i] - mu.z * g.xc[i];
  for (size_t i = 0; i < r.xe.size(); ++i) r.xe[i] = mu.xe[i] - mu.z * g.xe[i];
  return r;
}

}  // namespace superheis
