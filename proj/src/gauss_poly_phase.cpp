#include "superheis/gauss_poly_phase.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

namespace superheis {

namespace {
constexpr double kPi = std::numbers::pi;

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& M) {
  return M.size() ? M.cwiseAbs().maxCoeff() : 0.0;
}

bool all_zero(const std::vector<int>& v) {
  for (int x : v)
    if (x) return false;
  return true;
}
}  // namespace

Poly Poly::constant(int nvars, cplx c) {
  Poly p{nvars, {}};
  if (c != cplx(0.0)) p.terms[std::vector<int>(nvars, 0)] = c;
  return p;
}

Poly Poly::variable(int nvars, int i) {
  Poly p{nvars, {}};
  std::vector<int> m(nvars, 0);
  m[i] = 1;
  p.terms[m] = 1.0;
  return p;
}

void Poly::add(const std::vector<int>& mono, cplx c) {
  auto [it, ins] = terms.try_emplace(mono, c);
  if (!ins) {
    it->second += c;
    if (it->second == cplx(0.0)) terms.erase(it);
  } else if (c == cplx(0.0)) {
    terms.erase(it);
  }
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (auto& [m, c] : o.terms) r.add(m, c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r{nvars, {}};
  for (auto& [ma, ca] : terms)
    for (auto& [mb, cb] : o.terms) {
      std::vector<int> m(nvars);
      for (int i = 0; i < nvars; ++i) m[i] = ma[i] + mb[i];
      r.add(m, ca * cb);
    }
  return r;
}

Poly Poly::operator*(cplx c) const {
  Poly r{nvars, {}};
  if (c == cplx(0.0)) return r;
  for (auto& [m, v] : terms) r.terms[m] = v * c;
  return r;
}

Poly Poly::derivative(int i) const {
  Poly r{nvars, {}};
  for (auto& [m, c] : terms) {
    if (m[i] == 0) continue;
    std::vector<int> mm = m;
    mm[i] -= 1;
    r.add(mm, c * double(m[i]));
  }
  return r;
}

Poly Poly::subst_affine(int new_nvars, const std::vector<Poly>& images) const {
  Poly r = Poly::zero(new_nvars);
  for (auto& [m, c] : terms) {
    Poly t = Poly::constant(new_nvars, c);
    for (int i = 0; i < nvars; ++i)
      for (int k = 0; k < m[i]; ++k) t = t * images[i];
    r = r + t;
  }
  return r;
}

int Poly::degree() const {
  int d = 0;
  for (auto& [m, c] : terms) {
    int s = 0;
    for (int e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

// ---------------------------------------------------------------------------

GaussPolyPhase GaussPolyPhase::constant(int nvars, cplx c) {
  GaussPolyPhase f(nvars);
  if (c != cplx(0.0))
    f.terms_.push_back({c, std::vector<int>(nvars, 0), Eigen::MatrixXcd::Zero(nvars, nvars),
                        Eigen::VectorXcd::Zero(nvars)});
  return f;
}

GaussPolyPhase GaussPolyPhase::monomial(int nvars, const std::vector<int>& nu, cplx c) {
  GaussPolyPhase f(nvars);
  if (c != cplx(0.0))
    f.terms_.push_back(
        {c, nu, Eigen::MatrixXcd::Zero(nvars, nvars), Eigen::VectorXcd::Zero(nvars)});
  return f;
}

GaussPolyPhase GaussPolyPhase::gaussian(int nvars, const Eigen::MatrixXcd& Q,
                                        const Eigen::VectorXcd& b, cplx c) {
  GaussPolyPhase f(nvars);
  Eigen::MatrixXcd Qs = 0.5 * (Q + Q.transpose());
  if (c != cplx(0.0)) f.terms_.push_back({c, std::vector<int>(nvars, 0), Qs, b});
  return f;
}

GaussPolyPhase GaussPolyPhase::from_poly(const Poly& p) {
  GaussPolyPhase f(p.nvars);
  for (auto& [m, c] : p.terms)
    f.terms_.push_back(
        {c, m, Eigen::MatrixXcd::Zero(p.nvars, p.nvars), Eigen::VectorXcd::Zero(p.nvars)});
  return f;
}

void GaussPolyPhase::add_term(GppTerm t) {
  if (t.c == cplx(0.0)) return;
  terms_.push_back(std::move(t));
}

GaussPolyPhase GaussPolyPhase::operator+(const GaussPolyPhase& o) const {
  GaussPolyPhase r = *this;
  r.terms_.insert(r.terms_.end(), o.terms_.begin(), o.terms_.end());
  r.compress();
  return r;
}

GaussPolyPhase GaussPolyPhase::operator-(const GaussPolyPhase& o) const {
  return *this + o * cplx(-1.0);
}

GaussPolyPhase GaussPolyPhase::operator*(const GaussPolyPhase& o) const {
  GaussPolyPhase r(nvars_);
  for (auto& ta : terms_)
    for (auto& tb : o.terms_) {
      GppTerm t;
      t.c = ta.c * tb.c;
      t.nu.resize(nvars_);
      for (int i = 0; i < nvars_; ++i) t.nu[i] = ta.nu[i] + tb.nu[i];
      t.Q = ta.Q + tb.Q;
      t.b = ta.b + tb.b;
      r.terms_.push_back(std::move(t));
    }
  r.compress();
  return r;
}

GaussPolyPhase GaussPolyPhase::operator*(cplx c) const {
  GaussPolyPhase r = *this;
  if (c == cplx(0.0)) return GaussPolyPhase(nvars_);
  for (auto& t : r.terms_) t.c *= c;
  return r;
}

GaussPolyPhase GaussPolyPhase::conjugate() const {
  GaussPolyPhase r = *this;
  for (auto& t : r.terms_) {
    t.c = std::conj(t.c);
    t.Q = t.Q.conjugate();
    t.b = t.b.conjugate();
  }
  return r;
}

GaussPolyPhase GaussPolyPhase::derivative(int var) const {
  GaussPolyPhase r(nvars_);
  for (auto& t : terms_) {
    if (t.nu[var] > 0) {
      GppTerm a = t;
      a.c *= double(t.nu[var]);
      a.nu[var] -= 1;
      r.terms_.push_back(std::move(a));
    }
    // (b - 2 Q x)_var factor
    GppTerm lin = t;
    lin.c *= t.b(var);
    if (lin.c != cplx(0.0)) r.terms_.push_back(lin);
    for (int j = 0; j < nvars_; ++j) {
      cplx q = t.Q(var, j);
      if (q == cplx(0.0)) continue;
      GppTerm m = t;
      m.c *= -2.0 * q;
      m.nu[j] += 1;
      r.terms_.push_back(std::move(m));
    }
  }
  r.compress();
  return r;
}

GaussPolyPhase GaussPolyPhase::mul_coord(int var) const {
  GaussPolyPhase r = *this;
  for (auto& t : r.terms_) t.nu[var] += 1;
  return r;
}

GaussPolyPhase GaussPolyPhase::pullback(const Eigen::MatrixXcd& L,
                                        const Eigen::VectorXcd& t) const {
  int nv = int(L.cols());
  GaussPolyPhase r(nv);
  std::vector<Poly> images;
  images.reserve(nvars_);
  for (int i = 0; i < nvars_; ++i) {
    Poly p = Poly::constant(nv, t(i));
    for (int j = 0; j < nv; ++j)
      if (L(i, j) != cplx(0.0)) p.add([&] {
        std::vector<int> m(nv, 0);
        m[j] = 1;
        return m;
      }(), L(i, j));
    images.push_back(std::move(p));
  }
  for (auto& tm : terms_) {
    // exponent: -(Lx+t).Q(Lx+t) + b.(Lx+t)
    Eigen::MatrixXcd Q2 = L.transpose() * tm.Q * L;
    Eigen::VectorXcd b2 = L.transpose() * (tm.b - 2.0 * tm.Q * t);
    cplx c2 = tm.c * std::exp((-t.transpose() * tm.Q * t + tm.b.transpose() * t).value());
    // polynomial part
    Poly mono = Poly::constant(nv, 1.0);
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < tm.nu[i]; ++k) mono = mono * images[i];
    for (auto& [m, c] : mono.terms) {
      GppTerm out;
      out.c = c2 * c;
      out.nu = m;
      out.Q = 0.5 * (Q2 + Q2.transpose());
      out.b = b2;
      r.terms_.push_back(std::move(out));
    }
  }
  r.compress();
  return r;
}

cplx sqrt_det_right_halfplane(const Eigen::MatrixXcd& Q) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Q, false);
  cplx s = 1.0;
  for (int i = 0; i < Q.rows(); ++i) s *= std::sqrt(es.eigenvalues()(i));
  return s;
}

GaussPolyPhase GaussPolyPhase::integrate(const std::vector<int>& vars) const {
  if (vars.empty()) return *this;
  std::vector<int> S = vars;
  std::vector<bool> in_s(nvars_, false);
  for (int v : S) in_s[v] = true;
  std::vector<int> K;
  for (int i = 0; i < nvars_; ++i)
    if (!in_s[i]) K.push_back(i);
  int ns = int(S.size()), nk = int(K.size());

  GaussPolyPhase r(nvars_);
  for (auto& t : terms_) {
    Eigen::MatrixXcd A(ns, ns);
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < ns; ++j) A(i, j) = t.Q(S[i], S[j]);
    // Integrability: Re A positive definite.
    Eigen::MatrixXd ReA = A.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> res(ReA);
    double lo = res.eigenvalues().minCoeff();
    double hi = std::max(1.0, std::abs(res.eigenvalues().maxCoeff()));
    if (lo <= 1e-12 * hi)
      throw NonIntegrable("Gaussian integration requires Re Q positive definite on the "
                          "integrated variables");
    Eigen::MatrixXcd Ainv = A.inverse();

    Eigen::VectorXcd bS(ns);
    for (int i = 0; i < ns; ++i) bS(i) = t.b(S[i]);
    Eigen::MatrixXcd Qsk(ns, nk);
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < nk; ++j) Qsk(i, j) = t.Q(S[i], K[j]);

    cplx base = t.c * std::pow(kPi, 0.5 * ns) / sqrt_det_right_halfplane(A) *
                std::exp(0.25 * (bS.transpose() * Ainv * bS).value());

    // Remaining exponent (embedded back into the full variable space).
    Eigen::MatrixXcd Qkk(nk, nk);
    for (int i = 0; i < nk; ++i)
      for (int j = 0; j < nk; ++j) Qkk(i, j) = t.Q(K[i], K[j]);
    Eigen::MatrixXcd Qp = Qkk - Qsk.transpose() * Ainv * Qsk;
    Eigen::VectorXcd bK(nk);
    for (int i = 0; i < nk; ++i) bK(i) = t.b(K[i]);
    Eigen::VectorXcd bp = bK - Qsk.transpose() * Ainv * bS;

    // Moment polynomial: H indexed by the integrated powers, as a polynomial
    // in the linear form l(v) = bS - 2 Qsk v, via the recurrence
    // H_{nu+e_i} = dH/dc_i + (Ainv c / 2)_i H  evaluated at c = l(v).
    Poly H = Poly::constant(ns, 1.0);
    for (int i = 0; i < ns; ++i) {
      for (int k = 0; k < t.nu[S[i]]; ++k) {
        Poly next = H.derivative(i);
        for (int j = 0; j < ns; ++j) {
          cplx a = 0.5 * Ainv(i, j);
          if (a != cplx(0.0)) next = next + H * Poly::variable(ns, j) * a;
        }
        H = next;
      }
    }
    // Substitute c_j -> bS_j - 2 sum_k Qsk(j,k) v_k (v in full variable space).
    std::vector<Poly> images;
    images.reserve(ns);
    for (int j = 0; j < ns; ++j) {
      Poly p = Poly::constant(nvars_, bS(j));
      for (int k = 0; k < nk; ++k)
        if (Qsk(j, k) != cplx(0.0)) {
          std::vector<int> m(nvars_, 0);
          m[K[k]] = 1;
          p.add(m, -2.0 * Qsk(j, k));
        }
      images.push_back(std::move(p));
    }
    Poly Hv = H.subst_affine(nvars_, images);

    // Kept polynomial factor v^{nu_K}.
    std::vector<int> nuK(nvars_, 0);
    for (int j = 0; j < nk; ++j) nuK[K[j]] = t.nu[K[j]];

    Eigen::MatrixXcd Qfull = Eigen::MatrixXcd::Zero(nvars_, nvars_);
    Eigen::VectorXcd bfull = Eigen::VectorXcd::Zero(nvars_);
    for (int i = 0; i < nk; ++i) {
      bfull(K[i]) = bp(i);
      for (int j = 0; j < nk; ++j) Qfull(K[i], K[j]) = Qp(i, j);
    }
    for (auto& [mono, hc] : Hv.terms) {
      GppTerm out;
      out.c = base * hc;
      out.nu.resize(nvars_);
      for (int i = 0; i < nvars_; ++i) out.nu[i] = nuK[i] + mono[i];
      out.Q = Qfull;
      out.b = bfull;
      r.terms_.push_back(std::move(out));
    }
  }
  r.compress();
  return r;
}

cplx GaussPolyPhase::eval(const Eigen::VectorXcd& x) const {
  cplx v = 0.0;
  for (auto& t : terms_) {
    cplx mono = 1.0;
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < t.nu[i]; ++k) mono *= x(i);
    v += t.c * mono * std::exp((-x.transpose() * t.Q * x + t.b.transpose() * x).value());
  }
  return v;
}

cplx GaussPolyPhase::as_constant() const {
  cplx v = 0.0;
  for (auto& t : terms_) {
    if (!all_zero(t.nu) || max_abs(t.Q) > 0 || max_abs(t.b) > 0)
      throw std::logic_error("as_constant: function still depends on variables");
    v += t.c;
  }
  return v;
}

void GaussPolyPhase::compress(double tol) {
  std::vector<GppTerm> out;
  for (auto& t : terms_) {
    if (t.c == cplx(0.0)) continue;
    bool merged = false;
    for (auto& o : out) {
      if (o.nu != t.nu) continue;
      if (max_abs(o.Q - t.Q) > tol) continue;
      if (max_abs(o.b - t.b) > tol) continue;
      o.c += t.c;
      merged = true;
      break;
    }
    if (!merged) out.push_back(t);
  }
  std::erase_if(out, [](const GppTerm& t) { return t.c == cplx(0.0); });
  terms_ = std::move(out);
}

double GaussPolyPhase::max_coeff() const {
  double m = 0;
  for (auto& t : terms_) m = std::max(m, std::abs(t.c));
  return m;
}

bool GaussPolyPhase::is_polynomial() const {
  for (auto& t : terms_)
    if (max_abs(t.Q) > 0 || max_abs(t.b) > 0) return false;
  return true;
}

void GaussPolyPhase::quadratic_parts(Eigen::MatrixXcd& Q, Eigen::VectorXcd& b, cplx& c0) const {
  Q = Eigen::MatrixXcd::Zero(nvars_, nvars_);
  b = Eigen::VectorXcd::Zero(nvars_);
  c0 = 0.0;
  for (auto& t : terms_) {
    if (max_abs(t.Q) > 0 || max_abs(t.b) > 0)
      throw std::logic_error("quadratic_parts: term carries an exponential factor");
    int deg = 0, i1 = -1, i2 = -1;
    for (int i = 0; i < nvars_; ++i) {
      for (int k = 0; k < t.nu[i]; ++k) {
        ++deg;
        if (deg == 1) i1 = i;
        if (deg == 2) i2 = i;
      }
    }
    if (deg == 0)
      c0 += t.c;
    else if (deg == 1)
      b(i1) += t.c;
    else if (deg == 2) {
      // exponent convention: -x.Qx, so x_i x_j contributes -Q_ij - Q_ji
      Q(i1, i2) -= 0.5 * t.c;
      Q(i2, i1) -= 0.5 * t.c;
    } else
      throw std::logic_error("quadratic_parts: degree exceeds 2");
  }
}

}  // namespace superheis
