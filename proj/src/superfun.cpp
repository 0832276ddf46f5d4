#include "superheis/superfun.hpp"

#include <bit>
#include <cmath>

namespace superheis {

SuperFun SuperFun::constant(int nvars, int ngens, cplx c) {
  SuperFun f(nvars, ngens);
  if (c != cplx(0.0)) f.comps_[0] = GaussPolyPhase::constant(nvars, c);
  return f;
}

SuperFun SuperFun::generator(int nvars, int ngens, int g) {
  SuperFun f(nvars, ngens);
  if (g < 0 || g >= ngens)
    throw BudgetOverflow("superfun generator index exceeds budget");
  f.comps_[Mask(1) << g] = GaussPolyPhase::constant(nvars, 1.0);
  return f;
}

SuperFun SuperFun::from_even(int ngens, const GaussPolyPhase& f0) {
  SuperFun f(f0.nvars(), ngens);
  if (!f0.is_zero()) f.comps_[0] = f0;
  return f;
}

SuperFun SuperFun::from_grassmann(int nvars, const GrassmannElement& a) {
  SuperFun f(nvars, a.generators());
  for (auto& [m, c] : a.terms()) f.comps_[m] = GaussPolyPhase::constant(nvars, c);
  return f;
}

GaussPolyPhase SuperFun::comp(Mask m) const {
  auto it = comps_.find(m);
  return it == comps_.end() ? GaussPolyPhase::zero(nvars_) : it->second;
}

void SuperFun::set_comp(Mask m, GaussPolyPhase f) {
  if (f.is_zero())
    comps_.erase(m);
  else
    comps_[m] = std::move(f);
}

void SuperFun::add_comp(Mask m, const GaussPolyPhase& f) {
  if (f.is_zero()) return;
  auto it = comps_.find(m);
  if (it == comps_.end())
    comps_[m] = f;
  else {
    it->second = it->second + f;
    if (it->second.is_zero()) comps_.erase(it);
  }
}

SuperFun SuperFun::operator+(const SuperFun& o) const {
  SuperFun r = *this;
  for (auto& [m, f] : o.comps_) r.add_comp(m, f);
  return r;
}

SuperFun SuperFun::operator-(const SuperFun& o) const { return *this + o * cplx(-1.0); }

SuperFun SuperFun::operator*(const SuperFun& o) const {
  SuperFun r(nvars_, std::max(ngens_, o.ngens_));
  for (auto& [ma, fa] : comps_)
    for (auto& [mb, fb] : o.comps_) {
      if (ma & mb) continue;
      double s = GrassmannElement::merge_sign(ma, mb);
      r.add_comp(ma | mb, fa * fb * cplx(s));
    }
  return r;
}

SuperFun SuperFun::operator*(cplx c) const {
  SuperFun r(nvars_, ngens_);
  if (c == cplx(0.0)) return r;
  for (auto& [m, f] : comps_) r.comps_[m] = f * c;
  return r;
}

SuperFun operator*(cplx c, const SuperFun& f) { return f * c; }

int SuperFun::parity() const {
  if (comps_.empty()) return 0;
  int p = std::popcount(comps_.begin()->first) & 1;
  for (auto& [m, f] : comps_)
    if ((std::popcount(m) & 1) != p) return -1;
  return p;
}

SuperFun SuperFun::conjugate(const std::vector<int>& pairing) const {
  SuperFun r(nvars_, ngens_);
  for (auto& [m, f] : comps_) {
    // image generators of the ascending monomial, in original order
    std::vector<int> seq;
    for (int g = 0; g < ngens_; ++g)
      if (m & (Mask(1) << g)) seq.push_back(pairing[g]);
    // sign = parity of inversions when re-sorting ascending
    int inv = 0;
    for (size_t i = 0; i < seq.size(); ++i)
      for (size_t j = i + 1; j < seq.size(); ++j)
        if (seq[i] > seq[j]) ++inv;
    Mask mm = 0;
    for (int g : seq) mm |= Mask(1) << g;
    double s = (inv & 1) ? -1.0 : 1.0;
    r.add_comp(mm, f.conjugate() * cplx(s));
  }
  return r;
}

SuperFun SuperFun::derive_odd(int g) const {
  SuperFun r(nvars_, ngens_);
  Mask bit = Mask(1) << g;
  for (auto& [m, f] : comps_) {
    if (!(m & bit)) continue;
    int below = std::popcount(m & (bit - 1));
    double s = (below & 1) ? -1.0 : 1.0;
    r.add_comp(m & ~bit, f * cplx(s));
  }
  return r;
}

SuperFun SuperFun::berezin(const std::vector<int>& order) const {
  SuperFun r = *this;
  for (int g : order) r = r.derive_odd(g);
  return r;
}

SuperFun SuperFun::derive_even(int var) const {
  SuperFun r(nvars_, ngens_);
  for (auto& [m, f] : comps_) r.add_comp(m, f.derivative(var));
  return r;
}

SuperFun SuperFun::mul_coord(int var) const {
  SuperFun r(nvars_, ngens_);
  for (auto& [m, f] : comps_) r.add_comp(m, f.mul_coord(var));
  return r;
}

SuperFun SuperFun::integrate_even(const std::vector<int>& vars) const {
  SuperFun r(nvars_, ngens_);
  for (auto& [m, f] : comps_) r.add_comp(m, f.integrate(vars));
  return r;
}

SuperFun SuperFun::pullback_even(const Eigen::MatrixXcd& L, const Eigen::VectorXcd& t) const {
  SuperFun r(int(L.cols()), ngens_);
  for (auto& [m, f] : comps_) r.add_comp(m, f.pullback(L, t));
  return r;
}

SuperFun SuperFun::translate_even(const std::vector<std::pair<int, SuperFun>>& shifts) const {
  // Affine (body-component) part handled by one simultaneous pullback.
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Identity(nvars_, nvars_);
  Eigen::VectorXcd t = Eigen::VectorXcd::Zero(nvars_);
  std::vector<std::pair<int, SuperFun>> nil;
  for (auto& [i, shift] : shifts) {
    GaussPolyPhase body = shift.comp(0);
    if (!body.is_polynomial())
      throw std::logic_error("translate_even: shift body must be polynomial");
    for (auto& tm : body.terms()) {
      int deg = 0, which = -1;
      for (int v = 0; v < nvars_; ++v)
        for (int k = 0; k < tm.nu[v]; ++k) {
          ++deg;
          which = v;
        }
      if (deg == 0)
        t(i) -= tm.c;
      else if (deg == 1)
        L(i, which) -= tm.c;
      else
        throw std::logic_error("translate_even: shift body must be affine");
    }
    SuperFun n = shift;
    n.set_comp(0, GaussPolyPhase::zero(nvars_));
    if (!n.is_zero()) nil.emplace_back(i, -n);  // +n appears with (-shift)
  }
  SuperFun r = pullback_even(L, t);
  // Taylor expansion in the nilpotent (even) parts: f(x - n) = sum (-n)^k/k! d^k f.
  for (auto& [i, negn] : nil) {
    SuperFun acc = r;
    SuperFun pw = SuperFun::constant(nvars_, ngens_, 1.0);
    SuperFun df = r;
    double fact = 1.0;
    for (int k = 1;; ++k) {
      pw = pw * negn;
      if (pw.is_zero()) break;
      df = df.derive_even(i);
      if (df.is_zero()) break;
      fact *= k;
      acc = acc + pw * df * cplx(1.0 / fact);
    }
    r = acc;
  }
  return r;
}

SuperFun SuperFun::subst_odd(const std::map<int, SuperFun>& images) const {
  SuperFun r(nvars_, ngens_);
  for (auto& [m, f] : comps_) {
    SuperFun prod = SuperFun::from_even(ngens_, f);
    for (int g = 0; g < ngens_; ++g) {
      if (!(m & (Mask(1) << g))) continue;
      auto it = images.find(g);
      SuperFun factor =
          it == images.end() ? SuperFun::generator(nvars_, ngens_, g) : it->second;
      prod = prod * factor;
    }
    r = r + prod;
  }
  return r;
}

std::map<SuperFun::Mask, cplx> SuperFun::eval_even(const Eigen::VectorXcd& x) const {
  std::map<Mask, cplx> r;
  for (auto& [m, f] : comps_) {
    cplx v = f.eval(x);
    if (v != cplx(0.0)) r[m] = v;
  }
  return r;
}

GrassmannElement SuperFun::as_grassmann() const {
  GrassmannElement g(std::min<int>(ngens_, GrassmannElement::kMaxGenerators));
  for (auto& [m, f] : comps_) g.add_term(m, f.as_constant());
  return g;
}

double SuperFun::max_coeff() const {
  double v = 0;
  for (auto& [m, f] : comps_) v = std::max(v, f.max_coeff());
  return v;
}

void SuperFun::compress(double tol) {
  for (auto it = comps_.begin(); it != comps_.end();) {
    it->second.compress(tol);
    if (it->second.is_zero())
      it = comps_.erase(it);
    else
      ++it;
  }
}

SuperFun exp_superfun(const SuperFun& e) {
  GaussPolyPhase body = e.comp(0);
  Eigen::MatrixXcd Q;
  Eigen::VectorXcd b;
  cplx c0;
  body.quadratic_parts(Q, b, c0);
  // exp(c0 + b.x - x.Qx) as a single Gaussian term
  GaussPolyPhase gauss = GaussPolyPhase::gaussian(e.nvars(), Q, b, std::exp(c0));
  SuperFun nil = e;
  nil.set_comp(0, GaussPolyPhase::zero(e.nvars()));
  if (nil.parity() == 1 || (nil.parity() == -1))
    throw std::logic_error("exp_superfun: nilpotent part must be even");
  SuperFun r = SuperFun::constant(e.nvars(), e.ngens(), 1.0);
  SuperFun pw = r;
  double fact = 1.0;
  for (int k = 1;; ++k) {
    pw = pw * nil;
    if (pw.is_zero()) break;
    fact *= k;
    r = r + pw * cplx(1.0 / fact);
  }
  return r * SuperFun::from_even(e.ngens(), gauss);
}

}  // namespace superheis
