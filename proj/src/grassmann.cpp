#include "superheis/grassmann.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace superheis {

GrassmannElement::GrassmannElement(int n_generators) : n_(n_generators) {
  if (n_ < 0 || n_ > kMaxGenerators)
    throw BudgetOverflow("generator budget out of range: " + std::to_string(n_generators));
}

GrassmannElement GrassmannElement::scalar(int n, cplx c) {
  GrassmannElement g(n);
  g.add_term(0, c);
  return g;
}

GrassmannElement GrassmannElement::generator(int n, int i) {
  GrassmannElement g(n);
  if (i < 0 || i >= n)
    throw BudgetOverflow("generator index " + std::to_string(i) + " exceeds budget " +
                         std::to_string(n));
  g.add_term(Mask(1) << i, 1.0);
  return g;
}

GrassmannElement GrassmannElement::monomial(int n, Mask m, cplx c) {
  GrassmannElement g(n);
  if (n < kMaxGenerators && (m >> n) != 0)
    throw BudgetOverflow("monomial uses generators beyond budget");
  g.add_term(m, c);
  return g;
}

cplx GrassmannElement::coeff(Mask m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

bool GrassmannElement::is_nilpotent() const { return coeff(0) == cplx(0.0); }

int GrassmannElement::max_degree() const {
  int d = 0;
  for (auto& [m, c] : terms_) d = std::max(d, std::popcount(m));
  return d;
}

int GrassmannElement::parity() const {
  if (terms_.empty()) return 0;
  int p = std::popcount(terms_.begin()->first) & 1;
  for (auto& [m, c] : terms_)
    if ((std::popcount(m) & 1) != p) return -1;
  return p;
}

GrassmannElement& GrassmannElement::add_term(Mask m, cplx c) {
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    prune(m);
  } else if (c == cplx(0.0)) {
    terms_.erase(it);
  }
  return *this;
}

void GrassmannElement::prune(Mask m) {
  auto it = terms_.find(m);
  if (it != terms_.end() && it->second == cplx(0.0)) terms_.erase(it);
}

int GrassmannElement::merge_sign(Mask a, Mask b) {
  int swaps = 0;
  Mask bb = b;
  while (bb) {
    int j = std::countr_zero(bb);
    bb &= bb - 1;
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

GrassmannElement GrassmannElement::operator-() const {
  GrassmannElement r(n_);
  for (auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

GrassmannElement GrassmannElement::operator+(const GrassmannElement& o) const {
  GrassmannElement r = *this;
  r += o;
  return r;
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& o) {
  for (auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

GrassmannElement GrassmannElement::operator-(const GrassmannElement& o) const {
  GrassmannElement r = *this;
  for (auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

GrassmannElement GrassmannElement::operator*(const GrassmannElement& o) const {
  GrassmannElement r(std::max(n_, o.n_));
  for (auto& [ma, ca] : terms_)
    for (auto& [mb, cb] : o.terms_) {
      if (ma & mb) continue;  // shared generator squares to zero
      r.add_term(ma | mb, ca * cb * double(merge_sign(ma, mb)));
    }
  return r;
}

GrassmannElement GrassmannElement::operator*(cplx c) const {
  GrassmannElement r(n_);
  if (c == cplx(0.0)) return r;
  for (auto& [m, v] : terms_) r.terms_[m] = v * c;
  return r;
}

GrassmannElement operator*(cplx c, const GrassmannElement& g) { return g * c; }

bool GrassmannElement::approx_equal(const GrassmannElement& o, double tol) const {
  return (*this - o).max_abs() <= tol;
}

double GrassmannElement::max_abs() const {
  double m = 0;
  for (auto& [mask, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

std::string GrassmannElement::str() const {
  std::ostringstream os;
  bool first = true;
  for (auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    for (int i = 0; i < 32; ++i)
      if (m & (Mask(1) << i)) os << "*g" << i;
  }
  if (first) os << "0";
  return os.str();
}

cplx gr_body(const GrassmannElement& a) { return a.body(); }

GrassmannElement gr_conj(const GrassmannElement& a) {
  GrassmannElement r(a.generators());
  for (auto& [m, c] : a.terms()) r.add_term(m, std::conj(c));
  return r;
}

GrassmannElement gr_exp(const GrassmannElement& a) {
  if (!a.is_nilpotent())
    throw std::invalid_argument("gr_exp requires a nilpotent argument (or a truncation order)");
  return gr_exp(a, a.generators() + 1);
}

GrassmannElement gr_exp(const GrassmannElement& a, int truncation_order) {
  GrassmannElement r = GrassmannElement::scalar(a.generators(), 1.0);
  GrassmannElement pw = r;
  for (int k = 1; k <= truncation_order; ++k) {
    pw = pw * a * cplx(1.0 / k);
    if (pw.is_zero()) break;
    r += pw;
  }
  return r;
}

}  // namespace superheis
