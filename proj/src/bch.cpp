#include "superheis/bch.hpp"

#include <numeric>
#include <stdexcept>

namespace superheis {

namespace {
long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
  return r;
}
}  // namespace

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(checked_mul(num, o.den) + checked_mul(o.num, den), checked_mul(den, o.den));
}
Rational Rational::operator-(const Rational& o) const { return *this + (-o); }
Rational Rational::operator*(const Rational& o) const {
  return Rational(checked_mul(num, o.num), checked_mul(den, o.den));
}
Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) throw std::invalid_argument("division by zero");
  return Rational(checked_mul(num, o.den), checked_mul(den, o.num));
}
std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

FreeSeries FreeSeries::one(int order) {
  FreeSeries f{order, {}};
  f.terms[""] = Rational(1);
  return f;
}

FreeSeries FreeSeries::symbol(int order, int s) {
  FreeSeries f{order, {}};
  f.terms[std::string(1, char('0' + s))] = Rational(1);
  return f;
}

void FreeSeries::add(const std::string& w, const Rational& c) {
  if (int(w.size()) > order || c.is_zero()) return;
  auto [it, ins] = terms.try_emplace(w, c);
  if (!ins) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

FreeSeries FreeSeries::operator+(const FreeSeries& o) const {
  FreeSeries r = *this;
  for (auto& [w, c] : o.terms) r.add(w, c);
  return r;
}

FreeSeries FreeSeries::operator-(const FreeSeries& o) const {
  FreeSeries r = *this;
  for (auto& [w, c] : o.terms) r.add(w, -c);
  return r;
}

FreeSeries FreeSeries::operator*(const FreeSeries& o) const {
  FreeSeries r = zero(order);
  for (auto& [wa, ca] : terms)
    for (auto& [wb, cb] : o.terms) {
      if (int(wa.size() + wb.size()) > order) continue;
      r.add(wa + wb, ca * cb);
    }
  return r;
}

FreeSeries FreeSeries::scaled(const Rational& s) const {
  FreeSeries r = zero(order);
  for (auto& [w, c] : terms) r.add(w, c * s);
  return r;
}

FreeSeries FreeSeries::part(int degree) const {
  FreeSeries r = zero(order);
  for (auto& [w, c] : terms)
    if (int(w.size()) == degree) r.add(w, c);
  return r;
}

int FreeSeries::lowest_degree() const {
  int d = order + 1;
  for (auto& [w, c] : terms) d = std::min<int>(d, int(w.size()));
  return d;
}

FreeSeries fs_exp(const FreeSeries& a) {
  if (a.terms.count(""))
    throw std::invalid_argument("fs_exp requires vanishing constant term");
  FreeSeries r = FreeSeries::one(a.order), pw = FreeSeries::one(a.order);
  Rational fact(1);
  for (int k = 1; k <= a.order; ++k) {
    pw = pw * a;
    if (pw.terms.empty()) break;
    fact = fact * Rational(k);
    r = r + pw.scaled(Rational(1) / fact);
  }
  return r;
}

FreeSeries fs_log1p(const FreeSeries& a) {
  if (a.terms.count(""))
    throw std::invalid_argument("fs_log1p requires vanishing constant term");
  FreeSeries r = FreeSeries::zero(a.order), pw = FreeSeries::one(a.order);
  for (int k = 1; k <= a.order; ++k) {
    pw = pw * a;
    if (pw.terms.empty()) break;
    Rational c(k % 2 ? 1 : -1, k);
    r = r + pw.scaled(c);
  }
  return r;
}

namespace {

// Dynkin map: a homogeneous Lie element given as an associative polynomial
// equals (1/k) sum_w c_w [w_1,[w_2,...,w_k]].
std::vector<BracketTerm> dynkin(const FreeSeries& f) {
  std::vector<BracketTerm> out;
  for (auto& [w, c] : f.terms) {
    if (w.empty()) continue;
    BracketTerm t;
    t.coef = c / Rational(int(w.size()));
    for (char ch : w) t.word.push_back(ch - '0');
    out.push_back(std::move(t));
  }
  return out;
}

// Expand a right-nested bracket word into the free associative algebra.
FreeSeries expand_bracket(int order, const std::vector<int>& word) {
  FreeSeries r = FreeSeries::symbol(order, word.back());
  for (int i = int(word.size()) - 2; i >= 0; --i) {
    FreeSeries s = FreeSeries::symbol(order, word[i]);
    r = s * r - r * s;
  }
  return r;
}

}  // namespace

BchSplit bch_split(int order) {
  if (order < 1 || order > 8) throw std::invalid_argument("bch order out of range");
  FreeSeries X = FreeSeries::symbol(order, 0), Y = FreeSeries::symbol(order, 1);
  FreeSeries target = fs_exp(X) * fs_exp(Y);
  FreeSeries B0 = FreeSeries::zero(order), B1 = FreeSeries::zero(order);
  for (int k = 1; k <= order; ++k) {
    FreeSeries T = fs_exp(B0.scaled(Rational(-1))) * target * fs_exp(B1.scaled(Rational(-1)));
    FreeSeries D = fs_log1p(T - FreeSeries::one(order));
    FreeSeries Dk = D.part(k);
    if (D.lowest_degree() < k)
      throw std::logic_error("bch split: defect below current order");
    if (k % 2 == 0)
      B0 = B0 + Dk;
    else
      B1 = B1 + Dk;
  }
  // final defect must vanish through the truncation order
  FreeSeries T = fs_exp(B0.scaled(Rational(-1))) * target * fs_exp(B1.scaled(Rational(-1)));
  if (!(T - FreeSeries::one(order)).terms.empty())
    throw std::logic_error("bch split: defining identity not satisfied");

  BchSplit s{order, dynkin(B0), dynkin(B1), B0, B1};
  // sanity: the Dynkin form re-expands to the associative form
  for (auto* pair : {&s.B0, &s.B1}) {
    FreeSeries re = FreeSeries::zero(order);
    for (auto& t : *pair) re = re + expand_bracket(order, t.word).scaled(t.coef);
    const FreeSeries& want = (pair == &s.B0) ? B0 : B1;
    if (!(re - want).terms.empty())
      throw std::logic_error("bch split: Dynkin form mismatch (non-Lie part)");
  }
  return s;
}

std::pair<Rational, Rational> bch1_order3_coefficients() {
  BchSplit s = bch_split(3);
  // reduce the associative degree-3 part of B1 against the expansions of
  // [X,[X,Y]] and [Y,[X,Y]]
  FreeSeries H1 = expand_bracket(3, {0, 0, 1});
  FreeSeries H2 = expand_bracket(3, {1, 0, 1});
  FreeSeries target = s.B1_assoc.part(3);
  // solve a*H1 + b*H2 = target by matching two independent words
  auto coeff = [](const FreeSeries& f, const std::string& w) {
    auto it = f.terms.find(w);
    return it == f.terms.end() ? Rational(0) : it->second;
  };
  // words "001" and "011" separate H1 and H2
  Rational a11 = coeff(H1, "001"), a12 = coeff(H2, "001");
  Rational a21 = coeff(H1, "011"), a22 = coeff(H2, "011");
  Rational b1 = coeff(target, "001"), b2 = coeff(target, "011");
  Rational det = a11 * a22 - a12 * a21;
  Rational a = (b1 * a22 - a12 * b2) / det;
  Rational b = (a11 * b2 - b1 * a21) / det;
  // verify the reduction is exact
  FreeSeries re = H1.scaled(a) + H2.scaled(b);
  if (!(re - target).terms.empty())
    throw std::logic_error("order-3 reduction failed");
  return {a, b};
}

std::pair<AlgVec, AlgVec> bch_graded(const AlgVec& X, const AlgVec& Y, int order) {
  const LieSuperAlg& L = *X.alg;
  int ngens = X.coeff.empty() ? 0 : X.coeff[0].generators();
  for (const AlgVec* v : {&X, &Y})
    for (int i = 0; i < L.dim(); ++i)
      if (!v->coeff[i].is_zero() && (L.deg(i) != 1 || v->coeff[i].parity() != 1))
        throw std::invalid_argument(
            "bch_graded requires odd-sector elements with odd Grassmann coefficients");
  BchSplit s = bch_split(order);
  auto eval = [&](const std::vector<BracketTerm>& terms) {
    AlgVec acc = AlgVec::zero(L, ngens);
    for (auto& t : terms) {
      AlgVec v = t.word.back() ? Y : X;
      for (int i = int(t.word.size()) - 2; i >= 0; --i)
        v = bracket(t.word[i] ? Y : X, v);
      acc = acc + v.scaled(cplx(t.coef.value()));
    }
    return acc;
  };
  return {eval(s.B0), eval(s.B1)};
}

}  // namespace superheis
