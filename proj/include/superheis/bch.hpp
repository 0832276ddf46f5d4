#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "superheis/heisenberg.hpp"

namespace superheis {

/// Exact rational with overflow-checked arithmetic (small denominators only).
struct Rational {
  long long num = 0, den = 1;
  Rational() = default;
  Rational(long long n, long long d = 1);
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(-num, den); }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool is_zero() const { return num == 0; }
  double value() const { return double(num) / double(den); }
  std::string str() const;
};

/// Element of the free associative Q-algebra on two symbols (0 and 1),
/// truncated beyond `order`; words are symbol strings.
struct FreeSeries {
  int order = 5;
  std::map<std::string, Rational> terms;

  static FreeSeries zero(int order) { return FreeSeries{order, {}}; }
  static FreeSeries one(int order);
  static FreeSeries symbol(int order, int s);
  FreeSeries operator+(const FreeSeries& o) const;
  FreeSeries operator-(const FreeSeries& o) const;
  FreeSeries operator*(const FreeSeries& o) const;
  FreeSeries scaled(const Rational& r) const;
  FreeSeries part(int degree) const;
  int lowest_degree() const;  // order+1 when zero
  void add(const std::string& w, const Rational& c);
};

FreeSeries fs_exp(const FreeSeries& a);       // requires zero constant term
FreeSeries fs_log1p(const FreeSeries& a);     // log(1 + a)

/// Right-nested bracket word with rational coefficient:
/// coef * [s_1, [s_2, [... [s_{k-1}, s_k] ...]]].
struct BracketTerm {
  Rational coef;
  std::vector<int> word;
};

/// Even/odd split of the product of exponentials in the free setting:
/// exp(X) exp(Y) = exp(B0) exp(B1) with B0 of even and B1 of odd word length.
struct BchSplit {
  int order;
  std::vector<BracketTerm> B0, B1;  // Lie-polynomial form via the Dynkin map
  FreeSeries B0_assoc, B1_assoc;    // associative form (for verification)
};

BchSplit bch_split(int order);

/// Exact order-3 coefficients of B1 in the basis {[X,[X,Y]], [Y,[X,Y]]}.
std::pair<Rational, Rational> bch1_order3_coefficients();

/// Evaluate the split on concrete odd-coefficient elements of a Lie
/// superalgebra; X, Y must lie in the odd sector with odd Grassmann
/// coefficients. Returns (B0, B1) as algebra elements.
std::pair<AlgVec, AlgVec> bch_graded(const AlgVec& X, const AlgVec& Y, int order = 5);

}  // namespace superheis
