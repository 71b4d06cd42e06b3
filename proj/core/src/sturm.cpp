// Exact root counting with Sturm chains over the integers.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "randpoly/rootcount.hpp"

namespace randpoly {

namespace {

using Poly = std::vector<mpz_class>;  // ascending coefficients, no leading zeros

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

void make_primitive(Poly& p) {
  mpz_class g = 0;
  for (const auto& a : p) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
    if (g == 1) return;
  }
  if (g > 1) {
    for (auto& a : p) mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
  }
}

Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t j = 1; j < p.size(); ++j) d.push_back(p[j] * static_cast<unsigned long>(j));
  trim(d);
  return d;
}

// Remainder of a by b up to a positive factor: the sign of every coefficient
// relation needed by Sturm's theorem is preserved.
Poly positive_remainder(Poly a, const Poly& b) {
  const mpz_class& lb = b.back();
  const int sb = sgn(lb);
  const mpz_class alb = abs(lb);
  while (!a.empty() && a.size() >= b.size()) {
    const mpz_class la = a.back();
    const std::size_t shift = a.size() - b.size();
    for (auto& x : a) x *= alb;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (sb > 0) {
        a[i + shift] -= la * b[i];
      } else {
        a[i + shift] += la * b[i];
      }
    }
    trim(a);
    make_primitive(a);
  }
  return a;
}

Poly gcd_poly(Poly a, Poly b) {
  while (!b.empty()) {
    Poly r = positive_remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  make_primitive(a);
  return a;
}

// Exact quotient a / b where b divides a over the rationals, returned as a
// primitive integer polynomial.
Poly exact_quotient(const Poly& a, const Poly& b) {
  std::vector<mpq_class> rem(a.begin(), a.end());
  std::vector<mpq_class> quo(a.size() - b.size() + 1);
  const mpq_class lb(b.back());
  for (std::size_t k = quo.size(); k-- > 0;) {
    const mpq_class f = rem[k + b.size() - 1] / lb;
    quo[k] = f;
    for (std::size_t i = 0; i < b.size(); ++i) rem[k + i] -= f * mpq_class(b[i]);
  }
  mpz_class den = 1;
  for (const auto& q : quo) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
  Poly out;
  for (const auto& q : quo) out.push_back(q.get_num() * (den / q.get_den()));
  trim(out);
  make_primitive(out);
  return out;
}

// Sign of p(num/den) for den > 0 via the homogenized form.
int sign_at(const Poly& p, const mpz_class& num, const mpz_class& den) {
  mpz_class acc = p.back();
  mpz_class dpow = den;
  for (std::size_t j = p.size() - 1; j-- > 0;) {
    acc = acc * num + p[j] * dpow;
    dpow *= den;
  }
  return sgn(acc);
}

struct Point {
  mpz_class num, den;  // den > 0 for finite points
  int inf = 0;         // +1 / -1 for +-infinity
};

int sign_at(const Poly& p, const Point& x) {
  if (x.inf == 0) return sign_at(p, x.num, x.den);
  const int lead = sgn(p.back());
  return (x.inf < 0 && degree(p) % 2 == 1) ? -lead : lead;
}

int variations(const std::vector<Poly>& chain, const Point& x) {
  int v = 0, last = 0;
  for (const auto& p : chain) {
    const int s = sign_at(p, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

Point make_point(const mpq_class& q) { return {q.get_num(), q.get_den(), 0}; }

Point make_point(double x) {
  if (std::isinf(x)) return {0, 1, x > 0 ? 1 : -1};
  mpq_class q(x);
  q.canonicalize();
  return make_point(q);
}

bool empty_range(const Point& lo, const Point& hi, bool lo_closed, bool hi_closed) {
  if (lo.inf > 0 || hi.inf < 0) return true;
  if (lo.inf < 0 || hi.inf > 0) return false;
  const int c = cmp(mpq_class(lo.num, lo.den), mpq_class(hi.num, hi.den));
  return c > 0 || (c == 0 && !(lo_closed && hi_closed));
}

Poly integer_poly(std::span<const mpq_class> coeffs) {
  mpz_class den = 1;
  for (const auto& c : coeffs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  Poly f;
  f.reserve(coeffs.size());
  for (const auto& c : coeffs) f.push_back(c.get_num() * (den / c.get_den()));
  trim(f);
  return f;
}

std::vector<mpq_class> exact_coefficients(std::span<const double> coeffs) {
  std::vector<mpq_class> q;
  q.reserve(coeffs.size());
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw std::invalid_argument("coefficients must be finite");
    q.emplace_back(c);
  }
  return q;
}

std::size_t count_range(const std::vector<Poly>& chain, const Point& lo, const Point& hi,
                        bool lo_closed, bool hi_closed) {
  if (empty_range(lo, hi, lo_closed, hi_closed)) return 0;
  const Poly& f = chain.front();
  if (f.size() == 1) return 0;
  if (lo.inf == 0 && hi.inf == 0 && lo.num == hi.num && lo.den == hi.den) {
    return sign_at(f, lo) == 0 ? 1 : 0;
  }
  // V(lo) - V(hi) counts the distinct roots in (lo, hi].
  long count = static_cast<long>(variations(chain, lo)) - variations(chain, hi);
  if (lo.inf == 0 && lo_closed && sign_at(f, lo) == 0) ++count;
  if (hi.inf == 0 && !hi_closed && sign_at(f, hi) == 0) --count;
  return count < 0 ? 0 : static_cast<std::size_t>(count);
}

}  // namespace

SturmChain::SturmChain(std::span<const mpq_class> coeffs) { build(integer_poly(coeffs)); }

SturmChain::SturmChain(std::span<const double> coeffs) {
  const auto q = exact_coefficients(coeffs);
  build(integer_poly(q));
}

void SturmChain::build(Poly f) {
  if (f.empty()) throw std::invalid_argument("Sturm count of the identically zero polynomial");
  if (f.size() - 1 > kSturmMaxDegree) {
    throw std::invalid_argument("Sturm oracle degree guard: degree " +
                                std::to_string(f.size() - 1) + " exceeds " +
                                std::to_string(kSturmMaxDegree));
  }
  make_primitive(f);
  if (f.size() > 1) {
    const Poly g = gcd_poly(f, derivative(f));
    if (degree(g) > 0) f = exact_quotient(f, g);
  }
  chain_.clear();
  chain_.push_back(f);
  if (f.size() == 1) return;
  chain_.push_back(derivative(f));
  while (degree(chain_.back()) > 0) {
    Poly r = positive_remainder(chain_[chain_.size() - 2], chain_.back());
    if (r.empty()) break;
    for (auto& x : r) x = -x;
    chain_.push_back(std::move(r));
  }
}

std::size_t SturmChain::count(const mpq_class& lo, const mpq_class& hi, bool lo_closed,
                              bool hi_closed) const {
  mpq_class a = lo, b = hi;
  a.canonicalize();
  b.canonicalize();
  return count_range(chain_, make_point(a), make_point(b), lo_closed, hi_closed);
}

std::size_t SturmChain::count(const Interval& iv) const {
  return count_range(chain_, make_point(iv.lo), make_point(iv.hi), iv.lo_closed, iv.hi_closed);
}

std::size_t sturm_exact(std::span<const mpq_class> coeffs, const mpq_class& lo,
                        const mpq_class& hi, bool lo_closed, bool hi_closed) {
  return SturmChain(coeffs).count(lo, hi, lo_closed, hi_closed);
}

std::size_t sturm_exact(std::span<const double> coeffs, const Interval& iv) {
  return SturmChain(coeffs).count(iv);
}

int exact_sign(std::span<const double> coeffs, double x) {
  // Doubles are dyadic rationals, so the evaluation is exact.
  const Poly p = integer_poly(exact_coefficients(coeffs));
  if (p.empty()) return 0;
  const mpq_class xq(x);
  return sign_at(p, xq.get_num(), xq.get_den());
}

}  // namespace randpoly
