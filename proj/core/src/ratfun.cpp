#include "hkq/ratfun.hpp"

#include <sstream>

#include "hkq/error.hpp"

namespace hkq {

UPoly::UPoly(const Rational& c) {
  if (!hkq::is_zero(c)) c_.push_back(c);
}

UPoly::UPoly(std::vector<Rational> coefficients) : c_(std::move(coefficients)) { trim(); }

UPoly UPoly::x(unsigned power) {
  std::vector<Rational> c(power + 1, Rational(0));
  c[power] = 1;
  return UPoly(std::move(c));
}

void UPoly::trim() {
  while (!c_.empty() && hkq::is_zero(c_.back())) c_.pop_back();
}

Rational UPoly::coefficient(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return Rational(0);
  return c_[static_cast<std::size_t>(k)];
}

UPoly UPoly::operator-() const {
  UPoly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly();
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return UPoly(std::move(c));
}

void UPoly::divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r) {
  if (b.is_zero()) throw DivisionByZero("univariate division by zero");
  r = a;
  if (a.degree() < b.degree()) {
    q = UPoly();
    return;
  }
  std::vector<Rational> qc(static_cast<std::size_t>(a.degree() - b.degree() + 1), Rational(0));
  const Rational inv = 1 / b.leading();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    const int shift = r.degree() - b.degree();
    const Rational f = r.leading() * inv;
    qc[static_cast<std::size_t>(shift)] = f;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[j + static_cast<std::size_t>(shift)] -= f * b.c_[j];
    r.trim();
  }
  q = UPoly(std::move(qc));
}

UPoly UPoly::gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  UPoly r = *this;
  const Rational inv = 1 / leading();
  for (auto& c : r.c_) c *= inv;
  return r;
}

std::string UPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    Rational c = c_[static_cast<std::size_t>(k)];
    if (hkq::is_zero(c)) continue;
    if (first) {
      if (sgn(c) < 0) {
        os << "-";
        c = -c;
      }
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
      if (sgn(c) < 0) c = -c;
    }
    first = false;
    if (k == 0) {
      os << hkq::to_string(c);
      continue;
    }
    if (!is_one(c)) os << hkq::to_string(c) << "*";
    os << var;
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

RationalFunction::RationalFunction(UPoly num, UPoly den) {
  if (den.is_zero()) throw DivisionByZero("rational function with zero denominator");
  if (num.is_zero()) {
    den_ = UPoly(Rational(1));
    return;
  }
  UPoly g = UPoly::gcd(num, den);
  UPoly q, r;
  UPoly::divmod(num, g, num_, r);
  UPoly::divmod(den, g, den_, r);
  const Rational lead = den_.leading();
  if (!is_one(lead)) {
    num_ = num_ * UPoly(1 / lead);
    den_ = den_ * UPoly(1 / lead);
  }
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero() || b.is_zero()) return RationalFunction();
  return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw DivisionByZero("division by the zero rational function");
  return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

std::string RationalFunction::to_string(const std::string& var) const {
  if (is_polynomial()) return num_.to_string(var);
  return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
}

UPoly to_upoly(const Polynomial& p, std::size_t var) {
  std::vector<Rational> c;
  for (const auto& t : p.terms()) {
    for (std::size_t i = 0; i < p.ring().size(); ++i) {
      if (i != var && t.mono.exponent(i)) throw Error("to_upoly: polynomial involves other variables");
    }
    const auto e = t.mono.exponent(var);
    if (c.size() <= e) c.resize(e + 1, Rational(0));
    c[e] += t.coef;
  }
  return UPoly(std::move(c));
}

Polynomial from_upoly(const UPoly& p, const Ring& ring, std::size_t var) {
  std::vector<Term> terms;
  for (int k = 0; k <= p.degree(); ++k) {
    const Rational c = p.coefficient(k);
    if (!is_zero(c)) terms.push_back({ring.variable(var, k), c});
  }
  return Polynomial::from_terms(ring, std::move(terms));
}

}  // namespace hkq
