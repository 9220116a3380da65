#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "hkq/polynomial.hpp"
#include "hkq/rational.hpp"

namespace hkq {

/// Dense univariate polynomial over Q in the equivariant parameter x.
class UPoly {
 public:
  UPoly() = default;
  UPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
  explicit UPoly(std::vector<Rational> coefficients);

  static UPoly x(unsigned power = 1);

  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coefficients() const { return c_; }
  Rational coefficient(int k) const;
  const Rational& leading() const { return c_.back(); }

  UPoly operator-() const;
  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  bool operator==(const UPoly& other) const { return c_ == other.c_; }

  /// Euclidean division: a = q*b + r with deg r < deg b.
  static void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r);
  static UPoly gcd(UPoly a, UPoly b);
  UPoly monic() const;

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Element of K = Q(x): numerator/denominator coprime, denominator monic.
class RationalFunction {
 public:
  RationalFunction() : den_(Rational(1)) {}
  RationalFunction(const Rational& c) : num_(c), den_(Rational(1)) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(const UPoly& p) : num_(p), den_(Rational(1)) {}     // NOLINT(google-explicit-constructor)
  RationalFunction(UPoly num, UPoly den);

  static RationalFunction x(unsigned power = 1) { return RationalFunction(UPoly::x(power)); }

  const UPoly& numerator() const { return num_; }
  const UPoly& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  /// Throws DivisionByZero when b = 0.
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction& operator+=(const RationalFunction& b) { return *this = *this + b; }
  RationalFunction& operator-=(const RationalFunction& b) { return *this = *this - b; }
  RationalFunction& operator*=(const RationalFunction& b) { return *this = *this * b; }
  RationalFunction& operator/=(const RationalFunction& b) { return *this = *this / b; }
  bool operator==(const RationalFunction& other) const { return num_ == other.num_ && den_ == other.den_; }

  std::string to_string(const std::string& var = "x") const;

 private:
  UPoly num_;
  UPoly den_;
};

/// Reads a polynomial that involves only the variable at `var` (other
/// variables must be absent) as a univariate polynomial.
inline std::ostream& operator<<(std::ostream& os, const RationalFunction& f) { return os << f.to_string(); }

UPoly to_upoly(const Polynomial& p, std::size_t var);
Polynomial from_upoly(const UPoly& p, const Ring& ring, std::size_t var);

}  // namespace hkq
