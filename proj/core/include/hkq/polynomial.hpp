#pragma once

#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hkq/rational.hpp"
#include "hkq/ring.hpp"

namespace hkq {

struct Term {
  Monomial mono;
  Rational coef;
};

/// Exact multivariate polynomial over Q.
///
/// Terms are kept strictly descending in the ring's monomial order with no
/// zero coefficients; the zero polynomial has no terms.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(Ring ring) : ring_(std::move(ring)) {}

  static Polynomial constant(const Ring& ring, const Rational& c);
  static Polynomial variable(const Ring& ring, std::size_t index);
  static Polynomial variable(const Ring& ring, std::string_view name);
  static Polynomial monomial(const Ring& ring, const Monomial& m, Rational c = 1);
  /// Sorts, merges duplicates and drops zeros.
  static Polynomial from_terms(const Ring& ring, std::vector<Term> terms);
  /// Trusts that `terms` are already canonical (strictly descending, nonzero).
  static Polynomial from_sorted_terms(const Ring& ring, std::vector<Term> terms);

  const Ring& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }

  const Term& leading_term() const { return terms_.front(); }
  const Monomial& leading_monomial() const { return terms_.front().mono; }
  const Rational& leading_coef() const { return terms_.front().coef; }

  /// Largest algebraic weight of a term (weight = cohomological degree / 2).
  int weight() const;
  /// Cohomological degree of the highest-weight term; 0 for the zero polynomial.
  int degree() const { return 2 * weight(); }
  bool is_homogeneous() const;
  /// The sum of terms of algebraic weight w.
  Polynomial homogeneous_part(int w) const;
  bool involves(std::size_t var) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  Polynomial pow(unsigned e) const;

  /// this + c * m * g, computed by a single merge.
  Polynomial add_scaled(const Rational& c, const Monomial& m, const Polynomial& g) const;
  Polynomial times_monomial(const Monomial& m, const Rational& c = 1) const;
  /// Divides by the leading coefficient.
  Polynomial monic() const;

  /// Re-sorts the terms under a different order on the same table.
  Polynomial with_ring(const Ring& ring) const;

  bool operator==(const Polynomial& other) const;
  bool operator!=(const Polynomial& other) const { return !(*this == other); }

  /// Canonical text form `c*v1^e1*v2^e2 + ...`.
  std::string to_string() const;

 private:
  void check_ring(const Polynomial& other) const;

  Ring ring_;
  std::vector<Term> terms_;
};

/// Parses expressions built from rationals (`p/q`), variables, `+ - * ^` and
/// parentheses. The canonical output of Polynomial::to_string parses back to
/// an identical polynomial.
Polynomial parse_polynomial(const Ring& ring, std::string_view text);

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

/// Ring homomorphism defined on variables. Variables of `p` that are not bound
/// map to the same-named variable of `target` when it exists.
Polynomial substitute(const Polynomial& p, const std::map<std::string, Polynomial>& bindings, const Ring& target);
inline Polynomial substitute(const Polynomial& p, const std::map<std::string, Polynomial>& bindings) {
  return substitute(p, bindings, p.ring());
}

/// Exact quotient f / g; throws InexactDivision when g does not divide f.
Polynomial divide_exact(const Polynomial& f, const Polynomial& g);

/// Moves `p` into a ring whose table contains all variables occurring in p
/// (matched by name).
Polynomial change_ring(const Polynomial& p, const Ring& target);

}  // namespace hkq
