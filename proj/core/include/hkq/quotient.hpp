#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hkq/ideal.hpp"

namespace hkq {

/// Graded dimensions of a quotient ring indexed by cohomological degree
/// (odd entries are always zero).
struct HilbertSeries {
  std::vector<std::uint64_t> coefficients;
  /// True when the quotient is finite-dimensional and every nonzero
  /// coefficient is listed.
  bool exact = false;

  std::uint64_t coefficient(int degree) const;
  std::uint64_t total() const;
  /// Coefficients of even degrees 0, 2, 4, ... with trailing zeros removed.
  std::vector<std::uint64_t> even_coefficients() const;
  bool operator==(const HilbertSeries&) const = default;
};

/// R/I for a polynomial ring R; all questions are answered from the reduced
/// Groebner basis of I.
class QuotientRing {
 public:
  QuotientRing() = default;
  explicit QuotientRing(Ideal ideal, Budget budget = {});

  const Ring& ring() const { return ideal_.ring(); }
  const Ideal& ideal() const { return ideal_; }
  const Budget& budget() const { return budget_; }

  Polynomial reduce(const Polynomial& f) const;
  bool is_zero(const Polynomial& f) const { return reduce(f).is_zero(); }

  /// Every variable has a pure power among the leading monomials.
  bool is_finite_dimensional() const;

  /// Standard monomials of cohomological degree d, ascending in the order.
  std::vector<Monomial> graded_basis(int degree) const;
  /// All standard monomials; requires a finite-dimensional quotient.
  std::vector<Monomial> basis() const;
  HilbertSeries hilbert_series(int max_degree) const;

  /// Coordinates of reduce(f) against `basis`; throws when a term of the
  /// normal form is missing from it.
  std::vector<Rational> coordinates(const Polynomial& f, const std::vector<Monomial>& basis) const;

  /// Rank over Q(v) of the quotient localized at the variable v, for a
  /// homogeneous ideal under grevlex with v the last variable.
  std::size_t localized_rank(std::size_t var) const;

 private:
  std::vector<std::vector<Monomial>> standard_by_weight(int max_weight) const;

  Ideal ideal_;
  Budget budget_;
};

/// Standard monomials (not divisible by any of `leading`) in weights
/// 0..max_weight over the variables whose index is in `vars`.
std::vector<std::vector<Monomial>> standard_monomials(const Ring& ring, const std::vector<Monomial>& leading,
                                                      const std::vector<std::size_t>& vars, int max_weight);

}  // namespace hkq
