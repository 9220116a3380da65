#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hkq/polynomial.hpp"

namespace hkq {

/// Hard resource limits for Groebner computations. Exceeding either raises
/// BudgetExceeded; nothing is ever silently truncated.
struct Budget {
  std::size_t max_basis_size = 200000;
  /// Cohomological degree bound on S-pair sugar.
  int max_degree = 1024;
  /// Re-check the Buchberger criterion whenever a basis is cached.
  bool verify = true;
};

/// Ideal in a polynomial ring with a lazily computed, shared reduced
/// Groebner basis. Copies share the cache; the cache is filled atomically.
class Ideal {
 public:
  Ideal() = default;
  Ideal(Ring ring, std::vector<Polynomial> generators);

  const Ring& ring() const { return ring_; }
  const std::vector<Polynomial>& generators() const { return gens_; }

  bool has_basis() const;
  /// Reduced Groebner basis (monic, inter-reduced, sorted by ascending
  /// leading monomial). Computed on first use.
  const std::vector<Polynomial>& basis(const Budget& budget = {}) const;
  std::vector<Monomial> leading_monomials(const Budget& budget = {}) const;

  bool is_unit(const Budget& budget = {}) const;
  bool is_homogeneous() const;

  /// `order` descriptor line followed by one generator per line.
  std::string serialize() const;
  static Ideal deserialize(const TablePtr& table, std::string_view text);

  /// Stores an already-reduced basis (used when a basis falls out of another
  /// computation, e.g. elimination).
  void seed_basis(std::vector<Polynomial> reduced, const Budget& budget) const;

 private:
  struct Cache {
    std::mutex mutex;
    std::shared_ptr<const std::vector<Polynomial>> basis;
  };

  Ring ring_;
  std::vector<Polynomial> gens_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// Reduced Groebner basis of the given generators.
std::vector<Polynomial> buchberger(const Ring& ring, std::vector<Polynomial> generators, const Budget& budget = {});

/// Complete reduction of f by `basis` (any list with nonzero members).
Polynomial reduce(const Polynomial& f, std::span<const Polynomial> basis);

/// Throws InternalCheckFailed unless every S-polynomial of `basis` reduces to
/// zero (pairs with coprime leading monomials are skipped).
void check_buchberger_criterion(std::span<const Polynomial> basis);

/// Inter-reduces a Groebner basis into its reduced form.
std::vector<Polynomial> interreduce(std::vector<Polynomial> basis);

Ideal groebner(const Ideal& ideal, const Budget& budget = {});
Polynomial normal_form(const Polynomial& f, const Ideal& ideal, const Budget& budget = {});
bool contains(const Ideal& ideal, const Polynomial& f, const Budget& budget = {});
/// Every generator of `sub` lies in `ideal`.
bool contains(const Ideal& ideal, const Ideal& sub, const Budget& budget = {});
bool same_ideal(const Ideal& a, const Ideal& b, const Budget& budget = {});

Ideal sum(const Ideal& a, const Ideal& b);
Ideal sum(const Ideal& a, const std::vector<Polynomial>& extra);

/// I ∩ J by eliminating a tag variable t from t·I + (1−t)·J.
Ideal intersect(const Ideal& a, const Ideal& b, const Budget& budget = {});

/// (I : f) = {g | g·f ∈ I}, via I ∩ ⟨f⟩ followed by exact division by f.
Ideal colon(const Ideal& ideal, const Polynomial& f, const Budget& budget = {});

/// Cofactors q_i with f = Σ q_i·g_i over the generators g_i, obtained from a
/// Groebner computation that tracks how each basis element arises. Returns
/// nullopt when f is not in the ideal. For homogeneous input the
/// computation is truncated at the degree of f.
std::optional<std::vector<Polynomial>> lift(const Ideal& ideal, const Polynomial& f, const Budget& budget = {});

}  // namespace hkq
