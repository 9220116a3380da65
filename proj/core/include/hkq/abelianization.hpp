#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hkq/error.hpp"
#include "hkq/quotient.hpp"

namespace hkq {

using Substitution = std::map<std::string, Polynomial>;

/// Roots of a compact group as linear forms on the Lie algebra of a maximal
/// torus. The ring holds the torus coordinates followed by the equivariant
/// parameter.
struct RootDatum {
  Ring ring;
  std::size_t torus_rank = 0;
  std::vector<Polynomial> positive_roots;
  std::uint64_t weyl_order = 1;
  /// Generators of the Weyl group acting on the torus coordinates.
  std::vector<Substitution> reflections;
  std::string parameter = "x";

  /// Checks linearity, homogeneity and Δ+ ∩ −Δ+ = ∅.
  void validate() const;
  Polynomial parameter_variable() const { return Polynomial::variable(ring, parameter); }
};

RootDatum su2();
/// Δ+ = {a1, a2, a1 + a2} with the two simple reflections.
RootDatum su3();

/// Text form:
///   torus a1 a2        (torus coordinates; required, first)
///   param x            (optional, default x)
///   root a1 + a2       (one positive root per line)
///   weyl 6
///   reflection a1 -> -a1, a2 -> a1 + a2
/// Blank lines and lines starting with '#' are ignored.
RootDatum parse_root_datum(std::string_view text);

/// ∏_{α∈Δ} α·(x−α), the product over both signs of every root.
Polynomial class_e(const RootDatum& r);
/// ∏_{α∈Δ−} α · ∏_{α∈Δ} (x−α).
Polynomial class_eprime(const RootDatum& r);
/// ∏_{α∈Δ+} α.
Polynomial class_b(const RootDatum& r);

/// True when p is fixed by every declared reflection.
bool is_weyl_invariant(const RootDatum& r, const Polynomial& p);

/// A presented Kirwan image: the W-invariant model with its Euler class and,
/// optionally, the full abelian model with the W-action and e′.
struct KirwanPresentation {
  QuotientRing invariant_ring;
  Polynomial euler;
  std::optional<QuotientRing> full_ring;
  /// The W-action on the full ring's ambient, as an involution.
  Substitution involution;
  std::optional<Polynomial> euler_prime;
  /// Surjectivity of the rationalized Kirwan map is a geometric input: it is
  /// carried with the presentation and never checked here.
  bool surjectivity_assumed = false;
};

/// invariant ambient / (J : e).
QuotientRing kirwan_image(const KirwanPresentation& k);

struct SecondIsoResult {
  bool equal = false;
  /// Cohomological degree bound of the comparison (inclusive).
  int max_degree = 0;
  std::vector<std::uint64_t> invariant_dims;
  std::vector<std::uint64_t> full_fixed_dims;
};

/// Thrown when the W-action does not preserve the full ideal.
class InconsistentAction : public Error {
 public:
  using Error::Error;
};

/// Dimension of the σ-fixed subspace of (ambient / K)_d for an involution σ
/// that preserves K.
std::uint64_t fixed_dimension(const QuotientRing& ring, const Substitution& sigma, int degree);

/// Compares, degree by degree up to `max_degree`, the graded dimensions of
/// invariant/(J : e) with the σ-fixed part of full/(I : e′).
SecondIsoResult verify_second_iso(const KirwanPresentation& k, int max_degree);

/// Directed graph on named vertices.
struct DagQuiver {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  /// Accepts lines `vertices v1 v2 ...` and `edge u v` (or `u -> v`).
  static DagQuiver parse(std::string_view text);
  bool is_connected() const;
};

class CycleError : public Error {
 public:
  explicit CycleError(std::vector<std::string> on_cycle);
  const std::vector<std::string>& vertices() const { return vertices_; }

 private:
  std::vector<std::string> vertices_;
};

/// λ with λ_i < 0 for every vertex and λ_i < λ_j along every edge (i, j),
/// built by repeatedly peeling a source. Throws CycleError otherwise.
std::vector<long> proper_quiver_weights(const DagQuiver& q);
bool check_proper_weights(const DagQuiver& q, const std::vector<long>& lambda);

}  // namespace hkq
