#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hkq/linalg.hpp"
#include "hkq/quotient.hpp"
#include "hkq/ratfun.hpp"

namespace hkq {

using KVector = std::vector<RationalFunction>;
using Substitution = std::map<std::string, Polynomial>;

/// Euler class with a vanishing x^k coefficient: the circle would act
/// non-freely off the fixed locus.
class FixedLocusError : public Error {
 public:
  using Error::Error;
};

/// One connected fixed component: a finite-dimensional graded algebra A,
/// its equivariant Euler class in A[x] and a fundamental class spanning the
/// top degree of A.
///
/// Everything lives in one ring whose last variable is x; the relations do
/// not involve x, so normal forms split as (A-part)·x^k.
class FixedComponent {
 public:
  FixedComponent(std::string name, Ring ring, std::vector<Polynomial> relations, Polynomial euler,
                 Polynomial fundamental);
  /// `vars` as name or name:degree (cohomological, default 2).
  static FixedComponent parse(std::string name, const std::vector<std::string>& vars,
                              const std::vector<std::string>& relations, std::string_view euler,
                              std::string_view fundamental);

  const std::string& name() const { return name_; }
  const Ring& ring() const { return ring_; }
  const Ideal& relations() const { return relations_; }
  const std::vector<Monomial>& basis() const { return basis_; }
  std::size_t dim() const { return basis_.size(); }
  /// Cohomological degree of the fundamental class.
  int top_degree() const { return top_degree_; }
  const Polynomial& euler_polynomial() const { return euler_poly_; }
  const Polynomial& fundamental() const { return fundamental_; }

  /// Coordinates over K of a polynomial in ring().
  KVector coordinates(const Polynomial& p) const;
  Polynomial to_polynomial(const KVector& v) const;
  KVector one() const;
  KVector multiply(const KVector& a, const KVector& b) const;

  const KVector& euler() const { return euler_; }
  /// e = a·x^k + nil.
  const Rational& euler_leading() const { return euler_a_; }
  int euler_codim() const { return euler_k_; }
  /// Geometric-series inverse of the Euler class, checked against e.
  KVector invert_euler() const;

  /// Top-degree coefficient against the fundamental class.
  RationalFunction integrate_top(const KVector& v) const;

  /// Same component with the opposite orientation: −e and −[F].
  FixedComponent flipped() const;

 private:
  std::string name_;
  Ring ring_;
  Ideal relations_;
  std::vector<Monomial> basis_;
  std::size_t one_index_ = 0;
  std::size_t top_index_ = 0;
  Rational fundamental_coef_;
  int top_degree_ = 0;
  Polynomial euler_poly_;
  Polynomial fundamental_;
  KVector euler_;
  Rational euler_a_;
  int euler_k_ = 0;
  // basis_i · basis_j = Σ_k table_[i][j][k].second · basis_{table_[i][j][k].first}
  std::vector<std::vector<std::vector<std::pair<std::size_t, Rational>>>> table_;
};

/// Per-component coordinates; parts[i] has components[i].dim() entries.
struct EquivariantClass {
  std::vector<KVector> parts;
  bool operator==(const EquivariantClass&) const = default;
};

/// The equivariant ring of the whole space, when known, with the
/// restriction to each component (total variable ↦ component polynomial).
struct TotalPresentation {
  QuotientRing ring;
  std::vector<Substitution> restrictions;
};

class CircleCompactModel {
 public:
  CircleCompactModel(std::string name, std::vector<FixedComponent> components,
                     std::optional<TotalPresentation> total = std::nullopt);

  const std::string& name() const { return name_; }
  const std::vector<FixedComponent>& components() const { return components_; }
  const FixedComponent& component(std::size_t i) const { return components_.at(i); }
  std::size_t component_index(std::string_view name) const;
  /// Σ dim of the component algebras, the K-dimension of the model.
  std::size_t dim() const { return dim_; }
  const std::optional<TotalPresentation>& total() const { return total_; }

  EquivariantClass zero() const;
  EquivariantClass one() const;
  /// basis element j of component i, zero elsewhere.
  EquivariantClass unit_vector(std::size_t i, std::size_t j) const;
  std::vector<EquivariantClass> standard_basis() const;
  /// One polynomial per component.
  EquivariantClass make_class(const std::vector<Polynomial>& parts) const;
  KVector flatten(const EquivariantClass& a) const;
  EquivariantClass unflatten(const KVector& v) const;

  EquivariantClass add(const EquivariantClass& a, const EquivariantClass& b) const;
  EquivariantClass subtract(const EquivariantClass& a, const EquivariantClass& b) const;
  EquivariantClass multiply(const EquivariantClass& a, const EquivariantClass& b) const;
  EquivariantClass scale(const RationalFunction& c, const EquivariantClass& a) const;

  RationalFunction integrate(const EquivariantClass& a) const;
  RationalFunction pairing(const EquivariantClass& a, const EquivariantClass& b) const;
  Matrix<RationalFunction> gram(const std::vector<EquivariantClass>& basis) const;
  /// Throws when the basis does not have dim() elements.
  bool is_nondegenerate(const std::vector<EquivariantClass>& basis) const;
  /// Inverse Gram matrix of the standard basis, computed once.
  const Matrix<RationalFunction>& inverse_gram() const;

  /// Restriction of a total-ring element to the fixed components.
  EquivariantClass restrict(const Polynomial& p) const;

  /// Copy with component i's orientation reversed.
  CircleCompactModel with_flipped_orientation(std::size_t i) const;

 private:
  void check(const EquivariantClass& a) const;

  std::string name_;
  std::vector<FixedComponent> components_;
  std::optional<TotalPresentation> total_;
  std::size_t dim_ = 0;
  struct GramCache {
    std::once_flag once;
    Matrix<RationalFunction> inverse;
  };
  std::shared_ptr<GramCache> gram_cache_ = std::make_shared<GramCache>();
};

using ModelPtr = std::shared_ptr<const CircleCompactModel>;

/// An equivariant map N → M seen on fixed loci: each source component lands
/// in one target component, with an algebra pullback given on variables.
class ModelMap {
 public:
  /// pullbacks[i] sends the variables of the target component
  /// assignment[i] to polynomials in source component i; x ↦ x implicitly.
  /// total_pullback, when given, does the same between total rings.
  ModelMap(std::string name, ModelPtr source, ModelPtr target, std::vector<std::size_t> assignment,
           std::vector<Substitution> pullbacks, std::optional<Substitution> total_pullback = std::nullopt);
  static ModelMap identity(ModelPtr model);

  const std::string& name() const { return name_; }
  const ModelPtr& source() const { return source_; }
  const ModelPtr& target() const { return target_; }
  const std::vector<std::size_t>& assignment() const { return assignment_; }
  const std::vector<Substitution>& pullbacks() const { return pullbacks_; }
  const std::optional<Substitution>& total_pullback() const { return total_pullback_; }

  EquivariantClass pullback(const EquivariantClass& a) const;
  /// Adjoint of pullback: ⟨f_*g, a⟩_M = ⟨g, f*a⟩_N for every a.
  EquivariantClass pushforward(const EquivariantClass& g) const;
  /// Matrix of f* in the standard bases (source dim × target dim).
  Matrix<RationalFunction> pullback_matrix() const;

  /// `after` ∘ this.
  ModelMap then(const ModelMap& after) const;

 private:
  std::string name_;
  ModelPtr source_;
  ModelPtr target_;
  std::vector<std::size_t> assignment_;
  std::vector<Substitution> pullbacks_;
  std::optional<Substitution> total_pullback_;
  // images_[i][j]: pullback of target basis element j (of component
  // assignment_[i]) to source component i
  std::vector<std::vector<KVector>> images_;
};

/// ∫_M a·f_*g = ∫_N f*a·g, exactly.
bool verify_integration_adjunction(const ModelMap& f, const EquivariantClass& a, const EquivariantClass& g);

/// M × M: components F_i × F_j with variables renamed v_1 / v_2.
ModelPtr product_model(const ModelPtr& m);
ModelMap diagonal_map(const ModelPtr& m, const ModelPtr& product);
/// which = 1 or 2.
ModelMap projection_map(const ModelPtr& m, const ModelPtr& product, int which);

struct DiagonalPair {
  EquivariantClass a;
  EquivariantClass b;
};

/// Σ π1*a_i · π2*b_i differs from Δ_*(1).
class DiagonalMismatch : public Error {
 public:
  using Error::Error;
};

/// Δ_*(1) written in the tensor basis: pairs (e_k, b_k) over the standard
/// basis e_k of M.
std::vector<DiagonalPair> diagonal_decomposition(const ModelPtr& m);

/// Checks Δ_*(1) = Σ π1*a_i·π2*b_i (DiagonalMismatch otherwise), then
/// returns whether the b_i span. Also replays a = Σ ⟨a_i, a⟩·b_i on a
/// random class drawn from `seed`; a failed replay throws
/// InternalCheckFailed.
bool diagonal_basis(const ModelPtr& m, const std::vector<DiagonalPair>& decomposition, std::uint64_t seed = 1);

/// Rank comparisons for f* between rationalized and integral forms.
struct PullbackComparison {
  std::size_t source_dim = 0;
  std::size_t target_dim = 0;
  std::size_t k_rank = 0;
  /// Degree used for the integral comparison.
  int degree = 0;
  std::size_t integral_source_dim = 0;
  std::size_t integral_rank = 0;
  /// Source basis monomials of that degree outside the image.
  std::vector<std::string> missing;
  bool rationalized_iso() const { return k_rank == source_dim && k_rank == target_dim; }
  bool integral_surjective() const { return integral_rank == integral_source_dim; }
};

/// Needs total presentations on both models and a total pullback.
PullbackComparison compare_pullback(const ModelMap& f, int degree);

/// K-rank of the restriction from the total ring (monomials up to the given
/// cohomological degree) to the fixed components.
std::size_t restriction_rank(const CircleCompactModel& m, int max_degree);

/// Total relations restrict to zero on every component, and for maps the
/// total and component pullbacks commute with restriction.
void check_total_presentation(const CircleCompactModel& m);
void check_total_pullback(const ModelMap& f);

/// A parsed fixture file: named models and maps in declaration order.
struct Fixture {
  std::vector<ModelPtr> models;
  std::vector<ModelMap> maps;

  ModelPtr model(std::string_view name) const;
  const ModelMap& map(std::string_view name) const;
};

/// Line-oriented format; '#' starts a comment.
///
///   model NAME
///   total vars h:2 ...            (optional total ring, x is implicit)
///   total relation POLY
///   component NAME
///     vars eta:2 ...
///     relation POLY
///     euler POLY
///     fundamental POLY
///     restrict h -> POLY
///   end
///   map NAME SOURCE -> TARGET
///     assign SRC_COMPONENT -> TGT_COMPONENT
///     pullback SRC_COMPONENT VAR -> POLY
///     total VAR -> POLY
///   end
Fixture parse_fixture(std::string_view text);
Fixture load_fixture(const std::string& path);

}  // namespace hkq
