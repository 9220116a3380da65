#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hkq/abelianization.hpp"
#include "hkq/error.hpp"
#include "hkq/quotient.hpp"

namespace hkq {

/// Subset of {1..n}; bit i-1 stands for element i.
using Subset = std::uint32_t;

inline bool has(Subset s, int i) { return (s >> (i - 1)) & 1U; }
inline Subset with(Subset s, int i) { return s | (Subset{1} << (i - 1)); }
inline Subset without(Subset s, int i) { return s & ~(Subset{1} << (i - 1)); }
int subset_size(Subset s);
std::vector<int> elements(Subset s);
/// "{}", "{1,3}".
std::string subset_to_string(Subset s);
Subset parse_subset(std::string_view text);

struct EdgeLengths {
  std::vector<Rational> xi;

  /// Requires n ≥ 3 and every entry positive; genericity is checked by
  /// shorts().
  explicit EdgeLengths(std::vector<Rational> values);
  /// Comma-separated exact rationals, e.g. "1,1,1,2" or "1/2,1,3/2".
  static EdgeLengths parse(std::string_view text);
  /// (1, 2, 4, ..., 2^{n-1}).
  static EdgeLengths powers_of_two(int n);
  int n() const { return static_cast<int>(xi.size()); }
  std::string to_string() const;
};

/// Some subset splits the total length evenly.
class NonGenericError : public Error {
 public:
  explicit NonGenericError(Subset witness);
  Subset witness() const { return witness_; }

 private:
  Subset witness_;
};

struct ShortSubsetTable {
  int n = 0;
  /// Ordered by size, then lexicographically by elements; starts with ∅.
  std::vector<Subset> shorts;

  bool is_short(Subset s) const;
  /// Smallest element of S (S nonempty).
  static int m(Subset s);
  /// Smallest element of the complement of S in {1..n}.
  int n_of(Subset s) const;
  Subset full() const { return n >= 32 ? ~Subset{0} : (Subset{1} << n) - 1; }
  std::vector<Subset> nonempty_shorts() const;

 private:
  friend ShortSubsetTable shorts(const EdgeLengths& xi);
  std::vector<bool> short_;
};

/// All short subsets; throws NonGenericError with the first balanced subset.
ShortSubsetTable shorts(const EdgeLengths& xi);

/// The rings, ideals and generators attached to a generic length vector.
///
/// ring_P = Q[c1..cn, alpha, x] with relations ci^2 - alpha^2, and
/// ring_Q = Q[c1..cn, alpha2, x] (alpha2 of degree 4) with ci^2 - alpha2;
/// both graded reverse lexicographic with x last.
class HyperpolygonInstance {
 public:
  explicit HyperpolygonInstance(EdgeLengths lengths, Budget budget = {});

  const EdgeLengths& lengths() const { return lengths_; }
  const ShortSubsetTable& table() const { return table_; }
  int n() const { return table_.n; }
  const Budget& budget() const { return budget_; }

  const Ring& ring_P() const { return ring_p_; }
  const Ring& ring_Q() const { return ring_q_; }
  const Ideal& relations_P() const { return rel_p_; }
  const Ideal& relations_Q() const { return rel_q_; }

  Polynomial c(int i) const { return Polynomial::variable(ring_q_, static_cast<std::size_t>(i - 1)); }
  Polynomial x() const { return Polynomial::variable(ring_q_, "x"); }
  Polynomial alpha2() const { return Polynomial::variable(ring_q_, "alpha2"); }

  /// e = alpha2·(x² − alpha2) in ring_Q.
  Polynomial euler_e() const;
  /// e′ = alpha·(x² − alpha²) in ring_P.
  Polynomial euler_eprime() const;
  /// alpha ↦ −alpha on ring_P.
  Substitution weyl_involution() const;
  /// The inclusion Q → P, alpha2 ↦ alpha².
  Polynomial to_P(const Polynomial& q) const;

  /// (A_S, B_S) in ring_P; S must be short.
  std::pair<Polynomial, Polynomial> gens_AB(Subset s) const;
  /// C_S = A_S + B_S rewritten in ring_Q.
  Polynomial gens_C(Subset s) const;
  /// D_S in ring_Q for nonempty short S.
  Polynomial gens_D(Subset s) const;

  /// ⟨A_S, B_S⟩ + relations in ring_P.
  const Ideal& ideal_I() const { return ideal_i_; }
  /// ⟨C_S⟩ + relations in ring_Q.
  const Ideal& ideal_J() const { return ideal_j_; }
  /// ⟨D_S | S nonempty short⟩ + relations in ring_Q.
  const Ideal& ideal_D() const { return ideal_d_; }

  /// The invariant/full presentation consumed by the abelianization layer.
  KirwanPresentation kirwan_presentation() const;

 private:
  EdgeLengths lengths_;
  ShortSubsetTable table_;
  Budget budget_;
  Ring ring_p_;
  Ring ring_q_;
  Ideal rel_p_;
  Ideal rel_q_;
  Ideal ideal_i_;
  Ideal ideal_j_;
  Ideal ideal_d_;
};

/// Reads a polynomial in c, alpha, x (ring_P) with only even powers of alpha
/// as an element of ring_Q; throws InternalCheckFailed on an odd power.
Polynomial even_part_to_Q(const Polynomial& p, const Ring& ring_q);

/// (J : e) together with the check that it equals ⟨D_S⟩ + relations.
struct PropHpResult {
  QuotientRing ring;  // Q / (J : e)
  bool colon_contains_d = false;
  bool d_contains_colon = false;
  bool bases_equal = false;
  bool holds() const { return colon_contains_d && d_contains_colon && bases_equal; }
};

PropHpResult prop_hp(const HyperpolygonInstance& inst);

enum class CertificatePath { Recursion, GroebnerLift };
std::string to_string(CertificatePath p);

/// Σ_T coefficient_T · C_T ≡ e·D_S modulo ci² − alpha2.
struct MembershipCertificate {
  Subset subject = 0;
  std::vector<std::pair<Subset, Polynomial>> combination;
  CertificatePath path = CertificatePath::Recursion;
  /// Number of relabelings performed by the recursion.
  int relabelings = 0;
  /// Why the recursion was abandoned, when the fallback ran.
  std::string fallback_reason;

  /// One `{T}: coefficient` line per term after a `subject {S}` header.
  std::string serialize() const;
  static MembershipCertificate deserialize(const Ring& ring_q, std::string_view text);
};

struct CertifyOptions {
  /// Skip the recursion and go straight to the Groebner lift.
  bool force_fallback = false;
};

/// Exact expansion check of a certificate; also checks that every T used is
/// a short subset of the subject.
bool verify_certificate(const HyperpolygonInstance& inst, const MembershipCertificate& cert);

MembershipCertificate certify_membership(const HyperpolygonInstance& inst, Subset s, const CertifyOptions& opts = {});

/// Q[c1..cn] / (ci² − c1², all monomials of degree n−2).
QuotientRing konno_ring(int n, Budget budget = {});

/// Right-hand side of the base-case identity
///   scale · (x + c_s)·((2x − c_s)·C_∅ − c_s·C_{s})
/// for S = {s}, reduced modulo the relations.
Polynomial base_case_rhs(const HyperpolygonInstance& inst, int s, const Rational& scale);

/// Everything the report command prints, gathered per stage.
struct StageResult {
  std::string name;
  bool passed = false;
  std::string error;
  double millis = 0;
};

struct CertificateSummary {
  Subset subject = 0;
  CertificatePath path = CertificatePath::Recursion;
  int relabelings = 0;
  std::size_t terms = 0;
  bool verified = false;
  bool groebner_membership = false;
};

struct HyperpolygonReport {
  std::vector<std::string> xi;
  int n = 0;
  std::vector<Subset> shorts;
  std::size_t generators_I = 0;
  std::size_t generators_J = 0;
  std::size_t basis_size_J = 0;
  std::size_t basis_size_colon = 0;
  std::vector<std::uint64_t> betti;         // Q/(J:e) mod x, even degrees
  std::vector<std::uint64_t> konno_betti;   // konno ring
  std::vector<CertificateSummary> certificates;
  std::uint64_t top_degree_dim = 0;         // degree 2(n-2) part of Q/<x>
  std::size_t d_rank = 0;
  std::uint64_t localized_rank = 0;
  int formality_bound = 0;
  std::optional<SecondIsoResult> second_iso;
  /// Whether the Kirwan-image stages ran under the surjectivity hypothesis.
  bool surjectivity_assumed = false;
  std::vector<StageResult> stages;
  bool all_passed() const;
};

struct ReportOptions {
  bool second_iso = true;
  /// Per-S certificate/membership work runs on std::async tasks.
  bool parallel = true;
};

/// Runs every stage for a generic length vector. Stage failures are recorded,
/// not thrown; NonGenericError and BudgetExceeded propagate.
HyperpolygonReport full_report(const EdgeLengths& xi, const Budget& budget = {}, const ReportOptions& opts = {});

/// Checks H_R(d) = Σ_{k ≥ 0} H_{R/x}(d − 2k) for d ≤ max_degree.
bool formality_identity(const HilbertSeries& series, const HilbertSeries& reduced, int max_degree);

}  // namespace hkq
