#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hkq {

inline constexpr std::size_t kMaxVariables = 24;

/// Ordered variable names with their cohomological degrees.
///
/// Degrees are positive and even; internally every algorithm works with the
/// algebraic weight degree/2 so that the degree-2 generators have weight 1.
class VariableTable {
 public:
  /// `degrees` defaults to 2 for every variable when empty.
  explicit VariableTable(std::vector<std::string> names, std::vector<int> degrees = {});

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  int degree(std::size_t i) const { return 2 * weights_[i]; }
  int weight(std::size_t i) const { return weights_[i]; }
  std::span<const int> weights() const { return weights_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const VariableTable& other) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<int> weights_;
};

using TablePtr = std::shared_ptr<const VariableTable>;

TablePtr make_table(std::vector<std::string> names, std::vector<int> degrees = {});

/// Exponent vector with cached algebraic weight and a divisibility mask.
class Monomial {
 public:
  Monomial() = default;

  static Monomial from_exponents(std::span<const int> exponents, std::span<const int> weights);

  std::uint32_t exponent(std::size_t i) const { return exp_[i]; }
  /// Sum of exponent * algebraic weight.
  int weight() const { return weight_; }
  std::uint32_t mask() const { return mask_; }
  bool is_one() const { return mask_ == 0; }

  bool divides(const Monomial& other) const;
  bool coprime(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  /// Requires divides(other, *this).
  Monomial operator/(const Monomial& other) const;
  Monomial lcm(const Monomial& other, std::span<const int> weights) const;
  Monomial gcd(const Monomial& other, std::span<const int> weights) const;

  void set_exponent(std::size_t i, std::uint32_t e, std::span<const int> weights);

  bool operator==(const Monomial& other) const { return exp_ == other.exp_; }
  std::size_t hash() const;

 private:
  std::array<std::uint16_t, kMaxVariables> exp_{};
  std::int32_t weight_ = 0;
  std::uint32_t mask_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct MonomialOrder {
  enum class Kind { GRevLex, Lex, BlockElimination };
  Kind kind = Kind::GRevLex;
  /// Number of leading variables eliminated first (BlockElimination only).
  std::size_t block = 0;

  static MonomialOrder grevlex() { return {}; }
  static MonomialOrder lex() { return {Kind::Lex, 0}; }
  static MonomialOrder elimination(std::size_t front_block) { return {Kind::BlockElimination, front_block}; }

  bool operator==(const MonomialOrder&) const = default;
  std::string descriptor() const;
  static MonomialOrder from_descriptor(std::string_view text);
};

/// A polynomial ring Q[vars] together with the active monomial order.
class Ring {
 public:
  Ring() = default;
  explicit Ring(TablePtr table, MonomialOrder order = MonomialOrder::grevlex());

  const VariableTable& table() const { return *table_; }
  const TablePtr& table_ptr() const { return table_; }
  const MonomialOrder& order() const { return order_; }
  std::size_t size() const { return table_->size(); }

  /// Negative when a < b, positive when a > b.
  int compare(const Monomial& a, const Monomial& b) const;

  Monomial one() const { return Monomial{}; }
  Monomial variable(std::size_t i, int power = 1) const;
  Monomial monomial(std::span<const int> exponents) const;
  Monomial gcd(const Monomial& a, const Monomial& b) const { return a.gcd(b, table_->weights()); }
  Monomial lcm(const Monomial& a, const Monomial& b) const { return a.lcm(b, table_->weights()); }

  Ring with_order(MonomialOrder order) const { return Ring(table_, order); }

  /// Same table content (not necessarily the same object) and the same order.
  bool operator==(const Ring& other) const;
  bool same_table(const Ring& other) const;

 private:
  TablePtr table_;
  MonomialOrder order_;
};

}  // namespace hkq
