#include "hkq/ring.hpp"

#include <algorithm>
#include <set>

#include "hkq/error.hpp"

namespace hkq {

VariableTable::VariableTable(std::vector<std::string> names, std::vector<int> degrees)
    : names_(std::move(names)) {
  if (names_.size() > kMaxVariables) {
    throw Error("variable table exceeds " + std::to_string(kMaxVariables) + " variables");
  }
  if (degrees.empty()) degrees.assign(names_.size(), 2);
  if (degrees.size() != names_.size()) throw Error("variable table: degree list length mismatch");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw Error("variable table: empty variable name");
    if (!seen.insert(names_[i]).second) throw Error("variable table: duplicate variable '" + names_[i] + "'");
    if (degrees[i] <= 0 || degrees[i] % 2 != 0) {
      throw Error("variable table: degree of '" + names_[i] + "' must be a positive even integer");
    }
    weights_.push_back(degrees[i] / 2);
  }
}

std::optional<std::size_t> VariableTable::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

TablePtr make_table(std::vector<std::string> names, std::vector<int> degrees) {
  return std::make_shared<const VariableTable>(std::move(names), std::move(degrees));
}

Monomial Monomial::from_exponents(std::span<const int> exponents, std::span<const int> weights) {
  Monomial m;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < 0 || exponents[i] > 0xFFFF) throw Error("monomial exponent out of range");
    m.set_exponent(i, static_cast<std::uint32_t>(exponents[i]), weights);
  }
  return m;
}

void Monomial::set_exponent(std::size_t i, std::uint32_t e, std::span<const int> weights) {
  weight_ += (static_cast<int>(e) - static_cast<int>(exp_[i])) * weights[i];
  exp_[i] = static_cast<std::uint16_t>(e);
  if (e) {
    mask_ |= (1u << i);
  } else {
    mask_ &= ~(1u << i);
  }
}

bool Monomial::divides(const Monomial& other) const {
  if (mask_ & ~other.mask_) return false;
  if (weight_ > other.weight_) return false;
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    if (exp_[i] > other.exp_[i]) return false;
  }
  return true;
}

bool Monomial::coprime(const Monomial& other) const { return (mask_ & other.mask_) == 0; }

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    const std::uint32_t e = std::uint32_t{exp_[i]} + other.exp_[i];
    if (e > 0xFFFF) throw Error("monomial exponent overflow");
    r.exp_[i] = static_cast<std::uint16_t>(e);
  }
  r.weight_ = weight_ + other.weight_;
  r.mask_ = mask_ | other.mask_;
  return r;
}

Monomial Monomial::operator/(const Monomial& other) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    r.exp_[i] = static_cast<std::uint16_t>(exp_[i] - other.exp_[i]);
    if (r.exp_[i]) r.mask_ |= (1u << i);
  }
  r.weight_ = weight_ - other.weight_;
  return r;
}

Monomial Monomial::lcm(const Monomial& other, std::span<const int> weights) const {
  Monomial r;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto e = std::max(exp_[i], other.exp_[i]);
    r.exp_[i] = e;
    r.weight_ += static_cast<int>(e) * weights[i];
  }
  r.mask_ = mask_ | other.mask_;
  return r;
}

Monomial Monomial::gcd(const Monomial& other, std::span<const int> weights) const {
  Monomial r;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto e = std::min(exp_[i], other.exp_[i]);
    if (e) r.set_exponent(i, e, weights);
  }
  return r;
}

std::size_t Monomial::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (auto e : exp_) {
    h ^= e;
    h *= 1099511628211ull;
  }
  return h;
}

std::string MonomialOrder::descriptor() const {
  switch (kind) {
    case Kind::GRevLex:
      return "grevlex";
    case Kind::Lex:
      return "lex";
    case Kind::BlockElimination:
      return "elim(" + std::to_string(block) + ")";
  }
  return "grevlex";
}

MonomialOrder MonomialOrder::from_descriptor(std::string_view text) {
  if (text == "grevlex") return grevlex();
  if (text == "lex") return lex();
  if (text.starts_with("elim(") && text.ends_with(")")) {
    const auto inner = text.substr(5, text.size() - 6);
    std::size_t k = 0;
    for (char ch : inner) {
      if (ch < '0' || ch > '9') throw ParseError("bad monomial order descriptor '" + std::string(text) + "'");
      k = 10 * k + static_cast<std::size_t>(ch - '0');
    }
    return elimination(k);
  }
  throw ParseError("unknown monomial order '" + std::string(text) + "'");
}

Ring::Ring(TablePtr table, MonomialOrder order) : table_(std::move(table)), order_(order) {
  if (!table_) throw Error("ring requires a variable table");
  if (order_.kind == MonomialOrder::Kind::BlockElimination && order_.block > table_->size()) {
    throw Error("elimination block larger than the variable table");
  }
}

namespace {

// Weighted degree over variables [lo, hi).
int block_weight(const Monomial& m, std::span<const int> w, std::size_t lo, std::size_t hi) {
  int s = 0;
  for (std::size_t i = lo; i < hi; ++i) s += static_cast<int>(m.exponent(i)) * w[i];
  return s;
}

// Reverse lexicographic tie-break over [lo, hi): the smaller exponent in the
// last differing variable wins.
int revlex(const Monomial& a, const Monomial& b, std::size_t lo, std::size_t hi) {
  for (std::size_t i = hi; i-- > lo;) {
    if (a.exponent(i) != b.exponent(i)) return a.exponent(i) < b.exponent(i) ? 1 : -1;
  }
  return 0;
}

}  // namespace

int Ring::compare(const Monomial& a, const Monomial& b) const {
  const std::size_t n = table_->size();
  switch (order_.kind) {
    case MonomialOrder::Kind::GRevLex: {
      if (a.weight() != b.weight()) return a.weight() < b.weight() ? -1 : 1;
      return revlex(a, b, 0, n);
    }
    case MonomialOrder::Kind::Lex: {
      for (std::size_t i = 0; i < n; ++i) {
        if (a.exponent(i) != b.exponent(i)) return a.exponent(i) < b.exponent(i) ? -1 : 1;
      }
      return 0;
    }
    case MonomialOrder::Kind::BlockElimination: {
      const auto w = table_->weights();
      const std::size_t k = order_.block;
      const int wa = block_weight(a, w, 0, k);
      const int wb = block_weight(b, w, 0, k);
      if (wa != wb) return wa < wb ? -1 : 1;
      if (int c = revlex(a, b, 0, k)) return c;
      const int ra = a.weight() - wa;
      const int rb = b.weight() - wb;
      if (ra != rb) return ra < rb ? -1 : 1;
      return revlex(a, b, k, n);
    }
  }
  return 0;
}

Monomial Ring::variable(std::size_t i, int power) const {
  Monomial m;
  m.set_exponent(i, static_cast<std::uint32_t>(power), table_->weights());
  return m;
}

Monomial Ring::monomial(std::span<const int> exponents) const {
  if (exponents.size() != table_->size()) throw Error("monomial length does not match the variable table");
  return Monomial::from_exponents(exponents, table_->weights());
}

bool Ring::operator==(const Ring& other) const { return same_table(other) && order_ == other.order_; }

bool Ring::same_table(const Ring& other) const {
  return table_ == other.table_ || (table_ && other.table_ && *table_ == *other.table_);
}

}  // namespace hkq
