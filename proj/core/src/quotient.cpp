#include "hkq/quotient.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "hkq/error.hpp"

namespace hkq {

std::uint64_t HilbertSeries::coefficient(int degree) const {
  if (degree < 0 || degree >= static_cast<int>(coefficients.size())) return 0;
  return coefficients[static_cast<std::size_t>(degree)];
}

std::uint64_t HilbertSeries::total() const { return std::accumulate(coefficients.begin(), coefficients.end(), std::uint64_t{0}); }

std::vector<std::uint64_t> HilbertSeries::even_coefficients() const {
  std::vector<std::uint64_t> out;
  for (std::size_t d = 0; d < coefficients.size(); d += 2) out.push_back(coefficients[d]);
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

namespace {

bool divisible_by_any(const Monomial& m, const std::vector<Monomial>& leading) {
  return std::any_of(leading.begin(), leading.end(), [&](const Monomial& l) { return l.divides(m); });
}

std::size_t last_variable(const Monomial& m, std::size_t nvars) {
  for (std::size_t i = nvars; i-- > 0;) {
    if (m.exponent(i)) return i;
  }
  return 0;
}

}  // namespace

std::vector<std::vector<Monomial>> standard_monomials(const Ring& ring, const std::vector<Monomial>& leading,
                                                      const std::vector<std::size_t>& vars, int max_weight) {
  const auto& tab = ring.table();
  std::vector<std::vector<Monomial>> by_weight(static_cast<std::size_t>(std::max(max_weight, -1) + 1));
  if (max_weight < 0) return by_weight;
  if (!divisible_by_any(ring.one(), leading)) by_weight[0].push_back(ring.one());
  // Standard monomials are closed under division, so each one of weight w is
  // m·v with m standard of weight w − wt(v) and v its last variable.
  for (int w = 1; w <= max_weight; ++w) {
    auto& level = by_weight[static_cast<std::size_t>(w)];
    for (std::size_t v : vars) {
      const int wv = tab.weight(v);
      if (wv > w) continue;
      for (const auto& m : by_weight[static_cast<std::size_t>(w - wv)]) {
        if (!m.is_one() && last_variable(m, tab.size()) > v) continue;
        const Monomial mv = m * ring.variable(v);
        if (!divisible_by_any(mv, leading)) level.push_back(mv);
      }
    }
    std::sort(level.begin(), level.end(), [&](const Monomial& a, const Monomial& b) { return ring.compare(a, b) < 0; });
  }
  return by_weight;
}

QuotientRing::QuotientRing(Ideal ideal, Budget budget) : ideal_(std::move(ideal)), budget_(budget) {}

Polynomial QuotientRing::reduce(const Polynomial& f) const { return normal_form(f, ideal_, budget_); }

bool QuotientRing::is_finite_dimensional() const {
  const auto lead = ideal_.leading_monomials(budget_);
  for (std::size_t v = 0; v < ring().size(); ++v) {
    const bool has_power = std::any_of(lead.begin(), lead.end(), [&](const Monomial& m) {
      return m.exponent(v) > 0 && m.weight() == static_cast<int>(m.exponent(v)) * ring().table().weight(v);
    });
    if (!has_power) return false;
  }
  return true;
}

std::vector<std::vector<Monomial>> QuotientRing::standard_by_weight(int max_weight) const {
  std::vector<std::size_t> vars(ring().size());
  std::iota(vars.begin(), vars.end(), 0);
  return standard_monomials(ring(), ideal_.leading_monomials(budget_), vars, max_weight);
}

std::vector<Monomial> QuotientRing::graded_basis(int degree) const {
  if (degree < 0 || degree % 2 != 0) return {};
  if (degree > budget_.max_degree) throw BudgetExceeded("graded_basis: degree exceeds budget");
  return standard_by_weight(degree / 2).back();
}

HilbertSeries QuotientRing::hilbert_series(int max_degree) const {
  if (max_degree > budget_.max_degree) throw BudgetExceeded("hilbert_series: degree exceeds budget");
  HilbertSeries hs;
  const bool finite = is_finite_dimensional();
  int max_weight = max_degree / 2;
  std::vector<std::vector<Monomial>> levels;
  if (finite) {
    // extend until a window of empty levels as wide as the largest variable
    // weight proves that every higher level is empty too
    const auto& w = ring().table().weights();
    const int window = w.empty() ? 1 : *std::max_element(w.begin(), w.end());
    int probe = std::max(max_weight, window);
    while (true) {
      levels = standard_by_weight(probe);
      int empty_run = 0;
      for (int k = probe; k >= 0 && levels[static_cast<std::size_t>(k)].empty(); --k) ++empty_run;
      if (empty_run >= window) break;
      if (2 * probe > budget_.max_degree) throw BudgetExceeded("hilbert_series: quotient too large for degree budget");
      probe *= 2;
    }
    hs.exact = true;
  } else {
    levels = standard_by_weight(max_weight);
  }
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (hs.exact && levels[k].empty()) continue;
    hs.coefficients.resize(2 * k + 1, 0);
    hs.coefficients[2 * k] = levels[k].size();
  }
  if (!hs.exact) hs.coefficients.resize(static_cast<std::size_t>(2 * max_weight + 1), 0);
  return hs;
}

std::vector<Monomial> QuotientRing::basis() const {
  if (!is_finite_dimensional()) throw Error("basis: quotient ring is not finite-dimensional over Q");
  const HilbertSeries hs = hilbert_series(0);
  std::vector<Monomial> out;
  const auto levels = standard_by_weight(static_cast<int>(hs.coefficients.size()) / 2);
  for (const auto& l : levels) out.insert(out.end(), l.begin(), l.end());
  return out;
}

std::vector<Rational> QuotientRing::coordinates(const Polynomial& f, const std::vector<Monomial>& basis) const {
  std::unordered_map<Monomial, std::size_t, MonomialHash> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);
  std::vector<Rational> out(basis.size(), Rational(0));
  const Polynomial nf = reduce(f);
  for (const auto& t : nf.terms()) {
    auto it = index.find(t.mono);
    if (it == index.end()) throw Error("coordinates: normal form leaves the given basis");
    out[it->second] = t.coef;
  }
  return out;
}

std::size_t QuotientRing::localized_rank(std::size_t var) const {
  if (ring().order().kind != MonomialOrder::Kind::GRevLex || var + 1 != ring().size()) {
    throw Error("localized_rank needs grevlex with the localized variable last");
  }
  if (!ideal_.is_homogeneous()) throw Error("localized_rank needs a homogeneous ideal");
  // For homogeneous I and grevlex with v last, in(I : v^∞) = in(I) : v^∞.
  // The saturated quotient is free over Q[v] on the v-free standard monomials.
  std::vector<Monomial> stripped;
  for (auto m : ideal_.leading_monomials(budget_)) {
    m.set_exponent(var, 0, ring().table().weights());
    stripped.push_back(m);
  }
  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < ring().size(); ++i) {
    if (i == var) continue;
    const bool has_power = std::any_of(stripped.begin(), stripped.end(), [&](const Monomial& m) {
      return m.exponent(i) > 0 && m.weight() == static_cast<int>(m.exponent(i)) * ring().table().weight(i);
    });
    if (!has_power) throw Error("localized_rank: the localized module has infinite rank");
    vars.push_back(i);
  }
  std::size_t total = 0;
  int empty_run = 0;
  const auto& w = ring().table().weights();
  const int window = *std::max_element(w.begin(), w.end());
  for (int probe = window;; probe *= 2) {
    const auto levels = standard_monomials(ring(), stripped, vars, probe);
    empty_run = 0;
    for (int k = probe; k >= 0 && levels[static_cast<std::size_t>(k)].empty(); --k) ++empty_run;
    if (empty_run >= window) {
      for (const auto& l : levels) total += l.size();
      return total;
    }
    if (2 * probe > budget_.max_degree) throw BudgetExceeded("localized_rank: degree budget exhausted");
  }
}

}  // namespace hkq
