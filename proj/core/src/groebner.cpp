#include <algorithm>
#include <sstream>

#include "hkq/error.hpp"
#include "hkq/ideal.hpp"

namespace hkq {

namespace {

const Polynomial* find_divisor(const Monomial& m, std::span<const Polynomial> basis) {
  for (const auto& g : basis) {
    if (g.leading_monomial().divides(m)) return &g;
  }
  return nullptr;
}

// work[pos+1..] - c * m * g[1..]; the leading terms are known to cancel.
std::vector<Term> reduce_step(const Ring& ring, std::vector<Term>& work, std::size_t pos, const Rational& c,
                              const Monomial& m, const Polynomial& g) {
  const auto& gt = g.terms();
  std::vector<Term> out;
  out.reserve(work.size() - pos + gt.size());
  std::size_t a = pos + 1;
  std::size_t b = 1;
  while (a < work.size() || b < gt.size()) {
    if (b == gt.size()) {
      out.push_back(std::move(work[a++]));
      continue;
    }
    Monomial bm = gt[b].mono * m;
    if (a == work.size()) {
      out.push_back({bm, -c * gt[b].coef});
      ++b;
      continue;
    }
    const int cmp = ring.compare(work[a].mono, bm);
    if (cmp > 0) {
      out.push_back(std::move(work[a++]));
    } else if (cmp < 0) {
      out.push_back({bm, -c * gt[b].coef});
      ++b;
    } else {
      work[a].coef -= c * gt[b].coef;
      if (!is_zero(work[a].coef)) out.push_back(std::move(work[a]));
      ++a;
      ++b;
    }
  }
  return out;
}

Polynomial reduce_impl(const Polynomial& f, std::span<const Polynomial> basis, bool tail) {
  const Ring& ring = f.ring();
  std::vector<Term> work = f.terms();
  std::vector<Term> result;
  std::size_t pos = 0;
  while (pos < work.size()) {
    const Polynomial* g = find_divisor(work[pos].mono, basis);
    if (!g) {
      if (!tail) {
        // top reduction only: the rest stays as is
        result.insert(result.end(), std::make_move_iterator(work.begin() + static_cast<std::ptrdiff_t>(pos)),
                      std::make_move_iterator(work.end()));
        break;
      }
      result.push_back(std::move(work[pos++]));
      continue;
    }
    const Rational c = work[pos].coef / g->leading_coef();
    const Monomial m = work[pos].mono / g->leading_monomial();
    work = reduce_step(ring, work, pos, c, m, *g);
    pos = 0;
  }
  return Polynomial::from_sorted_terms(ring, std::move(result));
}

Polynomial spoly(const Polynomial& f, const Polynomial& g, const Monomial& lcm) {
  const Monomial mf = lcm / f.leading_monomial();
  const Monomial mg = lcm / g.leading_monomial();
  Polynomial a = f.times_monomial(mf, 1 / f.leading_coef());
  return a.add_scaled(-1 / g.leading_coef(), mg, g);
}

struct Entry {
  Polynomial poly;
  int sugar = 0;
  bool active = true;
};

struct Pair {
  std::size_t i;
  std::size_t j;
  Monomial lcm;
  int sugar;
};

class Buchberger {
 public:
  Buchberger(const Ring& ring, const Budget& budget) : ring_(ring), budget_(budget) {}

  std::vector<Polynomial> run(std::vector<Polynomial> gens) {
    std::vector<Polynomial> input;
    for (auto& g : gens) {
      if (!(g.ring() == ring_)) throw RingMismatch("groebner: generator in a different ring");
      if (!g.is_zero()) input.push_back(g.monic());
    }
    std::sort(input.begin(), input.end(), [&](const Polynomial& a, const Polynomial& b) {
      return ring_.compare(a.leading_monomial(), b.leading_monomial()) < 0;
    });
    for (auto& g : input) {
      Polynomial h = reduce_impl(g, active_polys(), true);
      if (h.is_zero()) continue;
      if (h.leading_monomial().is_one()) return {Polynomial::constant(ring_, Rational(1))};
      insert(h.monic(), g.weight());
    }
    while (!pairs_.empty()) {
      const std::size_t k = select();
      const Pair p = pairs_[k];
      pairs_[k] = pairs_.back();
      pairs_.pop_back();
      if (2 * p.sugar > budget_.max_degree) {
        throw BudgetExceeded("groebner: S-pair degree " + std::to_string(2 * p.sugar) + " exceeds budget " +
                             std::to_string(budget_.max_degree));
      }
      Polynomial s = spoly(entries_[p.i].poly, entries_[p.j].poly, p.lcm);
      Polynomial h = reduce_impl(s, active_polys(), true);
      if (h.is_zero()) continue;
      if (h.leading_monomial().is_one()) return {Polynomial::constant(ring_, Rational(1))};
      insert(h.monic(), std::max(p.sugar, h.weight()));
    }
    std::vector<Polynomial> minimal;
    for (auto& e : entries_) {
      if (e.active) minimal.push_back(std::move(e.poly));
    }
    return interreduce(std::move(minimal));
  }

 private:
  std::span<const Polynomial> active_polys() {
    return active_cache_;
  }

  std::size_t select() const {
    std::size_t best = 0;
    for (std::size_t k = 1; k < pairs_.size(); ++k) {
      const Pair& a = pairs_[k];
      const Pair& b = pairs_[best];
      if (a.sugar < b.sugar || (a.sugar == b.sugar && ring_.compare(a.lcm, b.lcm) < 0)) best = k;
    }
    return best;
  }

  int pair_sugar(std::size_t i, std::size_t j, const Monomial& lcm) const {
    const auto& a = entries_[i];
    const auto& b = entries_[j];
    return std::max(a.sugar - a.poly.leading_monomial().weight(), b.sugar - b.poly.leading_monomial().weight()) +
           lcm.weight();
  }

  // Gebauer-Moeller update.
  void insert(Polynomial h, int sugar) {
    const std::size_t hi = entries_.size();
    entries_.push_back({std::move(h), sugar, true});
    if (entries_.size() > budget_.max_basis_size) {
      throw BudgetExceeded("groebner: basis size exceeds budget " + std::to_string(budget_.max_basis_size));
    }
    const Monomial& lh = entries_[hi].poly.leading_monomial();

    struct Cand {
      std::size_t g;
      Monomial lcm;
      bool coprime;
      bool keep = true;
    };
    std::vector<Cand> cands;
    for (std::size_t g = 0; g < hi; ++g) {
      if (!entries_[g].active) continue;
      const Monomial& lg = entries_[g].poly.leading_monomial();
      cands.push_back({g, ring_.lcm(lh, lg), lh.coprime(lg)});
    }
    // chain criterion among the new pairs: drop (h,g1) if some other (h,g2)
    // has an lcm properly dividing lcm(h,g1); among equal lcms keep one,
    // preferring a coprime representative.
    for (std::size_t a = 0; a < cands.size(); ++a) {
      for (std::size_t b = 0; b < cands.size(); ++b) {
        if (a == b || !cands[b].keep) continue;
        if (!cands[b].lcm.divides(cands[a].lcm)) continue;
        if (!(cands[b].lcm == cands[a].lcm)) {
          cands[a].keep = false;
          break;
        }
        // equal lcm: keep the coprime one, else the lower index
        if (cands[a].coprime && !cands[b].coprime) continue;
        if (cands[b].coprime && !cands[a].coprime) {
          cands[a].keep = false;
          break;
        }
        if (b < a) {
          cands[a].keep = false;
          break;
        }
      }
    }
    // old pairs: drop (g1,g2) if LT(h) | lcm(g1,g2) and both lcm(g_i,h) differ from it
    std::vector<Pair> kept;
    kept.reserve(pairs_.size() + cands.size());
    for (auto& p : pairs_) {
      if (lh.divides(p.lcm)) {
        const Monomial l1 = ring_.lcm(entries_[p.i].poly.leading_monomial(), lh);
        const Monomial l2 = ring_.lcm(entries_[p.j].poly.leading_monomial(), lh);
        if (!(l1 == p.lcm) && !(l2 == p.lcm)) continue;
      }
      kept.push_back(p);
    }
    for (auto& c : cands) {
      if (!c.keep || c.coprime) continue;
      kept.push_back({c.g, hi, c.lcm, pair_sugar(c.g, hi, c.lcm)});
    }
    pairs_ = std::move(kept);
    for (std::size_t g = 0; g < hi; ++g) {
      if (entries_[g].active && lh.divides(entries_[g].poly.leading_monomial())) entries_[g].active = false;
    }
    active_cache_.clear();
    for (auto& e : entries_) {
      if (e.active) active_cache_.push_back(e.poly);
    }
  }

  Ring ring_;
  Budget budget_;
  std::vector<Entry> entries_;
  std::vector<Pair> pairs_;
  std::vector<Polynomial> active_cache_;
};

}  // namespace

Polynomial reduce(const Polynomial& f, std::span<const Polynomial> basis) { return reduce_impl(f, basis, true); }

std::vector<Polynomial> interreduce(std::vector<Polynomial> basis) {
  if (basis.empty()) return basis;
  const Ring ring = basis.front().ring();
  // drop non-minimal leading monomials
  std::sort(basis.begin(), basis.end(), [&](const Polynomial& a, const Polynomial& b) {
    return ring.compare(a.leading_monomial(), b.leading_monomial()) < 0;
  });
  std::vector<Polynomial> minimal;
  for (auto& g : basis) {
    if (g.is_zero()) continue;
    bool redundant = false;
    for (const auto& m : minimal) {
      if (m.leading_monomial().divides(g.leading_monomial())) {
        redundant = true;
        break;
      }
    }
    if (!redundant) minimal.push_back(g.monic());
  }
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Polynomial> others;
    others.reserve(minimal.size() - 1);
    for (std::size_t j = 0; j < minimal.size(); ++j) {
      if (j != i) others.push_back(minimal[j]);
    }
    const Polynomial& g = minimal[i];
    // leading term is irreducible by the others; reduce the tail
    Polynomial tail = Polynomial::from_sorted_terms(ring, std::vector<Term>(g.terms().begin() + 1, g.terms().end()));
    Polynomial reduced_tail = reduce(tail, others);
    std::vector<Term> terms{g.leading_term()};
    terms.insert(terms.end(), reduced_tail.terms().begin(), reduced_tail.terms().end());
    minimal[i] = Polynomial::from_sorted_terms(ring, std::move(terms));
  }
  return minimal;
}

std::vector<Polynomial> buchberger(const Ring& ring, std::vector<Polynomial> generators, const Budget& budget) {
  return Buchberger(ring, budget).run(std::move(generators));
}

void check_buchberger_criterion(std::span<const Polynomial> basis) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      const Monomial& a = basis[i].leading_monomial();
      const Monomial& b = basis[j].leading_monomial();
      if (a.coprime(b)) continue;
      const Monomial l = basis[i].ring().lcm(a, b);
      if (!reduce(spoly(basis[i], basis[j], l), basis).is_zero()) {
        throw InternalCheckFailed("Buchberger criterion violated for basis elements " + std::to_string(i) + ", " +
                                  std::to_string(j));
      }
    }
  }
}

Ideal::Ideal(Ring ring, std::vector<Polynomial> generators) : ring_(std::move(ring)) {
  for (auto& g : generators) {
    if (g.is_zero()) continue;
    if (!(g.ring() == ring_)) {
      if (!g.ring().same_table(ring_)) throw RingMismatch("ideal generator lives in a different ring");
      g = g.with_ring(ring_);
    }
    gens_.push_back(std::move(g));
  }
}

bool Ideal::has_basis() const {
  std::lock_guard lock(cache_->mutex);
  return cache_->basis != nullptr;
}

const std::vector<Polynomial>& Ideal::basis(const Budget& budget) const {
  std::lock_guard lock(cache_->mutex);
  if (!cache_->basis) {
    auto b = buchberger(ring_, gens_, budget);
    if (budget.verify) check_buchberger_criterion(b);
    cache_->basis = std::make_shared<const std::vector<Polynomial>>(std::move(b));
  }
  return *cache_->basis;
}

void Ideal::seed_basis(std::vector<Polynomial> reduced, const Budget& budget) const {
  if (budget.verify) check_buchberger_criterion(reduced);
  std::lock_guard lock(cache_->mutex);
  if (!cache_->basis) cache_->basis = std::make_shared<const std::vector<Polynomial>>(std::move(reduced));
}

std::vector<Monomial> Ideal::leading_monomials(const Budget& budget) const {
  std::vector<Monomial> out;
  for (const auto& g : basis(budget)) out.push_back(g.leading_monomial());
  return out;
}

bool Ideal::is_unit(const Budget& budget) const {
  const auto& b = basis(budget);
  return b.size() == 1 && b[0].leading_monomial().is_one();
}

bool Ideal::is_homogeneous() const {
  return std::all_of(gens_.begin(), gens_.end(), [](const Polynomial& g) { return g.is_homogeneous(); });
}

std::string Ideal::serialize() const {
  std::ostringstream os;
  os << "order " << ring_.order().descriptor() << "\n";
  for (const auto& g : gens_) os << g.to_string() << "\n";
  return os.str();
}

Ideal Ideal::deserialize(const TablePtr& table, std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::optional<Ring> ring;
  std::vector<Polynomial> gens;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (!ring) {
      if (!line.starts_with("order ")) throw ParseError("ideal serialization must start with 'order <descriptor>'");
      ring = Ring(table, MonomialOrder::from_descriptor(line.substr(6)));
      continue;
    }
    gens.push_back(parse_polynomial(*ring, line));
  }
  if (!ring) throw ParseError("empty ideal serialization");
  return Ideal(*ring, std::move(gens));
}

Ideal groebner(const Ideal& ideal, const Budget& budget) {
  (void)ideal.basis(budget);
  return ideal;
}

Polynomial normal_form(const Polynomial& f, const Ideal& ideal, const Budget& budget) {
  if (!f.is_zero() && !f.ring().same_table(ideal.ring())) throw RingMismatch("normal_form: ring mismatch");
  const Polynomial g = f.is_zero() ? Polynomial(ideal.ring()) : f.with_ring(ideal.ring());
  return reduce(g, ideal.basis(budget));
}

bool contains(const Ideal& ideal, const Polynomial& f, const Budget& budget) {
  return normal_form(f, ideal, budget).is_zero();
}

bool contains(const Ideal& ideal, const Ideal& sub, const Budget& budget) {
  for (const auto& g : sub.generators()) {
    if (!contains(ideal, g, budget)) return false;
  }
  return true;
}

bool same_ideal(const Ideal& a, const Ideal& b, const Budget& budget) {
  return contains(a, b, budget) && contains(b, a, budget);
}

Ideal sum(const Ideal& a, const Ideal& b) {
  if (!(a.ring() == b.ring())) throw RingMismatch("sum of ideals in different rings");
  std::vector<Polynomial> g = a.generators();
  g.insert(g.end(), b.generators().begin(), b.generators().end());
  return Ideal(a.ring(), std::move(g));
}

Ideal sum(const Ideal& a, const std::vector<Polynomial>& extra) { return sum(a, Ideal(a.ring(), extra)); }

Ideal intersect(const Ideal& a, const Ideal& b, const Budget& budget) {
  if (!(a.ring() == b.ring())) throw RingMismatch("intersect: ideals live in different rings");
  const Ring& ring = a.ring();
  const auto& tab = ring.table();
  std::vector<std::string> names{"_t"};
  std::vector<int> degrees{2};
  for (std::size_t i = 0; i < tab.size(); ++i) {
    names.push_back(tab.name(i));
    degrees.push_back(tab.degree(i));
  }
  const Ring tagged(make_table(std::move(names), std::move(degrees)), MonomialOrder::elimination(1));
  const Polynomial t = Polynomial::variable(tagged, 0);
  const Polynomial one_minus_t = Polynomial::constant(tagged, Rational(1)) - t;
  std::vector<Polynomial> gens;
  // a reduced basis keeps the tagged system small when one is already known
  const auto& ga = a.has_basis() ? a.basis(budget) : a.generators();
  const auto& gb = b.has_basis() ? b.basis(budget) : b.generators();
  for (const auto& g : ga) gens.push_back(t * change_ring(g, tagged));
  for (const auto& g : gb) gens.push_back(one_minus_t * change_ring(g, tagged));
  const auto basis = buchberger(tagged, std::move(gens), budget);
  std::vector<Polynomial> result;
  for (const auto& g : basis) {
    if (!g.involves(0)) result.push_back(change_ring(g, ring));
  }
  Ideal out(ring, result);
  if (ring.order().kind == MonomialOrder::Kind::GRevLex) {
    // the t-free part of an elimination basis is the reduced basis for the
    // induced order, which is grevlex on the remaining variables
    out.seed_basis(interreduce(std::move(result)), budget);
  }
  return out;
}

Ideal colon(const Ideal& ideal, const Polynomial& f, const Budget& budget) {
  if (f.is_zero()) throw Error("colon by the zero polynomial");
  const Ring& ring = ideal.ring();
  const Polynomial ff = f.with_ring(ring);
  const Ideal k = intersect(ideal, Ideal(ring, {ff}), budget);
  std::vector<Polynomial> gens;
  for (const auto& g : k.generators()) gens.push_back(divide_exact(g, ff));
  Ideal out(ring, gens);
  if (k.has_basis()) {
    // LT(g/f) = LT(g)/LT(f), so the quotients of a basis of I ∩ ⟨f⟩ form a
    // basis of (I : f)
    out.seed_basis(interreduce(std::move(gens)), budget);
  }
  return out;
}

namespace {

struct Tracked {
  Polynomial poly;
  std::vector<Polynomial> cof;
};

// Reduces h completely by `basis`, updating cofactors so that
// h.poly = Σ h.cof[k] * gens[k] stays true.
void reduce_tracked(Tracked& h, const std::vector<Tracked>& basis) {
  const Ring& ring = h.poly.ring();
  std::vector<Term> done;
  Polynomial work = h.poly;
  while (!work.is_zero()) {
    const Term lt = work.leading_term();
    const Tracked* div = nullptr;
    for (const auto& g : basis) {
      if (g.poly.leading_monomial().divides(lt.mono)) {
        div = &g;
        break;
      }
    }
    if (!div) {
      done.push_back(lt);
      work = Polynomial::from_sorted_terms(ring, std::vector<Term>(work.terms().begin() + 1, work.terms().end()));
      continue;
    }
    const Rational c = lt.coef / div->poly.leading_coef();
    const Monomial m = lt.mono / div->poly.leading_monomial();
    work = work.add_scaled(-c, m, div->poly);
    for (std::size_t k = 0; k < h.cof.size(); ++k) {
      if (!div->cof[k].is_zero()) h.cof[k] = h.cof[k].add_scaled(-c, m, div->cof[k]);
    }
  }
  h.poly = Polynomial::from_sorted_terms(ring, std::move(done));
}

}  // namespace

std::optional<std::vector<Polynomial>> lift(const Ideal& ideal, const Polynomial& f, const Budget& budget) {
  const Ring& ring = ideal.ring();
  const auto& gens = ideal.generators();
  const Polynomial target = f.is_zero() ? Polynomial(ring) : f.with_ring(ring);
  const bool truncate = ideal.is_homogeneous() && target.is_homogeneous();
  const int bound = target.weight();
  std::vector<Tracked> basis;
  auto add = [&](Tracked h) {
    reduce_tracked(h, basis);
    if (h.poly.is_zero()) return;
    const Rational inv = 1 / h.poly.leading_coef();
    h.poly *= inv;
    for (auto& c : h.cof) c *= inv;
    basis.push_back(std::move(h));
    if (basis.size() > budget.max_basis_size) throw BudgetExceeded("lift: basis size exceeds budget");
  };
  for (std::size_t k = 0; k < gens.size(); ++k) {
    Tracked t{gens[k], std::vector<Polynomial>(gens.size(), Polynomial(ring))};
    t.cof[k] = Polynomial::constant(ring, Rational(1));
    if (truncate && gens[k].weight() > bound) continue;
    add(std::move(t));
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) pairs.emplace_back(i, j);
  }
  while (!pairs.empty()) {
    auto best = pairs.begin();
    Monomial best_lcm = ring.lcm(basis[best->first].poly.leading_monomial(), basis[best->second].poly.leading_monomial());
    for (auto it = pairs.begin() + 1; it != pairs.end(); ++it) {
      Monomial l = ring.lcm(basis[it->first].poly.leading_monomial(), basis[it->second].poly.leading_monomial());
      if (ring.compare(l, best_lcm) < 0) {
        best = it;
        best_lcm = l;
      }
    }
    const auto [i, j] = *best;
    pairs.erase(best);
    const Monomial& li = basis[i].poly.leading_monomial();
    const Monomial& lj = basis[j].poly.leading_monomial();
    if (li.coprime(lj)) continue;
    if (truncate && best_lcm.weight() > bound) continue;
    if (2 * best_lcm.weight() > budget.max_degree) throw BudgetExceeded("lift: degree exceeds budget");
    const Monomial mi = best_lcm / li;
    const Monomial mj = best_lcm / lj;
    Tracked s{basis[i].poly.times_monomial(mi).add_scaled(Rational(-1), mj, basis[j].poly),
              std::vector<Polynomial>(gens.size(), Polynomial(ring))};
    for (std::size_t k = 0; k < gens.size(); ++k) {
      s.cof[k] = basis[i].cof[k].times_monomial(mi).add_scaled(Rational(-1), mj, basis[j].cof[k]);
    }
    const std::size_t before = basis.size();
    add(std::move(s));
    for (std::size_t k = before; k < basis.size(); ++k) {
      for (std::size_t l = 0; l < k; ++l) pairs.emplace_back(l, k);
    }
  }
  // f - Σ q_k g_k = remainder; accumulate the quotient via tracked reduction
  Tracked r{target, std::vector<Polynomial>(gens.size(), Polynomial(ring))};
  reduce_tracked(r, basis);
  if (!r.poly.is_zero()) return std::nullopt;
  std::vector<Polynomial> q;
  q.reserve(gens.size());
  for (auto& c : r.cof) q.push_back(-c);
  return q;
}

}  // namespace hkq
