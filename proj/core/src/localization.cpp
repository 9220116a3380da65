#include "hkq/localization.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

namespace hkq {

namespace {

std::size_t x_index(const Ring& ring) {
  const auto x = ring.table().index_of("x");
  if (!x || *x + 1 != ring.size()) throw Error("component ring must end with the variable x");
  return *x;
}

// Splits a monomial into its x-free part and the exponent of x.
std::pair<Monomial, unsigned> split_x(const Ring& ring, const Monomial& m, std::size_t xi) {
  Monomial rest = m;
  const unsigned k = m.exponent(xi);
  rest.set_exponent(xi, 0, ring.table().weights());
  return {rest, k};
}

RationalFunction upoly_x(const Rational& c, unsigned k) { return RationalFunction(UPoly::x(k) * UPoly(c)); }

bool all_zero(const KVector& v) {
  return std::all_of(v.begin(), v.end(), [](const RationalFunction& f) { return f.is_zero(); });
}

}  // namespace

FixedComponent::FixedComponent(std::string name, Ring ring, std::vector<Polynomial> relations, Polynomial euler,
                               Polynomial fundamental)
    : name_(std::move(name)), ring_(std::move(ring)), euler_poly_(std::move(euler)), fundamental_(std::move(fundamental)) {
  if (ring_.order().kind != MonomialOrder::Kind::GRevLex) throw Error("component ring must be graded reverse lex");
  const std::size_t xi = x_index(ring_);
  for (const auto& r : relations) {
    if (r.involves(xi)) throw Error("component " + name_ + ": relation " + r.to_string() + " involves x");
    if (!r.is_homogeneous()) throw Error("component " + name_ + ": relation " + r.to_string() + " is not homogeneous");
  }
  relations_ = Ideal(ring_, std::move(relations));
  if (fundamental_.involves(xi)) throw Error("component " + name_ + ": fundamental class involves x");

  // finite basis of the algebra: probe until a window of empty weights
  const auto lead = relations_.leading_monomials();
  std::vector<std::size_t> vars(xi);
  std::iota(vars.begin(), vars.end(), 0);
  int window = 1;
  for (std::size_t v : vars) {
    window = std::max(window, ring_.table().weight(v));
    const bool pure = std::any_of(lead.begin(), lead.end(), [&](const Monomial& m) {
      return m.exponent(v) > 0 && m.weight() == static_cast<int>(m.exponent(v)) * ring_.table().weight(v);
    });
    if (!pure) throw Error("component " + name_ + ": algebra is not finite-dimensional");
  }
  for (int probe = 2 * window;; probe *= 2) {
    const auto levels = standard_monomials(ring_, lead, vars, probe);
    int empty = 0;
    for (int k = probe; k >= 0 && levels[static_cast<std::size_t>(k)].empty(); --k) ++empty;
    if (empty < window) continue;
    basis_.clear();
    for (const auto& l : levels) basis_.insert(basis_.end(), l.begin(), l.end());
    break;
  }
  if (basis_.empty()) throw Error("component " + name_ + ": algebra is zero");
  one_index_ = 0;  // weight 0 comes first
  if (!basis_[0].is_one()) throw InternalCheckFailed("component basis does not start with 1");

  const int top_weight = basis_.back().weight();
  top_degree_ = 2 * top_weight;
  std::size_t top_count = 0;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (basis_[i].weight() == top_weight) {
      ++top_count;
      top_index_ = i;
    }
  }
  if (top_count != 1) throw Error("component " + name_ + ": top degree is not one-dimensional");

  table_.assign(basis_.size(), std::vector<std::vector<std::pair<std::size_t, Rational>>>(basis_.size()));
  std::unordered_map<Monomial, std::size_t, MonomialHash> index;
  for (std::size_t i = 0; i < basis_.size(); ++i) index.emplace(basis_[i], i);
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    for (std::size_t j = i; j < basis_.size(); ++j) {
      const Polynomial nf = normal_form(Polynomial::monomial(ring_, basis_[i] * basis_[j]), relations_);
      std::vector<std::pair<std::size_t, Rational>> row;
      for (const auto& t : nf.terms()) row.emplace_back(index.at(t.mono), t.coef);
      table_[i][j] = row;
      table_[j][i] = row;
    }
  }

  const KVector f = coordinates(fundamental_);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i != top_index_ && !f[i].is_zero()) throw Error("component " + name_ + ": fundamental class is not of top degree");
  }
  if (f[top_index_].is_zero()) throw Error("component " + name_ + ": fundamental class is zero");
  fundamental_coef_ = f[top_index_].numerator().coefficient(0);

  euler_ = coordinates(euler_poly_);
  const RationalFunction& lead_part = euler_[one_index_];
  const UPoly& num = lead_part.numerator();
  if (num.is_zero()) throw FixedLocusError("component " + name_ + ": Euler class has no a·x^k term");
  for (int k = 0; k < num.degree(); ++k) {
    if (!is_zero(num.coefficient(k))) {
      throw Error("component " + name_ + ": degree-0 part of the Euler class is not a monomial in x");
    }
  }
  euler_a_ = num.leading();
  euler_k_ = num.degree();
}

FixedComponent FixedComponent::parse(std::string name, const std::vector<std::string>& vars,
                                     const std::vector<std::string>& relations, std::string_view euler,
                                     std::string_view fundamental) {
  std::vector<std::string> names;
  std::vector<int> degrees;
  for (const auto& v : vars) {
    const auto colon = v.find(':');
    names.push_back(v.substr(0, colon));
    int d = 2;
    if (colon != std::string::npos) {
      try {
        d = std::stoi(v.substr(colon + 1));
      } catch (const std::exception&) {
        throw ParseError("bad degree in '" + v + "'");
      }
    }
    if (d <= 0 || d % 2) throw ParseError("degrees must be positive and even in '" + v + "'");
    degrees.push_back(d);
  }
  names.push_back("x");
  degrees.push_back(2);
  const Ring ring(make_table(names, degrees));
  std::vector<Polynomial> rel;
  for (const auto& r : relations) rel.push_back(parse_polynomial(ring, r));
  return FixedComponent(std::move(name), ring, std::move(rel), parse_polynomial(ring, euler),
                        parse_polynomial(ring, fundamental));
}

KVector FixedComponent::coordinates(const Polynomial& p) const {
  if (!(p.ring() == ring_)) throw RingMismatch("component " + name_ + ": polynomial from another ring");
  const std::size_t xi = ring_.size() - 1;
  const Polynomial nf = normal_form(p, relations_);
  KVector out(basis_.size());
  for (const auto& t : nf.terms()) {
    auto [rest, k] = split_x(ring_, t.mono, xi);
    const auto it = std::lower_bound(basis_.begin(), basis_.end(), rest, [&](const Monomial& a, const Monomial& b) {
      if (a.weight() != b.weight()) return a.weight() < b.weight();
      return ring_.compare(a, b) < 0;
    });
    if (it == basis_.end() || !(*it == rest)) throw InternalCheckFailed("normal form leaves the component basis");
    out[static_cast<std::size_t>(it - basis_.begin())] += upoly_x(t.coef, k);
  }
  return out;
}

Polynomial FixedComponent::to_polynomial(const KVector& v) const {
  const std::size_t xi = ring_.size() - 1;
  Polynomial out(ring_);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    if (!v[i].is_polynomial()) throw Error("to_polynomial: coordinate " + v[i].to_string() + " is not a polynomial");
    const Rational inv = 1 / v[i].denominator().leading();
    out += Polynomial::monomial(ring_, basis_[i]) * from_upoly(v[i].numerator(), ring_, xi) * inv;
  }
  return out;
}

KVector FixedComponent::one() const {
  KVector v(basis_.size());
  v[one_index_] = Rational(1);
  return v;
}

KVector FixedComponent::multiply(const KVector& a, const KVector& b) const {
  if (a.size() != basis_.size() || b.size() != basis_.size()) throw Error("component " + name_ + ": size mismatch");
  KVector out(basis_.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j].is_zero()) continue;
      const RationalFunction ab = a[i] * b[j];
      for (const auto& [k, c] : table_[i][j]) out[k] += ab * RationalFunction(c);
    }
  }
  return out;
}

KVector FixedComponent::invert_euler() const {
  // e = a·x^k·(1 + n) with n = nil/(a·x^k) nilpotent
  const RationalFunction lead = upoly_x(euler_a_, static_cast<unsigned>(euler_k_));
  const RationalFunction inv_lead = RationalFunction(Rational(1)) / lead;
  KVector n = euler_;
  n[one_index_] = RationalFunction();
  for (auto& c : n) c *= inv_lead;
  KVector neg_n = n;
  for (auto& c : neg_n) c = -c;
  KVector sum = one();
  KVector term = one();
  for (std::size_t m = 0; m <= basis_.size(); ++m) {
    term = multiply(term, neg_n);
    if (all_zero(term)) break;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
  }
  for (auto& c : sum) c *= inv_lead;
  if (multiply(sum, euler_) != one()) throw InternalCheckFailed("component " + name_ + ": Euler inverse check failed");
  return sum;
}

RationalFunction FixedComponent::integrate_top(const KVector& v) const {
  return v.at(top_index_) / RationalFunction(fundamental_coef_);
}

FixedComponent FixedComponent::flipped() const {
  std::vector<Polynomial> rel = relations_.generators();
  return FixedComponent(name_, ring_, std::move(rel), -euler_poly_, -fundamental_);
}

CircleCompactModel::CircleCompactModel(std::string name, std::vector<FixedComponent> components,
                                       std::optional<TotalPresentation> total)
    : name_(std::move(name)), components_(std::move(components)), total_(std::move(total)) {
  if (components_.empty()) throw Error("model " + name_ + " has no fixed components");
  for (const auto& c : components_) dim_ += c.dim();
  if (total_ && total_->restrictions.size() != components_.size()) {
    throw Error("model " + name_ + ": one restriction per component is required");
  }
}

std::size_t CircleCompactModel::component_index(std::string_view name) const {
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i].name() == name) return i;
  }
  throw Error("model " + name_ + " has no component '" + std::string(name) + "'");
}

void CircleCompactModel::check(const EquivariantClass& a) const {
  if (a.parts.size() != components_.size()) throw Error("class does not belong to model " + name_);
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (a.parts[i].size() != components_[i].dim()) throw Error("class does not belong to model " + name_);
  }
}

EquivariantClass CircleCompactModel::zero() const {
  EquivariantClass z;
  for (const auto& c : components_) z.parts.emplace_back(c.dim());
  return z;
}

EquivariantClass CircleCompactModel::one() const {
  EquivariantClass z;
  for (const auto& c : components_) z.parts.push_back(c.one());
  return z;
}

EquivariantClass CircleCompactModel::unit_vector(std::size_t i, std::size_t j) const {
  EquivariantClass z = zero();
  z.parts.at(i).at(j) = Rational(1);
  return z;
}

std::vector<EquivariantClass> CircleCompactModel::standard_basis() const {
  std::vector<EquivariantClass> out;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    for (std::size_t j = 0; j < components_[i].dim(); ++j) out.push_back(unit_vector(i, j));
  }
  return out;
}

EquivariantClass CircleCompactModel::make_class(const std::vector<Polynomial>& parts) const {
  if (parts.size() != components_.size()) throw Error("make_class: one polynomial per component is required");
  EquivariantClass a;
  for (std::size_t i = 0; i < parts.size(); ++i) a.parts.push_back(components_[i].coordinates(parts[i]));
  return a;
}

KVector CircleCompactModel::flatten(const EquivariantClass& a) const {
  check(a);
  KVector v;
  for (const auto& p : a.parts) v.insert(v.end(), p.begin(), p.end());
  return v;
}

EquivariantClass CircleCompactModel::unflatten(const KVector& v) const {
  if (v.size() != dim_) throw Error("unflatten: expected " + std::to_string(dim_) + " coordinates");
  EquivariantClass a;
  std::size_t pos = 0;
  for (const auto& c : components_) {
    a.parts.emplace_back(v.begin() + static_cast<std::ptrdiff_t>(pos),
                         v.begin() + static_cast<std::ptrdiff_t>(pos + c.dim()));
    pos += c.dim();
  }
  return a;
}

EquivariantClass CircleCompactModel::add(const EquivariantClass& a, const EquivariantClass& b) const {
  check(a);
  check(b);
  EquivariantClass out = a;
  for (std::size_t i = 0; i < out.parts.size(); ++i) {
    for (std::size_t j = 0; j < out.parts[i].size(); ++j) out.parts[i][j] += b.parts[i][j];
  }
  return out;
}

EquivariantClass CircleCompactModel::subtract(const EquivariantClass& a, const EquivariantClass& b) const {
  return add(a, scale(RationalFunction(Rational(-1)), b));
}

EquivariantClass CircleCompactModel::multiply(const EquivariantClass& a, const EquivariantClass& b) const {
  check(a);
  check(b);
  EquivariantClass out;
  for (std::size_t i = 0; i < components_.size(); ++i) out.parts.push_back(components_[i].multiply(a.parts[i], b.parts[i]));
  return out;
}

EquivariantClass CircleCompactModel::scale(const RationalFunction& c, const EquivariantClass& a) const {
  check(a);
  EquivariantClass out = a;
  for (auto& p : out.parts) {
    for (auto& v : p) v *= c;
  }
  return out;
}

RationalFunction CircleCompactModel::integrate(const EquivariantClass& a) const {
  check(a);
  RationalFunction sum;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto& c = components_[i];
    sum += c.integrate_top(c.multiply(a.parts[i], c.invert_euler()));
  }
  return sum;
}

RationalFunction CircleCompactModel::pairing(const EquivariantClass& a, const EquivariantClass& b) const {
  return integrate(multiply(a, b));
}

Matrix<RationalFunction> CircleCompactModel::gram(const std::vector<EquivariantClass>& basis) const {
  Matrix<RationalFunction> g(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i; j < basis.size(); ++j) {
      g(i, j) = pairing(basis[i], basis[j]);
      g(j, i) = g(i, j);
    }
  }
  return g;
}

bool CircleCompactModel::is_nondegenerate(const std::vector<EquivariantClass>& basis) const {
  if (basis.size() != dim_) {
    throw Error("is_nondegenerate: expected " + std::to_string(dim_) + " classes, got " + std::to_string(basis.size()));
  }
  return rank(gram(basis)) == dim_;
}

const Matrix<RationalFunction>& CircleCompactModel::inverse_gram() const {
  std::call_once(gram_cache_->once, [this] {
    const auto g = gram(standard_basis());
    Matrix<RationalFunction> id(dim_, dim_);
    for (std::size_t j = 0; j < dim_; ++j) id(j, j) = Rational(1);
    auto sol = solve(g, id);
    if (!sol) throw Error("model " + name_ + ": the pairing is degenerate");
    Matrix<RationalFunction> inv = std::move(*sol);
    gram_cache_->inverse = std::move(inv);
  });
  return gram_cache_->inverse;
}

EquivariantClass CircleCompactModel::restrict(const Polynomial& p) const {
  if (!total_) throw Error("model " + name_ + " has no total presentation");
  std::vector<Polynomial> parts;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    Substitution s = total_->restrictions[i];
    s.emplace("x", Polynomial::variable(components_[i].ring(), "x"));
    parts.push_back(substitute(p, s, components_[i].ring()));
  }
  return make_class(parts);
}

CircleCompactModel CircleCompactModel::with_flipped_orientation(std::size_t i) const {
  std::vector<FixedComponent> comps = components_;
  comps.at(i) = comps[i].flipped();
  return CircleCompactModel(name_, std::move(comps), total_);
}

ModelMap::ModelMap(std::string name, ModelPtr source, ModelPtr target, std::vector<std::size_t> assignment,
                   std::vector<Substitution> pullbacks, std::optional<Substitution> total_pullback)
    : name_(std::move(name)),
      source_(std::move(source)),
      target_(std::move(target)),
      assignment_(std::move(assignment)),
      pullbacks_(std::move(pullbacks)),
      total_pullback_(std::move(total_pullback)) {
  const auto& src = source_->components();
  const auto& tgt = target_->components();
  if (assignment_.size() != src.size() || pullbacks_.size() != src.size()) {
    throw Error("map " + name_ + ": need one target component and pullback per source component");
  }
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (assignment_[i] >= tgt.size()) throw Error("map " + name_ + ": target component out of range");
    const FixedComponent& t = tgt[assignment_[i]];
    const FixedComponent& s = src[i];
    Substitution sub = pullbacks_[i];
    sub.emplace("x", Polynomial::variable(s.ring(), "x"));
    const auto& tt = t.ring().table();
    for (std::size_t v = 0; v + 1 < tt.size(); ++v) {
      auto it = sub.find(tt.name(v));
      if (it == sub.end()) throw Error("map " + name_ + ": no pullback for " + tt.name(v) + " on " + s.name());
      const Polynomial& img = it->second;
      if (!img.is_zero() && (!img.is_homogeneous() || img.weight() != tt.weight(v))) {
        throw Error("map " + name_ + ": pullback of " + tt.name(v) + " does not preserve degree");
      }
    }
    for (const auto& r : t.relations().generators()) {
      if (!normal_form(substitute(r, sub, s.ring()), s.relations()).is_zero()) {
        throw Error("map " + name_ + ": pullback does not respect relation " + r.to_string() + " of " + t.name());
      }
    }
    std::vector<KVector> imgs;
    for (const auto& m : t.basis()) imgs.push_back(s.coordinates(substitute(Polynomial::monomial(t.ring(), m), sub, s.ring())));
    images_.push_back(std::move(imgs));
  }
}

ModelMap ModelMap::identity(ModelPtr model) {
  std::vector<std::size_t> assign(model->components().size());
  std::iota(assign.begin(), assign.end(), 0);
  std::vector<Substitution> pulls;
  for (const auto& c : model->components()) {
    Substitution s;
    const auto& t = c.ring().table();
    for (std::size_t v = 0; v + 1 < t.size(); ++v) s.emplace(t.name(v), Polynomial::variable(c.ring(), v));
    pulls.push_back(std::move(s));
  }
  std::optional<Substitution> total;
  if (model->total()) {
    total.emplace();
    const Ring& r = model->total()->ring.ring();
    for (std::size_t v = 0; v < r.size(); ++v) total->emplace(r.table().name(v), Polynomial::variable(r, v));
  }
  return ModelMap("id", model, model, std::move(assign), std::move(pulls), std::move(total));
}

EquivariantClass ModelMap::pullback(const EquivariantClass& a) const {
  (void)target_->flatten(a);  // shape check
  EquivariantClass out = source_->zero();
  for (std::size_t i = 0; i < out.parts.size(); ++i) {
    const KVector& ta = a.parts[assignment_[i]];
    for (std::size_t j = 0; j < ta.size(); ++j) {
      if (ta[j].is_zero()) continue;
      for (std::size_t k = 0; k < out.parts[i].size(); ++k) {
        if (!images_[i][j][k].is_zero()) out.parts[i][k] += ta[j] * images_[i][j][k];
      }
    }
  }
  return out;
}

Matrix<RationalFunction> ModelMap::pullback_matrix() const {
  const auto tb = target_->standard_basis();
  Matrix<RationalFunction> m(source_->dim(), target_->dim());
  for (std::size_t j = 0; j < tb.size(); ++j) {
    const KVector col = source_->flatten(pullback(tb[j]));
    for (std::size_t i = 0; i < col.size(); ++i) m(i, j) = col[i];
  }
  return m;
}

EquivariantClass ModelMap::pushforward(const EquivariantClass& g) const {
  const auto tb = target_->standard_basis();
  std::vector<RationalFunction> rhs;
  for (const auto& t : tb) rhs.push_back(source_->pairing(g, pullback(t)));
  const auto& inv = target_->inverse_gram();
  KVector c(tb.size());
  for (std::size_t i = 0; i < tb.size(); ++i) {
    for (std::size_t j = 0; j < tb.size(); ++j) {
      if (!inv(i, j).is_zero() && !rhs[j].is_zero()) c[i] += inv(i, j) * rhs[j];
    }
  }
  return target_->unflatten(c);
}

ModelMap ModelMap::then(const ModelMap& after) const {
  if (after.source_ != target_) throw Error("cannot compose " + name_ + " with " + after.name_);
  std::vector<std::size_t> assign;
  std::vector<Substitution> pulls;
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    const std::size_t mid = assignment_[i];
    assign.push_back(after.assignment_[mid]);
    const FixedComponent& s = source_->component(i);
    Substitution inner = pullbacks_[i];
    inner.emplace("x", Polynomial::variable(s.ring(), "x"));
    Substitution composed;
    for (const auto& [var, poly] : after.pullbacks_[mid]) composed.emplace(var, substitute(poly, inner, s.ring()));
    pulls.push_back(std::move(composed));
  }
  std::optional<Substitution> total;
  if (total_pullback_ && after.total_pullback_) {
    total.emplace();
    const Ring& r = source_->total()->ring.ring();
    for (const auto& [var, poly] : *after.total_pullback_) total->emplace(var, substitute(poly, *total_pullback_, r));
  }
  return ModelMap(after.name_ + "∘" + name_, source_, after.target_, std::move(assign), std::move(pulls),
                  std::move(total));
}

bool verify_integration_adjunction(const ModelMap& f, const EquivariantClass& a, const EquivariantClass& g) {
  const auto& m = *f.target();
  const auto& n = *f.source();
  return m.integrate(m.multiply(a, f.pushforward(g))) == n.integrate(n.multiply(f.pullback(a), g));
}

namespace {

std::string renamed(const std::string& v, int which) { return v + "_" + std::to_string(which); }

}  // namespace

ModelPtr product_model(const ModelPtr& m) {
  std::vector<FixedComponent> comps;
  for (const auto& ci : m->components()) {
    for (const auto& cj : m->components()) {
      std::vector<std::string> names;
      std::vector<int> degrees;
      Substitution to1, to2;
      const auto& ti = ci.ring().table();
      const auto& tj = cj.ring().table();
      for (std::size_t v = 0; v + 1 < ti.size(); ++v) {
        names.push_back(renamed(ti.name(v), 1));
        degrees.push_back(ti.degree(v));
      }
      for (std::size_t v = 0; v + 1 < tj.size(); ++v) {
        names.push_back(renamed(tj.name(v), 2));
        degrees.push_back(tj.degree(v));
      }
      names.push_back("x");
      degrees.push_back(2);
      const Ring r(make_table(names, degrees));
      for (std::size_t v = 0; v + 1 < ti.size(); ++v) to1.emplace(ti.name(v), Polynomial::variable(r, renamed(ti.name(v), 1)));
      for (std::size_t v = 0; v + 1 < tj.size(); ++v) to2.emplace(tj.name(v), Polynomial::variable(r, renamed(tj.name(v), 2)));
      std::vector<Polynomial> rel;
      for (const auto& g : ci.relations().generators()) rel.push_back(substitute(g, to1, r));
      for (const auto& g : cj.relations().generators()) rel.push_back(substitute(g, to2, r));
      comps.emplace_back(ci.name() + "*" + cj.name(), r, std::move(rel),
                         substitute(ci.euler_polynomial(), to1, r) * substitute(cj.euler_polynomial(), to2, r),
                         substitute(ci.fundamental(), to1, r) * substitute(cj.fundamental(), to2, r));
    }
  }
  return std::make_shared<CircleCompactModel>(m->name() + "^2", std::move(comps));
}

ModelMap diagonal_map(const ModelPtr& m, const ModelPtr& product) {
  const std::size_t k = m->components().size();
  std::vector<std::size_t> assign;
  std::vector<Substitution> pulls;
  for (std::size_t i = 0; i < k; ++i) {
    assign.push_back(i * k + i);
    const auto& c = m->component(i);
    const auto& t = c.ring().table();
    Substitution s;
    for (std::size_t v = 0; v + 1 < t.size(); ++v) {
      s.emplace(renamed(t.name(v), 1), Polynomial::variable(c.ring(), v));
      s.emplace(renamed(t.name(v), 2), Polynomial::variable(c.ring(), v));
    }
    pulls.push_back(std::move(s));
  }
  return ModelMap("diagonal", m, product, std::move(assign), std::move(pulls));
}

ModelMap projection_map(const ModelPtr& m, const ModelPtr& product, int which) {
  if (which != 1 && which != 2) throw Error("projection_map: which must be 1 or 2");
  const std::size_t k = m->components().size();
  std::vector<std::size_t> assign;
  std::vector<Substitution> pulls;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t own = which == 1 ? i : j;
      assign.push_back(own);
      const auto& pc = product->component(i * k + j);
      const auto& t = m->component(own).ring().table();
      Substitution s;
      for (std::size_t v = 0; v + 1 < t.size(); ++v) s.emplace(t.name(v), Polynomial::variable(pc.ring(), renamed(t.name(v), which)));
      pulls.push_back(std::move(s));
    }
  }
  return ModelMap("pi" + std::to_string(which), product, m, std::move(assign), std::move(pulls));
}

std::vector<DiagonalPair> diagonal_decomposition(const ModelPtr& m) {
  const ModelPtr prod = product_model(m);
  const EquivariantClass d = diagonal_map(m, prod).pushforward(m->one());
  // component (i,j) of the product has the tensor basis b_p ⊗ b_q in
  // lexicographic order, which is π1*e_{i,p} · π2*e_{j,q}
  const std::size_t k = m->components().size();
  std::vector<DiagonalPair> out;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t p = 0; p < m->component(i).dim(); ++p) {
      DiagonalPair pair{m->unit_vector(i, p), m->zero()};
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t dj = m->component(j).dim();
        for (std::size_t q = 0; q < dj; ++q) pair.b.parts[j][q] = d.parts[i * k + j][p * dj + q];
      }
      out.push_back(std::move(pair));
    }
  }
  return out;
}

bool diagonal_basis(const ModelPtr& m, const std::vector<DiagonalPair>& decomposition, std::uint64_t seed) {
  const ModelPtr prod = product_model(m);
  const ModelMap delta = diagonal_map(m, prod);
  const ModelMap pi1 = projection_map(m, prod, 1);
  const ModelMap pi2 = projection_map(m, prod, 2);
  EquivariantClass rhs = prod->zero();
  for (const auto& [a, b] : decomposition) rhs = prod->add(rhs, prod->multiply(pi1.pullback(a), pi2.pullback(b)));
  if (!(delta.pushforward(m->one()) == rhs)) throw DiagonalMismatch("decomposition does not reproduce the diagonal class");

  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> coef(-5, 5);
  KVector v(m->dim());
  for (auto& c : v) c = RationalFunction(UPoly(std::vector<Rational>{Rational(coef(gen)), Rational(coef(gen))}));
  const EquivariantClass a = m->unflatten(v);
  EquivariantClass replay = m->zero();
  for (const auto& [ai, bi] : decomposition) replay = m->add(replay, m->scale(m->pairing(ai, a), bi));
  if (!(replay == a)) throw InternalCheckFailed("a ≠ Σ ⟨a_i, a⟩·b_i on a random class");

  Matrix<RationalFunction> span(decomposition.size(), m->dim());
  for (std::size_t i = 0; i < decomposition.size(); ++i) {
    const KVector row = m->flatten(decomposition[i].b);
    for (std::size_t j = 0; j < row.size(); ++j) span(i, j) = row[j];
  }
  return rank(span) == m->dim();
}

PullbackComparison compare_pullback(const ModelMap& f, int degree) {
  const auto& src = *f.source();
  const auto& tgt = *f.target();
  if (!src.total() || !tgt.total() || !f.total_pullback()) throw Error("compare_pullback needs total presentations");
  PullbackComparison out;
  out.source_dim = src.dim();
  out.target_dim = tgt.dim();
  out.k_rank = rank(f.pullback_matrix());
  out.degree = degree;

  const QuotientRing& sring = src.total()->ring;
  const QuotientRing& tring = tgt.total()->ring;
  const auto sbasis = sring.graded_basis(degree);
  const auto tbasis = tring.graded_basis(degree);
  out.integral_source_dim = sbasis.size();
  Matrix<Rational> img(tbasis.size(), sbasis.size());
  for (std::size_t i = 0; i < tbasis.size(); ++i) {
    const Polynomial p = substitute(Polynomial::monomial(tring.ring(), tbasis[i]), *f.total_pullback(), sring.ring());
    const auto c = sring.coordinates(p, sbasis);
    for (std::size_t j = 0; j < c.size(); ++j) img(i, j) = c[j];
  }
  out.integral_rank = rank(img);
  for (std::size_t j = 0; j < sbasis.size(); ++j) {
    Matrix<Rational> ext(tbasis.size() + 1, sbasis.size());
    for (std::size_t i = 0; i < tbasis.size(); ++i)
      for (std::size_t k = 0; k < sbasis.size(); ++k) ext(i, k) = img(i, k);
    ext(tbasis.size(), j) = 1;
    if (rank(ext) > out.integral_rank) out.missing.push_back(Polynomial::monomial(sring.ring(), sbasis[j]).to_string());
  }
  return out;
}

std::size_t restriction_rank(const CircleCompactModel& m, int max_degree) {
  if (!m.total()) throw Error("model " + m.name() + " has no total presentation");
  const QuotientRing& tr = m.total()->ring;
  const auto xi = tr.ring().table().index_of("x");
  std::vector<KVector> rows;
  for (int d = 0; d <= max_degree; d += 2) {
    for (const auto& mono : tr.graded_basis(d)) {
      if (xi && mono.exponent(*xi) > 0) continue;
      rows.push_back(m.flatten(m.restrict(Polynomial::monomial(tr.ring(), mono))));
    }
  }
  if (rows.empty()) return 0;
  return rank(Matrix<RationalFunction>(rows));
}

void check_total_presentation(const CircleCompactModel& m) {
  if (!m.total()) return;
  for (const auto& g : m.total()->ring.ideal().generators()) {
    if (!(m.restrict(g) == m.zero())) {
      throw Error("model " + m.name() + ": relation " + g.to_string() + " does not restrict to zero");
    }
  }
}

void check_total_pullback(const ModelMap& f) {
  if (!f.total_pullback()) return;
  const auto& tring = f.target()->total()->ring.ring();
  for (std::size_t v = 0; v < tring.size(); ++v) {
    const Polynomial var = Polynomial::variable(tring, v);
    const auto it = f.total_pullback()->find(tring.table().name(v));
    const Polynomial img =
        it == f.total_pullback()->end() ? change_ring(var, f.source()->total()->ring.ring()) : it->second;
    if (!(f.source()->restrict(img) == f.pullback(f.target()->restrict(var)))) {
      throw Error("map " + f.name() + ": total pullback of " + var.to_string() + " disagrees on fixed loci");
    }
  }
}

ModelPtr Fixture::model(std::string_view name) const {
  for (const auto& m : models) {
    if (m->name() == name) return m;
  }
  throw Error("fixture has no model '" + std::string(name) + "'");
}

const ModelMap& Fixture::map(std::string_view name) const {
  for (const auto& f : maps) {
    if (f.name() == name) return f;
  }
  throw Error("fixture has no map '" + std::string(name) + "'");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream is{std::string(s)};
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

// "lhs -> rhs"
std::pair<std::string, std::string> arrow(const std::string& s, int line) {
  const auto p = s.find("->");
  if (p == std::string::npos) throw ParseError("line " + std::to_string(line) + ": expected '->'");
  return {trim(std::string_view(s).substr(0, p)), trim(std::string_view(s).substr(p + 2))};
}

struct ComponentSpec {
  std::string name;
  std::vector<std::string> vars, relations;
  std::string euler, fundamental;
  std::vector<std::pair<std::string, std::string>> restrict;
};

struct ModelSpec {
  std::string name;
  std::vector<std::string> total_vars, total_relations;
  std::vector<ComponentSpec> components;
};

struct MapSpec {
  std::string name, source, target;
  std::vector<std::pair<std::string, std::string>> assign;
  std::vector<std::tuple<std::string, std::string, std::string>> pullback;
  std::vector<std::pair<std::string, std::string>> total;
};

Ring ring_from_decls(const std::vector<std::string>& decls) {
  std::vector<std::string> names;
  std::vector<int> degrees;
  for (const auto& v : decls) {
    const auto colon = v.find(':');
    names.push_back(v.substr(0, colon));
    degrees.push_back(colon == std::string::npos ? 2 : std::stoi(v.substr(colon + 1)));
  }
  names.push_back("x");
  degrees.push_back(2);
  return Ring(make_table(names, degrees));
}

ModelPtr build_model(const ModelSpec& spec) {
  std::vector<FixedComponent> comps;
  for (const auto& c : spec.components) {
    if (c.euler.empty() || c.fundamental.empty()) {
      throw ParseError("component " + c.name + " needs 'euler' and 'fundamental'");
    }
    comps.push_back(FixedComponent::parse(c.name, c.vars, c.relations, c.euler, c.fundamental));
  }
  std::optional<TotalPresentation> total;
  if (!spec.total_vars.empty()) {
    const Ring r = ring_from_decls(spec.total_vars);
    std::vector<Polynomial> rel;
    for (const auto& s : spec.total_relations) rel.push_back(parse_polynomial(r, s));
    TotalPresentation tp{QuotientRing(Ideal(r, rel)), {}};
    for (std::size_t i = 0; i < spec.components.size(); ++i) {
      Substitution s;
      for (const auto& [var, poly] : spec.components[i].restrict) {
        if (!r.table().index_of(var)) throw ParseError("restrict: '" + var + "' is not a total variable");
        s.emplace(var, parse_polynomial(comps[i].ring(), poly));
      }
      for (std::size_t v = 0; v + 1 < r.size(); ++v) {
        if (!s.count(r.table().name(v))) {
          throw ParseError("component " + comps[i].name() + " lacks 'restrict " + r.table().name(v) + " -> ...'");
        }
      }
      tp.restrictions.push_back(std::move(s));
    }
    total = std::move(tp);
  }
  auto m = std::make_shared<CircleCompactModel>(spec.name, std::move(comps), std::move(total));
  check_total_presentation(*m);
  return m;
}

}  // namespace

Fixture parse_fixture(std::string_view text) {
  std::vector<ModelSpec> models;
  std::vector<MapSpec> maps;
  enum class Where { Top, Model, Component, Map } where = Where::Top;
  std::istringstream is{std::string(text)};
  std::string raw;
  int lineno = 0;
  auto fail = [&](const std::string& why) { throw ParseError("fixture line " + std::to_string(lineno) + ": " + why); };
  while (std::getline(is, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    const std::string key = line.substr(0, sp);
    const std::string rest = sp == std::string::npos ? "" : trim(std::string_view(line).substr(sp));

    if (where == Where::Component) {
      auto& c = models.back().components.back();
      if (key == "vars") {
        c.vars = words(rest);
      } else if (key == "relation") {
        c.relations.push_back(rest);
      } else if (key == "euler") {
        c.euler = rest;
      } else if (key == "fundamental") {
        c.fundamental = rest;
      } else if (key == "restrict") {
        c.restrict.push_back(arrow(rest, lineno));
      } else if (key == "end") {
        where = Where::Model;
      } else {
        fail("unknown component directive '" + key + "'");
      }
      continue;
    }
    if (where == Where::Map) {
      auto& m = maps.back();
      if (key == "assign") {
        m.assign.push_back(arrow(rest, lineno));
      } else if (key == "pullback") {
        const auto [lhs, rhs] = arrow(rest, lineno);
        const auto w = words(lhs);
        if (w.size() != 2) fail("expected 'pullback COMPONENT VAR -> POLY'");
        m.pullback.emplace_back(w[0], w[1], rhs);
      } else if (key == "total") {
        m.total.push_back(arrow(rest, lineno));
      } else if (key == "end") {
        where = Where::Top;
      } else {
        fail("unknown map directive '" + key + "'");
      }
      continue;
    }
    if (key == "model") {
      if (rest.empty()) fail("model needs a name");
      models.push_back({rest, {}, {}, {}});
      where = Where::Model;
    } else if (key == "map") {
      const auto [lhs, tgt] = arrow(rest, lineno);
      const auto w = words(lhs);
      if (w.size() != 2 || tgt.empty()) fail("expected 'map NAME SOURCE -> TARGET'");
      maps.push_back({w[0], w[1], tgt, {}, {}, {}});
      where = Where::Map;
    } else if (where == Where::Model && key == "total") {
      const auto sp2 = rest.find(' ');
      const std::string sub = rest.substr(0, sp2);
      const std::string body = sp2 == std::string::npos ? "" : trim(std::string_view(rest).substr(sp2));
      if (sub == "vars") {
        models.back().total_vars = words(body);
      } else if (sub == "relation") {
        models.back().total_relations.push_back(body);
      } else {
        fail("expected 'total vars' or 'total relation'");
      }
    } else if (where == Where::Model && key == "component") {
      if (rest.empty()) fail("component needs a name");
      models.back().components.push_back({rest, {}, {}, {}, {}, {}});
      where = Where::Component;
    } else {
      fail("unexpected '" + key + "'");
    }
  }
  if (where == Where::Component || where == Where::Map) throw ParseError("fixture ends inside a block");

  Fixture fx;
  for (const auto& spec : models) fx.models.push_back(build_model(spec));
  for (const auto& spec : maps) {
    const ModelPtr src = fx.model(spec.source);
    const ModelPtr tgt = fx.model(spec.target);
    std::vector<std::size_t> assign(src->components().size(), SIZE_MAX);
    for (const auto& [s, t] : spec.assign) assign.at(src->component_index(s)) = tgt->component_index(t);
    for (std::size_t i = 0; i < assign.size(); ++i) {
      if (assign[i] == SIZE_MAX) throw ParseError("map " + spec.name + ": component " + src->component(i).name() + " unassigned");
    }
    std::vector<Substitution> pulls(assign.size());
    for (const auto& [comp, var, poly] : spec.pullback) {
      const std::size_t i = src->component_index(comp);
      pulls[i].emplace(var, parse_polynomial(src->component(i).ring(), poly));
    }
    std::optional<Substitution> total;
    if (!spec.total.empty()) {
      if (!src->total() || !tgt->total()) throw ParseError("map " + spec.name + ": 'total' needs total presentations");
      total.emplace();
      for (const auto& [var, poly] : spec.total) total->emplace(var, parse_polynomial(src->total()->ring.ring(), poly));
    }
    fx.maps.emplace_back(spec.name, src, tgt, std::move(assign), std::move(pulls), std::move(total));
    check_total_pullback(fx.maps.back());
  }
  return fx;
}

Fixture load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open fixture " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_fixture(ss.str());
}

}  // namespace hkq
