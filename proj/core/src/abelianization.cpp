#include "hkq/abelianization.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "hkq/linalg.hpp"

namespace hkq {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream is{std::string(s)};
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

Substitution parse_substitution(const Ring& ring, std::string_view text) {
  Substitution sub;
  for (const auto& part : split(text, ',')) {
    const auto arrow = part.find("->");
    if (arrow == std::string::npos) throw ParseError("expected 'var -> polynomial' in '" + part + "'");
    const std::string var = trim(std::string_view(part).substr(0, arrow));
    if (!ring.table().index_of(var)) throw ParseError("unknown variable '" + var + "' in substitution");
    sub.emplace(var, parse_polynomial(ring, std::string_view(part).substr(arrow + 2)));
  }
  return sub;
}

}  // namespace

void RootDatum::validate() const {
  if (weyl_order < 1) throw Error("root datum: |W| must be positive");
  const auto param = ring.table().index_of(parameter);
  if (!param) throw Error("root datum: missing parameter variable '" + parameter + "'");
  for (const auto& a : positive_roots) {
    if (a.is_zero()) throw Error("root datum: zero root");
    if (!a.is_homogeneous() || a.weight() != 1) throw Error("root datum: root " + a.to_string() + " is not linear");
    if (a.involves(*param)) throw Error("root datum: root " + a.to_string() + " involves the parameter");
  }
  for (std::size_t i = 0; i < positive_roots.size(); ++i) {
    for (std::size_t j = 0; j < positive_roots.size(); ++j) {
      if (positive_roots[i] == -positive_roots[j]) throw Error("root datum: Δ+ contains a root and its negative");
    }
  }
}

RootDatum su2() {
  RootDatum r;
  r.ring = Ring(make_table({"alpha", "x"}));
  r.torus_rank = 1;
  const Polynomial a = Polynomial::variable(r.ring, "alpha");
  r.positive_roots = {a};
  r.weyl_order = 2;
  r.reflections = {{{"alpha", -a}}};
  return r;
}

RootDatum su3() {
  return parse_root_datum(
      "torus a1 a2\n"
      "root a1\n"
      "root a2\n"
      "root a1 + a2\n"
      "weyl 6\n"
      "reflection a1 -> -a1, a2 -> a1 + a2\n"
      "reflection a1 -> a1 + a2, a2 -> -a2\n");
}

RootDatum parse_root_datum(std::string_view text) {
  std::vector<std::string> torus;
  std::string param = "x";
  std::vector<std::string> roots;
  std::vector<std::string> refl;
  std::uint64_t weyl = 1;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto sp = line.find(' ');
    const std::string key = line.substr(0, sp);
    const std::string rest = sp == std::string::npos ? "" : trim(std::string_view(line).substr(sp));
    if (key == "torus") {
      torus = words(rest);
    } else if (key == "param") {
      param = rest;
    } else if (key == "root") {
      roots.push_back(rest);
    } else if (key == "weyl") {
      try {
        weyl = std::stoull(rest);
      } catch (const std::exception&) {
        throw ParseError("root datum: bad Weyl order '" + rest + "'");
      }
    } else if (key == "reflection") {
      refl.push_back(rest);
    } else {
      throw ParseError("root datum: unknown directive '" + key + "'");
    }
  }
  if (torus.empty()) throw ParseError("root datum: missing 'torus' line");
  RootDatum r;
  std::vector<std::string> names = torus;
  names.push_back(param);
  r.ring = Ring(make_table(names));
  r.torus_rank = torus.size();
  r.parameter = param;
  r.weyl_order = weyl;
  for (const auto& s : roots) r.positive_roots.push_back(parse_polynomial(r.ring, s));
  for (const auto& s : refl) r.reflections.push_back(parse_substitution(r.ring, s));
  r.validate();
  return r;
}

Polynomial class_e(const RootDatum& r) {
  const Polynomial x = r.parameter_variable();
  Polynomial e = Polynomial::constant(r.ring, Rational(1));
  for (const auto& a : r.positive_roots) {
    e *= a * (x - a);
    e *= (-a) * (x + a);
  }
  return e;
}

Polynomial class_eprime(const RootDatum& r) {
  const Polynomial x = r.parameter_variable();
  Polynomial e = Polynomial::constant(r.ring, Rational(1));
  for (const auto& a : r.positive_roots) e *= (-a) * (x - a) * (x + a);
  return e;
}

Polynomial class_b(const RootDatum& r) {
  Polynomial b = Polynomial::constant(r.ring, Rational(1));
  for (const auto& a : r.positive_roots) b *= a;
  return b;
}

bool is_weyl_invariant(const RootDatum& r, const Polynomial& p) {
  return std::all_of(r.reflections.begin(), r.reflections.end(),
                     [&](const Substitution& s) { return substitute(p, s, r.ring) == p; });
}

QuotientRing kirwan_image(const KirwanPresentation& k) {
  const Ideal& j = k.invariant_ring.ideal();
  if (k.euler.is_zero()) throw Error("kirwan_image: zero Euler class");
  if (k.euler.is_constant()) return k.invariant_ring;
  return QuotientRing(colon(j, k.euler, k.invariant_ring.budget()), k.invariant_ring.budget());
}

std::uint64_t fixed_dimension(const QuotientRing& ring, const Substitution& sigma, int degree) {
  const auto basis = ring.graded_basis(degree);
  const std::size_t n = basis.size();
  if (n == 0) return 0;
  Matrix<Rational> m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const Polynomial image = substitute(Polynomial::monomial(ring.ring(), basis[j]), sigma, ring.ring());
    const auto coords = ring.coordinates(image, basis);
    for (std::size_t i = 0; i < n; ++i) m(i, j) = coords[i];
    m(j, j) -= 1;
  }
  return n - rank(m);
}

SecondIsoResult verify_second_iso(const KirwanPresentation& k, int max_degree) {
  if (!k.full_ring || !k.euler_prime) throw Error("verify_second_iso needs the full ring and e′");
  const QuotientRing& full = *k.full_ring;
  const Budget& budget = full.budget();
  for (const auto& g : full.ideal().generators()) {
    if (!contains(full.ideal(), substitute(g, k.involution, full.ring()), budget)) {
      throw InconsistentAction("the W-action does not preserve the full ideal (image of " + g.to_string() + ")");
    }
  }
  const QuotientRing lhs = kirwan_image(k);
  const QuotientRing rhs(k.euler_prime->is_constant() ? full.ideal() : colon(full.ideal(), *k.euler_prime, budget),
                         budget);
  SecondIsoResult res;
  res.max_degree = max_degree;
  res.equal = true;
  for (int d = 0; d <= max_degree; d += 2) {
    res.invariant_dims.push_back(lhs.graded_basis(d).size());
    res.full_fixed_dims.push_back(fixed_dimension(rhs, k.involution, d));
    if (res.invariant_dims.back() != res.full_fixed_dims.back()) res.equal = false;
  }
  return res;
}

DagQuiver DagQuiver::parse(std::string_view text) {
  DagQuiver q;
  std::unordered_map<std::string, std::size_t> index;
  auto vertex = [&](const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    index.emplace(name, q.vertices.size());
    q.vertices.push_back(name);
    return q.vertices.size() - 1;
  };
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto w = words(line);
    if (w[0] == "vertices") {
      for (std::size_t i = 1; i < w.size(); ++i) vertex(w[i]);
    } else if (w[0] == "edge" && w.size() == 3) {
      const auto a = vertex(w[1]);
      q.edges.emplace_back(a, vertex(w[2]));
    } else if (w.size() == 3 && w[1] == "->") {
      const auto a = vertex(w[0]);
      q.edges.emplace_back(a, vertex(w[2]));
    } else {
      throw ParseError("quiver: cannot parse line '" + line + "'");
    }
  }
  return q;
}

bool DagQuiver::is_connected() const {
  if (vertices.empty()) return false;
  std::vector<std::size_t> parent(vertices.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& [a, b] : edges) parent[find(a)] = find(b);
  const auto root = find(0);
  for (std::size_t v = 1; v < vertices.size(); ++v) {
    if (find(v) != root) return false;
  }
  return true;
}

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& w : v) s += (s.empty() ? "" : ", ") + w;
  return s;
}

}  // namespace

CycleError::CycleError(std::vector<std::string> on_cycle)
    : Error("quiver has an oriented cycle through: " + join(on_cycle)), vertices_(std::move(on_cycle)) {}

std::vector<long> proper_quiver_weights(const DagQuiver& q) {
  const std::size_t n = q.vertices.size();
  std::vector<std::vector<std::size_t>> out(n);
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& [a, b] : q.edges) {
    if (a >= n || b >= n) throw Error("quiver edge refers to a missing vertex");
    out[a].push_back(b);
    ++indegree[b];
  }
  // peel sources; the induction assigns the rest first, so walk the peeling
  // order backwards
  std::vector<std::size_t> order;
  std::vector<std::size_t> sources;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) sources.push_back(v);
  }
  while (!sources.empty()) {
    const std::size_t v = sources.back();
    sources.pop_back();
    order.push_back(v);
    for (auto w : out[v]) {
      if (--indegree[w] == 0) sources.push_back(w);
    }
  }
  if (order.size() != n) {
    std::vector<std::string> stuck;
    for (std::size_t v = 0; v < n; ++v) {
      if (indegree[v] > 0) stuck.push_back(q.vertices[v]);
    }
    throw CycleError(std::move(stuck));
  }
  std::vector<long> lambda(n, 0);
  long lowest = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    lowest -= 1;
    lambda[*it] = lowest;
  }
  return lambda;
}

bool check_proper_weights(const DagQuiver& q, const std::vector<long>& lambda) {
  if (lambda.size() != q.vertices.size()) return false;
  if (std::any_of(lambda.begin(), lambda.end(), [](long l) { return l >= 0; })) return false;
  return std::all_of(q.edges.begin(), q.edges.end(), [&](const auto& e) { return lambda[e.first] < lambda[e.second]; });
}

}  // namespace hkq
