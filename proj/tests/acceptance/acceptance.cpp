// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--expect-fail N]...
//
// Exit status is 0 when the set of failing criteria equals the expected set
// (empty by default), so a known red criterion stays visible in the output
// while any other change still breaks the run.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "../support/oracle.hpp"
#include "../support/random.hpp"
#include "hkq/abelianization.hpp"
#include "hkq/cli.hpp"
#include "hkq/hyperpolygon.hpp"
#include "hkq/linalg.hpp"
#include "hkq/localization.hpp"

using namespace hkq;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      passed = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

const std::vector<std::string> kLengths{"1,2,4", "1,2,4,8", "1,2,4,8,16", "1,2,4,8,16,32", "1,1,1,2"};

struct Cached {
  std::unique_ptr<HyperpolygonInstance> inst;
  std::optional<PropHpResult> hp;
};

std::map<std::string, Cached>& cache() {
  static std::map<std::string, Cached> c;
  return c;
}

const HyperpolygonInstance& instance(const std::string& xi) {
  auto& c = cache()[xi];
  if (!c.inst) c.inst = std::make_unique<HyperpolygonInstance>(EdgeLengths::parse(xi));
  return *c.inst;
}

const PropHpResult& colon_result(const std::string& xi) {
  const auto& in = instance(xi);
  auto& c = cache()[xi];
  if (!c.hp) c.hp.emplace(prop_hp(in));
  return *c.hp;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return "(" + os.str() + ")";
}

Outcome colon_equals_d_ideal() {
  Outcome o;
  for (const auto& xi : kLengths) {
    const PropHpResult& hp = colon_result(xi);
    o.require(hp.colon_contains_d, xi + ": D-ideal not inside (J:e)");
    o.require(hp.d_contains_colon, xi + ": (J:e) not inside D-ideal");
    o.require(hp.bases_equal, xi + ": reduced bases differ");
  }
  if (o.passed) o.detail = "two-sided containment for n=3..6 and (1,1,1,2)";
  return o;
}

Outcome certificates() {
  Outcome o;
  std::size_t count = 0;
  for (const auto& xi : kLengths) {
    const auto& in = instance(xi);
    for (Subset s : in.table().nonempty_shorts()) {
      const MembershipCertificate cert = certify_membership(in, s);
      o.require(verify_certificate(in, cert), xi + " " + subset_to_string(s) + ": expansion check failed");
      o.require(contains(in.ideal_J(), in.euler_e() * in.gens_D(s)),
                xi + " " + subset_to_string(s) + ": e*D_S not in J");
      ++count;
    }
  }
  // The quoted base-case identity at n=3, S={3}, constant 2^{n-3} = 1.
  const auto& n3 = instance("1,1,1");
  const Polynomial lhs = normal_form(n3.euler_e() * n3.gens_D(parse_subset("{3}")), n3.relations_Q());
  const Polynomial quoted = base_case_rhs(n3, 3, Rational(1));
  if (quoted == lhs) {
    o.detail = std::to_string(count) + " certificates verified; base-case formula matches verbatim";
    return o;
  }
  std::string ratio = "not a scalar multiple";
  if (!quoted.is_zero() && !lhs.is_zero()) {
    const Rational r = lhs.leading_coef() / quoted.leading_coef();
    if (Polynomial::constant(lhs.ring(), r) * quoted == lhs) ratio = "e*D_S = " + hkq::to_string(r) + " x quoted";
  }
  o.passed = false;
  o.detail = std::to_string(count) + " certificates verified and confirmed by Groebner membership, but the quoted " +
             "base-case formula does not match verbatim (" + ratio + ")";
  return o;
}

// Graded dimensions of ring/ideal by row reduction in each weight.
std::vector<std::uint64_t> oracle_dims(const Ring& ring, const std::vector<Polynomial>& gens, int max_weight) {
  std::vector<std::uint64_t> dims;
  for (int w = 0; w <= max_weight; ++w) {
    dims.push_back(fixture::monomials_of_weight(ring, w).size() - fixture::oracle_ideal_dim(ring, gens, w));
  }
  while (!dims.empty() && dims.back() == 0) dims.pop_back();
  return dims;
}

Outcome konno_consistency() {
  Outcome o;
  for (const auto& xi : kLengths) {
    const auto& in = instance(xi);
    const PropHpResult& hp = colon_result(xi);
    const HilbertSeries reduced = QuotientRing(sum(hp.ring.ideal(), {in.x()})).hilbert_series(0);
    const QuotientRing konno = konno_ring(in.n());
    const HilbertSeries k = konno.hilbert_series(0);
    o.require(reduced.exact && k.exact, xi + ": quotients not finite");
    o.require(reduced.even_coefficients() == k.even_coefficients(),
              xi + ": " + join(reduced.even_coefficients()) + " vs " + join(k.even_coefficients()));
    if (in.n() <= 5) {
      auto gens = hp.ring.ideal().basis();
      gens.push_back(in.x());
      const auto direct = oracle_dims(in.ring_Q(), gens, in.n() - 1);
      o.require(direct == reduced.even_coefficients(), xi + ": row-reduction dims " + join(direct));
      const auto konno_direct = oracle_dims(konno.ring(), konno.ideal().generators(), in.n() - 1);
      o.require(konno_direct == k.even_coefficients(), xi + ": row-reduction konno dims " + join(konno_direct));
    }
    if (in.n() == 3) o.require(reduced.total() == 1, "n=3 total dimension is not 1");
    if (xi == "1,1,1,2") {
      o.require(reduced.even_coefficients() == std::vector<std::uint64_t>{1, 4}, "n=4 dims are not (1,4)");
    }
  }
  if (o.passed) o.detail = "graded dims agree for n=3..6; n=3 total 1; (1,1,1,2) gives (1,4)";
  return o;
}

Outcome basis_count() {
  Outcome o;
  std::vector<std::size_t> counts;
  for (const auto& xi : kLengths) {
    const auto& in = instance(xi);
    const int top = 2 * (in.n() - 2);
    const QuotientRing mod_x(sum(in.relations_Q(), {in.x()}));
    const auto basis = mod_x.graded_basis(top);
    const auto ds = in.table().nonempty_shorts();
    Matrix<Rational> m(ds.size(), basis.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const auto coords = mod_x.coordinates(in.gens_D(ds[i]), basis);
      for (std::size_t j = 0; j < basis.size(); ++j) m(i, j) = coords[j];
    }
    o.require(basis.size() == ds.size(), xi + ": top degree has dim " + std::to_string(basis.size()) + ", " +
                                             std::to_string(ds.size()) + " nonempty shorts");
    o.require(rank(m) == ds.size(), xi + ": D_S images are dependent");
    if (in.n() <= 5) {
      std::vector<Polynomial> gens = in.relations_Q().generators();
      gens.push_back(in.x());
      const std::size_t w = static_cast<std::size_t>(in.n() - 2);
      const std::size_t direct =
          fixture::monomials_of_weight(in.ring_Q(), static_cast<int>(w)).size() -
          fixture::oracle_ideal_dim(in.ring_Q(), gens, static_cast<int>(w));
      o.require(direct == basis.size(), xi + ": row-reduction dim " + std::to_string(direct));
    }
    if (xi == "1,1,1,2") o.require(basis.size() == 7, "(1,1,1,2) count is not 7");
    counts.push_back(basis.size());
  }
  if (o.passed) o.detail = "top-degree dims " + join(counts) + " equal the nonempty short counts, D_S independent";
  return o;
}

Outcome structure_checks() {
  Outcome o;
  for (const auto& xi : kLengths) {
    const auto& in = instance(xi);
    const QuotientRing img = kirwan_image(in.kirwan_presentation());
    for (const auto& g : img.ideal().basis()) {
      o.require(contains(in.ideal_J(), g * in.euler_e()), xi + ": ann(e) generator fails g*e in J");
    }
    o.require(contains(img.ideal(), in.ideal_J()), xi + ": J not inside ann(e)");
  }
  for (const auto& xi : {"1,1,1,2", "1,2,4,8", "1,2,4,8,16"}) {
    const auto& in = instance(xi);
    const SecondIsoResult r = verify_second_iso(in.kirwan_presentation(), 2 * (in.n() - 2) + 4);
    o.require(r.equal, std::string(xi) + ": invariant dims " + join(r.invariant_dims) + " vs " +
                           join(r.full_fixed_dims));
  }
  const RootDatum su = su2();
  const Polynomial e = class_e(su), ep = class_eprime(su), b = class_b(su);
  o.require(b * ep == e, "SU(2): e != b*e'");
  try {
    o.require(divide_exact(e, ep) == b, "SU(2): e/e' != b");
  } catch (const InexactDivision&) {
    o.require(false, "SU(2): e' does not divide e");
  }
  if (o.passed) o.detail = "ann(e) certified n=3..6; second isomorphism dims agree for n=4,5; SU(2) e = b*e'";
  return o;
}

RationalFunction random_entry(std::mt19937& gen) {
  std::uniform_int_distribution<int> c(-3, 3);
  const UPoly num(std::vector<Rational>{Rational(c(gen)), Rational(c(gen)), Rational(c(gen))});
  return RationalFunction(num) / RationalFunction::x(std::uniform_int_distribution<unsigned>(0, 2)(gen));
}

EquivariantClass random_class(const CircleCompactModel& m, std::mt19937& gen) {
  KVector v(m.dim());
  for (auto& e : v) e = random_entry(gen);
  return m.unflatten(v);
}

Outcome localization_suite() {
  Outcome o;
  const std::string dir = HKQ_FIXTURE_DIR;
  std::map<std::string, Fixture> fx;
  for (const char* name : {"line", "product", "segre"}) fx.emplace(name, load_fixture(dir + "/" + name + ".fixture"));

  std::size_t components = 0;
  for (const auto& [name, f] : fx) {
    for (const auto& m : f.models) {
      for (const auto& comp : m->components()) {
        o.require(comp.multiply(comp.invert_euler(), comp.euler()) == comp.one(),
                  name + "/" + m->name() + "/" + comp.name() + ": e^{-1}*e != 1");
        ++components;
      }
      o.require(m->is_nondegenerate(m->standard_basis()), name + "/" + m->name() + ": degenerate pairing");
    }
  }

  const auto line = fx.at("line").model("line");
  const auto h = Polynomial::variable(line->total()->ring.ring(), "h");
  o.require(line->integrate(line->one()) == RationalFunction(Rational(0)), "line: integral of 1 is not 0");
  o.require(line->integrate(line->restrict(h)) == RationalFunction(Rational(1)), "line: integral of h is not 1");

  const auto line2 = product_model(line);
  const auto prod = fx.at("product").model("product");
  const auto prod2 = product_model(prod);
  const ModelMap& incl = fx.at("line").map("incl");
  const ModelMap delta = diagonal_map(line, line2);
  std::vector<ModelMap> maps{incl, fx.at("segre").map("segre"), delta, projection_map(line, line2, 1),
                             diagonal_map(prod, prod2), projection_map(prod, prod2, 2)};
  std::mt19937 gen(20261016);
  std::size_t cases = 0;
  for (int round = 0; round < 20; ++round) {
    for (const auto& f : maps) {
      const auto& n = *f.source();
      const auto& m = *f.target();
      const auto g = random_class(n, gen);
      const auto a = random_class(m, gen);
      const auto pushed = f.pushforward(g);
      o.require(m.pairing(pushed, a) == n.pairing(g, f.pullback(a)), f.name() + ": adjointness");
      o.require(verify_integration_adjunction(f, a, g), f.name() + ": integration adjunction");
      o.require(f.pushforward(n.multiply(g, f.pullback(a))) == m.multiply(pushed, a), f.name() + ": projection formula");
      ++cases;
    }
    const ModelMap composite = incl.then(delta);
    const auto g = random_class(*incl.source(), gen);
    o.require(composite.pushforward(g) == delta.pushforward(incl.pushforward(g)), "functoriality of pushforward");
    const auto a = random_class(*line2, gen);
    o.require(composite.pullback(a) == incl.pullback(delta.pullback(a)), "functoriality of pullback");
    ++cases;
  }
  o.require(cases >= 100, "fewer than 100 randomized cases");

  try {
    o.require(diagonal_basis(line, diagonal_decomposition(line)), "line: diagonal classes do not span");
  } catch (const DiagonalMismatch& e) {
    o.require(false, std::string("line: ") + e.what());
  }

  const PullbackComparison cmp = compare_pullback(fx.at("segre").map("segre"), 2);
  o.require(cmp.k_rank == 4 && cmp.source_dim == 4 && cmp.target_dim == 4, "segre: K-rank is not 4 = 4");
  o.require(cmp.integral_rank == 2 && cmp.integral_source_dim == 3, "segre: integral degree-2 rank is not 2 < 3");
  if (o.passed) {
    o.detail = std::to_string(components) + " components inverted; " + std::to_string(cases) +
               " randomized map cases; segre K-rank " + std::to_string(cmp.k_rank) + "=4, integral rank " +
               std::to_string(cmp.integral_rank) + "<" + std::to_string(cmp.integral_source_dim);
  }
  return o;
}

Outcome formality_and_rank() {
  Outcome o;
  for (const auto& xi : kLengths) {
    const auto& in = instance(xi);
    const PropHpResult& hp = colon_result(xi);
    const QuotientRing j_ring(in.ideal_J());
    const HilbertSeries j_mod_x = QuotientRing(sum(in.ideal_J(), {in.x()})).hilbert_series(0);
    const HilbertSeries c_mod_x = QuotientRing(sum(hp.ring.ideal(), {in.x()})).hilbert_series(0);
    o.require(j_mod_x.exact && c_mod_x.exact, xi + ": reductions mod x not finite");
    const int bound = static_cast<int>(std::max(j_mod_x.coefficients.size(), c_mod_x.coefficients.size())) + 6;
    o.require(formality_identity(j_ring.hilbert_series(bound), j_mod_x, bound), xi + ": Q/J not free over Q[x]");
    o.require(formality_identity(hp.ring.hilbert_series(bound), c_mod_x, bound), xi + ": Q/(J:e) not free over Q[x]");
    const auto rank = hp.ring.localized_rank(*in.ring_Q().table().index_of("x"));
    const auto konno_total = konno_ring(in.n()).hilbert_series(0).total();
    o.require(rank == konno_total,
              xi + ": localized rank " + std::to_string(rank) + " vs konno total " + std::to_string(konno_total));
  }
  if (o.passed) o.detail = "freeness identity for Q/J and Q/(J:e), localized rank = konno total, n=3..6";
  return o;
}

Outcome engine_oracles() {
  Outcome o;
  const Ring r(make_table({"x", "y", "z"}));
  std::mt19937_64 rng(8);
  std::size_t ideals = 0, bases = 0;
  for (int i = 0; i < 60; ++i) {
    std::uniform_int_distribution<int> ng(1, 3), wd(1, 4);
    std::vector<Polynomial> gens;
    const int k = ng(rng);
    for (int j = 0; j < k; ++j) gens.push_back(fixture::random_homogeneous(rng, r, wd(rng)));
    const Ideal a(r, gens);
    try {
      check_buchberger_criterion(a.basis());
      ++bases;
    } catch (const InternalCheckFailed& e) {
      o.require(false, e.what());
    }
    for (int w = 0; w <= 4; ++w) {
      Polynomial f = fixture::random_homogeneous(rng, r, w);
      if (i % 2 == 0) {
        f = Polynomial(r);
        for (const auto& g : gens) {
          if (g.weight() <= w) f += fixture::random_homogeneous(rng, r, w - g.weight()) * g;
        }
      }
      o.require(contains(a, f) == fixture::oracle_contains(r, gens, f), "membership disagrees with row reduction");
    }
    const Polynomial f = fixture::random_homogeneous(rng, r, 1 + i % 2);
    const QuotientRing kc(colon(a, f));
    check_buchberger_criterion(kc.ideal().basis());
    ++bases;
    for (int w = 0; w <= 4; ++w) {
      const std::size_t all = fixture::monomials_of_weight(r, w).size();
      o.require(all - kc.graded_basis(2 * w).size() == fixture::oracle_colon_dim(r, gens, f, w),
                "colon disagrees with row reduction");
    }
    ++ideals;
  }
  o.require(ideals >= 50, "fewer than 50 random ideals");

  // the criterion must reject a generating set that is not a basis
  bool rejected = false;
  try {
    const std::vector<Polynomial> bad{parse_polynomial(r, "x^2 - y*z"), parse_polynomial(r, "x*y - z^2")};
    check_buchberger_criterion(bad);
  } catch (const InternalCheckFailed&) {
    rejected = true;
  }
  o.require(rejected, "criterion accepted a non-basis");

  std::mt19937 gen(50);
  std::size_t dags = 0, cycles = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 50)(gen);
    std::vector<std::size_t> topo(n);
    std::iota(topo.begin(), topo.end(), 0);
    std::shuffle(topo.begin(), topo.end(), gen);
    DagQuiver q;
    for (std::size_t v = 0; v < n; ++v) q.vertices.push_back("v" + std::to_string(v));
    std::bernoulli_distribution edge(0.1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (edge(gen)) q.edges.emplace_back(topo[i], topo[j]);
      }
    }
    o.require(check_proper_weights(q, proper_quiver_weights(q)), "quiver weights fail the postcondition");
    ++dags;
    if (q.edges.empty()) continue;
    const auto [a, b] = q.edges[std::uniform_int_distribution<std::size_t>(0, q.edges.size() - 1)(gen)];
    q.edges.emplace_back(b, a);
    bool caught = false;
    try {
      proper_quiver_weights(q);
    } catch (const CycleError&) {
      caught = true;
    }
    o.require(caught, "injected cycle not detected");
    ++cycles;
  }
  if (o.passed) {
    o.detail = std::to_string(ideals) + " random ideals vs row reduction, " + std::to_string(bases) +
               " bases checked, " + std::to_string(dags) + " DAGs, " + std::to_string(cycles) + " cycles";
  }
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

Outcome cli_determinism() {
  Outcome o;
  const std::string dir = HKQ_GOLDEN_DIR;
  for (const std::string xi : {"1,1,1", "1,1,1,2", "1,2,4,8,16"}) {
    std::string file = xi;
    std::replace(file.begin(), file.end(), ',', '_');
    const std::string golden = read_file(dir + "/report_" + file + ".json");
    cli::RunConfig c;
    c.command = "report";
    c.xi = xi;
    const auto first = cli::run(c);
    const auto second = cli::run(c);
    o.require(first.exit_code == cli::kOk, xi + ": exit " + std::to_string(first.exit_code));
    o.require(cli::canonical(first.report) == cli::canonical(second.report), xi + ": repeated runs differ");
    o.require(cli::render(cli::canonical(first.report), "json") == golden, xi + ": differs from golden");
  }
  cli::RunConfig c;
  c.command = "shorts";
  c.xi = "1,1,1,1";
  const auto r = cli::run(c);
  o.require(r.exit_code == cli::kNonGeneric, "non-generic input exit " + std::to_string(r.exit_code));
  o.require(!r.report["error"].is_null() && r.report["error"]["witness"] == "{1,2}", "witness is not {1,2}");
  if (o.passed) o.detail = "3 golden reports byte-stable modulo timing; (1,1,1,1) exits 3 with witness {1,2}";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--expect-fail" && i + 1 < argc) {
      expected.insert(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--expect-fail N]...\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"colon ideal (J:e) equals the D-ideal", colon_equals_d_ideal},
      {"membership certificates", certificates},
      {"reduced ring matches the konno ring", konno_consistency},
      {"top-degree basis count", basis_count},
      {"annihilator, second isomorphism, root data", structure_checks},
      {"localization suite", localization_suite},
      {"formality and localized rank", formality_and_rank},
      {"engine oracles", engine_oracles},
      {"CLI determinism", cli_determinism},
  };

  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.passed) failed.insert(id);
    std::cout << "criterion " << id << ": " << (o.passed ? "PASS" : "FAIL") << "  " << criteria[i].first << ": "
              << o.detail << " [" << std::fixed << std::setprecision(2) << secs << "s]" << std::endl;
  }
  std::cout << (criteria.size() - failed.size()) << "/" << criteria.size() << " criteria pass";
  if (!expected.empty()) std::cout << " (expected failures: " << join(std::vector<int>(expected.begin(), expected.end())) << ")";
  std::cout << std::endl;
  return failed == expected ? 0 : 1;
}
