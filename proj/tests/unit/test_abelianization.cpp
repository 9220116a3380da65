#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "hkq/abelianization.hpp"
#include "hkq/hyperpolygon.hpp"

using namespace hkq;

namespace {

Polynomial P(const Ring& r, const std::string& s) { return parse_polynomial(r, s); }

Ideal I(const Ring& r, std::initializer_list<const char*> gens) {
  std::vector<Polynomial> g;
  for (const char* s : gens) g.push_back(P(r, s));
  return Ideal(r, g);
}

}  // namespace

TEST(RootData, SU2Classes) {
  const RootDatum r = su2();
  const Polynomial e = class_e(r);
  const Polynomial ep = class_eprime(r);
  const Polynomial b = class_b(r);
  EXPECT_EQ(e, P(r.ring, "alpha^2*(alpha^2 - x^2)"));
  EXPECT_EQ(ep, P(r.ring, "-alpha*(x^2 - alpha^2)"));
  EXPECT_EQ(b * ep, e);
  EXPECT_EQ(divide_exact(e, ep), b);
  // the sign-normalized form used downstream differs by a sign only
  EXPECT_EQ(-e, P(r.ring, "alpha^2*(x^2 - alpha^2)"));
  EXPECT_TRUE(is_weyl_invariant(r, e));
  EXPECT_FALSE(is_weyl_invariant(r, ep));
}

TEST(RootData, EmptyRootSystem) {
  const RootDatum r = parse_root_datum("torus t\n");
  EXPECT_TRUE(class_e(r) == Polynomial::constant(r.ring, Rational(1)));
  EXPECT_TRUE(class_eprime(r) == Polynomial::constant(r.ring, Rational(1)));
  EXPECT_TRUE(class_b(r) == Polynomial::constant(r.ring, Rational(1)));
}

TEST(RootData, SU3) {
  const RootDatum r = su3();
  EXPECT_EQ(r.torus_rank, 2U);
  EXPECT_EQ(r.weyl_order, 6U);
  const Polynomial e = class_e(r);
  EXPECT_TRUE(e.is_homogeneous());
  EXPECT_EQ(e.degree(), 24);
  EXPECT_TRUE(is_weyl_invariant(r, e));
  EXPECT_EQ(class_b(r) * class_eprime(r), e);
  EXPECT_EQ(divide_exact(e, class_eprime(r)), class_b(r));
  // b itself is only invariant up to sign
  EXPECT_FALSE(is_weyl_invariant(r, class_b(r)));
}

TEST(RootData, ParseAndValidate) {
  const RootDatum r = parse_root_datum(
      "# rank one\n"
      "torus a\n"
      "param y\n"
      "root 2*a\n"
      "weyl 2\n"
      "reflection a -> -a\n");
  EXPECT_EQ(r.parameter, "y");
  EXPECT_EQ(class_e(r), P(r.ring, "(2*a)*(y - 2*a)*(-2*a)*(y + 2*a)"));
  EXPECT_THROW(parse_root_datum("root a\n"), ParseError);
  EXPECT_THROW(parse_root_datum("torus a\nweyl two\n"), ParseError);
  EXPECT_THROW(parse_root_datum("torus a\nfrobnicate\n"), ParseError);
  EXPECT_THROW(parse_root_datum("torus a\nreflection b -> a\n"), ParseError);
  EXPECT_THROW(parse_root_datum("torus a\nroot a^2\n"), Error);
  EXPECT_THROW(parse_root_datum("torus a\nroot a + x\n"), Error);
  EXPECT_THROW(parse_root_datum("torus a\nroot a\nroot -a\n"), Error);
  EXPECT_THROW(parse_root_datum("torus a\nweyl 0\n"), Error);
}

TEST(Kirwan, UnitEulerIsIdentity) {
  const Ring r(make_table({"y", "x"}));
  const QuotientRing q(I(r, {"y^3", "x*y^2"}));
  const KirwanPresentation k{q, Polynomial::constant(r, Rational(1)), std::nullopt, {}, std::nullopt};
  EXPECT_TRUE(same_ideal(kirwan_image(k).ideal(), q.ideal()));
}

TEST(Kirwan, ZeroDivisorToy) {
  const Ring r(make_table({"y"}));
  const KirwanPresentation k{QuotientRing(I(r, {"y^2"})), P(r, "y"), std::nullopt, {}, std::nullopt};
  const QuotientRing img = kirwan_image(k);
  EXPECT_TRUE(same_ideal(img.ideal(), I(r, {"y"})));
  EXPECT_EQ(img.hilbert_series(4).coefficients, std::vector<std::uint64_t>{1});
  const KirwanPresentation zero{QuotientRing(I(r, {"y^2"})), Polynomial(r), std::nullopt, {}, std::nullopt};
  EXPECT_THROW(kirwan_image(zero), Error);
}

TEST(Kirwan, AnnihilatorIsCertified) {
  const HyperpolygonInstance inst(EdgeLengths::parse("1,1,1,2"));
  const KirwanPresentation k = inst.kirwan_presentation();
  const QuotientRing img = kirwan_image(k);
  EXPECT_TRUE(contains(img.ideal(), k.invariant_ring.ideal()));
  for (const auto& g : img.ideal().basis()) {
    EXPECT_TRUE(contains(k.invariant_ring.ideal(), g * k.euler)) << g;
  }
}

TEST(SecondIso, TrivialWeylGroup) {
  const Ring r(make_table({"y", "x"}));
  const QuotientRing q(I(r, {"y^2 - x*y"}));
  const Polynomial e = P(r, "y");
  const KirwanPresentation k{q, e, q, {}, e};
  const auto res = verify_second_iso(k, 8);
  EXPECT_TRUE(res.equal);
  EXPECT_EQ(res.invariant_dims, res.full_fixed_dims);
  EXPECT_EQ(res.invariant_dims.size(), 5U);
}

TEST(SecondIso, InconsistentAction) {
  const Ring r(make_table({"y", "z", "x"}));
  const QuotientRing q(I(r, {"y"}));
  Substitution swap{{"y", P(r, "z")}, {"z", P(r, "y")}};
  const KirwanPresentation k{q, P(r, "x"), q, swap, P(r, "x")};
  EXPECT_THROW(verify_second_iso(k, 4), InconsistentAction);
  const KirwanPresentation missing{q, P(r, "x"), std::nullopt, {}, std::nullopt};
  EXPECT_THROW(verify_second_iso(missing, 4), Error);
}

TEST(SecondIso, FixedDimensionOfSwap) {
  const Ring r(make_table({"y", "z"}));
  const QuotientRing q(I(r, {"y*z"}));
  Substitution swap{{"y", P(r, "z")}, {"z", P(r, "y")}};
  // degree 2k part is spanned by y^k, z^k; the swap fixes a line
  for (int d = 2; d <= 8; d += 2) EXPECT_EQ(fixed_dimension(q, swap, d), 1U);
  EXPECT_EQ(fixed_dimension(q, swap, 0), 1U);
}

class SecondIsoHyperpolygon : public ::testing::TestWithParam<const char*> {};

TEST_P(SecondIsoHyperpolygon, DimensionsAgree) {
  const HyperpolygonInstance inst(EdgeLengths::parse(GetParam()));
  const int n = inst.n();
  const auto res = verify_second_iso(inst.kirwan_presentation(), 2 * (n - 2) + 4);
  EXPECT_TRUE(res.equal);
  EXPECT_EQ(res.invariant_dims, res.full_fixed_dims);
}

INSTANTIATE_TEST_SUITE_P(Instances, SecondIsoHyperpolygon, ::testing::Values("1,1,1", "1,1,1,2", "1,2,4,8,16"),
                         [](const auto& info) { return "n" + std::to_string(info.index + 3); });

TEST(Quiver, Examples) {
  const DagQuiver single = DagQuiver::parse("vertices v\n");
  EXPECT_EQ(proper_quiver_weights(single), std::vector<long>{-1});
  const DagQuiver path = DagQuiver::parse("1 -> 2\nedge 2 3\n");
  ASSERT_EQ(path.vertices.size(), 3U);
  EXPECT_TRUE(path.is_connected());
  const auto lambda = proper_quiver_weights(path);
  EXPECT_TRUE(check_proper_weights(path, lambda));
  EXPECT_LT(lambda[0], lambda[1]);
  EXPECT_LT(lambda[1], lambda[2]);
  EXPECT_LT(lambda[2], 0);
  EXPECT_FALSE(check_proper_weights(path, {-1, -2, -3}));
  EXPECT_FALSE(check_proper_weights(path, {-3, -2, 0}));
  EXPECT_FALSE(DagQuiver::parse("vertices a b\n").is_connected());
  EXPECT_THROW(DagQuiver::parse("a b c d\n"), ParseError);
}

TEST(Quiver, TwoCycle) {
  const DagQuiver q = DagQuiver::parse("a -> b\nb -> a\nc -> a\n");
  try {
    proper_quiver_weights(q);
    FAIL() << "cycle not detected";
  } catch (const CycleError& err) {
    EXPECT_EQ(err.vertices(), (std::vector<std::string>{"a", "b"}));
  }
}

TEST(Quiver, RandomDags) {
  std::mt19937 gen(20261016);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 50)(gen);
    std::vector<std::size_t> topo(n);
    std::iota(topo.begin(), topo.end(), 0);
    std::shuffle(topo.begin(), topo.end(), gen);
    DagQuiver q;
    for (std::size_t v = 0; v < n; ++v) q.vertices.push_back("v" + std::to_string(v));
    std::bernoulli_distribution edge(std::uniform_real_distribution<double>(0.02, 0.3)(gen));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (edge(gen)) q.edges.emplace_back(topo[i], topo[j]);
      }
    }
    const auto lambda = proper_quiver_weights(q);
    EXPECT_TRUE(check_proper_weights(q, lambda)) << "trial " << trial;

    // close a cycle through a forward path
    if (q.edges.empty()) continue;
    const auto [a, b] = q.edges[std::uniform_int_distribution<std::size_t>(0, q.edges.size() - 1)(gen)];
    q.edges.emplace_back(b, a);
    EXPECT_THROW(proper_quiver_weights(q), CycleError) << "trial " << trial;
  }
}
