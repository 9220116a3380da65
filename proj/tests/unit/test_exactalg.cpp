#include <gtest/gtest.h>

#include <random>

#include "../support/random.hpp"
#include "hkq/error.hpp"
#include "hkq/polynomial.hpp"
#include "hkq/ratfun.hpp"

using namespace hkq;

namespace {

Ring ring_of(std::vector<std::string> names, std::vector<int> degrees = {}) {
  return Ring(make_table(std::move(names), std::move(degrees)));
}

Polynomial P(const Ring& r, const std::string& s) { return parse_polynomial(r, s); }

}  // namespace

TEST(Rational, CanonicalForm) {
  EXPECT_EQ(to_string(parse_rational("-6/4")), "-3/2");
  EXPECT_EQ(to_string(parse_rational("12")), "12");
  EXPECT_THROW(parse_rational("6/-4"), ParseError);
  EXPECT_EQ(to_string(parse_rational("0/7")), "0");
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("1.5"), ParseError);
}

TEST(VariableTable, Invariants) {
  EXPECT_THROW(make_table({"x", "x"}), Error);
  EXPECT_THROW(make_table({"x"}, {3}), Error);
  EXPECT_THROW(make_table({"x"}, {0}), Error);
  auto t = make_table({"a", "b"}, {2, 4});
  EXPECT_EQ(t->degree(1), 4);
  EXPECT_EQ(t->weight(1), 2);
}

TEST(Polynomial, ArithmeticExamples) {
  const Ring r = ring_of({"x", "alpha"});
  EXPECT_EQ(P(r, "x + alpha") + P(r, "x - alpha"), P(r, "2*x"));
  EXPECT_EQ(P(r, "x - alpha") * P(r, "x + alpha"), P(r, "x^2 - alpha^2"));
  // the product over both roots of alpha*(x - alpha)
  const Polynomial e = P(r, "alpha*(x-alpha)") * P(r, "(-alpha)*(x+alpha)");
  EXPECT_EQ(e, P(r, "alpha^4 - alpha^2*x^2"));
}

TEST(Polynomial, MismatchedTables) {
  const Ring r1 = ring_of({"x"});
  const Ring r2 = ring_of({"y"});
  EXPECT_THROW(P(r1, "x") + P(r2, "y"), RingMismatch);
  EXPECT_THROW(P(r1, "x") * P(r2, "y"), RingMismatch);
}

TEST(Polynomial, DegreesAndHomogeneity) {
  const Ring r = ring_of({"c", "a2", "x"}, {2, 4, 2});
  const Polynomial p = P(r, "c^2 - a2");
  EXPECT_TRUE(p.is_homogeneous());
  EXPECT_EQ(p.degree(), 4);
  EXPECT_FALSE(P(r, "c - a2").is_homogeneous());
}

TEST(Polynomial, PrintParseRoundTrip) {
  const Ring r = ring_of({"x", "y", "z"});
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const Polynomial p = fixture::random_polynomial(rng, r, 4);
    EXPECT_EQ(parse_polynomial(r, p.to_string()), p);
    EXPECT_EQ(parse_polynomial(r, p.to_string()).to_string(), p.to_string());
  }
  EXPECT_EQ(P(r, "0").to_string(), "0");
  EXPECT_EQ(P(r, "-3/4*x*y^2 + 1").to_string(), "-3/4*x*y^2 + 1");
  EXPECT_THROW(P(r, "x +"), ParseError);
  EXPECT_THROW(P(r, "w"), Error);
}

TEST(Polynomial, CanonicalFormIsUnique) {
  const Ring r = ring_of({"x", "y"});
  EXPECT_EQ(P(r, "y*x + x^2 - x*y"), P(r, "x^2"));
  EXPECT_EQ(P(r, "(x+y)^2").terms().size(), 3u);
  EXPECT_EQ(P(r, "(x+y)^2"), P(r, "y^2 + 2*y*x + x^2"));
}

TEST(Polynomial, RingAxiomsRandomized) {
  const Ring r = ring_of({"x", "y", "z"});
  std::mt19937_64 rng(11);
  for (int i = 0; i < 150; ++i) {
    const Polynomial a = fixture::random_polynomial(rng, r, 3);
    const Polynomial b = fixture::random_polynomial(rng, r, 3);
    const Polynomial c = fixture::random_polynomial(rng, r, 3);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(Polynomial, HomogeneousProductDegrees) {
  const Ring r = ring_of({"x", "y", "w"}, {2, 2, 4});
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Polynomial a = fixture::random_homogeneous(rng, r, 2);
    const Polynomial b = fixture::random_homogeneous(rng, r, 3);
    const Polynomial ab = a * b;
    ASSERT_FALSE(ab.is_zero());
    EXPECT_TRUE(ab.is_homogeneous());
    EXPECT_EQ(ab.degree(), a.degree() + b.degree());
  }
}

TEST(Substitute, Examples) {
  const Ring r = ring_of({"a1", "b1"});
  EXPECT_EQ(substitute(P(r, "a1*b1"), {{"a1", P(r, "b1")}, {"b1", P(r, "a1")}}), P(r, "a1*b1"));

  const Ring q = ring_of({"c1", "alpha"});
  const Polynomial f = P(q, "c1^2 - alpha^2");
  const Polynomial g = substitute(f, {{"c1", P(r, "a1+b1")}, {"alpha", P(r, "a1-b1")}}, r);
  EXPECT_EQ(g, P(r, "4*a1*b1"));
}

TEST(Substitute, IdentityAndHomomorphism) {
  const Ring r = ring_of({"x", "y", "z"});
  std::mt19937_64 rng(5);
  const std::map<std::string, Polynomial> phi{{"x", P(r, "y+z")}, {"y", P(r, "x*z - 1")}, {"z", P(r, "2*x")}};
  for (int i = 0; i < 60; ++i) {
    const Polynomial a = fixture::random_polynomial(rng, r, 3);
    const Polynomial b = fixture::random_polynomial(rng, r, 3);
    EXPECT_EQ(substitute(a, {}), a);
    EXPECT_EQ(substitute(a * b, phi), substitute(a, phi) * substitute(b, phi));
    EXPECT_EQ(substitute(a + b, phi), substitute(a, phi) + substitute(b, phi));
  }
}

TEST(Substitute, Errors) {
  const Ring r = ring_of({"x", "y"});
  const Ring t = ring_of({"u"});
  EXPECT_THROW(substitute(P(r, "x*y"), {{"x", P(t, "u")}}, t), Error);  // y has no image
  EXPECT_THROW(substitute(P(r, "x"), {{"q", P(r, "x")}}), Error);        // q is not a variable
}

TEST(DivideExact, Works) {
  const Ring r = ring_of({"x", "y"});
  EXPECT_EQ(divide_exact(P(r, "x^2 - y^2"), P(r, "x - y")), P(r, "x + y"));
  EXPECT_THROW(divide_exact(P(r, "x^2 + y"), P(r, "x")), InexactDivision);
}

TEST(RationalFunction, Examples) {
  const RationalFunction x = RationalFunction::x();
  const RationalFunction one(Rational(1));
  EXPECT_TRUE((one / x + one / (-x)).is_zero());
  const RationalFunction a = (x * x - one) / x;
  const RationalFunction b = (x - one) / x;
  EXPECT_EQ(a / b, x + one);
  const RationalFunction c = one / (x * (x - one)) + one / x;
  EXPECT_EQ(c, x / (x * (x - one)));
  EXPECT_EQ(c, one / (x - one));
  EXPECT_THROW(one / RationalFunction(), DivisionByZero);
}

TEST(RationalFunction, CanonicalDenominator) {
  const RationalFunction x = RationalFunction::x();
  const RationalFunction f = RationalFunction(UPoly(Rational(3)), UPoly(std::vector<Rational>{0, 2}));
  EXPECT_EQ(f.denominator(), UPoly::x());
  EXPECT_EQ(f.numerator(), UPoly(Rational(3, 2)));
  EXPECT_EQ(f, Rational(3, 2) / x);
}

TEST(RationalFunction, FieldAxiomsRandomized) {
  std::mt19937_64 rng(13);
  auto rand_upoly = [&]() {
    std::vector<Rational> c;
    std::uniform_int_distribution<int> deg(0, 3);
    const int d = deg(rng);
    for (int i = 0; i <= d; ++i) c.push_back(fixture::random_rational(rng, 4));
    return UPoly(std::move(c));
  };
  auto rand_rf = [&]() {
    UPoly den = rand_upoly();
    while (den.is_zero()) den = rand_upoly();
    return RationalFunction(rand_upoly(), den);
  };
  for (int i = 0; i < 100; ++i) {
    const auto a = rand_rf();
    const auto b = rand_rf();
    const auto c = rand_rf();
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    if (!b.is_zero()) EXPECT_EQ((a / b) * b, a);
  }
}
