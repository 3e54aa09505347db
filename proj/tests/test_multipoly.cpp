#include "doctest.h"
#include "helpers.hpp"

using namespace pfcalc;
using testing_util::P;
using testing_util::vars;

TEST_CASE("parse and print round-trip") {
  auto Q = BaseRing::rationals();
  auto v = vars({"x", "y", "z"});
  auto f = P("3*x^2*y - 1/2*z", Q, v);
  CHECK(f.to_string() == "3*x^2*y - 1/2*z");
  CHECK(P(f.to_string(), Q, v) == f);
  CHECK(P("(x+y)^2", Q, v).to_string() == "x^2 + 2*x*y + y^2");
  CHECK(P("x - x", Q, v).to_string() == "0");
  CHECK(P("-x + 1", Q, v).to_string() == "-x + 1");
  CHECK_THROWS_AS(P("x + w", Q, v), ParseError);
  CHECK_THROWS_AS(P("x +", Q, v), ParseError);
}

TEST_CASE("quotient ring coefficients") {
  auto R = BaseRing::parse("QQ[t]/(t^2)");
  auto v = vars({"x"});
  auto f = P("t*x^3 + (1+t)*x", R, v);
  CHECK(P(f.to_string(), R, v) == f);
  CHECK((f * P("t", R, v)) == P("t*x", R, v));
}

TEST_CASE("arithmetic") {
  auto F5 = BaseRing::prime_field(5);
  auto v = vars({"x", "y"});
  auto f = P("x + y", F5, v);
  CHECK(f.pow(5) == P("x^5 + y^5", F5, v));
  CHECK((f * f - P("x^2 + 2*x*y + y^2", F5, v)).is_zero());
  CHECK(f.total_degree() == 1);
  CHECK(MultiPoly(F5, v).total_degree() == -1);
}

TEST_CASE("weighted degree") {
  VarSet v({"a", "b"}, {1, 3});
  auto Q = BaseRing::rationals();
  auto f = P("a^3 - b", Q, v);
  CHECK(f.weighted_degree() == 3);
  CHECK(f.is_weighted_homogeneous());
  CHECK_FALSE(P("a^2 - b", Q, v).is_weighted_homogeneous());
  CHECK_THROWS(VarSet({"a", "a"}));
  CHECK_THROWS(VarSet({"a"}, {0}));
}

TEST_CASE("orders") {
  auto v = vars({"x", "y", "z"});
  Monomial xy{1, 1, 0}, z2{0, 0, 2}, x{1, 0, 0}, y3{0, 3, 0};
  MonomialComparator lex(v, MonomialOrder::lex());
  MonomialComparator grevlex(v, MonomialOrder::grevlex());
  MonomialComparator elim(v, MonomialOrder::elimination(1));
  CHECK(lex.greater(x, y3));
  CHECK(grevlex.greater(y3, x));
  CHECK(grevlex.greater(xy, z2));
  CHECK(elim.greater(x, y3));
  CHECK(elim.greater(y3, z2));
  // grevlex: among equal degree, smaller power of the last variable wins
  CHECK(grevlex.greater(Monomial{0, 2, 0}, Monomial{1, 0, 1}));
}

TEST_CASE("orders are multiplicative and total on samples") {
  std::mt19937_64 rng(3);
  auto v = vars({"a", "b", "c", "d"});
  for (auto ord : {MonomialOrder::lex(), MonomialOrder::grevlex(), MonomialOrder::elimination(2)}) {
    MonomialComparator cmp(v, ord);
    std::uniform_int_distribution<unsigned> e(0, 3);
    for (int i = 0; i < 300; ++i) {
      Monomial a{e(rng), e(rng), e(rng), e(rng)}, b{e(rng), e(rng), e(rng), e(rng)}, c{e(rng), e(rng), e(rng), e(rng)};
      CHECK(cmp.compare(a, b) == -cmp.compare(b, a));
      CHECK((cmp.compare(a, b) == 0) == (a == b));
      CHECK(cmp.compare(a * c, b * c) == cmp.compare(a, b));
      CHECK(cmp.compare(a * c, a) >= 0);
    }
  }
}

TEST_CASE("substitute and evaluate") {
  auto Q = BaseRing::rationals();
  auto v = vars({"x", "y"});
  auto f = P("x^2 - y", Q, v);
  auto g = f.substitute({P("x + y", Q, v), P("2*y", Q, v)});
  CHECK(g == P("x^2 + 2*x*y + y^2 - 2*y", Q, v));
  CHECK(f.evaluate({RingElem(Q, 3L), RingElem(Q, 4L)}) == RingElem(Q, 5L));
  auto w = vars({"y", "u", "x"});
  CHECK(f.embed(w, {2, 0}) == P("x^2 - y", Q, w));
  CHECK(P("x^3*y + x*y^2", Q, v).coefficient_of_power(0, 1) == P("y^2", Q, v));
}
