#include "doctest.h"
#include "pfcalc/exactring.hpp"

#include <random>

using namespace pfcalc;

TEST_CASE("rational arithmetic") {
  auto Q = BaseRing::rationals();
  RingElem a(Q, mpq_class(1, 2)), b(Q, mpq_class(1, 3));
  CHECK((a + b) == RingElem(Q, mpq_class(5, 6)));
  CHECK((a + b).to_string() == "5/6");
  CHECK((a - a).is_zero());
}

TEST_CASE("dual numbers") {
  auto R = BaseRing::parse("QQ[t]/(t^2)");
  auto t = RingElem::generator(R);
  CHECK((t * t).is_zero());
  auto u = RingElem::one(R) + t;
  CHECK(u.inverse() == RingElem::one(R) - t);
  CHECK(u.inverse().to_string() == "(1 - t)");
  CHECK_THROWS_AS(t.inverse(), NotAUnit);
  CHECK_FALSE(R.is_domain());
  CHECK(R.characteristic() == 0);
  CHECK(R.extension_degree() == 2);
}

TEST_CASE("prime field") {
  auto F3 = BaseRing::prime_field(3);
  CHECK((RingElem(F3, 2L) * RingElem(F3, 2L)) == RingElem::one(F3));
  auto F5 = BaseRing::prime_field(5);
  CHECK(RingElem(F5, 2L).inverse() == RingElem(F5, 3L));
  CHECK(RingElem(F5, -1L).as_residue() == 4);
  CHECK_THROWS(BaseRing::prime_field(6));
}

TEST_CASE("integers") {
  auto Z = BaseRing::integers();
  CHECK_THROWS_AS(RingElem(Z, 2L).inverse(), NotAUnit);
  CHECK(RingElem(Z, -1L).inverse() == RingElem(Z, -1L));
  CHECK_FALSE(Z.is_field());
  CHECK(Z.is_domain());
}

TEST_CASE("reduction to residue fields") {
  auto Z = BaseRing::integers();
  CHECK(fraction_field_reduction(Z, 0) == BaseRing::rationals());
  CHECK(fraction_field_reduction(Z, 7) == BaseRing::prime_field(7));
  CHECK_THROWS(fraction_field_reduction(Z, 6));
  FractionFieldReduction red(Z, 7);
  CHECK(red(RingElem(Z, 10L)) == RingElem(BaseRing::prime_field(7), 3L));
}

TEST_CASE("tags round-trip") {
  for (const char* tag : {"ZZ", "QQ", "Fp(7)", "QQ[t]/(t^2)", "Fp(2)[t]/(t^2+t+1)"}) {
    auto r = BaseRing::parse(tag);
    CHECK(r.tag() == tag);
    CHECK(BaseRing::parse(r.tag()) == r);
  }
  CHECK(BaseRing::parse("Fp(2)[t]/(t^2+t+1)").is_domain());
  CHECK_FALSE(BaseRing::parse("Fp(2)[t]/(t^2+1)").is_domain());
  CHECK(BaseRing::parse("QQ[t]/(t^2-2)").is_domain());
  CHECK_FALSE(BaseRing::parse("QQ[t]/(t^4+4)").is_domain());
  CHECK_THROWS_AS(BaseRing::parse("RR"), ParseError);
}

namespace {
std::vector<BaseRing> sample_rings() {
  return {BaseRing::integers(),        BaseRing::rationals(),         BaseRing::prime_field(2),
          BaseRing::prime_field(101),  BaseRing::parse("QQ[t]/(t^2)"), BaseRing::parse("Fp(2)[t]/(t^2+t+1)"),
          BaseRing::parse("Fp(3)[t]/(t^3)"), BaseRing::parse("QQ[t]/(t^2-2)")};
}

RingElem random_elem(std::mt19937_64& rng, const BaseRing& r) {
  std::uniform_int_distribution<long> d(-20, 20);
  if (r.kind() == BaseRing::Kind::Quotient) {
    std::vector<mpq_class> c;
    for (std::size_t i = 0; i < r.extension_degree(); ++i) c.emplace_back(d(rng), r.characteristic() ? 1 : 1 + (d(rng) & 3));
    return RingElem::from_coordinates(r, c);
  }
  if (r.kind() == BaseRing::Kind::Rationals) return RingElem(r, mpq_class(d(rng), 1 + (d(rng) & 7)));
  return RingElem(r, d(rng));
}
}  // namespace

TEST_CASE("ring axioms on random triples") {
  std::mt19937_64 rng(7);
  for (const auto& r : sample_rings()) {
    for (int i = 0; i < 200; ++i) {
      auto a = random_elem(rng, r), b = random_elem(rng, r), c = random_elem(rng, r);
      CHECK(((a + b) + c) == (a + (b + c)));
      CHECK((a * (b + c)) == (a * b + a * c));
      CHECK((a * b) == (b * a));
      CHECK(((a * b) * c) == (a * (b * c)));
      if (a.is_unit()) CHECK((a * a.inverse()).is_one());
    }
  }
}

TEST_CASE("characteristic kills one") {
  for (const auto& r : sample_rings()) {
    auto ch = r.characteristic();
    if (ch == 0) continue;
    RingElem s = RingElem::zero(r);
    for (std::uint64_t i = 0; i < ch; ++i) s += RingElem::one(r);
    CHECK(s.is_zero());
  }
}

TEST_CASE("ring mismatch") {
  CHECK_THROWS_AS(RingElem(BaseRing::rationals(), 1L) + RingElem(BaseRing::prime_field(3), 1L), RingMismatch);
}
