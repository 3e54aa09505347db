#include "doctest.h"
#include "pfcalc/fpmod.hpp"

#include <random>

using namespace pfcalc;

namespace {
std::vector<std::uint64_t> primes_not_dividing(const mpz_class& r, std::size_t count) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; out.size() < count; ++p)
    if (is_prime(p) && mpz_divisible_ui_p(r.get_mpz_t(), p) == 0) out.push_back(p);
  return out;
}
std::vector<mpz_class> vec(std::initializer_list<long> xs) { return {xs.begin(), xs.end()}; }
}  // namespace

TEST_CASE("fiber dimensions") {
  auto z2 = FPModule::integral(1, {{2}});
  CHECK(fiber_dimension(z2, 0) == 0);
  CHECK(fiber_dimension(z2, 2) == 1);
  CHECK(fiber_dimension(z2, 3) == 0);
  auto m = FPModule::integral(2, {{2, 4}});
  CHECK(fiber_dimension(m, 0) == 1);
  CHECK(fiber_dimension(m, 2) == 2);
  auto f3 = FPModule::integral(3, {});
  for (std::uint64_t p : {0, 2, 3, 5, 7}) CHECK(fiber_dimension(f3, p) == 3);
  CHECK_THROWS(fiber_dimension(m, 6));
}

TEST_CASE("semicontinuity reports") {
  auto rep = semicontinuity_report(FPModule::integral(1, {{2}}), {2, 3, 5});
  CHECK(rep.dims == std::map<std::uint64_t, std::size_t>{{0, 0}, {2, 1}, {3, 0}, {5, 0}});
  rep = semicontinuity_report(FPModule::integral(2, {{2, 4}}), {2, 3});
  CHECK(rep.dims == std::map<std::uint64_t, std::size_t>{{0, 1}, {2, 2}, {3, 1}});
  rep = semicontinuity_report(FPModule::integral(3, {{6, 0, 0}, {0, 10, 0}}), {2, 3, 5});
  CHECK(rep.dims == std::map<std::uint64_t, std::size_t>{{0, 1}, {2, 3}, {3, 2}, {5, 2}});
  CHECK(rep.holds);
}

TEST_CASE("smith normal form agrees with presentation rank") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long> c(-6, 6);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + trial % 4, rows = trial % 4;
    std::vector<std::vector<long>> rel(rows, std::vector<long>(n));
    for (auto& r : rel)
      for (auto& x : r) x = c(rng);
    auto M = FPModule::integral(n, rel);
    for (std::uint64_t p : {0, 2, 3, 5, 7, 11}) {
      CHECK(fiber_dimension(M, p) == fiber_dimension_from_smith(M, p));
      CHECK(fiber_dimension(M, p) >= fiber_dimension(M, 0));
    }
  }
}

TEST_CASE("generic freeness examples") {
  auto M = FPModule::integral(2, {{2, 4}});
  auto cert = generic_freeness(M, {vec({1, 0}), vec({0, 1})});
  CHECK(mpz_divisible_ui_p(cert.r.get_mpz_t(), 2));
  CHECK(cert.k == 1);
  CHECK(cert.m() == 1);

  auto F = FPModule::integral(2, {});
  cert = generic_freeness(F, {vec({1, 0})});
  CHECK(cert.r == 1);
  CHECK(cert.k == 1);
  REQUIRE(cert.m() == 2);
  CHECK(cert.basis_vectors[0] == vec({1, 0}));
  CHECK(cert.basis_vectors[1] == vec({0, 1}));

  auto T = FPModule::integral(1, {{2}});
  cert = generic_freeness(T, {vec({1})});
  CHECK(mpz_divisible_ui_p(cert.r.get_mpz_t(), 2));
  CHECK(cert.k == 0);
  CHECK(cert.m() == 0);
}

TEST_CASE("freeness certificates validate away from r") {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<long> c(-5, 5);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + trial % 3, rows = trial % 3;
    std::vector<std::vector<long>> rel(rows, std::vector<long>(n));
    for (auto& r : rel)
      for (auto& x : r) x = c(rng);
    auto M = FPModule::integral(n, rel);
    std::vector<std::vector<mpz_class>> N(1 + trial % 2, std::vector<mpz_class>(n));
    for (auto& v : N)
      for (auto& x : v) x = c(rng);
    auto cert = generic_freeness(M, N);
    CHECK(cert.k == submodule_fiber_dimension(M, N, 0));
    CHECK(cert.m() == fiber_dimension(M, 0));
    for (auto p : primes_not_dividing(cert.r, 20)) {
      CHECK(fiber_dimension(M, p) == cert.m());
      CHECK(submodule_fiber_dimension(M, N, p) == cert.k);
      std::vector<std::vector<mpz_class>> vs(cert.basis_vectors.begin(), cert.basis_vectors.begin() + cert.k);
      CHECK(submodule_fiber_dimension(M, vs, p) == cert.k);
      CHECK(submodule_fiber_dimension(M, cert.basis_vectors, p) == cert.m());
    }
  }
}
