#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qcarm/errors.hpp"
#include "qcarm/numtheory.hpp"

using namespace qcarm;
using namespace qcarm::nt;

TEST_CASE("mod_pow") {
  CHECK(mod_pow(1, 560, 561) == 1);
  CHECK(mod_pow(2, 560, 561) == 1);
  CHECK(mod_pow(2, 14, 15) == 4);
  CHECK(mod_pow(0, 0, 7) == 1);
  CHECK_THROWS_AS(mod_pow(3, 4, 1), DomainError);
  CHECK_THROWS_AS(mod_pow(3, 4, 0), DomainError);

  SUBCASE("agrees with naive repeated multiplication") {
    std::mt19937_64 gen(7);
    for (int i = 0; i < 500; ++i) {
      const u64 m = 2 + gen() % 5000, a = gen() % 10000, e = gen() % 300;
      REQUIRE(mod_pow(a, e, m) == oracle::naive_pow(a, e, m));
    }
  }

  SUBCASE("widened products near 2^63") {
    const u64 m = (u64{1} << 63) - 25;  // prime
    CHECK(mod_pow(2, m - 1, m) == 1);
    CHECK(mod_pow(m - 1, 2, m) == 1);
    CHECK(mul_mod(m - 1, m - 1, m) == 1);
  }
}

TEST_CASE("gcd") {
  CHECK(gcd(561, 33) == 33);
  CHECK(gcd(16, 560) == 16);
  CHECK(gcd(8, 15) == 1);
  CHECK(gcd(0, 9) == 9);
  CHECK_THROWS_AS(gcd(0, 0), DomainError);
}

TEST_CASE("factorize") {
  CHECK(factorize(561).factors == std::vector<PrimePower>{{3, 1}, {11, 1}, {17, 1}});
  CHECK(factorize(8).factors == std::vector<PrimePower>{{2, 3}});
  CHECK(factorize(1105).factors == std::vector<PrimePower>{{5, 1}, {13, 1}, {17, 1}});
  CHECK(factorize(2).is_prime());
  CHECK_THROWS_AS(factorize(1), DomainError);
  CHECK_THROWS_AS(factorize(u64{1} << 51), CapacityError);
  CHECK_THROWS_AS(factorize(1000, 999), CapacityError);

  SUBCASE("large semiprimes and prime powers use rho") {
    const u64 p = 1048573, q = 1048571;  // both prime, above trial division range
    auto f = factorize(p * q);
    CHECK(f.factors == std::vector<PrimePower>{{q, 1}, {p, 1}});
    f = factorize(p * p);
    CHECK(f.factors == std::vector<PrimePower>{{p, 2}});
    const u64 big = (u64{1} << 50) - 35;
    CHECK(factorize(big).product() == big);
  }

  SUBCASE("invariants over a range") {
    for (u64 k = 2; k < 3000; ++k) {
      const auto f = factorize(k);
      REQUIRE(f.product() == k);
      for (std::size_t i = 0; i < f.factors.size(); ++i) {
        REQUIRE(oracle::trial_prime(f.factors[i].prime));
        REQUIRE(f.factors[i].exponent >= 1);
        if (i > 0) REQUIRE(f.factors[i - 1].prime < f.factors[i].prime);
      }
    }
  }
}

TEST_CASE("is_prime matches trial division") {
  for (u64 n = 0; n < 20000; ++n) REQUIRE(is_prime(n) == oracle::trial_prime(n));
  CHECK(is_prime(18446744073709551557ull));  // largest 64-bit prime
  CHECK_FALSE(is_prime(3215031751ull));      // strong pseudoprime to 2,3,5,7
}

TEST_CASE("euler_phi") {
  CHECK(euler_phi(factorize(561)) == 320);
  CHECK(euler_phi(factorize(15)) == 8);
  CHECK(euler_phi(factorize(101)) == 100);
  for (u64 k = 2; k < 2000; ++k) REQUIRE(euler_phi(factorize(k)) == oracle::coprime_count(k));
  const auto table = totient_table(2000);
  for (u64 k = 1; k <= 2000; ++k) REQUIRE(table[k] == oracle::coprime_count(k));
}

TEST_CASE("fermat_nonwitness_count") {
  CHECK(fermat_nonwitness_count(factorize(561)) == 320);
  CHECK(fermat_nonwitness_count(factorize(15)) == 4);
  CHECK(fermat_nonwitness_count(factorize(9)) == 2);
  CHECK_THROWS_AS(fermat_nonwitness_count(factorize(13)), DomainError);
}

TEST_CASE("z_flag and g_flag") {
  CHECK(z_flag(561, 2) == 1);
  CHECK(z_flag(15, 2) == 0);
  CHECK(z_flag(97, 1) == 1);
  CHECK(g_flag(15, 4) == 1);
  CHECK(g_flag(15, 5) == 0);
  CHECK(g_flag(15, 0) == 0);
}

TEST_CASE("is_carmichael") {
  CHECK(is_carmichael(561));
  CHECK_FALSE(is_carmichael(15));
  CHECK(is_carmichael(1729));
  CHECK_FALSE(is_carmichael(2));
  CHECK_FALSE(is_carmichael(97));
  CHECK(is_carmichael(u64{9746347772161}));  // 7 * 11 * 13 * 17 * 19 * 31 * 37 * 41 * 641
}

TEST_CASE("rabin_witness") {
  CHECK(rabin_witness(9, 2));
  CHECK_FALSE(rabin_witness(9, 8));
  for (u64 a = 1; a < 101; ++a) REQUIRE_FALSE(rabin_witness(101, a));
  CHECK_THROWS_AS(rabin_witness(10, 3), DomainError);

  SUBCASE("gcd form agrees with the textbook strong-liar form") {
    for (u64 k = 9; k < 1500; k += 2)
      for (u64 a = 1; a < k; ++a) REQUIRE(rabin_witness(k, a) == !oracle::strong_liar(k, a));
  }
}

TEST_CASE("mr_witness_count") {
  CHECK(mr_witness_count(9) == 6);
  CHECK(mr_witness_count(15) == 12);
  CHECK(mr_witness_count(561) == 550);  // frozen by tests/oracle/freeze_values.py
  CHECK(mr_witness_count(561) >= 420);
  CHECK(mr_witness_count(13) == 0);
  CHECK_THROWS_AS(mr_witness_count(2'000'001, 2'000'000), CapacityError);
}

TEST_CASE("compositeness witnesses for even k count Fermat failures") {
  for (u64 k = 4; k < 400; k += 2) {
    const u64 liars = oracle::fermat_liars(k);
    REQUIRE(compositeness_witness_count(k) == k - 1 - liars);
  }
  CHECK(compositeness_witness_count(2) == 0);
}

TEST_CASE("number_facts") {
  const auto f = number_facts(561);
  CHECK(f.classification == Classification::CompositeCarmichael);
  CHECK(f.phi == 320);
  CHECK(f.f_count == 320);
  CHECK(f.t_k == 0);
  CHECK(*f.mr_witnesses == 550);
  CHECK(number_facts(2).classification == Classification::Prime);
  CHECK(number_facts(15).t_k == 4);
  CHECK_FALSE(number_facts(1'000'003, 1000).mr_witnesses.has_value());
}

TEST_CASE("enumerate_carmichaels") {
  CHECK(enumerate_carmichaels(600) == std::vector<u64>{561});
  CHECK(enumerate_carmichaels(561).empty());
  CHECK(enumerate_carmichaels(562) == std::vector<u64>{561});
  CHECK(enumerate_carmichaels(10000) == std::vector<u64>{561, 1105, 1729, 2465, 2821, 6601, 8911});
  CHECK(enumerate_carmichaels(100000).size() == 16);
  CHECK_THROWS_AS(enumerate_carmichaels(10'000'001), CapacityError);

  SUBCASE("matches the definition") {
    std::vector<u64> brute;
    for (u64 k = 2; k < 3000; ++k)
      if (oracle::definitional_carmichael(k)) brute.push_back(k);
    CHECK(enumerate_carmichaels(3000) == brute);
  }
}

TEST_CASE("psw_l and psw_bounds") {
  // l = 1 exactly where ln ln ln N = 0; that point is below the domain
  CHECK_THROWS_AS(psw_l(std::exp(std::numbers::e)), DomainError);
  CHECK(psw_l(std::exp(std::exp(std::numbers::e))) == doctest::Approx(std::exp(std::exp(std::numbers::e) / std::numbers::e)));
  CHECK(psw_l(1e6) == doctest::Approx(160.66569554260052).epsilon(1e-12));
  double prev = psw_l(100);
  for (double n = 110; n < 1e7; n *= 1.1) {
    const double cur = psw_l(n);
    REQUIRE(cur > prev);
    prev = cur;
  }
  CHECK_THROWS_AS(psw_l(15), DomainError);

  const auto b = psw_bounds(1e4, 0.1);
  CHECK(b.lower == doctest::Approx(9.6004694862753388).epsilon(1e-12));
  CHECK(b.upper == doctest::Approx(508.97537796385235).epsilon(1e-12));
  for (double n = 100; n < 1e9; n *= 3) REQUIRE(psw_bounds(n, 0.1).lower < psw_bounds(n, 0.1).upper);
  CHECK(psw_bounds(1e4, 1e-6).lower > psw_bounds(1e4, 1.0).lower);
}
