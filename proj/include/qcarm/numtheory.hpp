#pragma once

// Classical number theory used both as ground truth for the simulator and as
// the oracle the quantum pipelines consult (flag predicates, marked sets).
//
// All routines take unsigned 64-bit inputs. Modular products are widened to
// 128 bits, so mod_pow is exact for any modulus below 2^64; the factorizer is
// limited to a configurable bound (2^50 by default).

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace qcarm::nt {

using u64 = std::uint64_t;

inline constexpr u64 kDefaultFactorBound = u64{1} << 50;
inline constexpr u64 kDefaultEnumerationBound = 10'000'000;
inline constexpr u64 kDefaultCensusBound = 1'000'000;

struct PrimePower {
  u64 prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization of k, primes strictly increasing.
struct Factorization {
  u64 k = 1;
  std::vector<PrimePower> factors;

  [[nodiscard]] bool is_prime() const { return factors.size() == 1 && factors[0].exponent == 1; }
  [[nodiscard]] bool is_squarefree() const;
  /// Recomputes the product of prime powers.
  [[nodiscard]] u64 product() const;
};

enum class Classification { Prime, CompositeCarmichael, CompositeNonCarmichael };

const char* to_string(Classification c);

struct NumberFacts {
  u64 k = 0;
  Factorization factorization;
  u64 phi = 0;
  u64 f_count = 0;  // Fermat non-witnesses F(k); equals phi for primes
  u64 t_k = 0;      // phi - f_count
  // Rabin witnesses among 1 <= a < k, by census; empty above the census bound.
  std::optional<u64> mr_witnesses;
  Classification classification = Classification::Prime;
};

u64 mul_mod(u64 a, u64 b, u64 m);
u64 mod_pow(u64 a, u64 e, u64 m);
u64 gcd(u64 a, u64 b);

/// Deterministic Miller-Rabin over a base set that is exact for all 64-bit n.
bool is_prime(u64 n);

Factorization factorize(u64 k, u64 bound = kDefaultFactorBound);

u64 euler_phi(const Factorization& f);

/// F(k) = prod gcd(p_i - 1, k - 1). Throws DomainError for prime k.
u64 fermat_nonwitness_count(const Factorization& f);

/// 1 iff a^(k-1) = 1 (mod k).
int z_flag(u64 k, u64 a);
/// 1 iff gcd(a, k) = 1.
int g_flag(u64 k, u64 a);

/// Korselt: composite, squarefree, at least three primes, p-1 | k-1.
bool is_carmichael(const Factorization& f);
bool is_carmichael(u64 k);

/// Rabin's compositeness witness: a^(k-1) != 1 (mod k), or
/// 1 < gcd(a^((k-1)/2^i) - 1, k) < k for some 1 <= i <= s where k-1 = 2^s n.
/// Requires odd k.
bool rabin_witness(u64 k, u64 a);

/// Witness census over 1 <= a < k. Odd k only; returns 0 for primes.
u64 mr_witness_count(u64 k, u64 census_bound = kDefaultCensusBound);

/// Witness count for any k >= 2. For even k the strong condition is vacuous
/// (k-1 is odd), so witnesses are exactly the bases failing a^(k-1) = 1.
u64 compositeness_witness_count(u64 k, u64 census_bound = kDefaultCensusBound);

NumberFacts number_facts(u64 k, u64 census_bound = kDefaultCensusBound);

/// Sorted Carmichael numbers strictly below n.
std::vector<u64> enumerate_carmichaels(u64 n, u64 bound = kDefaultEnumerationBound);

/// Totients 0..n inclusive by sieve (phi[0] = 0, phi[1] = 1).
std::vector<u64> totient_table(u64 n);

/// l(N) = exp(ln N * ln ln ln N / ln ln N), all logs natural. Needs N >= 16.
double psw_l(double n);

struct PswBounds {
  double lower;  // N / l(N)^(2+eps)
  double upper;  // N * l(N)^-(1-eps)
};

/// Both bounds with unit implied constants.
PswBounds psw_bounds(double n, double epsilon);

}  // namespace qcarm::nt
