#include "qcarm/numtheory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "qcarm/errors.hpp"

namespace qcarm::nt {

namespace {

using u128 = unsigned __int128;

constexpr u64 kTrialDivisionLimit = 1u << 12;

// Strong probable-prime test to a single base; n odd, n > 2.
bool strong_probable_prime(u64 n, u64 base) {
  base %= n;
  if (base == 0) return true;
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u64 x = mod_pow(base, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// Brent's variant of Pollard rho with a fixed starting point and increment c.
// Returns a nontrivial factor or n on failure (caller retries with another c).
u64 rho_brent(u64 n, u64 c) {
  auto f = [n, c](u64 x) { return (mul_mod(x, x, n) + c) % n; };
  u64 y = 2, x = 2, q = 1, g = 1, ys = 2;
  constexpr u64 kBatch = 128;
  for (u64 r = 1; g == 1; r <<= 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    for (u64 k = 0; k < r && g == 1; k += kBatch) {
      ys = y;
      for (u64 i = 0; i < std::min(kBatch, r - k); ++i) {
        y = f(y);
        q = mul_mod(q, x > y ? x - y : y - x, n);
      }
      g = std::gcd(q, n);
    }
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

void split(u64 n, std::vector<u64>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  for (u64 c = 1;; ++c) {
    const u64 d = rho_brent(n, c);
    if (d != n && d != 1) {
      split(d, primes);
      split(n / d, primes);
      return;
    }
  }
}

}  // namespace

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Prime:
      return "Prime";
    case Classification::CompositeCarmichael:
      return "CompositeCarmichael";
    case Classification::CompositeNonCarmichael:
      return "CompositeNonCarmichael";
  }
  return "?";
}

bool Factorization::is_squarefree() const {
  return std::all_of(factors.begin(), factors.end(),
                     [](const PrimePower& pp) { return pp.exponent == 1; });
}

u64 Factorization::product() const {
  u64 p = 1;
  for (const auto& [prime, exponent] : factors)
    for (unsigned i = 0; i < exponent; ++i) p *= prime;
  return p;
}

u64 mul_mod(u64 a, u64 b, u64 m) {
  if ((a | b) >> 32 == 0) return a * b % m;
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 mod_pow(u64 a, u64 e, u64 m) {
  if (m < 2) throw DomainError("mod_pow: modulus must be >= 2");
  u64 result = 1;
  a %= m;
  while (e > 0) {
    if (e & 1) result = mul_mod(result, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return result;
}

u64 gcd(u64 a, u64 b) {
  if (a == 0 && b == 0) throw DomainError("gcd: both arguments are zero");
  return std::gcd(a, b);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr std::array<u64, 12> kBases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : kBases) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  return std::all_of(kBases.begin(), kBases.end(),
                     [n](u64 b) { return strong_probable_prime(n, b); });
}

Factorization factorize(u64 k, u64 bound) {
  if (k < 2) throw DomainError("factorize: k must be >= 2");
  if (k > bound) throw CapacityError("factorize: k=" + std::to_string(k) + " exceeds bound");

  std::vector<u64> primes;
  u64 n = k;
  for (u64 p = 2; p < kTrialDivisionLimit && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  split(n, primes);
  std::sort(primes.begin(), primes.end());

  Factorization f{k, {}};
  for (u64 p : primes) {
    if (!f.factors.empty() && f.factors.back().prime == p)
      ++f.factors.back().exponent;
    else
      f.factors.push_back({p, 1});
  }
  return f;
}

u64 euler_phi(const Factorization& f) {
  u64 phi = 1;
  for (const auto& [p, e] : f.factors) {
    phi *= p - 1;
    for (unsigned i = 1; i < e; ++i) phi *= p;
  }
  return phi;
}

u64 fermat_nonwitness_count(const Factorization& f) {
  if (f.is_prime()) throw DomainError("fermat_nonwitness_count: k is prime");
  u64 count = 1;
  for (const auto& pp : f.factors) count *= std::gcd(pp.prime - 1, f.k - 1);
  return count;
}

int z_flag(u64 k, u64 a) { return mod_pow(a, k - 1, k) == 1 ? 1 : 0; }

int g_flag(u64 k, u64 a) { return std::gcd(a, k) == 1 ? 1 : 0; }

bool is_carmichael(const Factorization& f) {
  if (f.factors.size() < 3 || !f.is_squarefree()) return false;
  return std::all_of(f.factors.begin(), f.factors.end(),
                     [&f](const PrimePower& pp) { return (f.k - 1) % (pp.prime - 1) == 0; });
}

bool is_carmichael(u64 k) {
  // Carmichael numbers are odd and at least 561.
  if (k < 561 || k % 2 == 0) return false;
  return is_carmichael(factorize(k));
}

bool rabin_witness(u64 k, u64 a) {
  if (k < 3 || k % 2 == 0) throw DomainError("rabin_witness: k must be odd and >= 3");
  u64 n = k - 1;
  unsigned s = 0;
  while ((n & 1) == 0) {
    n >>= 1;
    ++s;
  }
  // powers[i] = a^((k-1)/2^i) for i = s down to 0.
  u64 x = mod_pow(a, n, k);
  std::array<u64, 64> powers{};
  powers[s] = x;
  for (unsigned i = s; i > 0; --i) powers[i - 1] = mul_mod(powers[i], powers[i], k);
  if (powers[0] != 1) return true;
  for (unsigned i = 1; i <= s; ++i) {
    const u64 g = std::gcd((powers[i] + k - 1) % k, k);
    if (g > 1 && g < k) return true;
  }
  return false;
}

u64 mr_witness_count(u64 k, u64 census_bound) {
  if (k > census_bound) throw CapacityError("mr_witness_count: k exceeds census bound");
  if (is_prime(k)) return 0;
  u64 count = 0;
  for (u64 a = 1; a < k; ++a) count += rabin_witness(k, a) ? 1 : 0;
  return count;
}

u64 compositeness_witness_count(u64 k, u64 census_bound) {
  if (k < 2) throw DomainError("compositeness_witness_count: k must be >= 2");
  if (k % 2 == 1) return mr_witness_count(k, census_bound);
  if (k == 2) return 0;
  if (k > census_bound) throw CapacityError("compositeness_witness_count: k exceeds census bound");
  u64 count = 0;
  for (u64 a = 1; a < k; ++a) count += z_flag(k, a) == 0 ? 1 : 0;
  return count;
}

NumberFacts number_facts(u64 k, u64 census_bound) {
  NumberFacts facts;
  facts.k = k;
  facts.factorization = factorize(k);
  facts.phi = euler_phi(facts.factorization);
  if (facts.factorization.is_prime()) {
    facts.f_count = facts.phi;
    facts.classification = Classification::Prime;
  } else {
    facts.f_count = fermat_nonwitness_count(facts.factorization);
    facts.classification = is_carmichael(facts.factorization) ? Classification::CompositeCarmichael
                                                              : Classification::CompositeNonCarmichael;
  }
  facts.t_k = facts.phi - facts.f_count;
  if (k <= census_bound) facts.mr_witnesses = compositeness_witness_count(k, census_bound);
  return facts;
}

std::vector<u64> enumerate_carmichaels(u64 n, u64 bound) {
  if (n > bound) throw CapacityError("enumerate_carmichaels: N exceeds enumeration bound");
  std::vector<u64> out;
  if (n <= 561) return out;

  // Smallest-prime-factor sieve; entries fit in 32 bits for the default bound.
  std::vector<std::uint32_t> spf(n, 0);
  for (u64 i = 2; i < n; ++i) {
    if (spf[i] != 0) continue;
    for (u64 j = i; j < n; j += i)
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
  }
  for (u64 k = 561; k < n; k += 2) {
    u64 m = k;
    unsigned distinct = 0;
    bool ok = spf[k] != k;
    while (ok && m > 1) {
      const u64 p = spf[m];
      m /= p;
      if (m % p == 0 || (k - 1) % (p - 1) != 0) ok = false;
      ++distinct;
    }
    if (ok && distinct >= 3) out.push_back(k);
  }
  return out;
}

std::vector<u64> totient_table(u64 n) {
  std::vector<u64> phi(n + 1);
  std::iota(phi.begin(), phi.end(), u64{0});
  for (u64 i = 2; i <= n; ++i) {
    if (phi[i] != i) continue;
    for (u64 j = i; j <= n; j += i) phi[j] -= phi[j] / i;
  }
  return phi;
}

double psw_l(double n) {
  if (!(n > std::exp(std::numbers::e))) throw DomainError("psw_l: N must exceed e^e");
  const double ln = std::log(n);
  const double lnln = std::log(ln);
  return std::exp(ln * std::log(lnln) / lnln);
}

PswBounds psw_bounds(double n, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("psw_bounds: epsilon must be positive");
  const double l = psw_l(n);
  return {n / std::pow(l, 2.0 + epsilon), n * std::pow(l, -(1.0 - epsilon))};
}

}  // namespace qcarm::nt
