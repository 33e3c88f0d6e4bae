#pragma once

// Brute-force references for tests. Deliberately naive: no factorization, no
// closed forms, only definitions evaluated base by base.

#include <cstdint>
#include <numeric>

namespace qcarm::oracle {

using u64 = std::uint64_t;

inline u64 naive_pow(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  for (u64 i = 0; i < e; ++i) r = r * a % m;  // m < 2^32 in tests
  return r;
}

inline u64 fast_pow(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  for (; e; e >>= 1, a = a * a % m)
    if (e & 1) r = r * a % m;
  return r;
}

inline u64 coprime_count(u64 k) {
  u64 c = 0;
  for (u64 a = 1; a <= k; ++a) c += std::gcd(a, k) == 1;
  return c;
}

/// Coprime bases 1 <= a < k with a^(k-1) = 1 (mod k).
inline u64 fermat_liars(u64 k) {
  u64 c = 0;
  for (u64 a = 1; a < k; ++a) c += std::gcd(a, k) == 1 && fast_pow(a, k - 1, k) == 1;
  return c;
}

inline bool trial_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Composite and every coprime base is a Fermat liar.
inline bool definitional_carmichael(u64 k) {
  if (k < 4 || trial_prime(k)) return false;
  for (u64 a = 2; a < k; ++a)
    if (std::gcd(a, k) == 1 && fast_pow(a, k - 1, k) != 1) return false;
  return true;
}

/// Strong liar in the textbook Miller-Rabin form: a^d = 1 or a^(2^j d) = -1.
inline bool strong_liar(u64 k, u64 a) {
  u64 d = k - 1, s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  u64 x = fast_pow(a, d, k);
  if (x == 1 || x == k - 1) return true;
  for (u64 j = 1; j < s; ++j) {
    x = x * x % k;
    if (x == k - 1) return true;
  }
  return false;
}

inline u64 strong_witnesses(u64 k) {
  u64 c = 0;
  for (u64 a = 1; a < k; ++a) c += !strong_liar(k, a);
  return c;
}

}  // namespace qcarm::oracle
