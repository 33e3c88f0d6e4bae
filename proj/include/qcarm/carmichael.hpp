#pragma once

// The two Carmichael pipelines.
//
// Certification of a composite k: R count registers of size P drive
// G^{m_1+...+m_R} on a size-k base register, a coprimality flag is computed,
// flag = 1 is post-selected (retrying on 0), each count register is
// Fourier-transformed and measured. Any nonzero outcome proves k is not
// Carmichael; all zeros means "probably Carmichael".
//
// G marks the coprime bases failing a^(k-1) = 1 (mod k), so t_k = phi(k) - F(k)
// and sin^2(theta_k) = t_k / k. Non-coprime bases are unmarked. The flag is
// computed after the Grover ladder: on a Carmichael number G then acts as the
// identity on the uniform state and the ancillas are exactly |0...0>.
// For non-Carmichael k, the flag-marginal probability of all zeros is exactly
// alpha_k^{2R}; the flag-conditioned one differs because the unmarked
// direction mixes coprime and non-coprime bases.
//
// Counting Carmichael numbers below N runs COUNT over [0, N) with an ideal
// phase oracle on Carmichael indices. The imperfect oracle built from
// per-k certification is represented only by the scalar leakage factors
// beta_k, alpha_k and the bound they give on the correction norm.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcarm/counting.hpp"
#include "qcarm/numtheory.hpp"
#include "qcarm/qsim.hpp"

namespace qcarm::carmichael {

using nt::u64;

enum class Mode { Exact, Sample };
enum class VerdictKind { NotCarmichael, ProbablyCarmichael };

const char* to_string(Mode m);
const char* to_string(VerdictKind v);

/// sin(pi f) / (P sin(pi f / P)), 1 at f = 0.
double leakage(double f, std::size_t p);

/// f = P arcsin(sqrt(t / k)) / pi.
double spectral_position(double t, double k, std::size_t p);

/// alpha_k from t_k = phi(k) - F(k).
double alpha_k(u64 k, std::size_t p);

/// Smallest P >= 4 with f > 1 at the guaranteed gap t = phi(k)/2.
std::size_t recommended_ancilla_size(u64 k);

/// Upper bound on P(all zeros) for any non-Carmichael k', using only the
/// guaranteed gap t >= phi(k)/2 (no knowledge of t_k).
double gap_error_bound(u64 k, std::size_t p, std::size_t r);

struct Rational {
  u64 num = 0;
  u64 den = 1;
  [[nodiscard]] double value() const { return double(num) / double(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// phi(k)/k in lowest terms.
Rational flag_probability(u64 k);

/// Exact quantities of one certification circuit.
struct CertificationAnalysis {
  u64 k = 0;
  std::size_t p = 0;
  std::size_t r = 0;
  u64 t_k = 0;
  u64 phi = 0;
  bool carmichael = false;
  double flag_probability = 0;       // simulated P(flag = 1)
  double allzero_conditional = 0;    // P(all zeros | flag = 1)
  double allzero_unconditional = 0;  // P(all zeros), flag marginalized
  double alpha_2r = 0;               // alpha_k^{2R}
  std::size_t grover_per_attempt = 0;
  qsim::Distribution conditional_ancillas;  // over the R count registers given flag = 1
};

CertificationAnalysis analyze_certification(u64 k, std::size_t p, std::size_t r,
                                            std::size_t cap = qsim::kDefaultAmplitudeCap);

struct Verdict {
  VerdictKind kind = VerdictKind::NotCarmichael;
  double error_bound = 0;
  std::vector<std::size_t> observed_ancillas;
  std::size_t flag_retries = 0;
  std::size_t grover_applications = 0;  // R(P-1) per attempt
  std::optional<double> allzero_conditional;
  std::optional<double> allzero_unconditional;
  std::optional<double> flag_probability;
};

/// One certification run; randomness from Rng(seed, run).
Verdict certify(u64 k, std::size_t p, std::size_t r, Mode mode, std::uint64_t seed, std::uint64_t run = 0,
                std::size_t cap = qsim::kDefaultAmplitudeCap);

/// `reps` runs sharing one simulation; run i uses Rng(seed, i).
std::vector<Verdict> certify_repeated(u64 k, std::size_t p, std::size_t r, Mode mode, std::uint64_t seed,
                                      std::size_t reps, std::size_t cap = qsim::kDefaultAmplitudeCap);

/// Builds verdict number `run` from a finished analysis.
Verdict draw_verdict(const CertificationAnalysis& analysis, Mode mode, std::uint64_t seed, std::uint64_t run);

/// Simulated P(all zeros | flag = 1).
double allzero_probability(u64 k, std::size_t p, std::size_t r, std::size_t cap = qsim::kDefaultAmplitudeCap);

/// COUNT over the k bases with the non-pseudoprime coprime bases marked.
std::vector<counting::CountEstimate> count_nonpseudo_bases(u64 k, std::size_t p, std::uint64_t seed,
                                                           std::size_t reps,
                                                           std::size_t cap = qsim::kDefaultAmplitudeCap);

inline constexpr u64 kDefaultBoundsLimit = 200'000;

struct KBound {
  u64 k = 0;
  bool prime = false;
  bool carmichael = false;
  u64 phi = 0;
  u64 witnesses = 0;  // compositeness witnesses among 1 <= a < k
  u64 t_k = 0;
  double g = 0;
  double beta = 0;
  double alpha = 0;
  double sin_phi = 0;  // sqrt(phi(k)/k)
};

struct SectionIVBounds {
  u64 n = 0;
  std::size_t p = 0;
  std::vector<KBound> per_k;  // 2 <= k < N
  double e_norm_sq = 0;
  double e_norm_bound = 0;  // 4 pi^2 / (3 P^2)
  double phi_norm = 0;
  double beta_composite_limit = 0;  // 2 / (sqrt(3) P)
  double max_beta_composite = 0;
  bool primes_beta_one = true;

  [[nodiscard]] bool e_norm_within_bound() const { return e_norm_sq <= e_norm_bound; }
  [[nodiscard]] bool beta_composite_within_limit() const { return max_beta_composite <= beta_composite_limit; }
};

SectionIVBounds section_iv_bounds(u64 n, std::size_t p, u64 limit = kDefaultBoundsLimit);

/// (sum_{k=1..N} phi(k)/k) / N.
double phi_norm(u64 n);

struct CarmichaelCount {
  u64 n = 0;
  std::size_t q = 0;
  u64 t_exact = 0;
  std::vector<counting::CountEstimate> estimates;
  double bound = 0;
  counting::PeakProbability peak;
  double success_fraction = 0;  // fraction of estimates within bound
};

CarmichaelCount count_carmichaels_quantum(u64 n, std::size_t q, std::uint64_t seed, std::size_t reps,
                                          std::size_t cap = qsim::kDefaultAmplitudeCap);

struct QPolicy {
  double margin = 0.05;  // added to the exponent 1 + eps/2 + delta
};

struct PswReport {
  u64 n = 0;
  double epsilon = 0;
  double delta = 0;
  double exponent = 0;
  double l = 0;
  std::size_t q = 0;
  u64 t_exact = 0;
  double t_tilde = 0;    // median over runs
  double dt_observed = 0;
  double dt_exp = 0;     // pi (N/Q)(pi/Q + 2 sqrt(t/N))
  double dt_th = 0;      // N l^-(2+eps+delta)
  double psw_lower = 0;
  double psw_upper = 0;
  bool dt_exp_below_th = false;
  double runtime_exponent = 0;  // 2 + eps + 2 delta, informational
};

PswReport psw_check(u64 n, double epsilon, double delta, QPolicy policy, std::uint64_t seed, std::size_t reps,
                    std::size_t cap = qsim::kDefaultAmplitudeCap);

nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const CertificationAnalysis& a);
nlohmann::json to_json(const SectionIVBounds& b, bool include_per_k = false);
nlohmann::json to_json(const CarmichaelCount& c);
nlohmann::json to_json(const PswReport& r);

std::string psw_csv_header();
std::string psw_csv_row(const PswReport& r);

}  // namespace qcarm::carmichael
