#pragma once

// Quantum counting (COUNT): superpose iteration counts m in [0, P), apply
// G^m to the uniform state, Fourier-transform the count register and measure.
// The measured l estimates f = P theta / pi and hence t = D sin^2(theta).

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcarm/qsim.hpp"

namespace qcarm::counting {

/// Leakage kernel sin(pi x) / (P sin(pi x / P)), continuously extended at
/// x = jP (limit (-1)^{j(P-1)}; 1 for x = 0).
double leakage_kernel(double x, std::size_t p);

/// s_{l+} (sign > 0) or s_{l-} (sign < 0) of the counting spectrum.
double s_lp(std::size_t l, double f, std::size_t p, int sign);

struct SpectralAmplitude {
  std::size_t l;
  double s_plus;
  double s_minus;
};

SpectralAmplitude spectral_amplitude(std::size_t l, double f, std::size_t p);

/// Coefficients of one ancilla outcome on the normalized marked / unmarked
/// uniform states after COUNT, from the closed form (global phases included).
struct AncillaCoefficients {
  std::complex<double> marked;
  std::complex<double> unmarked;

  [[nodiscard]] double probability() const { return std::norm(marked) + std::norm(unmarked); }
};

/// Closed-form coefficients for R count registers observed at `ls`.
AncillaCoefficients closed_form_coefficients(std::size_t d, std::size_t t, std::size_t p,
                                             std::span<const std::size_t> ls);

/// Distribution of the count register (R = 1) from the closed form.
qsim::Distribution count_exact_distribution(std::size_t d, std::size_t t, std::size_t p);

/// Same distribution by dense simulation; independent of the closed form.
qsim::Distribution count_dense_distribution(std::size_t d, const std::function<bool(std::size_t)>& marked,
                                            std::size_t p, std::size_t cap = qsim::kDefaultAmplitudeCap);

/// pi (D/Q) (pi/Q + 2 sqrt(t/D)).
double error_bound(double d, std::size_t q, double t);

struct CountEstimate {
  std::size_t measured_l = 0;
  double f_tilde = 0;      // min(l, P - l)
  double theta_tilde = 0;  // pi f_tilde / P
  double t_tilde = 0;      // D sin^2(theta_tilde)
  double error_bound = 0;
  bool in_ansatz = false;  // 1 < f < P/2 - 1 at the reference t

  [[nodiscard]] bool within_bound(double t) const { return std::abs(t_tilde - t) <= error_bound; }
};

/// Decodes one measured l. `reference_t` (ground truth when known, else the
/// estimate itself) feeds the error bound and the ansatz flag.
CountEstimate estimate_from_outcome(std::size_t l, std::size_t p, std::size_t d,
                                    std::optional<double> reference_t = std::nullopt);

/// `reps` seeded COUNT runs; run i draws from Rng(seed, i).
std::vector<CountEstimate> run_count(std::size_t d, const std::function<bool(std::size_t)>& marked, std::size_t p,
                                     std::uint64_t seed, std::size_t reps,
                                     std::optional<double> true_t = std::nullopt,
                                     std::size_t cap = qsim::kDefaultAmplitudeCap);

/// Same as run_count but samples a precomputed count-register distribution.
std::vector<CountEstimate> sample_estimates(const qsim::Distribution& dist, std::size_t d, std::uint64_t seed,
                                            std::size_t reps, std::optional<double> true_t);

struct PeakProbability {
  double f = 0;
  double probability = 0;
  bool in_ansatz = false;
  std::vector<std::size_t> outcomes;  // distinct l in {fl f, ceil f, P - fl f, P - ceil f} mod P
};

/// Exact probability that COUNT lands on one of the peak outcomes around f.
PeakProbability peak_success_probability(std::size_t d, std::size_t t, std::size_t q);

nlohmann::json to_json(const CountEstimate& e);

}  // namespace qcarm::counting
