#include "qcarm/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcarm/errors.hpp"

namespace qcarm::counting {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSingularity = 1e-12;

double fourier_angle(std::size_t d, std::size_t t) { return qsim::GroverAngles(d, t).theta; }

bool in_ansatz(double f, std::size_t p) { return f > 1.0 && f < double(p) / 2.0 - 1.0; }

}  // namespace

double leakage_kernel(double x, std::size_t p) {
  const double half = std::sin(kPi * x / double(p));
  if (std::abs(half) < kSingularity) {
    const auto j = static_cast<long long>(std::llround(x / double(p)));
    return ((j * static_cast<long long>(p - 1)) % 2 == 0) ? 1.0 : -1.0;
  }
  return std::sin(kPi * x) / (double(p) * half);
}

double s_lp(std::size_t l, double f, std::size_t p, int sign) {
  if (p < 2) throw DomainError("s_lp: P must be >= 2");
  if (l >= p) throw DomainError("s_lp: l must be < P");
  return leakage_kernel(double(l) + (sign >= 0 ? f : -f), p);
}

SpectralAmplitude spectral_amplitude(std::size_t l, double f, std::size_t p) {
  return {l, s_lp(l, f, p, +1), s_lp(l, f, p, -1)};
}

AncillaCoefficients closed_form_coefficients(std::size_t d, std::size_t t, std::size_t p,
                                             std::span<const std::size_t> ls) {
  if (p < 2) throw DomainError("closed_form_coefficients: P must be >= 2");
  if (ls.empty()) throw DomainError("closed_form_coefficients: need at least one register");
  const double theta = fourier_angle(d, t);
  const double f = double(p) * theta / kPi;
  const double r = double(ls.size());
  const double f_r = f * (r + (1.0 - r) / double(p));

  double prod_plus = 1.0, prod_minus = 1.0;
  std::size_t l_sum = 0;
  for (std::size_t l : ls) {
    prod_plus *= s_lp(l, f, p, +1);
    prod_minus *= s_lp(l, f, p, -1);
    l_sum += l;
  }
  // e^{i pi (P-1) sum(l) / P}, reduced mod 2P before converting to an angle
  const std::size_t turns = ((p - 1) * (l_sum % (2 * p))) % (2 * p);
  const auto phase = std::polar(1.0, kPi * double(turns) / double(p));

  const auto plus = std::polar(1.0, kPi * f_r) * prod_plus;
  const auto minus = std::polar(1.0, -kPi * f_r) * prod_minus;
  const std::complex<double> i(0.0, 1.0);

  AncillaCoefficients c;
  c.marked = t == 0 ? 0.0 : 0.5 * phase * (-i * plus + i * minus);
  c.unmarked = t == d ? 0.0 : 0.5 * phase * (plus + minus);
  return c;
}

qsim::Distribution count_exact_distribution(std::size_t d, std::size_t t, std::size_t p) {
  if (t > d) throw DomainError("count_exact_distribution: t > D");
  qsim::Distribution dist{qsim::RegisterLayout({p}), std::vector<double>(p)};
  for (std::size_t l = 0; l < p; ++l) {
    const std::size_t ls[] = {l};
    dist.probs[l] = closed_form_coefficients(d, t, p, ls).probability();
  }
  return dist;
}

qsim::Distribution count_dense_distribution(std::size_t d, const std::function<bool(std::size_t)>& marked,
                                            std::size_t p, std::size_t cap) {
  auto prepared = qsim::controlled_grover_powers(p, 1, d, marked, cap);
  const auto transformed = qsim::qft(prepared.state, 0);
  return qsim::exact_distribution(transformed, {0});
}

double error_bound(double d, std::size_t q, double t) {
  if (q < 2) throw DomainError("error_bound: Q must be >= 2");
  return kPi * (d / double(q)) * (kPi / double(q) + 2.0 * std::sqrt(t / d));
}

CountEstimate estimate_from_outcome(std::size_t l, std::size_t p, std::size_t d, std::optional<double> reference_t) {
  if (l >= p) throw DomainError("estimate_from_outcome: l must be < P");
  CountEstimate e;
  e.measured_l = l;
  e.f_tilde = double(std::min(l, p - l));
  e.theta_tilde = kPi * e.f_tilde / double(p);
  const double s = std::sin(e.theta_tilde);
  e.t_tilde = double(d) * s * s;
  const double ref = reference_t.value_or(e.t_tilde);
  e.error_bound = error_bound(double(d), p, ref);
  const double ref_f = double(p) * std::asin(std::sqrt(std::clamp(ref / double(d), 0.0, 1.0))) / kPi;
  e.in_ansatz = in_ansatz(ref_f, p);
  return e;
}

std::vector<CountEstimate> sample_estimates(const qsim::Distribution& dist, std::size_t d, std::uint64_t seed,
                                            std::size_t reps, std::optional<double> true_t) {
  const qsim::Sampler sampler(dist);
  const std::size_t p = dist.layout.dimension();
  std::vector<CountEstimate> out;
  out.reserve(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    Rng rng(seed, i);
    out.push_back(estimate_from_outcome(sampler(rng), p, d, true_t));
  }
  return out;
}

std::vector<CountEstimate> run_count(std::size_t d, const std::function<bool(std::size_t)>& marked, std::size_t p,
                                     std::uint64_t seed, std::size_t reps, std::optional<double> true_t,
                                     std::size_t cap) {
  return sample_estimates(count_dense_distribution(d, marked, p, cap), d, seed, reps, true_t);
}

PeakProbability peak_success_probability(std::size_t d, std::size_t t, std::size_t q) {
  PeakProbability peak;
  peak.f = double(q) * fourier_angle(d, t) / kPi;
  peak.in_ansatz = in_ansatz(peak.f, q);
  const auto lo = static_cast<std::size_t>(std::floor(peak.f));
  const auto hi = static_cast<std::size_t>(std::ceil(peak.f));
  for (std::size_t l : {lo, hi, q - lo, q - hi}) peak.outcomes.push_back(l % q);
  std::sort(peak.outcomes.begin(), peak.outcomes.end());
  peak.outcomes.erase(std::unique(peak.outcomes.begin(), peak.outcomes.end()), peak.outcomes.end());

  const auto dist = count_exact_distribution(d, t, q);
  for (std::size_t l : peak.outcomes) peak.probability += dist.probs[l];
  return peak;
}

nlohmann::json to_json(const CountEstimate& e) {
  return {{"l", e.measured_l},           {"f_tilde", e.f_tilde}, {"theta_tilde", e.theta_tilde},
          {"t_tilde", e.t_tilde},        {"bound", e.error_bound}, {"in_ansatz", e.in_ansatz}};
}

}  // namespace qcarm::counting
