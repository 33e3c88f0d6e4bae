#include "qcarm/carmichael.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "qcarm/errors.hpp"
#include "qcarm/rng.hpp"

namespace qcarm::carmichael {

namespace {

constexpr double kPi = std::numbers::pi;

struct BaseOracle {
  u64 k;
  bool coprime(std::size_t a) const { return std::gcd(u64(a), k) == 1; }
  bool marked(std::size_t a) const { return coprime(a) && nt::mod_pow(u64(a), k - 1, k) != 1; }
};

nt::Factorization require_composite(u64 k) {
  if (k < 4) throw PreconditionError("k must be composite (got " + std::to_string(k) + ")");
  auto f = nt::factorize(k);
  if (f.is_prime()) throw PreconditionError("k must be composite (got prime " + std::to_string(k) + ")");
  return f;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

const char* to_string(Mode m) { return m == Mode::Exact ? "exact" : "sample"; }

const char* to_string(VerdictKind v) {
  return v == VerdictKind::NotCarmichael ? "NotCarmichael" : "ProbablyCarmichael";
}

double leakage(double f, std::size_t p) { return counting::leakage_kernel(f, p); }

double spectral_position(double t, double k, std::size_t p) {
  return double(p) * std::asin(std::sqrt(std::clamp(t / k, 0.0, 1.0))) / kPi;
}

double alpha_k(u64 k, std::size_t p) {
  const auto f = require_composite(k);
  const u64 t = nt::euler_phi(f) - nt::fermat_nonwitness_count(f);
  return leakage(spectral_position(double(t), double(k), p), p);
}

std::size_t recommended_ancilla_size(u64 k) {
  const auto f = require_composite(k);
  const double theta_min = std::asin(std::sqrt(double(nt::euler_phi(f)) / (2.0 * double(k))));
  return std::max<std::size_t>(4, static_cast<std::size_t>(std::floor(kPi / theta_min)) + 1);
}

double gap_error_bound(u64 k, std::size_t p, std::size_t r) {
  const auto f = require_composite(k);
  const double f_min = spectral_position(double(nt::euler_phi(f)) / 2.0, double(k), p);
  // |leakage| on [f_min, P/2]: decreasing main lobe below 1, envelope
  // 1/(P sin(pi f / P)) from 1 on.
  const auto envelope = [p](double x) { return 1.0 / (double(p) * std::sin(kPi * x / double(p))); };
  const double worst = f_min >= 1.0 ? envelope(f_min) : std::max(std::abs(leakage(f_min, p)), envelope(1.0));
  return std::min(1.0, std::pow(std::min(worst, 1.0), 2.0 * double(r)));
}

Rational flag_probability(u64 k) {
  if (k < 2) throw DomainError("flag_probability: k must be >= 2");
  const u64 phi = nt::euler_phi(nt::factorize(k));
  const u64 g = std::gcd(phi, k);
  return {phi / g, k / g};
}

CertificationAnalysis analyze_certification(u64 k, std::size_t p, std::size_t r, std::size_t cap) {
  const auto fact = require_composite(k);
  if (p < 2) throw DomainError("certify: P must be >= 2");
  if (r < 1) throw DomainError("certify: R must be >= 1");

  CertificationAnalysis out;
  out.k = k;
  out.p = p;
  out.r = r;
  out.phi = nt::euler_phi(fact);
  out.t_k = out.phi - nt::fermat_nonwitness_count(fact);
  out.carmichael = nt::is_carmichael(fact);
  out.alpha_2r = std::pow(leakage(spectral_position(double(out.t_k), double(k), p), p), 2.0 * double(r));

  const BaseOracle oracle{k};
  auto ladder = qsim::controlled_grover_powers(
      p, r, std::size_t(k), [&](std::size_t a) { return oracle.marked(a); }, cap);
  out.grover_per_attempt = ladder.grover_applications;

  // registers: [m_1 .. m_R, a, flag]
  auto state = qsim::compute_flag(ladder.state, r, [&](std::size_t a) { return oracle.coprime(a); }, cap);
  for (std::size_t i = 0; i < r; ++i) state = qsim::qft(state, i);

  std::vector<std::size_t> ancillas(r);
  std::iota(ancillas.begin(), ancillas.end(), std::size_t{0});
  out.allzero_unconditional = qsim::exact_distribution(state, ancillas).probs[0];

  const auto selected = qsim::postselect(state, r + 1, 1);
  out.flag_probability = selected.probability;
  out.conditional_ancillas = qsim::exact_distribution(selected.state, ancillas);
  out.allzero_conditional = out.conditional_ancillas.probs[0];
  return out;
}

Verdict draw_verdict(const CertificationAnalysis& analysis, Mode mode, std::uint64_t seed, std::uint64_t run) {
  Rng rng(seed, run);
  Verdict v;
  while (rng.uniform() >= analysis.flag_probability) ++v.flag_retries;
  const auto outcome = qsim::Sampler(analysis.conditional_ancillas)(rng);
  v.observed_ancillas = analysis.conditional_ancillas.layout.digits(outcome);
  v.kind = outcome == 0 ? VerdictKind::ProbablyCarmichael : VerdictKind::NotCarmichael;
  v.grover_applications = analysis.grover_per_attempt * (v.flag_retries + 1);

  if (v.kind == VerdictKind::ProbablyCarmichael) {
    if (mode == Mode::Exact)
      v.error_bound = analysis.carmichael ? 0.0 : analysis.allzero_conditional;
    else
      v.error_bound = gap_error_bound(analysis.k, analysis.p, analysis.r);
  }
  if (mode == Mode::Exact) {
    v.allzero_conditional = analysis.allzero_conditional;
    v.allzero_unconditional = analysis.allzero_unconditional;
    v.flag_probability = analysis.flag_probability;
  }
  return v;
}

Verdict certify(u64 k, std::size_t p, std::size_t r, Mode mode, std::uint64_t seed, std::uint64_t run,
                std::size_t cap) {
  return draw_verdict(analyze_certification(k, p, r, cap), mode, seed, run);
}

std::vector<Verdict> certify_repeated(u64 k, std::size_t p, std::size_t r, Mode mode, std::uint64_t seed,
                                      std::size_t reps, std::size_t cap) {
  const auto analysis = analyze_certification(k, p, r, cap);
  std::vector<Verdict> out;
  out.reserve(reps);
  for (std::size_t i = 0; i < reps; ++i) out.push_back(draw_verdict(analysis, mode, seed, i));
  return out;
}

double allzero_probability(u64 k, std::size_t p, std::size_t r, std::size_t cap) {
  return analyze_certification(k, p, r, cap).allzero_conditional;
}

std::vector<counting::CountEstimate> count_nonpseudo_bases(u64 k, std::size_t p, std::uint64_t seed,
                                                           std::size_t reps, std::size_t cap) {
  const auto fact = require_composite(k);
  const u64 t = nt::euler_phi(fact) - nt::fermat_nonwitness_count(fact);
  const BaseOracle oracle{k};
  return counting::run_count(
      std::size_t(k), [&](std::size_t a) { return oracle.marked(a); }, p, seed, reps, double(t), cap);
}

SectionIVBounds section_iv_bounds(u64 n, std::size_t p, u64 limit) {
  if (p < 4) throw DomainError("section_iv_bounds: P must be >= 4");
  if (n < 3) throw DomainError("section_iv_bounds: N must be >= 3");
  if (n > limit) throw CapacityError("section_iv_bounds: N exceeds witness-census limit");

  SectionIVBounds out;
  out.n = n;
  out.p = p;
  out.e_norm_bound = 4.0 * kPi * kPi / (3.0 * double(p) * double(p));
  out.beta_composite_limit = 2.0 / (std::sqrt(3.0) * double(p));
  out.phi_norm = phi_norm(n);

  const auto phi = nt::totient_table(n);
  double sum = 0.0;
  out.per_k.reserve(n - 2);
  for (u64 k = 2; k < n; ++k) {
    KBound b;
    b.k = k;
    b.phi = phi[k];
    b.prime = b.phi == k - 1;
    b.sin_phi = std::sqrt(double(b.phi) / double(k));
    if (!b.prime) {
      const auto fact = nt::factorize(k);
      b.carmichael = nt::is_carmichael(fact);
      b.t_k = b.phi - nt::fermat_nonwitness_count(fact);
      b.witnesses = nt::compositeness_witness_count(k, limit);
    }
    b.g = spectral_position(double(b.witnesses), double(k), p);
    b.beta = leakage(b.g, p);
    b.alpha = leakage(spectral_position(double(b.t_k), double(k), p), p);

    const double weight = double(b.phi) / double(k);
    if (b.prime) {
      out.primes_beta_one = out.primes_beta_one && b.beta == 1.0;
    } else {
      out.max_beta_composite = std::max(out.max_beta_composite, std::abs(b.beta));
      sum += b.carmichael ? weight * b.beta * b.beta : weight * (1.0 - b.beta * b.beta) * b.alpha * b.alpha;
    }
    out.per_k.push_back(b);
  }
  out.e_norm_sq = 4.0 / double(n) * sum;
  return out;
}

double phi_norm(u64 n) {
  if (n < 1) throw DomainError("phi_norm: N must be >= 1");
  const auto phi = nt::totient_table(n);
  double sum = 0.0;
  for (u64 k = 1; k <= n; ++k) sum += double(phi[k]) / double(k);
  return sum / double(n);
}

CarmichaelCount count_carmichaels_quantum(u64 n, std::size_t q, std::uint64_t seed, std::size_t reps,
                                          std::size_t cap) {
  if (n < 2) throw DomainError("count_carmichaels_quantum: N must be >= 2");
  if (q < 2) throw DomainError("count_carmichaels_quantum: Q must be >= 2");
  // fail on the amplitude cap before the enumeration sieve runs
  qsim::RegisterLayout({q, std::size_t(n)}, cap);

  CarmichaelCount out;
  out.n = n;
  out.q = q;
  const auto carmichaels = nt::enumerate_carmichaels(n);
  out.t_exact = carmichaels.size();
  std::vector<char> mask(n, 0);
  for (u64 c : carmichaels) mask[c] = 1;

  out.estimates = counting::run_count(
      std::size_t(n), [&](std::size_t a) { return mask[a] != 0; }, q, seed, reps, double(out.t_exact), cap);
  out.bound = counting::error_bound(double(n), q, double(out.t_exact));
  out.peak = counting::peak_success_probability(std::size_t(n), std::size_t(out.t_exact), q);
  const auto hits = std::count_if(out.estimates.begin(), out.estimates.end(),
                                  [&](const auto& e) { return e.within_bound(double(out.t_exact)); });
  out.success_fraction = reps == 0 ? 0.0 : double(hits) / double(reps);
  return out;
}

PswReport psw_check(u64 n, double epsilon, double delta, QPolicy policy, std::uint64_t seed, std::size_t reps,
                    std::size_t cap) {
  PswReport rep;
  rep.n = n;
  rep.epsilon = epsilon;
  rep.delta = delta;
  rep.l = nt::psw_l(double(n));
  rep.exponent = 1.0 + epsilon / 2.0 + delta + policy.margin;
  rep.q = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(std::pow(rep.l, rep.exponent))));

  const auto count = count_carmichaels_quantum(n, rep.q, seed, reps, cap);
  rep.t_exact = count.t_exact;
  std::vector<double> t_values;
  for (const auto& e : count.estimates) t_values.push_back(e.t_tilde);
  rep.t_tilde = median(std::move(t_values));
  rep.dt_observed = std::abs(rep.t_tilde - double(rep.t_exact));
  rep.dt_exp = count.bound;
  rep.dt_th = double(n) * std::pow(rep.l, -(2.0 + epsilon + delta));
  const auto bounds = nt::psw_bounds(double(n), epsilon);
  rep.psw_lower = bounds.lower;
  rep.psw_upper = bounds.upper;
  rep.dt_exp_below_th = rep.dt_exp < rep.dt_th;
  rep.runtime_exponent = 2.0 + epsilon + 2.0 * delta;
  return rep;
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j = {{"kind", to_string(v.kind)},
                      {"error_bound", v.error_bound},
                      {"observed_ancillas", v.observed_ancillas},
                      {"flag_retries", v.flag_retries},
                      {"grover_applications", v.grover_applications}};
  if (v.allzero_conditional) j["allzero_conditional"] = *v.allzero_conditional;
  if (v.allzero_unconditional) j["allzero_unconditional"] = *v.allzero_unconditional;
  if (v.flag_probability) j["flag_probability"] = *v.flag_probability;
  return j;
}

nlohmann::json to_json(const CertificationAnalysis& a) {
  return {{"k", a.k},
          {"P", a.p},
          {"R", a.r},
          {"phi", a.phi},
          {"t_k", a.t_k},
          {"carmichael", a.carmichael},
          {"flag_probability", a.flag_probability},
          {"allzero_conditional", a.allzero_conditional},
          {"allzero_unconditional", a.allzero_unconditional},
          {"alpha_2R", a.alpha_2r},
          {"grover_per_attempt", a.grover_per_attempt},
          {"ancilla_distribution", qsim::to_json(a.conditional_ancillas)}};
}

nlohmann::json to_json(const SectionIVBounds& b, bool include_per_k) {
  nlohmann::json j = {{"N", b.n},
                      {"P", b.p},
                      {"E_norm_sq", b.e_norm_sq},
                      {"E_norm_bound", b.e_norm_bound},
                      {"E_norm_within_bound", b.e_norm_within_bound()},
                      {"phi_norm", b.phi_norm},
                      {"pi_sq_over_6", kPi * kPi / 6.0},
                      {"six_over_pi_sq", 6.0 / (kPi * kPi)},
                      {"primes_beta_one", b.primes_beta_one},
                      {"max_beta_composite", b.max_beta_composite},
                      {"beta_composite_limit", b.beta_composite_limit}};
  if (include_per_k) {
    auto rows = nlohmann::json::array();
    for (const auto& k : b.per_k)
      rows.push_back({{"k", k.k},
                      {"prime", k.prime},
                      {"carmichael", k.carmichael},
                      {"g", k.g},
                      {"beta", k.beta},
                      {"alpha", k.alpha},
                      {"sin_phi", k.sin_phi}});
    j["per_k"] = rows;
  }
  return j;
}

nlohmann::json to_json(const CarmichaelCount& c) {
  auto estimates = nlohmann::json::array();
  for (const auto& e : c.estimates) estimates.push_back(counting::to_json(e));
  return {{"N", c.n},
          {"Q", c.q},
          {"t_exact", c.t_exact},
          {"bound", c.bound},
          {"success_fraction", c.success_fraction},
          {"success_threshold", 8.0 / (kPi * kPi)},
          {"peak", {{"f", c.peak.f},
                    {"probability", c.peak.probability},
                    {"in_ansatz", c.peak.in_ansatz},
                    {"outcomes", c.peak.outcomes}}},
          {"estimates", estimates}};
}

nlohmann::json to_json(const PswReport& r) {
  return {{"N", r.n},
          {"epsilon", r.epsilon},
          {"delta", r.delta},
          {"l", r.l},
          {"Q_exponent", r.exponent},
          {"Q", r.q},
          {"t_N", r.t_exact},
          {"t_tilde", r.t_tilde},
          {"dt_observed", r.dt_observed},
          {"dt_exp", r.dt_exp},
          {"dt_th", r.dt_th},
          {"dt_exp_below_th", r.dt_exp_below_th},
          {"psw_lower", r.psw_lower},
          {"psw_upper", r.psw_upper},
          {"runtime_exponent", r.runtime_exponent},
          {"informational", true}};
}

std::string psw_csv_header() { return "N,t_N,t_tilde,dt_exp,dt_th,psw_lower,psw_upper,Q,epsilon,delta"; }

std::string psw_csv_row(const PswReport& r) {
  return fmt::format("{},{},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{},{:.10g},{:.10g}", r.n, r.t_exact, r.t_tilde,
                     r.dt_exp, r.dt_th, r.psw_lower, r.psw_upper, r.q, r.epsilon, r.delta);
}

}  // namespace qcarm::carmichael
