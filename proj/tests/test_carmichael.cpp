#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qcarm/carmichael.hpp"
#include "qcarm/errors.hpp"

using namespace qcarm;
using namespace qcarm::carmichael;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("alpha and spectral position") {
  CHECK(spectral_position(4, 15, 16) == doctest::Approx(2.7636382540153805).epsilon(1e-12));
  CHECK(alpha_k(15, 16) == doctest::Approx(0.08183741194207726).epsilon(1e-12));
  CHECK(alpha_k(561, 16) == 1.0);
  CHECK_THROWS_AS(alpha_k(13, 16), PreconditionError);
  // k = 25: t = 20 - 4 = 16, sin^2 theta = 16/25, P = 8 gives f = 8 asin(4/5)/pi
  const double f25 = 8 * std::asin(0.8) / kPi;
  CHECK(alpha_k(25, 8) == doctest::Approx(std::sin(kPi * f25) / (8 * std::sin(kPi * f25 / 8))));
}

TEST_CASE("flag probability is phi(k)/k in lowest terms") {
  CHECK(flag_probability(561) == Rational{320, 561});
  CHECK(flag_probability(15) == Rational{8, 15});
  CHECK(flag_probability(12) == Rational{1, 3});
  CHECK(flag_probability(15).value() == doctest::Approx(8.0 / 15));
}

TEST_CASE("recommended ancilla size") {
  CHECK(recommended_ancilla_size(15) >= 4);
  for (u64 k : {15, 25, 91, 561, 1001}) {
    const auto p = recommended_ancilla_size(k);
    const double phi = double(nt::euler_phi(nt::factorize(k)));
    REQUIRE(spectral_position(phi / 2, double(k), p) > 1.0);
  }
}

TEST_CASE("certification analysis matches the frozen oracle") {
  struct Row {
    u64 k;
    std::size_t p, r;
    double flag, cond, uncond;
  };
  const Row rows[] = {
      {15, 16, 1, 0.6837355292891893, 0.006411835046145733, 0.006697361993377221},
      {15, 16, 2, 0.6827813809792873, 5.7555917755402965e-05, 4.485465767033375e-05},
      {25, 8, 2, 0.7246981848689198, 0.0005399157541860041, 0.0004026794978613269},
      {25, 16, 1, 0.7191780694078014, 0.0038240247704608506, 0.003573123405360098},
      {105, 16, 1, 0.6131288650906763, 2.124460712969063e-05, 5.847916108412825e-05},
  };
  for (const auto& row : rows) {
    CAPTURE(row.k);
    CAPTURE(row.r);
    const auto a = analyze_certification(row.k, row.p, row.r);
    CHECK(a.flag_probability == doctest::Approx(row.flag).epsilon(1e-10));
    CHECK(a.allzero_conditional == doctest::Approx(row.cond).epsilon(1e-9));
    CHECK(a.allzero_unconditional == doctest::Approx(row.uncond).epsilon(1e-9));
    // the flag-marginal probability is exactly alpha^{2R}
    CHECK(a.allzero_unconditional == doctest::Approx(a.alpha_2r).epsilon(1e-10));
    CHECK(a.grover_per_attempt == row.r * (row.p - 1));
  }
  CHECK(allzero_probability(25, 8, 2) <= std::pow(std::sqrt(2.0) / 8, 4));
}

TEST_CASE("carmichael inputs always read all zeros") {
  const auto a = analyze_certification(561, 8, 1);
  CHECK(a.carmichael);
  CHECK(a.allzero_conditional == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(a.flag_probability == doctest::Approx(320.0 / 561).epsilon(1e-10));
  for (std::uint64_t run = 0; run < 20; ++run) {
    const auto v = draw_verdict(a, Mode::Exact, 42, run);
    REQUIRE(v.kind == VerdictKind::ProbablyCarmichael);
    REQUIRE(v.error_bound == 0.0);
    REQUIRE(v.observed_ancillas == std::vector<std::size_t>{0});
  }
}

TEST_CASE("certify") {
  const auto v = certify(15, 16, 1, Mode::Exact, 42);
  CHECK(v.kind == VerdictKind::NotCarmichael);
  CHECK(v.observed_ancillas.size() == 1);
  CHECK(v.observed_ancillas[0] != 0);
  CHECK(v.grover_applications == 15 * (v.flag_retries + 1));
  REQUIRE(v.flag_probability.has_value());
  CHECK(v.allzero_conditional.has_value());

  const auto s = certify(15, 16, 1, Mode::Sample, 42);
  CHECK_FALSE(s.flag_probability.has_value());
  CHECK(s.observed_ancillas == v.observed_ancillas);  // same stream, same draw

  const auto j = to_json(v);
  CHECK(j["kind"] == "NotCarmichael");
  CHECK(j.contains("allzero_conditional"));

  CHECK_THROWS_AS(certify(13, 16, 1, Mode::Exact, 1), PreconditionError);
  CHECK_THROWS_AS(certify(3, 16, 1, Mode::Exact, 1), PreconditionError);
  CHECK_THROWS_AS(certify(15, 1, 1, Mode::Exact, 1), DomainError);
  CHECK_THROWS_AS(certify(15, 16, 0, Mode::Exact, 1), DomainError);
  CHECK_THROWS_AS(certify(1001, 64, 3, Mode::Exact, 1), CapacityError);
}

TEST_CASE("repeated certification is reproducible") {
  const auto a = certify_repeated(25, 8, 1, Mode::Exact, 7, 50);
  const auto b = certify_repeated(25, 8, 1, Mode::Exact, 7, 50);
  REQUIRE(a.size() == 50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].observed_ancillas == b[i].observed_ancillas);
    CHECK(a[i].flag_retries == b[i].flag_retries);
  }
  const auto single = certify(25, 8, 1, Mode::Exact, 7, 3);
  CHECK(single.observed_ancillas == a[3].observed_ancillas);
}

TEST_CASE("gap error bound covers every non-Carmichael k") {
  for (u64 k = 4; k < 400; ++k) {
    if (nt::is_prime(k) || nt::is_carmichael(k)) continue;
    for (std::size_t r : {1, 2}) {
      const auto a = analyze_certification(k, 8, r);
      REQUIRE(a.allzero_unconditional <= gap_error_bound(k, 8, r) + 1e-12);
    }
  }
}

TEST_CASE("count_nonpseudo_bases") {
  const auto est = count_nonpseudo_bases(15, 16, 42, 100);
  REQUIRE(est.size() == 100);
  const auto hits = std::count_if(est.begin(), est.end(), [](const auto& e) { return e.within_bound(4.0); });
  CHECK(double(hits) / 100 >= 8.0 / (kPi * kPi));
  for (const auto& e : count_nonpseudo_bases(561, 16, 3, 20)) CHECK(e.measured_l == 0);
}

TEST_CASE("bounds over k < N") {
  const auto b = section_iv_bounds(10000, 64);
  CHECK(b.per_k.size() == 9998);
  CHECK(b.e_norm_sq == doctest::Approx(0.0004329668495959594).epsilon(1e-9));
  CHECK(b.e_norm_bound == doctest::Approx(4 * kPi * kPi / (3 * 64.0 * 64.0)));
  CHECK(b.e_norm_within_bound());
  CHECK(b.primes_beta_one);
  // witness fraction 2/3 at k = 6 and 9 pushes |beta| just past 2/(sqrt(3) P)
  CHECK_FALSE(b.beta_composite_within_limit());
  for (const auto& kb : b.per_k) {
    const bool over = !kb.prime && std::abs(kb.beta) > b.beta_composite_limit;
    REQUIRE(over == (kb.k == 6 || kb.k == 9));
  }
  CHECK(section_iv_bounds(10000, 16).beta_composite_within_limit());

  // per-k fields against brute force
  for (const auto& kb : b.per_k) {
    if (kb.k > 300) break;
    REQUIRE(kb.prime == oracle::trial_prime(kb.k));
    REQUIRE(kb.phi == oracle::coprime_count(kb.k));
    if (!kb.prime && kb.k % 2 == 1) REQUIRE(kb.witnesses == oracle::strong_witnesses(kb.k));
    if (!kb.prime && kb.k % 2 == 0) REQUIRE(kb.witnesses == kb.k - 1 - oracle::fermat_liars(kb.k));
    REQUIRE(kb.carmichael == oracle::definitional_carmichael(kb.k));
  }
  CHECK_THROWS_AS(section_iv_bounds(300000, 64), CapacityError);
  CHECK_THROWS_AS(section_iv_bounds(100, 2), DomainError);

  const auto j = to_json(b, true);
  CHECK(j["per_k"].size() == 9998);
  CHECK_FALSE(to_json(b).contains("per_k"));
}

TEST_CASE("phi norm") {
  CHECK(phi_norm(100000) == doctest::Approx(0.6079286265280874).epsilon(1e-12));
  CHECK(phi_norm(1) == 1.0);
  CHECK(std::abs(phi_norm(100000) - 6 / (kPi * kPi)) < 1e-3);
}

TEST_CASE("quantum Carmichael count") {
  const auto c = count_carmichaels_quantum(10000, 128, 42, 100);
  CHECK(c.t_exact == 7);
  CHECK(c.bound == doctest::Approx(19.011229845690019).epsilon(1e-12));
  CHECK(c.peak.probability == doctest::Approx(0.9891470553214472).epsilon(1e-10));
  CHECK(c.success_fraction >= 8.0 / (kPi * kPi));
  CHECK_THROWS_AS(count_carmichaels_quantum(1'000'000, 128, 1, 1), CapacityError);
}

TEST_CASE("psw check") {
  const auto r = psw_check(10000, 0.1, 0.1, QPolicy{}, 42, 50);
  CHECK(r.l == doctest::Approx(nt::psw_l(10000.0)));
  CHECK(r.exponent == doctest::Approx(1.0 + 0.05 + 0.1 + 0.05));
  CHECK(r.q == std::size_t(std::ceil(std::pow(r.l, r.exponent))));
  CHECK(r.t_exact == 7);
  CHECK(r.psw_lower == doctest::Approx(9.6004694862753388).epsilon(1e-12));
  CHECK(r.psw_upper == doctest::Approx(508.97537796385235).epsilon(1e-12));
  CHECK(r.dt_exp == doctest::Approx(counting::error_bound(10000, r.q, 7)));
  CHECK(r.dt_th == doctest::Approx(10000 * std::pow(r.l, -2.2)));

  const auto row = psw_csv_row(r);
  CHECK(row.rfind("10000,7,", 0) == 0);
  const auto header = psw_csv_header();
  CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
}
