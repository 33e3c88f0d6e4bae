#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qcarm/errors.hpp"

namespace qcarm::cli {

namespace {

using carmichael::Mode;
using carmichael::VerdictKind;
using nlohmann::json;

constexpr double kPi = std::numbers::pi;

std::string num(double x) { return fmt::format("{:.10g}", x); }

std::string factorization_string(const nt::Factorization& f) {
  std::string s;
  for (const auto& [p, e] : f.factors) {
    if (!s.empty()) s += '*';
    s += e > 1 ? fmt::format("{}^{}", p, e) : fmt::format("{}", p);
  }
  return s;
}

std::string join(const std::vector<std::size_t>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(v[i]);
  return s;
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// ---- facts

void facts(const RunConfig& cfg, std::ostream& out) {
  const auto f = nt::number_facts(cfg.n);
  switch (cfg.output) {
    case Output::Json: {
      json factors = json::array();
      for (const auto& pp : f.factorization.factors) factors.push_back({pp.prime, pp.exponent});
      emit_json(out, {{"k", f.k},
                      {"factorization", factors},
                      {"phi", f.phi},
                      {"F", f.f_count},
                      {"t_k", f.t_k},
                      {"mr_witnesses", f.mr_witnesses ? json(*f.mr_witnesses) : json(nullptr)},
                      {"classification", nt::to_string(f.classification)}});
      break;
    }
    case Output::Csv:
      out << "k,factorization,phi,F,t_k,mr_witnesses,classification\n"
          << fmt::format("{},{},{},{},{},{},{}\n", f.k, factorization_string(f.factorization), f.phi, f.f_count, f.t_k,
                         f.mr_witnesses ? std::to_string(*f.mr_witnesses) : "", nt::to_string(f.classification));
      break;
    case Output::Text:
      out << fmt::format("k               {}\n", f.k) << fmt::format("factorization   {}\n", factorization_string(f.factorization))
          << fmt::format("phi             {}\n", f.phi) << fmt::format("F               {}\n", f.f_count)
          << fmt::format("t_k             {}\n", f.t_k)
          << fmt::format("mr_witnesses    {}\n", f.mr_witnesses ? std::to_string(*f.mr_witnesses) : "n/a")
          << fmt::format("classification  {}\n", nt::to_string(f.classification));
      break;
  }
}

// ---- certify

void certify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.reps < 1) throw DomainError("certify: reps must be >= 1");
  const auto analysis = carmichael::analyze_certification(cfg.n, cfg.p, cfg.r);
  std::vector<carmichael::Verdict> verdicts;
  for (std::size_t i = 0; i < cfg.reps; ++i) verdicts.push_back(carmichael::draw_verdict(analysis, cfg.mode, cfg.seed, i));

  const auto not_carmichael = std::size_t(std::count_if(
      verdicts.begin(), verdicts.end(), [](const auto& v) { return v.kind == VerdictKind::NotCarmichael; }));
  // ties go to NotCarmichael: a nonzero ancilla is a certificate
  const auto majority = 2 * not_carmichael >= cfg.reps ? VerdictKind::NotCarmichael : VerdictKind::ProbablyCarmichael;

  switch (cfg.output) {
    case Output::Json: {
      json runs = json::array();
      for (const auto& v : verdicts) runs.push_back(carmichael::to_json(v));
      json j = {{"k", cfg.n},
                {"P", cfg.p},
                {"R", cfg.r},
                {"mode", carmichael::to_string(cfg.mode)},
                {"seed", cfg.seed},
                {"reps", cfg.reps},
                {"majority", carmichael::to_string(majority)},
                {"not_carmichael_runs", not_carmichael},
                {"probably_carmichael_runs", cfg.reps - not_carmichael},
                {"verdicts", runs}};
      if (cfg.mode == Mode::Exact)
        j["analysis"] = {{"phi", analysis.phi},
                         {"t_k", analysis.t_k},
                         {"flag_probability", analysis.flag_probability},
                         {"allzero_conditional", analysis.allzero_conditional},
                         {"allzero_unconditional", analysis.allzero_unconditional},
                         {"alpha_2R", analysis.alpha_2r}};
      emit_json(out, j);
      break;
    }
    case Output::Csv:
      out << "run,kind,observed_ancillas,flag_retries,grover_applications,error_bound\n";
      for (std::size_t i = 0; i < verdicts.size(); ++i) {
        const auto& v = verdicts[i];
        out << fmt::format("{},{},{},{},{},{}\n", i, carmichael::to_string(v.kind), join(v.observed_ancillas, ' '),
                           v.flag_retries, v.grover_applications, num(v.error_bound));
      }
      break;
    case Output::Text: {
      out << fmt::format("certify k={} P={} R={} mode={} seed={} reps={}\n", cfg.n, cfg.p, cfg.r,
                         carmichael::to_string(cfg.mode), cfg.seed, cfg.reps);
      if (cfg.mode == Mode::Exact)
        out << fmt::format("  P(flag=1) {}   P(all zeros | flag=1) {}   P(all zeros) {}   alpha^2R {}\n",
                           num(analysis.flag_probability), num(analysis.allzero_conditional),
                           num(analysis.allzero_unconditional), num(analysis.alpha_2r));
      out << fmt::format("  {:>5}  {:<18}  {:<12}  {:>7}  {:>6}  {}\n", "run", "verdict", "ancillas", "retries", "grover",
                         "error_bound");
      for (std::size_t i = 0; i < verdicts.size(); ++i) {
        const auto& v = verdicts[i];
        out << fmt::format("  {:>5}  {:<18}  {:<12}  {:>7}  {:>6}  {}\n", i, carmichael::to_string(v.kind),
                           join(v.observed_ancillas, ' '), v.flag_retries, v.grover_applications, num(v.error_bound));
      }
      out << fmt::format("majority: {} ({} of {} runs NotCarmichael)\n", carmichael::to_string(majority), not_carmichael,
                         cfg.reps);
      break;
    }
  }
}

// ---- COUNT-based commands

void estimates_csv(std::ostream& out, const std::vector<counting::CountEstimate>& est) {
  out << "run,l,f_tilde,theta_tilde,t_tilde,bound,in_ansatz\n";
  for (std::size_t i = 0; i < est.size(); ++i) {
    const auto& e = est[i];
    out << fmt::format("{},{},{},{},{},{},{}\n", i, e.measured_l, num(e.f_tilde), num(e.theta_tilde), num(e.t_tilde),
                       num(e.error_bound), e.in_ansatz ? 1 : 0);
  }
}

void estimates_text(std::ostream& out, const std::vector<counting::CountEstimate>& est) {
  std::map<std::size_t, std::pair<std::size_t, double>> hist;  // l -> (runs, t_tilde)
  for (const auto& e : est) {
    auto& [runs, t] = hist[e.measured_l];
    ++runs;
    t = e.t_tilde;
  }
  out << fmt::format("  {:>5}  {:>6}  {:>14}\n", "l", "runs", "t_tilde");
  for (const auto& [l, row] : hist) out << fmt::format("  {:>5}  {:>6}  {:>14}\n", l, row.first, num(row.second));
}

double success_fraction(const std::vector<counting::CountEstimate>& est, double t) {
  if (est.empty()) return 0.0;
  return double(std::count_if(est.begin(), est.end(), [t](const auto& e) { return e.within_bound(t); })) /
         double(est.size());
}

void count_bases(const RunConfig& cfg, std::ostream& out) {
  const auto f = nt::number_facts(cfg.n, 0);
  if (f.classification == nt::Classification::Prime) throw PreconditionError("count-bases: k must be composite");
  const auto est = carmichael::count_nonpseudo_bases(cfg.n, cfg.p, cfg.seed, cfg.reps);
  const double t = double(f.t_k);
  const double bound = counting::error_bound(double(cfg.n), cfg.p, t);
  const double frac = success_fraction(est, t);

  switch (cfg.output) {
    case Output::Json: {
      json rows = json::array();
      for (const auto& e : est) rows.push_back(counting::to_json(e));
      emit_json(out, {{"k", cfg.n},
                      {"P", cfg.p},
                      {"seed", cfg.seed},
                      {"reps", cfg.reps},
                      {"t_exact", f.t_k},
                      {"bound", bound},
                      {"success_fraction", frac},
                      {"estimates", rows}});
      break;
    }
    case Output::Csv:
      estimates_csv(out, est);
      break;
    case Output::Text:
      out << fmt::format("count-bases k={} P={} seed={} reps={}\n", cfg.n, cfg.p, cfg.seed, cfg.reps)
          << fmt::format("  t_k (exact) {}   bound {}   within bound {}\n", f.t_k, num(bound), num(frac));
      estimates_text(out, est);
      break;
  }
}

void count_carmichael(const RunConfig& cfg, std::ostream& out) {
  const auto c = carmichael::count_carmichaels_quantum(cfg.n, cfg.q, cfg.seed, cfg.reps);
  switch (cfg.output) {
    case Output::Json:
      emit_json(out, carmichael::to_json(c));
      break;
    case Output::Csv:
      estimates_csv(out, c.estimates);
      break;
    case Output::Text:
      out << fmt::format("count-carmichael N={} Q={} seed={} reps={}\n", c.n, c.q, cfg.seed, cfg.reps)
          << fmt::format("  t_N (exact) {}   bound {}   f {}\n", c.t_exact, num(c.bound), num(c.peak.f))
          << fmt::format("  within bound {}   (8/pi^2 = {})   peak probability {}\n", num(c.success_fraction),
                         num(8.0 / (kPi * kPi)), num(c.peak.probability));
      estimates_text(out, c.estimates);
      break;
  }
}

void psw(const RunConfig& cfg, std::ostream& out) {
  const auto r = carmichael::psw_check(cfg.n, cfg.epsilon, cfg.delta, carmichael::QPolicy{}, cfg.seed, cfg.reps);
  switch (cfg.output) {
    case Output::Json:
      emit_json(out, carmichael::to_json(r));
      break;
    case Output::Csv:
      out << carmichael::psw_csv_header() << '\n' << carmichael::psw_csv_row(r) << '\n';
      break;
    case Output::Text:
      out << fmt::format("psw N={} eps={} delta={} (informational; asymptotics not expected at this N)\n", r.n,
                         num(r.epsilon), num(r.delta))
          << fmt::format("  l(N)          {}\n", num(r.l)) << fmt::format("  Q             {} (= ceil(l^{}))\n", r.q, num(r.exponent))
          << fmt::format("  t_N           {}\n", r.t_exact) << fmt::format("  t_tilde       {}\n", num(r.t_tilde))
          << fmt::format("  |dt| exp      {}\n", num(r.dt_exp)) << fmt::format("  |dt| th       {}\n", num(r.dt_th))
          << fmt::format("  exp < th      {}\n", r.dt_exp_below_th ? "yes" : "no")
          << fmt::format("  PSW lower     {}\n", num(r.psw_lower)) << fmt::format("  PSW upper     {}\n", num(r.psw_upper))
          << fmt::format("  runtime exp   {}\n", num(r.runtime_exponent));
      break;
  }
}

void bounds(const RunConfig& cfg, std::ostream& out) {
  const auto b = carmichael::section_iv_bounds(cfg.n, cfg.p);
  switch (cfg.output) {
    case Output::Json:
      emit_json(out, carmichael::to_json(b, cfg.per_k));
      break;
    case Output::Csv:
      if (cfg.per_k) {
        out << "k,prime,carmichael,g,beta,alpha,sin_phi\n";
        for (const auto& k : b.per_k)
          out << fmt::format("{},{},{},{},{},{},{}\n", k.k, k.prime ? 1 : 0, k.carmichael ? 1 : 0, num(k.g), num(k.beta),
                             num(k.alpha), num(k.sin_phi));
      } else {
        out << "N,P,E_norm_sq,E_norm_bound,phi_norm,max_beta_composite,beta_composite_limit,primes_beta_one\n"
            << fmt::format("{},{},{},{},{},{},{},{}\n", b.n, b.p, num(b.e_norm_sq), num(b.e_norm_bound), num(b.phi_norm),
                           num(b.max_beta_composite), num(b.beta_composite_limit), b.primes_beta_one ? 1 : 0);
      }
      break;
    case Output::Text:
      out << fmt::format("bounds N={} P={}\n", b.n, b.p)
          << fmt::format("  E_norm_sq           {}\n", num(b.e_norm_sq))
          << fmt::format("  4 pi^2 / (3 P^2)    {}   {}\n", num(b.e_norm_bound), b.e_norm_within_bound() ? "ok" : "EXCEEDED")
          << fmt::format("  beta (primes) = 1   {}\n", b.primes_beta_one ? "yes" : "no")
          << fmt::format("  max |beta| (comp.)  {}\n", num(b.max_beta_composite))
          << fmt::format("  2 / (sqrt3 P)       {}   {}\n", num(b.beta_composite_limit),
                         b.beta_composite_within_limit() ? "ok" : "EXCEEDED")
          << fmt::format("  phi_norm            {}   (6/pi^2 = {}, pi^2/6 = {})\n", num(b.phi_norm),
                         num(6.0 / (kPi * kPi)), num(kPi * kPi / 6.0));
      break;
  }
}

void enumerate(const RunConfig& cfg, std::ostream& out) {
  const auto c = nt::enumerate_carmichaels(cfg.n);
  switch (cfg.output) {
    case Output::Json:
      emit_json(out, {{"N", cfg.n}, {"count", c.size()}, {"carmichaels", c}});
      break;
    case Output::Csv:
      out << "carmichael\n";
      for (auto k : c) out << k << '\n';
      break;
    case Output::Text:
      out << fmt::format("{} Carmichael numbers below {}\n", c.size(), cfg.n);
      for (auto k : c) out << k << '\n';
      break;
  }
}

}  // namespace

void execute(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.command) {
    case Command::Facts:
      return facts(cfg, out);
    case Command::Certify:
      return certify(cfg, out);
    case Command::CountBases:
      return count_bases(cfg, out);
    case Command::CountCarmichael:
      return count_carmichael(cfg, out);
    case Command::Psw:
      return psw(cfg, out);
    case Command::Bounds:
      return bounds(cfg, out);
    case Command::Enumerate:
      return enumerate(cfg, out);
  }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    // render fully before touching the destination so failures leave no partial file
    std::ostringstream buffer;
    execute(cfg, buffer);
    if (cfg.out_path) {
      std::ofstream file(*cfg.out_path, std::ios::binary);
      if (!(file << buffer.str())) {
        err << "error: cannot write " << *cfg.out_path << '\n';
        return 1;
      }
    } else {
      out << buffer.str();
    }
    return kExitOk;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const PreconditionError& e) {
    err << "precondition error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

std::variant<RunConfig, int> parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum Carmichael certification and counting experiments"};
  app.require_subcommand(1);
  RunConfig cfg;

  const std::map<std::string, Mode> modes{{"exact", Mode::Exact}, {"sample", Mode::Sample}};
  const std::map<std::string, Output> outputs{{"json", Output::Json}, {"csv", Output::Csv}, {"text", Output::Text}};
  std::string out_path;

  struct Sub {
    const char* name;
    const char* help;
    Command command;
    const char* arg;
  };
  const Sub subs[] = {
      {"facts", "Classical facts about k", Command::Facts, "k"},
      {"certify", "Quantum certification of composite k", Command::Certify, "k"},
      {"count-bases", "COUNT the non-pseudoprime coprime bases of k", Command::CountBases, "k"},
      {"count-carmichael", "COUNT the Carmichael numbers below N", Command::CountCarmichael, "N"},
      {"psw", "Informational comparison against the PSW density bounds", Command::Psw, "N"},
      {"bounds", "Leakage factors and correction-norm budget for k < N", Command::Bounds, "N"},
      {"enumerate", "List Carmichael numbers below N", Command::Enumerate, "N"},
  };
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option(s.arg, cfg.n)->required();
    sub->add_option("--seed", cfg.seed, "Base seed (run i uses stream (seed, i))")->capture_default_str();
    sub->add_option("--output", cfg.output, "json | csv | text")
        ->transform(CLI::CheckedTransformer(outputs, CLI::ignore_case))
        ->capture_default_str();
    sub->add_option("--out", out_path, "Write the report to this file");
    switch (s.command) {
      case Command::Certify:
        sub->add_option("--P", cfg.p, "Ancilla register size")->capture_default_str();
        sub->add_option("--R", cfg.r, "Number of ancilla registers")->capture_default_str();
        sub->add_option("--mode", cfg.mode, "exact | sample")
            ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case))
            ->capture_default_str();
        sub->add_option("--reps", cfg.reps, "Independent runs (majority verdict)")->capture_default_str();
        break;
      case Command::CountBases:
        sub->add_option("--P", cfg.p, "Count register size")->capture_default_str();
        sub->add_option("--reps", cfg.reps, "Seeded COUNT runs")->capture_default_str();
        break;
      case Command::CountCarmichael:
        sub->add_option("--Q", cfg.q, "Count register size")->capture_default_str();
        sub->add_option("--reps", cfg.reps, "Seeded COUNT runs")->capture_default_str();
        break;
      case Command::Psw:
        sub->add_option("--eps", cfg.epsilon, "epsilon")->capture_default_str();
        sub->add_option("--delta", cfg.delta, "delta")->capture_default_str();
        sub->add_option("--reps", cfg.reps, "Seeded COUNT runs")->capture_default_str();
        break;
      case Command::Bounds:
        sub->add_option("--P", cfg.p, "Register size for the leakage factors")->capture_default_str();
        sub->add_flag("--per-k", cfg.per_k, "Include the per-k table (json, csv)");
        break;
      default:
        break;
    }
    sub->callback([&cfg, c = s.command] { cfg.command = c; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitDomain;
  }
  if (!out_path.empty()) cfg.out_path = out_path;
  return cfg;
}

}  // namespace qcarm::cli
