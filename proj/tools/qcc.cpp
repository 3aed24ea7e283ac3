// Command-line front end: solve, verify, round, exponent, chernoff.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcc/divergence.hpp"
#include "qcc/harness.hpp"
#include "qcc/io.hpp"
#include "qcc/programs.hpp"
#include "qcc/report.hpp"
#include "qcc/rounding.hpp"

namespace {

using namespace qcc;

enum Exit { kPass = 0, kCheckFailed = 1, kInputError = 2, kSolverError = 3 };

struct ChannelArgs {
  std::string file;
  std::string zoo;

  void attach(CLI::App* app) {
    auto* f = app->add_option("--channel", file, "channel JSON file (Kraus or POVM spec)");
    auto* z = app->add_option("--zoo", zoo, "built-in channel, e.g. 'depolarizing(2,0.5)'");
    f->excludes(z);
  }
  KrausChannel load() const {
    if (!file.empty()) return load_channel(file);
    if (!zoo.empty()) return standard_from_spec(zoo);
    throw InputError("one of --channel or --zoo is required");
  }
};

void emit(const Json& j, const std::string& out) {
  std::cout << j.dump(2) << "\n";
  if (!out.empty()) write_json_file(out, j);
}

CMatrix maximally_mixed(int d) { return identity(d) / static_cast<double>(d); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcc: one-shot channel coding lab"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  double tol = 1e-6;
  std::string out;
  app.add_option("--seed", seed, "base seed for Monte Carlo and random corpora")->envname("QCC_SEED");
  app.add_option("--tol", tol, "check tolerance reported with every row")->envname("QCC_TOL")->check(
      CLI::PositiveNumber);
  app.add_option("--out", out, "also write the JSON result to this file");

  // solve
  auto* solve = app.add_subcommand("solve", "solve one program and print its record");
  std::string program;
  ChannelArgs solve_ch;
  int M = 2;
  std::string rho_file, sigma_file;
  double eps = 0.0;
  double gap_tol = 1e-7;
  solve->add_option("program", program, "ns | mc | ns-fixed | mc-fixed | mc-dual | dh")
      ->required()
      ->check(CLI::IsMember({"ns", "mc", "ns-fixed", "mc-fixed", "mc-dual", "dh"}));
  solve_ch.attach(solve);
  solve->add_option("--M", M, "code size")->check(CLI::PositiveNumber);
  solve->add_option("--rho", rho_file, "input state file (fixed-state programs, dh)");
  solve->add_option("--sigma", sigma_file, "alternative state file (dh)");
  solve->add_option("--eps", eps, "type-I error (dh)")->check(CLI::Range(0.0, 1.0));
  solve->add_option("--gap-tol", gap_tol, "solver duality gap target")->check(CLI::PositiveNumber);

  // verify
  auto* verify = app.add_subcommand("verify", "run the invariant suite over a corpus");
  SuiteConfig cfg;
  bool default_corpus = false;
  verify->add_option("--zoo", cfg.zoo, "built-in channels to include");
  verify->add_flag("--default-corpus", default_corpus, "include the built-in corpus");
  verify->add_option("--random", cfg.random_count, "number of random channels")->check(CLI::NonNegativeNumber);
  verify->add_option("--dim-in", cfg.random_dim_in, "input dimension of random channels");
  verify->add_option("--dim-out", cfg.random_dim_out, "output dimension of random channels");
  verify->add_option("--M", cfg.M_list, "code sizes");
  verify->add_option("--Mprime", cfg.M_prime_list, "position-based sizes M'");
  verify->add_option("--checks", cfg.checks, "sandwich floor gap lift qc hn");
  verify->add_option("--out-dir", cfg.output_dir, "write suite.json and suite.csv here");

  // round
  auto* round = app.add_subcommand("round", "simulate a coding protocol built from an NS solution");
  std::string protocol;
  ChannelArgs round_ch;
  int M_prime = 1;
  double c = 1.0;
  MultiplicativeOptions mult;
  bool csv = false;
  round->add_option("protocol", protocol, "qc | hn | mult")->required()->check(CLI::IsMember({"qc", "hn", "mult"}));
  round_ch.attach(round);
  round->add_option("--M", M, "code size of the NS program")->check(CLI::PositiveNumber);
  round->add_option("--Mprime", M_prime, "number of messages (qc, hn)")->check(CLI::PositiveNumber);
  round->add_option("--c", c, "trade-off parameter (hn)")->check(CLI::PositiveNumber);
  round->add_option("--samples", mult.samples, "Monte Carlo samples (mult)")->check(CLI::PositiveNumber);
  round->add_option("--rho", rho_file, "input state (mult; default maximally mixed)");
  round->add_flag("--csv", csv, "print a CSV row instead of JSON");

  // exponent
  auto* exponent = app.add_subcommand("exponent", "strong converse exponent curve as CSV");
  ChannelArgs exp_ch;
  std::vector<double> rates{0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
  std::vector<double> alphas;
  exp_ch.attach(exponent);
  exponent->add_option("--rates", rates, "rates in nats");
  exponent->add_option("--alphas", alphas, "α grid (default: 0 and 40 log-spaced points in [0.02, 50])");

  // chernoff
  auto* chernoff = app.add_subcommand("chernoff", "matrix Chernoff tail check on the decoder family");
  ChannelArgs ch_ch;
  int trials = 10000;
  double delta = -1.0;
  ch_ch.attach(chernoff);
  chernoff->add_option("--M", M, "code size")->check(CLI::PositiveNumber);
  chernoff->add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  chernoff->add_option("--delta", delta, "deviation (default: the union-bound threshold)");
  chernoff->add_option("--rho", rho_file, "input state (default maximally mixed)");

  // Global options may follow the subcommand.
  for (auto* sub : {solve, verify, round, exponent, chernoff}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (solve->parsed()) {
      SolverOptions so;
      so.gap_tol = gap_tol;
      if (program == "dh") {
        if (rho_file.empty() || sigma_file.empty()) throw InputError("dh needs --rho and --sigma");
        emit(hypothesis_record(eps, hypothesis_test_value(load_state(rho_file), load_state(sigma_file), eps, so)),
             out);
        return kPass;
      }
      const KrausChannel ch = solve_ch.load();
      const ChoiMatrix J = choi_of(ch);
      auto state = [&] { return rho_file.empty() ? maximally_mixed(ch.dim_in) : load_state(rho_file); };
      if (program == "ns") emit(solution_record(ns_success(J, M, so)), out);
      if (program == "mc") emit(solution_record(mc_success(J, M, so)), out);
      if (program == "ns-fixed") emit(solution_record(ns_success_fixed(J, M, state(), so)), out);
      if (program == "mc-fixed") emit(solution_record(mc_success_fixed(J, M, state(), so)), out);
      if (program == "mc-dual") emit(dual_record(ch.name, M, mc_success_dual_fixed(J, M, state(), so)), out);
      return kPass;
    }

    if (verify->parsed()) {
      if (default_corpus) {
        auto zoo = default_zoo_specs();
        zoo.insert(zoo.end(), cfg.zoo.begin(), cfg.zoo.end());
        cfg.zoo = zoo;
      }
      cfg.seed = seed;
      cfg.tol.sandwich = tol;
      const SuiteReport rep = run_verify(cfg);
      std::cout << suite_to_csv(rep);
      std::cerr << rep.passed << " passed, " << rep.failed << " failed\n";
      if (!out.empty()) write_json_file(out, suite_to_json(rep));
      return rep.exit_status();
    }

    if (round->parsed()) {
      const KrausChannel ch = round_ch.load();
      const ChoiMatrix J = choi_of(ch);
      ProtocolReport rep;
      if (protocol == "qc") {
        rep = qc_sequential_protocol(J, ns_success(J, M), M_prime);
      } else if (protocol == "hn") {
        rep = hn_protocol(J, ns_success(J, M), M_prime, c);
      } else {
        const CMatrix rho = rho_file.empty() ? maximally_mixed(ch.dim_in) : load_state(rho_file);
        mult.seed = seed;
        rep = multiplicative_protocol(ch, J, ns_success_fixed(J, M, rho), mult);
      }
      if (csv) {
        std::cout << protocol_csv_header() << "\n" << protocol_csv_row(rep, tol) << "\n";
        if (!out.empty()) write_json_file(out, protocol_to_json(rep, tol));
      } else {
        emit(protocol_to_json(rep, tol), out);
      }
      if (!rep.diagnostic.empty()) std::cerr << rep.diagnostic << "\n";
      return rep.pass ? kPass : kCheckFailed;
    }

    if (exponent->parsed()) {
      const KrausChannel ch = exp_ch.load();
      MutualInfoOptions mo;
      mo.seed = seed;
      ExponentTable t = run_exponent(ch, rates, alphas.empty() ? exponent_alpha_grid() : alphas, mo);
      t.tol = tol;
      std::cout << exponent_to_csv(t);
      if (!out.empty()) write_json_file(out, exponent_to_json(t));
      for (const auto& r : t.rows)
        if (!r.converse_pass) return kCheckFailed;
      return kPass;
    }

    if (chernoff->parsed()) {
      const KrausChannel ch = ch_ch.load();
      const ChoiMatrix J = choi_of(ch);
      const CMatrix rho = rho_file.empty() ? maximally_mixed(ch.dim_in) : load_state(rho_file);
      const MultiplicativeCode code(J, ns_success_fixed(J, M, rho));
      const ChernoffFamily family = multiplicative_family(code, M);
      const double mu = max_eigenvalue(static_cast<double>(M) * family.mean);
      const double d = delta >= 0.0 ? delta : std::max(0.0, event_delta(code, M, mu));
      const ChernoffReport rep = matrix_chernoff_check(family, d, trials, seed);
      emit(chernoff_to_json(rep), out);
      return rep.pass ? kPass : kCheckFailed;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolverError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverError;
  }
  return kPass;
}
