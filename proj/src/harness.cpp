#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "qcc/harness.hpp"
#include "qcc/parallel.hpp"
#include "qcc/programs.hpp"
#include "qcc/report.hpp"
#include "qcc/rounding.hpp"

namespace qcc {

std::vector<std::string> default_zoo_specs() {
  return {"identity(2)",
          "identity(3)",
          "depolarizing(2,0.25)",
          "depolarizing(2,0.5)",
          "depolarizing(3,0.3)",
          "dephasing(2,0.3)",
          "amplitude_damping(0.2)",
          "amplitude_damping(0.6)",
          "replacer_mixed(2,2)",
          "replacer_mixed(3,3)",
          "bsc(0.1)",
          "symmetric_classical(3,0.2)",
          "basis_measurement(2)",
          "trine",
          "random_povm(5,2,3)",
          "random_cptp(201,2,3)",
          "random_cptp(202,2,3)",
          "random_cptp(301,3,2)",
          "random_cptp(302,3,2)"};
}

std::vector<CorpusEntry> build_corpus(const std::vector<std::string>& zoo, int random_count, std::uint64_t seed,
                                      int dim_in, int dim_out) {
  if (random_count < 0) throw InputError("corpus: random channel count must be nonnegative");
  std::vector<CorpusEntry> out;
  auto add = [&](KrausChannel ch) {
    const bool classical = has_classical_output(choi_of(ch));
    out.push_back({std::move(ch), classical});
  };
  for (const auto& spec : zoo) add(standard_from_spec(spec));
  for (int i = 0; i < random_count; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    KrausChannel ch = zoo::random_cptp(s, dim_in, dim_out);
    ch.name = "random_cptp(" + std::to_string(s) + "," + std::to_string(dim_in) + "," + std::to_string(dim_out) + ")";
    add(std::move(ch));
  }
  return out;
}

void validate(const SuiteConfig& c) {
  static const std::set<std::string> known{"sandwich", "floor", "gap", "lift", "qc", "hn"};
  for (const auto& k : c.checks)
    if (!known.count(k)) throw InputError("suite: unknown check '" + k + "'");
  for (int M : c.M_list)
    if (M < 1) throw InputError("suite: M values must be positive");
  for (int Mp : c.M_prime_list)
    if (Mp < 1) throw InputError("suite: M' values must be positive");
  const auto& t = c.tol;
  if (!(t.sandwich > 0 && t.exact > 0 && t.bound > 0 && t.gap > 0)) throw InputError("suite: tolerances must be positive");
  if (c.random_count < 0) throw InputError("suite: random channel count must be nonnegative");
}

namespace {

SuiteRow make_row(std::string check, std::string instance, double measured, double bound, double slack, double tol) {
  return {std::move(check), std::move(instance), measured, bound, slack, tol, slack >= -tol};
}

std::string tag(const std::string& channel, int M, int M_prime = 0) {
  std::string s = channel + " M=" + std::to_string(M);
  if (M_prime > 0) s += " M'=" + std::to_string(M_prime);
  return s;
}

std::vector<SuiteRow> rows_for(const CorpusEntry& e, const SuiteConfig& c) {
  const std::set<std::string> on(c.checks.begin(), c.checks.end());
  const auto& t = c.tol;
  const ChoiMatrix J = choi_of(e.channel);
  const std::string& name = e.channel.name;
  std::vector<SuiteRow> rows;
  for (int M : c.M_list) {
    const NsSolution ns = ns_success(J, M);
    NsSolution mc;
    if (on.count("sandwich") || on.count("gap")) mc = mc_success(J, M);
    if (on.count("sandwich")) {
      rows.push_back(make_row("sandwich_upper", tag(name, M), ns.value, mc.value, mc.value - ns.value, t.sandwich));
      const double low = (1.0 - 1.0 / M) * mc.value;
      rows.push_back(make_row("sandwich_lower", tag(name, M), ns.value, low, ns.value - low, t.sandwich));
    }
    if (on.count("floor")) rows.push_back(make_row("floor", tag(name, M), ns.value, 1.0 / M, ns.value - 1.0 / M, t.exact));
    if (on.count("gap")) {
      rows.push_back(make_row("gap_ns", tag(name, M), ns.gap, t.gap, t.gap - ns.gap, 0.0));
      rows.push_back(make_row("gap_mc", tag(name, M), mc.gap, t.gap, t.gap - mc.gap, 0.0));
    }
    if (on.count("lift") && M >= 2) {
      const NsSolution prev = mc_success(J, M - 1);
      const LiftResult lift = mc_to_ns_lift(prev, M, J);
      const double low = (M - 1.0) / M * prev.value;
      rows.push_back(make_row("lift_lower", tag(name, M), lift.ns.value, low, lift.ns.value - low, t.exact));
      rows.push_back(make_row("lift_upper", tag(name, M), lift.ns.value, ns.value, ns.value - lift.ns.value, 1e-7));
    }
    for (int Mp : c.M_prime_list) {
      if (on.count("qc") && e.classical_output && Mp <= 6 && std::pow(J.dim_in, Mp) <= kMaxDenseDim) {
        const auto r = qc_sequential_protocol(J, ns, Mp);
        rows.push_back(make_row("qc_exact", tag(name, M, Mp), r.avg_success, r.bound, -r.max_residual, t.exact));
      }
      if (on.count("hn") && std::pow(J.dim_in, Mp) * J.dim_out <= kMaxDenseDim) {
        const auto r = hn_protocol(J, ns, Mp, 1.0);
        rows.push_back(make_row("hn_error", tag(name, M, Mp), r.avg_error, r.bound, r.bound - r.avg_error, t.bound));
        const double floor = ns.value - 5.0 * std::sqrt(static_cast<double>(Mp) / M);
        rows.push_back(
            make_row("hn_success", tag(name, M, Mp), r.avg_success, floor, r.avg_success - floor, t.bound));
      }
    }
  }
  return rows;
}

}  // namespace

SuiteReport run_verify(const SuiteConfig& config) {
  validate(config);
  const auto corpus = build_corpus(config.zoo, config.random_count, config.seed, config.random_dim_in,
                                   config.random_dim_out);
  const auto per_instance =
      parallel_map(corpus.size(), [&](std::size_t i) { return rows_for(corpus[i], config); });
  SuiteReport rep;
  rep.seed = config.seed;
  for (const auto& rows : per_instance) {
    for (const auto& r : rows) {
      (r.pass ? rep.passed : rep.failed)++;
      rep.rows.push_back(r);
    }
  }
  if (!config.output_dir.empty()) write_suite(rep, config.output_dir);
  return rep;
}

Json suite_to_json(const SuiteReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"check", r.check},
                    {"instance", r.instance},
                    {"measured", r.measured},
                    {"bound", r.bound},
                    {"slack", r.slack},
                    {"tol", r.tol},
                    {"pass", r.pass}});
  }
  return Json{{"rows", rows},
              {"passed", report.passed},
              {"failed", report.failed},
              {"seed", report.seed},
              {"exit_status", report.exit_status()}};
}

std::string suite_to_csv(const SuiteReport& report) {
  std::string out = "check,instance,measured,bound,slack,tol,seed,pass\n";
  for (const auto& r : report.rows) {
    out += csv_line({r.check, r.instance, format_number(r.measured), format_number(r.bound), format_number(r.slack),
                     format_number(r.tol), std::to_string(report.seed), r.pass ? "true" : "false"});
    out += '\n';
  }
  return out;
}

void write_suite(const SuiteReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_json_file(std::filesystem::path(dir) / "suite.json", suite_to_json(report));
  std::ofstream csv(std::filesystem::path(dir) / "suite.csv", std::ios::binary);
  if (!csv) throw InputError("cannot write " + dir + "/suite.csv");
  csv << suite_to_csv(report);
}

int size_for_rate(double r, int n) {
  if (!(r >= 0.0)) throw InputError("rates must be nonnegative");
  const double m = std::exp(n * r);
  if (m > 1e6) throw InputError("rate " + format_number(r) + " gives a code size above 10^6");
  return std::max(2, static_cast<int>(std::llround(m)));
}

ExponentTable run_exponent(const KrausChannel& channel, const std::vector<double>& rates,
                           const std::vector<double>& alphas, const MutualInfoOptions& opts) {
  for (double r : rates)
    if (!(r >= 0.0)) throw InputError("exponent: rates must be nonnegative");
  const ChoiMatrix J = choi_of(channel);
  const ScExponent curve(J, alphas, opts);
  ExponentTable t;
  t.channel = channel.name;
  t.alphas = curve.alphas();
  t.info = curve.info();
  t.info_one = curve.info_one();
  t.seed = opts.seed;

  std::vector<double> conv_alphas, conv_info;
  for (std::size_t i = 0; i < t.alphas.size(); ++i) {
    if (t.alphas[i] <= 0.0) continue;
    conv_alphas.push_back(t.alphas[i]);
    conv_info.push_back(t.info[i]);
  }
  const bool two_copies = std::pow(J.dim_in * J.dim_out, 2) <= 64;
  const KrausChannel doubled = two_copies ? power(channel, 2) : KrausChannel{};
  const ChoiMatrix J2 = two_copies ? choi_of(doubled) : ChoiMatrix{};

  t.rows = parallel_map(rates.size(), [&](std::size_t i) {
    ExponentRow row;
    row.r = rates[i];
    row.exponent = curve(row.r);
    row.M1 = size_for_rate(row.r, 1);
    row.trend_n1 = -std::log(ns_success(J, row.M1).value);
    if (two_copies) {
      row.M2 = size_for_rate(row.r, 2);
      row.trend_n2 = -0.5 * std::log(ns_success(J2, row.M2).value);
    }
    const auto conv = converse_bound_rows(row.M1, mc_success(J, row.M1).value, conv_alphas, conv_info);
    row.converse_pass = conv.pass;
    row.converse_min_slack = conv.rows.empty() ? 0.0 : conv.rows.front().slack;
    for (const auto& c : conv.rows) row.converse_min_slack = std::min(row.converse_min_slack, c.slack);
    return row;
  });
  return t;
}

std::string exponent_to_csv(const ExponentTable& t) {
  std::string out = "channel,r,exponent,M1,trend_n1,M2,trend_n2,converse_min_slack,converse_pass,tol,seed\n";
  for (const auto& r : t.rows) {
    out += csv_line({t.channel, format_number(r.r), format_number(r.exponent), std::to_string(r.M1),
                     format_number(r.trend_n1), std::to_string(r.M2), r.M2 ? format_number(r.trend_n2) : "",
                     format_number(r.converse_min_slack), r.converse_pass ? "true" : "false", format_number(t.tol),
                     std::to_string(t.seed)});
    out += '\n';
  }
  return out;
}

Json exponent_to_json(const ExponentTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json row{{"r", r.r},
             {"exponent", r.exponent},
             {"M1", r.M1},
             {"trend_n1", r.trend_n1},
             {"converse_min_slack", r.converse_min_slack},
             {"converse_pass", r.converse_pass}};
    if (r.M2) {
      row["M2"] = r.M2;
      row["trend_n2"] = r.trend_n2;
    }
    rows.push_back(row);
  }
  return Json{{"channel", t.channel}, {"alphas", t.alphas}, {"info", t.info}, {"info_one", t.info_one},
              {"rows", rows},         {"tol", t.tol},       {"seed", t.seed}};
}

}  // namespace qcc
