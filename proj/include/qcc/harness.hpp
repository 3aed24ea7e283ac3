#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcc/channel.hpp"
#include "qcc/divergence.hpp"
#include "qcc/io.hpp"

namespace qcc {

struct CorpusEntry {
  KrausChannel channel;
  bool classical_output = false;
};

/// Zoo spec strings of the default test corpus (dims ≤ 3).
std::vector<std::string> default_zoo_specs();
/// Builds the corpus from zoo specs plus `random_count` seeded random channels.
std::vector<CorpusEntry> build_corpus(const std::vector<std::string>& zoo, int random_count, std::uint64_t seed,
                                      int dim_in = 2, int dim_out = 2);

struct SuiteTolerances {
  double sandwich = 1e-6;
  double exact = 1e-9;
  double bound = 1e-8;
  double gap = 1e-7;
};

struct SuiteConfig {
  std::vector<std::string> zoo;
  int random_count = 10;
  std::uint64_t seed = 1;
  int random_dim_in = 2;
  int random_dim_out = 2;
  std::vector<int> M_list{2, 4, 8};
  std::vector<int> M_prime_list{1, 2};
  /// Subset of: sandwich, floor, gap, lift, qc, hn.
  std::vector<std::string> checks{"sandwich"};
  SuiteTolerances tol;
  std::string output_dir;
};

/// Throws InputError when the config is unusable.
void validate(const SuiteConfig& config);

struct SuiteRow {
  std::string check;
  std::string instance;
  double measured = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // nonnegative when the row passes, up to tol
  double tol = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::vector<SuiteRow> rows;
  int passed = 0;
  int failed = 0;
  std::uint64_t seed = 0;
  int exit_status() const { return failed == 0 ? 0 : 1; }
};

SuiteReport run_verify(const SuiteConfig& config);
Json suite_to_json(const SuiteReport& report);
std::string suite_to_csv(const SuiteReport& report);
/// Writes suite.json and suite.csv into dir.
void write_suite(const SuiteReport& report, const std::string& dir);

/// round(e^{n r}) with a floor of 2.
int size_for_rate(double r, int n);

struct ExponentRow {
  double r = 0.0;
  double exponent = 0.0;
  int M1 = 0;
  double trend_n1 = 0.0;
  int M2 = 0;             // 0 when the two-copy channel is too large
  double trend_n2 = 0.0;
  double converse_min_slack = 0.0;
  bool converse_pass = false;
};

struct ExponentTable {
  std::string channel;
  std::vector<double> alphas;
  std::vector<double> info;
  double info_one = 0.0;
  std::vector<ExponentRow> rows;
  double tol = 1e-5;
  std::uint64_t seed = 0;
};

ExponentTable run_exponent(const KrausChannel& channel, const std::vector<double>& rates,
                           const std::vector<double>& alphas, const MutualInfoOptions& opts = {});
std::string exponent_to_csv(const ExponentTable& t);
Json exponent_to_json(const ExponentTable& t);

}  // namespace qcc
