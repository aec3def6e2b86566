#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace addcomb::cli {

// Everything a run needs, validated before any computation starts.
struct RunConfig {
  std::string subcommand;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0: hardware concurrency
  bool timings = true;
  std::string out;          // empty: standard output

  std::string gen;
  std::string function_file;
  std::string set_file;
  std::string graph_file;
  std::string artifacts;
  std::string mode;
  std::string method;
  std::string kind;
  std::string growth;

  std::optional<std::size_t> N;
  std::optional<std::size_t> L;
  std::optional<int> k;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> eta;
  std::optional<double> lambda;
  std::optional<std::uint64_t> w;
  std::optional<std::uint64_t> b;
  bool cayley = false;
  bool cayley3 = false;
  bool bias = false;
  bool check_naive = false;

  nlohmann::ordered_json echo() const;
};

struct LedgerEntry {
  std::string name;
  double lhs = 0;
  std::string relation;  // "<=" or ">=" or "=="
  double rhs = 0;
  bool pass = false;
};

struct RunReport {
  nlohmann::ordered_json config;
  std::vector<nlohmann::ordered_json> results;
  std::vector<LedgerEntry> ledger;
  std::vector<std::pair<std::string, double>> timings;
  std::vector<std::string> artifacts;
  // Plain text payload for `generate` (newline-delimited integers or CSV).
  std::optional<std::string> raw_output;

  bool all_passed() const;
};

RunReport run(const RunConfig& config);

// Parses argv (including `--config FILE` with key=value lines mirroring the
// flags), runs, and writes JSON lines. Returns the process exit code:
// 0 when every ledger inequality passed, 1 on a failed inequality, 2 on an
// error (reported as a structured JSON object).
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace addcomb::cli
