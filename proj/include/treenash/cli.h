#ifndef TREENASH_CLI_H_
#define TREENASH_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace treenash::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kRejected = 1,        // verify rejected, or oracle found nothing
  kInputError = 2,
  kIoError = 3,
  kNoEquilibrium = 4,
  kCapExceeded = 5,
};

int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

struct BenchGrid {
  std::vector<int> players;
  std::vector<int> actions;
  std::vector<double> epsilons;
  std::vector<int> support_sizes;
  int repeats = 1;
  std::uint64_t seed = 0;
  std::optional<int> lp_threshold;
  int threads = 1;
};

struct BenchRow {
  int n = 0;
  int m = 0;
  double epsilon = 0;
  int b = 0;
  std::uint64_t seed = 0;
  bool success = false;
  double wall_ms = 0;
  std::uint64_t lp_calls = 0;
  std::uint64_t resamples = 0;
  std::uint64_t fallbacks = 0;
  double max_regret = 0;
};

inline constexpr const char* kBenchHeader =
    "n,m,epsilon,b,seed,success,wall_ms,lp_calls,resamples,fallbacks,max_regret";

std::string format_bench_row(const BenchRow& row);

// Runs the grid, appending one CSV line per run to `out` (flushed per row).
// Stops early, keeping rows written so far, if an interrupt arrives.
std::vector<BenchRow> run_bench(const BenchGrid& grid, std::ostream* out = nullptr);

}  // namespace treenash::cli

#endif  // TREENASH_CLI_H_
