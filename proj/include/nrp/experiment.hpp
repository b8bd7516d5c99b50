#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nrp/core.hpp"
#include "nrp/datagen.hpp"
#include "nrp/dynamics.hpp"

namespace nrp {

enum class AlgoId { Smooth, Ji, Nag, Mpfp, Pnorm, Vanilla, Dynamics };

const char* to_string(AlgoId algo);
AlgoId parse_algo(const std::string& text);

// Horizon from the convergence theory, using the dataset's known margin:
//   smooth, ji, mpfp, dynamics: ceil(4 sqrt(log n) / gamma)
//   pnorm:                      ceil(sqrt(2 (p - 1) log n) / gamma) + 1
//   nag:                        ceil(sqrt(8 log n + 2) / gamma)
//   vanilla (update budget):    ceil(1 / gamma^2)
// Never below 1. Throws InvalidArgument without a known margin.
int auto_horizon(AlgoId algo, const Dataset& data, double p_exp = 2.0);

struct RunOptions {
  AlgoId algo = AlgoId::Smooth;
  std::optional<int> T;  // empty = auto
  double p_exp = 2.0;    // pnorm only
};

struct RunSummary {
  std::string algo;
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  double gamma = 0.0;  // known margin, NaN if absent
  int T = 0;           // rounds run (vanilla: updates made)
  double final_margin = 0.0;
  double final_normalized_margin = 0.0;
  double Rw = 0.0;
  double Rp = 0.0;
  double wallclock_ms = 0.0;
};

struct TraceRow {
  int t;
  double alpha, margin_avg, normalized_margin, l1_delta_p, regret_w, regret_p,
      gap_bound;
};

struct RunOutput {
  RunSummary summary;
  Eigen::VectorXd output;  // the algorithm's classifier
  std::vector<TraceRow> rows;
};

// Runs one algorithm. Game-based algorithms report regrets and trace rows
// from their paired dynamics run; vanilla reports one row per update with
// NaN in the game columns.
RunOutput run_experiment(const Dataset& data, const RunOptions& options);

extern const char* const kTraceHeader;
extern const char* const kSummaryHeader;
extern const char* const kSweepHeader;

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);
std::string summary_csv_row(const RunSummary& s);

struct SweepGrid {
  std::vector<std::string> algos;
  std::vector<Eigen::Index> n;
  std::vector<double> gamma;
  std::vector<double> p;
  std::vector<std::uint64_t> seeds;
  std::vector<std::optional<int>> T;  // empty entry = auto
  Eigen::Index d = 4;
  GenMode mode = GenMode::ExactMargin;
};

// Number of worker threads: NRP_THREADS if set and positive, otherwise the
// hardware concurrency (at least 1).
unsigned sweep_threads();

// Writes the sweep CSV (header plus one row per grid cell in grid order:
// algo, n, gamma, p, seed, T with T varying fastest).
void run_sweep(const SweepGrid& grid, std::ostream& out, unsigned threads);

}  // namespace nrp
