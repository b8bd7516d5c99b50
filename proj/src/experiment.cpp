#include "nrp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "nrp/algorithms.hpp"
#include "nrp/dataset_io.hpp"
#include "nrp/error.hpp"

namespace nrp {

const char* const kTraceHeader =
    "t,alpha,margin_avg,normalized_margin,l1_delta_p,regret_w_running,"
    "regret_p_running,gap_bound";
const char* const kSummaryHeader =
    "algo,n,d,gamma,T,final_margin,final_normalized_margin,Rw,Rp,wallclock_ms";
const char* const kSweepHeader =
    "algo,n,d,gamma,p,seed,T,final_margin,final_normalized_margin,Rw,Rp,"
    "wallclock_ms";

const char* to_string(AlgoId algo) {
  switch (algo) {
    case AlgoId::Smooth: return "smooth";
    case AlgoId::Ji: return "ji";
    case AlgoId::Nag: return "nag";
    case AlgoId::Mpfp: return "mpfp";
    case AlgoId::Pnorm: return "pnorm";
    case AlgoId::Vanilla: return "vanilla";
    case AlgoId::Dynamics: return "dynamics";
  }
  return "unknown";
}

AlgoId parse_algo(const std::string& text) {
  for (AlgoId a : {AlgoId::Smooth, AlgoId::Ji, AlgoId::Nag, AlgoId::Mpfp,
                   AlgoId::Pnorm, AlgoId::Vanilla, AlgoId::Dynamics}) {
    if (text == to_string(a)) return a;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown algorithm '" + text + "'");
}

int auto_horizon(AlgoId algo, const Dataset& data, double p_exp) {
  const std::optional<double> gamma = data.known_margin();
  if (!gamma) {
    throw Error(ErrorCode::InvalidArgument,
                "an automatic horizon needs a dataset with a known margin");
  }
  const double log_n = std::log(static_cast<double>(data.n()));
  double T = 1.0;
  switch (algo) {
    case AlgoId::Smooth:
    case AlgoId::Ji:
    case AlgoId::Mpfp:
    case AlgoId::Dynamics:
      T = std::ceil(4.0 * std::sqrt(log_n) / *gamma);
      break;
    case AlgoId::Pnorm:
      T = std::ceil(std::sqrt(2.0 * (p_exp - 1.0) * log_n) / *gamma) + 1.0;
      break;
    case AlgoId::Nag:
      T = std::ceil(std::sqrt(8.0 * log_n + 2.0) / *gamma);
      break;
    case AlgoId::Vanilla:
      T = std::ceil(1.0 / (*gamma * *gamma));
      break;
  }
  if (!(T < static_cast<double>(std::numeric_limits<int>::max()))) {
    throw Error(ErrorCode::InvalidArgument, "automatic horizon overflows");
  }
  return std::max(1, static_cast<int>(T));
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double safe_normalized_margin(const Dataset& data, const Eigen::VectorXd& w) {
  return w.norm() > 0.0 ? normalized_margin(data, w) : kNaN;
}

std::vector<TraceRow> rows_from(const Trace& trace) {
  std::vector<TraceRow> rows;
  rows.reserve(trace.rounds.size());
  for (const RoundRecord& r : trace.rounds) {
    rows.push_back({r.t, r.alpha, r.margin_avg, r.normalized_margin, r.l1_delta_p,
                    r.regret_w, r.regret_p, r.gap_bound});
  }
  return rows;
}

}  // namespace

RunOutput run_experiment(const Dataset& data, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const int T = options.T ? *options.T : auto_horizon(options.algo, data, options.p_exp);
  if (T < 1) throw Error(ErrorCode::InvalidArgument, "horizon T must be >= 1");

  RunOutput out;
  out.summary.algo = to_string(options.algo);
  out.summary.n = data.n();
  out.summary.d = data.d();
  out.summary.gamma = data.known_margin().value_or(kNaN);
  out.summary.T = T;

  std::optional<Trace> paired;
  switch (options.algo) {
    case AlgoId::Smooth:
      out.output = smooth_perceptron(data, T).v;
      paired = run_dynamics(DynamicsConfig::smooth_perceptron(T), data);
      break;
    case AlgoId::Ji:
      out.output = accel_perceptron_ji(data, T).v;
      paired = run_dynamics(DynamicsConfig::smooth_perceptron(T), data);
      break;
    case AlgoId::Nag:
      out.output = nag_margin(data, T).s;
      paired = run_dynamics(DynamicsConfig::nag(T), data);
      break;
    case AlgoId::Mpfp:
      out.output = mpfp(data, T).x_avg;
      paired = run_dynamics(DynamicsConfig::mirror_prox(data.n(), T), data);
      break;
    case AlgoId::Pnorm: {
      PnormResult r = pnorm_accelerated(data, T, options.p_exp);
      out.output = r.w_bar;
      paired = std::move(r.trace);
      break;
    }
    case AlgoId::Dynamics:
      paired = run_dynamics(DynamicsConfig::smooth_perceptron(T), data);
      out.output = paired->w_bar;
      break;
    case AlgoId::Vanilla: {
      const VanillaResult r = vanilla_perceptron(data, T);
      out.output = r.w;
      out.summary.T = static_cast<int>(r.mistakes);
      for (std::size_t k = 0; k < r.w_history.size(); ++k) {
        const Eigen::VectorXd& w = r.w_history[k];
        out.rows.push_back({static_cast<int>(k + 1), 1.0, margin(data, w),
                            safe_normalized_margin(data, w), kNaN, kNaN, kNaN,
                            kNaN});
      }
      out.summary.Rw = kNaN;
      out.summary.Rp = kNaN;
      break;
    }
  }
  if (paired) {
    out.rows = rows_from(*paired);
    out.summary.Rw = paired->regret_w;
    out.summary.Rp = paired->regret_p;
  }
  out.summary.final_margin = margin(data, out.output);
  out.summary.final_normalized_margin = safe_normalized_margin(data, out.output);
  out.summary.wallclock_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                start)
          .count();
  return out;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << kTraceHeader << '\n';
  for (const TraceRow& r : rows) {
    out << r.t << ',' << format_real(r.alpha) << ',' << format_real(r.margin_avg)
        << ',' << format_real(r.normalized_margin) << ','
        << format_real(r.l1_delta_p) << ',' << format_real(r.regret_w) << ','
        << format_real(r.regret_p) << ',' << format_real(r.gap_bound) << '\n';
  }
}

std::string summary_csv_row(const RunSummary& s) {
  std::ostringstream os;
  os << s.algo << ',' << s.n << ',' << s.d << ',' << format_real(s.gamma) << ','
     << s.T << ',' << format_real(s.final_margin) << ','
     << format_real(s.final_normalized_margin) << ',' << format_real(s.Rw) << ','
     << format_real(s.Rp) << ',' << format_real(s.wallclock_ms);
  return os.str();
}

unsigned sweep_threads() {
  if (const char* env = std::getenv("NRP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct Cell {
  std::string algo;
  Eigen::Index n;
  double gamma;
  double p;
  std::uint64_t seed;
  std::optional<int> T;
};

std::string run_cell(const SweepGrid& grid, const Cell& c) {
  GenSpec spec;
  spec.n = c.n;
  spec.d = grid.d;
  spec.gamma = c.gamma;
  spec.norm_exponent = c.p;
  spec.mode = grid.mode;
  spec.seed = c.seed;
  const Dataset data = generate(spec);
  const RunOutput r = run_experiment(data, {parse_algo(c.algo), c.T, c.p});
  const RunSummary& s = r.summary;
  std::ostringstream os;
  os << s.algo << ',' << s.n << ',' << s.d << ',' << format_real(c.gamma) << ','
     << format_real(c.p) << ',' << c.seed << ',' << s.T << ','
     << format_real(s.final_margin) << ',' << format_real(s.final_normalized_margin)
     << ',' << format_real(s.Rw) << ',' << format_real(s.Rp) << ','
     << format_real(s.wallclock_ms);
  return os.str();
}

}  // namespace

void run_sweep(const SweepGrid& grid, std::ostream& out, unsigned threads) {
  for (const std::string& a : grid.algos) parse_algo(a);
  std::vector<Cell> cells;
  for (const auto& a : grid.algos)
    for (auto n : grid.n)
      for (double g : grid.gamma)
        for (double p : grid.p)
          for (auto seed : grid.seeds)
            for (const auto& T : grid.T) cells.push_back({a, n, g, p, seed, T});

  std::vector<std::string> rows(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        rows[i] = run_cell(grid, cells[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned count =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < count; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  out << kSweepHeader << '\n';
  for (const auto& r : rows) out << r << '\n';
}

}  // namespace nrp
