#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nrp/dataset_io.hpp"
#include "nrp/datagen.hpp"
#include "nrp/equivalence.hpp"
#include "nrp/error.hpp"
#include "nrp/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct GenFlags {
  long n = 16;
  long d = 4;
  double gamma = 0.3;
  double p = 2.0;
  std::string mode = "exact";
  std::uint64_t seed = 0;
};

void add_gen_flags(CLI::App* cmd, GenFlags& f) {
  cmd->add_option("--n", f.n, "number of rows")->check(CLI::PositiveNumber);
  cmd->add_option("--d", f.d, "dimension")->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", f.gamma, "generator margin in (0, 1)")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--p", f.p, "row norm exponent (>= 2)")
      ->check(CLI::Range(2.0, 1e300));
  cmd->add_option("--mode", f.mode, "lower | exact | infeasible")
      ->check(CLI::IsMember({"lower", "exact", "infeasible"}));
  cmd->add_option("--seed", f.seed, "random seed");
}

nrp::GenSpec to_spec(const GenFlags& f) {
  nrp::GenSpec spec;
  spec.n = f.n;
  spec.d = f.d;
  spec.gamma = f.gamma;
  spec.norm_exponent = f.p;
  spec.mode = nrp::parse_gen_mode(f.mode);
  spec.seed = f.seed;
  return spec;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  for (const std::string& item : split(text)) {
    std::istringstream is(item);
    T value{};
    if (!(is >> value) || !is.eof()) {
      throw CLI::ValidationError(flag, "cannot parse '" + item + "'");
    }
    out.push_back(value);
  }
  return out;
}

std::optional<int> parse_horizon(const std::string& text) {
  if (text == "auto") return std::nullopt;
  std::istringstream is(text);
  long value = 0;
  if (!(is >> value) || !is.eof() || value < 1 || value > 100000000) {
    throw CLI::ValidationError("--T", "expected a positive integer or 'auto'");
  }
  return static_cast<int>(value);
}

bool usage_error(nrp::ErrorCode code) {
  return code == nrp::ErrorCode::InvalidArgument ||
         code == nrp::ErrorCode::IncompatibleConfig ||
         code == nrp::ErrorCode::UnsupportedGeometry ||
         code == nrp::ErrorCode::Parse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"No-regret game dynamics for accelerated perceptrons"};
  app.require_subcommand(1);

  GenFlags gen_flags;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  add_gen_flags(gen, gen_flags);
  gen->add_option("--out", gen_out, "output path")->required();

  GenFlags run_flags;
  std::string run_algo = "smooth";
  std::string run_data;
  std::string run_T = "auto";
  std::string run_trace;
  CLI::App* run = app.add_subcommand("run", "run one algorithm");
  run->add_option("--algo", run_algo, "smooth|ji|nag|mpfp|pnorm|vanilla|dynamics")
      ->check(CLI::IsMember({"smooth", "ji", "nag", "mpfp", "pnorm", "vanilla",
                             "dynamics"}));
  run->add_option("--data", run_data, "dataset file (otherwise generate)");
  add_gen_flags(run, run_flags);
  run->add_option("--T", run_T, "horizon or 'auto'");
  run->add_option("--trace", run_trace, "write the per-round trace CSV here");

  GenFlags eq_flags;
  std::string eq_which = "prop1";
  int eq_T = 50;
  double eq_tol = nrp::Tolerances::equivalence_rel_tol;
  double eq_perturb = 0.0;
  CLI::App* equiv = app.add_subcommand("equiv", "check an equivalence");
  equiv->add_option("--which", eq_which, "prop1 | prop2 | nag | mpfp")
      ->check(CLI::IsMember({"prop1", "prop2", "nag", "mpfp"}));
  add_gen_flags(equiv, eq_flags);
  equiv->add_option("--T", eq_T, "horizon")->check(CLI::PositiveNumber);
  equiv->add_option("--tol", eq_tol, "relative tolerance")
      ->check(CLI::NonNegativeNumber);
  equiv->add_option("--perturb", eq_perturb,
                    "scale the dynamics p-learner step size by (1 + perturb)");

  std::string sw_algos = "smooth", sw_n = "16", sw_gamma = "0.3", sw_p = "2",
              sw_seeds = "0", sw_T = "auto", sw_mode = "exact", sw_out;
  long sw_d = 4;
  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter grid");
  sweep->add_option("--algos", sw_algos, "comma-separated algorithms");
  sweep->add_option("--n", sw_n, "comma-separated row counts");
  sweep->add_option("--gamma", sw_gamma, "comma-separated margins");
  sweep->add_option("--p", sw_p, "comma-separated norm exponents");
  sweep->add_option("--seeds", sw_seeds, "comma-separated seeds");
  sweep->add_option("--T", sw_T, "comma-separated horizons or 'auto'");
  sweep->add_option("--d", sw_d, "dimension")->check(CLI::PositiveNumber);
  sweep->add_option("--mode", sw_mode, "lower | exact | infeasible")
      ->check(CLI::IsMember({"lower", "exact", "infeasible"}));
  sweep->add_option("--out", sw_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      const nrp::Dataset data = nrp::generate(to_spec(gen_flags));
      nrp::write_dataset_file(gen_out, data);
      return kExitOk;
    }

    if (*run) {
      const nrp::Dataset data = run_data.empty()
                                    ? nrp::generate(to_spec(run_flags))
                                    : nrp::read_dataset_file(run_data);
      nrp::RunOptions opts;
      opts.algo = nrp::parse_algo(run_algo);
      opts.T = parse_horizon(run_T);
      opts.p_exp = run_data.empty() ? run_flags.p : data.norm_exponent();
      const nrp::RunOutput out = nrp::run_experiment(data, opts);
      if (!run_trace.empty()) {
        std::ofstream file(run_trace);
        if (!file) throw nrp::Error(nrp::ErrorCode::InvalidArgument,
                                    "cannot open " + run_trace);
        nrp::write_trace_csv(file, out.rows);
      }
      std::cout << nrp::kSummaryHeader << '\n'
                << nrp::summary_csv_row(out.summary) << '\n';
      return kExitOk;
    }

    if (*equiv) {
      const nrp::Dataset data = nrp::generate(to_spec(eq_flags));
      const nrp::EquivalenceReport report =
          nrp::check_equivalence(nrp::parse_equivalence_kind(eq_which), data, eq_T,
                                 eq_tol, eq_perturb);
      std::cout << "equivalence " << nrp::to_string(report.kind) << " T=" << report.T
                << " tol=" << nrp::format_real(report.tol) << '\n';
      for (const auto& q : report.quantities) {
        std::cout << "  " << q.name << ": abs_dev=" << nrp::format_real(q.abs_dev)
                  << " rel_dev=" << nrp::format_real(q.rel_dev) << ' '
                  << (q.pass ? "pass" : "FAIL") << '\n';
      }
      std::cout << (report.pass ? "PASS" : "FAIL") << '\n';
      return report.pass ? kExitOk : kExitCheckFailed;
    }

    if (*sweep) {
      nrp::SweepGrid grid;
      grid.algos = split(sw_algos);
      grid.n = parse_list<Eigen::Index>(sw_n, "--n");
      grid.gamma = parse_list<double>(sw_gamma, "--gamma");
      grid.p = parse_list<double>(sw_p, "--p");
      grid.seeds = parse_list<std::uint64_t>(sw_seeds, "--seeds");
      for (const std::string& t : split(sw_T)) grid.T.push_back(parse_horizon(t));
      grid.d = sw_d;
      grid.mode = nrp::parse_gen_mode(sw_mode);
      if (sw_out.empty()) {
        nrp::run_sweep(grid, std::cout, nrp::sweep_threads());
      } else {
        std::ostringstream buffer;
        nrp::run_sweep(grid, buffer, nrp::sweep_threads());
        std::ofstream file(sw_out);
        if (!file) throw nrp::Error(nrp::ErrorCode::InvalidArgument,
                                    "cannot open " + sw_out);
        file << buffer.str();
      }
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nrp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage_error(e.code()) ? kExitUsage : kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}
