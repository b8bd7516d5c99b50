#include "nrp/equivalence.hpp"

#include <algorithm>
#include <cmath>

#include "nrp/algorithms.hpp"
#include "nrp/dynamics.hpp"
#include "nrp/error.hpp"

namespace nrp {

const char* to_string(EquivalenceKind kind) {
  switch (kind) {
    case EquivalenceKind::Prop1: return "prop1";
    case EquivalenceKind::Prop2: return "prop2";
    case EquivalenceKind::Nag: return "nag";
    case EquivalenceKind::Mpfp: return "mpfp";
  }
  return "unknown";
}

EquivalenceKind parse_equivalence_kind(const std::string& text) {
  for (EquivalenceKind k : {EquivalenceKind::Prop1, EquivalenceKind::Prop2,
                            EquivalenceKind::Nag, EquivalenceKind::Mpfp}) {
    if (text == to_string(k)) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown equivalence '" + text + "'");
}

void accumulate_deviation(QuantityDeviation& q, const Eigen::VectorXd& a,
                          const Eigen::VectorXd& b, double tol, double abs_floor) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::InvalidArgument, "compared vectors differ in size");
  }
  const double abs_dev = (a - b).cwiseAbs().maxCoeff();
  const double scale = b.cwiseAbs().maxCoeff();
  if (!(abs_dev <= std::max(tol * scale, abs_floor))) q.pass = false;
  if (std::isnan(abs_dev)) {
    q.pass = false;
    q.abs_dev = q.rel_dev = abs_dev;
    return;
  }
  if (abs_dev > q.abs_dev) {
    q.abs_dev = abs_dev;
    q.scale = scale;
  }
  if (scale > 0.0) q.rel_dev = std::max(q.rel_dev, abs_dev / scale);
}

namespace {

DynamicsConfig perturbed(DynamicsConfig config, double perturb) {
  config.p_learner.eta *= 1.0 + perturb;
  return config;
}

}  // namespace

EquivalenceReport check_equivalence(EquivalenceKind kind, const Dataset& data,
                                    int T, double tol, double perturb) {
  EquivalenceReport report;
  report.kind = kind;
  report.T = T;
  report.tol = tol;

  switch (kind) {
    case EquivalenceKind::Prop1: {
      const SmoothPerceptronResult orig = smooth_perceptron(data, T);
      const Trace tr =
          run_dynamics(perturbed(DynamicsConfig::smooth_perceptron(T), perturb), data);
      QuantityDeviation v{"v_{T-1} vs w_bar_T"};
      accumulate_deviation(v, orig.v, tr.w_bar, tol);
      QuantityDeviation q{"q_{T-1} vs weighted p average"};
      accumulate_deviation(q, orig.q.values(), tr.totals.p_sum / tr.weight_sum, tol);
      report.quantities = {v, q};
      break;
    }
    case EquivalenceKind::Prop2: {
      const JiResult orig = accel_perceptron_ji(data, T);
      const Trace tr =
          run_dynamics(perturbed(DynamicsConfig::smooth_perceptron(T), perturb), data);
      QuantityDeviation v{"v_T vs weighted w sum / 4"};
      accumulate_deviation(v, orig.v, 0.25 * tr.weighted_w_sum, tol);
      QuantityDeviation q{"q_T vs p_T"};
      accumulate_deviation(q, orig.q.values(), tr.last_p.values(), tol);
      report.quantities = {v, q};
      break;
    }
    case EquivalenceKind::Nag: {
      const NagResult orig = nag_margin(data, T);
      const Trace tr = run_dynamics(perturbed(DynamicsConfig::nag(T), perturb), data);
      QuantityDeviation s{"s_T vs (sum alpha / 4) w_bar_T"};
      accumulate_deviation(s, orig.s, 0.25 * tr.weight_sum * tr.w_bar, tol);
      report.quantities = {s};
      break;
    }
    case EquivalenceKind::Mpfp: {
      const MpfpResult orig = mpfp(data, T);
      DynamicsConfig config =
          perturbed(DynamicsConfig::mirror_prox(data.n(), T), perturb);
      config.record_full_trace = true;
      const Trace tr = run_dynamics(config, data);
      QuantityDeviation w{"x_t vs w_t (every round)"};
      QuantityDeviation p{"y_t vs p_t (every round)"};
      for (int t = 0; t < T; ++t) {
        accumulate_deviation(w, orig.x[t], tr.rounds[t].w, tol);
        accumulate_deviation(p, orig.y[t], tr.rounds[t].p, tol);
      }
      report.quantities = {w, p};
      break;
    }
  }
  report.pass = std::all_of(report.quantities.begin(), report.quantities.end(),
                            [](const QuantityDeviation& q) { return q.pass; });
  return report;
}

}  // namespace nrp
