#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nrp/core.hpp"
#include "nrp/dynamics.hpp"
#include "nrp/simplex.hpp"

namespace nrp {

// q_mu(v) = argmin_q q^T A v + mu KL(q || 1/n), i.e. the softmax of -Av/mu.
SimplexPoint smoothed_response(const Dataset& data, const Eigen::VectorXd& v,
                               double mu);

struct SmoothPerceptronResult {
  Eigen::VectorXd v;  // v_{T-1}
  SimplexPoint q;     // q_{T-1}
  std::vector<Eigen::VectorXd> v_history;  // v_0 .. v_{T-1}
  std::vector<double> mu_history;          // mu_0 .. mu_{T-1}
};
SmoothPerceptronResult smooth_perceptron(const Dataset& data, int T);

struct JiResult {
  Eigen::VectorXd v;  // v_T
  SimplexPoint q;     // q_T
  Eigen::VectorXd g;  // g_T
  std::vector<Eigen::VectorXd> v_history;  // v_1 .. v_T
  std::vector<Eigen::VectorXd> q_history;  // q_1 .. q_T
  std::vector<Eigen::VectorXd> g_history;  // g_1 .. g_T
};
JiResult accel_perceptron_ji(const Dataset& data, int T);

// Empirical exponential risk R(v) = (1/n) sum_i exp(-(Av)_i) and its gradient.
double empirical_risk(const Dataset& data, const Eigen::VectorXd& v);
Eigen::VectorXd empirical_risk_gradient(const Dataset& data,
                                        const Eigen::VectorXd& v);
// grad R(v) / R(v) = -A^T softmax(-Av), evaluated without forming R.
Eigen::VectorXd normalized_risk_gradient(const Dataset& data,
                                         const Eigen::VectorXd& v);

struct NagResult {
  Eigen::VectorXd s;  // s_T
  Eigen::VectorXd v;  // v_T
  std::vector<Eigen::VectorXd> s_history;  // s_1 .. s_T
  std::vector<Eigen::VectorXd> u_history;  // u_1 .. u_T
  std::vector<Eigen::VectorXd> q_history;  // q_1 .. q_T
};
NagResult nag_margin(const Dataset& data, int T);

struct MpfpParameters {
  double omega_w = 0.5;
  double omega_p = 0.0;
  double gamma = 0.0;
  double alpha_w = 0.0;
  double alpha_p = 0.0;

  static MpfpParameters for_rows(Eigen::Index n);  // n >= 2
};

struct MpfpResult {
  Eigen::VectorXd x_avg;  // ball part of z_T
  SimplexPoint y_avg;     // simplex part of z_T
  std::vector<Eigen::VectorXd> x;      // x_1 .. x_T
  std::vector<Eigen::VectorXd> y;      // y_1 .. y_T
  std::vector<Eigen::VectorXd> x_hat;  // x_hat_1 .. x_hat_T
  std::vector<Eigen::VectorXd> y_hat;
};
MpfpResult mpfp(const Dataset& data, int T);

struct PnormResult {
  Eigen::VectorXd w_bar;
  Trace trace;
};
PnormResult pnorm_accelerated(const Dataset& data, int T, double p_exp);

struct VanillaResult {
  Eigen::VectorXd w;
  long mistakes = 0;
  bool converged = false;  // a full pass without mistakes happened
  std::vector<Eigen::VectorXd> w_history;  // w after each update
};
VanillaResult vanilla_perceptron(
    const Dataset& data, long max_updates,
    const std::optional<Eigen::VectorXd>& initial = std::nullopt);

struct InfeasibilityCertificate {
  SimplexPoint p_bar;
  double norm;  // ||p_bar^T A||_2
};
InfeasibilityCertificate infeasibility_certificate(const Dataset& data, int T);

}  // namespace nrp
