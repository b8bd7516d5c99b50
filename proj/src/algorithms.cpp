#include "nrp/algorithms.hpp"

#include <cmath>

#include "nrp/error.hpp"

namespace nrp {

namespace {

void require_l2(const Dataset& data, const char* who) {
  if (data.norm_exponent() != 2.0) {
    throw Error(ErrorCode::UnsupportedGeometry,
                std::string(who) + " needs l2-bounded rows");
  }
}

void require_horizon(int T) {
  if (T < 1) throw Error(ErrorCode::InvalidArgument, "horizon T must be >= 1");
}

}  // namespace

SimplexPoint smoothed_response(const Dataset& data, const Eigen::VectorXd& v,
                               double mu) {
  return gibbs(data.A() * v / mu);
}

SmoothPerceptronResult smooth_perceptron(const Dataset& data, int T) {
  require_l2(data, "smooth perceptron");
  require_horizon(T);
  const auto& A = data.A();
  const Eigen::Index n = data.n();

  double theta = 2.0 / 3.0;
  double mu = 4.0;
  Eigen::VectorXd v = A.transpose() * Eigen::VectorXd::Constant(n, 1.0 / n);
  SimplexPoint q = smoothed_response(data, v, mu);

  SmoothPerceptronResult out{v, q, {v}, {mu}};
  for (int t = 1; t <= T - 1; ++t) {
    const SimplexPoint q_mu_prev = smoothed_response(data, v, mu);
    v = (1.0 - theta) * (v + theta * (A.transpose() * q.values())) +
        theta * theta * (A.transpose() * q_mu_prev.values());
    mu = (1.0 - theta) * mu;
    const SimplexPoint q_mu = smoothed_response(data, v, mu);
    q = SimplexPoint::normalize((1.0 - theta) * q.values() + theta * q_mu.values());
    theta = 2.0 / (t + 3.0);
    out.v_history.push_back(v);
    out.mu_history.push_back(mu);
  }
  out.v = v;
  out.q = q;
  return out;
}

JiResult accel_perceptron_ji(const Dataset& data, int T) {
  require_l2(data, "accelerated perceptron");
  require_horizon(T);
  const auto& A = data.A();
  const Eigen::Index n = data.n();

  SimplexPoint q = SimplexPoint::uniform(n);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(data.d());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(data.d());
  JiResult out{v, q, g, {}, {}, {}};
  for (int t = 1; t <= T; ++t) {
    const double theta = t / (2.0 * (t + 1.0));
    const double beta = t / (t + 1.0);
    v = v - theta * (g - A.transpose() * q.values());
    q = gibbs(A * v);
    g = beta * (g - A.transpose() * q.values());
    out.v_history.push_back(v);
    out.q_history.push_back(q.values());
    out.g_history.push_back(g);
  }
  out.v = v;
  out.q = q;
  out.g = g;
  return out;
}

double empirical_risk(const Dataset& data, const Eigen::VectorXd& v) {
  return (-(data.A() * v).array()).exp().mean();
}

Eigen::VectorXd empirical_risk_gradient(const Dataset& data,
                                        const Eigen::VectorXd& v) {
  const Eigen::VectorXd e = (-(data.A() * v).array()).exp().matrix();
  return -(data.A().transpose() * e) / static_cast<double>(data.n());
}

Eigen::VectorXd normalized_risk_gradient(const Dataset& data,
                                         const Eigen::VectorXd& v) {
  return -(data.A().transpose() * gibbs(data.A() * v).values());
}

NagResult nag_margin(const Dataset& data, int T) {
  require_l2(data, "NAG");
  require_horizon(T);
  const Eigen::Index d = data.d();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(d);
  NagResult out;
  for (int t = 1; t <= T; ++t) {
    // v_0 = 0, so the t = 1 momentum term vanishes.
    const Eigen::VectorXd u = t == 1 ? s : Eigen::VectorXd(s + v / (2.0 * (t - 1)));
    const SimplexPoint q = gibbs(data.A() * u);
    v = v + t * (data.A().transpose() * q.values());
    s = s + v / (2.0 * (t + 1));
    out.s_history.push_back(s);
    out.u_history.push_back(u);
    out.q_history.push_back(q.values());
  }
  out.s = s;
  out.v = v;
  return out;
}

MpfpParameters MpfpParameters::for_rows(Eigen::Index n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "mirror prox needs n >= 2");
  MpfpParameters m;
  m.omega_w = 0.5;
  m.omega_p = std::log(static_cast<double>(n));
  const double rp = std::sqrt(m.omega_p);
  const double rw = std::sqrt(m.omega_w);
  m.gamma = 1.0 / (rp + rw);
  m.alpha_p = 1.0 / (rp * (rp + rw));
  m.alpha_w = rp / (rp + rw);
  return m;
}

MpfpResult mpfp(const Dataset& data, int T) {
  require_l2(data, "mirror prox");
  require_horizon(T);
  const auto& A = data.A();
  const MpfpParameters par = MpfpParameters::for_rows(data.n());
  const double step_x = par.gamma / par.alpha_w;
  const double step_y = par.gamma / par.alpha_p;

  // Product-space prox split into its ball and simplex factors.
  auto prox = [&](const Eigen::VectorXd& x_hat, const SimplexPoint& y_hat,
                  const Eigen::VectorXd& x_at, const SimplexPoint& y_at,
                  Eigen::VectorXd& x_out, SimplexPoint& y_out) {
    const Eigen::VectorXd fx = -(A.transpose() * y_at.values());
    const Eigen::VectorXd fy = A * x_at;
    x_out = project_unit_ball(x_hat - step_x * fx);
    y_out = entropic_prox(y_hat, step_y * fy);
  };

  Eigen::VectorXd x_hat = Eigen::VectorXd::Zero(data.d());
  SimplexPoint y_hat = SimplexPoint::uniform(data.n());
  Eigen::VectorXd x_sum = Eigen::VectorXd::Zero(data.d());
  Eigen::VectorXd y_sum = Eigen::VectorXd::Zero(data.n());
  MpfpResult out{x_sum, y_hat, {}, {}, {}, {}};
  for (int t = 1; t <= T; ++t) {
    Eigen::VectorXd x;
    SimplexPoint y = y_hat;
    prox(x_hat, y_hat, x_hat, y_hat, x, y);
    Eigen::VectorXd x_next;
    SimplexPoint y_next = y_hat;
    prox(x_hat, y_hat, x, y, x_next, y_next);
    x_hat = x_next;
    y_hat = y_next;
    x_sum += par.gamma * x;
    y_sum += par.gamma * y.values();
    out.x.push_back(x);
    out.y.push_back(y.values());
    out.x_hat.push_back(x_hat);
    out.y_hat.push_back(y_hat.values());
  }
  const double total = par.gamma * T;
  out.x_avg = x_sum / total;
  out.y_avg = SimplexPoint::normalize(y_sum);
  return out;
}

PnormResult pnorm_accelerated(const Dataset& data, int T, double p_exp) {
  if (data.norm_exponent() > p_exp + 1e-12) {
    throw Error(ErrorCode::UnsupportedGeometry,
                "dataset rows are only bounded in a larger p-norm");
  }
  DynamicsConfig config = DynamicsConfig::pnorm(data.n(), p_exp, T);
  Trace trace = run_dynamics(config, data);
  Eigen::VectorXd w_bar = trace.w_bar;
  return {std::move(w_bar), std::move(trace)};
}

VanillaResult vanilla_perceptron(const Dataset& data, long max_updates,
                                 const std::optional<Eigen::VectorXd>& initial) {
  require_l2(data, "perceptron");
  VanillaResult out;
  out.w = initial ? *initial : Eigen::VectorXd::Zero(data.d());
  if (out.w.size() != data.d()) {
    throw Error(ErrorCode::InvalidArgument, "initial vector has the wrong size");
  }
  const auto& A = data.A();
  while (true) {
    bool clean = true;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      if (A.row(i).dot(out.w) > 0.0) continue;
      clean = false;
      if (out.mistakes >= max_updates) return out;
      out.w += A.row(i).transpose();
      ++out.mistakes;
      out.w_history.push_back(out.w);
    }
    if (clean) {
      out.converged = true;
      return out;
    }
  }
}

InfeasibilityCertificate infeasibility_certificate(const Dataset& data, int T) {
  MpfpResult run = mpfp(data, T);
  const double norm = (data.A().transpose() * run.y_avg.values()).norm();
  return {run.y_avg, norm};
}

}  // namespace nrp
