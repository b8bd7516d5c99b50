#include <cmath>

#include <doctest.h>

#include "nrp/algorithms.hpp"
#include "nrp/datagen.hpp"
#include "nrp/equivalence.hpp"
#include "nrp/error.hpp"
#include "oracles.hpp"

using namespace nrp;

namespace {

Dataset exact_data(Eigen::Index n, Eigen::Index d, double gamma, std::uint64_t seed) {
  GenSpec spec;
  spec.n = n;
  spec.d = d;
  spec.gamma = gamma;
  spec.seed = seed;
  return gen_separable(spec);
}

Dataset from_rows(const RowMatrix& rows) {
  return build_dataset(rows, Eigen::VectorXi::Ones(rows.rows()), 2.0);
}

}  // namespace

TEST_CASE("smooth perceptron initialization and step sizes") {
  oracle::Rng rng(1);
  const Dataset data = oracle::random_dataset(rng, 6, 3);
  const SmoothPerceptronResult r = smooth_perceptron(data, 4);
  REQUIRE(r.v_history.size() == 4);
  REQUIRE(r.mu_history.size() == 4);
  CHECK(oracle::close_rel(r.v_history[0],
                          data.A().transpose() * Eigen::VectorXd::Constant(6, 1.0 / 6), 1e-15));
  CHECK(r.mu_history[0] == 4.0);
  CHECK(r.mu_history[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  for (std::size_t t = 0; t < r.mu_history.size(); ++t) {
    CHECK(r.mu_history[t] == doctest::Approx(8.0 / ((t + 1.0) * (t + 2.0))).epsilon(1e-14));
  }
  const SmoothPerceptronResult one = smooth_perceptron(data, 1);
  CHECK(one.v == r.v_history[0]);
  CHECK(oracle::close_rel(one.q.values(), smoothed_response(data, one.v, 4.0).values(), 1e-15));
}

TEST_CASE("mu recurrence tracks its closed form over long horizons") {
  // mu_t = (1 - 2/(t+2)) mu_{t-1}, mu_0 = 4. The closed form is exact in real
  // arithmetic; in floating point the recurrence drifts by a few ulps per step.
  double mu = 4.0;
  double worst = 0.0;
  for (int t = 1; t <= 10000; ++t) {
    mu *= 1.0 - 2.0 / (t + 2.0);
    const double closed = 8.0 / ((t + 1.0) * (t + 2.0));
    worst = std::max(worst, std::abs(mu - closed) / closed);
  }
  CHECK(worst <= 1e-11);
}

TEST_CASE("smoothed response is the entropy-regularized minimizer") {
  oracle::Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset data = oracle::random_dataset(rng, 4, 3);
    const Eigen::VectorXd v = oracle::random_vector(rng, 3);
    const double mu = 0.3 + trial * 0.2;
    const Eigen::VectorXd ref = oracle::simplex_entropy_minimizer(
        data.A() * v, mu, Eigen::VectorXd::Constant(4, 0.25));
    CHECK(oracle::close_rel(smoothed_response(data, v, mu).values(), ref, 1e-8));
  }
}

TEST_CASE("accelerated perceptron of Ji") {
  oracle::Rng rng(3);
  const Dataset data = oracle::random_dataset(rng, 7, 4);
  const JiResult r = accel_perceptron_ji(data, 30);
  CHECK(oracle::close_rel(r.v_history[0],
                          0.25 * data.A().transpose() * Eigen::VectorXd::Constant(7, 1.0 / 7),
                          1e-15));
  Eigen::VectorXd weighted_q = Eigen::VectorXd::Zero(7);
  for (int t = 1; t <= 30; ++t) {
    weighted_q += t * r.q_history[t - 1];
    const Eigen::VectorXd expected = -(data.A().transpose() * weighted_q) / (t + 1.0);
    CHECK(oracle::close_rel(r.g_history[t - 1], expected, 1e-12));
  }
  CHECK(r.v == r.v_history.back());
}

TEST_CASE("Ji iterate norm grows quadratically on exact-margin data") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const double gamma = 0.25;
    const Dataset data = exact_data(32, 8, gamma, seed);
    const JiResult r = accel_perceptron_ji(data, 100);
    for (int t = 1; t <= 100; ++t) {
      CHECK(r.v_history[t - 1].norm() >= t * (t + 1.0) * gamma / 8.0 - 1e-9);
    }
  }
}

TEST_CASE("risk gradient") {
  oracle::Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset data = oracle::random_dataset(rng, 5, 4);
    Eigen::VectorXd u = oracle::random_vector(rng, 4);
    u *= 2.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng) / u.norm();
    const Eigen::VectorXd fd = oracle::central_difference(
        [&](const Eigen::VectorXd& x) { return empirical_risk(data, x); }, u, 1e-5);
    CHECK(oracle::close_rel(fd, empirical_risk_gradient(data, u), 1e-6));
    const Eigen::VectorXd ratio = empirical_risk_gradient(data, u) / empirical_risk(data, u);
    CHECK(oracle::close_rel(normalized_risk_gradient(data, u), ratio, 1e-12));
  }
}

TEST_CASE("NAG stable form") {
  oracle::Rng rng(5);
  const Dataset data = oracle::random_dataset(rng, 6, 4);
  const NagResult r = nag_margin(data, 30);
  CHECK(r.u_history[0] == Eigen::VectorXd::Zero(4));
  CHECK(oracle::close_rel(r.q_history[0], Eigen::VectorXd::Constant(6, 1.0 / 6), 1e-15));
  const Eigen::VectorXd v1 = data.A().transpose() * Eigen::VectorXd::Constant(6, 1.0 / 6);
  CHECK(oracle::close_rel(r.s_history[0], v1 / 4.0, 1e-15));

  // eta_t grad R(u_t) with eta_t = t / R(u_t), evaluated the unstable way.
  for (int t = 1; t <= 30; ++t) {
    const Eigen::VectorXd& u = r.u_history[t - 1];
    const Eigen::VectorXd step = t / empirical_risk(data, u) * empirical_risk_gradient(data, u);
    CHECK(oracle::close_rel(step, -t * (data.A().transpose() * r.q_history[t - 1]), 1e-9));
  }
}

TEST_CASE("NAG margin rate on exact-margin data") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const double gamma = 0.3;
    const Dataset data = exact_data(16, 4, gamma, seed);
    const NagResult r = nag_margin(data, 60);
    for (int t = 1; t <= 60; ++t) {
      const double bound = gamma - (8.0 * std::log(16.0) + 2.0) / (t * (t + 1.0) * gamma);
      CHECK(normalized_margin(data, r.s_history[t - 1]) >= bound - 1e-9);
    }
  }
}

TEST_CASE("mirror prox parameters and averages") {
  const MpfpParameters par = MpfpParameters::for_rows(8);
  CHECK(par.omega_p == doctest::Approx(std::log(8.0)));
  CHECK(par.gamma == doctest::Approx(1.0 / (std::sqrt(std::log(8.0)) + 1.0 / std::sqrt(2.0))));
  CHECK_THROWS_AS(MpfpParameters::for_rows(1), Error);

  oracle::Rng rng(6);
  const Dataset data = oracle::random_dataset(rng, 8, 3);
  const MpfpResult r = mpfp(data, 25);
  REQUIRE(r.x.size() == 25);
  Eigen::VectorXd xs = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd ys = Eigen::VectorXd::Zero(8);
  for (int t = 0; t < 25; ++t) {
    xs += r.x[t];
    ys += r.y[t];
    CHECK(r.x[t].norm() <= 1.0 + 1e-12);
    CHECK(std::abs(r.y[t].sum() - 1.0) <= 1e-12);
  }
  CHECK(oracle::close_rel(r.x_avg, xs / 25.0, 1e-13));
  CHECK(oracle::close_rel(r.y_avg.values(), ys / 25.0, 1e-13));
}

TEST_CASE("p-norm accelerated algorithm") {
  GenSpec spec;
  spec.n = 2;
  spec.d = 3;
  spec.gamma = 0.2;
  spec.mode = GenMode::LowerBound;
  spec.norm_exponent = 4.0;
  spec.seed = 9;
  const Dataset two = gen_separable(spec);
  const PnormResult r4 = pnorm_accelerated(two, 10, 4.0);
  const double q = 4.0 / 3.0;
  CHECK(r4.trace.config.w_learner.eta ==
        doctest::Approx(std::sqrt(1.0 / (2.0 * (q - 1.0) * std::log(2.0)))));
  CHECK(r4.trace.config.p_learner.eta == doctest::Approx(1.0 / r4.trace.config.w_learner.eta));
  CHECK_THROWS_AS(pnorm_accelerated(two, 10, 2.0), Error);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    spec.n = 32;
    spec.d = 4;
    spec.norm_exponent = 2.0;
    spec.seed = seed;
    const Dataset data = gen_separable(spec);
    const double gamma_cert = margin(data, *data.w_star());
    for (int T : {5, 20, 80}) {
      const PnormResult r = pnorm_accelerated(data, T, 2.0);
      CHECK(oracle::close_rel(r.w_bar, r.trace.w_bar, 0.0, 0.0));
      CHECK(margin(data, r.w_bar) >= gamma_cert - std::sqrt(2.0 * std::log(32.0)) / T - 1e-9);
    }
  }
}

TEST_CASE("vanilla perceptron") {
  RowMatrix one(1, 2);
  one << 1, 0;
  const VanillaResult r = vanilla_perceptron(from_rows(one), 100);
  CHECK(r.mistakes == 1);
  CHECK(r.converged);
  CHECK(r.w == Eigen::Vector2d(1, 0));

  oracle::Rng rng(7);
  const Dataset data = exact_data(16, 4, 0.3, 1);
  const VanillaResult seeded =
      vanilla_perceptron(data, 100, Eigen::VectorXd(*data.w_star()));
  CHECK(seeded.mistakes == 0);
  CHECK(seeded.converged);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (double gamma : {0.1, 0.3}) {
      const Dataset d = exact_data(32, 6, gamma, seed);
      const VanillaResult v = vanilla_perceptron(d, 1000000);
      CHECK(v.converged);
      CHECK(v.mistakes <= static_cast<long>(std::ceil(1.0 / (gamma * gamma))));
      CHECK(margin(d, v.w) > 0.0);
    }
  }

  RowMatrix anti(2, 2);
  anti << 1, 0, -1, 0;
  const VanillaResult stuck = vanilla_perceptron(from_rows(anti), 7);
  CHECK_FALSE(stuck.converged);
  CHECK(stuck.mistakes == 7);
}

TEST_CASE("infeasibility certificates") {
  RowMatrix tri(3, 2);
  const double h = std::sqrt(3.0) / 2.0;
  tri << 1, 0, -0.5, h, -0.5, -h;
  const Dataset canon = from_rows(tri);
  CHECK(oracle::angle_sweep_max_margin(canon.A()) <= 1e-9);
  CHECK((canon.A().transpose() * Eigen::VectorXd::Constant(3, 1.0 / 3)).norm() <= 1e-15);
  for (int T : {10, 100}) {
    const InfeasibilityCertificate c = infeasibility_certificate(canon, T);
    CHECK(c.norm <= 3.0 * std::sqrt(std::log(3.0)) / (2.0 * T) + 1e-9);
  }

  RowMatrix anti(2, 3);
  anti << 0.6, 0.0, 0.8, -0.6, 0.0, -0.8;
  const InfeasibilityCertificate pair = infeasibility_certificate(from_rows(anti), 200);
  CHECK(pair.norm <= 3.0 * std::sqrt(std::log(2.0)) / 400.0 + 1e-9);
  CHECK(pair.p_bar[0] == doctest::Approx(0.5).epsilon(1e-6));

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset sep = exact_data(16, 4, 0.3, seed);
    const InfeasibilityCertificate c = infeasibility_certificate(sep, 100);
    CHECK(c.norm >= normalized_margin(sep, *sep.w_star()) - 1e-12);
  }
}

TEST_CASE("l2-only algorithms reject other norm regimes") {
  GenSpec spec;
  spec.n = 8;
  spec.d = 3;
  spec.gamma = 0.2;
  spec.mode = GenMode::LowerBound;
  spec.norm_exponent = 4.0;
  const Dataset p4 = gen_separable(spec);
  CHECK_THROWS_AS(smooth_perceptron(p4, 5), Error);
  CHECK_THROWS_AS(accel_perceptron_ji(p4, 5), Error);
  CHECK_THROWS_AS(nag_margin(p4, 5), Error);
  CHECK_THROWS_AS(mpfp(p4, 5), Error);
  CHECK_THROWS_AS(vanilla_perceptron(p4, 5), Error);
  CHECK_NOTHROW(pnorm_accelerated(p4, 5, 4.0));
  const Dataset l2 = exact_data(8, 3, 0.2, 0);
  CHECK_THROWS_AS(smooth_perceptron(l2, 0), Error);
}

TEST_CASE("equivalence checker") {
  GenSpec spec;
  spec.n = 16;
  spec.d = 4;
  spec.gamma = 0.3;
  spec.seed = 11;
  const Dataset data = gen_separable(spec);
  for (auto kind : {EquivalenceKind::Prop1, EquivalenceKind::Prop2, EquivalenceKind::Nag,
                    EquivalenceKind::Mpfp}) {
    CHECK(check_equivalence(kind, data, 1).pass);
    const EquivalenceReport rep = check_equivalence(kind, data, 50, 1e-8);
    CHECK(rep.pass);
    for (const QuantityDeviation& q : rep.quantities) CHECK(q.rel_dev < 1e-8);
    CHECK_FALSE(check_equivalence(kind, data, 50, 1e-8, 1e-3).pass);
  }
  CHECK(parse_equivalence_kind("mpfp") == EquivalenceKind::Mpfp);
  CHECK_THROWS_AS(parse_equivalence_kind("prop3"), Error);
}

TEST_CASE("deviation accumulator") {
  QuantityDeviation q{"x"};
  accumulate_deviation(q, Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d(1.0, 2.0), 1e-8);
  CHECK(q.pass);
  CHECK(q.abs_dev == 0.0);
  accumulate_deviation(q, Eigen::Vector2d(1.0, 2.0 + 1e-6), Eigen::Vector2d(1.0, 2.0), 1e-8);
  CHECK_FALSE(q.pass);
  CHECK(q.rel_dev == doctest::Approx(5e-7));

  QuantityDeviation tiny{"y"};
  accumulate_deviation(tiny, Eigen::Vector2d(1e-11, 0), Eigen::Vector2d(0, 0), 1e-8);
  CHECK(tiny.pass);

  QuantityDeviation nan{"z"};
  accumulate_deviation(nan, Eigen::Vector2d(std::nan(""), 0), Eigen::Vector2d(0, 0), 1e-8);
  CHECK_FALSE(nan.pass);
}
