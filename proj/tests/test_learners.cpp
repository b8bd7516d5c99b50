#include <cmath>

#include <doctest.h>

#include "nrp/error.hpp"
#include "nrp/learners.hpp"
#include "oracles.hpp"

using namespace nrp;

namespace {

LearnerState w_state_with_history(const Dataset& data,
                                  const std::vector<Eigen::VectorXd>& ps,
                                  const std::vector<double>& alphas) {
  LearnerState s = LearnerState::for_w(data.n(), data.d());
  for (std::size_t k = 0; k < ps.size(); ++k) absorb(s, alphas[k], ps[k]);
  return s;
}

}  // namespace

TEST_CASE("entropy FTRL+ examples") {
  LearnerState s = LearnerState::for_p(4);
  const SimplexPoint uniform = entropy_ftrl_plus_step(s, 1.0, Eigen::VectorXd::Zero(4), 0.25);
  CHECK(oracle::close_rel(uniform.values(), Eigen::VectorXd::Constant(4, 0.25), 1e-15));
  CHECK(s.round == 1);

  LearnerState two = LearnerState::for_p(2);
  const SimplexPoint p = entropy_ftrl_plus_step(two, 1.0, Eigen::Vector2d(0, 4), 0.25);
  CHECK(p[0] == doctest::Approx(0.7310585786300049).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.2689414213699951).epsilon(1e-12));
  const Eigen::VectorXd ref = oracle::simplex_entropy_minimizer(
      Eigen::Vector2d(0, 1), 1.0, Eigen::Vector2d(0.5, 0.5));
  CHECK(oracle::close_rel(p.values(), ref, 1e-9));

  LearnerState shifted = LearnerState::for_p(2);
  const SimplexPoint q = entropy_ftrl_plus_step(shifted, 1.0, Eigen::Vector2d(7, 11), 0.25);
  CHECK(oracle::close_rel(q.values(), p.values(), 1e-14));
}

TEST_CASE("entropy OFTRL examples and oracle") {
  const LearnerState empty = LearnerState::for_p(3);
  CHECK(oracle::close_rel(entropy_oftrl_step(empty, 1.0, Eigen::VectorXd::Zero(3), 0.25).values(),
                          Eigen::VectorXd::Constant(3, 1.0 / 3.0), 1e-15));

  oracle::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    LearnerState s = LearnerState::for_p(3);
    absorb(s, 1.0, oracle::random_vector(rng, 3));
    absorb(s, 2.0, oracle::random_vector(rng, 3));
    const Eigen::VectorXd hint = oracle::random_vector(rng, 3);
    const double eta = 0.25 + trial * 0.1;
    const SimplexPoint p = entropy_oftrl_step(s, 3.0, hint, eta);
    const Eigen::VectorXd ref = oracle::simplex_entropy_minimizer(
        eta * (s.cumulative + 3.0 * hint), 1.0, Eigen::VectorXd::Constant(3, 1.0 / 3.0));
    CHECK(oracle::close_rel(p.values(), ref, 1e-8));

    // With the realized loss as hint, OFTRL and FTRL+ agree.
    LearnerState copy = s;
    const SimplexPoint plus = entropy_ftrl_plus_step(copy, 3.0, hint, eta);
    CHECK(oracle::close_rel(p.values(), plus.values(), 1e-14));
  }
}

TEST_CASE("OFTL and unregularized FTRL w-steps") {
  oracle::Rng rng(4);
  const Dataset data = oracle::random_dataset(rng, 5, 3);
  const Eigen::VectorXd mean_row = data.A().transpose() * Eigen::VectorXd::Constant(5, 0.2);

  const LearnerState empty = LearnerState::for_w(5, 3);
  CHECK(oracle::close_rel(oftl_w_step(empty, 1.0, SimplexPoint::uniform(5), data), mean_row, 1e-14));

  LearnerState first = LearnerState::for_w(5, 3);
  CHECK(oracle::close_rel(unregularized_ftrl_w_step(first, 1.0, SimplexPoint::uniform(5), data),
                          mean_row, 1e-14));

  const SimplexPoint fixed(oracle::random_simplex(rng, 5));
  LearnerState constant = LearnerState::for_w(5, 3);
  for (int t = 1; t <= 4; ++t) {
    const Eigen::VectorXd w = oftl_w_step(constant, t, fixed, data);
    CHECK(oracle::close_rel(w, data.A().transpose() * fixed.values(), 1e-13));
    absorb(constant, t, fixed.values());
  }
}

TEST_CASE("w-step closed forms match the quadratic oracle") {
  oracle::Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset data = oracle::random_dataset(rng, 5, 4);
    std::vector<Eigen::VectorXd> ps{oracle::random_simplex(rng, 5), oracle::random_simplex(rng, 5)};
    const std::vector<double> alphas{1.0, 2.0};
    const SimplexPoint p_prev(ps.back());
    const LearnerState s = w_state_with_history(data, ps, alphas);
    const double alpha = 3.0;

    auto h = [&](const Eigen::VectorXd& p, const Eigen::VectorXd& w) {
      return -p.dot(data.A() * w) + 0.5 * w.squaredNorm();
    };
    auto oftl_obj = [&](const Eigen::VectorXd& w) {
      return alphas[0] * h(ps[0], w) + alphas[1] * h(ps[1], w) + alpha * h(ps[1], w);
    };
    CHECK(oracle::close_rel(oftl_w_step(s, alpha, p_prev, data),
                            oracle::quadratic_minimizer(oftl_obj, 4), 1e-9));

    const Eigen::VectorXd p_now = oracle::random_simplex(rng, 5);
    auto ftrl_obj = [&](const Eigen::VectorXd& w) {
      return alphas[0] * h(ps[0], w) + alphas[1] * h(ps[1], w) + alpha * h(p_now, w);
    };
    LearnerState copy = s;
    CHECK(oracle::close_rel(unregularized_ftrl_w_step(copy, alpha, SimplexPoint(p_now), data),
                            oracle::quadratic_minimizer(ftrl_obj, 4), 1e-9));
  }
}

TEST_CASE("q-norm dual map") {
  oracle::Rng rng(9);
  const Eigen::VectorXd theta = oracle::random_vector(rng, 4);
  CHECK(qnorm_dual_map(theta, 2.0) == theta);
  CHECK(qnorm_dual_map(Eigen::VectorXd::Zero(4), 1.5) == Eigen::VectorXd::Zero(4));
  for (double q : {1.1, 1.5, 2.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::VectorXd th = oracle::random_vector(rng, 4);
      const Eigen::VectorXd w = qnorm_dual_map(th, q);
      CHECK(oracle::close_rel(oracle::qnorm_gradient(w, q), th, 1e-10));
      CHECK(oracle::close_rel(qnorm_regularizer_gradient(w, q), th, 1e-10));
    }
  }
  // Finite differences cannot resolve |w_i|^{q-1} near zero for q close to
  // 1 (coordinates reach 1e-8 at q = 1.25), so they only cover q >= 1.5.
  for (double q : {1.5, 2.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::VectorXd th = oracle::random_vector(rng, 4);
      const Eigen::VectorXd w = qnorm_dual_map(th, q);
      const Eigen::VectorXd fd = oracle::richardson_gradient(
          [&](const Eigen::VectorXd& x) { return qnorm_regularizer(x, q); }, w);
      CHECK(oracle::close_rel(fd, th, 1e-8));
    }
  }
}

TEST_CASE("q-norm OFTRL matches its objective's minimizer") {
  oracle::Rng rng(10);
  for (double q : {1.25, 1.5, 2.0}) {
    const Dataset data = oracle::random_dataset(rng, 4, 3);
    LearnerState s = LearnerState::for_w(4, 3);
    const double eta = 0.7;
    CHECK(oracle::close_rel(qnorm_oftrl_step(s, 1.0, SimplexPoint::uniform(4), data, eta, 2.0),
                            eta * data.A().transpose() * Eigen::VectorXd::Constant(4, 0.25),
                            1e-14));
    absorb(s, 1.0, oracle::random_simplex(rng, 4));
    const SimplexPoint hint(oracle::random_simplex(rng, 4));
    const Eigen::VectorXd w = qnorm_oftrl_step(s, 1.0, hint, data, eta, q);
    const Eigen::VectorXd theta =
        eta * data.A().transpose() * (s.cumulative + hint.values());
    CHECK(oracle::close_rel(w, oracle::qnorm_linear_minimizer(theta, q), 1e-7));
  }
}

TEST_CASE("optimistic mirror descent on the ball") {
  LearnerState s = LearnerState::for_w(3, 2);
  const Eigen::Vector2d zero(0, 0);
  BallStep fixed = omd_ball_step(s, 1.0, zero, zero, 0.5);
  CHECK(fixed.decision == zero);
  CHECK(fixed.secondary == zero);

  const Eigen::Vector2d g(0.3, -0.4);
  BallStep inside = omd_ball_step(s, 1.0, g, g, 0.5);
  CHECK(oracle::close_rel(inside.decision, -0.5 * g, 1e-15));

  LearnerState o = LearnerState::for_w(3, 2);
  const Eigen::Vector2d big(4, -2);
  const double eta = 2.0 / big.norm();
  BallStep outside = omd_ball_step(o, 1.0, big, big, eta);
  CHECK(outside.decision.norm() == doctest::Approx(1.0));
  CHECK(oracle::close_rel(outside.decision, -big / big.norm(), 1e-14));
  CHECK(oracle::close_rel(outside.decision, oracle::ball_prox_minimizer(zero, eta * big), 1e-10));

  oracle::Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::VectorXd c = oracle::random_vector(rng, 4);
    c *= 0.9 / std::max(1.0, c.norm());
    const Eigen::VectorXd gr = oracle::random_vector(rng, 4, 2.0);
    CHECK(oracle::close_rel(ball_prox_step(c, 1.5, gr, 0.6),
                            oracle::ball_prox_minimizer(c, 0.9 * gr), 1e-9));
  }
}

TEST_CASE("optimistic mirror descent on the simplex") {
  LearnerState s = LearnerState::for_p(3);
  const Eigen::Vector3d zero(0, 0, 0);
  SimplexStep same = omd_simplex_step(s, 1.0, zero, zero, 1.0);
  CHECK(oracle::close_rel(same.secondary.values(), Eigen::VectorXd::Constant(3, 1.0 / 3.0), 1e-15));
  SimplexStep shift = omd_simplex_step(s, 1.0, Eigen::Vector3d(5, 5, 5), Eigen::Vector3d(2, 2, 2), 1.0);
  CHECK(oracle::close_rel(shift.decision.values(), Eigen::VectorXd::Constant(3, 1.0 / 3.0), 1e-15));

  oracle::Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const SimplexPoint c(oracle::random_simplex(rng, 3));
    const Eigen::VectorXd g = oracle::random_vector(rng, 3);
    const SimplexPoint p = simplex_prox_step(c, 2.0, g, 0.4);
    CHECK(oracle::close_rel(p.values(), oracle::simplex_entropy_minimizer(0.8 * g, 1.0, c.values()),
                            1e-8));
  }

  Eigen::Vector3d with_zero(0.5, 0.5, 0.0);
  LearnerState degenerate = LearnerState::for_p(3);
  degenerate.secondary = with_zero;
  try {
    omd_simplex_step(degenerate, 1.0, zero, zero, 1.0);
    FAIL("accepted a center with a zero coordinate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Degenerate);
  }
}

TEST_CASE("learner specs validate their parameters") {
  CHECK_THROWS_AS(LearnerSpec::ftrl_plus_entropy(0.0).validate(), Error);
  CHECK_THROWS_AS(LearnerSpec::oftrl_qnorm(1.0, 2.5).validate(), Error);
  CHECK_THROWS_AS(LearnerSpec::oftrl_qnorm(1.0, 1.0).validate(), Error);
  CHECK_NOTHROW(LearnerSpec::oftrl_qnorm(1.0, 1.5).validate());
  CHECK(LearnerSpec::omd_ball(1.0).plays_w());
  CHECK_FALSE(LearnerSpec::omd_entropy(1.0).plays_w());
  CHECK(LearnerSpec::ftrl_plus_unregularized().responds_to_current());
}

TEST_CASE("regret accumulators") {
  oracle::Rng rng(14);
  const Dataset data = oracle::random_dataset(rng, 4, 3);
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(4, 0.25);

  // One round with w_1 = 0 against uniform p: the comparator gains ||A^T u||^2 / 2.
  RegretAccumulators acc = RegretAccumulators::zeros(4);
  acc.add(1.0, Eigen::VectorXd::Zero(3), u, Eigen::VectorXd::Zero(4));
  const double expected = 0.5 * (data.A().transpose() * u).squaredNorm();
  CHECK(regret_w(acc, data, GameObjective::L2Regularized, WComparator::Unconstrained) ==
        doctest::Approx(expected).epsilon(1e-14));

  // Playing the optimum gives zero regret.
  RegretAccumulators best = RegretAccumulators::zeros(4);
  const Eigen::VectorXd w_opt = data.A().transpose() * u;
  best.add(1.0, w_opt, u, data.A() * w_opt);
  CHECK(std::abs(regret_w(best, data, GameObjective::L2Regularized,
                          WComparator::Unconstrained)) <= 1e-15);

  // Constant w with p on its worst row: zero p-regret.
  RegretAccumulators vert = RegretAccumulators::zeros(4);
  const Eigen::VectorXd w = oracle::random_vector(rng, 3);
  const MarginResult m = margin_with_row(data, w);
  for (int t = 1; t <= 3; ++t) {
    vert.add(t, w, SimplexPoint::vertex(4, m.row).values(), data.A() * w);
  }
  CHECK(std::abs(regret_p(vert)) <= 1e-14);

  // Uniform p against asymmetric losses: strictly positive.
  RegretAccumulators uni = RegretAccumulators::zeros(4);
  uni.add(1.0, w, u, data.A() * w);
  CHECK(regret_p(uni) > 0.0);

  CHECK_THROWS_AS(w_comparator(LearnerSpec::oftl_prev_loss(), GameObjective::Bilinear), Error);
  CHECK(w_comparator(LearnerSpec::omd_ball(1.0), GameObjective::Bilinear) == WComparator::UnitBall);
}

TEST_CASE("regret against fixed play sequences is nonnegative") {
  // The iterates below ignore the opponent, so the exact comparator can only
  // do at least as well as the played sequence.
  oracle::Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset data = oracle::random_dataset(rng, 5, 3);
    RegretAccumulators acc = RegretAccumulators::zeros(5);
    const Eigen::VectorXd w = oracle::random_vector(rng, 3);
    for (int t = 1; t <= 6; ++t) {
      const Eigen::VectorXd p = oracle::random_simplex(rng, 5);
      acc.add(t, w, p, data.A() * w);
    }
    CHECK(regret_w(acc, data, GameObjective::L2Regularized, WComparator::Unconstrained) >= -1e-9);
  }
}
