#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "aerostt/harness/config.hpp"
#include "aerostt/propagation.hpp"
#include "oracles.hpp"

namespace {

using namespace aerostt;

struct Scenario {
  harness::ExperimentConfig cfg = harness::config_from_json(nlohmann::json::object());
  StateVector x0 = harness::initial_state(cfg);
  DynamicsParameters p = make_parameters(cfg.models);
  double tref = cfg.models.scales().time_ref;
};

TEST(Stt, ZeroLengthIntervalIsIdentity) {
  Scenario s;
  const std::vector<double> times{100.0, 100.0 + 1e-12};
  const auto stt = integrate_stts(s.x0, times, 3, s.cfg.models, IntegratorConfig{})[0];
  EXPECT_LT(frobenius_norm(stt.phi1 - identity_matrix<double>(kStateDim)), 1e-12);
  EXPECT_LT(frobenius_norm(stt.phi2), 1e-10);
  EXPECT_LT(frobenius_norm(stt.phi3), 1e-8);
}

TEST(Stt, FirstAndSecondOrderMatchFlowFiniteDifferences) {
  Scenario s;
  IntegratorConfig cfg;
  cfg.rel_tol = cfg.abs_tol = 1e-13;
  const std::vector<double> times{300.0, 310.0};
  // Start from the reference state at 300 s.
  const auto grid = integrate_trajectory(s.x0, 0.0, 300.0, 300.0, s.cfg.models, cfg);
  const StateVector xa = grid.states.back();
  const auto stt = integrate_stts(xa, times, 2, s.cfg.models, cfg)[0];
  const std::size_t n = kStateDim;
  StateOf<long double> xl;
  for (std::size_t i = 0; i < n; ++i) xl[i] = xa[i];
  IntegratorConfig oc;
  oc.rel_tol = oc.abs_tol = 1e-16;
  std::vector<long double> steps;
  const long double ta = 300.0L / s.tref, tb = 310.0L / s.tref;
  propagate_state_nd<long double>(xl, ta, tb, s.p, oc, &steps);
  Tensor fd1({n, n});
  const long double h = 1e-6L;
  for (std::size_t a = 0; a < n; ++a) {
    auto xp = xl, xm = xl;
    xp[a] += h;
    xm[a] -= h;
    const auto fp = replay_state_nd<long double>(xp, ta, steps, s.p);
    const auto fm = replay_state_nd<long double>(xm, ta, steps, s.p);
    for (std::size_t i = 0; i < n; ++i) fd1(i, a) = static_cast<double>((fp[i] - fm[i]) / (2 * h));
  }
  EXPECT_LT(oracle::rel_frobenius(stt.phi1, fd1), 1e-4);
  // Nested: differences of the integrated STM with respect to the initial state.
  Tensor fd2({n, n, n});
  const double h2 = 1e-6;
  for (std::size_t b = 0; b < n; ++b) {
    StateVector xp = xa, xm = xa;
    xp[b] += h2;
    xm[b] -= h2;
    const auto sp = integrate_stts(xp, times, 1, s.cfg.models, cfg)[0];
    const auto sm = integrate_stts(xm, times, 1, s.cfg.models, cfg)[0];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < n; ++a) fd2(i, a, b) = (sp.phi1(i, a) - sm.phi1(i, a)) / (2 * h2);
  }
  EXPECT_LT(oracle::rel_frobenius(stt.phi2, fd2), 1e-3);
}

TEST(Stt, CompositionRules) {
  std::mt19937_64 rng(11);
  const auto a = oracle::random_stt(rng, 4), b = oracle::random_stt(rng, 4);
  auto id = identity_stt<double>(3, 0.0, 4);
  auto a0 = a;
  a0.t_start = a0.t_end = 0.0;
  const auto left = compose_stts(id, a0), right = compose_stts(a0, id);
  EXPECT_LT(frobenius_norm(left.phi2 - a.phi2), 1e-13);
  EXPECT_LT(frobenius_norm(right.phi3 - a.phi3), 1e-12);
  // Order-1 composition is the matrix product bc.phi1 * ab.phi1.
  auto a1 = oracle::random_stt(rng, 4, 1), b1 = oracle::random_stt(rng, 4, 1);
  a1.t_start = 0, a1.t_end = 1, b1.t_start = 1, b1.t_end = 2;
  const auto c1 = compose_stts(a1, b1);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      double m = 0;
      for (std::size_t k = 0; k < 4; ++k) m += b1.phi1(i, k) * a1.phi1(k, j);
      EXPECT_NEAR(c1.phi1(i, j), m, 1e-13);
    }
  // Composition along a random quadratic map agrees with the map of the composed polynomial.
  auto a2 = a, b2 = b;
  a2.t_start = 0, a2.t_end = 1, b2.t_start = 1, b2.t_end = 2;
  const auto c = compose_stts(a2, b2);
  std::array<double, 4> dx{1e-3, -2e-3, 0.5e-3, 1.5e-3};
  const auto direct = oracle::taylor(b2, oracle::taylor(a2, dx, 3), 3);
  const auto composed = oracle::taylor(c, dx, 3);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(composed[i], direct[i], 1e-7);
  EXPECT_THROW(compose_stts(b2, a2), std::invalid_argument);
}

TEST(Stt, ComposedIntervalsMatchDirectIntegration) {
  Scenario s;
  const std::vector<double> two{200.0, 250.0, 300.0}, one{200.0, 300.0};
  const auto grid = integrate_trajectory(s.x0, 0.0, 200.0, 200.0, s.cfg.models, IntegratorConfig{});
  const auto parts = integrate_stts(grid.states.back(), two, 3, s.cfg.models, IntegratorConfig{});
  const auto direct = integrate_stts(grid.states.back(), one, 3, s.cfg.models, IntegratorConfig{})[0];
  const auto composed = compose_stts(parts[0], parts[1]);
  EXPECT_LT(oracle::rel_frobenius(composed.phi1, direct.phi1), 1e-8);
  EXPECT_LT(oracle::rel_frobenius(composed.phi2, direct.phi2), 1e-8);
  EXPECT_LT(oracle::rel_frobenius(composed.phi3, direct.phi3), 1e-8);
}

TEST(Stt, PerturbationMapBasics) {
  std::mt19937_64 rng(5);
  const auto stt = oracle::random_stt(rng, kStateDim);
  StateArray zero{};
  for (int m = 1; m <= 3; ++m)
    for (double v : propagate_perturbation_stt(stt, zero, m)) EXPECT_EQ(v, 0.0);
  StateArray dx{1e-3, 2e-3, -1e-3, 0.0, 5e-4, 1e-4, -2e-3};
  const auto lin = propagate_perturbation_stt(stt, dx, 1);
  for (std::size_t i = 0; i < kStateDim; ++i) {
    double s = 0;
    for (std::size_t a = 0; a < kStateDim; ++a) s += stt.phi1(i, a) * dx[a];
    EXPECT_DOUBLE_EQ(lin[i], s);
  }
  const auto third = propagate_perturbation_stt(stt, dx, 3);
  const auto ref = oracle::taylor(stt, dx, 3);
  for (std::size_t i = 0; i < kStateDim; ++i) EXPECT_NEAR(third[i], ref[i], 1e-15);
  EXPECT_THROW(propagate_perturbation_stt(oracle::random_stt(rng, kStateDim, 2), dx, 3), std::invalid_argument);
}

TEST(Stt, ReplayedSttsAreDerivativesOfTheReplayedFlow) {
  Scenario s;
  StateOf<long double> xl;
  for (std::size_t i = 0; i < kStateDim; ++i) xl[i] = s.x0[i];
  IntegratorConfig oc;
  oc.rel_tol = oc.abs_tol = 1e-14;
  std::vector<long double> steps;
  const long double t1 = 50.0L / s.tref;
  propagate_state_nd<long double>(xl, 0.0L, t1, s.p, oc, &steps);
  const auto stt = replay_stts_nd<long double>(xl, 0.0L, steps, s.p, 1, 0.0, 50.0);
  const long double h = 1e-7L;
  for (std::size_t a = 0; a < kStateDim; ++a) {
    auto xp = xl, xm = xl;
    xp[a] += h;
    xm[a] -= h;
    const auto fp = replay_state_nd<long double>(xp, 0.0L, steps, s.p);
    const auto fm = replay_state_nd<long double>(xm, 0.0L, steps, s.p);
    for (std::size_t i = 0; i < kStateDim; ++i)
      EXPECT_NEAR(static_cast<double>((fp[i] - fm[i]) / (2 * h)), static_cast<double>(stt.phi1(i, a)),
                  1e-7 * (1 + std::abs(static_cast<double>(stt.phi1(i, a)))));
  }
}

}  // namespace
