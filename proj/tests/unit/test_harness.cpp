#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "aerostt/harness/context.hpp"
#include "aerostt/harness/experiments.hpp"
#include "aerostt/tensor_eigen.hpp"

namespace {

using namespace aerostt;
using namespace aerostt::harness;
using nlohmann::json;

ExperimentConfig short_config(double tf = 100.0) {
  return config_from_json(json{{"time", {{"tf", tf}}}, {"validation", {{"start", 0.0}, {"length", tf}}}});
}

TEST(Harness, VacuumReferenceHasNoLoadsAndConservesEnergy) {
  AnalysisContext ctx(config_from_json(json{{"aero_enabled", false},
                                            {"planet", {{"rotation_rate", 0}, {"j2", 0}}},
                                            {"time", {{"tf", 300}}},
                                            {"validation", {{"start", 0.0}, {"length", 300.0}}}}));
  const auto ref = run_reference(ctx);
  for (double q : ref.dynamic_pressure) EXPECT_EQ(q, 0.0);
  for (double a : ref.accel_ratio) EXPECT_EQ(a, 0.0);
  for (double e : ref.energy) EXPECT_NEAR(e / ref.energy.front(), 1.0, 1e-10);
  const auto w = accel_ratio_window(ref);
  EXPECT_TRUE(std::isnan(w.first));
}

TEST(Harness, ReferenceGridAndWindow) {
  AnalysisContext ctx(config_from_json(json::object()));
  const auto ref = run_reference(ctx);
  ASSERT_EQ(ref.times.size(), 79u);
  EXPECT_EQ(ref.times.back(), 780.0);
  for (std::size_t k = 1; k < ref.energy.size(); ++k) EXPECT_LT(ref.energy[k], ref.energy[k - 1]);
  const auto w = accel_ratio_window(ref);
  EXPECT_LT(w.first, w.second);
  EXPECT_TRUE(std::isfinite(ref.apoapsis.back()));
}

TEST(Harness, MonteCarloWithoutSamples) {
  AnalysisContext ctx(short_config());
  const auto r = run_monte_carlo(ctx, 0, 1, {"STM", "hoDSTT"}, false);
  ASSERT_EQ(r.methods.size(), 2u);
  EXPECT_EQ(r.at("STM").energy_stats.count, 0u);
  EXPECT_TRUE(r.at("hoDSTT").energy_error.empty());
  EXPECT_THROW(r.at("STT2"), std::out_of_range);
}

TEST(Harness, MonteCarloIsDeterministic) {
  const std::vector<std::string> methods{"STM", "STT2", "hoDSTT", "eps-qDSTT"};
  AnalysisContext a(short_config()), b(short_config());
  const auto ra = run_monte_carlo(a, 8, 42, methods, true);
  const auto rb = run_monte_carlo(b, 8, 42, methods, true);
  for (const auto& m : methods) {
    EXPECT_EQ(ra.at(m).energy_error, rb.at(m).energy_error);
    EXPECT_EQ(ra.at(m).energy_history, rb.at(m).energy_history);
  }
  const auto rc = run_monte_carlo(a, 8, 43, methods, false);
  EXPECT_NE(ra.at("STM").energy_error, rc.at("STM").energy_error);
  // Second order beats first order on every sample for these tiny perturbations.
  for (int s = 0; s < 8; ++s) EXPECT_LT(ra.at("STT2").energy_error[s], ra.at("STM").energy_error[s]);
}

TEST(Harness, DirectionStudyEndpoints) {
  auto c = config_from_json(json::object());
  c.direction_angles = 3;
  AnalysisContext ctx(c);
  const auto d = run_direction_study(ctx);
  ASSERT_EQ(d.kappa_deg, (std::vector<double>{0.0, 45.0, 90.0}));
  const auto& stm = d.errors[0];
  const auto& ho = d.errors[2];
  for (std::size_t k = 0; k < d.times.size(); ++k) EXPECT_EQ(ho[2][k], stm[2][k]);
  EXPECT_GE(stm[0].back(), stm[2].back());
  EXPECT_LT(ho[0].back(), stm[0].back());
  EXPECT_NEAR(vector_angle(d.r2, d.u), 90.0, 1e-9);
}

TEST(Harness, HigherOrderBasisMaximizesCubicTerm) {
  AnalysisContext ctx(config_from_json(json::object()));
  const auto& map = ctx.full_map();
  BasisAux aux;
  aux.eigen = ctx.config().eigen;
  const auto ho = build_basis(BasisMethod::Hocgt, 1, map, aux);
  const auto lin = build_basis(BasisMethod::Cgt2TopL, 1, map, aux);
  std::vector<double> a(kStateDim), b(kStateDim);
  for (std::size_t i = 0; i < kStateDim; ++i) {
    a[i] = ho.R2(0, i);
    b[i] = lin.R2(0, i);
  }
  // Up to the sign convention of the rows, the order-3 coefficient tensor is at
  // least as large along its maximal eigenvector as along the dominant linear
  // stretching direction.
  const auto c3 = symmetrize(hocgt_coeffs(map, 3));
  EXPECT_GE(std::abs(c3.contract(a)) + 1e-12 * c3.norm(), std::abs(c3.contract(b)));
  EXPECT_NEAR(std::abs(c3.contract(a)), ho.lambda2[0], 1e-9 * c3.norm());
}

TEST(Harness, FullRankDsttIsExactAndMaximalityIsNormalized) {
  AnalysisContext ctx(config_from_json(json::object()));
  for (const auto& row : run_frobenius(ctx, {"7-DSTT"})) {
    EXPECT_LT(row.eps2, 1e-12);
    EXPECT_LT(row.eps3, 1e-12);
  }
  const auto rows = run_maximality(ctx, "hocgt");
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0].relative, 1.0);
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_NEAR(rows[k].angle_deg, 90.0, 1e-9);
}

}  // namespace
