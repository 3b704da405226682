#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "aerostt/tensor_eigen.hpp"
#include "oracles.hpp"

namespace {

using namespace aerostt;

SymmetricTensor diagonal_cubic(const std::vector<double>& d) {
  const std::size_t n = d.size();
  Tensor t({n, n, n});
  for (std::size_t i = 0; i < n; ++i) t(i, i, i) = d[i];
  return symmetrize(t);
}

TEST(SsHopm, MatrixCaseMatchesDenseSolver) {
  std::mt19937_64 rng(11);
  const std::size_t n = 6;
  Tensor a = oracle::random_tensor(rng, {n, n});
  const auto s = symmetrize(a);
  Eigen::MatrixXd M(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M(static_cast<int>(i), static_cast<int>(j)) = s.data(i, j);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const auto res = max_eigenpair(s);
  EXPECT_NEAR(res.best.lambda, es.eigenvalues()(static_cast<int>(n) - 1), 1e-10);
  std::vector<double> ref(n);
  for (std::size_t i = 0; i < n; ++i) ref[i] = es.eigenvectors()(static_cast<int>(i), static_cast<int>(n) - 1);
  EXPECT_LT(vector_angle(res.best.v, ref), 1e-5);
}

TEST(SsHopm, RankOneTensor) {
  std::mt19937_64 rng(12);
  const auto a = oracle::random_unit(rng, 5);
  Tensor t({5, 5, 5});
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      for (std::size_t k = 0; k < 5; ++k) t(i, j, k) = a[i] * a[j] * a[k];
  const auto res = max_eigenpair(symmetrize(t));
  EXPECT_NEAR(res.best.lambda, 1.0, 1e-12);
  EXPECT_LT(vector_angle(res.best.v, a), 1e-6);
}

TEST(SsHopm, DiagonalCubicCandidates) {
  const auto t = diagonal_cubic({3.0, 1.0});
  const auto res = max_eigenpair(t);
  EXPECT_NEAR(res.best.lambda, 3.0, 1e-12);
  EXPECT_NEAR(std::abs(res.best.v[0]), 1.0, 1e-10);
  bool found_second = false;
  for (const auto& c : res.candidates)
    if (std::abs(c.lambda - 1.0) < 1e-10 && std::abs(std::abs(c.v[1]) - 1.0) < 1e-8) found_second = true;
  EXPECT_TRUE(found_second);
  for (std::size_t k = 1; k < res.candidates.size(); ++k)
    EXPECT_GE(res.candidates[k - 1].lambda, res.candidates[k].lambda);
}

TEST(SsHopm, CandidatesAreDistinctAndOddOrderNonNegative) {
  std::mt19937_64 rng(13);
  const auto t = symmetrize(oracle::random_tensor(rng, {5, 5, 5}));
  EigenSearchConfig cfg;
  const auto res = max_eigenpair(t, cfg);
  ASSERT_FALSE(res.candidates.empty());
  for (std::size_t a = 0; a < res.candidates.size(); ++a) {
    EXPECT_GE(res.candidates[a].lambda, 0.0);
    EXPECT_LT(res.candidates[a].relative_residual, 1e-10);
    for (std::size_t b = a + 1; b < res.candidates.size(); ++b)
      EXPECT_GT(vector_angle(res.candidates[a].v, res.candidates[b].v) * M_PI / 180.0, cfg.dedup_angle);
  }
}

TEST(SsHopm, ResidualAndNormInvariants) {
  std::mt19937_64 rng(14);
  for (int k = 0; k < 10; ++k) {
    const auto t = symmetrize(oracle::random_tensor(rng, {4, 4, 4, 4}));
    const auto p = ss_hopm(t, oracle::random_unit(rng, 4));
    ASSERT_TRUE(p.converged);
    double norm = 0;
    for (double x : p.v) norm += x * x;
    EXPECT_NEAR(norm, 1.0, 1e-12);
    const auto g = t.contract_vector(p.v);
    double r = 0;
    for (std::size_t i = 0; i < 4; ++i) r += (g[i] - p.lambda * p.v[i]) * (g[i] - p.lambda * p.v[i]);
    EXPECT_NEAR(std::sqrt(r), p.residual, 1e-12);
    EXPECT_NEAR(t.contract(p.v), p.lambda, 1e-10 * std::max(1.0, std::abs(p.lambda)));
  }
}

TEST(SsHopm, DeterministicForFixedSeed) {
  std::mt19937_64 rng(15);
  const auto t = symmetrize(oracle::random_tensor(rng, {6, 6, 6}));
  const auto a = max_eigenpair(t), b = max_eigenpair(t);
  EXPECT_EQ(a.best.lambda, b.best.lambda);
  EXPECT_EQ(a.best.v, b.best.v);
  EXPECT_EQ(a.candidates.size(), b.candidates.size());
}

TEST(SsHopm, ThrowsWhenNothingConverges) {
  std::mt19937_64 rng(16);
  const auto t = symmetrize(oracle::random_tensor(rng, {5, 5, 5, 5}));
  EigenSearchConfig cfg;
  cfg.n_starts = 3;
  cfg.hopm.max_iterations = 1;
  cfg.hopm.newton_polish = false;
  cfg.hopm.residual_tol = 1e-300;
  EXPECT_THROW(max_eigenpair(t, cfg), std::runtime_error);
}

TEST(VectorAngle, SignInsensitive) {
  EXPECT_NEAR(vector_angle({1, 0}, {0, 1}), 90.0, 1e-12);
  EXPECT_NEAR(vector_angle({1, 0}, {-1, 0}), 0.0, 1e-6);
  EXPECT_NEAR(vector_angle({1, 1}, {2, 0}), 45.0, 1e-12);
  std::vector<double> v{0.2, -0.9, 0.1};
  normalize_sign(v);
  EXPECT_GT(v[1], 0.0);
}

TEST(SymmetricEigen, SortedDescendingWithUnitRows) {
  Tensor m({3, 3});
  m(0, 0) = 1;
  m(1, 1) = 5;
  m(2, 2) = -2;
  const auto e = symmetric_eigen(m);
  EXPECT_EQ(e.values, (std::vector<double>{5, 1, -2}));
  EXPECT_NEAR(std::abs(e.vectors[0][1]), 1.0, 1e-15);
}

}  // namespace
