#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "aerostt/cgt.hpp"
#include "aerostt/tensor_eigen.hpp"
#include "oracles.hpp"

namespace {

using namespace aerostt;

TEST(Symmetrize, SingleEntrySpreadsOverPermutations) {
  Tensor t({3, 3, 3});
  t(0, 1, 2) = 6.0;
  const auto s = symmetrize(t);
  double total = 0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        const bool perm = i != j && j != k && i != k;
        EXPECT_DOUBLE_EQ(s.data(i, j, k), perm ? 1.0 : 0.0);
        total += s.data(i, j, k);
      }
  EXPECT_DOUBLE_EQ(total, 6.0);
}

TEST(Symmetrize, IdempotentAndPreservesContractions) {
  std::mt19937_64 rng(1);
  const Tensor tensors[] = {oracle::random_tensor(rng, {4, 4}), oracle::random_tensor(rng, {4, 4, 4}),
                            oracle::random_tensor(rng, {4, 4, 4, 4})};
  for (const Tensor& t : tensors) {
    const auto s = symmetrize(t);
    const auto s2 = symmetrize(s.data);
    EXPECT_LT(frobenius_norm(s2.data - s.data), 1e-14);
    for (int k = 0; k < 1000; ++k) {
      const auto x = oracle::random_unit(rng, 4);
      EXPECT_NEAR(contract_all(t, x), s.contract(x), 1e-12);
    }
  }
}

TEST(Cgt2, IdentityDiagonalAndSvd) {
  const std::size_t n = 7;
  const Tensor I = identity_matrix<double>(n);
  for (double v : symmetric_eigen(second_order_cgt(I)).values) EXPECT_NEAR(v, 1.0, 1e-15);
  Tensor D = identity_matrix<double>(n);
  D(0, 0) = 2.0;
  const auto e = symmetric_eigen(second_order_cgt(D));
  EXPECT_NEAR(e.values[0], 4.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vectors[0][0]), 1.0, 1e-14);
  std::mt19937_64 rng(2);
  const Tensor F = oracle::random_tensor(rng, {n, n});
  Eigen::MatrixXd M(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M(static_cast<int>(i), static_cast<int>(j)) = F(i, j);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues();
  const auto ev = symmetric_eigen(second_order_cgt(F)).values;
  for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(ev[k] / (sv(static_cast<int>(k)) * sv(static_cast<int>(k))), 1.0, 1e-10);
}

TEST(Hocgt, DegenerateCases) {
  std::mt19937_64 rng(3);
  auto s = oracle::random_stt(rng, 5);
  s.phi2 = Tensor({5, 5, 5});
  EXPECT_EQ(frobenius_norm(hocgt_coeffs(s, 3)), 0.0);
  SttSet scalar = identity_stt<double>(2, 0.0, 1);
  scalar.phi1(0, 0) = 1.7;
  scalar.phi2(0, 0, 0) = -0.3;
  EXPECT_DOUBLE_EQ(hocgt_coeffs(scalar, 3)(0, 0, 0), 1.7 * -0.3);
}

// Coefficients of |g(s v)|^2 written out as polynomials in s.
TEST(Hocgt, MatchesPolynomialExpansion) {
  std::mt19937_64 rng(4);
  const std::size_t n = 4;
  const auto s = oracle::random_stt(rng, n);
  const std::vector<std::size_t> all{0, 1, 2, 3};
  const Tensor c2 = hocgt_coeffs(s, 2), c3 = hocgt_coeffs(s, 3), c4 = hocgt_coeffs(s, 4);
  for (int k = 0; k < 200; ++k) {
    const auto v = oracle::random_unit(rng, n);
    const auto c = oracle::squared_norm_poly(oracle::directional_terms(s, v), all);
    EXPECT_NEAR(contract_all(c2, v), c[0], 1e-10 * (1 + std::abs(c[0])));
    EXPECT_NEAR(contract_all(c3, v), c[1], 1e-10 * (1 + std::abs(c[1])));
    EXPECT_NEAR(contract_all(c4, v), c[2], 1e-10 * (1 + std::abs(c[2])));
  }
  // Coefficient-wise: the symmetrized order-3 tensor written from its definition.
  Tensor ref({n, n, n});
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t d = 0; d < n; ++d)
        for (std::size_t i = 0; i < n; ++i) ref(a, b, d) += s.phi1(i, a) * s.phi2(i, b, d);
  EXPECT_LT(frobenius_norm(symmetrize(ref).data - symmetrize(c3).data), 1e-10);
}

TEST(Scgt, SelectionCases) {
  std::mt19937_64 rng(5);
  const std::size_t n = 4;
  const auto s = oracle::random_stt(rng, n);
  const SelectionMatrix all({0, 1, 2, 3}, n);
  for (int m = 2; m <= 4; ++m) EXPECT_LT(frobenius_norm(scgt_coeffs(s, all, m) - hocgt_coeffs(s, m)), 1e-12);
  const SelectionMatrix one({2}, n);
  const Tensor c2 = scgt_coeffs(s, one, 2);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) EXPECT_NEAR(c2(a, b), s.phi1(2, a) * s.phi1(2, b), 1e-14);
  const SelectionMatrix two({0, 3}, n);
  for (int k = 0; k < 200; ++k) {
    const auto v = oracle::random_unit(rng, n);
    const auto c = oracle::squared_norm_poly(oracle::directional_terms(s, v), {0, 3});
    for (int m = 2; m <= 4; ++m)
      EXPECT_NEAR(contract_all(scgt_coeffs(s, two, m), v), c[m - 2], 1e-10 * (1 + std::abs(c[m - 2])));
  }
  EXPECT_EQ(position_speed_fpa_selection().rows(), (std::vector<std::size_t>{kR, kV, kGamma}));
  EXPECT_THROW(SelectionMatrix({1, 1}, 3), std::invalid_argument);
}

QoiPartials random_scalar_quantity(std::mt19937_64& rng, std::size_t n) {
  QoiPartials q;
  q.kind = "test";
  q.order = 3;
  q.value = {0.0};
  q.eta1 = oracle::random_tensor(rng, {1, n});
  q.eta2 = oracle::random_tensor(rng, {1, n, n});
  q.eta3 = oracle::random_tensor(rng, {1, n, n, n});
  symmetrize_trailing2(q.eta2);
  symmetrize_trailing3(q.eta3);
  return q;
}

TEST(Qcgt, ReducesToHocgtForIdentityQuantity) {
  std::mt19937_64 rng(6);
  const auto s = oracle::random_stt(rng, 5);
  const auto id = identity_qoi(5, 3);
  for (int m = 2; m <= 4; ++m) EXPECT_LT(frobenius_norm(qcgt_coeffs(s, id, m) - hocgt_coeffs(s, m)), 1e-12);
}

TEST(Qcgt, LinearQuantityGivesOuterProductOfGradient) {
  std::mt19937_64 rng(7);
  const std::size_t n = 5;
  const auto s = oracle::random_stt(rng, n);
  auto q = random_scalar_quantity(rng, n);
  q.eta2 = Tensor({1, n, n});
  q.eta3 = Tensor({1, n, n, n});
  const Tensor c2 = qcgt_coeffs(s, q, 2);
  std::vector<double> g(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t j = 0; j < n; ++j) g[a] += q.eta1(0, j) * s.phi1(j, a);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) EXPECT_NEAR(c2(a, b), g[a] * g[b], 1e-12);
}

TEST(Qcgt, MatchesPolynomialExpansionOfQuantity) {
  std::mt19937_64 rng(8);
  const std::size_t n = 4;
  const auto s = oracle::random_stt(rng, n);
  const auto q = random_scalar_quantity(rng, n);
  for (int k = 0; k < 200; ++k) {
    const auto v = oracle::random_unit(rng, n);
    const auto t = oracle::directional_terms(s, v);
    // dq(s) = c1 s + c2 s^2 + c3 s^3 + ...
    double c1 = 0, c2 = 0, c3 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      c1 += q.eta1(0, i) * t.a1[i];
      c2 += q.eta1(0, i) * t.a2[i];
      c3 += q.eta1(0, i) * t.a3[i];
      for (std::size_t j = 0; j < n; ++j) {
        c2 += 0.5 * q.eta2(0, i, j) * t.a1[i] * t.a1[j];
        c3 += q.eta2(0, i, j) * t.a1[i] * t.a2[j];
        for (std::size_t l = 0; l < n; ++l) c3 += q.eta3(0, i, j, l) * t.a1[i] * t.a1[j] * t.a1[l] / 6.0;
      }
    }
    const double p[3] = {c1 * c1, 2 * c1 * c2, 2 * c1 * c3 + c2 * c2};
    for (int m = 2; m <= 4; ++m)
      EXPECT_NEAR(contract_all(qcgt_coeffs(s, q, m), v), p[m - 2], 1e-10 * (1 + std::abs(p[m - 2])));
  }
}

TEST(Cgt, RejectsInsufficientOrders) {
  std::mt19937_64 rng(9);
  const auto s = oracle::random_stt(rng, 3, 2);
  EXPECT_NO_THROW(hocgt_coeffs(s, 3));
  EXPECT_THROW(hocgt_coeffs(s, 4), std::invalid_argument);
  EXPECT_THROW(hocgt_coeffs(s, 5), std::invalid_argument);
}

}  // namespace
