#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "aerostt/dstt.hpp"
#include "oracles.hpp"

namespace {

using namespace aerostt;
constexpr std::size_t n = kStateDim;

StateArray random_dx(std::mt19937_64& rng, double scale) {
  const auto u = oracle::random_unit(rng, n);
  StateArray dx{};
  for (std::size_t i = 0; i < n; ++i) dx[i] = scale * u[i];
  return dx;
}

std::vector<double> unit(std::size_t j) {
  std::vector<double> e(n, 0.0);
  e[j] = 1.0;
  return e;
}

double max_abs_diff(const StateArray& a, const StateArray& b) {
  double m = 0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

TEST(Basis, Cgt2FullRankIsOrthonormal) {
  std::mt19937_64 rng(21);
  const auto s = oracle::random_stt(rng, n);
  const auto b = build_basis(BasisMethod::Cgt2TopL, n, s);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double d = 0;
      for (std::size_t a = 0; a < n; ++a) d += b.R2(i, a) * b.R2(j, a);
      EXPECT_NEAR(d, i == j ? 1.0 : 0.0, 1e-12);
    }
  for (std::size_t k = 1; k < n; ++k) EXPECT_GE(b.lambda2[k - 1], b.lambda2[k]);
}

TEST(Basis, Cgt2TopOneOfDiagonalMap) {
  auto s = identity_stt<double>(3, 0.0, n);
  s.phi1(3, 3) = 5.0;
  const auto b = build_basis(BasisMethod::Cgt2TopL, 1, s);
  EXPECT_NEAR(std::abs(b.R2(0, 3)), 1.0, 1e-14);
  EXPECT_NEAR(b.lambda2[0], 25.0, 1e-12);
  EXPECT_THROW(build_basis(BasisMethod::Cgt2TopL, 0, s), std::invalid_argument);
  EXPECT_THROW(build_basis(BasisMethod::Scgt, 1, s), std::invalid_argument);
}

TEST(Dstt, CoordinateDirectionPicksDiagonalSlice) {
  std::mt19937_64 rng(22);
  const auto s = oracle::random_stt(rng, n);
  const auto d = construct_dstt(s, make_basis({unit(4)}, {unit(2)}));
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_NEAR(d.psi2(i, 0, 0), s.phi2(i, 4, 4), 1e-14);
    EXPECT_NEAR(d.psi3(i, 0, 0, 0), s.phi3(i, 2, 2, 2), 1e-14);
  }
}

TEST(Dstt, FullRankReconstructsAndMatchesStt) {
  std::mt19937_64 rng(23);
  const auto s = oracle::random_stt(rng, n);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < n; ++k) rows.push_back(oracle::random_unit(rng, n));
  const auto d = construct_dstt(s, make_basis(rows, rows));
  EXPECT_LT(oracle::rel_frobenius(reconstruct_phi2(d), s.phi2), 1e-12);
  EXPECT_LT(oracle::rel_frobenius(reconstruct_phi3(d), s.phi3), 1e-12);
  const auto e = frobenius_error(s, d);
  EXPECT_LT(e.eps2, 1e-12);
  EXPECT_LT(e.eps3, 1e-12);
  for (int k = 0; k < 100; ++k) {
    const auto dx = random_dx(rng, 1e-2);
    for (int m = 1; m <= 3; ++m) EXPECT_LT(max_abs_diff(propagate_perturbation_dstt(d, dx, m), oracle::taylor(s, dx, m)), 1e-12);
  }
}

TEST(Dstt, ContractionConsistencyForRankOne) {
  std::mt19937_64 rng(24);
  const auto s = oracle::random_stt(rng, n);
  const auto r2 = oracle::random_unit(rng, n), r3 = oracle::random_unit(rng, n);
  const auto d = construct_dstt(s, make_basis({r2}, {r3}));
  for (int k = 0; k < 100; ++k) {
    const auto dx = random_dx(rng, 0.1);
    double y2 = 0, y3 = 0;
    for (std::size_t a = 0; a < n; ++a) {
      y2 += r2[a] * dx[a];
      y3 += r3[a] * dx[a];
    }
    StateArray p2{}, p3{};
    for (std::size_t a = 0; a < n; ++a) {
      p2[a] = y2 * r2[a];
      p3[a] = y3 * r3[a];
    }
    // Only the projected components enter the nonlinear terms.
    const auto lin = oracle::taylor(s, dx, 1);
    const auto q2 = oracle::taylor(s, p2, 2), l2 = oracle::taylor(s, p2, 1);
    const auto q3 = oracle::taylor(s, p3, 3), l3 = oracle::taylor(s, p3, 2);
    StateArray ref{};
    for (std::size_t i = 0; i < n; ++i) ref[i] = lin[i] + (q2[i] - l2[i]) + (q3[i] - l3[i]);
    EXPECT_LT(max_abs_diff(propagate_perturbation_dstt(d, dx, 3), ref), 1e-12);
  }
}

TEST(Dstt, LimitingCases) {
  std::mt19937_64 rng(25);
  const auto s = oracle::random_stt(rng, n);
  const auto r = oracle::random_unit(rng, n);
  const auto d = construct_dstt(s, make_basis({r}, {r}));
  // Perturbation orthogonal to the basis: the DSTT map is the STM map.
  auto dx = random_dx(rng, 0.1);
  double y = 0;
  for (std::size_t a = 0; a < n; ++a) y += r[a] * dx[a];
  for (std::size_t a = 0; a < n; ++a) dx[a] -= y * r[a];
  EXPECT_LT(max_abs_diff(propagate_perturbation_dstt(d, dx, 3), oracle::taylor(s, dx, 1)), 1e-13);
  // Perturbation along the basis: the DSTT map is the full STT map.
  StateArray along{};
  for (std::size_t a = 0; a < n; ++a) along[a] = 0.3 * r[a];
  EXPECT_LT(max_abs_diff(propagate_perturbation_dstt(d, along, 3), oracle::taylor(s, along, 3)), 1e-12);
  EXPECT_THROW(propagate_perturbation_dstt(d, dx, 4), std::invalid_argument);
}

TEST(Frobenius, ProjectorIdentityAndBounds) {
  std::mt19937_64 rng(26);
  const auto s = oracle::random_stt(rng, n);
  // phi2 concentrated on e0 is missed entirely by a basis orthogonal to it.
  SttSet t = s;
  t.phi2 = Tensor({n, n, n});
  t.phi3 = Tensor({n, n, n, n});
  for (std::size_t i = 0; i < n; ++i) {
    t.phi2(i, 0, 0) = 1.0 + i;
    t.phi3(i, 0, 0, 0) = 2.0 - i;
  }
  const auto e = frobenius_error(t, construct_dstt(t, make_basis({unit(1)}, {unit(1)})));
  EXPECT_NEAR(e.eps2, 1.0, 1e-15);
  EXPECT_NEAR(e.eps3, 1.0, 1e-15);
  for (std::size_t l = 1; l <= n; ++l) {
    const auto b = build_basis(BasisMethod::Cgt2TopL, l, s);
    const auto f = frobenius_error(s, construct_dstt(s, b));
    EXPECT_GE(f.eps2, -1e-15);
    EXPECT_LE(f.eps2, 1.0 + 1e-12);
  }
  SttSet zero = s;
  zero.phi2 = Tensor({n, n, n});
  const auto z = frobenius_error(zero, construct_dstt(zero, make_basis({unit(0)}, {unit(0)})));
  EXPECT_TRUE(z.low_nonlinearity);
  EXPECT_TRUE(std::isnan(z.eps2));
}

TEST(Frobenius, NestedBasesAreMonotone) {
  std::mt19937_64 rng(27);
  const auto s = oracle::random_stt(rng, n);
  double prev2 = 2.0, prev3 = 2.0;
  for (std::size_t l = 1; l <= n; ++l) {
    const auto f = frobenius_error(s, construct_dstt(s, build_basis(BasisMethod::Cgt2TopL, l, s)));
    EXPECT_LE(f.eps2, prev2 + 1e-14);
    EXPECT_LE(f.eps3, prev3 + 1e-14);
    prev2 = f.eps2;
    prev3 = f.eps3;
  }
}

TEST(Orthonormalize, RejectsDependentRows) {
  EXPECT_THROW(orthonormalize_rows({{1, 0, 0}, {2, 0, 0}}), std::invalid_argument);
  EXPECT_THROW(orthonormalize_rows({{0, 0, 0}}), std::invalid_argument);
  const auto r = orthonormalize_rows({{3, 0, 0}, {1, 1, 0}});
  EXPECT_NEAR(r[0][0], 1.0, 1e-15);
  EXPECT_NEAR(r[1][1], 1.0, 1e-15);
  EXPECT_EQ(basis_method_from_string(to_string(BasisMethod::Hocgt)), BasisMethod::Hocgt);
}

}  // namespace
