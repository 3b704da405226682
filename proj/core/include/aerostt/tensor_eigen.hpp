#pragma once

// Z-eigenpairs of symmetric tensors, T v^{m-1} = lambda v with |v| = 1, by the
// shifted symmetric higher-order power method with multi-start search.

#include <cstdint>
#include <vector>

#include "aerostt/cgt.hpp"
#include "aerostt/tensor.hpp"

namespace aerostt {

struct Eigenpair {
  double lambda = 0.0;
  std::vector<double> v;
  /// |T v^{m-1} - lambda v|
  double residual = 0.0;
  /// residual / max(1, |T|_F)
  double relative_residual = 0.0;
  bool converged = false;
  int start = -1;
  int iterations = 0;
};

struct SsHopmConfig {
  int max_iterations = 2000;
  /// Stop once |lambda_{k+1} - lambda_k| < lambda_tol * max(1, |lambda|) and the iterate settled.
  double lambda_tol = 1e-14;
  /// Convexity margin of the adaptive shift.
  double tau = 1e-6;
  /// Negative selects the adaptive shift; otherwise a fixed shift.
  double fixed_shift = -1.0;
  /// Accept a pair when its relative residual is below this.
  double residual_tol = 1e-10;
  /// Finish with Newton steps on (v, lambda) when they reduce the residual.
  bool newton_polish = true;
};

struct EigenSearchConfig {
  int n_starts = 100;
  std::uint64_t seed = 20240607;
  double dedup_angle = 1e-3;  // rad
  SsHopmConfig hopm;
};

struct EigenSearchResult {
  Eigenpair best;
  /// Deduplicated converged pairs sorted by descending lambda.
  std::vector<Eigenpair> candidates;
  int n_converged = 0;
};

Eigenpair ss_hopm(const SymmetricTensor& t, std::vector<double> v0, const SsHopmConfig& cfg = {}, int start = -1);

/// Largest-lambda z-eigenpair over seeded random starts. For odd orders every
/// candidate is oriented so that lambda >= 0, since (-lambda, -v) is also a pair.
/// Throws std::runtime_error if no start converges.
EigenSearchResult max_eigenpair(const SymmetricTensor& t, const EigenSearchConfig& cfg = {});

/// Angle between two directions in degrees, insensitive to sign, in [0, 90].
double vector_angle(const std::vector<double>& v1, const std::vector<double>& v2);

/// Dense symmetric eigen-decomposition: eigenvalues descending, eigenvectors as rows.
struct SymmetricEigen {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};
SymmetricEigen symmetric_eigen(const Tensor& matrix);

/// Flips v so its largest-magnitude component is positive (first such index on ties).
void normalize_sign(std::vector<double>& v);

}  // namespace aerostt
