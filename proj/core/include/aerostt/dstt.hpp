#pragma once

// Directional STTs: higher-order STTs projected onto a few initial directions.
// With rows R_p of a per-order basis, psi_p = phi_p (R_p^T, ..., R_p^T) and a
// perturbation maps as  Phi dx + 1/2 psi_2 (R_2 dx)^2 + 1/6 psi_3 (R_3 dx)^3.

#include <optional>
#include <string>
#include <vector>

#include "aerostt/cgt.hpp"
#include "aerostt/propagation.hpp"
#include "aerostt/qoi.hpp"
#include "aerostt/tensor_eigen.hpp"

namespace aerostt {

enum class BasisMethod { Cgt2TopL, Hocgt, Scgt, QcgtEnergy, QcgtApoapsis };

const char* to_string(BasisMethod m);
BasisMethod basis_method_from_string(const std::string& s);

struct RotationBasis {
  /// l2 x n and l3 x n, orthonormal rows.
  Tensor R2;
  Tensor R3;
  BasisMethod method = BasisMethod::Cgt2TopL;
  double t_start = 0.0;
  double t_end = 0.0;
  /// Eigenvalues behind the rows (descending for cgt2; the maximal lambda per order otherwise).
  std::vector<double> lambda2;
  std::vector<double> lambda3;

  std::size_t l2() const { return R2.dim(0); }
  std::size_t l3() const { return R3.dim(0); }
};

/// Inputs specific to the augmented tensor families.
struct BasisAux {
  std::optional<SelectionMatrix> selection;
  std::optional<QoiPartials> qoi;
  EigenSearchConfig eigen;
};

/// Builds the per-order basis for an interval. cgt2 uses the top-l eigenvectors of
/// Phi^T Phi for both orders; the others use the maximal eigenvector of the
/// order-3 tensor for R2 and of the order-4 tensor for R3.
RotationBasis build_basis(BasisMethod method, std::size_t l, const SttSet& stt, const BasisAux& aux = {});

/// Basis from explicit rows (re-orthonormalized).
RotationBasis make_basis(const std::vector<std::vector<double>>& rows2, const std::vector<std::vector<double>>& rows3,
                         BasisMethod method = BasisMethod::Cgt2TopL);

struct DsttSet {
  double t_start = 0.0;
  double t_end = 0.0;
  Tensor phi1;
  /// n x l2 x l2
  Tensor psi2;
  /// n x l3 x l3 x l3
  Tensor psi3;
  RotationBasis basis;
};

DsttSet construct_dstt(const SttSet& stt, const RotationBasis& basis);

/// m = 1 gives the STM map; m = 2 adds psi_2; m = 3 adds psi_3.
StateArray propagate_perturbation_dstt(const DsttSet& d, const StateArray& dx, int m);

/// phi_p restricted to the basis: psi_p mapped back through the rows of R_p.
Tensor reconstruct_phi2(const DsttSet& d);
Tensor reconstruct_phi3(const DsttSet& d);

struct FrobeniusError {
  double eps2 = 0.0;
  double eps3 = 0.0;
  double norm2 = 0.0;
  double norm3 = 0.0;
  /// Set when an STT norm is zero and its quotient is undefined (eps reported as NaN).
  bool low_nonlinearity = false;
};

FrobeniusError frobenius_error(const SttSet& stt, const DsttSet& d);

/// Orthonormalizes rows in order (modified Gram-Schmidt); throws on dependent rows.
std::vector<std::vector<double>> orthonormalize_rows(std::vector<std::vector<double>> rows);

}  // namespace aerostt
