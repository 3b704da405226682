#pragma once

// Cauchy-Green tensors of the solution flow. Every family here collects the
// coefficients of a squared norm written as a polynomial in the initial
// perturbation dx:
//
//   |g(dx)|^2 = C2 dx^2 + C3 dx^3 + C4 dx^4 + ...
//
// where g is the final-state perturbation (HOCGT), a selection of it (sCGT),
// or a quantity of interest evaluated on it (qCGT).

#include <cstddef>
#include <string>
#include <vector>

#include "aerostt/propagation.hpp"
#include "aerostt/qoi.hpp"
#include "aerostt/tensor.hpp"

namespace aerostt {

/// Fully symmetric tensor of order 2..4 stored densely.
struct SymmetricTensor {
  int order = 0;
  std::size_t n = 0;
  Tensor data;

  /// T v^m
  double contract(const std::vector<double>& v) const;
  /// (T v^{m-1})_i
  std::vector<double> contract_vector(const std::vector<double>& v) const;
  /// (T v^{m-2})_ij, n x n row-major
  std::vector<double> contract_matrix(const std::vector<double>& v) const;
  double norm() const { return frobenius_norm(data); }
};

/// Averages over all m! index permutations.
SymmetricTensor symmetrize(const Tensor& t);

/// Full contraction of a rank-m tensor with m copies of v.
double contract_all(const Tensor& t, const std::vector<double>& v);

/// Rows are distinct Cartesian basis vectors.
class SelectionMatrix {
 public:
  SelectionMatrix() = default;
  SelectionMatrix(std::vector<std::size_t> rows, std::size_t n);

  const std::vector<std::size_t>& rows() const { return rows_; }
  std::size_t n() const { return n_; }
  std::size_t size() const { return rows_.size(); }
  Tensor matrix() const;

 private:
  std::vector<std::size_t> rows_;
  std::size_t n_ = 0;
};

/// Selects r, V and gamma from the 7-state.
SelectionMatrix position_speed_fpa_selection();

/// C = Phi^T Phi
Tensor second_order_cgt(const Tensor& phi1);

/// Taylor coefficients g1 (w x n), g2 (w x n x n), g3 (w x n x n x n) of a
/// vector-valued perturbation map; higher ones may be empty when not needed.
struct ExpansionMaps {
  Tensor g1;
  Tensor g2;
  Tensor g3;
};

/// Non-symmetric order-m coefficient tensor of |g(dx)|^2, m = 2..4.
Tensor squared_norm_coeffs(const ExpansionMaps& g, int m);

/// HOCGT precursors: coefficients of |dx_z|^2.
Tensor hocgt_coeffs(const SttSet& stt, int m);
/// sCGT precursors: coefficients of |S dx_z|^2.
Tensor scgt_coeffs(const SttSet& stt, const SelectionMatrix& s, int m);
/// qCGT precursors: coefficients of |dq|^2 with q evaluated at the final state.
Tensor qcgt_coeffs(const SttSet& stt, const QoiPartials& eta, int m);

/// Expansion maps D1, D2, D3 of dq in the initial perturbation.
ExpansionMaps qoi_expansion(const SttSet& stt, const QoiPartials& eta, int order);
ExpansionMaps selected_expansion(const SttSet& stt, const SelectionMatrix& s, int order);

enum class CgtFamily { Hocgt, Scgt, Qcgt };

}  // namespace aerostt
