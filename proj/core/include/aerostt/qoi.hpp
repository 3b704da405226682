#pragma once

// Orbital quantities of interest evaluated from the planet-relative state:
// specific energy and apoapsis radius, both from the inertial velocity.

#include <cmath>
#include <string>

#include "aerostt/dynamics.hpp"
#include "aerostt/errors.hpp"
#include "aerostt/jet.hpp"
#include "aerostt/models.hpp"
#include "aerostt/tensor.hpp"

namespace aerostt {

enum class QoiKind { Energy, Apoapsis };

const char* to_string(QoiKind k);
QoiKind qoi_kind_from_string(const std::string& s);

/// Parameters the quantities need, in one consistent unit system.
struct QoiParameters {
  double mu = 1.0;
  double rp = 1.0;
  double omega = 0.0;
  double j2 = 0.0;
  /// Minimum of 2 mu / r - V^2 for an apoapsis evaluation to be accepted.
  double capture_margin = 0.0;
};

QoiParameters make_qoi_parameters(const ModelSet& models, Units units = Units::Nondimensional,
                                  double capture_margin = 1e-6);

/// Squared inertial speed and squared specific angular momentum. The atmosphere
/// co-rotates, so the inertial east velocity gains omega * r * cos(phi).
template <class S>
std::pair<S, S> inertial_speed2_and_h2(const StateOf<S>& x, const QoiParameters& p) {
  using B = base_scalar_t<S>;
  using std::cos;
  using std::sin;
  const S& r = x[kR];
  const S vcg = x[kV] * cos(x[kGamma]);
  const S east = vcg * sin(x[kPsi]) + B(p.omega) * r * cos(x[kPhi]);
  const S north = vcg * cos(x[kPsi]);
  const S up = x[kV] * sin(x[kGamma]);
  const S horiz2 = east * east + north * north;
  return {horiz2 + up * up, r * r * horiz2};
}

/// Specific orbital energy including the J2 zonal potential.
template <class S>
S specific_energy(const StateOf<S>& x, const QoiParameters& p) {
  using B = base_scalar_t<S>;
  using std::sin;
  if (!(value_of(x[kR]) > 0)) throw DomainError("specific_energy: radius must be positive");
  const auto [v2, h2] = inertial_speed2_and_h2(x, p);
  (void)h2;
  const S inv_r = B(1) / x[kR];
  const S s = sin(x[kPhi]);
  const S zonal = B(0.5 * p.mu * p.j2 * p.rp * p.rp) * inv_r * inv_r * inv_r * (B(3) * s * s - B(1));
  return B(0.5) * v2 - B(p.mu) * inv_r + zonal;
}

/// Two-body apoapsis radius a (1 + e) from the inertial velocity.
template <class S>
S apoapsis_radius(const StateOf<S>& x, const QoiParameters& p) {
  using B = base_scalar_t<S>;
  using std::sqrt;
  if (!(value_of(x[kR]) > 0)) throw DomainError("apoapsis_radius: radius must be positive");
  const auto [v2, h2] = inertial_speed2_and_h2(x, p);
  const S inv_a = B(2) / x[kR] - v2 / B(p.mu);  // 1/a
  const auto margin = value_of(inv_a) * p.mu;
  if (!(margin > p.capture_margin))
    throw NotCapturedError("apoapsis_radius: state is not captured (2 mu / r - V^2 = " +
                           std::to_string(static_cast<double>(margin)) + ")");
  const S a = B(1) / inv_a;
  S disc = B(1) - h2 * inv_a / B(p.mu);
  const auto dv = value_of(disc);
  if (dv < -1e-12) throw DomainError("apoapsis_radius: negative eccentricity discriminant");
  if (dv <= 0) return a;  // circular: the square root is not differentiable here
  return a * (B(1) + sqrt(disc));
}

template <class S>
S evaluate_qoi(QoiKind kind, const StateOf<S>& x, const QoiParameters& p) {
  return kind == QoiKind::Energy ? specific_energy(x, p) : apoapsis_radius(x, p);
}

double specific_energy(const StateVector& x, const ModelSet& models);
double apoapsis_radius(const StateVector& x, const ModelSet& models, double capture_margin = 1e-6);

/// Partials of a (possibly vector-valued) quantity at a reference final state.
/// eta1(q, i), eta2(q, i, j), eta3(q, i, j, k); scalar quantities have one row.
struct QoiPartials {
  std::string kind;
  int order = 0;
  std::vector<double> value;
  Tensor eta1;
  Tensor eta2;
  Tensor eta3;

  std::size_t rows() const { return eta1.dim(0); }
  std::size_t dim() const { return eta1.dim(1); }
};

/// Partials of energy or apoapsis radius with respect to the nondimensional state.
QoiPartials qoi_partials(const StateArray& x, QoiKind kind, int order, const QoiParameters& p);
QoiPartials qoi_partials(const StateVector& x, QoiKind kind, int order, const ModelSet& models,
                         double capture_margin = 1e-6);

/// q(x) = x: eta1 = I, higher partials zero.
QoiPartials identity_qoi(std::size_t n, int order);

}  // namespace aerostt
