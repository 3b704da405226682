#pragma once

// Three-degree-of-freedom entry dynamics over a rotating oblate planet with an
// exponential atmosphere. The state carries the log of density as its seventh
// coordinate so density perturbations propagate like any other state error.

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

#include "aerostt/errors.hpp"
#include "aerostt/jet.hpp"
#include "aerostt/models.hpp"
#include "aerostt/scalar.hpp"
#include "aerostt/tensor.hpp"

namespace aerostt {

/// Which part of the vector field an evaluation refers to.
enum class DynamicsComponent { Full, Conservative, Dissipative };

const char* to_string(DynamicsComponent c);

/// Constants of the vector field in one consistent unit system.
struct DynamicsParameters {
  double mu = 1.0;
  double rp = 1.0;
  double omega = 0.0;
  double j2 = 0.0;
  double scale_height = 1.0;
  /// density = exp(zeta_scale * zeta)
  double zeta_scale = 1.0;
  /// drag acceleration = drag_factor * density * V^2
  double drag_factor = 0.0;
  double lift_to_drag = 0.0;
  double bank_angle = 0.0;
  bool aero_enabled = true;
  double min_speed = 1e-12;
  Units units = Units::Nondimensional;
};

DynamicsParameters make_parameters(const ModelSet& models, Units units = Units::Nondimensional);

template <class S>
using StateOf = std::array<S, kStateDim>;

template <class S>
struct BaseScalar {
  using type = S;
};
template <class T, std::size_t N>
struct BaseScalar<Jet<T, N>> {
  using type = T;
};
template <class S>
using base_scalar_t = typename BaseScalar<S>::type;

/// Conservative (kinematics, gravity, rotation) and dissipative (lift, drag,
/// log-density transport) parts of the vector field. Their sum is the full field.
template <class S>
struct SplitDerivative {
  StateOf<S> conservative;
  StateOf<S> dissipative;

  StateOf<S> full() const {
    StateOf<S> out;
    for (std::size_t i = 0; i < kStateDim; ++i) out[i] = conservative[i] + dissipative[i];
    return out;
  }
  const StateOf<S>& component(DynamicsComponent c) const {
    return c == DynamicsComponent::Dissipative ? dissipative : conservative;
  }
};

/// Radial and latitudinal gravity with the J2 zonal term.
template <class S>
std::pair<S, S> gravity(const S& r, const S& phi, const DynamicsParameters& p) {
  using B = base_scalar_t<S>;
  using std::cos;
  using std::sin;
  if (value_of(r) <= 0) throw DomainError("gravity: radius must be positive");
  const S inv_r = B(1) / r;
  const S inv_r2 = inv_r * inv_r;
  const S mu_r2 = B(p.mu) * inv_r2;
  const S k = B(p.j2 * p.rp * p.rp) * inv_r2;
  const S s = sin(phi), c = cos(phi);
  const S g_r = mu_r2 * (B(1) + k * (B(1.5) - B(4.5) * s * s));
  const S g_phi = mu_r2 * (k * (B(3) * s * c));
  return {g_r, g_phi};
}

template <class S>
void check_state_domain(const StateOf<S>& x, const DynamicsParameters& p) {
  using std::abs;
  using std::cos;
  if (!(value_of(x[kV]) > p.min_speed)) throw DomainError("eom: speed must be positive");
  if (!(value_of(x[kR]) > 0)) throw DomainError("eom: radius must be positive");
  if (!(abs(cos(value_of(x[kPhi]))) >= 1e-9)) throw DomainError("eom: polar singularity (|cos phi| < 1e-9)");
}

/// Evaluates both parts of the vector field. S may be a floating type or a Jet.
template <class S>
SplitDerivative<S> eom_split(const StateOf<S>& x, const DynamicsParameters& p) {
  using B = base_scalar_t<S>;
  using std::cos;
  using std::exp;
  using std::sin;
  using std::tan;
  check_state_domain(x, p);

  const S& r = x[kR];
  const S& phi = x[kPhi];
  const S& V = x[kV];
  const S& gamma = x[kGamma];
  const S& psi = x[kPsi];
  const S& zeta = x[kZeta];

  const S sg = sin(gamma), cg = cos(gamma), tg = tan(gamma);
  const S sp = sin(psi), cp = cos(psi);
  const S sphi = sin(phi), cphi = cos(phi), tphi = tan(phi);
  const S inv_r = B(1) / r;
  const S inv_V = B(1) / V;
  const S inv_cg = B(1) / cg;
  const auto [g_r, g_phi] = gravity(r, phi, p);

  const B om = B(p.omega);
  const B om2 = om * om;
  const S om2_r_cphi = om2 * r * cphi;
  const S V_cg = V * cg;

  SplitDerivative<S> out;
  auto& fc = out.conservative;
  fc[kR] = V * sg;
  fc[kTheta] = V_cg * sp * inv_r / cphi;
  fc[kPhi] = V_cg * cp * inv_r;
  fc[kV] = -(g_r * sg) - g_phi * cg * cp + om2_r_cphi * (sg * cphi - cg * sphi * cp);
  fc[kGamma] = ((V * V * inv_r - g_r) * cg + g_phi * sg * cp + B(2) * om * V * cphi * sp +
                om2_r_cphi * (cg * cphi + sg * cp * sphi)) *
               inv_V;
  fc[kPsi] = (V * V * inv_r * cg * sp * tphi + g_phi * sp * inv_cg -
              B(2) * om * V * (tg * cp * cphi - sphi) + om2_r_cphi * inv_cg * sp * sphi) *
             inv_V;
  fc[kZeta] = S(B(0));

  auto& fd = out.dissipative;
  for (auto& v : fd) v = S(B(0));
  if (p.aero_enabled) {
    const S rho = exp(B(p.zeta_scale) * zeta);
    // drag / V = drag_factor * rho * V
    const S drag_over_V = B(p.drag_factor) * rho * V;
    const S lift_over_V = B(p.lift_to_drag) * drag_over_V;
    fd[kV] = -(drag_over_V * V);
    fd[kGamma] = lift_over_V * B(std::cos(p.bank_angle));
    fd[kPsi] = lift_over_V * B(std::sin(p.bank_angle)) * inv_cg;
  }
  fd[kZeta] = -(V * sg) * B(1.0 / (p.scale_height * p.zeta_scale));
  return out;
}

/// Full vector field: [r', theta', phi', V', gamma', psi', zeta'].
template <class S>
StateOf<S> eom(const StateOf<S>& x, const DynamicsParameters& p) {
  return eom_split(x, p).full();
}

template <class S>
StateOf<S> eom(const StateOf<S>& x, const DynamicsParameters& p, DynamicsComponent which) {
  const auto split = eom_split(x, p);
  return which == DynamicsComponent::Full ? split.full() : split.component(which);
}

StateVector eom(const StateVector& x, const ModelSet& models);
SplitDerivative<double> decompose_eom(const StateVector& x, const ModelSet& models);

/// Lift and drag accelerations for a given log-density and speed (same units as params).
std::pair<double, double> aero_accels(double zeta, double V, const DynamicsParameters& p);

/// Exponential atmosphere density at altitude h (SI).
double density(double altitude, const AtmosphereModel& atmo);

/// Derivatives of one part of the vector field: A = df/dx, B = d2f/dx2, C = d3f/dx3.
template <class T>
struct BasicDynamicsPartials {
  int order = 0;
  StateOf<T> value{};
  BasicTensor<T> A;
  BasicTensor<T> B;
  BasicTensor<T> C;
};
using DynamicsPartials = BasicDynamicsPartials<double>;

/// Seeds each state coordinate as an independent jet variable.
template <class T>
StateOf<Jet<T>> seed_jets(const StateOf<T>& x) {
  StateOf<Jet<T>> out;
  for (std::size_t i = 0; i < kStateDim; ++i) out[i] = Jet<T>::variable(x[i], i);
  return out;
}

/// Copies jet partials into dense tensors, fully expanded over trailing indices.
template <class T>
void unpack_jets(const StateOf<Jet<T>>& f, int order, BasicDynamicsPartials<T>& out) {
  constexpr std::size_t n = kStateDim;
  constexpr const auto& L = kJetLayout<n>;
  out.order = order;
  if (out.A.size() != n * n) out.A.reshape({n, n});
  if (order >= 2 && out.B.size() != n * n * n) out.B.reshape({n, n, n});
  if (order >= 3 && out.C.size() != n * n * n * n) out.C.reshape({n, n, n, n});
  for (std::size_t i = 0; i < n; ++i) {
    out.value[i] = f[i].v;
    for (std::size_t a = 0; a < n; ++a) out.A(i, a) = f[i].d1[a];
    if (order >= 2)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) out.B(i, a, b) = f[i].d2[L.pair[a][b]];
    if (order >= 3)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t c = 0; c < n; ++c) out.C(i, a, b, c) = f[i].d3[L.triple[a][b][c]];
  }
}

template <class T>
BasicDynamicsPartials<T> dynamics_partials(const StateOf<T>& x, const DynamicsParameters& p,
                                           int order, DynamicsComponent which) {
  if (order < 1 || order > 3) throw std::invalid_argument("dynamics_partials: order must be 1..3");
  const auto jets = eom(seed_jets(x), p, which);
  BasicDynamicsPartials<T> out;
  unpack_jets(jets, order, out);
  return out;
}

DynamicsPartials dynamics_partials(const StateVector& x, const ModelSet& models, int order,
                                   DynamicsComponent which = DynamicsComponent::Full);

/// Planet-relative speed and flight path angle from inertial ones. The heading
/// is taken as planet-relative and unchanged; the atmosphere moves eastward at
/// omega * r * cos(phi).
std::pair<double, double> inertial_to_relative(double v_inertial, double gamma_inertial, double psi,
                                               double r, double phi, double omega);
std::pair<double, double> relative_to_inertial(double v, double gamma, double psi, double r,
                                               double phi, double omega);

/// 0.5 rho V^2 in Pa for a state in either unit system.
double dynamic_pressure(const StateVector& x, const ModelSet& models);
/// |aerodynamic acceleration| / |gravitational acceleration|.
double accel_ratio(const StateVector& x, const ModelSet& models);

}  // namespace aerostt
