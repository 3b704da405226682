#include "aerostt/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace aerostt {

const char* to_string(DynamicsComponent c) {
  switch (c) {
    case DynamicsComponent::Full: return "full";
    case DynamicsComponent::Conservative: return "conservative";
    case DynamicsComponent::Dissipative: return "dissipative";
  }
  return "unknown";
}

DynamicsParameters make_parameters(const ModelSet& models, Units units) {
  models.validate();
  const Scales s = models.scales();
  DynamicsParameters p;
  p.j2 = models.planet.j2;
  p.lift_to_drag = models.vehicle.lift_to_drag;
  p.bank_angle = models.vehicle.bank_angle;
  p.aero_enabled = models.aero_enabled;
  p.units = units;
  if (units == Units::Nondimensional) {
    p.mu = 1.0;
    p.rp = 1.0;
    p.omega = models.planet.rotation_rate * s.time_ref;
    p.scale_height = models.atmosphere.scale_height / s.length_ref;
    p.zeta_scale = models.atmosphere.zeta_ref;
    p.drag_factor = s.length_ref / (2.0 * models.vehicle.ballistic_coefficient);
    p.min_speed = 1e-12;
  } else {
    p.mu = models.planet.mu;
    p.rp = models.planet.radius;
    p.omega = models.planet.rotation_rate;
    p.scale_height = models.atmosphere.scale_height;
    p.zeta_scale = 1.0;
    p.drag_factor = 1.0 / (2.0 * models.vehicle.ballistic_coefficient);
    p.min_speed = 1e-12 * s.speed_ref;
  }
  return p;
}

StateVector eom(const StateVector& x, const ModelSet& models) {
  const auto p = make_parameters(models, x.units);
  StateVector out;
  out.units = x.units;
  out.x = eom(x.x, p);
  return out;
}

SplitDerivative<double> decompose_eom(const StateVector& x, const ModelSet& models) {
  return eom_split(x.x, make_parameters(models, x.units));
}

std::pair<double, double> aero_accels(double zeta, double V, const DynamicsParameters& p) {
  if (V < 0) throw DomainError("aero_accels: speed must be non-negative");
  if (!p.aero_enabled) return {0.0, 0.0};
  const double rho = std::exp(p.zeta_scale * zeta);
  const double drag = p.drag_factor * rho * V * V;
  return {p.lift_to_drag * drag, drag};
}

double density(double altitude, const AtmosphereModel& atmo) {
  return atmo.reference_density * std::exp((atmo.reference_height - altitude) / atmo.scale_height);
}

DynamicsPartials dynamics_partials(const StateVector& x, const ModelSet& models, int order, DynamicsComponent which) {
  return dynamics_partials(x.x, make_parameters(models, x.units), order, which);
}

std::pair<double, double> inertial_to_relative(double v_inertial, double gamma_inertial, double psi, double r,
                                               double phi, double omega) {
  if (!(v_inertial > 0)) throw DomainError("inertial_to_relative: inertial speed must be positive");
  const double w = omega * r * std::cos(phi);
  const double horiz = v_inertial * std::cos(gamma_inertial);
  const double up = v_inertial * std::sin(gamma_inertial);
  const double cp = std::cos(psi), sp = std::sin(psi);
  const double disc = horiz * horiz - w * w * cp * cp;
  if (disc < 0) throw DomainError("inertial_to_relative: no planet-relative heading matches this state");
  const double s = -w * sp + std::sqrt(disc);
  const double v = std::hypot(s, up);
  if (!(v > 0)) throw DomainError("inertial_to_relative: planet-relative speed is zero");
  return {v, std::atan2(up, s)};
}

std::pair<double, double> relative_to_inertial(double v, double gamma, double psi, double r, double phi,
                                               double omega) {
  const double w = omega * r * std::cos(phi);
  const double horiz = v * std::cos(gamma);
  const double east = horiz * std::sin(psi) + w;
  const double north = horiz * std::cos(psi);
  const double up = v * std::sin(gamma);
  const double h = std::hypot(east, north);
  return {std::hypot(h, up), std::atan2(up, h)};
}

double dynamic_pressure(const StateVector& x, const ModelSet& models) {
  if (!models.aero_enabled) return 0.0;
  const StateVector d = models.scales().redimensionalize(x);
  return 0.5 * std::exp(d[kZeta]) * d[kV] * d[kV];
}

double accel_ratio(const StateVector& x, const ModelSet& models) {
  const auto p = make_parameters(models, x.units);
  const auto [lift, drag] = aero_accels(x[kZeta], x[kV], p);
  const auto [g_r, g_phi] = gravity(x[kR], x[kPhi], p);
  return std::hypot(lift, drag) / std::hypot(g_r, g_phi);
}

}  // namespace aerostt
