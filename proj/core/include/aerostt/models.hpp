#pragma once

#include <array>
#include <cstddef>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace aerostt {

inline constexpr std::size_t kStateDim = 7;

/// Slots of the entry state [r, theta, phi, V, gamma, psi, zeta].
enum StateIndex : std::size_t { kR = 0, kTheta, kPhi, kV, kGamma, kPsi, kZeta };

enum class Units { Dimensional, Nondimensional };

using StateArray = std::array<double, kStateDim>;

/// Vehicle state. Dimensional form is SI (m, rad, m/s, ln(kg/m^3)).
/// Nondimensional form scales lengths by the planet radius, speeds by the
/// circular speed at that radius, and zeta by the log-density normalization.
struct StateVector {
  StateArray x{};
  Units units = Units::Nondimensional;

  double& operator[](std::size_t i) { return x[i]; }
  double operator[](std::size_t i) const { return x[i]; }
};

struct PlanetModel {
  double mu = 5.793939e15;           // m^3/s^2
  double radius = 25559.0e3;         // m
  double rotation_rate = 1.01237e-4; // rad/s
  double j2 = 3.343e-3;
};

struct AtmosphereModel {
  double reference_density = 6.40e-3;  // kg/m^3
  double reference_height = 0.0;       // m
  double scale_height = 54.72e3;       // m
  double zeta_ref = 20.0;
};

struct VehicleModel {
  double lift_to_drag = 0.25;
  double ballistic_coefficient = 145.0;  // kg/m^2
  double bank_angle = 1.3613568165555772; // rad (78 deg)
};

struct Scales {
  double length_ref = 1.0;
  double speed_ref = 1.0;
  double time_ref = 1.0;
  double zeta_ref = 1.0;

  StateVector nondimensionalize(const StateVector& s) const;
  StateVector redimensionalize(const StateVector& s) const;
};

/// Everything the equations of motion depend on.
struct ModelSet {
  PlanetModel planet;
  AtmosphereModel atmosphere;
  VehicleModel vehicle;
  /// Vacuum runs switch the lift and drag terms off instead of driving zeta to -inf.
  bool aero_enabled = true;

  Scales scales() const;
  void validate() const;
};

/// Point-mass planet, no rotation, no atmosphere.
ModelSet vacuum_models(ModelSet base = {});

ModelSet models_from_json(const nlohmann::json& j);
nlohmann::json models_to_json(const ModelSet& m);
ModelSet load_models(const std::string& path);

}  // namespace aerostt
