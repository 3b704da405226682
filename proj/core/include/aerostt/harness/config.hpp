#pragma once

// Experiment configuration: models, initial state, grid, integrator, methods,
// Monte Carlo and eigen-search settings. Loaded from JSON; every key is optional
// and falls back to the documented default.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "aerostt/integrator.hpp"
#include "aerostt/models.hpp"
#include "aerostt/tensor_eigen.hpp"

namespace aerostt::harness {

struct InitialStateConfig {
  double altitude = 1000e3;        // m
  double longitude_deg = 190.05;   // theta
  double latitude_deg = -9.76;     // phi
  double speed = 24.93e3;          // m/s
  double flight_path_deg = -10.58;
  double heading_deg = 45.0;
  double zeta = -23.32;            // ln(kg/m^3)
  /// "inertial": speed and flight path angle are inertial and converted; "relative": used as is.
  std::string velocity_frame = "inertial";
};

struct SigmaConfig {
  /// "table" uses the dimensional values below; "nondimensional" uses `nondimensional` for every coordinate.
  std::string mode = "table";
  double r = 2.56;                   // m
  double angle_deg = 5.73e-6;        // theta, phi, gamma, psi
  double speed = 1.52e-3;            // m/s
  double zeta = 2e-6;                // ln(kg/m^3)
  double nondimensional = 1e-14;
};

struct MonteCarloConfig {
  int samples = 1000;
  SigmaConfig sigma;
  bool energy_history = true;
};

struct ExperimentConfig {
  ModelSet models;
  InitialStateConfig initial;
  double t0 = 0.0;       // s
  double tf = 780.0;     // s
  double grid_step = 10.0;  // s
  IntegratorConfig integrator;
  /// Tolerance of the extended-precision reference integrations used as truth.
  double oracle_tol = 1e-16;
  std::vector<std::string> methods;
  std::uint64_t seed = 20240607;
  EigenSearchConfig eigen;
  MonteCarloConfig monte_carlo;
  double perturbation_magnitude = 1e-6;  // nondimensional, direction and maximality studies
  int direction_angles = 25;
  double capture_margin = 1e-6;          // nondimensional, on 2 mu / r - V^2
  /// Start and length (s) of the finite-difference validation segment.
  double validation_start = 250.0;
  double validation_length = 100.0;
};

std::vector<std::string> default_methods();

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& c);

/// FNV-1a 64 hash of the canonical resolved JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

/// Initial state in nondimensional form, converted to planet-relative velocity if needed.
StateVector initial_state(const ExperimentConfig& c);

/// Standard deviations of the initial perturbation, nondimensional, per coordinate.
StateArray initial_sigma(const ExperimentConfig& c);

/// Deterministic sub-seed for a named use of the master seed.
std::uint64_t derive_seed(std::uint64_t master, const std::string& tag);

}  // namespace aerostt::harness
