#include "aerostt/harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "aerostt/dynamics.hpp"

namespace aerostt::harness {

namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& block) {
  if (!j.is_object()) throw std::invalid_argument("config block '" + block + "' must be an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw std::invalid_argument("unknown config key '" + key + "' in " + block);
}

template <class T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::vector<std::string> default_methods() {
  return {"STM", "STT2", "1-DSTT", "3-DSTT", "6-DSTT", "hoDSTT", "sDSTT", "eps-qDSTT", "ra-qDSTT"};
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  reject_unknown(j,
                 {"planet", "atmosphere", "vehicle", "aero_enabled", "initial_state", "time", "integrator", "methods",
                  "seed", "eigen", "monte_carlo", "perturbation_magnitude", "direction_angles", "capture_margin",
                  "validation"},
                 "root");
  ExperimentConfig c;
  c.models = models_from_json(j);
  if (j.contains("initial_state")) {
    const auto& s = j.at("initial_state");
    reject_unknown(s,
                   {"altitude", "longitude_deg", "latitude_deg", "speed", "flight_path_deg", "heading_deg", "zeta",
                    "velocity_frame"},
                   "initial_state");
    read_if(s, "altitude", c.initial.altitude);
    read_if(s, "longitude_deg", c.initial.longitude_deg);
    read_if(s, "latitude_deg", c.initial.latitude_deg);
    read_if(s, "speed", c.initial.speed);
    read_if(s, "flight_path_deg", c.initial.flight_path_deg);
    read_if(s, "heading_deg", c.initial.heading_deg);
    read_if(s, "zeta", c.initial.zeta);
    read_if(s, "velocity_frame", c.initial.velocity_frame);
  }
  if (j.contains("time")) {
    const auto& t = j.at("time");
    reject_unknown(t, {"t0", "tf", "grid_step"}, "time");
    read_if(t, "t0", c.t0);
    read_if(t, "tf", c.tf);
    read_if(t, "grid_step", c.grid_step);
  }
  if (j.contains("integrator")) {
    const auto& t = j.at("integrator");
    reject_unknown(t, {"rel_tol", "abs_tol", "max_step", "max_steps", "oracle_tol"}, "integrator");
    read_if(t, "rel_tol", c.integrator.rel_tol);
    read_if(t, "abs_tol", c.integrator.abs_tol);
    read_if(t, "max_step", c.integrator.max_step);
    read_if(t, "max_steps", c.integrator.max_steps);
    read_if(t, "oracle_tol", c.oracle_tol);
  }
  c.methods = j.contains("methods") ? j.at("methods").get<std::vector<std::string>>() : default_methods();
  read_if(j, "seed", c.seed);
  c.eigen.seed = derive_seed(c.seed, "eigen");
  if (j.contains("eigen")) {
    const auto& e = j.at("eigen");
    reject_unknown(e, {"starts", "dedup_angle", "max_iterations", "lambda_tol", "residual_tol", "tau"}, "eigen");
    read_if(e, "starts", c.eigen.n_starts);
    read_if(e, "dedup_angle", c.eigen.dedup_angle);
    read_if(e, "max_iterations", c.eigen.hopm.max_iterations);
    read_if(e, "lambda_tol", c.eigen.hopm.lambda_tol);
    read_if(e, "residual_tol", c.eigen.hopm.residual_tol);
    read_if(e, "tau", c.eigen.hopm.tau);
  }
  if (j.contains("monte_carlo")) {
    const auto& m = j.at("monte_carlo");
    reject_unknown(m, {"samples", "sigma", "energy_history"}, "monte_carlo");
    read_if(m, "samples", c.monte_carlo.samples);
    read_if(m, "energy_history", c.monte_carlo.energy_history);
    if (m.contains("sigma")) {
      const auto& s = m.at("sigma");
      reject_unknown(s, {"mode", "r", "angle_deg", "speed", "zeta", "nondimensional"}, "monte_carlo.sigma");
      read_if(s, "mode", c.monte_carlo.sigma.mode);
      read_if(s, "r", c.monte_carlo.sigma.r);
      read_if(s, "angle_deg", c.monte_carlo.sigma.angle_deg);
      read_if(s, "speed", c.monte_carlo.sigma.speed);
      read_if(s, "zeta", c.monte_carlo.sigma.zeta);
      read_if(s, "nondimensional", c.monte_carlo.sigma.nondimensional);
    }
  }
  read_if(j, "perturbation_magnitude", c.perturbation_magnitude);
  read_if(j, "direction_angles", c.direction_angles);
  read_if(j, "capture_margin", c.capture_margin);
  if (j.contains("validation")) {
    const auto& v = j.at("validation");
    reject_unknown(v, {"start", "length"}, "validation");
    read_if(v, "start", c.validation_start);
    read_if(v, "length", c.validation_length);
  }
  validate(c);
  return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j = models_to_json(c.models);
  j["initial_state"] = {{"altitude", c.initial.altitude},
                        {"longitude_deg", c.initial.longitude_deg},
                        {"latitude_deg", c.initial.latitude_deg},
                        {"speed", c.initial.speed},
                        {"flight_path_deg", c.initial.flight_path_deg},
                        {"heading_deg", c.initial.heading_deg},
                        {"zeta", c.initial.zeta},
                        {"velocity_frame", c.initial.velocity_frame}};
  j["time"] = {{"t0", c.t0}, {"tf", c.tf}, {"grid_step", c.grid_step}};
  j["integrator"] = {{"rel_tol", c.integrator.rel_tol},
                     {"abs_tol", c.integrator.abs_tol},
                     {"max_step", c.integrator.max_step},
                     {"max_steps", c.integrator.max_steps},
                     {"oracle_tol", c.oracle_tol}};
  j["methods"] = c.methods;
  j["seed"] = c.seed;
  j["eigen"] = {{"starts", c.eigen.n_starts},
                {"dedup_angle", c.eigen.dedup_angle},
                {"max_iterations", c.eigen.hopm.max_iterations},
                {"lambda_tol", c.eigen.hopm.lambda_tol},
                {"residual_tol", c.eigen.hopm.residual_tol},
                {"tau", c.eigen.hopm.tau}};
  const auto& s = c.monte_carlo.sigma;
  j["monte_carlo"] = {{"samples", c.monte_carlo.samples},
                      {"energy_history", c.monte_carlo.energy_history},
                      {"sigma",
                       {{"mode", s.mode},
                        {"r", s.r},
                        {"angle_deg", s.angle_deg},
                        {"speed", s.speed},
                        {"zeta", s.zeta},
                        {"nondimensional", s.nondimensional}}}};
  j["perturbation_magnitude"] = c.perturbation_magnitude;
  j["direction_angles"] = c.direction_angles;
  j["capture_margin"] = c.capture_margin;
  j["validation"] = {{"start", c.validation_start}, {"length", c.validation_length}};
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("config file " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void validate(const ExperimentConfig& c) {
  c.models.validate();
  c.integrator.validate();
  if (!(c.tf > c.t0)) throw std::invalid_argument("time.tf must exceed time.t0");
  if (!(c.grid_step > 0)) throw std::invalid_argument("time.grid_step must be positive");
  if (!(c.oracle_tol > 0)) throw std::invalid_argument("integrator.oracle_tol must be positive");
  if (c.initial.velocity_frame != "inertial" && c.initial.velocity_frame != "relative")
    throw std::invalid_argument("initial_state.velocity_frame must be 'inertial' or 'relative'");
  if (!(c.initial.altitude > -c.models.planet.radius)) throw std::invalid_argument("initial_state.altitude too low");
  if (!(c.initial.speed > 0)) throw std::invalid_argument("initial_state.speed must be positive");
  const auto known = default_methods();
  for (const auto& m : c.methods) {
    bool ok = m == "7-DSTT" || m == "STT3";
    for (const auto& k : known) ok = ok || k == m;
    if (!ok) throw std::invalid_argument("unknown method '" + m + "'");
  }
  if (c.eigen.n_starts < 1) throw std::invalid_argument("eigen.starts must be positive");
  if (c.monte_carlo.samples < 0) throw std::invalid_argument("monte_carlo.samples must be non-negative");
  if (c.monte_carlo.sigma.mode != "table" && c.monte_carlo.sigma.mode != "nondimensional")
    throw std::invalid_argument("monte_carlo.sigma.mode must be 'table' or 'nondimensional'");
  if (!(c.perturbation_magnitude > 0)) throw std::invalid_argument("perturbation_magnitude must be positive");
  if (c.direction_angles < 2) throw std::invalid_argument("direction_angles must be at least 2");
  if (!(c.capture_margin >= 0)) throw std::invalid_argument("capture_margin must be non-negative");
  if (!(c.validation_length > 0) || c.validation_start < c.t0 || c.validation_start + c.validation_length > c.tf)
    throw std::invalid_argument("validation segment must lie inside the simulated time span");
}

std::string config_hash(const ExperimentConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config_to_json(c).dump())));
  return buf;
}

StateVector initial_state(const ExperimentConfig& c) {
  const auto& s = c.initial;
  const double r = c.models.planet.radius + s.altitude;
  const double phi = s.latitude_deg * kDeg;
  const double psi = s.heading_deg * kDeg;
  double v = s.speed, gamma = s.flight_path_deg * kDeg;
  if (s.velocity_frame == "inertial")
    std::tie(v, gamma) = inertial_to_relative(v, gamma, psi, r, phi, c.models.planet.rotation_rate);
  StateVector x{{r, s.longitude_deg * kDeg, phi, v, gamma, psi, s.zeta}, Units::Dimensional};
  return c.models.scales().nondimensionalize(x);
}

StateArray initial_sigma(const ExperimentConfig& c) {
  const auto& s = c.monte_carlo.sigma;
  if (s.mode == "nondimensional") {
    StateArray out;
    out.fill(s.nondimensional);
    return out;
  }
  const Scales sc = c.models.scales();
  const double a = s.angle_deg * kDeg;
  return {s.r / sc.length_ref, a, a, s.speed / sc.speed_ref, a, a, s.zeta / sc.zeta_ref};
}

std::uint64_t derive_seed(std::uint64_t master, const std::string& tag) {
  std::uint64_t h = fnv1a(tag) ^ (master + 0x9e3779b97f4a7c15ull + (master << 6) + (master >> 2));
  // splitmix64 finalizer
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
  return h ^ (h >> 31);
}

}  // namespace aerostt::harness
