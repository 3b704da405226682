#include "aerostt/models.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace aerostt {

namespace {

constexpr double kPi = 3.14159265358979323846;

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const char* block) {
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw std::invalid_argument(std::string("unknown key '") + key + "' in " + block);
}

template <class T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

StateVector Scales::nondimensionalize(const StateVector& s) const {
  if (s.units == Units::Nondimensional) return s;
  StateVector out = s;
  out.units = Units::Nondimensional;
  out[kR] = s[kR] / length_ref;
  out[kV] = s[kV] / speed_ref;
  out[kZeta] = s[kZeta] / zeta_ref;
  return out;
}

StateVector Scales::redimensionalize(const StateVector& s) const {
  if (s.units == Units::Dimensional) return s;
  StateVector out = s;
  out.units = Units::Dimensional;
  out[kR] = s[kR] * length_ref;
  out[kV] = s[kV] * speed_ref;
  out[kZeta] = s[kZeta] * zeta_ref;
  return out;
}

Scales ModelSet::scales() const {
  Scales s;
  s.length_ref = planet.radius;
  s.speed_ref = std::sqrt(planet.mu / planet.radius);
  s.time_ref = s.length_ref / s.speed_ref;
  s.zeta_ref = atmosphere.zeta_ref;
  return s;
}

void ModelSet::validate() const {
  if (!(planet.mu > 0)) throw std::invalid_argument("planet.mu must be positive");
  if (!(planet.radius > 0)) throw std::invalid_argument("planet.radius must be positive");
  if (!(planet.rotation_rate >= 0)) throw std::invalid_argument("planet.rotation_rate must be non-negative");
  if (!std::isfinite(planet.j2)) throw std::invalid_argument("planet.j2 must be finite");
  if (!(atmosphere.reference_density > 0)) throw std::invalid_argument("atmosphere.reference_density must be positive");
  if (!(atmosphere.scale_height > 0)) throw std::invalid_argument("atmosphere.scale_height must be positive");
  if (!(atmosphere.zeta_ref > 0)) throw std::invalid_argument("atmosphere.zeta_ref must be positive");
  if (!(vehicle.ballistic_coefficient > 0))
    throw std::invalid_argument("vehicle.ballistic_coefficient must be positive");
  if (!std::isfinite(vehicle.lift_to_drag) || !std::isfinite(vehicle.bank_angle))
    throw std::invalid_argument("vehicle parameters must be finite");
}

ModelSet vacuum_models(ModelSet base) {
  base.aero_enabled = false;
  base.planet.rotation_rate = 0.0;
  base.planet.j2 = 0.0;
  return base;
}

ModelSet models_from_json(const nlohmann::json& j) {
  ModelSet m;
  if (j.contains("planet")) {
    const auto& p = j.at("planet");
    reject_unknown(p, {"mu", "radius", "rotation_rate", "j2"}, "planet");
    read_if(p, "mu", m.planet.mu);
    read_if(p, "radius", m.planet.radius);
    read_if(p, "rotation_rate", m.planet.rotation_rate);
    read_if(p, "j2", m.planet.j2);
  }
  if (j.contains("atmosphere")) {
    const auto& a = j.at("atmosphere");
    reject_unknown(a, {"reference_density", "reference_height", "scale_height", "zeta_ref"}, "atmosphere");
    read_if(a, "reference_density", m.atmosphere.reference_density);
    read_if(a, "reference_height", m.atmosphere.reference_height);
    read_if(a, "scale_height", m.atmosphere.scale_height);
    read_if(a, "zeta_ref", m.atmosphere.zeta_ref);
  }
  if (j.contains("vehicle")) {
    const auto& v = j.at("vehicle");
    reject_unknown(v, {"lift_to_drag", "ballistic_coefficient", "bank_angle_deg"}, "vehicle");
    read_if(v, "lift_to_drag", m.vehicle.lift_to_drag);
    read_if(v, "ballistic_coefficient", m.vehicle.ballistic_coefficient);
    if (v.contains("bank_angle_deg")) m.vehicle.bank_angle = v.at("bank_angle_deg").get<double>() * kPi / 180.0;
  }
  read_if(j, "aero_enabled", m.aero_enabled);
  m.validate();
  return m;
}

nlohmann::json models_to_json(const ModelSet& m) {
  return {
      {"planet",
       {{"mu", m.planet.mu}, {"radius", m.planet.radius}, {"rotation_rate", m.planet.rotation_rate},
        {"j2", m.planet.j2}}},
      {"atmosphere",
       {{"reference_density", m.atmosphere.reference_density},
        {"reference_height", m.atmosphere.reference_height},
        {"scale_height", m.atmosphere.scale_height},
        {"zeta_ref", m.atmosphere.zeta_ref}}},
      {"vehicle",
       {{"lift_to_drag", m.vehicle.lift_to_drag},
        {"ballistic_coefficient", m.vehicle.ballistic_coefficient},
        {"bank_angle_deg", m.vehicle.bank_angle * 180.0 / kPi}}},
      {"aero_enabled", m.aero_enabled},
  };
}

ModelSet load_models(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  return models_from_json(nlohmann::json::parse(in));
}

}  // namespace aerostt
