#include "aerostt/serialization.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace aerostt {

nlohmann::json tensor_to_json(const Tensor& t) {
  nlohmann::json shape = nlohmann::json::array();
  for (std::size_t k = 0; k < t.rank(); ++k) shape.push_back(t.dim(k));
  return {{"shape", shape}, {"data", t.storage()}};
}

Tensor tensor_from_json(const nlohmann::json& j) {
  const auto shape = j.at("shape").get<std::vector<std::size_t>>();
  Tensor t;
  switch (shape.size()) {
    case 0: return t;
    case 1: t.reshape({shape[0]}); break;
    case 2: t.reshape({shape[0], shape[1]}); break;
    case 3: t.reshape({shape[0], shape[1], shape[2]}); break;
    case 4: t.reshape({shape[0], shape[1], shape[2], shape[3]}); break;
    default: throw std::invalid_argument("tensor rank must be 1..4");
  }
  const auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != t.size()) throw std::invalid_argument("tensor data length does not match shape");
  t.storage() = data;
  return t;
}

nlohmann::json stt_to_json(const SttSet& s) {
  nlohmann::json j = {{"t_start_s", s.t_start}, {"t_end_s", s.t_end}, {"order", s.order},
                      {"layout", "row-major; phi1[i][a], phi2[i][a][b], phi3[i][a][b][c]"},
                      {"phi1", tensor_to_json(s.phi1)}};
  if (s.order >= 2) j["phi2"] = tensor_to_json(s.phi2);
  if (s.order >= 3) j["phi3"] = tensor_to_json(s.phi3);
  return j;
}

SttSet stt_from_json(const nlohmann::json& j) {
  SttSet s;
  s.t_start = j.at("t_start_s").get<double>();
  s.t_end = j.at("t_end_s").get<double>();
  s.order = j.at("order").get<int>();
  if (s.order < 1 || s.order > 3) throw std::invalid_argument("STT order must be 1..3");
  s.phi1 = tensor_from_json(j.at("phi1"));
  if (s.order >= 2) s.phi2 = tensor_from_json(j.at("phi2"));
  if (s.order >= 3) s.phi3 = tensor_from_json(j.at("phi3"));
  return s;
}

nlohmann::json basis_to_json(const RotationBasis& b) {
  return {{"method", to_string(b.method)}, {"t_start_s", b.t_start}, {"t_end_s", b.t_end},
          {"R2", tensor_to_json(b.R2)},    {"R3", tensor_to_json(b.R3)}, {"lambda2", b.lambda2},
          {"lambda3", b.lambda3}};
}

RotationBasis basis_from_json(const nlohmann::json& j) {
  RotationBasis b;
  b.method = basis_method_from_string(j.at("method").get<std::string>());
  b.t_start = j.at("t_start_s").get<double>();
  b.t_end = j.at("t_end_s").get<double>();
  b.R2 = tensor_from_json(j.at("R2"));
  b.R3 = tensor_from_json(j.at("R3"));
  b.lambda2 = j.value("lambda2", std::vector<double>{});
  b.lambda3 = j.value("lambda3", std::vector<double>{});
  return b;
}

nlohmann::json dstt_to_json(const DsttSet& d) {
  return {{"t_start_s", d.t_start},
          {"t_end_s", d.t_end},
          {"layout", "row-major; phi1[i][a], psi2[i][g][h], psi3[i][g][h][k]"},
          {"phi1", tensor_to_json(d.phi1)},
          {"psi2", tensor_to_json(d.psi2)},
          {"psi3", tensor_to_json(d.psi3)},
          {"basis", basis_to_json(d.basis)}};
}

DsttSet dstt_from_json(const nlohmann::json& j) {
  DsttSet d;
  d.t_start = j.at("t_start_s").get<double>();
  d.t_end = j.at("t_end_s").get<double>();
  d.phi1 = tensor_from_json(j.at("phi1"));
  d.psi2 = tensor_from_json(j.at("psi2"));
  d.psi3 = tensor_from_json(j.at("psi3"));
  d.basis = basis_from_json(j.at("basis"));
  return d;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

}  // namespace aerostt
