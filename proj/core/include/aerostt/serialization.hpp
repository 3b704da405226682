#pragma once

// JSON forms of STT and DSTT sets. Tensors are written as
// {"shape": [d0, ...], "data": [...]} with data in row-major order (last index
// fastest), matching phi1(i, a), phi2(i, a, b), phi3(i, a, b, c).

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "aerostt/dstt.hpp"
#include "aerostt/propagation.hpp"

namespace aerostt {

nlohmann::json tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const nlohmann::json& j);

nlohmann::json stt_to_json(const SttSet& s);
SttSet stt_from_json(const nlohmann::json& j);

nlohmann::json basis_to_json(const RotationBasis& b);
RotationBasis basis_from_json(const nlohmann::json& j);

nlohmann::json dstt_to_json(const DsttSet& d);
DsttSet dstt_from_json(const nlohmann::json& j);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace aerostt
