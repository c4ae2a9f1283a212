#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "qcomp/discrimination.hpp"
#include "qcomp/experiments.hpp"
#include "qcomp/maps.hpp"
#include "qcomp/sdp.hpp"

namespace qcomp::io {

using nlohmann::json;

/// Matrices are arrays of rows; each entry is [re, im].
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

json to_json(const HermitianMap& phi);
json to_json(const Ensemble& e);
json to_json(const Experiment& t);
json to_json(const sdp::Certificate& c);

HermitianMap map_from_json(const json& j);
Ensemble ensemble_from_json(const json& j);
Experiment experiment_from_json(const json& j);

/// Reads and parses a file; malformed content raises ValidationError.
json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

}  // namespace qcomp::io
