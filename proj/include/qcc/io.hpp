#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "qcc/channel.hpp"

namespace qcc {

using Json = nlohmann::json;

/// Matrix literal: array of rows, each entry [re, im].
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

/// {"name", "dim_in", "dim_out", "kraus": [matrix literal, ...]}
Json channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const Json& j);

/// {"dim_in", "povm": [matrix literal, ...]}
Json qc_to_json(const QCChannel& qc);
QCChannel qc_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

/// Channel file: either a Kraus spec or a QC spec (converted to its measurement channel).
KrausChannel load_channel(const std::filesystem::path& path);
/// State file: a bare matrix literal, validated as a density matrix.
CMatrix load_state(const std::filesystem::path& path);

}  // namespace qcc
