#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "prk/measurement.hpp"

namespace prk {

inline constexpr int kInstanceSchemaVersion = 1;

/// InstanceFile document:
///   {schema_version, n, m, generator, seed, rows: [[...]], magnitudes: [...], signal?: [...]}
nlohmann::json instance_to_json(const MeasurementSet& ms, bool include_signal = true);
MeasurementSet instance_from_json(const nlohmann::json& doc);

std::string serialize_instance(const MeasurementSet& ms, bool include_signal = true);
MeasurementSet parse_instance(const std::string& text);

void write_instance(const std::filesystem::path& path, const MeasurementSet& ms,
                    bool include_signal = true);
MeasurementSet read_instance(const std::filesystem::path& path);

/// Reads a JSON array of numbers (a bare vector file, e.g. an initial iterate).
Vector read_vector(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
/// Writes atomically enough for CLI use: truncate then write; throws kIo on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

nlohmann::json vector_to_json(const VectorRef& v);
Vector vector_from_json(const nlohmann::json& array);

}  // namespace prk
