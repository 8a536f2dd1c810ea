#include "prk/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "prk/error.hpp"
#include "prk/json_format.hpp"

namespace prk {

nlohmann::json vector_to_json(const VectorRef& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const nlohmann::json& array) {
  if (!array.is_array()) throw Error(ErrorKind::kParse, "expected a JSON array of numbers");
  Vector out(static_cast<Eigen::Index>(array.size()));
  for (std::size_t i = 0; i < array.size(); ++i) {
    if (!array[i].is_number()) throw Error(ErrorKind::kParse, "expected a number in array");
    out[static_cast<Eigen::Index>(i)] = array[i].get<double>();
  }
  return out;
}

nlohmann::json instance_to_json(const MeasurementSet& ms, bool include_signal) {
  nlohmann::json doc;
  doc["schema_version"] = kInstanceSchemaVersion;
  doc["n"] = ms.n();
  doc["m"] = ms.m();
  doc["generator"] = ms.meta().generator;
  doc["seed"] = ms.meta().seed;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < ms.m(); ++i) rows.push_back(vector_to_json(ms.row(i).transpose()));
  doc["rows"] = std::move(rows);
  doc["magnitudes"] = vector_to_json(ms.magnitudes());
  if (include_signal && ms.hidden_signal()) doc["signal"] = vector_to_json(ms.hidden_signal()->x());
  return doc;
}

MeasurementSet instance_from_json(const nlohmann::json& doc) {
  try {
    const int version = doc.at("schema_version").get<int>();
    if (version != kInstanceSchemaVersion) {
      throw Error(ErrorKind::kParse, "unsupported schema_version " + std::to_string(version));
    }
    const auto n = doc.at("n").get<std::size_t>();
    const auto m = doc.at("m").get<std::size_t>();
    const auto& rows_json = doc.at("rows");
    if (!rows_json.is_array() || rows_json.size() != m) {
      throw Error(ErrorKind::kParse, "rows must be an array of m rows");
    }
    RowMatrix rows(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < m; ++i) {
      const Vector row = vector_from_json(rows_json[i]);
      if (static_cast<std::size_t>(row.size()) != n) {
        throw Error(ErrorKind::kParse, "row " + std::to_string(i) + " does not have n entries");
      }
      rows.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    Vector magnitudes = vector_from_json(doc.at("magnitudes"));
    InstanceMeta meta{doc.at("generator").get<std::string>(), doc.at("seed").get<std::uint64_t>()};
    std::optional<Signal> signal;
    if (doc.contains("signal") && !doc["signal"].is_null()) signal.emplace(vector_from_json(doc["signal"]));
    return MeasurementSet(std::move(rows), std::move(magnitudes), std::move(meta), std::move(signal));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("malformed instance: ") + e.what());
  }
}

std::string serialize_instance(const MeasurementSet& ms, bool include_signal) {
  return dump_json(instance_to_json(ms, include_signal));
}

MeasurementSet parse_instance(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("invalid JSON: ") + e.what());
  }
  return instance_from_json(doc);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

void write_instance(const std::filesystem::path& path, const MeasurementSet& ms, bool include_signal) {
  write_text_file(path, serialize_instance(ms, include_signal));
}

MeasurementSet read_instance(const std::filesystem::path& path) {
  return parse_instance(read_text_file(path));
}

Vector read_vector(const std::filesystem::path& path) {
  try {
    return vector_from_json(nlohmann::json::parse(read_text_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("invalid vector file: ") + e.what());
  }
}

}  // namespace prk
