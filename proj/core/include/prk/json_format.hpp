#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace prk {

/// Formats a double with 17 significant digits ("%.17g").
std::string format_double(double value);

/// Serializes `value` with every floating-point number written at 17
/// significant digits. Non-finite floats are written as null. Object keys keep
/// nlohmann's sorted order, so output is deterministic.
std::string dump_json(const nlohmann::json& value, int indent = 2);

}  // namespace prk
