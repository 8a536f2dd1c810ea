#include "config_file.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "prk/error.hpp"
#include "prk/instance_io.hpp"
#include "prk/json_format.hpp"

namespace prk::cli {

namespace {

std::string scalar_token(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_float()) return format_double(value.get<double>());
  if (value.is_number()) return value.dump();
  throw Error(ErrorKind::kParse, "config values must be numbers, strings, booleans or arrays");
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (path.empty() || args.empty()) return args;

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, "config file " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::kParse, "config file must hold a JSON object");

  std::vector<std::string> injected;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    std::string flag = it.key();
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (flag == "config") continue;
    const auto& value = it.value();
    if (value.is_boolean()) {
      if (value.get<bool>()) injected.push_back("--" + flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& element : value) {
        if (!joined.empty()) joined += ',';
        joined += scalar_token(element);
      }
      injected.push_back("--" + flag + "=" + joined);
    } else if (!value.is_null()) {
      injected.push_back("--" + flag + "=" + scalar_token(value));
    }
  }

  std::vector<std::string> out;
  out.reserve(args.size() + injected.size());
  out.push_back(args.front());
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

}  // namespace prk::cli
