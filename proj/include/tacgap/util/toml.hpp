#ifndef TACGAP_UTIL_TOML_HPP
#define TACGAP_UTIL_TOML_HPP

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace tacgap::util {

// Minimal TOML reader covering the config subset: [tables], key = value with
// strings, integers, floats, booleans and flat arrays, # comments. Values
// land in a JSON object so the config layer has a single representation.
nlohmann::json parse_toml(const std::string& text);
nlohmann::json load_config_file(const std::filesystem::path& path);  // .toml or .json

}  // namespace tacgap::util

#endif
