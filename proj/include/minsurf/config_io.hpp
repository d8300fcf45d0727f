#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "minsurf/balance.hpp"

namespace minsurf {

/// Malformed configuration file. The message names the line (for JSON
/// syntax errors) or the offending field.
class ConfigParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"label": "...", "alphas": [a_1, ...], "points": [[re, im], ...]}
Configuration parse_config(std::string_view text);
std::string config_to_json(const Configuration& c);

/// "-" reads standard input.
Configuration read_config(const std::string& path);
void write_config(const std::string& path, const Configuration& c);

}  // namespace minsurf
