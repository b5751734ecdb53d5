#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace surfcert {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EpsilonPolicy {
  double divisor = 16;  // systole / divisor
  double fixed = 0;     // used instead when > 0
};

struct Config {
  int genus = 2;
  int ball_radius = 7;
  double tol_geom = 1e-9;
  std::uint64_t max_elements = 20'000'000;
  std::uint64_t max_bytes = std::uint64_t{3} << 30;
  std::string epsilon_policy = "systole/16";
  std::string n_policy = "inequality";
  std::string cache_dir = ".surfcert-cache";
  std::uint64_t seed = 1;

  // Parses and checks one key; throws ConfigError naming the key.
  void set(const std::string& key, const std::string& value);
  void validate() const;
  EpsilonPolicy epsilon() const;
  int fixed_n() const;  // 0 when N comes from the length inequality
  nlohmann::json to_json() const;
};

// key = value lines; '#' starts a comment. Unknown keys are errors.
Config load_config(const std::string& path, Config base = {});

}  // namespace surfcert
