#include "config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace surfcert {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_int(const std::string& key, const std::string& v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError("config key " + key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key " + key + ": expected a number, got '" + v + "'");
}

}  // namespace

void Config::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "genus") {
    genus = parse_int<int>(key, v);
  } else if (key == "ball_radius") {
    ball_radius = parse_int<int>(key, v);
  } else if (key == "tol_geom") {
    tol_geom = parse_double(key, v);
  } else if (key == "max_elements") {
    max_elements = parse_int<std::uint64_t>(key, v);
  } else if (key == "max_bytes") {
    max_bytes = parse_int<std::uint64_t>(key, v);
  } else if (key == "epsilon_policy") {
    epsilon_policy = v;
  } else if (key == "n_policy") {
    n_policy = v;
  } else if (key == "cache_dir") {
    cache_dir = v;
  } else if (key == "seed") {
    seed = parse_int<std::uint64_t>(key, v);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
  validate();
}

EpsilonPolicy Config::epsilon() const {
  EpsilonPolicy p;
  if (epsilon_policy.rfind("systole/", 0) == 0) {
    p.divisor = parse_double("epsilon_policy", epsilon_policy.substr(8));
    if (!(p.divisor >= 8)) throw ConfigError("epsilon_policy: divisor must be >= 8 (8 eps < systole)");
  } else if (epsilon_policy.rfind("fixed:", 0) == 0) {
    p.fixed = parse_double("epsilon_policy", epsilon_policy.substr(6));
    if (!(p.fixed > 0)) throw ConfigError("epsilon_policy: fixed value must be positive");
  } else {
    throw ConfigError("epsilon_policy must be systole/<d> or fixed:<value>, got '" + epsilon_policy + "'");
  }
  return p;
}

int Config::fixed_n() const {
  if (n_policy == "inequality") return 0;
  if (n_policy.rfind("fixed:", 0) == 0) {
    const int n = parse_int<int>("n_policy", n_policy.substr(6));
    if (n < 1) throw ConfigError("n_policy: fixed N must be >= 1");
    return n;
  }
  throw ConfigError("n_policy must be inequality or fixed:<N>, got '" + n_policy + "'");
}

void Config::validate() const {
  if (genus < 2 || genus > 8) throw ConfigError("genus must be in 2..8");
  if (ball_radius < 0 || ball_radius > 9) throw ConfigError("ball_radius must be in 0..9");
  if (!(tol_geom > 0 && tol_geom < 1e-3)) throw ConfigError("tol_geom must be in (0, 1e-3)");
  if (max_elements == 0) throw ConfigError("max_elements must be positive");
  if (max_bytes == 0) throw ConfigError("max_bytes must be positive");
  if (cache_dir.empty()) throw ConfigError("cache_dir must not be empty");
  epsilon();
  fixed_n();
}

nlohmann::json Config::to_json() const {
  return {{"genus", genus},
          {"ball_radius", ball_radius},
          {"tol_geom", tol_geom},
          {"max_elements", max_elements},
          {"max_bytes", max_bytes},
          {"epsilon_policy", epsilon_policy},
          {"n_policy", n_policy},
          {"cache_dir", cache_dir},
          {"seed", seed}};
}

Config load_config(const std::string& path, Config base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

}  // namespace surfcert
