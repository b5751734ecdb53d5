#pragma once

#include <string>
#include <vector>

#include "surfgroup/ball.hpp"
#include "surfgroup/crossing.hpp"

namespace surfcert {

inline constexpr const char* kToolVersion = "0.1.0";

// On-disk cache for balls and crossing censuses. Entries are keyed by
// (genus, radius, rep id, tol_geom, tool version) in the file name and again
// in the file header; each file ends with a checksum. Writes go to a temp
// file that is renamed into place.
class Cache {
 public:
  explicit Cache(std::string dir) : dir_(std::move(dir)) {}

  surfgroup::BallTable ball(const surfgroup::FuchsianRep& rep, int radius,
                            const surfgroup::BallLimits& limits);
  surfgroup::CrossingCensus census(const surfgroup::BallTable& ball, int radius);

  // "hit", "miss" or "rebuilt" for each lookup, in order
  const std::vector<std::string>& events() const { return events_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  std::string ball_path(const surfgroup::FuchsianRep& rep, int radius) const;
  std::string census_path(const surfgroup::FuchsianRep& rep, int radius) const;

 private:
  std::string key(const char* kind, const surfgroup::FuchsianRep& rep, int radius) const;
  bool read(const std::string& path, const std::string& key, std::string& payload);
  void write(const std::string& path, const std::string& key, const std::string& payload);

  std::string dir_;
  std::vector<std::string> events_;
  std::vector<std::string> warnings_;
};

}  // namespace surfcert
