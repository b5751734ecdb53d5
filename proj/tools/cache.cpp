#include "cache.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace surfgroup;

namespace surfcert {

namespace {

constexpr char kMagic[8] = {'S', 'U', 'R', 'F', 'C', 'A', 'C', 'H'};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

template <class T>
void put(std::string& out, const T& x) {
  out.append(reinterpret_cast<const char*>(&x), sizeof x);
}

template <class T>
void put_vec(std::string& out, const std::vector<T>& v) {
  put(out, static_cast<std::uint64_t>(v.size()));
  out.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(T));
}

struct Reader {
  const std::string& s;
  std::size_t pos = 0;
  template <class T>
  T get() {
    if (pos + sizeof(T) > s.size()) throw std::runtime_error("truncated");
    T x;
    std::memcpy(&x, s.data() + pos, sizeof x);
    pos += sizeof x;
    return x;
  }
  template <class T>
  std::vector<T> get_vec() {
    const auto n = get<std::uint64_t>();
    if (n > (s.size() - pos) / sizeof(T)) throw std::runtime_error("truncated");
    std::vector<T> v(n);
    std::memcpy(v.data(), s.data() + pos, n * sizeof(T));
    pos += n * sizeof(T);
    return v;
  }
};

}  // namespace

std::string Cache::key(const char* kind, const FuchsianRep& rep, int radius) const {
  char tol[32];
  std::snprintf(tol, sizeof tol, "%.3g", rep.tol_geom());
  return std::string(kind) + "-g" + std::to_string(rep.genus()) + "-r" + std::to_string(radius) +
         "-" + rep.id() + "-tol" + tol + "-v" + kToolVersion;
}

std::string Cache::ball_path(const FuchsianRep& rep, int radius) const {
  return (fs::path(dir_) / (key("ball", rep, radius) + ".bin")).string();
}

std::string Cache::census_path(const FuchsianRep& rep, int radius) const {
  return (fs::path(dir_) / (key("census", rep, radius) + ".bin")).string();
}

bool Cache::read(const std::string& path, const std::string& k, std::string& payload) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    if (data.size() < sizeof kMagic + 8 || std::memcmp(data.data(), kMagic, sizeof kMagic) != 0) {
      throw std::runtime_error("bad header");
    }
    const std::string body = data.substr(0, data.size() - 8);
    std::uint64_t sum;
    std::memcpy(&sum, data.data() + data.size() - 8, 8);
    if (sum != fnv1a(body)) throw std::runtime_error("checksum mismatch");
    Reader r{body, sizeof kMagic};
    const auto key_chars = r.get_vec<char>();
    if (std::string(key_chars.begin(), key_chars.end()) != k) throw std::runtime_error("key mismatch");
    payload = body.substr(r.pos);
    return true;
  } catch (const std::exception& e) {
    warnings_.push_back("corrupt cache entry " + path + " (" + e.what() + "); rebuilding");
    std::error_code ec;
    fs::remove(path, ec);
    return false;
  }
}

void Cache::write(const std::string& path, const std::string& k, const std::string& payload) {
  std::string data(kMagic, sizeof kMagic);
  put_vec(data, std::vector<char>(k.begin(), k.end()));
  data += payload;
  put(data, fnv1a(data));
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw std::runtime_error("cannot create cache directory " + dir_ + ": " + ec.message());
  const std::string tmp = path + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("cannot write cache file " + tmp);
  }
  fs::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

BallTable Cache::ball(const FuchsianRep& rep, int radius, const BallLimits& limits) {
  const std::string path = ball_path(rep, radius);
  const std::string k = key("ball", rep, radius);
  std::string payload;
  const bool existed = fs::exists(path);
  if (read(path, k, payload)) {
    try {
      Reader r{payload};
      auto parents = r.get_vec<BallTable::Index>();
      auto last = r.get_vec<Letter>();
      auto adjacency = r.get_vec<BallTable::Index>();
      BallTable t = BallTable::from_parts(rep, radius, std::move(parents), std::move(last),
                                          std::move(adjacency));
      events_.push_back("hit");
      return t;
    } catch (const std::exception& e) {
      warnings_.push_back("corrupt cache entry " + path + " (" + e.what() + "); rebuilding");
    }
  }
  BallTable t = BallTable::enumerate(rep, radius, limits);
  std::string out;
  put_vec(out, t.parents());
  put_vec(out, t.last_letters());
  put_vec(out, t.adjacency());
  write(path, k, out);
  events_.push_back(existed ? "rebuilt" : "miss");
  return t;
}

CrossingCensus Cache::census(const BallTable& ball, int radius) {
  const FuchsianRep& rep = ball.rep();
  const std::string path = census_path(rep, radius);
  const std::string k = key("census", rep, radius);
  std::string payload;
  const bool existed = fs::exists(path);
  if (read(path, k, payload)) {
    try {
      Reader r{payload};
      CrossingCensus c;
      c.radius = radius;
      c.crossing_number = r.get_vec<int>();
      c.power = r.get_vec<int>();
      if (c.crossing_number.size() != ball.count_within(radius) || c.power.size() != c.crossing_number.size()) {
        throw std::runtime_error("size mismatch");
      }
      events_.push_back("hit");
      return c;
    } catch (const std::exception& e) {
      warnings_.push_back("corrupt cache entry " + path + " (" + e.what() + "); rebuilding");
    }
  }
  CrossingCensus c = crossing_census(ball, radius);
  std::string out;
  put_vec(out, c.crossing_number);
  put_vec(out, c.power);
  write(path, k, out);
  events_.push_back(existed ? "rebuilt" : "miss");
  return c;
}

}  // namespace surfcert
