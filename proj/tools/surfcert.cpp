#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <unistd.h>

#include "CLI11.hpp"
#include "cache.hpp"
#include "config.hpp"
#include "schema.hpp"
#include "serialize.hpp"
#include "surfgroup/certifier.hpp"
#include "surfgroup/context.hpp"

namespace fs = std::filesystem;
using namespace surfgroup;
using namespace surfcert;

namespace {

enum Exit { kOk = 0, kRefused = 1, kUsage = 2, kResource = 3, kInternal = 4 };

// Thrown for argument problems found after CLI11 has parsed the line.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Outcome {
  json payload;
  json input;
  int exit = kOk;
};

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::pair<int, int> parse_range(const std::string& s) {
  try {
    std::size_t pos = 0;
    const auto dots = s.find("..");
    const int lo = std::stoi(s.substr(0, dots), &pos);
    if (pos != (dots == std::string::npos ? s.size() : dots)) throw std::invalid_argument(s);
    int hi = lo;
    if (dots != std::string::npos) {
      const std::string rest = s.substr(dots + 2);
      hi = std::stoi(rest, &pos);
      if (pos != rest.size()) throw std::invalid_argument(s);
    }
    if (lo < 1 || hi < lo) throw std::invalid_argument(s);
    return {lo, hi};
  } catch (const std::exception&) {
    throw UsageError("--m expects a..b with 1 <= a <= b, got '" + s + "'");
  }
}

std::vector<int> parse_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(item, &pos);
      if (pos != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("--n-list expects comma-separated integers >= 0, got '" + s + "'");
    }
  }
  if (out.empty()) throw UsageError("--n-list is empty");
  return out;
}

void write_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

// Everything a command needs, built lazily so cheap commands stay cheap.
class Session {
 public:
  explicit Session(const Config& c)
      : config(c), cache(c.cache_dir), rep(FuchsianRep::regular_polygon(c.genus, c.tol_geom)) {
    limits.max_elements = c.max_elements;
    limits.max_bytes = c.max_bytes;
  }

  const BallTable& ball(int radius) {
    if (!balls_.count(radius)) {
      balls_.emplace(radius, cache.ball(rep, radius, limits));
      report_cache(cache.ball_path(rep, radius));
    }
    return balls_.at(radius);
  }

  const CrossingCensus& census(const BallTable& b, int radius) {
    if (!census_) {
      census_ = cache.census(b, radius);
      report_cache(cache.census_path(rep, radius));
    }
    return *census_;
  }

  Word word(const std::string& text) const { return parse_word(text, config.genus); }

  Config config;
  Cache cache;
  FuchsianRep rep;
  BallLimits limits;

 private:
  void report_cache(const std::string& path) {
    for (; warned_ < cache.warnings().size(); ++warned_) std::cerr << "warning: " << cache.warnings()[warned_] << "\n";
    const std::string& ev = cache.events().back();
    if (ev == "hit") {
      std::cerr << "cache hit: " << path << "\n";
    } else {
      std::cerr << "cache " << ev << ": built " << path << "\n";
    }
  }

  std::map<int, BallTable> balls_;
  std::optional<CrossingCensus> census_;
  std::size_t warned_ = 0;
};

struct CertifyArgs {
  std::string target;
  int n = 0;
  std::string m = "1..6";
  std::string n_list = "0,1";
  int table_radius = 4;
  int verify_max_m = 4;
  int sup_max_power = 16;
  int depth = 12;
  int defect_samples = 24;
  int triangles = 2000;
  std::string verify_file;
};

CertifierConfig certifier_config(const Config& c, const CertifyArgs& a) {
  CertifierConfig cc;
  const EpsilonPolicy eps = c.epsilon();
  cc.epsilon_divisor = eps.divisor;
  cc.epsilon_fixed = eps.fixed;
  cc.n_fixed = c.fixed_n();
  cc.verify_max_m = a.verify_max_m;
  cc.sup_max_power = a.sup_max_power;
  cc.upper_depth = a.depth;
  cc.defect_samples = a.defect_samples;
  cc.seed = c.seed;
  cc.limits.max_states = c.max_elements;
  return cc;
}

json certify_input(const CertifyArgs& a, const Word& target) {
  return {{"target", format_word(target)},
          {"table_radius", a.table_radius},
          {"verify_max_m", a.verify_max_m},
          {"sup_max_power", a.sup_max_power},
          {"depth", a.depth},
          {"defect_samples", a.defect_samples},
          {"triangles", a.triangles}};
}

void check_certify_args(const Config& c, const CertifyArgs& a) {
  if (a.table_radius < 1 || a.table_radius > c.ball_radius) {
    throw UsageError("--table-radius must be in 1..ball_radius (" + std::to_string(c.ball_radius) + ")");
  }
  if (a.verify_max_m < 1 || a.sup_max_power < 1 || a.depth < 1 || a.defect_samples < 0 || a.triangles < 1) {
    throw UsageError("certify tuning flags must be positive");
  }
}

Outcome run_ball(Session& s) {
  const BallTable& b = s.ball(s.config.ball_radius);
  json layers = json::array();
  for (int r = 0; r <= b.radius(); ++r) {
    layers.push_back(b.count_within(r) - (r ? b.count_within(r - 1) : 0));
  }
  return {{{"genus", b.genus()},
           {"radius", b.radius()},
           {"rep_id", s.rep.id()},
           {"size", b.size()},
           {"layer_counts", layers}},
          json::object(),
          kOk};
}

Outcome run_cross(Session& s, const std::string& text) {
  const Word w = s.word(text);
  if (s.rep.presentation().is_identity(w)) throw UsageError("the identity has no closed geodesic");
  const CrossingReport r = crossing_number(w, s.rep);
  Outcome out{to_json(r), {{"word", format_word(w)}}, kOk};
  if (!r.stabilized) {
    std::cerr << "refused: crossing count did not stabilize between the two enumerations\n";
    out.exit = kRefused;
  }
  return out;
}

Outcome run_sn(Session& s, int n, int radius, bool primitive) {
  if (n < 0) throw UsageError("--n must be >= 0");
  if (radius < 0 || radius > s.config.ball_radius) {
    throw UsageError("--radius must be in 0..ball_radius (" + std::to_string(s.config.ball_radius) + ")");
  }
  const BallTable& b = s.ball(radius);
  const SnTable t = enumerate_Sn(n, primitive, b, s.census(b, radius));
  return {to_json(t), {{"n", n}, {"radius", radius}, {"primitive", primitive}}, kOk};
}

Outcome run_qm(Session& s, const std::string& sigma_text, const std::string& target_text) {
  const Word sigma = s.word(sigma_text);
  const Word target = s.word(target_text);
  if (sigma.size() < 2) throw UsageError("--sigma needs at least two letters");
  SearchLimits lim;
  lim.max_states = s.config.max_elements;
  const QmEvaluation q = h_sigma(target, PathPattern(sigma), s.rep, nullptr, lim);
  return {to_json(q, sigma, target), {{"sigma", format_word(sigma)}, {"target", format_word(target)}}, kOk};
}

Outcome run_certify(Session& s, const CertifyArgs& a) {
  check_certify_args(s.config, a);
  const Word target = s.word(a.target);
  const auto [m_lo, m_hi] = parse_range(a.m);
  if (a.n < 0) throw UsageError("--n must be >= 0");
  const BallTable& b = s.ball(s.config.ball_radius);
  const CrossingCensus& census = s.census(b, a.table_radius);
  const CayleyContext ctx = estimate_context(b, static_cast<std::size_t>(a.triangles), s.config.seed);
  const CertifierData data{b, census, ctx};
  const BoundCertificate cert = certify(target, a.n, m_lo, m_hi, data, certifier_config(s.config, a));
  json input = certify_input(a, target);
  input["n"] = a.n;
  input["m"] = {m_lo, m_hi};
  Outcome out{to_json(cert), input, kOk};
  if (cert.status == CertificateStatus::kRefused) {
    for (const std::string& r : cert.reasons) std::cerr << "refused: " << r << "\n";
    out.exit = kRefused;
  } else if (cert.status == CertificateStatus::kDowngraded) {
    for (const std::string& r : cert.stage.downgrades) std::cerr << "warning: " << r << "\n";
  }
  return out;
}

Outcome run_verify(Session& s, const std::string& file) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot read " + file);
  json env;
  try {
    env = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(file + ": " + e.what());
  }
  const auto errors = report_validator().validate(env);
  if (!errors.empty()) throw UsageError(file + ": not a valid report: " + errors.front());
  if (env.at("command") != "certify") throw UsageError(file + ": not a certify report");
  if (env.at("config").at("genus").get<int>() != s.config.genus) {
    throw UsageError(file + ": genus differs from the current config");
  }
  const BoundCertificate cert = certificate_from_json(env.at("payload"), s.config.genus);
  if (cert.ball_radius > s.config.ball_radius) {
    throw UsageError(file + ": certificate needs ball_radius " + std::to_string(cert.ball_radius));
  }
  const std::vector<std::string> failures = reverify(cert, s.ball(cert.ball_radius));
  for (const std::string& f : failures) std::cerr << "verification failed: " << f << "\n";
  return {{{"file", fs::path(file).filename().string()},
           {"certificate_status", to_string(cert.status)},
           {"verified", failures.empty()},
           {"failures", failures}},
          {{"verify", fs::path(file).filename().string()}},
          failures.empty() ? kOk : kRefused};
}

Outcome run_geomcheck(Session& s, int triangles) {
  if (triangles < 1) throw UsageError("--triangles must be positive");
  const Word& relator = s.rep.presentation().relator();
  const double trace = s.rep.evaluate(relator).trace();
  json lengths = json::array();
  double lo = 1e300, hi = 0;
  for (int i = 1; i <= 2 * s.config.genus; ++i) {
    for (Letter l : {static_cast<Letter>(i), static_cast<Letter>(-i)}) {
      const double len = axis_and_length(s.rep.image(l), s.config.tol_geom).length;
      lengths.push_back(len);
      lo = std::min(lo, len);
      hi = std::max(hi, len);
    }
  }
  const BallTable& b = s.ball(s.config.ball_radius);
  const CayleyContext ctx = estimate_context(b, static_cast<std::size_t>(triangles), s.config.seed);
  return {{{"relator", format_word(relator)},
           {"relator_trace", trace},
           {"relator_trace_error", std::abs(std::abs(trace) - 2)},
           {"generator_translation_lengths", lengths},
           {"translation_length_spread", hi - lo},
           {"systole", systole_lowerbound(b)},
           {"systole_radius", b.radius()},
           {"context", to_json(ctx)}},
          {{"triangles", triangles}},
          kOk};
}

Outcome run_scaling(Session& s, const CertifyArgs& a) {
  check_certify_args(s.config, a);
  const Word target = s.word(a.target);
  const auto [m_lo, m_hi] = parse_range(a.m);
  const std::vector<int> ns = parse_list(a.n_list);
  const BallTable& b = s.ball(s.config.ball_radius);
  const CrossingCensus& census = s.census(b, a.table_radius);
  const CayleyContext ctx = estimate_context(b, static_cast<std::size_t>(a.triangles), s.config.seed);
  const CertifierData data{b, census, ctx};
  const ScalingReport r = scaling_report(target, ns, m_lo, m_hi, data, certifier_config(s.config, a));
  json rows = json::array();
  for (const ScalingRow& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"m", row.m},
                    {"lower", row.lower},
                    {"upper", row.upper ? json(*row.upper) : json(nullptr)},
                    {"slope", row.slope}});
  }
  json input = certify_input(a, target);
  input["n_list"] = ns;
  input["m"] = {m_lo, m_hi};
  Outcome out{{{"target", format_word(target)},
               {"csv_header", "n,m,lower,upper,slope"},
               {"csv", r.csv()},
               {"csv_file", nullptr},
               {"rows", rows},
               {"footer", r.footer}},
              input,
              kOk};
  for (const std::string& f : r.footer) std::cerr << f << "\n";
  if (r.rows.empty()) out.exit = kRefused;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surfcert: crossing numbers, counting quasimorphisms and table-certified word-length bounds "
               "in closed surface groups"};
  app.footer(
      "Words: generators a1 b1 a2 b2 ... separated by spaces; uppercase is the inverse (A1 = a1^-1).\n"
      "Example: surfcert cross \"a1 b1 A1 B1\".  An empty word is the identity.\n"
      "Config file: key = value lines (genus, ball_radius, tol_geom, max_elements, max_bytes,\n"
      "epsilon_policy, n_policy, cache_dir, seed); flags override the file.\n"
      "Exit codes: 0 success, 1 refusal (reason on stderr), 2 usage or config error, 3 resource cap,\n"
      "4 internal error.");
  app.require_subcommand(1, 1);

  std::string config_file, out_dir;
  bool timings = false;
  std::map<std::string, std::string> overrides;
  app.add_option("--config", config_file, "key = value config file");
  app.add_option("--out", out_dir, "write <command>-<hash>.json into this directory instead of stdout");
  app.add_flag("--timings", timings, "add wall-clock timings to the report (breaks byte stability)");
  for (const char* key : {"genus", "ball_radius", "tol_geom", "max_elements", "max_bytes", "epsilon_policy",
                          "n_policy", "cache_dir", "seed"}) {
    std::string flag = std::string("--") + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    app.add_option_function<std::string>(
        flag, [&overrides, key](const std::string& v) { overrides[key] = v; },
        std::string("config override: ") + key);
  }

  auto* ball = app.add_subcommand("ball", "build or load the ball of radius ball_radius");

  std::string cross_word;
  auto* cross = app.add_subcommand("cross", "crossing number of the conjugacy class of a word");
  cross->add_option("word", cross_word, "the word")->required();

  int sn_n = 0, sn_radius = 4;
  bool sn_primitive = false;
  auto* sn = app.add_subcommand("sn", "table of ball elements with crossing number <= n");
  sn->add_option("--n", sn_n, "crossing bound")->required();
  sn->add_option("--radius", sn_radius, "table radius")->capture_default_str();
  sn->add_flag("--primitive", sn_primitive, "primitive elements only");

  std::string qm_sigma, qm_target;
  auto* qm = app.add_subcommand("qm", "counting quasimorphism h_sigma at a target");
  qm->add_option("--sigma", qm_sigma, "pattern word, length >= 2")->required();
  qm->add_option("--target", qm_target, "target word")->required();

  CertifyArgs ca;
  auto add_tuning = [&ca](CLI::App* c) {
    c->add_option("--table-radius", ca.table_radius, "radius of the S_n table")->capture_default_str();
    c->add_option("--verify-max-m", ca.verify_max_m, "h(b^{Nm}) = m checked for dyadic m up to this")
        ->capture_default_str();
    c->add_option("--sup-max-power", ca.sup_max_power, "largest power used for the sup estimate")
        ->capture_default_str();
    c->add_option("--depth", ca.depth, "factor budget for the upper bound")->capture_default_str();
    c->add_option("--defect-samples", ca.defect_samples, "random pairs for the defect estimate")
        ->capture_default_str();
    c->add_option("--triangles", ca.triangles, "triangles sampled for delta")->capture_default_str();
  };
  auto* cert = app.add_subcommand("certify", "lower and upper bounds for |a^m| in S_n");
  cert->add_option("--target", ca.target, "the word a");
  cert->add_option("--n", ca.n, "crossing bound of the generating set")->capture_default_str();
  cert->add_option("--m", ca.m, "range a..b of powers")->capture_default_str();
  cert->add_option("--verify", ca.verify_file, "re-verify a certify report instead of computing one");
  add_tuning(cert);

  int gc_triangles = 2000;
  auto* geom = app.add_subcommand("geomcheck", "relator trace, generator lengths, systole, constants");
  geom->add_option("--triangles", gc_triangles, "triangles sampled for delta")->capture_default_str();

  auto* scaling = app.add_subcommand("scaling", "lower/upper bounds over n and m, with a CSV side file");
  scaling->add_option("--target", ca.target, "the word a")->required();
  scaling->add_option("--n-list", ca.n_list, "comma-separated n values")->capture_default_str();
  scaling->add_option("--m", ca.m, "range a..b of powers")->capture_default_str();
  add_tuning(scaling);

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::string command;
  Outcome out;
  Config config;
  try {
    if (!config_file.empty()) config = load_config(config_file, config);
    for (const auto& [k, v] : overrides) config.set(k, v);
    config.validate();
    Session s(config);

    if (ball->parsed()) {
      command = "ball";
      out = run_ball(s);
    } else if (cross->parsed()) {
      command = "cross";
      out = run_cross(s, cross_word);
    } else if (sn->parsed()) {
      command = "sn";
      out = run_sn(s, sn_n, sn_radius, sn_primitive);
    } else if (qm->parsed()) {
      command = "qm";
      out = run_qm(s, qm_sigma, qm_target);
    } else if (cert->parsed()) {
      if (!ca.verify_file.empty()) {
        command = "certify-verify";
        out = run_verify(s, ca.verify_file);
      } else {
        if (ca.target.empty()) throw UsageError("certify needs --target (or --verify FILE)");
        command = "certify";
        out = run_certify(s, ca);
      }
    } else if (geom->parsed()) {
      command = "geomcheck";
      out = run_geomcheck(s, gc_triangles);
    } else if (scaling->parsed()) {
      command = "scaling";
      out = run_scaling(s, ca);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kResource;
  } catch (const OutOfBallError& e) {
    std::cerr << "resource cap: " << e.what() << " (needs ball radius " << e.required_radius() << ")\n";
    return kResource;
  } catch (const GeometryError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kRefused;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }

  json env = {{"schema_version", 1},
              {"tool_version", kToolVersion},
              {"command", command},
              {"input", out.input},
              {"config", config.to_json()}};
  const std::string hash = hex64(fnv1a(env.dump()));
  // the CSV side file shares the report's hash
  if (command == "scaling" && !out_dir.empty()) out.payload["csv_file"] = command + "-" + hash + ".csv";
  env["payload"] = out.payload;
  if (timings) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    env["timings"] = {{"total_s", secs}};
  }

  if (const auto errors = report_validator().validate(env); !errors.empty()) {
    std::cerr << "internal error: report does not match its schema\n";
    for (const std::string& e : errors) std::cerr << "  " << e << "\n";
    return kInternal;
  }

  const std::string text = env.dump(2) + "\n";
  if (out_dir.empty()) {
    std::cout << text;
    return out.exit;
  }
  try {
    fs::create_directories(out_dir);
    const fs::path path = fs::path(out_dir) / (command + "-" + hash + ".json");
    if (command == "scaling") {
      write_atomic(fs::path(out_dir) / out.payload["csv_file"].get<std::string>(), out.payload["csv"].get<std::string>());
    }
    write_atomic(path, text);
    std::cerr << "wrote " << path.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return out.exit;
}
