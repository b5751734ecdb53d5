#include "schema.hpp"

#include <cmath>
#include <regex>
#include <set>
#include <stdexcept>

using nlohmann::json;

namespace surfcert {

namespace {

bool has_type(const json& x, const std::string& t) {
  if (t == "object") return x.is_object();
  if (t == "array") return x.is_array();
  if (t == "string") return x.is_string();
  if (t == "boolean") return x.is_boolean();
  if (t == "null") return x.is_null();
  if (t == "number") return x.is_number();
  if (t == "integer") {
    if (x.is_number_integer()) return true;
    return x.is_number_float() && std::floor(x.get<double>()) == x.get<double>();
  }
  throw std::logic_error("unknown schema type " + t);
}

// Schema equality for const/enum: numbers compare by value.
bool same(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) return a.get<double>() == b.get<double>();
  return a == b;
}

const std::set<std::string> kKnown = {
    "$schema", "title", "description", "definitions", "type", "const", "enum", "required",
    "properties", "additionalProperties", "items", "minItems", "maxItems", "minimum",
    "exclusiveMinimum", "minLength", "pattern", "anyOf", "allOf", "if", "then", "$ref"};

}  // namespace

SchemaValidator::SchemaValidator(json schema) : root_(std::move(schema)) {}

const json& SchemaValidator::resolve(const std::string& ref) const {
  const std::string prefix = "#/definitions/";
  if (ref.rfind(prefix, 0) != 0) throw std::logic_error("unsupported $ref " + ref);
  return root_.at("definitions").at(ref.substr(prefix.size()));
}

std::vector<std::string> SchemaValidator::validate(const json& instance) const {
  std::vector<std::string> errors;
  check(root_, instance, "$", errors);
  return errors;
}

void SchemaValidator::check(const json& s, const json& x, const std::string& path,
                            std::vector<std::string>& errors) const {
  for (const auto& [key, _] : s.items()) {
    if (!kKnown.count(key)) throw std::logic_error("schema keyword not supported: " + key);
  }
  auto fail = [&](const std::string& msg) { errors.push_back(path + ": " + msg); };

  if (s.contains("$ref")) check(resolve(s["$ref"].get<std::string>()), x, path, errors);
  if (s.contains("type")) {
    const json& t = s["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = has_type(x, t.get<std::string>());
    } else {
      for (const json& u : t) ok = ok || has_type(x, u.get<std::string>());
    }
    if (!ok) {
      fail("expected type " + t.dump() + ", got " + x.type_name());
      return;
    }
  }
  if (s.contains("const") && !same(s["const"], x)) fail("expected " + s["const"].dump());
  if (s.contains("enum")) {
    bool ok = false;
    for (const json& e : s["enum"]) ok = ok || same(e, x);
    if (!ok) fail("value " + x.dump() + " not in " + s["enum"].dump());
  }
  if (x.is_number()) {
    const double v = x.get<double>();
    if (s.contains("minimum") && v < s["minimum"].get<double>()) fail("below minimum");
    if (s.contains("exclusiveMinimum") && v <= s["exclusiveMinimum"].get<double>()) fail("not above exclusive minimum");
  }
  if (x.is_string()) {
    const auto& str = x.get_ref<const std::string&>();
    if (s.contains("minLength") && str.size() < s["minLength"].get<std::size_t>()) fail("string too short");
    if (s.contains("pattern") && !std::regex_search(str, std::regex(s["pattern"].get<std::string>()))) {
      fail("\"" + str + "\" does not match " + s["pattern"].get<std::string>());
    }
  }
  if (x.is_object()) {
    if (s.contains("required")) {
      for (const json& r : s["required"]) {
        if (!x.contains(r.get<std::string>())) fail("missing property " + r.get<std::string>());
      }
    }
    const json* props = s.contains("properties") ? &s["properties"] : nullptr;
    for (const auto& [key, value] : x.items()) {
      const std::string sub = path + "." + key;
      if (props && props->contains(key)) {
        check((*props)[key], value, sub, errors);
      } else if (s.contains("additionalProperties")) {
        const json& ap = s["additionalProperties"];
        if (ap.is_boolean()) {
          if (!ap.get<bool>()) errors.push_back(sub + ": unexpected property");
        } else {
          check(ap, value, sub, errors);
        }
      }
    }
  }
  if (x.is_array()) {
    if (s.contains("minItems") && x.size() < s["minItems"].get<std::size_t>()) fail("too few items");
    if (s.contains("maxItems") && x.size() > s["maxItems"].get<std::size_t>()) fail("too many items");
    if (s.contains("items")) {
      for (std::size_t i = 0; i < x.size(); ++i) check(s["items"], x[i], path + "[" + std::to_string(i) + "]", errors);
    }
  }
  if (s.contains("allOf")) {
    for (const json& sub : s["allOf"]) check(sub, x, path, errors);
  }
  if (s.contains("anyOf")) {
    bool ok = false;
    for (const json& sub : s["anyOf"]) {
      std::vector<std::string> e;
      check(sub, x, path, e);
      ok = ok || e.empty();
    }
    if (!ok) fail("matches none of anyOf");
  }
  if (s.contains("if")) {
    std::vector<std::string> e;
    check(s["if"], x, path, e);
    if (e.empty() && s.contains("then")) check(s["then"], x, path, errors);
  }
}

const SchemaValidator& report_validator() {
  static const SchemaValidator v(json::parse(report_schema_text()));
  return v;
}

}  // namespace surfcert
