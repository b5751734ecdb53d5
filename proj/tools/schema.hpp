#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace surfcert {

// Validator for the subset of JSON Schema (draft 7) used by the shipped
// schemas: type, const, enum, required, properties, additionalProperties,
// items, min/maxItems, minimum, exclusiveMinimum, minLength, pattern, anyOf,
// allOf, if/then and local $ref. Other keywords are rejected so the schema
// files cannot silently outgrow the validator.
class SchemaValidator {
 public:
  explicit SchemaValidator(nlohmann::json schema);
  // Empty when valid; otherwise "path: message" lines.
  std::vector<std::string> validate(const nlohmann::json& instance) const;

 private:
  void check(const nlohmann::json& schema, const nlohmann::json& x, const std::string& path,
             std::vector<std::string>& errors) const;
  const nlohmann::json& resolve(const std::string& ref) const;
  nlohmann::json root_;
};

// The report schema compiled into the binary.
const SchemaValidator& report_validator();
const char* report_schema_text();

}  // namespace surfcert
