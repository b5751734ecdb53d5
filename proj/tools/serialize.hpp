#pragma once

#include "json.hpp"
#include "surfgroup/certifier.hpp"

namespace surfcert {

using nlohmann::json;

// Words are written in the text syntax ("a1 B2"); the identity is "".
json word_json(const surfgroup::Word& w);
surfgroup::Word word_from_json(const json& j, int genus);

json to_json(const surfgroup::CrossingReport& r);
json to_json(const surfgroup::QmEvaluation& q, const surfgroup::Word& sigma, const surfgroup::Word& target);
json to_json(const surfgroup::SnTable& t);
json to_json(const surfgroup::BoundCertificate& c);
json to_json(const surfgroup::CayleyContext& c);

surfgroup::CrossingReport crossing_from_json(const json& j, int genus);
// Inverse of to_json for certificates; throws json::exception or
// surfgroup::ParseError on malformed input.
surfgroup::BoundCertificate certificate_from_json(const json& j, int genus);

}  // namespace surfcert
