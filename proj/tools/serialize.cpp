#include "serialize.hpp"

using namespace surfgroup;

namespace surfcert {

namespace {

json boundary_json(const BoundaryPoint& p) {
  if (p.infinite) return "inf";
  return p.x;
}

BoundaryPoint boundary_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "inf") throw ParseError("bad boundary point " + j.dump());
    return BoundaryPoint::infinity();
  }
  return BoundaryPoint::at(j.get<double>());
}

json line_json(const GeodesicLine& l) { return {{"neg", boundary_json(l.neg)}, {"pos", boundary_json(l.pos)}}; }

GeodesicLine line_from_json(const json& j) {
  return {boundary_from_json(j.at("neg")), boundary_from_json(j.at("pos"))};
}

json words_json(const std::vector<Word>& ws) {
  json out = json::array();
  for (const Word& w : ws) out.push_back(word_json(w));
  return out;
}

std::vector<Word> words_from_json(const json& j, int genus) {
  std::vector<Word> out;
  for (const json& w : j) out.push_back(word_from_json(w, genus));
  return out;
}

json c_json(const CEvaluation& c) {
  return {{"value", c.value},
          {"realizing_word", word_json(c.realizing_word)},
          {"copies", c.copies},
          {"states_expanded", c.stats.states_expanded},
          {"elements_seen", c.stats.elements_seen},
          {"distance", c.stats.distance},
          {"excess_bound", c.stats.excess_bound}};
}

json ledger_json(const ConstantsLedger& l) {
  json out = json::array();
  for (const LedgerEntry& e : l.entries) {
    out.push_back({{"name", e.name}, {"value", e.value}, {"role", e.role}, {"provenance", e.provenance}});
  }
  return out;
}

ConstantsLedger ledger_from_json(const json& j) {
  ConstantsLedger l;
  for (const json& e : j) {
    l.add(e.at("name").get<std::string>(), e.at("value").get<double>(), e.at("role").get<std::string>(),
          e.at("provenance").get<std::string>());
  }
  return l;
}

json upper_json(const UpperBound& u) {
  return {{"value", u.value ? json(*u.value) : json(nullptr)}, {"exact", u.exact}, {"factors", words_json(u.factors)}};
}

UpperBound upper_from_json(const json& j, int genus) {
  UpperBound u;
  if (!j.at("value").is_null()) u.value = j.at("value").get<int>();
  u.exact = j.at("exact").get<bool>();
  u.factors = words_from_json(j.at("factors"), genus);
  return u;
}

CertificateStatus status_from_string(const std::string& s) {
  for (auto st : {CertificateStatus::kIssued, CertificateStatus::kDowngraded, CertificateStatus::kRefused}) {
    if (to_string(st) == s) return st;
  }
  throw ParseError("unknown certificate status \"" + s + "\"");
}

json stage_json(const PatternStage& s) {
  json checks = json::array();
  for (const PatternCheck& c : s.checks) {
    checks.push_back({{"m", c.m},
                      {"h", c.h},
                      {"c_sigma", c.c_sigma},
                      {"c_sigma_inv", c.c_sigma_inv},
                      {"realizing_word", word_json(c.realizing_word)},
                      {"realizing_word_inv", word_json(c.realizing_word_inv)},
                      {"holds", c.holds}});
  }
  json samples = json::array();
  for (const auto& [x, y] : s.defect_samples) samples.push_back({word_json(x), word_json(y)});
  json axis = nullptr;
  if (s.axis) {
    axis = {{"pattern", word_json(s.axis->pattern.word())},
            {"axis_like", s.axis->axis_like},
            {"length_bN", s.axis->length_bN},
            {"length_b2N", s.axis->length_b2N}};
  }
  return {{"target", word_json(s.target)},
          {"crossing", to_json(s.crossing)},
          {"b", word_json(s.b)},
          {"power", s.power},
          {"conjugator", word_json(s.conjugator)},
          {"b_translation_length", s.b_translation_length},
          {"systole", s.systole},
          {"systole_radius", s.systole_radius},
          {"epsilon", s.epsilon},
          {"N", s.N},
          {"axis", axis},
          {"checks", checks},
          {"checks_hold", s.checks_hold},
          {"hbar", s.hbar},
          {"hbar_error", s.hbar_error},
          {"defect", s.defect},
          {"defect_samples", samples},
          {"ledger", ledger_json(s.ledger)},
          {"refusals", s.refusals},
          {"downgrades", s.downgrades}};
}

PatternStage stage_from_json(const json& j, int genus) {
  PatternStage s;
  s.target = word_from_json(j.at("target"), genus);
  s.crossing = crossing_from_json(j.at("crossing"), genus);
  s.b = word_from_json(j.at("b"), genus);
  s.power = j.at("power").get<int>();
  s.conjugator = word_from_json(j.at("conjugator"), genus);
  s.b_translation_length = j.at("b_translation_length").get<double>();
  s.systole = j.at("systole").get<double>();
  s.systole_radius = j.at("systole_radius").get<int>();
  s.epsilon = j.at("epsilon").get<double>();
  s.N = j.at("N").get<int>();
  if (const json& a = j.at("axis"); !a.is_null()) {
    s.axis = AxisPattern{PathPattern(word_from_json(a.at("pattern"), genus)), a.at("axis_like").get<bool>(),
                         a.at("length_bN").get<int>(), a.at("length_b2N").get<int>()};
  }
  for (const json& c : j.at("checks")) {
    PatternCheck pc;
    pc.m = c.at("m").get<int>();
    pc.h = c.at("h").get<int>();
    pc.c_sigma = c.at("c_sigma").get<int>();
    pc.c_sigma_inv = c.at("c_sigma_inv").get<int>();
    pc.realizing_word = word_from_json(c.at("realizing_word"), genus);
    pc.realizing_word_inv = word_from_json(c.at("realizing_word_inv"), genus);
    pc.holds = c.at("holds").get<bool>();
    s.checks.push_back(std::move(pc));
  }
  s.checks_hold = j.at("checks_hold").get<bool>();
  s.hbar = j.at("hbar").get<double>();
  s.hbar_error = j.at("hbar_error").get<double>();
  s.defect = j.at("defect").get<double>();
  for (const json& p : j.at("defect_samples")) {
    s.defect_samples.emplace_back(word_from_json(p.at(0), genus), word_from_json(p.at(1), genus));
  }
  s.ledger = ledger_from_json(j.at("ledger"));
  s.refusals = j.at("refusals").get<std::vector<std::string>>();
  s.downgrades = j.at("downgrades").get<std::vector<std::string>>();
  return s;
}

json sup_json(const SupEstimate& s) {
  json entries = json::array();
  for (const SupEntry& e : s.entries) {
    entries.push_back({{"element", word_json(e.element)},
                       {"crossing_number", e.crossing_number},
                       {"power", e.power},
                       {"h_power", e.h_power},
                       {"bound", e.bound},
                       {"copies", e.copies},
                       {"structural_holds", e.structural_holds}});
  }
  return {{"bound", s.bound},
          {"point", s.point},
          {"argmax", word_json(s.argmax)},
          {"table_size", s.table_size},
          {"classes_evaluated", s.classes_evaluated},
          {"entries", entries},
          {"structural_holds", s.structural_holds}};
}

SupEstimate sup_from_json(const json& j, int genus) {
  SupEstimate s;
  s.bound = j.at("bound").get<double>();
  s.point = j.at("point").get<double>();
  s.argmax = word_from_json(j.at("argmax"), genus);
  s.table_size = j.at("table_size").get<std::size_t>();
  s.classes_evaluated = j.at("classes_evaluated").get<std::size_t>();
  for (const json& e : j.at("entries")) {
    SupEntry se;
    se.element = word_from_json(e.at("element"), genus);
    se.crossing_number = e.at("crossing_number").get<int>();
    se.power = e.at("power").get<int>();
    se.h_power = e.at("h_power").get<int>();
    se.bound = e.at("bound").get<double>();
    se.copies = e.at("copies").get<int>();
    se.structural_holds = e.at("structural_holds").get<bool>();
    s.entries.push_back(std::move(se));
  }
  s.structural_holds = j.at("structural_holds").get<bool>();
  return s;
}

}  // namespace

json word_json(const Word& w) { return format_word(w); }

Word word_from_json(const json& j, int genus) { return parse_word(j.get<std::string>(), genus); }

json to_json(const CrossingReport& r) {
  json witnesses = json::array();
  for (const CrossingWitness& w : r.witnesses) {
    witnesses.push_back({{"conjugator", word_json(w.conjugator)},
                         {"axis", line_json(w.axis)},
                         {"other", line_json(w.other)},
                         {"point", {w.point.real(), w.point.imag()}},
                         {"angle", w.angle},
                         {"param", w.param},
                         {"other_param", w.other_param}});
  }
  return {{"element", word_json(r.element)},
          {"primitive_root", word_json(r.primitive_root)},
          {"power", r.power},
          {"axis_element", word_json(r.axis_element)},
          {"translation_length", r.translation_length},
          {"primitive_crossings", r.primitive_crossings},
          {"crossing_number", r.crossing_number},
          {"witnesses", witnesses},
          {"enumeration_radius", r.enumeration_radius},
          {"counts", r.counts},
          {"stabilized", r.stabilized}};
}

CrossingReport crossing_from_json(const json& j, int genus) {
  CrossingReport r;
  r.element = word_from_json(j.at("element"), genus);
  r.primitive_root = word_from_json(j.at("primitive_root"), genus);
  r.power = j.at("power").get<int>();
  r.axis_element = word_from_json(j.at("axis_element"), genus);
  r.translation_length = j.at("translation_length").get<double>();
  r.primitive_crossings = j.at("primitive_crossings").get<int>();
  r.crossing_number = j.at("crossing_number").get<int>();
  for (const json& w : j.at("witnesses")) {
    CrossingWitness cw;
    cw.conjugator = word_from_json(w.at("conjugator"), genus);
    cw.axis = line_from_json(w.at("axis"));
    cw.other = line_from_json(w.at("other"));
    cw.point = {w.at("point").at(0).get<double>(), w.at("point").at(1).get<double>()};
    cw.angle = w.at("angle").get<double>();
    cw.param = w.at("param").get<double>();
    cw.other_param = w.at("other_param").get<double>();
    r.witnesses.push_back(std::move(cw));
  }
  r.enumeration_radius = j.at("enumeration_radius").get<int>();
  r.counts = j.at("counts").get<std::vector<int>>();
  r.stabilized = j.at("stabilized").get<bool>();
  return r;
}

json to_json(const QmEvaluation& q, const Word& sigma, const Word& target) {
  return {{"sigma", word_json(sigma)},
          {"target", word_json(target)},
          {"c_sigma", q.c_sigma},
          {"c_sigma_inv", q.c_sigma_inv},
          {"h_sigma", q.h_sigma},
          {"forward", c_json(q.forward)},
          {"backward", c_json(q.backward)}};
}

json to_json(const SnTable& t) {
  json elements = json::array();
  for (const SnEntry& e : t.elements) {
    elements.push_back({{"word", word_json(e.word)}, {"crossing_number", e.crossing_number}, {"power", e.power}});
  }
  return {{"n", t.n},
          {"radius", t.radius},
          {"primitive_only", t.primitive_only},
          {"size", t.elements.size()},
          {"elements", elements}};
}

json to_json(const CayleyContext& c) {
  return {{"delta_estimate", c.delta_estimate},
          {"qi_K", c.qi_K},
          {"qi_eps", c.qi_eps},
          {"radius", c.radius},
          {"triangles_sampled", c.triangles_sampled}};
}

json to_json(const BoundCertificate& c) {
  json bounds = json::array();
  for (const MBound& b : c.bounds) bounds.push_back({{"m", b.m}, {"lower", b.lower}, {"upper", upper_json(b.upper)}});
  return {{"target", word_json(c.target)},
          {"n", c.n},
          {"m_lo", c.m_lo},
          {"m_hi", c.m_hi},
          {"status", to_string(c.status)},
          {"reasons", c.reasons},
          {"validity", c.validity},
          {"defect_caveat", c.defect_caveat},
          {"table_radius", c.table_radius},
          {"ball_radius", c.ball_radius},
          {"stage", stage_json(c.stage)},
          {"sup", sup_json(c.sup)},
          {"slope", c.slope},
          {"bounds", bounds},
          {"sandwich_holds", c.sandwich_holds}};
}

BoundCertificate certificate_from_json(const json& j, int genus) {
  BoundCertificate c;
  c.target = word_from_json(j.at("target"), genus);
  c.n = j.at("n").get<int>();
  c.m_lo = j.at("m_lo").get<int>();
  c.m_hi = j.at("m_hi").get<int>();
  c.status = status_from_string(j.at("status").get<std::string>());
  c.reasons = j.at("reasons").get<std::vector<std::string>>();
  c.validity = j.at("validity").get<std::string>();
  c.defect_caveat = j.at("defect_caveat").get<std::string>();
  c.table_radius = j.at("table_radius").get<int>();
  c.ball_radius = j.at("ball_radius").get<int>();
  c.stage = stage_from_json(j.at("stage"), genus);
  c.sup = sup_from_json(j.at("sup"), genus);
  c.slope = j.at("slope").get<double>();
  for (const json& b : j.at("bounds")) {
    c.bounds.push_back({b.at("m").get<int>(), b.at("lower").get<double>(), upper_from_json(b.at("upper"), genus)});
  }
  c.sandwich_holds = j.at("sandwich_holds").get<bool>();
  return c;
}

}  // namespace surfcert
