#include "doctest.h"

#include <set>

#include "surfgroup/certifier.hpp"

using namespace surfgroup;

namespace {

struct Setup {
  FuchsianRep rep = octagon_rep();
  BallTable ball = BallTable::enumerate(rep, 6);
  CrossingCensus census = crossing_census(ball, 3);
  CayleyContext ctx = estimate_context(ball, 500, 1);
  CertifierData data{ball, census, ctx};
  CertifierConfig config = [] {
    CertifierConfig c;
    c.verify_max_m = 2;
    c.sup_max_power = 8;
    c.defect_samples = 12;
    return c;
  }();
};

Setup& setup() {
  static Setup s;
  return s;
}

Word W(const char* s) { return parse_word(s, 2); }

const PatternStage& stage() {
  static const PatternStage st = prepare_pattern(W("a1 b1 A1 b1"), setup().data, setup().config);
  return st;
}

Word product(const std::vector<Word>& factors) {
  Word p;
  for (const Word& f : factors) p = p * f;
  return p;
}

}  // namespace

TEST_CASE("pattern stage for a1 b1 A1 b1") {
  const PatternStage& st = stage();
  const SurfacePresentation& pres = setup().rep.presentation();
  REQUIRE(st.refusals.empty());
  CHECK(st.downgrades.empty());
  CHECK(st.crossing.crossing_number >= 1);
  // b is the stated conjugate of a^C1 and is additive at one doubling
  CHECK(pres.equal(st.conjugator * power(st.target, st.power) * st.conjugator.inverse(), st.b));
  CHECK(setup().rep.geodesic_length(power(st.b, 2)) == 2 * static_cast<int>(st.b.size()));
  REQUIRE(st.axis.has_value());
  CHECK(st.axis->axis_like);
  CHECK(st.axis->length_bN == st.N * static_cast<int>(st.b.size()));
  // N satisfies the length inequality
  const double ell = st.b_translation_length;
  const double c4 = st.ledger.value("C4");
  CHECK(st.N * ell - c4 > 2 * ell + 4 * st.epsilon);
  CHECK((st.N - 1) * ell - c4 <= 2 * ell + 4 * st.epsilon);
  CHECK(st.epsilon == doctest::Approx(st.systole / 16));
  CHECK(8 * st.epsilon < st.systole);

  for (const PatternCheck& c : st.checks) {
    CHECK(c.holds);
    CHECK(c.h == c.m);
    CHECK(c.c_sigma == c.m);
    CHECK(c.c_sigma_inv == 0);
    CHECK(count_disjoint_copies(c.realizing_word, st.axis->pattern) == c.m);
  }
  CHECK(st.hbar == doctest::Approx(1.0 / (st.N * st.power)));
  CHECK(st.hbar_error == 0);
  // splitting sigma gives h(x) = h(y) = 0 and h(xy) = 1
  CHECK(st.defect >= 1);
}

TEST_CASE("constants ledger carries provenance") {
  const PatternStage& st = stage();
  for (const char* name : {"C1", "delta", "qi_K", "C2", "C3", "C4", "systole", "epsilon", "N", "D"}) {
    const LedgerEntry* e = st.ledger.find(name);
    REQUIRE_MESSAGE(e != nullptr, name);
    CHECK(!e->provenance.empty());
    CHECK(!e->role.empty());
  }
  CHECK(st.ledger.value("N") == st.N);
  CHECK(st.ledger.value("D") == st.defect);
  CHECK_THROWS_AS(st.ledger.value("C9"), std::logic_error);
  ConstantsLedger l;
  CHECK_THROWS(l.add("x", 1, "role", ""));
}

TEST_CASE("certificate for a1 b1 A1 b1, n = 0") {
  const BoundCertificate cert = certify(stage(), 0, 1, 6, setup().data, setup().config);
  REQUIRE(cert.status == CertificateStatus::kIssued);
  CHECK(cert.validity == "table-certified");
  CHECK(cert.defect_caveat == "defect estimated by sampling");
  CHECK(cert.slope > 0);
  REQUIRE(cert.bounds.size() == 6);
  for (const MBound& b : cert.bounds) {
    CHECK(b.lower == doctest::Approx(b.m * cert.slope));
    if (b.upper.value) CHECK(b.lower <= *b.upper.value);
  }
  CHECK(cert.sandwich_holds);
  CHECK(cert.sup.structural_holds);
  for (const SupEntry& e : cert.sup.entries) {
    CHECK(e.copies == 0);  // p^2 <= C1^2 * 0
    CHECK(e.bound >= 0);
  }
  CHECK(cert.sup.table_size == cert.sup.entries.size());
  CHECK(cert.stage.ledger.find("sup_Sn") != nullptr);
  CHECK(reverify(cert, setup().ball).empty());

  // tampering is caught
  BoundCertificate bad = cert;
  bad.slope *= 2;
  CHECK(!reverify(bad, setup().ball).empty());
  bad = cert;
  bad.stage.checks[0].c_sigma_inv = 1;
  CHECK(!reverify(bad, setup().ball).empty());
}

TEST_CASE("slopes are nonincreasing in n") {
  double prev = 1e300;
  for (int n : {0, 1, 2}) {
    const BoundCertificate c = certify(stage(), n, 1, 2, setup().data, setup().config);
    REQUIRE(c.status == CertificateStatus::kIssued);
    CHECK(c.slope <= prev);
    CHECK(c.sup.structural_holds);
    for (const SupEntry& e : c.sup.entries) {
      CHECK(e.copies * e.copies <= stage().power * stage().power * n);
    }
    prev = c.slope;
  }
}

TEST_CASE("refusals") {
  const auto& s = setup();
  BoundCertificate c = certify(W("a1"), 0, 1, 3, s.data, s.config);
  CHECK(c.status == CertificateStatus::kRefused);
  REQUIRE(!c.reasons.empty());
  CHECK(c.reasons[0].find("cr(a) = 0") != std::string::npos);
  CHECK(certify(W("a1 b1 A1 B1"), 0, 1, 3, s.data, s.config).status == CertificateStatus::kRefused);
  CHECK(certify(W("a1 A1"), 0, 1, 3, s.data, s.config).status == CertificateStatus::kRefused);
  CHECK_THROWS_AS(qm_lower_bound(1, 0, 0, 1, 1), std::domain_error);
  CHECK_THROWS_AS(qm_lower_bound(1, 0.1, 0.2, 1, 1), std::domain_error);
  // a = b with hbar(b^m) = m/N and sup + D = s gives m/(N s)
  CHECK(qm_lower_bound(3, 1.0 / 9, 0, 0.25, 1) == doctest::Approx(3.0 / (9 * 1.25)));
}

TEST_CASE("word length upper bounds") {
  const auto& s = setup();
  const SurfacePresentation& pres = s.rep.presentation();
  const SnTable t0 = enumerate_Sn(0, false, s.ball, s.census);
  const SnTable t1 = enumerate_Sn(1, false, s.ball, s.census);

  for (const SnEntry& e : t0.elements) {
    if (e.index % 37 != 0) continue;
    const UpperBound u = wordlength_upper(e.word, t0, s.ball, 3);
    CHECK(u.value == 1);
  }
  const Word a = W("a1 b1 A1 b1");
  const UpperBound u = wordlength_upper(a, t0, s.ball, 4);
  REQUIRE(u.value.has_value());
  CHECK(*u.value <= 4);
  CHECK(*u.value >= 2);  // a itself has cr >= 1
  CHECK(u.exact);
  CHECK(pres.equal(product(u.factors), a));
  for (const Word& f : u.factors) CHECK(crossing_number(f, s.rep).crossing_number == 0);
  CHECK(wordlength_upper(Word{}, t0, s.ball, 1).value == 0);
  CHECK_THROWS(wordlength_upper(a, t0, s.ball, 0));

  // exact depth-2 answers agree with a brute-force pair scan
  std::set<BallTable::Index> members;
  for (const SnEntry& e : t0.elements) members.insert(e.index);
  for (const char* w : {"a1 b1 A1 b1", "a1 a2 b1", "a1 b1 b1 a2 B2", "a1 b1 A1 b1 a2"}) {
    const Word x = W(w);
    bool pair = members.count(*s.ball.find(x)) > 0;
    for (const SnEntry& e : t0.elements) {
      if (pair) break;
      const auto r = s.ball.find(e.word.inverse() * x);
      pair = r && members.count(*r);
    }
    const UpperBound ub = wordlength_upper(x, t0, s.ball, 2);
    CHECK(ub.value.has_value() == pair);
    if (ub.value) CHECK(pres.equal(product(ub.factors), x));
  }

  // larger tables never give larger bounds
  for (int m = 1; m <= 4; ++m) {
    const Word x = power(a, m);
    const UpperBound b0 = wordlength_upper(x, t0, s.ball, 8);
    const UpperBound b1 = wordlength_upper(x, t1, s.ball, 8);
    REQUIRE(b0.value.has_value());
    REQUIRE(b1.value.has_value());
    CHECK(*b1.value <= *b0.value);
    CHECK(pres.equal(product(b0.factors), x));
    CHECK(static_cast<int>(b0.factors.size()) == *b0.value);
  }
  // a depth too small for the length is reported as not reached
  CHECK(!wordlength_upper(power(a, 6), t0, s.ball, 2).value.has_value());
}

TEST_CASE("scaling report") {
  const auto& s = setup();
  const ScalingReport r = scaling_report(W("a1 b1 A1 b1"), {0, 1, 2}, 1, 6, s.data, s.config);
  REQUIRE(r.rows.size() == 18);
  CHECK(r.footer.empty());
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const ScalingRow& p = r.rows[i - 1];
    const ScalingRow& q = r.rows[i];
    if (p.n == q.n) CHECK(q.lower >= p.lower);
    if (p.n < q.n) CHECK(q.slope <= p.slope);
  }
  const std::string csv = r.csv();
  CHECK(csv.rfind("n,m,lower,upper,slope\n", 0) == 0);
  CHECK(r.csv() == csv);

  const ScalingReport z = scaling_report(W("a1 b1"), {0}, 1, 6, s.data, s.config);
  CHECK(z.rows.empty());
  REQUIRE(z.footer.size() == 1);
  CHECK(z.csv().find("# refused n=0") != std::string::npos);
}
