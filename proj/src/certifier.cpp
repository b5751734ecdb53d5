#include "surfgroup/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace surfgroup {

namespace {

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string num(double x) { return fmt("%.10g", x); }

// Rotations of a cyclically geodesic word are conjugates by its prefixes.
struct AxisCandidate {
  Word b;
  Word conjugator;
};

std::optional<AxisCandidate> axis_like_conjugate(const Word& w, const FuchsianRep& rep,
                                                 const BallTable* ball, int doublings) {
  const SurfacePresentation& pres = rep.presentation();
  const CyclicSplit split = pres.cyclic_dehn_reduce(w);
  const Word g = shortlex_geodesic(split.core, rep, ball);
  if (g.empty()) return std::nullopt;
  std::optional<AxisCandidate> best;
  for (std::size_t s = 0; s < g.size(); ++s) {
    Word r = rotate(g, s);
    if (best && !shortlex_less(r, best->b)) continue;
    if (rep.geodesic_length(r) != static_cast<int>(r.size())) continue;
    bool additive = true;
    for (int j = 1, k = 2; j <= doublings && additive; ++j, k *= 2) {
      additive = rep.geodesic_length(power(r, k)) == k * static_cast<int>(r.size());
    }
    if (!additive) continue;
    // r = p^{-1} g p with p = g[0, s), and w = c core c^{-1}
    const Word p = g.subword(0, s);
    Word conj = p.inverse() * split.conjugator.inverse();
    if (!pres.equal(conj * w * conj.inverse(), r)) {
      throw std::logic_error("rotation is not the expected conjugate");
    }
    best = AxisCandidate{std::move(r), pres.dehn_reduce(conj)};
  }
  return best;
}

// Prefix/suffix splits of the pattern and its square, then seeded random
// splits with a short word inserted at the cut, then seeded random pairs.
std::vector<std::pair<Word, Word>> defect_pairs(const Word& sigma, int genus, int count,
                                                std::uint64_t seed) {
  std::vector<std::pair<Word, Word>> out;
  const Word twice = sigma * sigma;
  const std::size_t L = sigma.size();
  auto split = [&](const Word& w, std::size_t at, const Word& u) {
    out.emplace_back(w.subword(0, at) * u, u.inverse() * w.subword(at, w.size() - at));
  };
  for (std::size_t j = 1; j < 4 && static_cast<int>(out.size()) < count; ++j) {
    split(sigma, j * L / 4, Word{});
  }
  for (std::size_t j = 1; j < 4 && static_cast<int>(out.size()) < count; ++j) {
    split(twice, j * L / 2, Word{});
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> cut(1, 2 * L - 1);
  std::uniform_int_distribution<int> short_len(1, 2);
  while (static_cast<int>(out.size()) < count - count / 4) {
    split(twice, cut(rng), random_word(genus, short_len(rng), rng()));
  }
  std::uniform_int_distribution<int> len(static_cast<int>(L) / 2, static_cast<int>(L));
  while (static_cast<int>(out.size()) < count) {
    out.emplace_back(random_word(genus, len(rng), rng()), random_word(genus, len(rng), rng()));
  }
  return out;
}

// Conjugacy representative shared by e and e^{-1}; |hbar| is the same on it.
Word class_key(const Word& w, const FuchsianRep& rep, const BallTable& ball) {
  const Word core = rep.presentation().cyclic_dehn_reduce(w).core;
  const Word g = least_rotation(shortlex_geodesic(core, rep, &ball));
  const Word h = least_rotation(shortlex_geodesic(core.inverse(), rep, &ball));
  return shortlex_less(h, g) ? h : g;
}

}  // namespace

void ConstantsLedger::add(std::string name, double value, std::string role, std::string provenance) {
  if (provenance.empty()) throw std::logic_error("ledger entry " + name + " has no provenance");
  entries.push_back({std::move(name), value, std::move(role), std::move(provenance)});
}

const LedgerEntry* ConstantsLedger::find(const std::string& name) const {
  for (const LedgerEntry& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

double ConstantsLedger::value(const std::string& name) const {
  const LedgerEntry* e = find(name);
  if (e == nullptr) throw std::logic_error("no ledger entry " + name);
  return e->value;
}

std::string to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::kIssued:
      return "issued";
    case CertificateStatus::kDowngraded:
      return "empirical-assumption failed";
    case CertificateStatus::kRefused:
      return "refused";
  }
  return "refused";
}

PatternStage prepare_pattern(const Word& a, const CertifierData& data, const CertifierConfig& config) {
  const BallTable& ball = data.ball;
  const FuchsianRep& rep = ball.rep();
  const SurfacePresentation& pres = rep.presentation();
  PatternStage st;
  st.target = a;
  if (pres.is_identity(a)) {
    st.refusals.push_back("target is the identity");
    return st;
  }

  st.crossing = crossing_number(a, rep);
  if (!st.crossing.stabilized) {
    st.refusals.push_back("crossing report not stabilized");
    return st;
  }
  if (st.crossing.crossing_number == 0) {
    st.refusals.push_back("cr(a) = 0: the bound needs cr(a) > 0");
    return st;
  }

  // (1) power multiplier and a conjugate with an axis through the identity
  for (int k = 1; k <= config.max_power; ++k) {
    if (auto c = axis_like_conjugate(power(a, k), rep, &ball, config.axis_doublings)) {
      st.b = c->b;
      st.conjugator = c->conjugator;
      st.power = k;
      break;
    }
  }
  if (st.b.empty()) {
    st.refusals.push_back("no axis-like power within max_power " + std::to_string(config.max_power));
    return st;
  }
  st.b_translation_length = translation_length(rep.evaluate(st.b));
  st.ledger.add("C1", st.power, "power multiplier: b is a conjugate of a^C1 with an axis through id",
                "word-length additivity |b^k| = k|b| for k = 2.." +
                    std::to_string(1 << config.axis_doublings) + ", exact octagon-walk lengths");

  // (2) epsilon and N
  const CayleyContext& ctx = data.context;
  st.systole = rep.systole_estimate() > 0 ? rep.systole_estimate() : systole_lowerbound(ball);
  st.systole_radius = rep.systole_estimate() > 0 ? rep.systole_radius() : ball.radius();
  st.epsilon = config.epsilon_fixed > 0 ? config.epsilon_fixed : st.systole / config.epsilon_divisor;
  const double ell = st.b_translation_length;
  const double c2 = 2 * ctx.delta_estimate + 2;
  const double c3 = ctx.qi_K * c2 + ctx.qi_eps;
  // sinh d shrinks by e^{-s} a distance s inside a segment whose ends are c3 apart
  const double c4 =
      2 * (c3 + std::log1p(-std::exp(-2 * c3)) - std::log(std::sinh(st.epsilon)));
  if (config.n_fixed > 0) {
    st.N = config.n_fixed;
  } else {
    st.N = 1;
    while (st.N * ell - c4 <= 2 * ell + 4 * st.epsilon) ++st.N;
  }
  const std::string ctx_prov = "ball radius " + std::to_string(ctx.radius) + ", " +
                               std::to_string(ctx.triangles_sampled) + " sampled triangles";
  st.ledger.add("delta", ctx.delta_estimate, "thin-triangle constant of the word metric", ctx_prov);
  st.ledger.add("qi_K", ctx.qi_K, "quasi-isometry multiplicative constant",
                "all elements of the radius " + std::to_string(ctx.radius) + " ball");
  st.ledger.add("qi_eps", ctx.qi_eps, "quasi-isometry additive constant",
                "all elements of the radius " + std::to_string(ctx.radius) + " ball");
  st.ledger.add("C2", c2, "neighbourhood constant in the word metric", "2*delta + 2, " + ctx_prov);
  st.ledger.add("C3", c3, "neighbourhood constant in the hyperbolic plane", "qi_K*C2 + qi_eps");
  st.ledger.add("C4", c4, "fellow-travel loss: geodesics C3-close at the ends are eps-close inside",
                "2*(log(2 sinh C3) - log(sinh eps))");
  st.ledger.add("systole", st.systole, "shortest closed geodesic",
                "minimum translation length over the radius " + std::to_string(st.systole_radius) +
                    " ball");
  st.ledger.add("epsilon", st.epsilon, "trap width, 8 eps below the systole",
                config.epsilon_fixed > 0 ? "fixed by configuration"
                                         : "systole/" + num(config.epsilon_divisor));
  st.ledger.add("length_b", ell, "translation length of b", "trace of the Fuchsian image");
  st.ledger.add("N", st.N, "pattern exponent",
                config.n_fixed > 0 ? "fixed by configuration"
                                   : "least N with N*length_b - C4 > 2*length_b + 4*eps");

  // (3) pattern
  st.axis = axis_pattern(st.b, st.N, rep, &ball);
  if (!st.axis->axis_like) {
    st.downgrades.push_back("pattern not axis-like: |b^2N| = " + std::to_string(st.axis->length_b2N) +
                            ", 2|b^N| = " + std::to_string(2 * st.axis->length_bN));
  }

  // (4) h(b^{Nm}) = m and the vanishing of c_{sigma^{-1}}
  const PathPattern& sigma = st.axis->pattern;
  std::vector<double> ratios;
  st.checks_hold = true;
  for (int m : dyadic_schedule(config.verify_max_m)) {
    PatternCheck c;
    c.m = m;
    try {
      const QmEvaluation q = h_sigma(power(st.b, st.N * m), sigma, rep, &ball, config.limits);
      c.h = q.h_sigma;
      c.c_sigma = q.c_sigma;
      c.c_sigma_inv = q.c_sigma_inv;
      c.realizing_word = q.forward.realizing_word;
      c.realizing_word_inv = q.backward.realizing_word;
    } catch (const ResourceLimitError& e) {
      st.downgrades.push_back("h(b^{N*" + std::to_string(m) + "}) not computable: " + e.what());
      st.checks_hold = false;
      break;
    }
    c.holds = c.h == m && c.c_sigma_inv == 0;
    if (!c.holds) {
      st.checks_hold = false;
      st.downgrades.push_back("empirical assumption failed at m = " + std::to_string(m) + ": h = " +
                              std::to_string(c.h) + ", c_inv = " + std::to_string(c.c_sigma_inv));
    }
    ratios.push_back(static_cast<double>(c.h) / m);
    st.checks.push_back(std::move(c));
  }
  if (ratios.size() < 2) {
    st.refusals.push_back("homogenization needs two evaluations of h(b^{Nm})");
    return st;
  }
  const double scale = static_cast<double>(st.N) * st.power;
  st.hbar = ratios.back() / scale;
  st.hbar_error = std::abs(ratios.back() - ratios[ratios.size() - 2]) / scale;
  if (st.hbar - st.hbar_error <= 0) {
    st.refusals.push_back("hbar(a) - error <= 0");
    return st;
  }

  st.defect_samples = defect_pairs(sigma.word(), rep.genus(), config.defect_samples, config.seed);
  st.defect = defect_estimate(sigma, st.defect_samples, rep, &ball, config.limits);
  st.ledger.add("D", st.defect, "defect of h_sigma (a sampled lower bound)",
                std::to_string(st.defect_samples.size()) + " pairs, seed " +
                    std::to_string(config.seed));
  return st;
}

SupEstimate sup_over_table(const PatternStage& stage, const SnTable& table,
                           const CertifierData& data, const CertifierConfig& config) {
  const BallTable& ball = data.ball;
  const FuchsianRep& rep = ball.rep();
  const PathPattern& sigma = stage.axis->pattern;
  const std::vector<int> schedule = dyadic_schedule(config.sup_max_power);
  SupEstimate out;
  out.table_size = table.elements.size();

  struct ClassValue {
    double bound;
    double point;
    int power;
    int h;
  };
  std::map<Word, ClassValue, ShortlexLess> classes;
  for (const SnEntry& e : table.elements) {
    const Word key = class_key(e.word, rep, ball);
    auto it = classes.find(key);
    if (it == classes.end()) {
      ClassValue v{std::numeric_limits<double>::infinity(), 0, 0, 0};
      for (int k : schedule) {
        const int h = h_sigma(power(key, k), sigma, rep, &ball, config.limits).h_sigma;
        const double b = (std::abs(h) + stage.defect) / k;
        if (b < v.bound) v = {b, v.point, k, h};
        v.point = static_cast<double>(std::abs(h)) / k;
      }
      it = classes.emplace(key, v).first;
    }
    SupEntry s;
    s.element = e.word;
    s.crossing_number = e.crossing_number;
    s.power = it->second.power;
    s.h_power = it->second.h;
    s.bound = it->second.bound;
    const QmEvaluation q = h_sigma(power(e.word, stage.power), sigma, rep, &ball, config.limits);
    s.copies = std::max(q.forward.copies, q.backward.copies);
    s.structural_holds =
        static_cast<long>(s.copies) * s.copies <= static_cast<long>(stage.power) * stage.power * table.n;
    out.structural_holds = out.structural_holds && s.structural_holds;
    if (s.bound > out.bound) {
      out.bound = s.bound;
      out.argmax = e.word;
    }
    out.point = std::max(out.point, it->second.point);
    out.entries.push_back(std::move(s));
  }
  out.classes_evaluated = classes.size();
  return out;
}

namespace {

// Products of two table elements sorted by a conjugation-sensitive scalar;
// candidates with equal scalar are compared as matrices and then by Dehn.
class PairIndex {
 public:
  PairIndex(const std::vector<SnEntry>& elements, const BallTable& ball) : elements_(elements) {
    for (const SnEntry& e : elements) mats_.push_back(ball.matrix(e.index));
    for (std::uint32_t i = 0; i < elements.size(); ++i) {
      for (std::uint32_t j = 0; j < elements.size(); ++j) {
        entries_.push_back({key(mats_[i] * mats_[j]), i, j});
      }
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& x, const Entry& y) { return x.key < y.key; });
  }

  // (i, j) with t_i t_j = g, where w is a word for g.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> find(const Isometry& g, const Word& w,
                                                              const SurfacePresentation& pres) const {
    const double k = key(g);
    const double tol = 1e-9 * std::max(1.0, std::abs(k));
    auto lo = std::lower_bound(entries_.begin(), entries_.end(), k - tol,
                               [](const Entry& e, double v) { return e.key < v; });
    for (auto it = lo; it != entries_.end() && it->key <= k + tol; ++it) {
      const Isometry m = mats_[it->i] * mats_[it->j];
      const double scale = std::max(1.0, std::sqrt(m.norm2()));
      if (!approx_equal(m, g, 1e-7 * scale)) continue;
      const Word prod = elements_[it->i].word * elements_[it->j].word;
      if (pres.equal(prod, w)) return std::make_pair(it->i, it->j);
    }
    return std::nullopt;
  }

 private:
  struct Entry {
    double key;
    std::uint32_t i, j;
  };
  // invariant under the sign of the matrix
  static double key(const Isometry& m) { return m.norm2() + 0.6180339887 * m.a * m.d + 0.3 * m.b * m.c; }

  const std::vector<SnEntry>& elements_;
  std::vector<Isometry> mats_;
  std::vector<Entry> entries_;
};

}  // namespace

UpperBound wordlength_upper(const Word& a, const SnTable& table, const BallTable& ball, int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  const FuchsianRep& rep = ball.rep();
  const SurfacePresentation& pres = rep.presentation();
  UpperBound out;
  const int len = rep.geodesic_length(a);
  if (len == 0) {
    out.value = 0;
    out.exact = true;
    return out;
  }
  const std::vector<SnEntry>& T = table.elements;
  const Isometry ga = rep.evaluate(a);
  auto in_table = [&](const Word& w, const Isometry& g) -> std::optional<BallTable::Index> {
    auto i = ball.find(w, g);
    if (i && table.contains(*i)) return i;
    return std::nullopt;
  };
  auto found = [&](std::vector<Word> factors) {
    out.value = static_cast<int>(factors.size());
    out.exact = true;
    out.factors = std::move(factors);
    return out;
  };
  const int R = table.radius;

  // one and two factors
  if (auto i = in_table(a, ga)) return found({ball.normal_form(*i)});
  if (depth >= 2 && len <= 2 * R) {
    for (const SnEntry& t : T) {
      const Word rest = t.word.inverse() * a;
      if (auto i = in_table(rest, ball.matrix(t.index).inverse() * ga)) {
        return found({t.word, ball.normal_form(*i)});
      }
    }
  }
  // three and four factors: t1 t2 = t^{-1} a, or t1 t2 = a t4^{-1} t3^{-1}
  if (depth >= 3 && len <= 4 * R) {
    const PairIndex pairs(T, ball);
    if (len <= 3 * R) {
      for (const SnEntry& t : T) {
        const Word rest = t.word.inverse() * a;
        if (auto ij = pairs.find(ball.matrix(t.index).inverse() * ga, rest, pres)) {
          return found({t.word, T[ij->first].word, T[ij->second].word});
        }
      }
    }
    if (depth >= 4) {
      for (const SnEntry& t3 : T) {
        for (const SnEntry& t4 : T) {
          if (ball.length(t3.index) + ball.length(t4.index) + 2 * R < len) continue;
          const Word rest = a * t4.word.inverse() * t3.word.inverse();
          const Isometry g = ga * ball.matrix(t4.index).inverse() * ball.matrix(t3.index).inverse();
          if (auto ij = pairs.find(g, rest, pres)) {
            return found({T[ij->first].word, T[ij->second].word, t3.word, t4.word});
          }
        }
      }
    }
  }
  if (depth <= 4) return out;

  // beyond four factors: best split of a geodesic word into table elements
  const Word g = shortlex_geodesic(a, rep, &ball);
  const std::size_t n = g.size();
  const int inf = std::numeric_limits<int>::max();
  std::vector<int> best(n + 1, inf);
  std::vector<std::size_t> from(n + 1, 0);
  best[0] = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = i > static_cast<std::size_t>(R) ? i - R : 0; j < i; ++j) {
      if (best[j] == inf || best[j] + 1 >= best[i]) continue;
      if (in_table(g.subword(j, i - j), rep.evaluate(g.subword(j, i - j)))) {
        best[i] = best[j] + 1;
        from[i] = j;
      }
    }
  }
  if (best[n] == inf || best[n] > depth) return out;
  out.value = best[n];
  for (std::size_t i = n; i > 0; i = from[i]) out.factors.push_back(g.subword(from[i], i - from[i]));
  std::reverse(out.factors.begin(), out.factors.end());
  return out;
}

double qm_lower_bound(int m, double hbar, double hbar_error, double sup, double defect) {
  if (hbar - hbar_error <= 0) throw std::domain_error("hbar(a) - error <= 0: no bound");
  if (sup + defect <= 0) throw std::domain_error("sup + defect must be positive");
  return m * (hbar - hbar_error) / (sup + defect);
}

BoundCertificate certify(const PatternStage& stage, int n, int m_lo, int m_hi,
                         const CertifierData& data, const CertifierConfig& config) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (m_lo < 1 || m_hi < m_lo) throw std::invalid_argument("bad m range");
  BoundCertificate cert;
  cert.target = stage.target;
  cert.n = n;
  cert.m_lo = m_lo;
  cert.m_hi = m_hi;
  cert.table_radius = data.census.radius;
  cert.ball_radius = data.ball.radius();
  cert.stage = stage;
  if (!stage.refusals.empty()) {
    cert.status = CertificateStatus::kRefused;
    cert.reasons = stage.refusals;
    return cert;
  }

  const SnTable table = enumerate_Sn(n, false, data.ball, data.census);
  cert.sup = sup_over_table(stage, table, data, config);
  cert.stage.ledger.add("sup_Sn", cert.sup.bound,
                        "sup of |hbar| over the S_n table, as max_e min_k (|h(e^k)| + D)/k",
                        std::to_string(cert.sup.table_size) + " table elements of radius " +
                            std::to_string(table.radius) + ", " +
                            std::to_string(cert.sup.classes_evaluated) +
                            " conjugacy classes, k dyadic up to " +
                            std::to_string(config.sup_max_power));
  if (!cert.sup.structural_holds) {
    cert.status = CertificateStatus::kRefused;
    cert.reasons.push_back("structural check p^2 <= C1^2 n fails on a table element");
    return cert;
  }
  const double denom = cert.sup.bound + stage.defect;
  if (denom <= 0) {
    cert.status = CertificateStatus::kRefused;
    cert.reasons.push_back("sup + D = 0");
    return cert;
  }
  cert.slope = (stage.hbar - stage.hbar_error) / denom;
  for (int m = m_lo; m <= m_hi; ++m) {
    MBound mb;
    mb.m = m;
    mb.lower = qm_lower_bound(m, stage.hbar, stage.hbar_error, cert.sup.bound, stage.defect);
    mb.upper = wordlength_upper(power(stage.target, m), table, data.ball, config.upper_depth);
    if (mb.upper.value && mb.lower > *mb.upper.value) cert.sandwich_holds = false;
    cert.bounds.push_back(std::move(mb));
  }
  if (!cert.sandwich_holds) {
    cert.status = CertificateStatus::kRefused;
    cert.reasons.push_back("lower bound exceeds an upper bound");
    return cert;
  }
  cert.reasons = stage.downgrades;
  cert.status = stage.downgrades.empty() ? CertificateStatus::kIssued : CertificateStatus::kDowngraded;
  return cert;
}

BoundCertificate certify(const Word& a, int n, int m_lo, int m_hi, const CertifierData& data,
                         const CertifierConfig& config) {
  return certify(prepare_pattern(a, data, config), n, m_lo, m_hi, data, config);
}

std::vector<std::string> reverify(const BoundCertificate& cert, const BallTable& ball) {
  std::vector<std::string> failed;
  const FuchsianRep& rep = ball.rep();
  const SurfacePresentation& pres = rep.presentation();
  const PatternStage& st = cert.stage;
  if (cert.status == CertificateStatus::kRefused) return failed;
  if (!st.axis) return {"issued certificate without a pattern"};

  const Word aC = power(st.target, st.power);
  if (!pres.equal(st.conjugator * aC * st.conjugator.inverse(), st.b)) {
    failed.push_back("b is not the stated conjugate of a^C1");
  }
  const Word& sigma = st.axis->pattern.word();
  if (!pres.equal(sigma, power(st.b, st.N)) ||
      rep.geodesic_length(sigma) != static_cast<int>(sigma.size())) {
    failed.push_back("pattern is not a geodesic word for b^N");
  }
  if (rep.geodesic_length(power(st.b, 2 * st.N)) != st.axis->length_b2N) {
    failed.push_back("recorded |b^2N| is wrong");
  }
  const PathPattern inv = st.axis->pattern.inverse();
  for (const PatternCheck& c : st.checks) {
    const Word target = power(st.b, st.N * c.m);
    const int d = rep.geodesic_length(target);
    auto value = [&](const Word& w, const PathPattern& p) {
      return d - static_cast<int>(w.size()) + count_disjoint_copies(w, p);
    };
    if (!pres.equal(c.realizing_word, target) || value(c.realizing_word, st.axis->pattern) != c.c_sigma) {
      failed.push_back("realizing word for c_sigma at m = " + std::to_string(c.m));
    }
    if (!pres.equal(c.realizing_word_inv, target) || value(c.realizing_word_inv, inv) != c.c_sigma_inv) {
      failed.push_back("realizing word for c_sigma_inv at m = " + std::to_string(c.m));
    }
    if (c.h != c.c_sigma - c.c_sigma_inv) failed.push_back("h != c - c_inv at m = " + std::to_string(c.m));
  }
  const double denom = cert.sup.bound + st.defect;
  if (std::abs(cert.slope - (st.hbar - st.hbar_error) / denom) > 1e-12 * std::max(1.0, cert.slope)) {
    failed.push_back("slope arithmetic");
  }
  for (const MBound& mb : cert.bounds) {
    if (std::abs(mb.lower - mb.m * cert.slope) > 1e-9 * std::max(1.0, mb.lower)) {
      failed.push_back("lower bound at m = " + std::to_string(mb.m));
    }
    if (!mb.upper.value) continue;
    Word prod;
    for (const Word& f : mb.upper.factors) {
      auto i = ball.find(f);
      if (!i || ball.length(*i) > cert.table_radius) failed.push_back("factor outside the table radius");
      prod = prod * f;
    }
    if (static_cast<int>(mb.upper.factors.size()) != *mb.upper.value ||
        !pres.equal(prod, power(st.target, mb.m))) {
      failed.push_back("factorization at m = " + std::to_string(mb.m));
    }
    if (mb.lower > *mb.upper.value) failed.push_back("sandwich at m = " + std::to_string(mb.m));
  }
  return failed;
}

std::string ScalingReport::csv() const {
  std::ostringstream os;
  os << "n,m,lower,upper,slope\n";
  for (const ScalingRow& r : rows) {
    os << r.n << ',' << r.m << ',' << num(r.lower) << ',';
    if (r.upper) os << *r.upper;
    os << ',' << num(r.slope) << '\n';
  }
  for (const std::string& f : footer) os << "# " << f << '\n';
  return os.str();
}

ScalingReport scaling_report(const Word& a, const std::vector<int>& n_list, int m_lo, int m_hi,
                             const CertifierData& data, const CertifierConfig& config) {
  ScalingReport out;
  const PatternStage stage = prepare_pattern(a, data, config);
  for (int n : n_list) {
    BoundCertificate cert = certify(stage, n, m_lo, m_hi, data, config);
    if (cert.status == CertificateStatus::kRefused) {
      std::string why;
      for (const std::string& r : cert.reasons) why += (why.empty() ? "" : "; ") + r;
      out.footer.push_back("refused n=" + std::to_string(n) + ": " + why);
    } else {
      for (const MBound& mb : cert.bounds) {
        out.rows.push_back({n, mb.m, mb.lower, mb.upper.value, cert.slope});
      }
    }
    out.certificates.push_back(std::move(cert));
  }
  return out;
}

}  // namespace surfgroup
