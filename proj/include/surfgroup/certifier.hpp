#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "surfgroup/context.hpp"
#include "surfgroup/crossing.hpp"
#include "surfgroup/quasimorphism.hpp"

namespace surfgroup {

// A measured stand-in for one of the existential constants, with where it
// came from.
struct LedgerEntry {
  std::string name;
  double value = 0;
  std::string role;        // which constant of the proof it replaces
  std::string provenance;  // measurement radius, sample size, formula
};

struct ConstantsLedger {
  std::vector<LedgerEntry> entries;
  void add(std::string name, double value, std::string role, std::string provenance);
  const LedgerEntry* find(const std::string& name) const;
  // Throws std::logic_error when the entry is missing.
  double value(const std::string& name) const;
};

// Shared, read-only inputs. S_n tables are taken at the census radius.
struct CertifierData {
  const BallTable& ball;
  const CrossingCensus& census;
  const CayleyContext& context;
};

struct CertifierConfig {
  // epsilon = systole / epsilon_divisor unless epsilon_fixed > 0
  double epsilon_divisor = 16;
  double epsilon_fixed = 0;
  int n_fixed = 0;             // N chosen by the length inequality when 0
  int max_power = 3;           // cap on the power multiplier
  int axis_doublings = 1;      // additivity checked at b^2, ..., b^(2^k)
  int verify_max_m = 4;        // h(b^{Nm}) = m checked for m in dyadic_schedule(verify_max_m)
  int sup_max_power = 16;      // table elements are evaluated at e^k, k dyadic up to this
  int defect_samples = 24;
  int upper_depth = 12;
  std::uint64_t seed = 1;
  SearchLimits limits;
};

enum class CertificateStatus { kIssued, kDowngraded, kRefused };
std::string to_string(CertificateStatus s);

// One evaluation of h_sigma(b^{Nm}) kept as a witness.
struct PatternCheck {
  int m = 0;
  int h = 0;
  int c_sigma = 0;
  int c_sigma_inv = 0;
  Word realizing_word;      // for c_sigma
  Word realizing_word_inv;  // for c_{sigma^{-1}}
  bool holds = false;       // h = m and c_{sigma^{-1}} = 0
};

// Steps (1)-(4) and the defect sample: everything that does not depend on n.
struct PatternStage {
  Word target;
  CrossingReport crossing;
  Word b;              // conjugate of target^power with an axis through id
  int power = 1;       // b ~ target^power
  Word conjugator;     // b = conjugator * target^power * conjugator^{-1}
  double b_translation_length = 0;
  double systole = 0;
  int systole_radius = 0;
  double epsilon = 0;
  int N = 0;
  std::optional<AxisPattern> axis;  // set once a pattern is built
  std::vector<PatternCheck> checks;
  bool checks_hold = false;
  double hbar = 0;        // homogenized value at the target
  double hbar_error = 0;
  double defect = 0;      // D-bar
  std::vector<std::pair<Word, Word>> defect_samples;
  ConstantsLedger ledger;
  std::vector<std::string> refusals;
  std::vector<std::string> downgrades;
};

PatternStage prepare_pattern(const Word& a, const CertifierData& data, const CertifierConfig& config);

struct SupEntry {
  Word element;
  int crossing_number = 0;
  int power = 0;        // k realizing the bound
  int h_power = 0;      // h(e^k)
  double bound = 0;     // (|h(e^k)| + D)/k
  int copies = 0;       // p: disjoint copies of sigma or sigma^{-1} on the realizing words of e^C1
  bool structural_holds = true;  // p^2 <= C1^2 n
};

struct SupEstimate {
  double bound = 0;     // max over the table of min_k (|h(e^k)| + D)/k
  double point = 0;     // max over the table of |h(e^K)|/K at the largest k
  Word argmax;
  std::size_t table_size = 0;
  std::size_t classes_evaluated = 0;
  std::vector<SupEntry> entries;  // one per table element
  bool structural_holds = true;
};

SupEstimate sup_over_table(const PatternStage& stage, const SnTable& table,
                           const CertifierData& data, const CertifierConfig& config);

struct UpperBound {
  std::optional<int> value;  // nullopt: not reached at the depth
  bool exact = false;        // value is the minimum over products of table elements
  std::vector<Word> factors;
};

// Shortest product of table elements equal to a. Products of up to four
// factors are searched exactly by meeting in the middle over pairs; beyond
// that, the best splitting of a geodesic word into table elements is used,
// which is an upper bound.
UpperBound wordlength_upper(const Word& a, const SnTable& table, const BallTable& ball,
                            int depth);

// m (hbar - err) / (sup + D). Throws std::domain_error when hbar - err <= 0.
double qm_lower_bound(int m, double hbar, double hbar_error, double sup, double defect);

struct MBound {
  int m = 0;
  double lower = 0;
  UpperBound upper;
};

struct BoundCertificate {
  Word target;
  int n = 0;
  int m_lo = 1, m_hi = 1;
  CertificateStatus status = CertificateStatus::kRefused;
  std::vector<std::string> reasons;
  std::string validity = "table-certified";
  std::string defect_caveat = "defect estimated by sampling";
  int table_radius = 0;
  int ball_radius = 0;
  PatternStage stage;
  SupEstimate sup;
  double slope = 0;
  std::vector<MBound> bounds;
  bool sandwich_holds = true;
};

BoundCertificate certify(const PatternStage& stage, int n, int m_lo, int m_hi,
                         const CertifierData& data, const CertifierConfig& config);
BoundCertificate certify(const Word& a, int n, int m_lo, int m_hi, const CertifierData& data,
                         const CertifierConfig& config);

// Rechecks a certificate from its own contents plus the ball: pattern
// = geodesic of b^N, the witnesses realize the claimed values, the factors
// multiply to a^m, and the arithmetic. Returns the failed checks.
std::vector<std::string> reverify(const BoundCertificate& cert, const BallTable& ball);

struct ScalingRow {
  int n = 0;
  int m = 0;
  double lower = 0;
  std::optional<int> upper;
  double slope = 0;
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  std::vector<std::string> footer;  // refused certificates and reasons
  std::vector<BoundCertificate> certificates;
  std::string csv() const;  // header n,m,lower,upper,slope
};

ScalingReport scaling_report(const Word& a, const std::vector<int>& n_list, int m_lo, int m_hi,
                             const CertifierData& data, const CertifierConfig& config);

}  // namespace surfgroup
