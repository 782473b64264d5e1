#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bargain/protocol.hpp"

namespace bargain {

// A statistic together with the denominator it was computed over. A zero
// denominator marks the value undefined; nothing is ever imputed.
struct Statistic {
  double value = 0.0;
  int n = 0;

  bool defined() const { return n > 0; }
};

// Pure per-episode scoring record; aggregation is a fold over these.
struct EpisodeScore {
  Regime regime = Regime::Overlap;
  Family family = Family::Candid;
  Role agent_role = Role::Buyer;
  Opener opener = Opener::Counterpart;

  bool feasible = false;
  double zopa = 0.0;
  double range = 0.0;
  double utility = 0.0;
  bool agreement = false;
  bool agreement_ir = false;
  double surplus_share = 0.0;  // utility / zopa on feasible episodes, else 0
  TerminationSource termination = TerminationSource::RoundLimit;
  bool agent_exit = false;
  ViolationSet violations;

  // Within-episode means over rounds with a valid belief report.
  std::optional<double> be_r;
  std::optional<double> be_kappa;
  std::optional<double> brier_eta;
  std::optional<double> stance_acc;
  int belief_rounds = 0;

  std::optional<double> oracle_utility;
};

EpisodeScore episode_metrics(const EpisodeTrace& trace,
                             const ScenarioSpec& spec,
                             std::optional<double> oracle_utility = {});

// Empty fields select everything; set fields restrict the stratum.
struct StratumFilter {
  std::optional<Regime> regime;
  std::optional<Family> family;
  std::optional<Role> agent_role;
  std::optional<Opener> opener;
};

struct MetricReport {
  int n = 0;

  // Feasible terminal performance.
  Statistic se_plus;    // over feasible episodes
  Statistic agr_plus;   // over feasible episodes
  Statistic cse_plus;   // over agreed feasible episodes

  // No-deal calibration.
  Statistic fagr_minus;        // over infeasible episodes
  Statistic safeterm_minus;    // complement of fagr_minus
  Statistic agent_exit_minus;  // over infeasible episodes

  Statistic mean_utility;  // over every scored episode

  // Oracle comparison over episodes carrying a reference utility.
  Statistic oracle_mean_utility;
  Statistic oracle_gap;  // reference mean minus agent mean, matched episodes
  Statistic pct_oracle;  // 100 * agent mean / reference mean

  // Opponent-modeling errors: within-episode round means averaged across
  // episodes that reported beliefs.
  Statistic be_r;
  Statistic be_kappa;
  Statistic brier_eta;
  Statistic be_type;
  Statistic stance_acc;

  // Violation rates over every scored episode; an episode counts once per
  // category.
  Statistic crit_viol_pct;
  Statistic bound_viol_pct;
  Statistic res_viol_pct;
  Statistic invalid_act_pct;
  Statistic mono_viol_pct;
  Statistic any_viol_pct;

  // Termination-source distribution over every scored episode, indexed by
  // TerminationSource order.
  std::array<int, 5> termination_counts{};
  std::array<double, 5> termination_shares{};

  std::string belief_averaging =
      "within-episode over rounds, then across episodes";
};

MetricReport aggregate(const std::vector<EpisodeScore>& records,
                       const StratumFilter& filter = {});

// Telescoping mean-utility gaps across the four intervention conditions.
struct GapDecomposition {
  double information = 0.0;  // posterior access minus baseline
  double uncertainty = 0.0;  // revealed type minus posterior access
  double control = 0.0;      // reference policy minus revealed type

  double total() const { return information + uncertainty + control; }
};

GapDecomposition gap_decomposition(double u_base, double u_post,
                                   double u_reveal, double u_oracle);

struct DifficultyScore {
  Regime regime = Regime::Overlap;
  Opener opener = Opener::Counterpart;
  double score = 0.0;  // environment difficulty in [0, 1]

  // Overlap components.
  double d_zopa = 0.0;
  double d_press = 0.0;
  double d_stance = 0.0;
  std::optional<double> d_deadline;  // present only when horizons vary

  // No-deal components.
  double d_gap = 0.0;
  double d_cue = 0.0;
  double d_surface = 0.0;

  // Realized-opening terms, filled when an opening price is supplied.
  std::optional<double> anchor;          // counterpart-opens harshness
  std::optional<double> anchored_score;  // env score blended with the anchor
  std::optional<double> a_open;          // agent-opens policy diagnostic
};

// Role-comparable environment difficulty for feasible episodes. The deadline
// term participates only when horizons vary across the suite (k_max > k_min);
// otherwise the remaining weights renormalize. A supplied opening price adds
// the counterpart anchor score (counterpart opens) or the opening
// aggressiveness diagnostic (agent opens).
DifficultyScore difficulty_overlap(const ScenarioSpec& spec,
                                   std::optional<double> opening_price = {},
                                   int k_min = 10, int k_max = 10);

// Infeasibility-detection difficulty for no-deal episodes.
DifficultyScore difficulty_nodeal(const ScenarioSpec& spec, Family family);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Percentile interval over B seeded resample means.
Interval bootstrap_ci(const std::vector<double>& values, int B, double level,
                      std::uint64_t seed = 0x2b5eedceull);

// Score interval for a binomial proportion.
Interval wilson_ci(int successes, int trials, double level);

// Stable-key JSON object and a flat CSV row (with matching header) for
// tabulation. Undefined statistics serialize as null / empty cells.
std::string report_json(const MetricReport& report);
std::string report_csv_header();
std::string report_csv_row(const std::string& label, const MetricReport& report);

}  // namespace bargain
