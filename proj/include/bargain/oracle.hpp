#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "bargain/belief.hpp"
#include "bargain/protocol.hpp"

namespace bargain {

struct PlannerConfig {
  int price_levels = 50;       // own-offer grid size over the public bounds
  int continuation_bins = 50;  // price bins when marginalizing counter-offers
  int quadrature_nodes = 9;    // odd; opening-marginal composite Simpson
  int horizon = 10;            // overwritten with the episode horizon
  double prune_threshold = 1e-9;
  // Number of exact observation-branching levels before continuations close
  // with per-type mean-path rollouts; negative runs the full recursion to
  // the horizon. The default is the production profile.
  int lookahead = 0;
  BeliefConfig belief;
};

// Augmented decision state as the planner sees it: a belief over the type
// grid plus the public offer history. The last counterpart offer, when one
// exists, is the pending offer.
struct PlannerState {
  std::vector<double> belief;
  std::vector<double> agent_offers;
  std::vector<double> counterpart_offers;
  int round = 1;

  bool pending() const { return !counterpart_offers.empty(); }
};

struct PlannerAction {
  Decision decision = Decision::Offer;
  std::optional<double> price;
  double value = 0.0;
};

// Finite-horizon backward induction over the discretized augmented state.
// Counter-offer responses are marginalized over interval-endpoint atoms plus
// midpoint-integrated interior price bins, crossed with the sentiment and
// posture cue alphabets. Branch probabilities and successor beliefs both
// derive from the same per-type joint weights, so the discretized game is a
// consistent finite-observation model and its value is convex in the belief.
class Planner {
 public:
  struct QEntry {
    double value = 0.0;
    PlannerAction action;
  };
  using QTable = std::map<std::vector<long long>, QEntry>;

  explicit Planner(const ScenarioSpec& spec, PlannerConfig cfg = {});
  // Replaces the default hypothesis grid; the prior is renormalized.
  Planner(const ScenarioSpec& spec, PlannerConfig cfg, TypeGrid grid);

  const TypeGrid& grid() const { return grid_; }
  const PlannerConfig& config() const { return cfg_; }
  const QTable& table() const { return table_; }

  // Prior belief, empty history, round 1.
  PlannerState initial_state() const;
  // Round-1 state after a counterpart opening: prior conditioned on the
  // opening price and cues.
  PlannerState after_opening(double price, const CuePair& cues) const;

  std::vector<double> price_grid() const;
  // Grid prices compatible with the monotone-concession rule and the
  // agent's own reservation, ordered role-favorable end first.
  std::vector<double> admissible_prices(const PlannerState& state) const;

  double q_accept(const PlannerState& state) const;
  double q_offer(const PlannerState& state, double price);
  double state_value(const PlannerState& state);
  PlannerAction optimal_action(const PlannerState& state);

 private:
  struct PriceOutcome {
    double price = 0.0;
    double mass = 0.0;
  };

  QEntry solve(const PlannerState& state, int depth);
  double offer_value(const PlannerState& state, double price, int depth);
  std::vector<PriceOutcome> counter_outcomes(
      const LatentType& type, const PlannerState& state,
      const HistoryFeatures& features) const;
  std::vector<PriceOutcome> discretize(
      double lo, double hi, const std::function<double(double)>& like) const;
  double frontier_value(const LatentType& type, const PlannerState& state,
                        double agent_price,
                        const HistoryFeatures& features) const;
  std::vector<long long> memo_key(const PlannerState& state, int depth) const;
  bool exact_level(int depth) const;
  void prune(std::vector<double>& belief) const;

  ScenarioSpec spec_;
  PlannerConfig cfg_;
  TypeGrid grid_;
  FamilyPreset preset_;
  Role counterpart_role_ = Role::Seller;
  QTable table_;
};

struct OracleResult {
  EpisodeTrace trace;
  double utility = 0.0;       // realized terminal utility of the oracle play
  double round1_value = 0.0;  // planner value at the first decision
};

// Plays the planner's optimal action against the realized counterpart under
// the episode's seeded streams, feeding the belief filter with the public
// transcript. The round-1 value estimate is recorded on the trace summary.
OracleResult solve_episode(const ScenarioSpec& spec, PlannerConfig cfg = {},
                           EpisodeOptions options = {});

}  // namespace bargain
