#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "bargain/cues.hpp"
#include "bargain/kernel.hpp"
#include "bargain/presets.hpp"
#include "bargain/protocol.hpp"
#include "bargain/scenario.hpp"
#include "bargain/types.hpp"

namespace bargain {

struct BeliefConfig {
  int reservation_levels = 20;
  std::vector<double> urgency_levels{0.1, 0.3, 0.5, 0.7, 0.9};
  int quadrature_nodes = 9;  // odd; composite Simpson over the harshness range
  bool observe_cues = true;  // false: condition on actions and prices only
  ModelParams params;
};

// Discrete hypothesis grid over the counterpart's hidden type. Reservation
// levels span the public bounds inclusively; the stance prior follows the
// family preset.
struct TypeGrid {
  std::vector<LatentType> types;
  std::vector<double> prior;

  std::size_t size() const { return types.size(); }
};

TypeGrid build_type_grid(const ScenarioSpec& spec,
                         const BeliefConfig& cfg = {});

// A committed counterpart move as the agent observes it.
struct CounterpartObservation {
  Decision decision = Decision::Offer;
  std::optional<double> price;  // set when decision == Offer
  CuePair cues;
};

// Density-or-mass of an observed counter-offer under one type hypothesis:
// projected Gaussian on the monotone feasible interval, with point masses at
// both endpoints and zero outside. Prices match endpoints within an absolute
// tolerance of 1e-9.
double price_likelihood(double observed, double prev_offer,
                        const LatentType& type, Role counterpart_role,
                        double range, const HistoryFeatures& features,
                        const EconomicPreset& econ);

// Opening-offer price likelihood with the hidden per-episode harshness
// averaged out by composite Simpson quadrature.
double opening_price_likelihood(double observed, const LatentType& type,
                                Role counterpart_role, const Bounds& bounds,
                                int quadrature_nodes = 9,
                                const OpeningParams& params = {});

// Likelihood of a full counterpart response (action branch, price when
// offering, cue emissions) under one type hypothesis. `round` is the agent
// decision round the response answers; `prev_counterpart_offer` is absent
// when this response would carry the counterpart's first price, which then
// routes through the opening-offer model.
double observation_likelihood(const CounterpartObservation& obs,
                              double agent_price, const LatentType& type,
                              Role counterpart_role, const Bounds& bounds,
                              int round, int horizon,
                              const HistoryFeatures& features,
                              const std::optional<double>& prev_counterpart_offer,
                              const FamilyPreset& preset,
                              const BeliefConfig& cfg = {});

// Likelihood of a counterpart opening (price plus cues) emitted before any
// agent action.
double opening_observation_likelihood(double price, const CuePair& cues,
                                      const LatentType& type,
                                      Role counterpart_role,
                                      const Bounds& bounds, int horizon,
                                      const FamilyPreset& preset,
                                      const BeliefConfig& cfg = {});

// Exact discrete Bayes filter over the type grid. Feed it the public
// transcript in protocol order: an opening observation first when the
// counterpart opens, then each own offer followed by the counterpart's
// committed response. Observation methods return the per-type likelihood
// vector they applied.
class BeliefFilter {
 public:
  explicit BeliefFilter(const ScenarioSpec& spec, BeliefConfig cfg = {});

  std::vector<double> observe_opening(double price, const CuePair& cues);
  void observe_agent_offer(double price);
  std::vector<double> observe_response(const CounterpartObservation& obs);

  // Likelihoods for the pending context without advancing the filter.
  std::vector<double> opening_likelihood(double price,
                                         const CuePair& cues) const;
  std::vector<double> response_likelihood(
      const CounterpartObservation& obs) const;

  const TypeGrid& grid() const { return grid_; }
  const std::vector<double>& posterior() const { return belief_; }
  const ScenarioSpec& spec() const { return spec_; }
  const BeliefConfig& config() const { return cfg_; }

  // Number of own offers recorded so far; the next response consumes round
  // agent_round().
  int agent_round() const { return static_cast<int>(agent_offers_.size()); }

  double reservation_mean() const;
  double urgency_mean() const;
  std::array<double, 3> stance_marginal() const;
  const LatentType& map_type() const;
  double normalization_error() const;

 private:
  void apply(const std::vector<double>& likelihood);

  ScenarioSpec spec_;
  BeliefConfig cfg_;
  TypeGrid grid_;
  std::vector<double> belief_;
  FamilyPreset preset_;
  Role counterpart_role_;
  std::vector<double> agent_offers_;
  std::vector<double> counterpart_offers_;
  HistoryFeatures pending_features_;
  int responses_seen_ = 0;
};

// Runs the filter over a recorded episode and returns it in its final state.
BeliefFilter replay_trace(const EpisodeTrace& trace, BeliefConfig cfg = {});

}  // namespace bargain
