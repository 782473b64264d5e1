#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bargain/presets.hpp"
#include "bargain/rng.hpp"
#include "bargain/scenario.hpp"
#include "bargain/types.hpp"

namespace bargain {

// Range-normalized summaries of the agent's recent offer dynamics. All zero
// until the agent has made at least two offers.
struct HistoryFeatures {
  double concede_magnitude = 0.0;
  double concede_speed = 0.0;
  double rigidity = 0.0;
};

// `agent_offers` holds the offers made before the round being evaluated; the
// averaging window covers the last three consecutive offer pairs.
HistoryFeatures history_features(const std::vector<double>& agent_offers,
                                 Role agent_role, double range,
                                 double rigidity_threshold = 0.10);

// Range-normalized gain of the offer over the counterpart's reservation;
// nonnegative exactly when the offer is individually rational for it.
double favorability(double agent_offer, const LatentType& type,
                    Role counterpart_role, double range);

double accept_probability(double agent_offer, const LatentType& type,
                          Role counterpart_role, double range, int k, int K,
                          const HistoryFeatures& features,
                          const EconomicPreset& econ,
                          const AcceptParams& params = {});

double walkaway_probability(double agent_offer, const LatentType& type,
                            Role counterpart_role, double range, int k, int K,
                            const WalkParams& params = {});

int walk_enable_round(int K);

// Clipped concession rate of the counter-offer rule.
double concession_rate(const LatentType& type, const HistoryFeatures& features,
                       const EconomicPreset& econ);

// Deterministic mean of the next counter-offer before noise and projection.
double counter_mean(double prev_offer, double reservation, double rate);

// Individually rational monotone interval for the next counter-offer.
std::pair<double, double> monotone_interval(double prev_offer,
                                            double reservation,
                                            Role counterpart_role);

double counter_offer(double prev_offer, const LatentType& type,
                     Role counterpart_role, double range,
                     const HistoryFeatures& features,
                     const EconomicPreset& econ, Rng& rng);

// Opening-offer model pieces. The modulation factor shrinks the claimed slack
// for urgent or conciliatory counterparts and stretches it for aggressive
// ones; the slack is the distance from reservation to the role-favorable
// bound.
double opening_modulation(double urgency, Stance stance,
                          const OpeningParams& params = {});
double opening_slack(double reservation, Role counterpart_role,
                     const Bounds& bounds);
std::pair<double, double> opening_interval(double reservation,
                                           Role counterpart_role,
                                           const Bounds& bounds);
double opening_mean(const LatentType& type, double d0, Role counterpart_role,
                    const Bounds& bounds, const OpeningParams& params = {});
double opening_offer(const LatentType& type, double d0, Role counterpart_role,
                     const Bounds& bounds, Rng& rng,
                     const OpeningParams& params = {});

struct CounterpartAction {
  Decision decision = Decision::Offer;
  double price = 0.0;      // meaningful only for Offer
  bool exhausted = false;  // final-round residual: no counter-offer is emitted
};

struct KernelState {
  LatentType type;
  Role counterpart_role = Role::Seller;
  Bounds bounds;
  int horizon = 10;
  double d0 = 0.5;
  FamilyPreset preset;
  ModelParams params;
  int round = 1;  // current agent decision round
  std::vector<double> agent_offers;        // offers before the current round
  std::vector<double> counterpart_offers;  // all counterpart prices so far

  double range() const { return bounds.range(); }
};

KernelState kernel_state_for(const ScenarioSpec& spec,
                             const ModelParams& params = {});

// Samples the counterpart's committed economic action. With an agent offer
// pending: Accept, terminal walk-away (Reject), or a counter-offer; in the
// final round the residual branch is flagged exhausted and the protocol
// records the disagreement. With no agent offer pending the counterpart
// produces its opening offer.
CounterpartAction respond(const KernelState& state,
                          const std::optional<double>& agent_offer, Rng& rng);

}  // namespace bargain
