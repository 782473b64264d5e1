#include "bargain/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bargain/numeric.hpp"

namespace bargain {

HistoryFeatures history_features(const std::vector<double>& agent_offers,
                                 Role agent_role, double range,
                                 double rigidity_threshold) {
  if (range <= 0.0) throw std::invalid_argument("price range must be positive");
  HistoryFeatures f;
  const int n = static_cast<int>(agent_offers.size());
  if (n < 2) return f;
  double s = agent_role == Role::Buyer ? 1.0 : -1.0;

  int first_pair = std::max(1, n - 3);  // pair j covers offers (j-1, j)
  int pairs = n - first_pair;
  double mag = 0.0, speed = 0.0;
  for (int j = first_pair; j < n; ++j) {
    double step = s * (agent_offers[j] - agent_offers[j - 1]) / range;
    speed += step;
    mag += std::max(0.0, step);
  }
  f.concede_magnitude = mag / pairs;
  f.concede_speed = speed / pairs;

  double last = s * (agent_offers[n - 1] - agent_offers[n - 2]) / range;
  f.rigidity = std::max(0.0, last) < rigidity_threshold ? 1.0 : 0.0;
  return f;
}

double favorability(double agent_offer, const LatentType& type,
                    Role counterpart_role, double range) {
  if (range <= 0.0) throw std::invalid_argument("price range must be positive");
  double gain = counterpart_role == Role::Seller
                    ? agent_offer - type.reservation
                    : type.reservation - agent_offer;
  return gain / range;
}

double accept_probability(double agent_offer, const LatentType& type,
                          Role counterpart_role, double range, int k, int K,
                          const HistoryFeatures& features,
                          const EconomicPreset& econ,
                          const AcceptParams& params) {
  double fav = favorability(agent_offer, type, counterpart_role, range);
  if (fav < 0.0) return 0.0;
  double remaining = 1.0 - std::sqrt(static_cast<double>(k) / K);
  double score = params.favorability * fav + params.urgency * type.urgency -
                 params.deadline * remaining +
                 econ.rho.at(type.stance) * features.concede_speed +
                 econ.xi.at(type.stance) * features.rigidity;
  return sigmoid(score);
}

int walk_enable_round(int K) {
  return static_cast<int>(std::ceil(K / 2.0));
}

double walkaway_probability(double agent_offer, const LatentType& type,
                            Role counterpart_role, double range, int k, int K,
                            const WalkParams& params) {
  int k_walk = walk_enable_round(K);
  if (k < k_walk) return 0.0;
  double fav = favorability(agent_offer, type, counterpart_role, range);
  if (fav >= 0.0) return 0.0;
  double clock = K > k_walk
                     ? clip(static_cast<double>(k - k_walk) / (K - k_walk), 0.0, 1.0)
                     : 1.0;
  double score = params.intercept + params.shortfall * (-fav) + params.clock * clock;
  return sigmoid(score);
}

double concession_rate(const LatentType& type, const HistoryFeatures& features,
                       const EconomicPreset& econ) {
  double raw = econ.lambda0 + econ.lambda1 * type.urgency -
               econ.lambda2.at(type.stance) * features.concede_magnitude -
               econ.lambda3 * (type.stance == Stance::Aggressive ? 1.0 : 0.0) +
               econ.lambda4 * (type.stance == Stance::Conciliatory ? 1.0 : 0.0);
  return clip(raw, 0.0, 1.0);
}

double counter_mean(double prev_offer, double reservation, double rate) {
  return prev_offer - rate * (prev_offer - reservation);
}

std::pair<double, double> monotone_interval(double prev_offer,
                                            double reservation,
                                            Role counterpart_role) {
  if (counterpart_role == Role::Seller) {
    return {reservation, std::max(reservation, prev_offer)};
  }
  return {std::min(reservation, prev_offer), reservation};
}

double counter_offer(double prev_offer, const LatentType& type,
                     Role counterpart_role, double range,
                     const HistoryFeatures& features,
                     const EconomicPreset& econ, Rng& rng) {
  double rate = concession_rate(type, features, econ);
  double mean = counter_mean(prev_offer, type.reservation, rate);
  double candidate = mean + rng.normal(0.0, econ.price_noise * range);
  auto [lo, hi] = monotone_interval(prev_offer, type.reservation, counterpart_role);
  return clip(candidate, lo, hi);
}

double opening_modulation(double urgency, Stance stance,
                          const OpeningParams& params) {
  double raw = 1.0 - params.urgency_discount * urgency +
               params.aggressive_claim * (stance == Stance::Aggressive ? 1.0 : 0.0) -
               params.conciliatory_soften * (stance == Stance::Conciliatory ? 1.0 : 0.0);
  return clip(raw, params.mod_min, params.mod_max);
}

double opening_slack(double reservation, Role counterpart_role,
                     const Bounds& bounds) {
  return counterpart_role == Role::Seller ? bounds.p_max - reservation
                                          : reservation - bounds.p_min;
}

std::pair<double, double> opening_interval(double reservation,
                                           Role counterpart_role,
                                           const Bounds& bounds) {
  if (counterpart_role == Role::Seller) return {reservation, bounds.p_max};
  return {bounds.p_min, reservation};
}

double opening_mean(const LatentType& type, double d0, Role counterpart_role,
                    const Bounds& bounds, const OpeningParams& params) {
  double s = role_sign(counterpart_role);
  double phi = opening_modulation(type.urgency, type.stance, params);
  double slack = opening_slack(type.reservation, counterpart_role, bounds);
  return type.reservation + s * d0 * phi * slack;
}

double opening_offer(const LatentType& type, double d0, Role counterpart_role,
                     const Bounds& bounds, Rng& rng,
                     const OpeningParams& params) {
  double mean = opening_mean(type, d0, counterpart_role, bounds, params);
  double candidate = mean + rng.normal(0.0, params.noise * bounds.range());
  auto [lo, hi] = opening_interval(type.reservation, counterpart_role, bounds);
  return clip(candidate, lo, hi);
}

KernelState kernel_state_for(const ScenarioSpec& spec,
                             const ModelParams& params) {
  KernelState st;
  st.type = spec.counterpart_type();
  st.counterpart_role = spec.counterpart_role();
  st.bounds = spec.bounds;
  st.horizon = spec.horizon;
  st.d0 = spec.d0;
  st.preset = preset_for(spec.family);
  st.params = params;
  return st;
}

CounterpartAction respond(const KernelState& state,
                          const std::optional<double>& agent_offer, Rng& rng) {
  CounterpartAction act;
  if (!agent_offer.has_value()) {
    act.decision = Decision::Offer;
    act.price = opening_offer(state.type, state.d0, state.counterpart_role,
                              state.bounds, rng, state.params.opening);
    return act;
  }

  HistoryFeatures feat =
      history_features(state.agent_offers, other_role(state.counterpart_role),
                       state.range(), state.params.rigidity_threshold);
  double a = accept_probability(*agent_offer, state.type, state.counterpart_role,
                                state.range(), state.round, state.horizon, feat,
                                state.preset.econ, state.params.accept);
  if (rng.uniform() < a) {
    act.decision = Decision::Accept;
    return act;
  }
  double w = walkaway_probability(*agent_offer, state.type,
                                  state.counterpart_role, state.range(),
                                  state.round, state.horizon, state.params.walk);
  if (rng.uniform() < w) {
    act.decision = Decision::Reject;
    return act;
  }
  if (state.round >= state.horizon) {
    act.exhausted = true;
    return act;
  }
  act.decision = Decision::Offer;
  if (state.counterpart_offers.empty()) {
    act.price = opening_offer(state.type, state.d0, state.counterpart_role,
                              state.bounds, rng, state.params.opening);
  } else {
    act.price = counter_offer(state.counterpart_offers.back(), state.type,
                              state.counterpart_role, state.range(), feat,
                              state.preset.econ, rng);
  }
  return act;
}

}  // namespace bargain
