#include "bargain/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "bargain/numeric.hpp"

namespace bargain {

namespace {

constexpr double kAtomTol = 1e-9;
// Interior sub-bins narrower than this carry negligible mass and their
// midpoints would collide with the endpoint-atom tolerance.
constexpr double kMinBinWidth = 1e-7;

void check_config(const PlannerConfig& cfg) {
  if (cfg.price_levels < 3) {
    throw std::invalid_argument("planner: price grid needs at least 3 levels");
  }
  if (cfg.continuation_bins < 1) {
    throw std::invalid_argument("planner: continuation bins must be positive");
  }
  if (cfg.quadrature_nodes < 3 || cfg.quadrature_nodes % 2 == 0) {
    throw std::invalid_argument("planner: quadrature nodes must be odd and >= 3");
  }
  if (cfg.horizon < 1) {
    throw std::invalid_argument("planner: horizon must be positive");
  }
  if (cfg.prune_threshold < 0.0 || cfg.prune_threshold > 1e-6) {
    throw std::invalid_argument("planner: prune threshold outside [0, 1e-6]");
  }
}

long long quantize(double x, double resolution) {
  return static_cast<long long>(std::llround(x / resolution));
}

// Memo keys carry exact bit patterns: a cache hit requires a bitwise
// identical state, so memoization never changes a computed value.
long long bits(double x) { return std::bit_cast<std::int64_t>(x); }

}  // namespace

Planner::Planner(const ScenarioSpec& spec, PlannerConfig cfg)
    : Planner(spec, std::move(cfg), TypeGrid{}) {}

Planner::Planner(const ScenarioSpec& spec, PlannerConfig cfg, TypeGrid grid)
    : spec_(spec),
      cfg_(std::move(cfg)),
      preset_(preset_for(spec.family)),
      counterpart_role_(spec.counterpart_role()) {
  cfg_.horizon = spec_.horizon;
  cfg_.belief.quadrature_nodes = cfg_.quadrature_nodes;
  check_config(cfg_);
  if (grid.types.empty()) {
    grid_ = build_type_grid(spec_, cfg_.belief);
  } else {
    if (grid.types.size() != grid.prior.size()) {
      throw std::invalid_argument("planner: grid and prior sizes differ");
    }
    double total = 0.0;
    for (double w : grid.prior) total += w;
    if (!(total > 0.0)) {
      throw std::invalid_argument("planner: grid prior has no mass");
    }
    for (double& w : grid.prior) w /= total;
    grid_ = std::move(grid);
  }
}

PlannerState Planner::initial_state() const {
  PlannerState s;
  s.belief = grid_.prior;
  s.round = 1;
  return s;
}

PlannerState Planner::after_opening(double price, const CuePair& cues) const {
  PlannerState s;
  s.belief.resize(grid_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    double like = opening_observation_likelihood(
        price, cues, grid_.types[i], counterpart_role_, spec_.bounds,
        cfg_.horizon, preset_, cfg_.belief);
    s.belief[i] = grid_.prior[i] * like;
    total += s.belief[i];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::runtime_error("planner: opening has zero probability under the grid");
  }
  for (double& b : s.belief) b /= total;
  prune(s.belief);
  s.counterpart_offers.push_back(price);
  s.round = 1;
  return s;
}

std::vector<double> Planner::price_grid() const {
  std::vector<double> grid(cfg_.price_levels);
  double step = spec_.bounds.range() / (cfg_.price_levels - 1);
  for (int i = 0; i < cfg_.price_levels; ++i) {
    grid[i] = spec_.bounds.p_min + i * step;
  }
  grid.back() = spec_.bounds.p_max;
  return grid;
}

std::vector<double> Planner::admissible_prices(const PlannerState& state) const {
  std::vector<double> out;
  std::optional<double> last;
  if (!state.agent_offers.empty()) last = state.agent_offers.back();
  for (double p : price_grid()) {
    if (agent_utility(spec_.agent_role, spec_.r_agent, p) < 0.0) continue;
    if (last.has_value()) {
      double step = spec_.agent_role == Role::Buyer ? p - *last : *last - p;
      if (step < -kAtomTol) continue;
    }
    out.push_back(p);
  }
  // Role-favorable end first: high prices for a seller, low for a buyer.
  if (spec_.agent_role == Role::Seller) {
    std::sort(out.begin(), out.end(), std::greater<double>());
  } else {
    std::sort(out.begin(), out.end());
  }
  return out;
}

double Planner::q_accept(const PlannerState& state) const {
  if (!state.pending()) {
    throw std::logic_error("q_accept: no counterpart offer is pending");
  }
  return agent_utility(spec_.agent_role, spec_.r_agent,
                       state.counterpart_offers.back());
}

bool Planner::exact_level(int depth) const {
  return cfg_.lookahead < 0 || depth < cfg_.lookahead;
}

void Planner::prune(std::vector<double>& belief) const {
  if (cfg_.prune_threshold <= 0.0) return;
  double kept = 0.0;
  for (double& b : belief) {
    if (b < cfg_.prune_threshold) b = 0.0;
    kept += b;
  }
  if (kept > 0.0) {
    for (double& b : belief) b /= kept;
  }
}

std::vector<long long> Planner::memo_key(const PlannerState& state,
                                         int depth) const {
  std::vector<long long> key;
  key.reserve(state.belief.size() + 10);
  key.push_back(cfg_.lookahead < 0 ? -1
                                   : std::max(0, cfg_.lookahead - depth));
  key.push_back(state.round);
  std::size_t own = std::min<std::size_t>(state.agent_offers.size(), 4);
  key.push_back(static_cast<long long>(own));
  for (std::size_t i = state.agent_offers.size() - own;
       i < state.agent_offers.size(); ++i) {
    key.push_back(bits(state.agent_offers[i]));
  }
  std::size_t cp = std::min<std::size_t>(state.counterpart_offers.size(), 2);
  key.push_back(static_cast<long long>(cp));
  for (std::size_t i = state.counterpart_offers.size() - cp;
       i < state.counterpart_offers.size(); ++i) {
    key.push_back(bits(state.counterpart_offers[i]));
  }
  for (double b : state.belief) key.push_back(bits(b));
  return key;
}

Planner::QEntry Planner::solve(const PlannerState& state, int depth) {
  if (state.round > cfg_.horizon) {
    QEntry e;
    e.value = 0.0;
    e.action = PlannerAction{Decision::Reject, std::nullopt, 0.0};
    return e;
  }
  auto key = memo_key(state, depth);
  auto it = table_.find(key);
  if (it != table_.end()) return it->second;

  QEntry best;
  bool have = false;
  auto consider = [&](Decision d, std::optional<double> price, double value) {
    if (!have || value > best.value) {
      best.value = value;
      best.action = PlannerAction{d, price, value};
      have = true;
    }
  };
  // Precedence among exact ties follows insertion order: Accept, then
  // offers from the role-favorable end, then Reject.
  if (state.pending()) {
    consider(Decision::Accept, state.counterpart_offers.back(), q_accept(state));
  }
  for (double p : admissible_prices(state)) {
    consider(Decision::Offer, p, offer_value(state, p, depth));
  }
  if (state.pending()) {
    consider(Decision::Reject, std::nullopt, 0.0);
  }
  if (!have) {
    throw std::logic_error("planner: state admits no action");
  }
  table_.emplace(std::move(key), best);
  return best;
}

double Planner::offer_value(const PlannerState& state, double price,
                            int depth) {
  int k = state.round;
  int K = cfg_.horizon;
  double range = spec_.bounds.range();
  HistoryFeatures features =
      history_features(state.agent_offers, spec_.agent_role, range,
                       cfg_.belief.params.rigidity_threshold);
  double utility = agent_utility(spec_.agent_role, spec_.r_agent, price);

  std::vector<double> cont(grid_.size(), 0.0);
  double value = 0.0;
  bool any_cont = false;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    double b = state.belief[i];
    if (b <= 0.0) continue;
    const LatentType& type = grid_.types[i];
    double a = accept_probability(price, type, counterpart_role_, range, k, K,
                                  features, preset_.econ,
                                  cfg_.belief.params.accept);
    double w = walkaway_probability(price, type, counterpart_role_, range, k,
                                    K, cfg_.belief.params.walk);
    value += b * a * utility;
    cont[i] = b * (1.0 - a) * (1.0 - w);
    if (cont[i] > 0.0) any_cont = true;
  }
  if (k >= K || !any_cont) return value;

  if (!exact_level(depth)) {
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (cont[i] <= 0.0) continue;
      value += cont[i] * frontier_value(grid_.types[i], state, price, features);
    }
    return value;
  }

  double deadline = deadline_clock(k, K);
  // Joint marginalization over (type, price outcome, sentiment, posture);
  // outcomes shared across types accumulate per-type weight under one key.
  // The same weights supply the branch probability and, normalized, the
  // successor belief, keeping the discretized observation model consistent.
  struct Obs {
    double price = 0.0;
    std::vector<double> joint;
  };
  std::map<std::tuple<long long, int, int>, Obs> outcomes;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (cont[i] <= 0.0) continue;
    const LatentType& type = grid_.types[i];
    auto prices = counter_outcomes(type, state, features);
    auto sent = sentiment_probs(type.stance, preset_.cue,
                                cfg_.belief.params.cue);
    for (const auto& po : prices) {
      if (po.mass <= 0.0) continue;
      std::vector<double> trail = state.counterpart_offers;
      trail.push_back(po.price);
      double concession = concession_cue(trail, type.reservation,
                                         cfg_.belief.params.concession_eps);
      auto strat = strategic_probs(Decision::Offer, type.stance, concession,
                                   deadline, preset_.cue,
                                   cfg_.belief.params.cue);
      for (int s = 0; s < 3; ++s) {
        if (sent[s] <= 0.0) continue;
        for (int c = 0; c < 3; ++c) {
          if (strat[c] <= 0.0) continue;
          double w = cont[i] * po.mass * sent[s] * strat[c];
          if (w <= 0.0) continue;
          auto key = std::make_tuple(quantize(po.price, 1e-9), s, c);
          auto& slot = outcomes[key];
          if (slot.joint.empty()) {
            slot.price = po.price;
            slot.joint.assign(grid_.size(), 0.0);
          }
          slot.joint[i] += w;
        }
      }
    }
  }
  for (const auto& [key, obs] : outcomes) {
    double weight = 0.0;
    for (double w : obs.joint) weight += w;
    if (!(weight > 0.0)) continue;
    PlannerState child;
    child.belief.resize(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      child.belief[i] = obs.joint[i] / weight;
    }
    prune(child.belief);
    child.agent_offers = state.agent_offers;
    child.agent_offers.push_back(price);
    child.counterpart_offers = state.counterpart_offers;
    child.counterpart_offers.push_back(obs.price);
    child.round = state.round + 1;
    value += weight * solve(child, depth + 1).value;
  }
  return value;
}

std::vector<Planner::PriceOutcome> Planner::counter_outcomes(
    const LatentType& type, const PlannerState& state,
    const HistoryFeatures& features) const {
  double range = spec_.bounds.range();
  if (state.counterpart_offers.empty()) {
    auto interval =
        opening_interval(type.reservation, counterpart_role_, spec_.bounds);
    auto like = [&](double x) {
      return opening_price_likelihood(x, type, counterpart_role_, spec_.bounds,
                                      cfg_.quadrature_nodes,
                                      cfg_.belief.params.opening);
    };
    return discretize(interval.first, interval.second, like);
  }
  double prev = state.counterpart_offers.back();
  auto interval = monotone_interval(prev, type.reservation, counterpart_role_);
  auto like = [&](double x) {
    return price_likelihood(x, prev, type, counterpart_role_, range, features,
                            preset_.econ);
  };
  return discretize(interval.first, interval.second, like);
}

std::vector<Planner::PriceOutcome> Planner::discretize(
    double lo, double hi, const std::function<double(double)>& like) const {
  std::vector<PriceOutcome> out;
  if (hi - lo <= kAtomTol) {
    out.push_back({lo, 1.0});
    return out;
  }
  double atom_lo = like(lo);
  double atom_hi = like(hi);
  double remainder = std::max(0.0, 1.0 - atom_lo - atom_hi);

  std::vector<PriceOutcome> interior;
  double raw = 0.0;
  double step = spec_.bounds.range() / cfg_.continuation_bins;
  for (int j = 0; j < cfg_.continuation_bins; ++j) {
    double a = std::max(spec_.bounds.p_min + j * step, lo);
    double b = std::min(spec_.bounds.p_min + (j + 1) * step, hi);
    double width = b - a;
    if (width < kMinBinWidth) continue;
    double mid = 0.5 * (a + b);
    double mass = like(mid) * width;
    if (mass <= 0.0) continue;
    interior.push_back({mid, mass});
    raw += mass;
  }
  if (raw > 0.0) {
    double scale = remainder / raw;
    for (auto& po : interior) po.mass *= scale;
  } else {
    atom_hi += remainder;
  }
  if (atom_lo > 0.0) out.push_back({lo, atom_lo});
  out.insert(out.end(), interior.begin(), interior.end());
  if (atom_hi > 0.0) out.push_back({hi, atom_hi});
  return out;
}

double Planner::frontier_value(const LatentType& type,
                               const PlannerState& state, double agent_price,
                               const HistoryFeatures& features) const {
  int k = state.round;
  int K = cfg_.horizon;
  double range = spec_.bounds.range();
  double sign = role_sign(spec_.agent_role);

  // Deterministic counter to the current offer becomes the pending price.
  double pending;
  if (state.counterpart_offers.empty()) {
    auto interval =
        opening_interval(type.reservation, counterpart_role_, spec_.bounds);
    double mean = opening_mean(type, 0.5, counterpart_role_, spec_.bounds,
                               cfg_.belief.params.opening);
    pending = clip(mean, interval.first, interval.second);
  } else {
    double prev = state.counterpart_offers.back();
    double rate = concession_rate(type, features, preset_.econ);
    auto interval = monotone_interval(prev, type.reservation, counterpart_role_);
    pending = clip(counter_mean(prev, type.reservation, rate), interval.first,
                   interval.second);
  }
  if (k >= K) return 0.0;

  // Own-price glide from the just-made offer toward a near-reservation
  // target, holding when already past it.
  double target = spec_.r_agent + sign * 0.01 * range;
  if ((spec_.agent_role == Role::Seller && target > agent_price) ||
      (spec_.agent_role == Role::Buyer && target < agent_price)) {
    target = agent_price;
  }
  int steps = K - k;
  std::vector<double> own = state.agent_offers;
  own.push_back(agent_price);
  std::vector<double> accept_p(steps), walk_p(steps), ask(steps),
      pend(steps);
  double cp_prev = pending;
  for (int j = k + 1; j <= K; ++j) {
    int idx = j - k - 1;
    double x = agent_price + (target - agent_price) *
                                 (static_cast<double>(j - k) / steps);
    HistoryFeatures f =
        history_features(own, spec_.agent_role, range,
                         cfg_.belief.params.rigidity_threshold);
    accept_p[idx] = accept_probability(x, type, counterpart_role_, range, j, K,
                                       f, preset_.econ,
                                       cfg_.belief.params.accept);
    walk_p[idx] = walkaway_probability(x, type, counterpart_role_, range, j, K,
                                       cfg_.belief.params.walk);
    ask[idx] = x;
    pend[idx] = cp_prev;
    double rate = concession_rate(type, f, preset_.econ);
    auto interval = monotone_interval(cp_prev, type.reservation,
                                      counterpart_role_);
    cp_prev = clip(counter_mean(cp_prev, type.reservation, rate),
                   interval.first, interval.second);
    own.push_back(x);
  }
  double v = 0.0;
  for (int idx = steps - 1; idx >= 0; --idx) {
    double offer_v =
        accept_p[idx] * agent_utility(spec_.agent_role, spec_.r_agent,
                                      ask[idx]) +
        (1.0 - accept_p[idx]) * (1.0 - walk_p[idx]) * v;
    double accept_v =
        agent_utility(spec_.agent_role, spec_.r_agent, pend[idx]);
    v = std::max({accept_v, offer_v, 0.0});
  }
  return v;
}

double Planner::q_offer(const PlannerState& state, double price) {
  return offer_value(state, price, 0);
}

double Planner::state_value(const PlannerState& state) {
  return solve(state, 0).value;
}

PlannerAction Planner::optimal_action(const PlannerState& state) {
  return solve(state, 0).action;
}

OracleResult solve_episode(const ScenarioSpec& spec, PlannerConfig cfg,
                           EpisodeOptions options) {
  Planner planner(spec, cfg);
  options.params = planner.config().belief.params;
  Episode ep(spec, std::move(options));
  BeliefFilter filter(spec, planner.config().belief);
  if (spec.opener == Opener::Counterpart) {
    const auto& rec = ep.trace().records.front();
    filter.observe_opening(*rec.price, *rec.cues);
  }
  OracleResult res;
  bool first = true;
  while (!ep.terminal()) {
    PlannerState st;
    st.belief = filter.posterior();
    st.agent_offers = ep.kernel_state().agent_offers;
    st.counterpart_offers = ep.kernel_state().counterpart_offers;
    st.round = ep.round();
    PlannerAction act = planner.optimal_action(st);
    if (first) {
      res.round1_value = act.value;
      first = false;
    }
    AgentAction aa;
    aa.decision = act.decision;
    aa.price = act.price;
    StepResult sr = ep.step(aa);
    if (act.decision == Decision::Offer) {
      filter.observe_agent_offer(*act.price);
      if (!sr.terminal && sr.counter_price.has_value()) {
        const auto& rec = ep.trace().records.back();
        CounterpartObservation obs;
        obs.decision = Decision::Offer;
        obs.price = rec.price;
        obs.cues = *rec.cues;
        filter.observe_response(obs);
      }
    }
  }
  EpisodeTrace trace = ep.take_trace();
  trace.planner_value = res.round1_value;
  res.utility = trace.utility;
  res.trace = std::move(trace);
  return res;
}

}  // namespace bargain
