#include "bargain/belief.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "bargain/numeric.hpp"

namespace bargain {

namespace {

constexpr double kPriceTol = 1e-9;

enum class Branch { BelowSupport, AtomLow, Interior, AtomHigh, AboveSupport };

Branch classify(double observed, double lo, double hi) {
  if (observed < lo - kPriceTol) return Branch::BelowSupport;
  if (observed <= lo + kPriceTol) return Branch::AtomLow;
  if (observed >= hi + kPriceTol) return Branch::AboveSupport;
  if (observed >= hi - kPriceTol) return Branch::AtomHigh;
  return Branch::Interior;
}

double realized_concession(double observed,
                           const std::optional<double>& prev_offer,
                           double reservation, double eps) {
  if (!prev_offer.has_value()) return 0.0;
  double denom = std::abs(*prev_offer - reservation) + eps;
  return std::min(1.0, std::abs(observed - *prev_offer) / denom);
}

void check_config(const BeliefConfig& cfg) {
  if (cfg.reservation_levels < 2) {
    throw std::invalid_argument("belief grid needs at least two reservation levels");
  }
  if (cfg.urgency_levels.empty()) {
    throw std::invalid_argument("belief grid needs at least one urgency level");
  }
  if (cfg.quadrature_nodes < 3 || cfg.quadrature_nodes % 2 == 0) {
    throw std::invalid_argument("quadrature node count must be odd and at least 3");
  }
}

}  // namespace

TypeGrid build_type_grid(const ScenarioSpec& spec, const BeliefConfig& cfg) {
  check_config(cfg);
  const auto& preset = preset_for(spec.family);
  const int nr = cfg.reservation_levels;
  const double step = spec.bounds.range() / static_cast<double>(nr - 1);

  TypeGrid grid;
  grid.types.reserve(static_cast<std::size_t>(nr) * cfg.urgency_levels.size() * 3);
  grid.prior.reserve(grid.types.capacity());
  double total = 0.0;
  for (int ir = 0; ir < nr; ++ir) {
    const double r = spec.bounds.p_min + step * ir;
    for (double kappa : cfg.urgency_levels) {
      for (Stance s : all_stances()) {
        grid.types.push_back(LatentType{r, kappa, s});
        double w = preset.econ.stance_prior_at(s) /
                   (static_cast<double>(nr) * cfg.urgency_levels.size());
        grid.prior.push_back(w);
        total += w;
      }
    }
  }
  for (double& w : grid.prior) w /= total;
  return grid;
}

double price_likelihood(double observed, double prev_offer,
                        const LatentType& type, Role counterpart_role,
                        double range, const HistoryFeatures& features,
                        const EconomicPreset& econ) {
  auto [lo, hi] = monotone_interval(prev_offer, type.reservation, counterpart_role);
  if (hi - lo <= kPriceTol) {
    return std::abs(observed - lo) <= kPriceTol ? 1.0 : 0.0;
  }
  const double sigma = econ.price_noise * range;
  const double rate = concession_rate(type, features, econ);
  const double mean = counter_mean(prev_offer, type.reservation, rate);
  switch (classify(observed, lo, hi)) {
    case Branch::BelowSupport:
    case Branch::AboveSupport:
      return 0.0;
    case Branch::AtomLow:
      return norm_cdf((lo - mean) / sigma);
    case Branch::AtomHigh:
      return 1.0 - norm_cdf((hi - mean) / sigma);
    case Branch::Interior:
      return norm_pdf((observed - mean) / sigma) / sigma;
  }
  return 0.0;
}

double opening_price_likelihood(double observed, const LatentType& type,
                                Role counterpart_role, const Bounds& bounds,
                                int quadrature_nodes,
                                const OpeningParams& params) {
  auto [lo, hi] = opening_interval(type.reservation, counterpart_role, bounds);
  if (hi - lo <= kPriceTol) {
    return std::abs(observed - lo) <= kPriceTol ? 1.0 : 0.0;
  }
  const Branch branch = classify(observed, lo, hi);
  if (branch == Branch::BelowSupport || branch == Branch::AboveSupport) {
    return 0.0;
  }
  const double sigma = params.noise * bounds.range();
  auto integrand = [&](double d) {
    double mean = opening_mean(type, d, counterpart_role, bounds, params);
    switch (branch) {
      case Branch::AtomLow:
        return norm_cdf((lo - mean) / sigma);
      case Branch::AtomHigh:
        return 1.0 - norm_cdf((hi - mean) / sigma);
      default:
        return norm_pdf((observed - mean) / sigma) / sigma;
    }
  };
  const double width = params.harshness_max - params.harshness_min;
  return simpson(integrand, params.harshness_min, params.harshness_max,
                 quadrature_nodes) /
         width;
}

double observation_likelihood(const CounterpartObservation& obs,
                              double agent_price, const LatentType& type,
                              Role counterpart_role, const Bounds& bounds,
                              int round, int horizon,
                              const HistoryFeatures& features,
                              const std::optional<double>& prev_counterpart_offer,
                              const FamilyPreset& preset,
                              const BeliefConfig& cfg) {
  const double range = bounds.range();
  const double a =
      accept_probability(agent_price, type, counterpart_role, range, round,
                         horizon, features, preset.econ, cfg.params.accept);
  const double w =
      walkaway_probability(agent_price, type, counterpart_role, range, round,
                           horizon, cfg.params.walk);

  double like = 0.0;
  double concession = 0.0;
  switch (obs.decision) {
    case Decision::Accept:
      like = a;
      break;
    case Decision::Reject:
      like = (1.0 - a) * w;
      break;
    case Decision::Offer: {
      if (!obs.price.has_value()) {
        throw std::invalid_argument("offer observation needs a price");
      }
      double price_factor;
      if (prev_counterpart_offer.has_value()) {
        price_factor =
            price_likelihood(*obs.price, *prev_counterpart_offer, type,
                             counterpart_role, range, features, preset.econ);
      } else {
        price_factor = opening_price_likelihood(*obs.price, type,
                                                counterpart_role, bounds,
                                                cfg.quadrature_nodes,
                                                cfg.params.opening);
      }
      concession = realized_concession(*obs.price, prev_counterpart_offer,
                                       type.reservation,
                                       cfg.params.concession_eps);
      like = (1.0 - a) * (1.0 - w) * price_factor;
      break;
    }
  }
  if (like <= 0.0 || !cfg.observe_cues) return std::max(like, 0.0);

  const double deadline = deadline_clock(round, horizon);
  const auto sent = sentiment_probs(type.stance, preset.cue, cfg.params.cue);
  const auto strat = strategic_probs(obs.decision, type.stance, concession,
                                     deadline, preset.cue, cfg.params.cue);
  like *= sent[static_cast<int>(obs.cues.sentiment)];
  like *= strat[static_cast<int>(obs.cues.strategic)];
  return like;
}

double opening_observation_likelihood(double price, const CuePair& cues,
                                      const LatentType& type,
                                      Role counterpart_role,
                                      const Bounds& bounds, int horizon,
                                      const FamilyPreset& preset,
                                      const BeliefConfig& cfg) {
  double like = opening_price_likelihood(price, type, counterpart_role, bounds,
                                         cfg.quadrature_nodes,
                                         cfg.params.opening);
  if (like <= 0.0 || !cfg.observe_cues) return std::max(like, 0.0);
  const double deadline = deadline_clock(1, horizon);
  const auto sent = sentiment_probs(type.stance, preset.cue, cfg.params.cue);
  const auto strat = strategic_probs(Decision::Offer, type.stance, 0.0,
                                     deadline, preset.cue, cfg.params.cue);
  like *= sent[static_cast<int>(cues.sentiment)];
  like *= strat[static_cast<int>(cues.strategic)];
  return like;
}

BeliefFilter::BeliefFilter(const ScenarioSpec& spec, BeliefConfig cfg)
    : spec_(spec),
      cfg_(std::move(cfg)),
      grid_(build_type_grid(spec, cfg_)),
      belief_(grid_.prior),
      preset_(preset_for(spec.family)),
      counterpart_role_(spec.counterpart_role()) {}

std::vector<double> BeliefFilter::opening_likelihood(
    double price, const CuePair& cues) const {
  std::vector<double> like(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    like[i] = opening_observation_likelihood(price, cues, grid_.types[i],
                                             counterpart_role_, spec_.bounds,
                                             spec_.horizon, preset_, cfg_);
  }
  return like;
}

std::vector<double> BeliefFilter::observe_opening(double price,
                                                  const CuePair& cues) {
  if (spec_.opener != Opener::Counterpart) {
    throw std::logic_error("opening observation requires a counterpart opener");
  }
  if (!agent_offers_.empty() || !counterpart_offers_.empty()) {
    throw std::logic_error("opening observed after the exchange started");
  }
  auto like = opening_likelihood(price, cues);
  apply(like);
  counterpart_offers_.push_back(price);
  return like;
}

void BeliefFilter::observe_agent_offer(double price) {
  if (static_cast<int>(agent_offers_.size()) != responses_seen_) {
    throw std::logic_error("previous own offer still awaits its response");
  }
  pending_features_ =
      history_features(agent_offers_, other_role(counterpart_role_),
                       spec_.bounds.range(), cfg_.params.rigidity_threshold);
  agent_offers_.push_back(price);
}

std::vector<double> BeliefFilter::response_likelihood(
    const CounterpartObservation& obs) const {
  if (static_cast<int>(agent_offers_.size()) != responses_seen_ + 1) {
    throw std::logic_error("no own offer is awaiting a response");
  }
  const int round = agent_round();
  std::optional<double> prev;
  if (!counterpart_offers_.empty()) prev = counterpart_offers_.back();
  std::vector<double> like(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    like[i] = observation_likelihood(obs, agent_offers_.back(), grid_.types[i],
                                     counterpart_role_, spec_.bounds, round,
                                     spec_.horizon, pending_features_, prev,
                                     preset_, cfg_);
  }
  return like;
}

std::vector<double> BeliefFilter::observe_response(
    const CounterpartObservation& obs) {
  auto like = response_likelihood(obs);
  apply(like);
  ++responses_seen_;
  if (obs.decision == Decision::Offer) {
    counterpart_offers_.push_back(*obs.price);
  }
  return like;
}

void BeliefFilter::apply(const std::vector<double>& likelihood) {
  double total = 0.0;
  for (std::size_t i = 0; i < belief_.size(); ++i) {
    belief_[i] *= likelihood[i];
    total += belief_[i];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::runtime_error(
        "observation has zero probability under the belief support");
  }
  for (double& b : belief_) b /= total;
}

double BeliefFilter::reservation_mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < belief_.size(); ++i) {
    m += belief_[i] * grid_.types[i].reservation;
  }
  return m;
}

double BeliefFilter::urgency_mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < belief_.size(); ++i) {
    m += belief_[i] * grid_.types[i].urgency;
  }
  return m;
}

std::array<double, 3> BeliefFilter::stance_marginal() const {
  std::array<double, 3> m{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < belief_.size(); ++i) {
    m[static_cast<int>(grid_.types[i].stance)] += belief_[i];
  }
  return m;
}

const LatentType& BeliefFilter::map_type() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < belief_.size(); ++i) {
    if (belief_[i] > belief_[best]) best = i;
  }
  return grid_.types[best];
}

double BeliefFilter::normalization_error() const {
  double total = 0.0;
  for (double b : belief_) total += b;
  return std::abs(total - 1.0);
}

BeliefFilter replay_trace(const EpisodeTrace& trace, BeliefConfig cfg) {
  BeliefFilter filter(trace.spec, std::move(cfg));
  for (const auto& rec : trace.records) {
    if (rec.actor == "agent") {
      if (rec.decision == Decision::Offer) filter.observe_agent_offer(*rec.price);
      continue;
    }
    if (!rec.cues.has_value()) continue;
    if (filter.agent_round() == 0) {
      filter.observe_opening(*rec.price, *rec.cues);
    } else {
      CounterpartObservation obs;
      obs.decision = rec.decision;
      obs.price = rec.price;
      obs.cues = *rec.cues;
      filter.observe_response(obs);
    }
  }
  return filter;
}

}  // namespace bargain
