#include "bargain/protocol.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "bargain/numeric.hpp"
#include "bargain/wire.hpp"

namespace bargain {

namespace {
constexpr double kPriceEps = 1e-9;
}

double agent_utility(Role role, double reservation, double price) {
  return role == Role::Buyer ? reservation - price : price - reservation;
}

ViolationSet& ViolationSet::operator+=(const ViolationSet& o) {
  price_bound += o.price_bound;
  reservation_ir += o.reservation_ir;
  invalid_action += o.invalid_action;
  monotonicity += o.monotonicity;
  turn_budget += o.turn_budget;
  schema_parse += o.schema_parse;
  return *this;
}

Episode::Episode(const ScenarioSpec& spec, EpisodeOptions options)
    : spec_(spec),
      options_(std::move(options)),
      state_(kernel_state_for(spec, options_.params)),
      kernel_rng_(spec.cell + kSeedKernel),
      cue_rng_(spec.cell + kSeedCues) {
  if (!spec_.feasible() && spec_.regime != Regime::NoDeal) {
    throw std::invalid_argument("episode: infeasible spec outside no-deal regime");
  }
  trace_.spec = spec_;
  if (spec_.opener == Opener::Counterpart) counterpart_open();
}

void Episode::counterpart_open() {
  double price = opening_offer(state_.type, state_.d0, state_.counterpart_role,
                               state_.bounds, kernel_rng_,
                               options_.params.opening);
  state_.counterpart_offers.push_back(price);
  pending_ = price;
  record_counterpart(Decision::Offer, price, HistoryFeatures{});
}

void Episode::record_counterpart(Decision d, std::optional<double> price,
                                 const HistoryFeatures& features) {
  double concession = concession_cue(state_.counterpart_offers,
                                     state_.type.reservation,
                                     options_.params.concession_eps);
  double deadline = deadline_clock(round_, state_.horizon);
  CuePair cues = sample_cues(d, state_.type.stance, concession, deadline,
                             state_.preset.cue, cue_rng_, options_.params.cue);
  RoundRecord rec;
  rec.round = round_;
  rec.actor = "counterpart";
  rec.decision = d;
  rec.price = price;
  rec.cues = cues;
  rec.features = features;
  if (options_.render_messages) {
    rec.message = render_message(d, price, cues, state_.counterpart_role,
                                 options_.messages);
  }
  trace_.records.push_back(std::move(rec));
}

AgentView Episode::view() const {
  AgentView v;
  v.role = spec_.agent_role;
  v.reservation = spec_.r_agent;
  v.round = round_;
  v.max_rounds = state_.horizon;
  v.rounds_remaining = state_.horizon - round_;
  v.offer_pending = pending_.has_value();
  if (pending_.has_value()) {
    v.legal = {Decision::Offer, Decision::Accept, Decision::Reject};
  } else {
    v.legal = {Decision::Offer};
  }
  v.last_own_offer = last_own_;
  v.bounds = spec_.bounds;
  v.monotone_rule = true;
  v.delta_max = options_.delta_max;
  if (pending_.has_value()) {
    v.counterpart_price = pending_;
    v.accept_utility = agent_utility(v.role, v.reservation, *pending_);
    for (auto it = trace_.records.rbegin(); it != trace_.records.rend(); ++it) {
      if (it->actor == "counterpart" && it->decision == Decision::Offer) {
        v.counterpart_message = it->message;
        break;
      }
    }
  }
  int first_round = round_ - options_.history_window;
  std::size_t skip_last = 0;
  if (!trace_.records.empty() && pending_.has_value()) {
    const auto& last = trace_.records.back();
    if (last.actor == "counterpart" && last.decision == Decision::Offer) {
      skip_last = 1;  // the pending offer is the observation, not history
    }
  }
  for (std::size_t i = 0; i + skip_last < trace_.records.size(); ++i) {
    const auto& rec = trace_.records[i];
    if (rec.round < first_round) continue;
    HistoryEntry h;
    h.round = rec.round;
    h.actor = rec.actor;
    h.decision = rec.decision;
    h.price = rec.price;
    h.message = rec.message;
    v.history.push_back(std::move(h));
  }
  if (options_.side_info) v.side_info = options_.side_info(*this);
  return v;
}

std::pair<AgentAction, ViolationSet> Episode::validate_action(
    const AgentAction& a) const {
  ViolationSet v;
  AgentAction act = a;
  bool need_fallback = false;
  if (act.parse_failed) {
    v.schema_parse += 1;
    need_fallback = true;
  } else if (act.decision == Decision::Offer) {
    need_fallback = !act.price.has_value();
  } else {
    need_fallback = !pending_.has_value();
  }
  if (need_fallback) {
    v.invalid_action += 1;
    AgentAction fb;
    if (pending_.has_value() &&
        agent_utility(spec_.agent_role, spec_.r_agent, *pending_) >= 0.0) {
      fb.decision = Decision::Accept;
    } else {
      fb.decision = Decision::Offer;
      fb.price = spec_.r_agent;
    }
    fb.belief = act.belief;
    act = fb;
  }
  if (act.decision == Decision::Offer) {
    double p = *act.price;
    double clamped = clip(p, spec_.bounds.p_min, spec_.bounds.p_max);
    if (clamped != p) {
      v.price_bound += 1;
      act.price = clamped;
    }
    if (last_own_.has_value()) {
      double step = spec_.agent_role == Role::Buyer ? clamped - *last_own_
                                                    : *last_own_ - clamped;
      if (step < -kPriceEps) v.monotonicity += 1;
      if (options_.delta_max.has_value() && step > *options_.delta_max + kPriceEps) {
        v.monotonicity += 1;
      }
    }
    if (agent_utility(spec_.agent_role, spec_.r_agent, clamped) < -kPriceEps) {
      v.reservation_ir += 1;
    }
  } else if (act.decision == Decision::Accept) {
    act.price = pending_;
    if (agent_utility(spec_.agent_role, spec_.r_agent, *pending_) < -kPriceEps) {
      v.reservation_ir += 1;
    }
  }
  if (act.belief.has_value()) {
    double s = act.belief->stance_probs[0] + act.belief->stance_probs[1] +
               act.belief->stance_probs[2];
    if (std::fabs(s - 1.0) > 1e-6) {
      act.belief.reset();
      v.schema_parse += 1;
    }
  }
  return {act, v};
}

StepResult Episode::step(const AgentAction& action, const std::string& payload) {
  if (terminal_) throw std::logic_error("step: episode already terminal");
  auto validated = validate_action(action);
  AgentAction act = validated.first;
  ViolationSet delta = validated.second;

  RoundRecord rec;
  rec.round = round_;
  rec.actor = "agent";
  rec.decision = act.decision;
  rec.price = act.price;
  rec.message = act.message;
  rec.belief = act.belief;
  rec.violations = delta;
  rec.payload = payload;
  trace_.records.push_back(std::move(rec));
  trace_.violations += delta;

  StepResult result;
  if (act.decision == Decision::Accept) {
    close(TerminationSource::AgentAccept, pending_);
    result.terminal = true;
    return result;
  }
  if (act.decision == Decision::Reject) {
    close(TerminationSource::AgentReject, std::nullopt);
    result.terminal = true;
    return result;
  }

  double p = *act.price;
  state_.round = round_;
  HistoryFeatures feats =
      history_features(state_.agent_offers, spec_.agent_role, state_.range(),
                       options_.params.rigidity_threshold);
  CounterpartAction resp = respond(state_, p, kernel_rng_);
  if (resp.decision == Decision::Accept) {
    record_counterpart(Decision::Accept, p, feats);
    state_.agent_offers.push_back(p);
    last_own_ = p;
    close(TerminationSource::CounterpartAccept, p);
    result.terminal = true;
    return result;
  }
  if (resp.decision == Decision::Reject) {
    record_counterpart(Decision::Reject, std::nullopt, feats);
    state_.agent_offers.push_back(p);
    last_own_ = p;
    close(TerminationSource::CounterpartWalk, std::nullopt);
    result.terminal = true;
    return result;
  }
  if (resp.exhausted) {
    state_.agent_offers.push_back(p);
    last_own_ = p;
    close(TerminationSource::RoundLimit, std::nullopt);
    result.terminal = true;
    return result;
  }
  state_.counterpart_offers.push_back(resp.price);
  record_counterpart(Decision::Offer, resp.price, feats);
  pending_ = resp.price;
  state_.agent_offers.push_back(p);
  last_own_ = p;
  round_ += 1;
  result.counter_price = resp.price;
  return result;
}

void Episode::abort(const std::string& reason) {
  terminal_ = true;
  trace_.aborted = true;
  trace_.abort_reason = reason;
  trace_.rounds_used = round_;
}

void Episode::close(TerminationSource source, std::optional<double> price) {
  terminal_ = true;
  trace_.termination = source;
  trace_.outcome_price = price;
  trace_.rounds_used = round_;
  if (price.has_value()) {
    trace_.utility = agent_utility(spec_.agent_role, spec_.r_agent, *price);
    trace_.agreement_ir = *price >= spec_.r_seller() - kPriceEps &&
                          *price <= spec_.r_buyer() + kPriceEps;
  } else {
    trace_.utility = 0.0;
    trace_.agreement_ir = false;
  }
}

EpisodeTrace Episode::take_trace() { return std::move(trace_); }

EpisodeTrace run_episode(const ScenarioSpec& spec, Agent& agent,
                         EpisodeOptions options) {
  Episode ep(spec, std::move(options));
  while (!ep.terminal()) {
    AgentView v = ep.view();
    std::string payload =
        ep.options().log_payloads ? agent_payload_json(v) : std::string{};
    AgentAction a;
    try {
      a = agent.act(v);
    } catch (const AgentTransportError& e) {
      ep.abort(e.what());
      break;
    }
    ep.step(a, payload);
  }
  return ep.take_trace();
}

Rng make_agent_rng(const ScenarioSpec& spec) {
  return Rng(spec.cell + kSeedAgent);
}

}  // namespace bargain
