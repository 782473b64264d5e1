#include "bargain/wire.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace bargain {

namespace {

using nlohmann::json;

double round2(double v) { return std::round(v * 100.0) / 100.0; }

json price_or_null(const std::optional<double>& p) {
  if (!p.has_value()) return nullptr;
  return round2(*p);
}

json history_json(const std::vector<HistoryEntry>& history) {
  json arr = json::array();
  for (const auto& h : history) {
    json e;
    e["round"] = h.round;
    e["actor"] = h.actor;
    e["decision"] = to_string(h.decision);
    e["price"] = price_or_null(h.price);
    e["message"] = h.message;
    arr.push_back(std::move(e));
  }
  return arr;
}

json violations_json(const ViolationSet& v) {
  json o;
  o["price_bound"] = v.price_bound;
  o["reservation_ir"] = v.reservation_ir;
  o["invalid_action"] = v.invalid_action;
  o["monotonicity"] = v.monotonicity;
  o["turn_budget"] = v.turn_budget;
  o["schema_parse"] = v.schema_parse;
  return o;
}

json belief_json(const BeliefReport& b) {
  json o;
  o["reservation"] = b.r_hat;
  o["urgency"] = b.kappa_hat;
  o["stance_probs"] = {b.stance_probs[0], b.stance_probs[1], b.stance_probs[2]};
  return o;
}

std::optional<BeliefReport> parse_type_estimate(const json& j) {
  if (!j.is_object()) return std::nullopt;
  BeliefReport r;
  if (!j.contains("reservation") || !j["reservation"].is_number()) return std::nullopt;
  if (!j.contains("urgency") || !j["urgency"].is_number()) return std::nullopt;
  if (!j.contains("stance_probs") || !j["stance_probs"].is_array() ||
      j["stance_probs"].size() != 3) {
    return std::nullopt;
  }
  r.r_hat = j["reservation"].get<double>();
  r.kappa_hat = j["urgency"].get<double>();
  for (int i = 0; i < 3; ++i) {
    if (!j["stance_probs"][i].is_number()) return std::nullopt;
    r.stance_probs[i] = j["stance_probs"][i].get<double>();
  }
  return r;
}

}  // namespace

std::string agent_payload_json(const AgentView& view) {
  json root;

  json pc;
  pc["role"] = to_string(view.role);
  pc["reservation_price"] = round2(view.reservation);
  root["private_context"] = std::move(pc);

  json ps;
  ps["round"] = view.round;
  ps["max_rounds"] = view.max_rounds;
  ps["rounds_remaining"] = view.rounds_remaining;
  ps["offer_pending"] = view.offer_pending;
  json legal = json::array();
  for (Decision d : view.legal) legal.push_back(to_string(d));
  ps["legal_decisions"] = std::move(legal);
  ps["last_own_offer"] = price_or_null(view.last_own_offer);
  root["protocol_state"] = std::move(ps);

  json cons;
  cons["price_min"] = round2(view.bounds.p_min);
  cons["price_max"] = round2(view.bounds.p_max);
  cons["monotone_concession"] = view.monotone_rule;
  cons["delta_max"] = view.delta_max.has_value() ? json(*view.delta_max) : json(nullptr);
  root["constraints"] = std::move(cons);

  json obs;
  obs["counterpart_price"] = price_or_null(view.counterpart_price);
  obs["counterpart_message"] = view.counterpart_message;
  obs["accept_utility"] =
      view.accept_utility.has_value() ? json(round2(*view.accept_utility)) : json(nullptr);
  root["observation"] = std::move(obs);

  root["history"] = history_json(view.history);

  if (view.side_info.has_value()) {
    root["side_info"] = json::parse(*view.side_info);
  }
  return root.dump();
}

std::optional<std::string> extract_json_object(const std::string& text) {
  std::size_t start = text.find('{');
  while (start != std::string::npos) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        --depth;
        if (depth == 0) return text.substr(start, i - start + 1);
      }
    }
    start = text.find('{', start + 1);
  }
  return std::nullopt;
}

AgentAction parse_agent_response(const std::string& text) {
  AgentAction act;
  auto body = extract_json_object(text);
  if (!body.has_value()) {
    act.parse_failed = true;
    return act;
  }
  json j = json::parse(*body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    act.parse_failed = true;
    return act;
  }
  if (!j.contains("decision") || !j["decision"].is_string()) {
    act.parse_failed = true;
    return act;
  }
  std::string d = j["decision"].get<std::string>();
  if (d == "Offer") {
    act.decision = Decision::Offer;
  } else if (d == "Accept") {
    act.decision = Decision::Accept;
  } else if (d == "Reject") {
    act.decision = Decision::Reject;
  } else {
    act.parse_failed = true;
    return act;
  }
  if (j.contains("price") && j["price"].is_number()) {
    act.price = j["price"].get<double>();
  }
  if (j.contains("message") && j["message"].is_string()) {
    act.message = j["message"].get<std::string>();
  }
  if (j.contains("type_estimate")) {
    act.belief = parse_type_estimate(j["type_estimate"]);
  }
  return act;
}

namespace {

json record_json(const RoundRecord& rec) {
  json o;
  o["type"] = "round";
  o["round"] = rec.round;
  o["actor"] = rec.actor;
  o["decision"] = to_string(rec.decision);
  o["price"] = rec.price.has_value() ? json(*rec.price) : json(nullptr);
  o["message"] = rec.message;
  if (rec.cues.has_value()) {
    json c;
    c["sentiment"] = to_string(rec.cues->sentiment);
    c["strategic"] = to_string(rec.cues->strategic);
    o["cues"] = std::move(c);
    json f;
    f["concede_magnitude"] = rec.features.concede_magnitude;
    f["concede_speed"] = rec.features.concede_speed;
    f["rigidity"] = rec.features.rigidity;
    o["features"] = std::move(f);
  }
  if (rec.actor == "agent") {
    o["violations"] = violations_json(rec.violations);
    if (rec.belief.has_value()) o["belief"] = belief_json(*rec.belief);
    if (!rec.payload.empty()) o["payload"] = json::parse(rec.payload);
  }
  return o;
}

json summary_json(const EpisodeTrace& trace) {
  json o;
  o["type"] = "summary";
  o["termination"] = to_string(trace.termination);
  o["outcome_price"] =
      trace.outcome_price.has_value() ? json(*trace.outcome_price) : json(nullptr);
  o["utility"] = trace.utility;
  o["agreement_ir"] = trace.agreement_ir;
  o["rounds_used"] = trace.rounds_used;
  o["violations"] = violations_json(trace.violations);
  o["aborted"] = trace.aborted;
  if (trace.aborted) o["abort_reason"] = trace.abort_reason;
  if (trace.planner_value.has_value()) {
    o["planner_round1_value"] = *trace.planner_value;
  }
  o["spec"] = json::parse(scenario_to_json(trace.spec));
  return o;
}

}  // namespace

std::vector<std::string> trace_jsonl(const EpisodeTrace& trace) {
  std::vector<std::string> lines;
  lines.reserve(trace.records.size() + 1);
  for (const auto& rec : trace.records) lines.push_back(record_json(rec).dump());
  lines.push_back(summary_json(trace).dump());
  return lines;
}

std::string trace_json(const EpisodeTrace& trace) {
  json o;
  json records = json::array();
  for (const auto& rec : trace.records) records.push_back(record_json(rec));
  o["records"] = std::move(records);
  o["summary"] = summary_json(trace);
  return o.dump();
}

std::string intervention_payload_revealed_type(const ScenarioSpec& spec) {
  json o;
  json t;
  t["reservation"] = spec.r_counterpart;
  t["urgency"] = spec.kappa_counterpart;
  t["stance"] = to_string(spec.stance);
  o["revealed_type"] = std::move(t);
  return o.dump();
}

std::string intervention_payload_posterior(double r_mean, double kappa_mean,
                                           const std::array<double, 3>& stance_probs) {
  json o;
  json p;
  p["reservation_mean"] = r_mean;
  p["urgency_mean"] = kappa_mean;
  p["stance_probs"] = {stance_probs[0], stance_probs[1], stance_probs[2]};
  o["posterior_summary"] = std::move(p);
  return o.dump();
}

}  // namespace bargain
