#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bargain/cues.hpp"
#include "bargain/kernel.hpp"
#include "bargain/scenario.hpp"
#include "bargain/types.hpp"

namespace bargain {

// Buyer gains below, seller above its reservation; zero at it.
double agent_utility(Role role, double reservation, double price);

struct BeliefReport {
  double r_hat = 0.0;
  double kappa_hat = 0.0;
  std::array<double, 3> stance_probs{1.0 / 3, 1.0 / 3, 1.0 / 3};
};

struct AgentAction {
  Decision decision = Decision::Offer;
  std::optional<double> price;
  std::string message;
  std::optional<BeliefReport> belief;
  // Set by transports when no action could be extracted from the raw
  // response; triggers the deterministic fallback.
  bool parse_failed = false;
};

struct ViolationSet {
  // Critical.
  int price_bound = 0;
  int reservation_ir = 0;
  int invalid_action = 0;
  // Secondary procedural diagnostics.
  int monotonicity = 0;
  int turn_budget = 0;
  int schema_parse = 0;

  int critical_total() const { return price_bound + reservation_ir + invalid_action; }
  int secondary_total() const { return monotonicity + turn_budget + schema_parse; }
  ViolationSet& operator+=(const ViolationSet& o);
};

struct RoundRecord {
  int round = 0;  // agent decision round this event belongs to
  std::string actor;  // "agent" or "counterpart"
  Decision decision = Decision::Offer;
  std::optional<double> price;
  std::string message;
  std::optional<CuePair> cues;            // counterpart events only
  HistoryFeatures features;               // features the kernel consumed
  std::optional<BeliefReport> belief;     // agent events only
  ViolationSet violations;                // agent events only
  std::string payload;                    // JSON the agent received, if logged
};

struct EpisodeTrace {
  ScenarioSpec spec;
  std::vector<RoundRecord> records;
  TerminationSource termination = TerminationSource::RoundLimit;
  std::optional<double> outcome_price;
  double utility = 0.0;
  bool agreement_ir = false;  // outcome price inside [r_seller, r_buyer]
  int rounds_used = 0;
  ViolationSet violations;
  bool aborted = false;
  std::string abort_reason;
  // Planner value estimate at the first decision, set on reference plays.
  std::optional<double> planner_value;
};

struct HistoryEntry {
  int round = 0;
  std::string actor;
  Decision decision = Decision::Offer;
  std::optional<double> price;
  std::string message;
};

// Everything the agent is allowed to see when choosing an action.
struct AgentView {
  Role role = Role::Buyer;
  double reservation = 0.0;
  int round = 1;
  int max_rounds = 1;
  int rounds_remaining = 0;
  bool offer_pending = false;
  std::vector<Decision> legal;
  std::optional<double> last_own_offer;
  Bounds bounds;
  bool monotone_rule = true;
  std::optional<double> delta_max;
  std::optional<double> counterpart_price;
  std::string counterpart_message;
  std::optional<double> accept_utility;
  std::vector<HistoryEntry> history;  // windowed, oldest first
  std::optional<std::string> side_info;  // serialized injection payload
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  virtual AgentAction act(const AgentView& view) = 0;
};

// Thrown by transports after retry exhaustion; aborts the episode.
struct AgentTransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Episode;

struct EpisodeOptions {
  ModelParams params;
  MessageTable messages = MessageTable::defaults();
  bool render_messages = true;
  bool log_payloads = true;
  int history_window = 6;
  std::optional<double> delta_max;
  // Optional per-round side information injected into the agent view.
  std::function<std::optional<std::string>(const Episode&)> side_info;
};

struct StepResult {
  bool terminal = false;
  std::optional<double> counter_price;  // present when the episode continues
};

class Episode {
 public:
  Episode(const ScenarioSpec& spec, EpisodeOptions options = EpisodeOptions{});

  bool terminal() const { return terminal_; }
  int round() const { return round_; }
  std::optional<double> pending_offer() const { return pending_; }
  std::optional<double> last_own_offer() const { return last_own_; }
  const KernelState& kernel_state() const { return state_; }
  const EpisodeTrace& trace() const { return trace_; }
  const EpisodeOptions& options() const { return options_; }

  AgentView view() const;
  // Validation only; no state change. Returns the action actually executed.
  std::pair<AgentAction, ViolationSet> validate_action(const AgentAction& a) const;
  StepResult step(const AgentAction& action, const std::string& payload = "");
  // Marks the episode aborted (transport failure); it becomes terminal.
  void abort(const std::string& reason);

  EpisodeTrace take_trace();

 private:
  void counterpart_open();
  void record_counterpart(Decision d, std::optional<double> price,
                          const HistoryFeatures& features);
  void close(TerminationSource source, std::optional<double> price);

  ScenarioSpec spec_;
  EpisodeOptions options_;
  KernelState state_;
  Rng kernel_rng_;
  Rng cue_rng_;
  EpisodeTrace trace_;
  std::optional<double> pending_;
  std::optional<double> last_own_;
  int round_ = 1;
  bool terminal_ = false;
};

EpisodeTrace run_episode(const ScenarioSpec& spec, Agent& agent,
                         EpisodeOptions options = EpisodeOptions{});

// Dedicated agent-side RNG stream for stochastic policies.
Rng make_agent_rng(const ScenarioSpec& spec);

}  // namespace bargain
