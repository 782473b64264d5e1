#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bargain/protocol.hpp"

namespace bargain {

// Five-key JSON user message for one agent turn; a sixth side_info key is
// present only when an intervention payload was injected. Price fields are
// rendered to two decimals at this interface.
std::string agent_payload_json(const AgentView& view);

// First balanced JSON object embedded in free text, or nullopt.
std::optional<std::string> extract_json_object(const std::string& text);

// Decodes an agent response; parse_failed is set when no action could be
// extracted, which triggers the protocol's deterministic fallback.
AgentAction parse_agent_response(const std::string& text);

// One JSON line per round record plus a terminal summary line. Keys are
// sorted and floats use shortest round-trip formatting, so the byte content
// is canonical for hashing.
std::vector<std::string> trace_jsonl(const EpisodeTrace& trace);
std::string trace_json(const EpisodeTrace& trace);

std::string intervention_payload_revealed_type(const ScenarioSpec& spec);
std::string intervention_payload_posterior(double r_mean, double kappa_mean,
                                           const std::array<double, 3>& stance_probs);

}  // namespace bargain
