#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bargain {

enum class Regime { Overlap, UrgencyShift, NoDeal };

enum class Family {
  Candid,
  Taciturn,
  Expressive,
  Strategic,
  Stochastic,
  Adversarial,
};

enum class Role { Buyer, Seller };

enum class Opener { Agent, Counterpart };

enum class Stance { Conciliatory, Neutral, Aggressive };

enum class Decision { Offer, Accept, Reject };

enum class Sentiment { Negative, Neutral, Positive };

enum class StratCue { Concede, Hold, Pressure };

enum class TerminationSource {
  AgentAccept,
  CounterpartAccept,
  AgentReject,
  CounterpartWalk,
  RoundLimit,
};

// Private counterpart type: reservation price, urgency, stance.
struct LatentType {
  double reservation = 0.0;
  double urgency = 0.0;
  Stance stance = Stance::Neutral;
};

struct Bounds {
  double p_min = 0.0;
  double p_max = 0.0;

  double range() const { return p_max - p_min; }
};

const char* to_string(Regime v);
const char* to_string(Family v);
const char* to_string(Role v);
const char* to_string(Opener v);
const char* to_string(Stance v);
const char* to_string(Decision v);
const char* to_string(Sentiment v);
const char* to_string(StratCue v);
const char* to_string(TerminationSource v);

Regime regime_from_string(const std::string& s);
Family family_from_string(const std::string& s);
Role role_from_string(const std::string& s);
Opener opener_from_string(const std::string& s);
Stance stance_from_string(const std::string& s);
Decision decision_from_string(const std::string& s);
Sentiment sentiment_from_string(const std::string& s);
StratCue strat_cue_from_string(const std::string& s);
TerminationSource termination_from_string(const std::string& s);

Role other_role(Role r);

// Offer direction sign: +1 for a seller (concessions move downward),
// -1 for a buyer (concessions move upward).
double role_sign(Role r);

std::vector<Family> all_families();
std::vector<Stance> all_stances();

}  // namespace bargain
