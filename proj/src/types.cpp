#include "bargain/types.hpp"

#include <stdexcept>

namespace bargain {

namespace {

[[noreturn]] void bad_enum(const char* what, const std::string& s) {
  throw std::invalid_argument(std::string("unknown ") + what + ": " + s);
}

}  // namespace

const char* to_string(Regime v) {
  switch (v) {
    case Regime::Overlap: return "overlap";
    case Regime::UrgencyShift: return "urgency_shift";
    case Regime::NoDeal: return "no_deal";
  }
  return "?";
}

const char* to_string(Family v) {
  switch (v) {
    case Family::Candid: return "candid";
    case Family::Taciturn: return "taciturn";
    case Family::Expressive: return "expressive";
    case Family::Strategic: return "strategic";
    case Family::Stochastic: return "stochastic";
    case Family::Adversarial: return "adversarial";
  }
  return "?";
}

const char* to_string(Role v) {
  switch (v) {
    case Role::Buyer: return "buyer";
    case Role::Seller: return "seller";
  }
  return "?";
}

const char* to_string(Opener v) {
  switch (v) {
    case Opener::Agent: return "agent";
    case Opener::Counterpart: return "counterpart";
  }
  return "?";
}

const char* to_string(Stance v) {
  switch (v) {
    case Stance::Conciliatory: return "conciliatory";
    case Stance::Neutral: return "neutral";
    case Stance::Aggressive: return "aggressive";
  }
  return "?";
}

const char* to_string(Decision v) {
  switch (v) {
    case Decision::Offer: return "Offer";
    case Decision::Accept: return "Accept";
    case Decision::Reject: return "Reject";
  }
  return "?";
}

const char* to_string(Sentiment v) {
  switch (v) {
    case Sentiment::Negative: return "negative";
    case Sentiment::Neutral: return "neutral";
    case Sentiment::Positive: return "positive";
  }
  return "?";
}

const char* to_string(StratCue v) {
  switch (v) {
    case StratCue::Concede: return "concede";
    case StratCue::Hold: return "hold";
    case StratCue::Pressure: return "pressure";
  }
  return "?";
}

const char* to_string(TerminationSource v) {
  switch (v) {
    case TerminationSource::AgentAccept: return "agent_accept";
    case TerminationSource::CounterpartAccept: return "counterpart_accept";
    case TerminationSource::AgentReject: return "agent_reject";
    case TerminationSource::CounterpartWalk: return "counterpart_walk";
    case TerminationSource::RoundLimit: return "round_limit";
  }
  return "?";
}

Regime regime_from_string(const std::string& s) {
  if (s == "overlap") return Regime::Overlap;
  if (s == "urgency_shift") return Regime::UrgencyShift;
  if (s == "no_deal") return Regime::NoDeal;
  bad_enum("regime", s);
}

Family family_from_string(const std::string& s) {
  if (s == "candid") return Family::Candid;
  if (s == "taciturn") return Family::Taciturn;
  if (s == "expressive") return Family::Expressive;
  if (s == "strategic") return Family::Strategic;
  if (s == "stochastic") return Family::Stochastic;
  if (s == "adversarial") return Family::Adversarial;
  bad_enum("family", s);
}

Role role_from_string(const std::string& s) {
  if (s == "buyer") return Role::Buyer;
  if (s == "seller") return Role::Seller;
  bad_enum("role", s);
}

Opener opener_from_string(const std::string& s) {
  if (s == "agent") return Opener::Agent;
  if (s == "counterpart") return Opener::Counterpart;
  bad_enum("opener", s);
}

Stance stance_from_string(const std::string& s) {
  if (s == "conciliatory") return Stance::Conciliatory;
  if (s == "neutral") return Stance::Neutral;
  if (s == "aggressive") return Stance::Aggressive;
  bad_enum("stance", s);
}

Decision decision_from_string(const std::string& s) {
  if (s == "Offer") return Decision::Offer;
  if (s == "Accept") return Decision::Accept;
  if (s == "Reject") return Decision::Reject;
  bad_enum("decision", s);
}

Sentiment sentiment_from_string(const std::string& s) {
  if (s == "negative") return Sentiment::Negative;
  if (s == "neutral") return Sentiment::Neutral;
  if (s == "positive") return Sentiment::Positive;
  bad_enum("sentiment", s);
}

StratCue strat_cue_from_string(const std::string& s) {
  if (s == "concede") return StratCue::Concede;
  if (s == "hold") return StratCue::Hold;
  if (s == "pressure") return StratCue::Pressure;
  bad_enum("strategic cue", s);
}

TerminationSource termination_from_string(const std::string& s) {
  if (s == "agent_accept") return TerminationSource::AgentAccept;
  if (s == "counterpart_accept") return TerminationSource::CounterpartAccept;
  if (s == "agent_reject") return TerminationSource::AgentReject;
  if (s == "counterpart_walk") return TerminationSource::CounterpartWalk;
  if (s == "round_limit") return TerminationSource::RoundLimit;
  bad_enum("termination source", s);
}

Role other_role(Role r) {
  return r == Role::Buyer ? Role::Seller : Role::Buyer;
}

double role_sign(Role r) {
  return r == Role::Seller ? 1.0 : -1.0;
}

std::vector<Family> all_families() {
  return {Family::Candid,    Family::Taciturn,   Family::Expressive,
          Family::Strategic, Family::Stochastic, Family::Adversarial};
}

std::vector<Stance> all_stances() {
  return {Stance::Conciliatory, Stance::Neutral, Stance::Aggressive};
}

}  // namespace bargain
