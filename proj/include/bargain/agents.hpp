#pragma once

#include <deque>
#include <string>
#include <vector>

#include "bargain/protocol.hpp"

namespace bargain {

// Opens at its role-favorable bound, then moves a fixed fraction of the
// remaining distance toward its reservation each turn; accepts any pending
// offer weakly inside its reservation; never exits.
class FixedConcessionAgent : public Agent {
 public:
  explicit FixedConcessionAgent(double rate);
  std::string name() const override;
  AgentAction act(const AgentView& view) override;
  double rate() const { return rate_; }

 private:
  double rate_;
};

// Replays a fixed action list; offers its reservation once exhausted.
class ScriptedAgent : public Agent {
 public:
  explicit ScriptedAgent(std::vector<AgentAction> actions,
                         std::string name = "scripted");
  std::string name() const override { return name_; }
  AgentAction act(const AgentView& view) override;

 private:
  std::deque<AgentAction> actions_;
  std::string name_;
};

}  // namespace bargain
