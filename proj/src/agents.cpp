#include "bargain/agents.hpp"

#include <cmath>
#include <stdexcept>

#include "bargain/cues.hpp"

namespace bargain {

FixedConcessionAgent::FixedConcessionAgent(double rate) : rate_(rate) {
  if (!(rate > 0.0) || rate > 1.0) {
    throw std::invalid_argument("fixed-concession rate must lie in (0, 1]");
  }
}

std::string FixedConcessionAgent::name() const {
  int pct = static_cast<int>(std::lround(rate_ * 100.0));
  return "fc-" + std::to_string(pct);
}

AgentAction FixedConcessionAgent::act(const AgentView& view) {
  AgentAction a;
  if (view.offer_pending && view.accept_utility.has_value() &&
      *view.accept_utility >= 0.0) {
    a.decision = Decision::Accept;
    a.message = "Agreed, that works for me.";
    return a;
  }
  a.decision = Decision::Offer;
  double next;
  if (!view.last_own_offer.has_value()) {
    next = view.role == Role::Buyer ? view.bounds.p_min : view.bounds.p_max;
  } else {
    next = *view.last_own_offer + rate_ * (view.reservation - *view.last_own_offer);
  }
  a.price = next;
  a.message = "My offer is " + format_price(next) + ".";
  return a;
}

ScriptedAgent::ScriptedAgent(std::vector<AgentAction> actions, std::string name)
    : actions_(actions.begin(), actions.end()), name_(std::move(name)) {}

AgentAction ScriptedAgent::act(const AgentView& view) {
  if (actions_.empty()) {
    AgentAction a;
    a.decision = Decision::Offer;
    a.price = view.reservation;
    return a;
  }
  AgentAction a = actions_.front();
  actions_.pop_front();
  return a;
}

}  // namespace bargain
