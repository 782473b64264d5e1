#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bargain/presets.hpp"
#include "bargain/rng.hpp"
#include "bargain/types.hpp"

namespace bargain {

// Latent cue pair accompanying a committed economic action. Cues condition
// message rendering only; they never alter the decision or price.
struct CuePair {
  Sentiment sentiment = Sentiment::Neutral;
  StratCue strategic = StratCue::Hold;
};

// Relative size of the counterpart's latest own-price move, in units of its
// remaining distance to reservation. `offers` includes the just-committed
// offer; a lone opening offer carries no concession signal.
double concession_cue(const std::vector<double>& counterpart_offers,
                      double reservation, double eps = 1e-6);

// Square-root deadline clock in [0, 1].
double deadline_clock(int round, int horizon);

// Closed-form sentiment distribution ordered (Negative, Neutral, Positive),
// with channel overrides applied.
std::array<double, 3> sentiment_probs(Stance stance, const CuePreset& cue,
                                      const CueParams& params = CueParams{});

Sentiment sample_sentiment(Stance stance, const CuePreset& cue, Rng& rng,
                           const CueParams& params = CueParams{});

// Posture logits ordered (Concede, Hold, Pressure) for the offer branch of
// the base model, before any temperature scaling.
std::array<double, 3> strategic_logits(Stance stance, double concession,
                                       double deadline,
                                       const CueParams& params = CueParams{});

// Closed-form posture distribution ordered (Concede, Hold, Pressure), with
// the terminal-action mappings and channel overrides applied.
std::array<double, 3> strategic_probs(Decision decision, Stance stance,
                                      double concession, double deadline,
                                      const CuePreset& cue,
                                      const CueParams& params = CueParams{});

StratCue sample_strategic(Decision decision, Stance stance, double concession,
                          double deadline, const CuePreset& cue, Rng& rng,
                          const CueParams& params = CueParams{});

CuePair sample_cues(Decision decision, Stance stance, double concession,
                    double deadline, const CuePreset& cue, Rng& rng,
                    const CueParams& params = CueParams{});

// Fixed message templates: one sentence per (decision, role, posture) cell
// with a tone fragment selected by sentiment. Offer templates contain a
// {price} placeholder filled with the price rendered to two decimals.
struct MessageTable {
  std::map<std::string, std::string> entries;

  static MessageTable defaults();
  // Defaults overlaid with `key = text` lines from a plain-text file.
  static MessageTable load(const std::string& path);
};

std::string message_key(Decision decision, Role speaker, StratCue cue);

std::string render_message(Decision decision, std::optional<double> price,
                           const CuePair& cues, Role speaker,
                           const MessageTable& table = MessageTable::defaults());

// Two-decimal price string used everywhere prices cross the text interface.
std::string format_price(double price);

}  // namespace bargain
