#include "bargain/cues.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bargain/numeric.hpp"

namespace bargain {

namespace {

double stance_mean(Stance stance, double separation) {
  switch (stance) {
    case Stance::Conciliatory: return separation;
    case Stance::Neutral: return 0.0;
    case Stance::Aggressive: return -separation;
  }
  return 0.0;
}

std::array<double, 3> stance_bias(Stance stance, const CueParams& p) {
  switch (stance) {
    case Stance::Conciliatory: return {p.bias_concede, 0.0, -p.bias_concede};
    case Stance::Neutral: return {0.0, p.bias_hold, 0.0};
    case Stance::Aggressive: return {-p.bias_pressure, 0.0, p.bias_pressure};
  }
  return {0.0, 0.0, 0.0};
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

double concession_cue(const std::vector<double>& counterpart_offers,
                      double reservation, double eps) {
  if (counterpart_offers.size() < 2) return 0.0;
  double cur = counterpart_offers.back();
  double prev = counterpart_offers[counterpart_offers.size() - 2];
  double ratio = std::fabs(cur - prev) / (std::fabs(prev - reservation) + eps);
  return std::min(1.0, ratio);
}

double deadline_clock(int round, int horizon) {
  if (horizon <= 0) throw std::invalid_argument("deadline_clock: horizon <= 0");
  return std::sqrt(static_cast<double>(round) / horizon);
}

std::array<double, 3> sentiment_probs(Stance stance, const CuePreset& cue,
                                      const CueParams& params) {
  switch (cue.channel) {
    case CueChannel::Uninformative: return {0.0, 1.0, 0.0};
    case CueChannel::Pressuring: return {1.0, 0.0, 0.0};
    case CueChannel::Accurate:
    case CueChannel::Noisy: break;
  }
  double mu = stance_mean(stance, params.sentiment_separation);
  double sigma = cue.sentiment_sigma;
  double tau = params.sentiment_threshold;
  double lo = norm_cdf((-tau - mu) / sigma);
  double hi = norm_cdf((tau - mu) / sigma);
  return {lo, hi - lo, 1.0 - hi};
}

Sentiment sample_sentiment(Stance stance, const CuePreset& cue, Rng& rng,
                           const CueParams& params) {
  switch (cue.channel) {
    case CueChannel::Uninformative: return Sentiment::Neutral;
    case CueChannel::Pressuring: return Sentiment::Negative;
    case CueChannel::Accurate:
    case CueChannel::Noisy: break;
  }
  double z = stance_mean(stance, params.sentiment_separation) +
             cue.sentiment_sigma * rng.normal();
  if (z > params.sentiment_threshold) return Sentiment::Positive;
  if (z < -params.sentiment_threshold) return Sentiment::Negative;
  return Sentiment::Neutral;
}

std::array<double, 3> strategic_logits(Stance stance, double concession,
                                       double deadline,
                                       const CueParams& params) {
  auto bias = stance_bias(stance, params);
  double l_concede =
      bias[0] + params.concede_gain * (concession - params.concede_threshold);
  double l_hold = bias[1];
  double l_pressure = bias[2] +
                      params.pressure_gain * (deadline - params.deadline_threshold) -
                      params.pressure_damp * concession;
  return {l_concede, l_hold, l_pressure};
}

std::array<double, 3> strategic_probs(Decision decision, Stance stance,
                                      double concession, double deadline,
                                      const CuePreset& cue,
                                      const CueParams& params) {
  switch (cue.channel) {
    case CueChannel::Uninformative: return {0.0, 1.0, 0.0};
    case CueChannel::Pressuring: return {0.0, 0.0, 1.0};
    case CueChannel::Accurate:
    case CueChannel::Noisy: break;
  }
  if (decision == Decision::Accept) return {1.0, 0.0, 0.0};
  if (decision == Decision::Reject) return {0.0, 0.0, 1.0};
  auto logits = strategic_logits(stance, concession, deadline, params);
  std::vector<double> probs = softmax(
      {logits[0], logits[1], logits[2]}, cue.strategic_temperature);
  return {probs[0], probs[1], probs[2]};
}

StratCue sample_strategic(Decision decision, Stance stance, double concession,
                          double deadline, const CuePreset& cue, Rng& rng,
                          const CueParams& params) {
  auto probs = strategic_probs(decision, stance, concession, deadline, cue,
                               params);
  std::size_t idx =
      rng.categorical(std::vector<double>{probs[0], probs[1], probs[2]});
  return static_cast<StratCue>(idx);
}

CuePair sample_cues(Decision decision, Stance stance, double concession,
                    double deadline, const CuePreset& cue, Rng& rng,
                    const CueParams& params) {
  CuePair out;
  out.sentiment = sample_sentiment(stance, cue, rng, params);
  out.strategic = sample_strategic(decision, stance, concession, deadline, cue,
                                   rng, params);
  return out;
}

std::string message_key(Decision decision, Role speaker, StratCue cue) {
  std::string d;
  switch (decision) {
    case Decision::Offer: d = "offer"; break;
    case Decision::Accept: d = "accept"; break;
    case Decision::Reject: d = "reject"; break;
  }
  std::string r = speaker == Role::Seller ? "seller" : "buyer";
  std::string c;
  switch (cue) {
    case StratCue::Concede: c = "concede"; break;
    case StratCue::Hold: c = "hold"; break;
    case StratCue::Pressure: c = "pressure"; break;
  }
  return d + "." + r + "." + c;
}

MessageTable MessageTable::defaults() {
  MessageTable t;
  auto& e = t.entries;
  e["offer.seller.concede"] = "I can come down to {price} to keep this moving.";
  e["offer.seller.hold"] = "My price is {price}; that is where I stand.";
  e["offer.seller.pressure"] = "Take {price} now; this window is closing fast.";
  e["offer.buyer.concede"] = "I can stretch to {price} to close the gap.";
  e["offer.buyer.hold"] = "I am at {price}; that is my number.";
  e["offer.buyer.pressure"] = "{price} is on the table; decide quickly or I move on.";
  e["accept.seller.concede"] = "Done, I accept your price.";
  e["accept.seller.hold"] = "Agreed, we have a deal at your number.";
  e["accept.seller.pressure"] = "Fine, I will take it and be done.";
  e["accept.buyer.concede"] = "Deal, I accept your offer.";
  e["accept.buyer.hold"] = "Agreed, that works for me.";
  e["accept.buyer.pressure"] = "Fine, I will pay it; let us finish.";
  e["reject.seller.concede"] = "I have to step away from this one, no hard feelings.";
  e["reject.seller.hold"] = "We are too far apart; I am ending this here.";
  e["reject.seller.pressure"] = "This is going nowhere; I am out.";
  e["reject.buyer.concede"] = "I must walk away, thank you for your time.";
  e["reject.buyer.hold"] = "We are too far apart; I am done here.";
  e["reject.buyer.pressure"] = "Enough; I am walking away.";
  e["tone.positive"] = "Glad we are making progress. ";
  e["tone.neutral"] = "";
  e["tone.negative"] = "This is getting difficult. ";
  return t;
}

MessageTable MessageTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("message table: cannot open " + path);
  MessageTable t = defaults();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("message table: missing '=' at line " +
                               std::to_string(lineno));
    }
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error("message table: empty key at line " +
                               std::to_string(lineno));
    }
    t.entries[key] = value;
  }
  return t;
}

std::string format_price(double price) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", price);
  return std::string(buf);
}

std::string render_message(Decision decision, std::optional<double> price,
                           const CuePair& cues, Role speaker,
                           const MessageTable& table) {
  if (decision == Decision::Offer && !price.has_value()) {
    throw std::invalid_argument("render_message: offer without a price");
  }
  std::string tone_key;
  switch (cues.sentiment) {
    case Sentiment::Positive: tone_key = "tone.positive"; break;
    case Sentiment::Neutral: tone_key = "tone.neutral"; break;
    case Sentiment::Negative: tone_key = "tone.negative"; break;
  }
  auto tone_it = table.entries.find(tone_key);
  auto body_it = table.entries.find(message_key(decision, speaker, cues.strategic));
  if (tone_it == table.entries.end() || body_it == table.entries.end()) {
    throw std::runtime_error("message table: missing template for " +
                             message_key(decision, speaker, cues.strategic));
  }
  std::string body = body_it->second;
  auto pos = body.find("{price}");
  if (pos != std::string::npos) {
    body.replace(pos, 7, price.has_value() ? format_price(*price) : "");
  }
  return tone_it->second + body;
}

}  // namespace bargain
