#include <algorithm>
#include <cmath>

#include "bargain/metrics.hpp"
#include "bargain/presets.hpp"

namespace bargain {

namespace {

constexpr double kKappaEps = 1e-3;

double stance_hardness(Stance s) {
  switch (s) {
    case Stance::Conciliatory: return 0.0;
    case Stance::Neutral: return 0.5;
    case Stance::Aggressive: return 1.0;
  }
  return 0.5;
}

double cue_channel_difficulty(CueChannel c) {
  switch (c) {
    case CueChannel::Accurate: return 0.0;
    case CueChannel::Uninformative: return 0.5;
    case CueChannel::Noisy: return 0.75;
    case CueChannel::Pressuring: return 1.0;
  }
  return 0.0;
}

double opening_distance_score(double opening, double reservation, double zopa,
                              double range) {
  double eps = 1e-6 * range;
  return std::min(1.0, 2.0 * std::abs(opening - reservation) / (zopa + eps));
}

}  // namespace

DifficultyScore difficulty_overlap(const ScenarioSpec& spec,
                                   std::optional<double> opening_price,
                                   int k_min, int k_max) {
  DifficultyScore d;
  d.regime = spec.regime;
  d.opener = spec.opener;
  double delta = spec.zopa();
  double range = spec.bounds.range();
  d.d_zopa = 1.0 - delta / range;
  d.d_press = std::max(0.0, (spec.kappa_agent - spec.kappa_counterpart) /
                                (spec.kappa_agent + spec.kappa_counterpart +
                                 kKappaEps));
  d.d_stance = stance_hardness(spec.stance);

  double num = 0.45 * d.d_zopa + 0.25 * d.d_press + 0.20 * d.d_stance;
  double den = 0.45 + 0.25 + 0.20;
  if (k_max > k_min) {
    double deadline = 1.0 - static_cast<double>(spec.horizon - k_min) /
                                (k_max - k_min);
    d.d_deadline = deadline;
    num += 0.10 * deadline;
    den += 0.10;
  }
  d.score = num / den;

  if (opening_price.has_value()) {
    if (spec.opener == Opener::Counterpart) {
      d.anchor = opening_distance_score(*opening_price, spec.r_counterpart,
                                        delta, range);
      d.anchored_score = 0.80 * d.score + 0.20 * *d.anchor;
    } else {
      d.a_open = opening_distance_score(*opening_price, spec.r_agent, delta,
                                        range);
    }
  }
  return d;
}

DifficultyScore difficulty_nodeal(const ScenarioSpec& spec, Family family) {
  DifficultyScore d;
  d.regime = spec.regime;
  d.opener = spec.opener;
  double delta = spec.zopa();
  double scale = spec.bounds.range();
  d.d_gap = std::exp(delta / (scale + 1e-6 * scale));
  d.d_cue = cue_channel_difficulty(preset_for(family).cue.channel);
  switch (spec.stance) {
    case Stance::Conciliatory: d.d_surface = 1.0; break;
    case Stance::Neutral: d.d_surface = 0.5; break;
    case Stance::Aggressive: d.d_surface = 0.0; break;
  }
  d.score = 0.60 * d.d_gap + 0.25 * d.d_cue + 0.15 * d.d_surface;
  return d;
}

}  // namespace bargain
