#pragma once

#include <array>
#include <string>

#include "bargain/types.hpp"

namespace bargain {

// One real per stance, ordered conciliatory / neutral / aggressive.
struct StanceTriple {
  double conciliatory = 0.0;
  double neutral = 0.0;
  double aggressive = 0.0;

  double at(Stance s) const;
};

// Stance-dependent economic response coefficients plus the concession-score
// scalars and price-noise scale shared by every family using the preset.
struct EconomicPreset {
  std::string name;
  StanceTriple rho;      // concession-speed weight in the acceptance score
  StanceTriple xi;       // rigidity weight in the acceptance score
  StanceTriple lambda2;  // reciprocity weight in the concession score
  double lambda0 = 0.12;
  double lambda1 = 0.28;
  double lambda3 = 0.10;
  double lambda4 = 0.10;
  double price_noise = 0.01;  // range-normalized counter-offer noise scale
  std::array<double, 3> stance_prior{1.0 / 3, 1.0 / 3, 1.0 / 3};

  double stance_prior_at(Stance s) const;
};

enum class CueChannel { Accurate, Uninformative, Noisy, Pressuring };

struct CuePreset {
  CueChannel channel = CueChannel::Accurate;
  double sentiment_sigma = 0.75;
  double strategic_temperature = 1.0;
};

struct FamilyPreset {
  Family family = Family::Candid;
  EconomicPreset econ;
  CuePreset cue;
};

// Scalar model defaults shared across families.
struct AcceptParams {
  double favorability = 6.0;  // weight on range-normalized offer favorability
  double urgency = 1.0;       // weight on counterpart urgency
  double deadline = 2.0;      // weight on the concave remaining-time clock
};

struct WalkParams {
  double intercept = -4.5;
  double shortfall = 30.0;  // weight on the positive part of -favorability
  double clock = 1.5;       // weight on the post-grace walk-away clock
};

struct OpeningParams {
  double harshness_min = 0.20;
  double harshness_max = 0.80;
  double urgency_discount = 0.30;     // urgent counterparts open softer
  double aggressive_claim = 0.15;     // aggressive stance opens harder
  double conciliatory_soften = 0.15;  // conciliatory stance opens softer
  double mod_min = 0.5;               // clip range of the modulation factor
  double mod_max = 1.5;
  double noise = 0.02;  // range-normalized opening-offer noise scale
};

struct CueParams {
  double concede_threshold = 0.10;  // visible-concession threshold
  double deadline_threshold = 0.80;
  double concede_gain = 2.0;
  double pressure_gain = 2.0;
  double pressure_damp = 1.0;  // visible concession suppresses pressure
  double bias_concede = 1.0;
  double bias_hold = 0.5;
  double bias_pressure = 1.0;
  double sentiment_separation = 1.0;  // latent mean for conciliatory stance
  double sentiment_threshold = 0.5;
  double sentiment_sigma = 0.75;
};

struct ModelParams {
  AcceptParams accept;
  WalkParams walk;
  OpeningParams opening;
  CueParams cue;
  double rigidity_threshold = 0.10;
  double concession_eps = 1e-6;  // stabilizer in the visible-concession ratio
};

// Default six-family preset table. The table is parsed from an embedded
// versioned JSON document; load_presets reads the same schema from a file so
// stress variants can be swapped in without recompiling.
const std::array<FamilyPreset, 6>& default_presets();
const FamilyPreset& preset_for(Family f);
std::array<FamilyPreset, 6> load_presets(const std::string& path);
std::array<FamilyPreset, 6> parse_presets(const std::string& json_text);
int preset_table_version();

// Throws std::invalid_argument when a preset violates its structural
// constraints (reciprocity ordering across stances, prior normalization).
void validate_preset(const FamilyPreset& p);

}  // namespace bargain
