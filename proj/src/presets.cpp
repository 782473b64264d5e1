#include "bargain/presets.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bargain {

namespace {

using nlohmann::json;

// Versioned preset table. Stance-indexed vectors are ordered
// conciliatory / neutral / aggressive; stance priors are weights and are
// normalized at load time.
const char* kDefaultPresetJson = R"JSON({
  "version": 1,
  "economic_presets": {
    "type_instrumental": {
      "rho": [0.0, -0.25, -0.75],
      "xi": [0.40, 0.0, -0.50],
      "lambda2": [0.30, 0.50, 1.00],
      "lambda0": 0.12, "lambda1": 0.28, "lambda3": 0.10, "lambda4": 0.10,
      "price_noise": 0.01,
      "stance_prior": [1.0, 1.0, 1.0]
    },
    "high_reactivity": {
      "rho": [0.0, -0.75, -1.50],
      "xi": [0.40, 0.0, -0.75],
      "lambda2": [0.45, 0.90, 1.80],
      "lambda0": 0.12, "lambda1": 0.28, "lambda3": 0.10, "lambda4": 0.10,
      "price_noise": 0.03,
      "stance_prior": [1.0, 1.0, 1.0]
    },
    "moderate_stochastic": {
      "rho": [0.0, -0.50, -1.10],
      "xi": [0.35, 0.0, -0.60],
      "lambda2": [0.35, 0.70, 1.40],
      "lambda0": 0.12, "lambda1": 0.28, "lambda3": 0.10, "lambda4": 0.10,
      "price_noise": 0.08,
      "stance_prior": [1.0, 1.0, 1.0]
    },
    "hardball": {
      "rho": [-0.25, -1.25, -2.25],
      "xi": [0.0, -0.50, -1.20],
      "lambda2": [0.60, 1.40, 2.60],
      "lambda0": 0.12, "lambda1": 0.28, "lambda3": 0.10, "lambda4": 0.10,
      "price_noise": 0.01,
      "stance_prior": [0.05, 0.15, 0.80]
    }
  },
  "families": {
    "candid":      {"economic": "type_instrumental", "cue_channel": "accurate"},
    "taciturn":    {"economic": "type_instrumental", "cue_channel": "uninformative"},
    "expressive":  {"economic": "high_reactivity",   "cue_channel": "accurate"},
    "strategic":   {"economic": "high_reactivity",   "cue_channel": "uninformative"},
    "stochastic":  {"economic": "moderate_stochastic", "cue_channel": "noisy",
                    "sentiment_sigma": 2.0, "strategic_temperature": 2.5},
    "adversarial": {"economic": "hardball", "cue_channel": "pressuring"}
  }
})JSON";

StanceTriple triple_from(const json& arr) {
  if (!arr.is_array() || arr.size() != 3) {
    throw std::invalid_argument("stance-indexed value must be a 3-array");
  }
  StanceTriple t;
  t.conciliatory = arr[0].get<double>();
  t.neutral = arr[1].get<double>();
  t.aggressive = arr[2].get<double>();
  return t;
}

CueChannel channel_from(const std::string& s) {
  if (s == "accurate") return CueChannel::Accurate;
  if (s == "uninformative") return CueChannel::Uninformative;
  if (s == "noisy") return CueChannel::Noisy;
  if (s == "pressuring") return CueChannel::Pressuring;
  throw std::invalid_argument("unknown cue channel: " + s);
}

std::array<FamilyPreset, 6> parse_table(const json& doc) {
  if (!doc.contains("economic_presets") || !doc.contains("families")) {
    throw std::invalid_argument("preset table missing required sections");
  }

  std::array<FamilyPreset, 6> out;
  auto families = all_families();
  for (std::size_t i = 0; i < families.size(); ++i) {
    Family f = families[i];
    const json& fam = doc.at("families").at(to_string(f));
    const std::string econ_name = fam.at("economic").get<std::string>();
    const json& econ = doc.at("economic_presets").at(econ_name);

    FamilyPreset p;
    p.family = f;
    p.econ.name = econ_name;
    p.econ.rho = triple_from(econ.at("rho"));
    p.econ.xi = triple_from(econ.at("xi"));
    p.econ.lambda2 = triple_from(econ.at("lambda2"));
    p.econ.lambda0 = econ.at("lambda0").get<double>();
    p.econ.lambda1 = econ.at("lambda1").get<double>();
    p.econ.lambda3 = econ.at("lambda3").get<double>();
    p.econ.lambda4 = econ.at("lambda4").get<double>();
    p.econ.price_noise = econ.at("price_noise").get<double>();

    const json& prior = econ.at("stance_prior");
    double total = 0.0;
    for (int j = 0; j < 3; ++j) total += prior[j].get<double>();
    if (!(total > 0.0)) throw std::invalid_argument("stance prior has no mass");
    for (int j = 0; j < 3; ++j) {
      p.econ.stance_prior[j] = prior[j].get<double>() / total;
    }

    p.cue.channel = channel_from(fam.at("cue_channel").get<std::string>());
    p.cue.sentiment_sigma = fam.value("sentiment_sigma", 0.75);
    p.cue.strategic_temperature = fam.value("strategic_temperature", 1.0);

    validate_preset(p);
    out[i] = p;
  }
  return out;
}

}  // namespace

double StanceTriple::at(Stance s) const {
  switch (s) {
    case Stance::Conciliatory: return conciliatory;
    case Stance::Neutral: return neutral;
    case Stance::Aggressive: return aggressive;
  }
  return neutral;
}

double EconomicPreset::stance_prior_at(Stance s) const {
  return stance_prior[static_cast<std::size_t>(s)];
}

const std::array<FamilyPreset, 6>& default_presets() {
  static const std::array<FamilyPreset, 6> table =
      parse_table(json::parse(kDefaultPresetJson));
  return table;
}

const FamilyPreset& preset_for(Family f) {
  return default_presets()[static_cast<std::size_t>(f)];
}

std::array<FamilyPreset, 6> load_presets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open preset file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_presets(buf.str());
}

std::array<FamilyPreset, 6> parse_presets(const std::string& json_text) {
  return parse_table(json::parse(json_text));
}

int preset_table_version() {
  static const int v = json::parse(kDefaultPresetJson).value("version", 0);
  return v;
}

void validate_preset(const FamilyPreset& p) {
  if (!(p.econ.lambda2.conciliatory <= p.econ.lambda2.neutral &&
        p.econ.lambda2.neutral <= p.econ.lambda2.aggressive)) {
    throw std::invalid_argument("reciprocity weights must be nondecreasing "
                                "across conciliatory/neutral/aggressive");
  }
  double total = 0.0;
  for (double w : p.econ.stance_prior) {
    if (w < 0.0) throw std::invalid_argument("negative stance prior mass");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("stance prior does not sum to 1");
  }
  if (p.econ.price_noise <= 0.0) {
    throw std::invalid_argument("price noise scale must be positive");
  }
  if (p.cue.sentiment_sigma <= 0.0 || p.cue.strategic_temperature <= 0.0) {
    throw std::invalid_argument("cue noise parameters must be positive");
  }
}

}  // namespace bargain
