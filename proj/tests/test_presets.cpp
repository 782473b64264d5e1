#include <cstdio>
#include <fstream>

#include "bargain/presets.hpp"
#include "doctest.h"

using namespace bargain;

namespace {

const EconomicPreset& econ_of(Family f) { return preset_for(f).econ; }

void check_triple(const StanceTriple& t, double c, double n, double a) {
  CHECK(t.conciliatory == c);
  CHECK(t.neutral == n);
  CHECK(t.aggressive == a);
}

}  // namespace

TEST_SUITE("presets") {

TEST_CASE("economic preset table matches the published values cell for cell") {
  SUBCASE("type-instrumental (candid, taciturn)") {
    for (Family f : {Family::Candid, Family::Taciturn}) {
      const auto& e = econ_of(f);
      check_triple(e.rho, 0.0, -0.25, -0.75);
      check_triple(e.xi, 0.40, 0.0, -0.50);
      check_triple(e.lambda2, 0.30, 0.50, 1.00);
      CHECK(e.price_noise == 0.01);
    }
  }
  SUBCASE("high-reactivity (expressive, strategic)") {
    for (Family f : {Family::Expressive, Family::Strategic}) {
      const auto& e = econ_of(f);
      check_triple(e.rho, 0.0, -0.75, -1.50);
      check_triple(e.xi, 0.40, 0.0, -0.75);
      check_triple(e.lambda2, 0.45, 0.90, 1.80);
      CHECK(e.price_noise == 0.03);
    }
  }
  SUBCASE("moderate-stochastic (stochastic)") {
    const auto& e = econ_of(Family::Stochastic);
    check_triple(e.rho, 0.0, -0.50, -1.10);
    check_triple(e.xi, 0.35, 0.0, -0.60);
    check_triple(e.lambda2, 0.35, 0.70, 1.40);
    CHECK(e.price_noise == 0.08);
  }
  SUBCASE("hardball (adversarial)") {
    const auto& e = econ_of(Family::Adversarial);
    check_triple(e.rho, -0.25, -1.25, -2.25);
    check_triple(e.xi, 0.0, -0.50, -1.20);
    check_triple(e.lambda2, 0.60, 1.40, 2.60);
    CHECK(e.price_noise == 0.01);
  }
}

TEST_CASE("concession-score scalars are shared across presets") {
  for (Family f : all_families()) {
    const auto& e = econ_of(f);
    CHECK(e.lambda0 == 0.12);
    CHECK(e.lambda1 == 0.28);
    CHECK(e.lambda3 == 0.10);
    CHECK(e.lambda4 == 0.10);
  }
}

TEST_CASE("stance priors") {
  for (Family f : all_families()) {
    const auto& e = econ_of(f);
    double total = e.stance_prior[0] + e.stance_prior[1] + e.stance_prior[2];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    if (f == Family::Adversarial) {
      CHECK(e.stance_prior[0] == doctest::Approx(0.05).epsilon(1e-12));
      CHECK(e.stance_prior[1] == doctest::Approx(0.15).epsilon(1e-12));
      CHECK(e.stance_prior[2] == doctest::Approx(0.80).epsilon(1e-12));
    } else {
      for (double w : e.stance_prior) {
        CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("cue presets per family") {
  CHECK(preset_for(Family::Candid).cue.channel == CueChannel::Accurate);
  CHECK(preset_for(Family::Taciturn).cue.channel == CueChannel::Uninformative);
  CHECK(preset_for(Family::Expressive).cue.channel == CueChannel::Accurate);
  CHECK(preset_for(Family::Strategic).cue.channel == CueChannel::Uninformative);
  CHECK(preset_for(Family::Stochastic).cue.channel == CueChannel::Noisy);
  CHECK(preset_for(Family::Adversarial).cue.channel == CueChannel::Pressuring);

  for (Family f : all_families()) {
    const auto& cue = preset_for(f).cue;
    if (f == Family::Stochastic) {
      CHECK(cue.sentiment_sigma == 2.0);
      CHECK(cue.strategic_temperature == 2.5);
    } else {
      CHECK(cue.sentiment_sigma == 0.75);
      CHECK(cue.strategic_temperature == 1.0);
    }
  }
}

TEST_CASE("reciprocity weights are nondecreasing in stance for every family") {
  for (Family f : all_families()) {
    const auto& e = econ_of(f);
    CHECK(e.lambda2.conciliatory <= e.lambda2.neutral);
    CHECK(e.lambda2.neutral <= e.lambda2.aggressive);
  }
}

TEST_CASE("stance triple lookup routes by stance") {
  StanceTriple t{1.0, 2.0, 3.0};
  CHECK(t.at(Stance::Conciliatory) == 1.0);
  CHECK(t.at(Stance::Neutral) == 2.0);
  CHECK(t.at(Stance::Aggressive) == 3.0);
}

TEST_CASE("table is versioned data and reloadable from a file") {
  CHECK(preset_table_version() >= 1);

  const char* path = "preset_roundtrip.json";
  {
    std::ofstream out(path);
    out << R"({
      "version": 7,
      "economic_presets": {
        "flat": {
          "rho": [0.0, 0.0, 0.0], "xi": [0.0, 0.0, 0.0],
          "lambda2": [0.1, 0.2, 0.3],
          "lambda0": 0.5, "lambda1": 0.0, "lambda3": 0.0, "lambda4": 0.0,
          "price_noise": 0.05, "stance_prior": [2.0, 1.0, 1.0]
        }
      },
      "families": {
        "candid": {"economic": "flat", "cue_channel": "accurate"},
        "taciturn": {"economic": "flat", "cue_channel": "uninformative"},
        "expressive": {"economic": "flat", "cue_channel": "accurate"},
        "strategic": {"economic": "flat", "cue_channel": "uninformative"},
        "stochastic": {"economic": "flat", "cue_channel": "noisy",
                       "sentiment_sigma": 1.5, "strategic_temperature": 2.0},
        "adversarial": {"economic": "flat", "cue_channel": "pressuring"}
      }
    })";
  }
  auto table = load_presets(path);
  std::remove(path);
  CHECK(table[0].econ.lambda0 == 0.5);
  CHECK(table[0].econ.stance_prior[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(table[4].cue.sentiment_sigma == 1.5);
  CHECK_THROWS(load_presets("no_such_preset_file.json"));
}

TEST_CASE("validation rejects broken presets") {
  FamilyPreset p = preset_for(Family::Candid);
  p.econ.lambda2 = {2.0, 1.0, 0.5};
  CHECK_THROWS(validate_preset(p));

  FamilyPreset q = preset_for(Family::Candid);
  q.econ.stance_prior = {0.5, 0.5, 0.5};
  CHECK_THROWS(validate_preset(q));
}

TEST_CASE("shared model defaults") {
  ModelParams m;
  CHECK(m.accept.favorability == 6.0);
  CHECK(m.accept.urgency == 1.0);
  CHECK(m.accept.deadline == 2.0);
  CHECK(m.walk.intercept == -4.5);
  CHECK(m.walk.shortfall == 30.0);
  CHECK(m.walk.clock == 1.5);
  CHECK(m.opening.harshness_min == 0.20);
  CHECK(m.opening.harshness_max == 0.80);
  CHECK(m.opening.urgency_discount == 0.30);
  CHECK(m.opening.aggressive_claim == 0.15);
  CHECK(m.opening.conciliatory_soften == 0.15);
  CHECK(m.opening.mod_min == 0.5);
  CHECK(m.opening.mod_max == 1.5);
  CHECK(m.opening.noise == 0.02);
  CHECK(m.cue.concede_threshold == 0.10);
  CHECK(m.cue.deadline_threshold == 0.80);
  CHECK(m.cue.concede_gain == 2.0);
  CHECK(m.cue.pressure_gain == 2.0);
  CHECK(m.cue.pressure_damp == 1.0);
  CHECK(m.cue.bias_concede == 1.0);
  CHECK(m.cue.bias_hold == 0.5);
  CHECK(m.cue.bias_pressure == 1.0);
  CHECK(m.cue.sentiment_separation == 1.0);
  CHECK(m.cue.sentiment_threshold == 0.5);
  CHECK(m.cue.sentiment_sigma == 0.75);
  CHECK(m.rigidity_threshold == 0.10);
  CHECK(m.concession_eps == 1e-6);
}

}  // TEST_SUITE
