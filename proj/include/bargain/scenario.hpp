#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bargain/types.hpp"

namespace bargain {

// Disjoint per-cell stream offsets. Streams 1..5 hold the scenario latents
// (stance, agent urgency, counterpart base urgency, counterpart shifted
// urgency, opening harshness); 6 is the geometry stream shared across sibling
// regimes; 7+ are reserved for episode-runtime consumers.
enum SeedOffset : std::uint64_t {
  kSeedStance = 1,
  kSeedAgentUrgency = 2,
  kSeedBaseUrgency = 3,
  kSeedShiftedUrgency = 4,
  kSeedHarshness = 5,
  kSeedGeometry = 6,
  kSeedKernel = 7,
  kSeedCues = 8,
  kSeedAgent = 9,
  kSeedBankroll = 10,
  kSeedCommerce = 11,
};

struct GeneratorConfig {
  double price_min = 0.0;
  double price_max = 100.0;
  int horizon = 10;
  double zopa_min = 5.0;   // feasible surplus width range
  double zopa_max = 40.0;
  double gap_min = 5.0;    // infeasibility gap range
  double gap_max = 40.0;
  double urgency_base_a = 2.0;
  double urgency_base_b = 2.0;
  double urgency_shift_a = 3.0;
  double urgency_shift_b = 2.0;
  int episodes_per_cell = 25;
  double reservation_margin = 2.0;  // keep reservations this far inside bounds
  double harshness_min = 0.20;
  double harshness_max = 0.80;

  // Data-grounded wedge and gap hyperparameters.
  double wedge_scale_seller = 0.5;
  double wedge_scale_buyer = 0.5;
  double wedge_noise_seller = 1.0;
  double wedge_noise_buyer = 1.0;
  double nodeal_gap_min = 0.5;  // in units of the product market sigma
  double nodeal_gap_max = 2.0;
  double min_surplus = 0.0;     // optional minimum-surplus stratum
  double sigma_floor = 0.01;    // positive floor for the market sigma

  void validate() const;  // throws std::invalid_argument on violation
};

GeneratorConfig generator_config_from_json(const std::string& json_text);
GeneratorConfig load_generator_config(const std::string& path);

struct CellKey {
  int base = 0;
  Family family = Family::Candid;
  Role agent_role = Role::Buyer;
  Opener opener = Opener::Counterpart;
  int episode = 0;
};

// Cell seed layout: base*1e7 + family*1e5 + role*1e4 + opener*1e3 + episode*10.
// The middle digits admit any single-digit index, so stress sweeps may key the
// role slot differently; the shipped harness keys it on the agent role and
// keeps every regime on the same cell so sibling regimes share all latents.
std::uint64_t cell_seed(int base, int family_idx, int role_idx, int opener_idx,
                        int episode_idx);
std::uint64_t cell_seed(const CellKey& key);

struct ScenarioSpec {
  Regime regime = Regime::Overlap;
  Family family = Family::Candid;
  Role agent_role = Role::Buyer;
  Opener opener = Opener::Counterpart;
  double r_agent = 0.0;
  double r_counterpart = 0.0;
  double kappa_agent = 0.5;
  double kappa_counterpart = 0.5;
  Stance stance = Stance::Neutral;
  double d0 = 0.5;  // opening harshness
  Bounds bounds;
  int horizon = 10;
  int episode = 0;

  // Audit fields.
  std::uint64_t cell = 0;
  std::array<std::uint64_t, 5> latent_seeds{};
  double u_geometry = 0.0;         // shared geometry percentile
  double urgency_mean_shift = 0.0; // realized counterpart urgency mean shift

  // Data-grounded context (empty for synthetic scenarios).
  std::string product_id;
  std::string category;
  std::string title;

  Role counterpart_role() const { return other_role(agent_role); }
  double r_buyer() const {
    return agent_role == Role::Buyer ? r_agent : r_counterpart;
  }
  double r_seller() const {
    return agent_role == Role::Seller ? r_agent : r_counterpart;
  }
  double zopa() const { return r_buyer() - r_seller(); }
  bool feasible() const { return zopa() > 0.0; }
  LatentType counterpart_type() const {
    return LatentType{r_counterpart, kappa_counterpart, stance};
  }
};

ScenarioSpec sample_overlap(const GeneratorConfig& cfg, const CellKey& key);
ScenarioSpec sample_urgency_shift(const GeneratorConfig& cfg, const CellKey& key);
ScenarioSpec sample_nodeal(const GeneratorConfig& cfg, const CellKey& key);
ScenarioSpec sample_scenario(const GeneratorConfig& cfg, const CellKey& key,
                             Regime regime);

struct CatalogEntry {
  std::string id;
  std::string category;
  std::string title;
  std::string description;
  double p_ref = 0.0;
  double p_lo = 0.0;
  double p_hi = 0.0;
  double cat_min = 0.0;  // category-level public bounds
  double cat_max = 0.0;
};

struct CatalogLoad {
  std::vector<CatalogEntry> entries;
  int rejected_rows = 0;
};

// Reads a catalog from CSV (header row required) or JSON-lines, keyed on the
// file extension. Rows violating the price ordering are dropped and counted;
// structurally unparseable rows throw with the offending line number.
CatalogLoad load_catalog(const std::string& path);

ScenarioSpec sample_data_grounded(const std::vector<CatalogEntry>& catalog,
                                  const GeneratorConfig& cfg,
                                  const CellKey& key, Regime regime);

std::string scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const std::string& text);

}  // namespace bargain
