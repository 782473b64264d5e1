#include "bargain/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bargain/presets.hpp"
#include "bargain/rng.hpp"
#include "json.hpp"

namespace bargain {

namespace {

using nlohmann::json;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

Stance sample_stance(Family family, std::uint64_t seed) {
  const auto& prior = preset_for(family).econ.stance_prior;
  Rng rng(seed);
  std::vector<double> w(prior.begin(), prior.end());
  return all_stances()[rng.categorical(w)];
}

// Maps the shared midpoint percentile onto the interval keeping both
// reservations at least `margin` inside the public bounds.
double midpoint_for(const GeneratorConfig& cfg, double half_width, double u) {
  double lo = cfg.price_min + cfg.reservation_margin + half_width;
  double hi = cfg.price_max - cfg.reservation_margin - half_width;
  if (lo > hi) {
    throw std::invalid_argument(
        "generator config leaves no room for the reservation midpoint");
  }
  return lo + u * (hi - lo);
}

struct CellLatents {
  std::uint64_t cell = 0;
  std::array<std::uint64_t, 5> seeds{};
  Stance stance = Stance::Neutral;
  double kappa_agent = 0.0;
  double kappa_base = 0.0;
  double kappa_shifted = 0.0;
  double d0 = 0.0;
  double u_geometry = 0.0;
};

// Draws the five regime-independent latents from their disjoint streams.
// Geometry percentiles are drawn separately by the caller from the shared
// geometry stream so sibling regimes agree on them.
CellLatents draw_latents(const GeneratorConfig& cfg, const CellKey& key) {
  CellLatents lat;
  lat.cell = cell_seed(key);
  for (int i = 0; i < 5; ++i) lat.seeds[i] = lat.cell + 1 + i;
  lat.stance = sample_stance(key.family, lat.cell + kSeedStance);
  lat.kappa_agent =
      Rng(lat.cell + kSeedAgentUrgency).beta(cfg.urgency_base_a, cfg.urgency_base_b);
  lat.kappa_base =
      Rng(lat.cell + kSeedBaseUrgency).beta(cfg.urgency_base_a, cfg.urgency_base_b);
  lat.kappa_shifted = Rng(lat.cell + kSeedShiftedUrgency)
                          .beta(cfg.urgency_shift_a, cfg.urgency_shift_b);
  lat.d0 = Rng(lat.cell + kSeedHarshness)
               .uniform(cfg.harshness_min, cfg.harshness_max);
  return lat;
}

double shifted_mean_delta(const GeneratorConfig& cfg) {
  double base = cfg.urgency_base_a / (cfg.urgency_base_a + cfg.urgency_base_b);
  double shifted =
      cfg.urgency_shift_a / (cfg.urgency_shift_a + cfg.urgency_shift_b);
  return shifted - base;
}

ScenarioSpec assemble(const GeneratorConfig& cfg, const CellKey& key,
                      Regime regime, const CellLatents& lat, double r_buyer,
                      double r_seller) {
  ScenarioSpec s;
  s.regime = regime;
  s.family = key.family;
  s.agent_role = key.agent_role;
  s.opener = key.opener;
  s.bounds = Bounds{cfg.price_min, cfg.price_max};
  s.horizon = cfg.horizon;
  s.episode = key.episode;
  s.cell = lat.cell;
  s.latent_seeds = lat.seeds;
  s.u_geometry = lat.u_geometry;
  s.stance = lat.stance;
  s.kappa_agent = lat.kappa_agent;
  s.kappa_counterpart =
      regime == Regime::UrgencyShift ? lat.kappa_shifted : lat.kappa_base;
  s.urgency_mean_shift =
      regime == Regime::UrgencyShift ? shifted_mean_delta(cfg) : 0.0;
  s.d0 = lat.d0;
  if (key.agent_role == Role::Buyer) {
    s.r_agent = r_buyer;
    s.r_counterpart = r_seller;
  } else {
    s.r_agent = r_seller;
    s.r_counterpart = r_buyer;
  }
  return s;
}

ScenarioSpec sample_synthetic(const GeneratorConfig& cfg, const CellKey& key,
                              Regime regime) {
  cfg.validate();
  CellLatents lat = draw_latents(cfg, key);
  Rng geom(lat.cell + kSeedGeometry);
  lat.u_geometry = geom.uniform();
  double u_mid = geom.uniform();
  double r_buyer, r_seller;
  if (regime == Regime::NoDeal) {
    double q = cfg.gap_min + lat.u_geometry * (cfg.gap_max - cfg.gap_min);
    double m = midpoint_for(cfg, q / 2.0, u_mid);
    r_buyer = m - q / 2.0;
    r_seller = m + q / 2.0;
  } else {
    double z = cfg.zopa_min + lat.u_geometry * (cfg.zopa_max - cfg.zopa_min);
    double m = midpoint_for(cfg, z / 2.0, u_mid);
    r_buyer = m + z / 2.0;
    r_seller = m - z / 2.0;
  }
  return assemble(cfg, key, regime, lat, r_buyer, r_seller);
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

bool entry_valid(const CatalogEntry& e) {
  return e.p_lo <= e.p_ref && e.p_ref <= e.p_hi && e.cat_min < e.p_ref &&
         e.p_ref < e.cat_max;
}

CatalogLoad load_catalog_csv(std::istream& in) {
  CatalogLoad out;
  std::string line;
  if (!std::getline(in, line)) return out;
  auto header = split_csv_row(line);
  auto col = [&](const char* name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    throw std::runtime_error(std::string("catalog missing column: ") + name);
  };
  int c_id = col("id"), c_cat = col("category"), c_title = col("title");
  int c_desc = col("description"), c_ref = col("p_ref"), c_lo = col("p_lo");
  int c_hi = col("p_hi"), c_min = col("cat_min"), c_max = col("cat_max");
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto f = split_csv_row(line);
    if (static_cast<int>(f.size()) <= c_max) {
      throw std::runtime_error("catalog row " + std::to_string(row) +
                               ": too few fields");
    }
    CatalogEntry e;
    try {
      e.id = f[c_id];
      e.category = f[c_cat];
      e.title = f[c_title];
      e.description = f[c_desc];
      e.p_ref = std::stod(f[c_ref]);
      e.p_lo = std::stod(f[c_lo]);
      e.p_hi = std::stod(f[c_hi]);
      e.cat_min = std::stod(f[c_min]);
      e.cat_max = std::stod(f[c_max]);
    } catch (const std::exception&) {
      throw std::runtime_error("catalog row " + std::to_string(row) +
                               ": malformed numeric field");
    }
    if (entry_valid(e)) {
      out.entries.push_back(std::move(e));
    } else {
      ++out.rejected_rows;
    }
  }
  return out;
}

CatalogLoad load_catalog_jsonl(std::istream& in) {
  CatalogLoad out;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const std::exception&) {
      throw std::runtime_error("catalog row " + std::to_string(row) +
                               ": malformed JSON");
    }
    CatalogEntry e;
    try {
      e.id = j.at("id").get<std::string>();
      e.category = j.at("category").get<std::string>();
      e.title = j.value("title", std::string());
      e.description = j.value("description", std::string());
      e.p_ref = j.at("p_ref").get<double>();
      e.p_lo = j.at("p_lo").get<double>();
      e.p_hi = j.at("p_hi").get<double>();
      e.cat_min = j.at("cat_min").get<double>();
      e.cat_max = j.at("cat_max").get<double>();
    } catch (const std::exception&) {
      throw std::runtime_error("catalog row " + std::to_string(row) +
                               ": missing or mistyped field");
    }
    if (entry_valid(e)) {
      out.entries.push_back(std::move(e));
    } else {
      ++out.rejected_rows;
    }
  }
  return out;
}

}  // namespace

void GeneratorConfig::validate() const {
  require(price_min < price_max, "price_min must be below price_max");
  require(horizon >= 2, "horizon must be at least 2");
  require(zopa_min > 0.0 && zopa_min <= zopa_max, "bad surplus range");
  require(gap_min > 0.0 && gap_min <= gap_max, "bad infeasibility gap range");
  require(urgency_base_a > 0.0 && urgency_base_b > 0.0, "bad base urgency law");
  require(urgency_shift_a > 0.0 && urgency_shift_b > 0.0,
          "bad shifted urgency law");
  require(episodes_per_cell > 0, "episodes_per_cell must be positive");
  require(harshness_min < harshness_max, "bad opening-harshness range");
  require(sigma_floor > 0.0, "sigma_floor must be positive");
}

GeneratorConfig generator_config_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  GeneratorConfig c;
  c.price_min = j.value("price_min", c.price_min);
  c.price_max = j.value("price_max", c.price_max);
  c.horizon = j.value("horizon", c.horizon);
  c.zopa_min = j.value("zopa_min", c.zopa_min);
  c.zopa_max = j.value("zopa_max", c.zopa_max);
  c.gap_min = j.value("gap_min", c.gap_min);
  c.gap_max = j.value("gap_max", c.gap_max);
  c.urgency_base_a = j.value("urgency_base_a", c.urgency_base_a);
  c.urgency_base_b = j.value("urgency_base_b", c.urgency_base_b);
  c.urgency_shift_a = j.value("urgency_shift_a", c.urgency_shift_a);
  c.urgency_shift_b = j.value("urgency_shift_b", c.urgency_shift_b);
  c.episodes_per_cell = j.value("episodes_per_cell", c.episodes_per_cell);
  c.reservation_margin = j.value("reservation_margin", c.reservation_margin);
  c.harshness_min = j.value("harshness_min", c.harshness_min);
  c.harshness_max = j.value("harshness_max", c.harshness_max);
  c.wedge_scale_seller = j.value("wedge_scale_seller", c.wedge_scale_seller);
  c.wedge_scale_buyer = j.value("wedge_scale_buyer", c.wedge_scale_buyer);
  c.wedge_noise_seller = j.value("wedge_noise_seller", c.wedge_noise_seller);
  c.wedge_noise_buyer = j.value("wedge_noise_buyer", c.wedge_noise_buyer);
  c.nodeal_gap_min = j.value("nodeal_gap_min", c.nodeal_gap_min);
  c.nodeal_gap_max = j.value("nodeal_gap_max", c.nodeal_gap_max);
  c.min_surplus = j.value("min_surplus", c.min_surplus);
  c.sigma_floor = j.value("sigma_floor", c.sigma_floor);
  c.validate();
  return c;
}

GeneratorConfig load_generator_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open generator config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return generator_config_from_json(buf.str());
}

std::uint64_t cell_seed(int base, int family_idx, int role_idx, int opener_idx,
                        int episode_idx) {
  require(base >= 0, "negative base seed");
  require(family_idx >= 0 && family_idx < 100, "family index out of range");
  require(role_idx >= 0 && role_idx < 10, "role index out of range");
  require(opener_idx >= 0 && opener_idx < 10, "opener index out of range");
  require(episode_idx >= 0 && episode_idx < 100, "episode index out of range");
  return static_cast<std::uint64_t>(base) * 10000000ULL +
         static_cast<std::uint64_t>(family_idx) * 100000ULL +
         static_cast<std::uint64_t>(role_idx) * 10000ULL +
         static_cast<std::uint64_t>(opener_idx) * 1000ULL +
         static_cast<std::uint64_t>(episode_idx) * 10ULL;
}

std::uint64_t cell_seed(const CellKey& key) {
  return cell_seed(key.base, static_cast<int>(key.family),
                   static_cast<int>(key.agent_role),
                   static_cast<int>(key.opener), key.episode);
}

ScenarioSpec sample_overlap(const GeneratorConfig& cfg, const CellKey& key) {
  return sample_synthetic(cfg, key, Regime::Overlap);
}

ScenarioSpec sample_urgency_shift(const GeneratorConfig& cfg,
                                  const CellKey& key) {
  return sample_synthetic(cfg, key, Regime::UrgencyShift);
}

ScenarioSpec sample_nodeal(const GeneratorConfig& cfg, const CellKey& key) {
  return sample_synthetic(cfg, key, Regime::NoDeal);
}

ScenarioSpec sample_scenario(const GeneratorConfig& cfg, const CellKey& key,
                             Regime regime) {
  return sample_synthetic(cfg, key, regime);
}

CatalogLoad load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog: " + path);
  auto dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "csv") return load_catalog_csv(in);
  return load_catalog_jsonl(in);
}

ScenarioSpec sample_data_grounded(const std::vector<CatalogEntry>& catalog,
                                  const GeneratorConfig& cfg,
                                  const CellKey& key, Regime regime) {
  cfg.validate();
  if (catalog.empty()) {
    throw std::runtime_error("data-grounded sampling needs a non-empty catalog");
  }
  CellLatents lat = draw_latents(cfg, key);
  Rng geom(lat.cell + kSeedGeometry);
  lat.u_geometry = geom.uniform();

  const int max_tries = 1000;
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    const CatalogEntry& item = catalog[geom.uniform_index(catalog.size())];
    double sigma_mkt = (item.p_hi - item.p_lo) / 4.0;
    if (sigma_mkt < cfg.sigma_floor) sigma_mkt = cfg.sigma_floor;
    double r_buyer, r_seller;
    if (regime == Regime::NoDeal) {
      double cap =
          2.0 * std::min(item.cat_max - item.p_ref, item.p_ref - item.cat_min);
      double lo = cfg.nodeal_gap_min * sigma_mkt;
      double hi = std::min(cfg.nodeal_gap_max * sigma_mkt, cap);
      if (!(lo > 0.0) || lo > hi) continue;  // no feasible gap; resample
      double delta = geom.uniform(lo, hi);
      r_seller = item.p_ref + delta / 2.0;
      r_buyer = item.p_ref - delta / 2.0;
    } else {
      double mu_s = cfg.wedge_scale_seller * (item.p_ref - item.p_lo);
      double mu_b = cfg.wedge_scale_buyer * (item.p_hi - item.p_ref);
      double wedge_s = geom.truncated_normal(
          mu_s, cfg.wedge_noise_seller * sigma_mkt, 0.0,
          item.p_ref - item.cat_min);
      double wedge_b = geom.truncated_normal(
          mu_b, cfg.wedge_noise_buyer * sigma_mkt, 0.0,
          item.cat_max - item.p_ref);
      r_seller = item.p_ref - wedge_s;
      r_buyer = item.p_ref + wedge_b;
      if (r_buyer - r_seller < cfg.min_surplus) continue;
    }
    GeneratorConfig scoped = cfg;
    scoped.price_min = item.cat_min;
    scoped.price_max = item.cat_max;
    ScenarioSpec s = assemble(scoped, key, regime, lat, r_buyer, r_seller);
    s.product_id = item.id;
    s.category = item.category;
    s.title = item.title;
    return s;
  }
  throw std::runtime_error(
      "data-grounded sampling failed to find a feasible template");
}

std::string scenario_to_json(const ScenarioSpec& s) {
  json j;
  j["regime"] = to_string(s.regime);
  j["family"] = to_string(s.family);
  j["agent_role"] = to_string(s.agent_role);
  j["opener"] = to_string(s.opener);
  j["r_agent"] = s.r_agent;
  j["r_counterpart"] = s.r_counterpart;
  j["kappa_agent"] = s.kappa_agent;
  j["kappa_counterpart"] = s.kappa_counterpart;
  j["stance"] = to_string(s.stance);
  j["d0"] = s.d0;
  j["price_min"] = s.bounds.p_min;
  j["price_max"] = s.bounds.p_max;
  j["horizon"] = s.horizon;
  j["episode"] = s.episode;
  j["cell"] = s.cell;
  j["latent_seeds"] = s.latent_seeds;
  j["u_geometry"] = s.u_geometry;
  j["urgency_mean_shift"] = s.urgency_mean_shift;
  if (!s.product_id.empty()) {
    j["product_id"] = s.product_id;
    j["category"] = s.category;
    j["title"] = s.title;
  }
  return j.dump();
}

ScenarioSpec scenario_from_json(const std::string& text) {
  json j = json::parse(text);
  ScenarioSpec s;
  s.regime = regime_from_string(j.at("regime").get<std::string>());
  s.family = family_from_string(j.at("family").get<std::string>());
  s.agent_role = role_from_string(j.at("agent_role").get<std::string>());
  s.opener = opener_from_string(j.at("opener").get<std::string>());
  s.r_agent = j.at("r_agent").get<double>();
  s.r_counterpart = j.at("r_counterpart").get<double>();
  s.kappa_agent = j.at("kappa_agent").get<double>();
  s.kappa_counterpart = j.at("kappa_counterpart").get<double>();
  s.stance = stance_from_string(j.at("stance").get<std::string>());
  s.d0 = j.at("d0").get<double>();
  s.bounds.p_min = j.at("price_min").get<double>();
  s.bounds.p_max = j.at("price_max").get<double>();
  s.horizon = j.at("horizon").get<int>();
  s.episode = j.value("episode", 0);
  s.cell = j.value("cell", 0ULL);
  if (j.contains("latent_seeds")) {
    auto arr = j.at("latent_seeds");
    for (std::size_t i = 0; i < 5 && i < arr.size(); ++i) {
      s.latent_seeds[i] = arr[i].get<std::uint64_t>();
    }
  }
  s.u_geometry = j.value("u_geometry", 0.0);
  s.urgency_mean_shift = j.value("urgency_mean_shift", 0.0);
  s.product_id = j.value("product_id", std::string());
  s.category = j.value("category", std::string());
  s.title = j.value("title", std::string());
  return s;
}

}  // namespace bargain
