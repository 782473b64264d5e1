#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "bargain/agents.hpp"
#include "bargain/belief.hpp"
#include "bargain/oracle.hpp"
#include "bargain/wire.hpp"
#include "doctest.h"
#include "json.hpp"
#include "planner_reference.h"

using namespace bargain;
namespace ref = planner_reference;

namespace {

ScenarioSpec crafted_spec(Role agent_role, double r_agent, double r_cp,
                          Opener opener, Family family = Family::Candid,
                          int horizon = 10) {
  ScenarioSpec s;
  s.regime = Regime::Overlap;
  s.family = family;
  s.agent_role = agent_role;
  s.opener = opener;
  s.r_agent = r_agent;
  s.r_counterpart = r_cp;
  s.kappa_agent = 0.5;
  s.kappa_counterpart = 0.5;
  s.stance = Stance::Neutral;
  s.d0 = 0.5;
  s.bounds = Bounds{0.0, 100.0};
  s.horizon = horizon;
  s.cell = 661000;
  return s;
}

PlannerConfig toy_config(int levels = 5, int bins = 5, int lookahead = -1) {
  PlannerConfig cfg;
  cfg.price_levels = levels;
  cfg.continuation_bins = bins;
  cfg.quadrature_nodes = 5;
  cfg.prune_threshold = 0.0;
  cfg.lookahead = lookahead;
  cfg.belief.reservation_levels = 2;
  cfg.belief.urgency_levels = {0.5};
  cfg.belief.quadrature_nodes = 5;
  return cfg;
}

TypeGrid two_types(double r1, double r2, Stance s1 = Stance::Neutral,
                   Stance s2 = Stance::Neutral, double w1 = 0.5) {
  TypeGrid grid;
  grid.types.push_back(LatentType{r1, 0.5, s1});
  grid.types.push_back(LatentType{r2, 0.5, s2});
  grid.prior = {w1, 1.0 - w1};
  return grid;
}

std::vector<ScenarioSpec> regime_sweep(Regime regime, int episodes_per_cell) {
  GeneratorConfig cfg;
  std::vector<ScenarioSpec> specs;
  for (Family f : all_families()) {
    for (Role r : {Role::Buyer, Role::Seller}) {
      for (Opener o : {Opener::Agent, Opener::Counterpart}) {
        for (int e = 0; e < episodes_per_cell; ++e) {
          CellKey key;
          key.family = f;
          key.agent_role = r;
          key.opener = o;
          key.episode = e;
          specs.push_back(sample_scenario(cfg, key, regime));
        }
      }
    }
  }
  return specs;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("configuration invariants") {
  ScenarioSpec spec = crafted_spec(Role::Seller, 30.0, 70.0, Opener::Agent);
  PlannerConfig cfg = toy_config();
  CHECK_NOTHROW(Planner(spec, cfg));

  PlannerConfig bad = cfg;
  bad.price_levels = 2;
  CHECK_THROWS_AS(Planner(spec, bad), std::invalid_argument);
  bad = cfg;
  bad.continuation_bins = 0;
  CHECK_THROWS_AS(Planner(spec, bad), std::invalid_argument);
  bad = cfg;
  bad.quadrature_nodes = 4;
  CHECK_THROWS_AS(Planner(spec, bad), std::invalid_argument);
  bad = cfg;
  bad.quadrature_nodes = 1;
  CHECK_THROWS_AS(Planner(spec, bad), std::invalid_argument);
  bad = cfg;
  bad.prune_threshold = -1e-9;
  CHECK_THROWS_AS(Planner(spec, bad), std::invalid_argument);
  bad = cfg;
  bad.prune_threshold = 2e-6;
  CHECK_THROWS_AS(Planner(spec, bad), std::invalid_argument);

  ScenarioSpec zero = spec;
  zero.horizon = 0;
  CHECK_THROWS_AS(Planner(zero, cfg), std::invalid_argument);

  TypeGrid mismatched = two_types(40.0, 60.0);
  mismatched.prior.pop_back();
  CHECK_THROWS_AS(Planner(spec, cfg, mismatched), std::invalid_argument);
}

TEST_CASE("accept values are exact utilities") {
  ScenarioSpec spec = crafted_spec(Role::Buyer, 60.0, 20.0, Opener::Counterpart,
                                   Family::Candid, 2);
  Planner planner(spec, toy_config());

  PlannerState s = planner.initial_state();
  CHECK_THROWS_AS(planner.q_accept(s), std::logic_error);

  s.counterpart_offers.push_back(50.0);
  CHECK(planner.q_accept(s) == 10.0);

  s.counterpart_offers.back() = 60.0;
  CHECK(planner.q_accept(s) == 0.0);

  s.counterpart_offers.back() = 75.0;
  CHECK(planner.q_accept(s) == -15.0);
  PlannerAction act = planner.optimal_action(s);
  CHECK(act.decision != Decision::Accept);
  CHECK(act.value >= 0.0);
}

TEST_CASE("final-round offers reduce to acceptance-weighted utility") {
  ScenarioSpec spec =
      crafted_spec(Role::Seller, 30.0, 70.0, Opener::Counterpart,
                   Family::Candid, 4);
  PlannerConfig cfg = toy_config();
  Planner planner(spec, cfg);

  PlannerState s = planner.initial_state();
  s.round = 4;
  s.agent_offers = {90.0, 80.0, 70.0};
  s.counterpart_offers = {20.0, 30.0, 40.0};

  double range = spec.bounds.range();
  HistoryFeatures f = history_features(
      s.agent_offers, spec.agent_role, range,
      planner.config().belief.params.rigidity_threshold);
  for (double p : planner.admissible_prices(s)) {
    double expected = 0.0;
    for (std::size_t i = 0; i < planner.grid().size(); ++i) {
      double a = accept_probability(p, planner.grid().types[i],
                                    spec.counterpart_role(), range, 4, 4, f,
                                    preset_for(spec.family).econ,
                                    planner.config().belief.params.accept);
      expected += s.belief[i] * a * agent_utility(spec.agent_role,
                                                  spec.r_agent, p);
    }
    CHECK(planner.q_offer(s, p) == doctest::Approx(expected).epsilon(1e-12));
  }
  PlannerAction act = planner.optimal_action(s);
  CHECK(act.value >= 0.0);
}

TEST_CASE("the opening round without a pending offer forces an offer") {
  ScenarioSpec spec = crafted_spec(Role::Seller, 30.0, 70.0, Opener::Agent,
                                   Family::Candid, 2);
  Planner planner(spec, toy_config());
  PlannerAction act = planner.optimal_action(planner.initial_state());
  CHECK(act.decision == Decision::Offer);
  CHECK(act.price.has_value());
}

TEST_CASE("a two-type tree matches exhaustive enumeration") {
  ScenarioSpec spec = crafted_spec(Role::Buyer, 75.0, 35.0, Opener::Counterpart,
                                   Family::Candid, 2);
  PlannerConfig cfg = toy_config(3, 3);
  TypeGrid grid = two_types(28.7, 51.3, Stance::Conciliatory,
                            Stance::Aggressive, 0.6);
  Planner planner(spec, cfg, grid);
  ref::Game game = ref::make_game(spec, grid, 3, 3, cfg.quadrature_nodes);
  game.beliefs = cfg.belief;

  PlannerState s;
  s.belief = {0.6, 0.4};
  s.counterpart_offers = {62.0};
  s.round = 1;

  std::vector<double> own;
  std::vector<double> cps = {62.0};
  for (double p : planner.admissible_prices(s)) {
    double expected = ref::offer_value(game, s.belief, own, cps, 1, p);
    CHECK(planner.q_offer(s, p) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(planner.q_offer(s, p) - expected) <= 1e-9);
  }
  double expected = ref::value(game, s.belief, own, cps, 1);
  CHECK(std::abs(planner.state_value(s) - expected) <= 1e-9);
}

TEST_CASE("planner equals brute force across fifty toy instances") {
  Rng rng(20250816ull);
  auto start = std::chrono::steady_clock::now();
  int checked = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    ref::ToyInstance toy = ref::sample_toy(i, rng);
    Planner planner = ref::planner_for(toy);
    ref::Game game = ref::game_for(toy);

    std::vector<double> own = toy.root.agent_offers;
    std::vector<double> cps = toy.root.counterpart_offers;
    double expected =
        ref::value(game, toy.root.belief, own, cps, toy.root.round);
    double got = planner.state_value(toy.root);
    double diff = std::abs(got - expected);
    worst = std::max(worst, diff);
    CHECK(diff <= 1e-9);
    CHECK(planner.optimal_action(toy.root).value ==
          doctest::Approx(got).epsilon(1e-12));
    checked += 1;
  }
  auto elapsed = std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  CHECK(checked == 50);
  CHECK(worst <= 1e-9);
  CHECK(elapsed < 10.0);
}

TEST_CASE("better information never lowers the planning value") {
  Rng rng(77001ull);
  for (int i = 0; i < 10; ++i) {
    ref::ToyInstance toy = ref::sample_toy(i * 5 + 1, rng);
    Planner planner = ref::planner_for(toy);
    double prior_value = planner.state_value(toy.root);
    double informed = 0.0;
    for (std::size_t t = 0; t < toy.root.belief.size(); ++t) {
      if (toy.root.belief[t] <= 0.0) continue;
      PlannerState point = toy.root;
      for (std::size_t j = 0; j < point.belief.size(); ++j) {
        point.belief[j] = j == t ? 1.0 : 0.0;
      }
      informed += toy.root.belief[t] * planner.state_value(point);
    }
    CHECK(informed >= prior_value - 1e-9);
  }
}

TEST_CASE("belief-averaged factoring disagrees under correlated types") {
  ScenarioSpec spec = crafted_spec(Role::Buyer, 80.0, 30.0, Opener::Counterpart,
                                   Family::Candid, 2);
  PlannerConfig cfg = toy_config(3, 3);
  TypeGrid grid = two_types(10.3, 70.7);
  Planner planner(spec, cfg, grid);
  ref::Game game = ref::make_game(spec, grid, 3, 3, cfg.quadrature_nodes);
  game.beliefs = cfg.belief;

  PlannerState s;
  s.belief = {0.5, 0.5};
  s.counterpart_offers = {90.0};
  s.round = 1;

  double price = 50.0;
  double range = spec.bounds.range();
  HistoryFeatures f;
  double joint = planner.q_offer(s, price);

  std::vector<double> own;
  std::vector<double> cps = {90.0};
  CHECK(std::abs(joint - ref::offer_value(game, s.belief, own, cps, 1, price)) <=
        1e-9);

  // Deliberately factored variant: belief-averaged acceptance and walk-away
  // rates scale a continuation mixed without the per-type survival weights.
  double a_bar = 0.0;
  double w_bar = 0.0;
  std::vector<double> survive(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    a_bar += s.belief[i] *
             accept_probability(price, grid.types[i], spec.counterpart_role(),
                                range, 1, 2, f, preset_for(spec.family).econ,
                                cfg.belief.params.accept);
    w_bar += s.belief[i] *
             walkaway_probability(price, grid.types[i], spec.counterpart_role(),
                                  range, 1, 2, cfg.belief.params.walk);
    survive[i] = s.belief[i];
  }
  double u = agent_utility(spec.agent_role, spec.r_agent, price);
  double w_cont = 0.0;
  for (const auto& [key, per_type] :
       ref::observation_weights(game, survive, cps, 1, f)) {
    double p_obs = 0.0;
    for (double w : per_type) p_obs += w;
    if (!(p_obs > 0.0)) continue;
    std::vector<double> child(per_type.size());
    for (std::size_t i = 0; i < per_type.size(); ++i) {
      child[i] = per_type[i] / p_obs;
    }
    std::vector<double> own2 = {price};
    std::vector<double> cps2 = {90.0, std::get<0>(key)};
    w_cont += p_obs * ref::value(game, child, own2, cps2, 2);
  }
  double factored = a_bar * u + (1.0 - a_bar) * (1.0 - w_bar) * w_cont;
  CHECK(std::abs(joint - factored) > 1e-3);
}

TEST_CASE("exact ties prefer accepting, then the role-favorable extreme") {
  ScenarioSpec spec = crafted_spec(Role::Seller, 30.0, 20.0, Opener::Counterpart,
                                   Family::Candid, 2);
  PlannerConfig cfg = toy_config(5, 5);
  TypeGrid grid = two_types(10.0, 20.0);
  Planner planner(spec, cfg, grid);

  // Final round, every admissible offer has zero acceptance probability:
  // all offer values tie with Reject at zero.
  PlannerState s;
  s.belief = {0.5, 0.5};
  s.agent_offers = {80.0};
  s.counterpart_offers = {25.0, 30.0};
  s.round = 2;

  PlannerAction act = planner.optimal_action(s);
  CHECK(act.decision == Decision::Accept);
  CHECK(act.value == 0.0);

  Planner planner2(spec, cfg, grid);
  PlannerState s2 = s;
  s2.counterpart_offers = {25.0, 20.0};
  PlannerAction act2 = planner2.optimal_action(s2);
  CHECK(act2.decision == Decision::Offer);
  CHECK(act2.value == 0.0);
  CHECK(*act2.price == 75.0);
}

TEST_CASE("rejects once every continuation is dominated") {
  ScenarioSpec spec = crafted_spec(Role::Buyer, 30.0, 50.0, Opener::Counterpart,
                                   Family::Candid, 4);
  PlannerConfig cfg = toy_config(5, 5);
  TypeGrid grid;
  grid.types.push_back(LatentType{50.0, 0.5, Stance::Neutral});
  grid.prior = {1.0};
  Planner planner(spec, cfg, grid);

  PlannerState s;
  s.belief = {1.0};
  s.agent_offers = {60.0};
  s.counterpart_offers = {80.0, 70.0};
  s.round = 3;

  CHECK(planner.admissible_prices(s).empty());
  PlannerAction act = planner.optimal_action(s);
  CHECK(act.decision == Decision::Reject);
  CHECK(act.value == 0.0);
}

TEST_CASE("conditioned openings match the belief filter") {
  ScenarioSpec spec = crafted_spec(Role::Buyer, 85.0, 35.0, Opener::Counterpart);
  PlannerConfig cfg;
  cfg.prune_threshold = 0.0;
  Planner planner(spec, cfg);

  Episode ep(spec);
  const auto& rec = ep.trace().records.front();
  REQUIRE(rec.actor == "counterpart");
  REQUIRE(rec.cues.has_value());

  PlannerState s = planner.after_opening(*rec.price, *rec.cues);
  BeliefFilter filter(spec, planner.config().belief);
  filter.observe_opening(*rec.price, *rec.cues);
  REQUIRE(s.belief.size() == filter.posterior().size());
  for (std::size_t i = 0; i < s.belief.size(); ++i) {
    CHECK(std::abs(s.belief[i] - filter.posterior()[i]) <= 1e-12);
  }
  CHECK(s.round == 1);
  REQUIRE(s.counterpart_offers.size() == 1);
  CHECK(s.counterpart_offers[0] == *rec.price);
}

TEST_CASE("no-deal solves never close a deal") {
  auto specs = regime_sweep(Regime::NoDeal, 1);
  REQUIRE(specs.size() == 24);
  for (const auto& spec : specs) {
    OracleResult res = solve_episode(spec);
    CHECK(res.trace.termination != TerminationSource::AgentAccept);
    CHECK(res.trace.termination != TerminationSource::CounterpartAccept);
    CHECK(!res.trace.agreement_ir);
    CHECK(res.utility == 0.0);
    CHECK(res.trace.violations.critical_total() == 0);
  }
}

TEST_CASE("the reference play beats fixed concession on feasible cells") {
  auto specs = regime_sweep(Regime::Overlap, 21);
  specs.resize(500);
  double oracle_se = 0.0;
  double fc_se = 0.0;
  int oracle_deals = 0;
  for (const auto& spec : specs) {
    OracleResult res = solve_episode(spec);
    oracle_se += res.utility / spec.zopa();
    if (res.trace.outcome_price.has_value()) oracle_deals += 1;
    CHECK(res.trace.violations.critical_total() == 0);
    CHECK(res.round1_value >= -1e-9);

    FixedConcessionAgent fc(0.30);
    EpisodeTrace fct = run_episode(spec, fc);
    fc_se += fct.utility / spec.zopa();
  }
  oracle_se /= specs.size();
  fc_se /= specs.size();
  CHECK(oracle_se >= fc_se);
  CHECK(oracle_deals > 400);
}

TEST_CASE("reference plays replay deterministically") {
  GeneratorConfig gc;
  CellKey key;
  key.family = Family::Expressive;
  key.agent_role = Role::Seller;
  key.opener = Opener::Counterpart;
  key.episode = 3;
  ScenarioSpec spec = sample_scenario(gc, key, Regime::Overlap);

  OracleResult a = solve_episode(spec);
  OracleResult b = solve_episode(spec);
  CHECK(a.utility == b.utility);
  CHECK(a.round1_value == b.round1_value);
  CHECK(trace_json(a.trace) == trace_json(b.trace));

  auto summary = nlohmann::json::parse(trace_jsonl(a.trace).back());
  REQUIRE(summary.contains("planner_round1_value"));
  CHECK(summary["planner_round1_value"].get<double>() ==
        doctest::Approx(a.round1_value));
}

}  // TEST_SUITE
