#include "bargain/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bargain/numeric.hpp"
#include "bargain/rng.hpp"
#include "json.hpp"

namespace bargain {

namespace {

bool agreed(TerminationSource t) {
  return t == TerminationSource::AgentAccept ||
         t == TerminationSource::CounterpartAccept;
}

}  // namespace

EpisodeScore episode_metrics(const EpisodeTrace& trace,
                             const ScenarioSpec& spec,
                             std::optional<double> oracle_utility) {
  EpisodeScore s;
  s.regime = spec.regime;
  s.family = spec.family;
  s.agent_role = spec.agent_role;
  s.opener = spec.opener;
  s.feasible = spec.zopa() > 0.0;
  s.zopa = spec.zopa();
  s.range = spec.bounds.range();
  s.utility = trace.utility;
  s.termination = trace.termination;
  s.agreement = agreed(trace.termination);
  s.agreement_ir = trace.agreement_ir;
  s.surplus_share = s.feasible ? s.utility / s.zopa : 0.0;
  s.agent_exit = trace.termination == TerminationSource::AgentReject;
  s.violations = trace.violations;
  s.oracle_utility = oracle_utility;

  double be_r = 0.0;
  double be_kappa = 0.0;
  double brier = 0.0;
  double hits = 0.0;
  int rounds = 0;
  int truth = static_cast<int>(spec.stance);
  for (const auto& rec : trace.records) {
    if (rec.actor != "agent" || !rec.belief.has_value()) continue;
    const BeliefReport& b = *rec.belief;
    be_r += std::abs(b.r_hat - spec.r_counterpart) / s.range;
    be_kappa += std::abs(b.kappa_hat - spec.kappa_counterpart);
    double sq = 0.0;
    for (int c = 0; c < 3; ++c) {
      double target = c == truth ? 1.0 : 0.0;
      sq += (b.stance_probs[c] - target) * (b.stance_probs[c] - target);
    }
    brier += 0.5 * sq;
    int top = static_cast<int>(std::distance(
        b.stance_probs.begin(),
        std::max_element(b.stance_probs.begin(), b.stance_probs.end())));
    hits += top == truth ? 1.0 : 0.0;
    rounds += 1;
  }
  if (rounds > 0) {
    s.be_r = be_r / rounds;
    s.be_kappa = be_kappa / rounds;
    s.brier_eta = brier / rounds;
    s.stance_acc = hits / rounds;
    s.belief_rounds = rounds;
  }
  return s;
}

GapDecomposition gap_decomposition(double u_base, double u_post,
                                   double u_reveal, double u_oracle) {
  GapDecomposition g;
  g.information = u_post - u_base;
  g.uncertainty = u_reveal - u_post;
  g.control = u_oracle - u_reveal;
  return g;
}

MetricReport aggregate(const std::vector<EpisodeScore>& records,
                       const StratumFilter& filter) {
  MetricReport rep;
  int n_feasible = 0;
  int n_agreed_feasible = 0;
  int n_infeasible = 0;
  int n_infeasible_agreed = 0;
  int n_agent_exit = 0;
  double agreed_share_sum = 0.0;
  double utility_sum = 0.0;
  int n_matched = 0;
  double matched_utility_sum = 0.0;
  double oracle_sum = 0.0;
  int n_belief = 0;
  double be_r_sum = 0.0;
  double be_kappa_sum = 0.0;
  double brier_sum = 0.0;
  int n_stance = 0;
  double stance_sum = 0.0;
  int n_crit = 0, n_bound = 0, n_res = 0, n_invalid = 0, n_mono = 0, n_any = 0;

  for (const auto& r : records) {
    if (filter.regime.has_value() && r.regime != *filter.regime) continue;
    if (filter.family.has_value() && r.family != *filter.family) continue;
    if (filter.agent_role.has_value() && r.agent_role != *filter.agent_role)
      continue;
    if (filter.opener.has_value() && r.opener != *filter.opener) continue;

    rep.n += 1;
    utility_sum += r.utility;
    rep.termination_counts[static_cast<int>(r.termination)] += 1;
    if (r.feasible) {
      n_feasible += 1;
      if (r.agreement) {
        n_agreed_feasible += 1;
        agreed_share_sum += r.surplus_share;
      }
    } else {
      n_infeasible += 1;
      if (r.agreement) n_infeasible_agreed += 1;
      if (r.agent_exit) n_agent_exit += 1;
    }
    if (r.oracle_utility.has_value()) {
      n_matched += 1;
      matched_utility_sum += r.utility;
      oracle_sum += *r.oracle_utility;
    }
    if (r.belief_rounds > 0) {
      n_belief += 1;
      be_r_sum += *r.be_r;
      be_kappa_sum += *r.be_kappa;
      brier_sum += *r.brier_eta;
    }
    if (r.stance_acc.has_value()) {
      n_stance += 1;
      stance_sum += *r.stance_acc;
    }
    if (r.violations.critical_total() > 0) n_crit += 1;
    if (r.violations.price_bound > 0) n_bound += 1;
    if (r.violations.reservation_ir > 0) n_res += 1;
    if (r.violations.invalid_action > 0) n_invalid += 1;
    if (r.violations.monotonicity > 0) n_mono += 1;
    if (r.violations.critical_total() + r.violations.secondary_total() > 0)
      n_any += 1;
  }

  rep.agr_plus = {n_feasible > 0
                      ? static_cast<double>(n_agreed_feasible) / n_feasible
                      : 0.0,
                  n_feasible};
  rep.cse_plus = {n_agreed_feasible > 0
                      ? agreed_share_sum / n_agreed_feasible
                      : 0.0,
                  n_agreed_feasible};
  // The surplus-efficiency mean over feasible episodes factors exactly into
  // agreement rate times conditional quality (non-agreements contribute
  // exact zeros), so the reported value is computed as that product and the
  // decomposition identity holds to the last bit.
  double se = 0.0;
  if (n_agreed_feasible > 0) {
    se = rep.agr_plus.value * rep.cse_plus.value;
  }
  rep.se_plus = {n_feasible > 0 ? se : 0.0, n_feasible};

  rep.fagr_minus = {n_infeasible > 0
                        ? static_cast<double>(n_infeasible_agreed) / n_infeasible
                        : 0.0,
                    n_infeasible};
  rep.safeterm_minus = {n_infeasible > 0 ? 1.0 - rep.fagr_minus.value : 0.0,
                        n_infeasible};
  rep.agent_exit_minus = {n_infeasible > 0
                              ? static_cast<double>(n_agent_exit) / n_infeasible
                              : 0.0,
                          n_infeasible};

  rep.mean_utility = {rep.n > 0 ? utility_sum / rep.n : 0.0, rep.n};

  double matched_mean = n_matched > 0 ? matched_utility_sum / n_matched : 0.0;
  double oracle_mean = n_matched > 0 ? oracle_sum / n_matched : 0.0;
  rep.oracle_mean_utility = {oracle_mean, n_matched};
  rep.oracle_gap = {n_matched > 0 ? oracle_mean - matched_mean : 0.0,
                    n_matched};
  if (n_matched > 0 && oracle_mean != 0.0) {
    rep.pct_oracle = {100.0 * matched_mean / oracle_mean, n_matched};
  }

  rep.be_r = {n_belief > 0 ? be_r_sum / n_belief : 0.0, n_belief};
  rep.be_kappa = {n_belief > 0 ? be_kappa_sum / n_belief : 0.0, n_belief};
  rep.brier_eta = {n_belief > 0 ? brier_sum / n_belief : 0.0, n_belief};
  if (n_belief > 0) {
    rep.be_type = {(rep.be_r.value + rep.be_kappa.value + rep.brier_eta.value) /
                       3.0,
                   n_belief};
  }
  rep.stance_acc = {n_stance > 0 ? stance_sum / n_stance : 0.0, n_stance};

  auto rate = [&](int count) {
    return Statistic{rep.n > 0 ? static_cast<double>(count) / rep.n : 0.0,
                     rep.n};
  };
  rep.crit_viol_pct = rate(n_crit);
  rep.bound_viol_pct = rate(n_bound);
  rep.res_viol_pct = rate(n_res);
  rep.invalid_act_pct = rate(n_invalid);
  rep.mono_viol_pct = rate(n_mono);
  rep.any_viol_pct = rate(n_any);

  if (rep.n > 0) {
    for (int i = 0; i < 5; ++i) {
      rep.termination_shares[i] =
          static_cast<double>(rep.termination_counts[i]) / rep.n;
    }
  }
  return rep;
}

Interval bootstrap_ci(const std::vector<double>& values, int B, double level,
                      std::uint64_t seed) {
  if (values.empty()) {
    throw std::invalid_argument("bootstrap_ci: no values");
  }
  if (B < 100) {
    throw std::invalid_argument("bootstrap_ci: need at least 100 resamples");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("bootstrap_ci: level outside (0, 1)");
  }
  Rng rng(seed);
  std::size_t n = values.size();
  std::vector<double> means(B);
  for (int b = 0; b < B; ++b) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      sum += values[rng.uniform_index(n)];
    }
    means[b] = sum / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  auto quantile = [&](double q) {
    double pos = q * (B - 1);
    int lo = static_cast<int>(std::floor(pos));
    int hi = std::min(lo + 1, B - 1);
    double frac = pos - lo;
    return means[lo] + frac * (means[hi] - means[lo]);
  };
  double alpha = 1.0 - level;
  return {quantile(alpha / 2.0), quantile(1.0 - alpha / 2.0)};
}

Interval wilson_ci(int successes, int trials, double level) {
  if (trials <= 0) {
    throw std::invalid_argument("wilson_ci: no trials");
  }
  if (successes < 0 || successes > trials) {
    throw std::invalid_argument("wilson_ci: successes outside [0, trials]");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("wilson_ci: level outside (0, 1)");
  }
  double z = norm_ppf(0.5 + level / 2.0);
  double n = trials;
  double p = successes / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {center - half, center + half};
}

namespace {

nlohmann::json stat_json(const Statistic& s) {
  nlohmann::json o;
  o["n"] = s.n;
  if (s.defined()) {
    o["value"] = s.value;
  } else {
    o["value"] = nullptr;
  }
  return o;
}

void csv_stat(std::ostringstream& out, const Statistic& s) {
  out << ',';
  if (s.defined()) out << s.value;
  out << ',' << s.n;
}

}  // namespace

std::string report_json(const MetricReport& rep) {
  nlohmann::json o;
  o["n"] = rep.n;
  o["se_plus"] = stat_json(rep.se_plus);
  o["agr_plus"] = stat_json(rep.agr_plus);
  o["cse_plus"] = stat_json(rep.cse_plus);
  o["fagr_minus"] = stat_json(rep.fagr_minus);
  o["safeterm_minus"] = stat_json(rep.safeterm_minus);
  o["agent_exit_minus"] = stat_json(rep.agent_exit_minus);
  o["mean_utility"] = stat_json(rep.mean_utility);
  o["oracle_mean_utility"] = stat_json(rep.oracle_mean_utility);
  o["oracle_gap"] = stat_json(rep.oracle_gap);
  o["pct_oracle"] = stat_json(rep.pct_oracle);
  o["be_r"] = stat_json(rep.be_r);
  o["be_kappa"] = stat_json(rep.be_kappa);
  o["brier_eta"] = stat_json(rep.brier_eta);
  o["be_type"] = stat_json(rep.be_type);
  o["stance_acc"] = stat_json(rep.stance_acc);
  o["crit_viol_pct"] = stat_json(rep.crit_viol_pct);
  o["bound_viol_pct"] = stat_json(rep.bound_viol_pct);
  o["res_viol_pct"] = stat_json(rep.res_viol_pct);
  o["invalid_act_pct"] = stat_json(rep.invalid_act_pct);
  o["mono_viol_pct"] = stat_json(rep.mono_viol_pct);
  o["any_viol_pct"] = stat_json(rep.any_viol_pct);
  nlohmann::json term;
  for (int i = 0; i < 5; ++i) {
    auto src = static_cast<TerminationSource>(i);
    nlohmann::json t;
    t["count"] = rep.termination_counts[i];
    t["share"] = rep.termination_shares[i];
    term[to_string(src)] = t;
  }
  o["terminations"] = term;
  o["belief_averaging"] = rep.belief_averaging;
  return o.dump();
}

std::string report_csv_header() {
  std::ostringstream out;
  out << "label,n";
  const char* stats[] = {
      "se_plus",         "agr_plus",       "cse_plus",      "fagr_minus",
      "safeterm_minus",  "agent_exit_minus", "mean_utility",
      "oracle_mean_utility", "oracle_gap", "pct_oracle",    "be_r",
      "be_kappa",        "brier_eta",      "be_type",       "stance_acc",
      "crit_viol_pct",   "bound_viol_pct", "res_viol_pct",
      "invalid_act_pct", "mono_viol_pct",  "any_viol_pct"};
  for (const char* s : stats) {
    out << ',' << s << ',' << s << "_n";
  }
  for (int i = 0; i < 5; ++i) {
    out << ',' << to_string(static_cast<TerminationSource>(i)) << "_share";
  }
  return out.str();
}

std::string report_csv_row(const std::string& label,
                           const MetricReport& rep) {
  std::ostringstream out;
  out << label << ',' << rep.n;
  const Statistic* stats[] = {
      &rep.se_plus,         &rep.agr_plus,        &rep.cse_plus,
      &rep.fagr_minus,      &rep.safeterm_minus,  &rep.agent_exit_minus,
      &rep.mean_utility,    &rep.oracle_mean_utility, &rep.oracle_gap,
      &rep.pct_oracle,      &rep.be_r,            &rep.be_kappa,
      &rep.brier_eta,       &rep.be_type,         &rep.stance_acc,
      &rep.crit_viol_pct,   &rep.bound_viol_pct,  &rep.res_viol_pct,
      &rep.invalid_act_pct, &rep.mono_viol_pct,   &rep.any_viol_pct};
  for (const Statistic* s : stats) csv_stat(out, *s);
  for (int i = 0; i < 5; ++i) {
    out << ',' << rep.termination_shares[i];
  }
  return out.str();
}

}  // namespace bargain
