#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "adex/policies.hpp"
#include "adex/stopping.hpp"

namespace adex {

// Outcome of one simulated trial. Counts are the per-arm sample counts at the
// stopping time, so any cost model can be re-evaluated on a finished record.
struct TrialRecord {
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  std::int64_t tau = 0;     // stopping time (people treated adaptively)
  std::int64_t n = 0;       // population size
  int selected = 0;         // deployed arm
  bool correct = false;     // selected == true best arm
  double within_regret = 0.0;
  double total_regret = 0.0;
  double within_cost = 0.0;
  double total_cost = 0.0;
  std::int64_t fallbacks = 0;
  std::vector<std::int64_t> counts;  // per-arm counts at tau
};

struct RunConfig {
  Instance instance;
  RuleConfig rule;
  StoppingRule stop;
  CostModel costs = CostModel::unit();
  std::int64_t n = 0;
  std::int64_t trials = 1;
  std::uint64_t base_seed = 0;
  int threads = 1;

  void validate() const;
};

// One simulated experiment: stop-check, allocate, observe, update, with the
// post-experiment tail accounted for in closed form. Deterministic given
// (base_seed, trial_index).
TrialRecord run_trial(const RunConfig& config, std::int64_t trial_index);

// Independent trials with per-trial derived seeds; records land in trial
// order regardless of the thread schedule.
std::vector<TrialRecord> run_monte_carlo(const RunConfig& config);

struct Summary {
  std::int64_t trials = 0;
  double mean_length = 0.0, se_length = 0.0;
  double mean_regret = 0.0, se_regret = 0.0;
  double mean_cost = 0.0, se_cost = 0.0;
  double misselection_rate = 0.0;
  std::vector<double> mean_allocation;  // mean of N_{tau,i}/tau over trials
};

Summary summarize(std::span<const TrialRecord> records, int k);

// Total cost of a finished record under an arbitrary cost model:
// sum_i N_i C_i(theta) + (n - tau) Delta_selected(theta).
double evaluate_cost(const TrialRecord& record, const CostModel& costs,
                     const Instance& instance);

// Shortest-round-trip decimal formatting; used everywhere numbers are
// serialized so outputs are byte-stable.
std::string format_double(double x);

// Per-trial CSV with the fixed column set
// trial,seed,tau,selected,correct,within_regret,total_regret,total_cost,fallbacks.
// Each line of `header_comment` is emitted first, prefixed with "# ".
void write_trials_csv(std::ostream& os, std::span<const TrialRecord> records,
                      const std::string& header_comment = "");

// Summary as key=value lines.
void write_summary_text(std::ostream& os, const Summary& summary,
                        const std::string& header_comment = "");

// Summary as a one-row CSV.
void write_summary_csv(std::ostream& os, const Summary& summary,
                       const std::string& header_comment = "");

}  // namespace adex
