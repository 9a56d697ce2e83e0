#include "adex/simulator.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace adex {

namespace {

// Kahan-compensated accumulator; keeps the reduction independent of how the
// trials were scheduled (records are always summed in trial order).
class CompensatedSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_se(std::span<const TrialRecord> records, double (*get)(const TrialRecord&)) {
  const std::int64_t n = static_cast<std::int64_t>(records.size());
  CompensatedSum sum;
  for (const auto& r : records) sum.add(get(r));
  const double mean = sum.value() / static_cast<double>(n);
  if (n < 2) return {mean, 0.0};
  CompensatedSum sq;
  for (const auto& r : records) {
    const double d = get(r) - mean;
    sq.add(d * d);
  }
  const double var = sq.value() / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

void RunConfig::validate() const {
  if (n < instance.k()) throw std::invalid_argument("RunConfig: n must be at least k");
  if (trials < 1) throw std::invalid_argument("RunConfig: trials must be >= 1");
  if (threads < 1) throw std::invalid_argument("RunConfig: threads must be >= 1");
  if (!instance.has_unique_best())
    throw std::invalid_argument("RunConfig: instance must have a unique best arm");
  const int best = instance.best_arm();
  for (int i = 0; i < instance.k(); ++i) {
    if (!(costs.within(instance.means(), i) > 0.0))
      throw std::invalid_argument("RunConfig: within-experiment costs must be positive");
    const double post = costs.post(instance.means(), i);
    if (i == best ? post != 0.0 : !(post > 0.0))
      throw std::invalid_argument(
          "RunConfig: post cost must vanish exactly at the best arm and be positive elsewhere");
  }
}

TrialRecord run_trial(const RunConfig& config, std::int64_t trial_index) {
  config.validate();
  if (trial_index < 0 || trial_index >= config.trials)
    throw std::out_of_range("run_trial: trial index");

  const Instance& inst = config.instance;
  const int k = inst.k();
  const int best = inst.best_arm();
  const auto& means = inst.means();

  std::vector<double> gap(k), cost(k), post(k);
  for (int i = 0; i < k; ++i) {
    gap[i] = means[best] - means[i];
    cost[i] = config.costs.within(means, i);
    post[i] = config.costs.post(means, i);
  }

  TrialRecord rec;
  rec.trial = trial_index;
  rec.seed = derive_stream_seed(config.base_seed, static_cast<std::uint64_t>(trial_index));
  rec.n = config.n;

  Rng rng(rec.seed);
  ExperimentState state(inst.family(), k);
  AllocationPolicy policy(config.rule, inst.family(), k);

  // Once the rule stops at tau < n, the deployed arm serves the remaining
  // n - tau people; that tail enters the totals in closed form below.
  std::int64_t tau = config.n;
  for (std::int64_t t = 0; t < config.n; ++t) {
    if (should_stop(config.stop, state)) {
      tau = t;
      break;
    }
    const int arm = policy.choose(state, rng);
    const double reward = inst.family().sample(means[arm], rng);
    state.update(arm, reward);
  }

  rec.tau = tau;
  rec.selected = state.empirical_best();
  rec.correct = rec.selected == best;
  rec.fallbacks = policy.fallback_count();
  rec.counts = state.counts();

  for (int i = 0; i < k; ++i) {
    const double n_i = static_cast<double>(rec.counts[i]);
    rec.within_regret += n_i * gap[i];
    rec.within_cost += n_i * cost[i];
  }
  const double remaining = static_cast<double>(config.n - tau);
  rec.total_regret = rec.within_regret + remaining * gap[rec.selected];
  rec.total_cost = rec.within_cost + remaining * post[rec.selected];
  return rec;
}

std::vector<TrialRecord> run_monte_carlo(const RunConfig& config) {
  config.validate();
  std::vector<TrialRecord> records(static_cast<std::size_t>(config.trials));
  const int threads = static_cast<int>(
      std::min<std::int64_t>(config.threads, config.trials));
  if (threads <= 1) {
    for (std::int64_t i = 0; i < config.trials; ++i)
      records[static_cast<std::size_t>(i)] = run_trial(config, i);
    return records;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&config, &records, w, threads] {
      for (std::int64_t i = w; i < config.trials; i += threads)
        records[static_cast<std::size_t>(i)] = run_trial(config, i);
    });
  }
  for (auto& th : pool) th.join();
  return records;
}

Summary summarize(std::span<const TrialRecord> records, int k) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  Summary s;
  s.trials = static_cast<std::int64_t>(records.size());
  const auto len = mean_se(records, [](const TrialRecord& r) {
    return static_cast<double>(r.tau);
  });
  s.mean_length = len.mean;
  s.se_length = len.se;
  const auto reg = mean_se(records, [](const TrialRecord& r) { return r.total_regret; });
  s.mean_regret = reg.mean;
  s.se_regret = reg.se;
  const auto cost = mean_se(records, [](const TrialRecord& r) { return r.total_cost; });
  s.mean_cost = cost.mean;
  s.se_cost = cost.se;

  std::int64_t wrong = 0;
  for (const auto& r : records) wrong += r.correct ? 0 : 1;
  s.misselection_rate = static_cast<double>(wrong) / static_cast<double>(s.trials);

  s.mean_allocation.assign(static_cast<std::size_t>(k), 0.0);
  for (int i = 0; i < k; ++i) {
    CompensatedSum acc;
    for (const auto& r : records) {
      acc.add(static_cast<double>(r.counts[static_cast<std::size_t>(i)]) /
              static_cast<double>(r.tau));
    }
    s.mean_allocation[static_cast<std::size_t>(i)] = acc.value() / static_cast<double>(s.trials);
  }
  return s;
}

double evaluate_cost(const TrialRecord& record, const CostModel& costs,
                     const Instance& instance) {
  const int k = instance.k();
  if (static_cast<int>(record.counts.size()) != k)
    throw std::invalid_argument("evaluate_cost: record does not match the instance");
  double within = 0.0;
  for (int i = 0; i < k; ++i) {
    within += static_cast<double>(record.counts[static_cast<std::size_t>(i)]) *
              costs.within(instance.means(), i);
  }
  return within + static_cast<double>(record.n - record.tau) *
                      costs.post(instance.means(), record.selected);
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

void write_comment(std::ostream& os, const std::string& comment) {
  if (comment.empty()) return;
  std::istringstream lines(comment);
  std::string line;
  while (std::getline(lines, line)) os << "# " << line << "\n";
}

}  // namespace

void write_trials_csv(std::ostream& os, std::span<const TrialRecord> records,
                      const std::string& header_comment) {
  write_comment(os, header_comment);
  os << "trial,seed,tau,selected,correct,within_regret,total_regret,total_cost,fallbacks\n";
  for (const auto& r : records) {
    os << r.trial << ',' << r.seed << ',' << r.tau << ',' << r.selected << ','
       << (r.correct ? 1 : 0) << ',' << format_double(r.within_regret) << ','
       << format_double(r.total_regret) << ',' << format_double(r.total_cost) << ','
       << r.fallbacks << "\n";
  }
}

void write_summary_text(std::ostream& os, const Summary& summary,
                        const std::string& header_comment) {
  write_comment(os, header_comment);
  os << "trials=" << summary.trials << "\n";
  os << "mean_length=" << format_double(summary.mean_length) << "\n";
  os << "se_length=" << format_double(summary.se_length) << "\n";
  os << "mean_total_regret=" << format_double(summary.mean_regret) << "\n";
  os << "se_total_regret=" << format_double(summary.se_regret) << "\n";
  os << "mean_total_cost=" << format_double(summary.mean_cost) << "\n";
  os << "se_total_cost=" << format_double(summary.se_cost) << "\n";
  os << "misselection_rate=" << format_double(summary.misselection_rate) << "\n";
  for (std::size_t i = 0; i < summary.mean_allocation.size(); ++i)
    os << "mean_allocation_" << i << "=" << format_double(summary.mean_allocation[i]) << "\n";
}

void write_summary_csv(std::ostream& os, const Summary& summary,
                       const std::string& header_comment) {
  write_comment(os, header_comment);
  os << "trials,mean_length,se_length,mean_total_regret,se_total_regret,"
        "mean_total_cost,se_total_cost,misselection_rate";
  for (std::size_t i = 0; i < summary.mean_allocation.size(); ++i) os << ",mean_allocation_" << i;
  os << "\n";
  os << summary.trials << ',' << format_double(summary.mean_length) << ','
     << format_double(summary.se_length) << ',' << format_double(summary.mean_regret) << ','
     << format_double(summary.se_regret) << ',' << format_double(summary.mean_cost) << ','
     << format_double(summary.se_cost) << ',' << format_double(summary.misselection_rate);
  for (double a : summary.mean_allocation) os << ',' << format_double(a);
  os << "\n";
}

}  // namespace adex
