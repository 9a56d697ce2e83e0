#include "adex/cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "adex/pareto.hpp"

namespace adex::cli {

namespace {

namespace fs = std::filesystem;

// Identifies the run by (config bytes, seed) only; anything schedule-
// dependent (like the thread count) must stay out so outputs are
// byte-identical across serial and parallel runs.
std::string hash_header(const ConfigFile& cfg,
                        std::optional<std::uint64_t> seed = std::nullopt) {
  std::ostringstream os;
  os << "config_hash=0x" << std::hex << cfg.hash << std::dec;
  if (seed) os << " seed=" << *seed;
  return os.str();
}

fs::path resolve_out_dir(const ConfigFile& cfg, const CliOptions& opts) {
  std::string dir;
  if (opts.out_dir) {
    dir = *opts.out_dir;
  } else if (cfg.output_dir) {
    dir = *cfg.output_dir;
  } else {
    throw config_error("config error: no output directory (output.dir or --out)");
  }
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw config_error("config error: cannot create output directory " + dir);
  return p;
}

const Instance& need_instance(const ConfigFile& cfg) {
  if (!cfg.instance) throw config_error("config error: missing instance section");
  return *cfg.instance;
}

const CostModel& need_costs(const ConfigFile& cfg) {
  if (!cfg.costs) throw config_error("config error: missing costs section");
  return *cfg.costs;
}

RunSection need_run(const ConfigFile& cfg, const CliOptions& opts) {
  if (!cfg.run) throw config_error("config error: missing run section");
  RunSection run = *cfg.run;
  if (opts.seed) run.base_seed = *opts.seed;
  if (opts.trials) {
    if (*opts.trials < 1) throw config_error("config error: --trials must be >= 1");
    run.trials = *opts.trials;
  }
  return run;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

}  // namespace

int cmd_solve(const ConfigFile& cfg, const CliOptions& opts, std::ostream& out) {
  const Instance& instance = need_instance(cfg);
  const CostModel& costs = need_costs(cfg);
  const OptimalAllocation alloc = solve_p_star(instance, costs);

  out << "best_arm=" << alloc.best << "\n";
  for (int i = 0; i < instance.k(); ++i) {
    out << "arm=" << i << " mean=" << format_double(instance.means()[i])
        << " cost=" << format_double(costs.within(instance.means(), i))
        << " p_star=" << format_double(alloc.p_star[i]);
    if (i != alloc.best) {
      out << " q_star=" << format_double(alloc.q_star[i])
          << " theta_bar=" << format_double(alloc.alternatives[i][alloc.best]);
    }
    out << "\n";
  }
  out << "gamma_star=" << format_double(alloc.equilibrium_value) << "\n";
  out << "kappa=" << format_double(alloc.lai_robbins_constant) << "\n";
  if (costs.kind() == CostKind::length_regret)
    out << "beta_c=" << format_double(alloc.p_star[alloc.best]) << "\n";
  out << "balance_residual=" << format_double(alloc.balance_residual) << "\n";
  out << "exploitation_residual=" << format_double(alloc.exploitation_residual) << "\n";

  const fs::path dir = resolve_out_dir(cfg, opts);
  std::ostringstream csv;
  csv << "# " << hash_header(cfg) << "\n";
  csv << "arm,mean,cost_within,p_star,q_star,theta_bar\n";
  for (int i = 0; i < instance.k(); ++i) {
    csv << i << ',' << format_double(instance.means()[i]) << ','
        << format_double(costs.within(instance.means(), i)) << ','
        << format_double(alloc.p_star[i]) << ',';
    if (i != alloc.best)
      csv << format_double(alloc.q_star[i]) << ','
          << format_double(alloc.alternatives[i][alloc.best]);
    else
      csv << ',';
    csv << "\n";
  }
  write_file(dir / "solve.csv", csv.str());
  return 0;
}

int cmd_simulate(const ConfigFile& cfg, const CliOptions& opts, std::ostream& out) {
  if (!cfg.rule) throw config_error("config error: missing rule section");
  if (!cfg.stop) throw config_error("config error: missing stop section");
  const RunSection run = need_run(cfg, opts);

  RunConfig rc{need_instance(cfg), *cfg.rule, StoppingRule::never(), need_costs(cfg),
               run.n, run.trials, run.base_seed, opts.threads.value_or(1)};
  switch (*cfg.stop) {
    case StopKind::exact_threshold: rc.stop = StoppingRule::exact(run.n); break;
    case StopKind::heuristic_quantile: rc.stop = StoppingRule::heuristic(run.n); break;
    case StopKind::never: rc.stop = StoppingRule::never(); break;
  }
  try {
    rc.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("config error: ") + e.what());
  }

  const std::vector<TrialRecord> records = run_monte_carlo(rc);
  const Summary summary = summarize(records, rc.instance.k());
  const std::string header = hash_header(cfg, run.base_seed);

  const fs::path dir = resolve_out_dir(cfg, opts);
  std::ostringstream trials_csv;
  write_trials_csv(trials_csv, records, header);
  write_file(dir / "trials.csv", trials_csv.str());

  std::ostringstream summary_txt;
  write_summary_text(summary_txt, summary, header);
  write_file(dir / "summary.txt", summary_txt.str());

  std::ostringstream summary_csv;
  write_summary_csv(summary_csv, summary, header);
  write_file(dir / "summary.csv", summary_csv.str());

  write_summary_text(out, summary, header);
  return 0;
}

int cmd_frontier(const ConfigFile& cfg, const CliOptions& opts, std::ostream& out) {
  const Instance& instance = need_instance(cfg);
  const RunSection run = need_run(cfg, opts);
  const FrontierGrid grid = cfg.frontier.value_or(FrontierGrid{});
  const std::vector<double> betas = grid.betas();

  const std::vector<FrontierPoint> points = trace_frontier(instance, betas);
  const Extremes ext = extremes(instance);

  const fs::path dir = resolve_out_dir(cfg, opts);
  std::ostringstream csv;
  write_frontier_csv(csv, instance, points, std::log(static_cast<double>(run.n)),
                     hash_header(cfg));
  write_file(dir / "frontier.csv", csv.str());

  out << "points=" << points.size() << "\n";
  out << "beta_bai=" << format_double(ext.beta_bai) << "\n";
  out << "l_star=" << format_double(ext.l_star) << "\n";
  out << "r_star=" << format_double(ext.r_star) << "\n";
  return 0;
}

namespace {

struct SelfTest {
  std::ostream& out;
  int failures = 0;

  void check(const std::string& name, bool ok, const std::string& detail = "") {
    out << (ok ? "[ok]   " : "[FAIL] ") << name;
    if (!ok && !detail.empty()) out << "  (" << detail << ")";
    out << "\n";
    if (!ok) ++failures;
  }
};

Instance teaser() {
  return Instance(RewardFamily::gaussian(1.0), {0.0, 0.2, 0.4, 0.6, 0.8, 1.0});
}

}  // namespace

int cmd_selftest(const CliOptions& opts, std::ostream& out) {
  SelfTest t{out};
  Rng rng(opts.seed.value_or(0x5e1f7e57));

  // KL nonnegativity and identity across the three families.
  {
    bool ok = true;
    const RewardFamily fams[] = {RewardFamily::gaussian(1.3), RewardFamily::bernoulli(),
                                 RewardFamily::poisson()};
    for (const auto& fam : fams) {
      for (int i = 0; i < 500 && ok; ++i) {
        double a = 0.0, b = 0.0;
        switch (fam.kind()) {
          case FamilyKind::gaussian:
            a = 4.0 * rng.normal();
            b = 4.0 * rng.normal();
            break;
          case FamilyKind::bernoulli:
            a = 0.01 + 0.98 * rng.uniform();
            b = 0.01 + 0.98 * rng.uniform();
            break;
          case FamilyKind::poisson:
            a = 0.1 + 10.0 * rng.uniform();
            b = 0.1 + 10.0 * rng.uniform();
            break;
        }
        ok = ok && fam.kl(a, b) >= 0.0 && fam.kl(a, a) == 0.0;
      }
    }
    t.check("kl nonnegative with kl(a,a)=0", ok);
  }

  // Gaussian identity t*D = Z^2/2 on random states.
  {
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 200 && ok; ++trial) {
      ExperimentState st(RewardFamily::gaussian(1.0), 2 + rng.uniform_int(4));
      for (int i = 0; i < st.k(); ++i) {
        const int n = 1 + rng.uniform_int(50);
        for (int s = 0; s < n; ++s) st.update(i, rng.normal() + i * 0.3);
      }
      const auto stat = stopping_statistic(st);
      double min_z2 = std::numeric_limits<double>::infinity();
      for (int j = 0; j < st.k(); ++j) {
        if (j == stat.leader) continue;
        const double z = st.z_statistic(stat.leader, j);
        min_z2 = std::min(min_z2, z * z / 2.0);
      }
      const double err = std::abs(stat.value - min_z2) / std::max(1.0, min_z2);
      worst = std::max(worst, err);
      ok = err <= 1e-10;
    }
    t.check("gaussian stopping statistic equals min Z^2/2", ok, format_double(worst));
  }

  // Threshold dominance and the calibration-function bound.
  {
    bool ok = true;
    for (double n : {100.0, 1e4, 1e6, 1e8}) {
      for (std::int64_t tt : {1, 2, 10, 100, 10000}) {
        for (int k : {2, 5, 10}) {
          ok = ok && kaufmann_threshold(tt, 1.0 / n, k) <=
                         gamma_threshold(tt, static_cast<std::int64_t>(n), k);
        }
      }
    }
    for (double x = 0.52; x <= 60.0; x += 0.37)
      ok = ok && c_exp(x) <= x + 3.0 * std::log(x + 2.0) + 7.0;
    t.check("deviation thresholds dominated by gamma_t(n)", ok);
  }

  // Equilibrium structure on the teaser instance.
  {
    const Instance inst = teaser();
    const CostModel costs = CostModel::length_regret(1.0);
    const OptimalAllocation a = solve_p_star(inst, costs);
    double qsum = 0.0;
    for (double q : a.q_star) qsum += q;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int j = 0; j < inst.k(); ++j) {
      if (j == a.best) continue;
      const double g = payoff(inst, costs, a.p_star, a.alternatives[j]);
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    bool ok = std::abs(qsum - 1.0) <= 1e-9 && hi - lo <= 1e-8 &&
              a.balance_residual <= 1e-8 && a.exploitation_residual <= 1e-8 &&
              std::abs(a.equilibrium_value * a.lai_robbins_constant - 1.0) <= 1e-12;
    t.check("equilibrium residuals on the 6-arm instance", ok);
  }

  // Frontier robustness bounds.
  {
    const Instance inst = teaser();
    const Extremes ext = extremes(inst);
    bool ok = true;
    for (double beta : {1.0 / 3.0, 0.5, 0.7, 0.9}) {
      const FrontierPoint pt = frontier_point(inst, beta);
      ok = ok && pt.norm_length <= ext.l_star / (1.0 - beta) * (1.0 + 1e-9) &&
           pt.norm_regret <= ext.r_star / beta * (1.0 + 1e-9);
    }
    t.check("frontier robustness bounds", ok);
  }

  // Trial determinism.
  {
    RunConfig rc{teaser(), RuleConfig::make_top_two_fixed(0.7), StoppingRule::heuristic(5000),
                 CostModel::unit(), 5000, 1, 12345, 1};
    const TrialRecord a = run_trial(rc, 0);
    const TrialRecord b = run_trial(rc, 0);
    const bool ok = a.tau == b.tau && a.selected == b.selected &&
                    a.total_regret == b.total_regret && a.counts == b.counts;
    t.check("trial determinism", ok);
  }

  out << (t.failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
  return t.failures == 0 ? 0 : 1;
}

}  // namespace adex::cli
