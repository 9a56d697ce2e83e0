#include "adex/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace adex::cli {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw config_error("config error at " + where + ": " + what);
}

void check_keys(const json& obj, const std::string& section,
                const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key()))
      fail(section + "." + item.key(), "unknown key");
  }
}

const json& require(const json& obj, const std::string& section, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(section + "." + key, "missing required key");
  return *it;
}

double get_number(const json& obj, const std::string& section, const std::string& key) {
  const json& v = require(obj, section, key);
  if (!v.is_number()) fail(section + "." + key, "expected a number");
  return v.get<double>();
}

std::int64_t get_integer(const json& obj, const std::string& section, const std::string& key) {
  const json& v = require(obj, section, key);
  if (!v.is_number_integer()) fail(section + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

std::string get_string(const json& obj, const std::string& section, const std::string& key) {
  const json& v = require(obj, section, key);
  if (!v.is_string()) fail(section + "." + key, "expected a string");
  return v.get<std::string>();
}

Instance parse_instance(const json& j) {
  if (!j.is_object()) fail("instance", "expected an object");
  const std::string family = get_string(j, "instance", "family");
  std::set<std::string> allowed = {"family", "means"};
  RewardFamily fam = RewardFamily::bernoulli();
  if (family == "gaussian") {
    allowed.insert("sigma");
    const double sigma = get_number(j, "instance", "sigma");
    try {
      fam = RewardFamily::gaussian(sigma);
    } catch (const std::exception& e) {
      fail("instance.sigma", e.what());
    }
  } else if (family == "bernoulli") {
    fam = RewardFamily::bernoulli();
  } else if (family == "poisson") {
    fam = RewardFamily::poisson();
  } else {
    fail("instance.family", "must be gaussian, bernoulli, or poisson");
  }
  check_keys(j, "instance", allowed);
  const json& means_j = require(j, "instance", "means");
  if (!means_j.is_array() || means_j.size() < 2)
    fail("instance.means", "expected an array of at least two numbers");
  std::vector<double> means;
  for (const auto& v : means_j) {
    if (!v.is_number()) fail("instance.means", "expected numbers");
    means.push_back(v.get<double>());
  }
  try {
    return Instance(fam, std::move(means));
  } catch (const std::exception& e) {
    fail("instance.means", e.what());
  }
}

CostModel parse_costs(const json& j) {
  if (!j.is_object()) fail("costs", "expected an object");
  const std::string kind = get_string(j, "costs", "kind");
  try {
    if (kind == "length_regret") {
      check_keys(j, "costs", {"kind", "c"});
      return CostModel::length_regret(get_number(j, "costs", "c"));
    }
    if (kind == "unit") {
      check_keys(j, "costs", {"kind"});
      return CostModel::unit();
    }
    if (kind == "per_arm") {
      check_keys(j, "costs", {"kind", "per_arm"});
      const json& arr = require(j, "costs", "per_arm");
      if (!arr.is_array()) fail("costs.per_arm", "expected an array of numbers");
      std::vector<double> costs;
      for (const auto& v : arr) {
        if (!v.is_number()) fail("costs.per_arm", "expected numbers");
        costs.push_back(v.get<double>());
      }
      return CostModel::per_arm(std::move(costs));
    }
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    fail("costs", e.what());
  }
  fail("costs.kind", "must be length_regret, unit, or per_arm");
}

SamplerKind parse_sampler(const json& j) {
  const std::string s = get_string(j, "rule", "sampler");
  if (s == "exact") return SamplerKind::exact_probabilities;
  if (s == "rejection") return SamplerKind::rejection;
  fail("rule.sampler", "must be exact or rejection");
}

RuleConfig parse_rule(const json& j, const std::optional<CostModel>& costs) {
  if (!j.is_object()) fail("rule", "expected an object");
  const std::string kind = get_string(j, "rule", "kind");
  auto need_costs = [&](const char* who) -> CostModel {
    if (!costs) fail("rule.kind", std::string(who) + " requires a costs section");
    return *costs;
  };
  try {
    if (kind == "epsilon_greedy") {
      check_keys(j, "rule", {"kind", "epsilon"});
      return RuleConfig::make_epsilon_greedy(get_number(j, "rule", "epsilon"));
    }
    std::int64_t batch = 1;
    if (j.contains("batch")) {
      batch = get_integer(j, "rule", "batch");
      if (batch < 1) fail("rule.batch", "must be a positive integer");
    }
    if (kind == "thompson") {
      check_keys(j, "rule", {"kind", "batch"});
      return RuleConfig::make_thompson(batch);
    }
    if (kind == "direct_tracking") {
      check_keys(j, "rule", {"kind", "batch"});
      return RuleConfig::make_direct_tracking(need_costs("direct_tracking"), batch);
    }
    if (kind == "top_two_ts") {
      check_keys(j, "rule", {"kind", "coin", "beta", "sampler", "max_tries", "batch"});
      const std::string coin = get_string(j, "rule", "coin");
      const SamplerKind sampler =
          j.contains("sampler") ? parse_sampler(j) : SamplerKind::exact_probabilities;
      RuleConfig cfg;
      if (coin == "fixed_beta") {
        cfg = RuleConfig::make_top_two_fixed(get_number(j, "rule", "beta"), sampler, batch);
      } else if (coin == "cost_aware") {
        if (j.contains("beta")) fail("rule.beta", "not applicable to the cost_aware coin");
        cfg = RuleConfig::make_top_two_cost_aware(need_costs("cost_aware coin"), sampler, batch);
      } else {
        fail("rule.coin", "must be cost_aware or fixed_beta");
      }
      if (j.contains("max_tries")) {
        const std::int64_t mt = get_integer(j, "rule", "max_tries");
        if (mt < 1) fail("rule.max_tries", "must be a positive integer");
        cfg.max_tries = static_cast<int>(mt);
      }
      return cfg;
    }
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    fail("rule", e.what());
  }
  fail("rule.kind", "must be epsilon_greedy, thompson, top_two_ts, or direct_tracking");
}

StopKind parse_stop(const json& j) {
  if (!j.is_object()) fail("stop", "expected an object");
  check_keys(j, "stop", {"kind"});
  const std::string kind = get_string(j, "stop", "kind");
  if (kind == "exact") return StopKind::exact_threshold;
  if (kind == "heuristic") return StopKind::heuristic_quantile;
  if (kind == "never") return StopKind::never;
  fail("stop.kind", "must be exact, heuristic, or never");
}

RunSection parse_run(const json& j) {
  if (!j.is_object()) fail("run", "expected an object");
  check_keys(j, "run", {"n", "trials", "base_seed"});
  RunSection run;
  run.n = get_integer(j, "run", "n");
  if (run.n < 2) fail("run.n", "population size must be >= 2");
  run.trials = get_integer(j, "run", "trials");
  if (run.trials < 1) fail("run.trials", "must be >= 1");
  const json& seed = require(j, "run", "base_seed");
  if (!seed.is_number_integer() && !seed.is_number_unsigned())
    fail("run.base_seed", "expected an integer");
  run.base_seed = seed.get<std::uint64_t>();
  return run;
}

FrontierGrid parse_frontier(const json& j) {
  if (!j.is_object()) fail("frontier", "expected an object");
  check_keys(j, "frontier", {"beta_start", "beta_stop", "beta_step"});
  FrontierGrid g;
  if (j.contains("beta_start")) g.beta_start = get_number(j, "frontier", "beta_start");
  if (j.contains("beta_stop")) g.beta_stop = get_number(j, "frontier", "beta_stop");
  if (j.contains("beta_step")) g.beta_step = get_number(j, "frontier", "beta_step");
  if (!(g.beta_start > 0.0 && g.beta_stop < 1.0 && g.beta_start <= g.beta_stop))
    fail("frontier", "grid must satisfy 0 < beta_start <= beta_stop < 1");
  if (!(g.beta_step > 0.0)) fail("frontier.beta_step", "must be positive");
  return g;
}

}  // namespace

std::vector<double> FrontierGrid::betas() const {
  std::vector<double> out;
  const auto steps = static_cast<std::int64_t>((beta_stop - beta_start) / beta_step + 1e-9);
  for (std::int64_t i = 0; i <= steps; ++i) out.push_back(beta_start + beta_step * i);
  return out;
}

ConfigFile parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  if (!root.is_object()) throw config_error("config error: top level must be an object");
  check_keys(root, "<top>", {"instance", "costs", "rule", "stop", "run", "output", "frontier"});

  ConfigFile cfg;
  cfg.hash = fnv1a(text);
  if (root.contains("instance")) cfg.instance = parse_instance(root["instance"]);
  if (root.contains("costs")) cfg.costs = parse_costs(root["costs"]);
  if (root.contains("rule")) cfg.rule = parse_rule(root["rule"], cfg.costs);
  if (root.contains("stop")) cfg.stop = parse_stop(root["stop"]);
  if (root.contains("run")) cfg.run = parse_run(root["run"]);
  if (root.contains("output")) {
    const json& out = root["output"];
    if (!out.is_object()) throw config_error("config error at output: expected an object");
    check_keys(out, "output", {"dir"});
    cfg.output_dir = get_string(out, "output", "dir");
  }
  if (root.contains("frontier")) cfg.frontier = parse_frontier(root["frontier"]);

  if (cfg.instance && root.contains("costs") &&
      root["costs"].value("kind", std::string()) == "per_arm") {
    // Surface length mismatches at load time rather than mid-run.
    if (root["costs"]["per_arm"].size() != static_cast<std::size_t>(cfg.instance->k()))
      fail("costs.per_arm", "length does not match instance.means");
  }
  return cfg;
}

ConfigFile load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("config error: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace adex::cli
