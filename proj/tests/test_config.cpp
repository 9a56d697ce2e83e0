#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adex/cli/config.hpp"

using namespace adex;
using namespace adex::cli;

namespace {

const char* kFullConfig = R"({
  "instance": {"family": "gaussian", "sigma": 1.0, "means": [0, 0.2, 0.4, 0.6, 0.8, 1.0]},
  "costs": {"kind": "length_regret", "c": 1.0},
  "rule": {"kind": "top_two_ts", "coin": "cost_aware", "sampler": "exact", "batch": 500},
  "stop": {"kind": "exact"},
  "run": {"n": 1000000, "trials": 500, "base_seed": 7},
  "output": {"dir": "out"},
  "frontier": {"beta_start": 0.1, "beta_stop": 0.9, "beta_step": 0.1}
})";

}  // namespace

TEST_CASE("full config parses") {
  const ConfigFile cfg = parse_config(kFullConfig);
  REQUIRE(cfg.instance.has_value());
  CHECK(cfg.instance->k() == 6);
  CHECK(cfg.instance->family().sigma() == 1.0);
  REQUIRE(cfg.costs.has_value());
  CHECK(cfg.costs->kind() == CostKind::length_regret);
  REQUIRE(cfg.rule.has_value());
  CHECK(cfg.rule->kind == RuleKind::top_two_ts);
  CHECK(cfg.rule->coin == CoinKind::cost_aware);
  CHECK(cfg.rule->batch == 500);
  REQUIRE(cfg.stop.has_value());
  CHECK(*cfg.stop == StopKind::exact_threshold);
  REQUIRE(cfg.run.has_value());
  CHECK(cfg.run->n == 1000000);
  CHECK(cfg.run->base_seed == 7);
  CHECK(cfg.output_dir == "out");
  REQUIRE(cfg.frontier.has_value());
  CHECK(cfg.frontier->betas().size() == 9);
  CHECK(cfg.hash != 0);
}

TEST_CASE("config hash depends on the bytes") {
  const ConfigFile a = parse_config(kFullConfig);
  std::string text(kFullConfig);
  text.replace(text.find("500"), 3, "501");
  const ConfigFile b = parse_config(text);
  CHECK(a.hash != b.hash);
}

TEST_CASE("unknown keys are rejected everywhere") {
  CHECK_THROWS_AS((void)parse_config(R"({"bogus": 1})"), config_error);
  CHECK_THROWS_AS(
      (void)parse_config(R"({"instance": {"family": "bernoulli", "means": [0.2, 0.4], "zeta": 1}})"),
      config_error);
  CHECK_THROWS_AS((void)parse_config(R"({"stop": {"kind": "never", "extra": true}})"),
                  config_error);
  CHECK_THROWS_AS((void)parse_config(R"({"run": {"n": 10, "trials": 1, "base_seed": 0, "x": 1}})"),
                  config_error);
}

TEST_CASE("inapplicable keys are rejected") {
  // epsilon does not belong to a top-two rule, beta not to a cost-aware coin.
  CHECK_THROWS_AS(
      (void)parse_config(R"({"rule": {"kind": "top_two_ts", "coin": "fixed_beta",
                             "beta": 0.5, "epsilon": 0.1}})"),
      config_error);
  CHECK_THROWS_AS(
      (void)parse_config(R"({"costs": {"kind": "unit"},
                             "rule": {"kind": "top_two_ts", "coin": "cost_aware", "beta": 0.5}})"),
      config_error);
  CHECK_THROWS_AS((void)parse_config(R"({"costs": {"kind": "unit", "c": 2.0}})"), config_error);
}

TEST_CASE("field validation mirrors module preconditions") {
  CHECK_THROWS_AS(
      (void)parse_config(R"({"instance": {"family": "gaussian", "sigma": 0.0, "means": [0, 1]}})"),
      config_error);
  CHECK_THROWS_AS(
      (void)parse_config(R"({"instance": {"family": "bernoulli", "means": [0.0, 0.5]}})"),
      config_error);
  CHECK_THROWS_AS((void)parse_config(R"({"instance": {"family": "gaussian", "sigma": 1,
                                          "means": [1]}})"),
                  config_error);
  CHECK_THROWS_AS(
      (void)parse_config(R"({"rule": {"kind": "top_two_ts", "coin": "fixed_beta", "beta": 1.0}})"),
      config_error);
  CHECK_THROWS_AS((void)parse_config(R"({"rule": {"kind": "epsilon_greedy", "epsilon": 1.5}})"),
                  config_error);
  CHECK_THROWS_AS((void)parse_config(R"({"costs": {"kind": "length_regret", "c": -1}})"),
                  config_error);
  CHECK_THROWS_AS((void)parse_config(R"({"run": {"n": 1, "trials": 1, "base_seed": 0}})"),
                  config_error);
  CHECK_THROWS_AS((void)parse_config(R"({"run": {"n": 10, "trials": 0, "base_seed": 0}})"),
                  config_error);
  CHECK_THROWS_AS((void)parse_config(R"({"frontier": {"beta_start": 0.9, "beta_stop": 0.1}})"),
                  config_error);
  CHECK_THROWS_AS((void)parse_config("not json at all"), config_error);
}

TEST_CASE("per-arm cost length is checked against the instance") {
  CHECK_THROWS_AS((void)parse_config(R"({
    "instance": {"family": "gaussian", "sigma": 1.0, "means": [0, 1]},
    "costs": {"kind": "per_arm", "per_arm": [1.0, 2.0, 3.0]}
  })"),
                  config_error);
}

TEST_CASE("rules needing costs demand a costs section") {
  CHECK_THROWS_AS((void)parse_config(R"({"rule": {"kind": "direct_tracking"}})"), config_error);
  const ConfigFile ok = parse_config(R"({
    "costs": {"kind": "unit"},
    "rule": {"kind": "direct_tracking", "batch": 100}
  })");
  CHECK(ok.rule->kind == RuleKind::direct_tracking);
}

TEST_CASE("missing file is a config error") {
  CHECK_THROWS_AS((void)load_config_file("/nonexistent/path.json"), config_error);
}
