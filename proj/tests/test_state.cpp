#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/test_support.hpp"

using namespace adex;
using namespace adex::testing;

TEST_CASE("update bookkeeping") {
  ExperimentState st(RewardFamily::gaussian(1.0), 3);
  CHECK(st.t() == 0);
  CHECK(st.mean(0) == 0.0);
  CHECK(std::isinf(st.std_error(0)));

  st.update(0, 1.5);
  CHECK(st.t() == 1);
  CHECK(st.count(0) == 1);
  CHECK(st.count(1) == 0);
  CHECK(st.mean(0) == 1.5);

  st.update(0, 3.0);
  st.update(0, 1.0);
  // mean over rewards 1.5, 3, 1
  CHECK(st.mean(0) == doctest::Approx(11.0 / 6.0).epsilon(1e-15));

  Rng rng(3);
  std::int64_t total = st.t();
  for (int i = 0; i < 500; ++i) {
    st.update(rng.uniform_int(3), rng.normal());
    ++total;
  }
  std::int64_t sum = 0;
  for (int i = 0; i < 3; ++i) sum += st.count(i);
  CHECK(sum == total);
  CHECK(sum == st.t());

  CHECK_THROWS_AS(st.update(3, 0.0), std::out_of_range);
  CHECK_THROWS_AS(st.update(-1, 0.0), std::out_of_range);
}

TEST_CASE("two-sample arithmetic mean example") {
  ExperimentState st(RewardFamily::gaussian(1.0), 2);
  st.update(0, 1.0);
  st.update(0, 3.0);
  CHECK(st.mean(0) == 2.0);
}

TEST_CASE("z statistic") {
  const auto st = make_state(RewardFamily::gaussian(1.0), {4, 4}, {1.0, 0.0});
  CHECK(st.z_statistic(0, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  ExperimentState fresh(RewardFamily::gaussian(1.0), 2);
  fresh.update(1, 0.4);
  CHECK(fresh.z_statistic(0, 1) == 0.0);  // unsampled arm contributes Z = 0
  CHECK(fresh.z_statistic(1, 0) == 0.0);

  ExperimentState bern(RewardFamily::bernoulli(), 2);
  CHECK_THROWS_AS((void)bern.z_statistic(0, 1), std::logic_error);
}

TEST_CASE("z statistic antisymmetry on random states") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + rng.uniform_int(4);
    ExperimentState st(RewardFamily::gaussian(0.8), k);
    for (int i = 0; i < k; ++i) {
      const int n = 1 + rng.uniform_int(30);
      for (int s = 0; s < n; ++s) st.update(i, rng.normal());
    }
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        CHECK(st.z_statistic(i, j) == doctest::Approx(-st.z_statistic(j, i)).epsilon(1e-12));
  }
}

TEST_CASE("chernoff information closed form") {
  const RewardFamily g = RewardFamily::gaussian(1.0);
  const auto r = chernoff_info(g, 1.0, 0.0, 0.5, 0.5);
  CHECK(r.value == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(r.minimizer == doctest::Approx(0.5).epsilon(1e-12));

  const auto degenerate = chernoff_info(g, 1.0, 0.0, 0.3, 0.0);
  CHECK(degenerate.value == 0.0);
  CHECK(degenerate.minimizer == 1.0);

  const auto zero = chernoff_info(g, 1.0, 0.0, 0.0, 0.0);
  CHECK(zero.value == 0.0);
  CHECK(zero.minimizer == 0.0);

  CHECK_THROWS_AS((void)chernoff_info(g, 0.0, 1.0, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS((void)chernoff_info(g, 1.0, 0.0, -0.1, 0.5), std::invalid_argument);
}

TEST_CASE("bernoulli chernoff matches the million-point grid oracle") {
  const RewardFamily b = RewardFamily::bernoulli();
  const auto r = chernoff_info(b, 0.8, 0.2, 0.3, 0.1);
  const double oracle = grid_chernoff(b, 0.8, 0.2, 0.3, 0.1);
  CHECK(std::abs(r.value - oracle) <= 1e-6 * oracle);
}

TEST_CASE("chernoff matches grid oracle across families") {
  Rng rng(22);
  const RewardFamily fams[] = {RewardFamily::gaussian(1.3), RewardFamily::bernoulli(),
                               RewardFamily::poisson()};
  for (const auto& fam : fams) {
    for (int i = 0; i < 12; ++i) {
      double lo = 0.0, hi = 0.0;
      switch (fam.kind()) {
        case FamilyKind::gaussian:
          lo = -1.0 + rng.uniform();
          hi = lo + 0.2 + 1.5 * rng.uniform();
          break;
        case FamilyKind::bernoulli:
          lo = 0.05 + 0.4 * rng.uniform();
          hi = lo + 0.05 + (0.9 - lo - 0.05) * rng.uniform();
          break;
        case FamilyKind::poisson:
          lo = 0.3 + 2.0 * rng.uniform();
          hi = lo + 0.2 + 3.0 * rng.uniform();
          break;
      }
      const double wi = 0.05 + rng.uniform();
      const double wj = 0.05 + rng.uniform();
      const auto r = chernoff_info(fam, hi, lo, wi, wj);
      const double oracle = grid_chernoff(fam, hi, lo, wi, wj, 200000);
      CHECK(std::abs(r.value - oracle) <= 1e-6 * std::max(oracle, 1e-12));
    }
  }
}

TEST_CASE("chernoff value is monotone in each weight") {
  Rng rng(23);
  const RewardFamily g = RewardFamily::gaussian(1.0);
  for (int i = 0; i < 300; ++i) {
    const double tj = rng.normal();
    const double ti = tj + 0.1 + rng.uniform();
    const double wi = rng.uniform();
    const double wj = rng.uniform();
    const double bump = 0.01 + rng.uniform();
    CHECK(chernoff_info(g, ti, tj, wi + bump, wj).value >=
          chernoff_info(g, ti, tj, wi, wj).value - 1e-12);
    CHECK(chernoff_info(g, ti, tj, wi, wj + bump).value >=
          chernoff_info(g, ti, tj, wi, wj).value - 1e-12);
  }
}

TEST_CASE("stopping statistic equals min Z^2/2 for gaussian states") {
  Rng rng(24);
  for (int trial = 0; trial < 2000; ++trial) {
    const int k = 2 + rng.uniform_int(5);
    ExperimentState st(RewardFamily::gaussian(0.5 + 2.0 * rng.uniform()), k);
    for (int i = 0; i < k; ++i) {
      const int n = 1 + rng.uniform_int(40);
      for (int s = 0; s < n; ++s) st.update(i, rng.normal() + 0.4 * i);
    }
    const auto stat = stopping_statistic(st);
    double min_half_z2 = std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j) {
      if (j == stat.leader) continue;
      const double z = st.z_statistic(stat.leader, j);
      min_half_z2 = std::min(min_half_z2, 0.5 * z * z);
    }
    CHECK(std::abs(stat.value - min_half_z2) <= 1e-10 * std::max(1.0, min_half_z2));
  }
}

TEST_CASE("stopping statistic conventions") {
  // Unsampled arm: the statistic stays 0 so the experiment cannot stop early.
  ExperimentState st(RewardFamily::gaussian(1.0), 3);
  st.update(0, 5.0);
  st.update(1, 1.0);
  CHECK(stopping_statistic(st).value == 0.0);

  // All means equal: zero gap, zero statistic.
  const auto tied = make_state(RewardFamily::gaussian(1.0), {5, 7, 3}, {1.0, 1.0, 1.0});
  const auto stat = stopping_statistic(tied);
  CHECK(stat.leader == 0);  // lowest index on ties
  CHECK(stat.value == 0.0);

  // Leader is the lowest-index argmax.
  const auto dup = make_state(RewardFamily::gaussian(1.0), {4, 4, 4}, {0.0, 2.0, 2.0});
  CHECK(stopping_statistic(dup).leader == 1);
}
