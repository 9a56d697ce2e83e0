#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/test_support.hpp"

using namespace adex;

TEST_CASE("kl closed forms") {
  const RewardFamily g = RewardFamily::gaussian(1.0);
  CHECK(g.kl(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g.kl(0.7, 0.7) == 0.0);

  const RewardFamily b = RewardFamily::bernoulli();
  // 0.5 ln 2 + 0.5 ln(2/3), evaluated independently at high precision.
  CHECK(std::abs(b.kl(0.5, 0.25) - 0.1438410362258904) <= 1e-12);
  CHECK(b.kl(0.3, 0.3) == 0.0);

  const RewardFamily p = RewardFamily::poisson();
  CHECK(p.kl(2.0, 2.0) == 0.0);
  CHECK(std::abs(p.kl(2.0, 1.0) - (2.0 * std::log(2.0) - 1.0)) <= 1e-12);
}

TEST_CASE("kl boundary limits and domain errors") {
  const RewardFamily b = RewardFamily::bernoulli();
  CHECK(b.kl(0.0, 0.0) == 0.0);
  CHECK(b.kl(0.0, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(std::isinf(b.kl(0.5, 0.0)));
  CHECK(std::isinf(b.kl(0.5, 1.0)));
  CHECK_THROWS_AS((void)b.kl(-0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS((void)b.kl(0.5, 1.1), std::invalid_argument);

  const RewardFamily p = RewardFamily::poisson();
  CHECK(p.kl(0.0, 3.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::isinf(p.kl(1.0, 0.0)));
  CHECK_THROWS_AS((void)p.kl(-1.0, 2.0), std::invalid_argument);
}

TEST_CASE("kl nonnegative with equality iff equal") {
  Rng rng(11);
  const RewardFamily fams[] = {RewardFamily::gaussian(0.7), RewardFamily::bernoulli(),
                               RewardFamily::poisson()};
  for (const auto& fam : fams) {
    for (int i = 0; i < 2000; ++i) {
      double a = 0.0, b = 0.0;
      switch (fam.kind()) {
        case FamilyKind::gaussian:
          a = 3.0 * rng.normal();
          b = 3.0 * rng.normal();
          break;
        case FamilyKind::bernoulli:
          a = 0.01 + 0.98 * rng.uniform();
          b = 0.01 + 0.98 * rng.uniform();
          break;
        case FamilyKind::poisson:
          a = 0.05 + 12.0 * rng.uniform();
          b = 0.05 + 12.0 * rng.uniform();
          break;
      }
      const double kl = fam.kl(a, b);
      CHECK(kl >= 0.0);
      if (a != b) CHECK(kl > 0.0);
      CHECK(fam.kl(a, a) == 0.0);
    }
  }
}

TEST_CASE("kl convex in the second argument (midpoint test)") {
  Rng rng(12);
  const RewardFamily fams[] = {RewardFamily::gaussian(1.4), RewardFamily::bernoulli(),
                               RewardFamily::poisson()};
  for (const auto& fam : fams) {
    for (int i = 0; i < 500; ++i) {
      double a = 0.0, b1 = 0.0, b2 = 0.0;
      switch (fam.kind()) {
        case FamilyKind::gaussian:
          a = 2.0 * rng.normal();
          b1 = 2.0 * rng.normal();
          b2 = 2.0 * rng.normal();
          break;
        case FamilyKind::bernoulli:
          a = 0.05 + 0.9 * rng.uniform();
          b1 = 0.05 + 0.9 * rng.uniform();
          b2 = 0.05 + 0.9 * rng.uniform();
          break;
        case FamilyKind::poisson:
          a = 0.2 + 8.0 * rng.uniform();
          b1 = 0.2 + 8.0 * rng.uniform();
          b2 = 0.2 + 8.0 * rng.uniform();
          break;
      }
      const double mid = fam.kl(a, 0.5 * (b1 + b2));
      const double avg = 0.5 * (fam.kl(a, b1) + fam.kl(a, b2));
      CHECK(mid <= avg + 1e-9);
    }
  }
}

TEST_CASE("gaussian kl matches the closed form for random sigma") {
  Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    const double sigma = 0.2 + 3.0 * rng.uniform();
    const RewardFamily g = RewardFamily::gaussian(sigma);
    const double a = 4.0 * rng.normal();
    const double b = 4.0 * rng.normal();
    const double expected = (a - b) * (a - b) / (2.0 * sigma * sigma);
    CHECK(std::abs(g.kl(a, b) - expected) <= 1e-12 * std::max(1.0, expected));
  }
}

TEST_CASE("eta_derivative closed forms and finite differences") {
  CHECK(RewardFamily::gaussian(2.0).eta_derivative(0.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(RewardFamily::bernoulli().eta_derivative(0.5) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(RewardFamily::poisson().eta_derivative(2.0) == doctest::Approx(0.5).epsilon(1e-14));

  CHECK_THROWS_AS((void)RewardFamily::bernoulli().eta_derivative(0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)RewardFamily::poisson().eta_derivative(0.0), std::invalid_argument);

  // Central finite difference of the natural parameter map.
  Rng rng(14);
  const double sigma = 1.7;
  auto eta_gauss = [sigma](double th) { return th / (sigma * sigma); };
  auto eta_bern = [](double th) { return std::log(th / (1.0 - th)); };
  auto eta_pois = [](double th) { return std::log(th); };
  for (int i = 0; i < 300; ++i) {
    {
      const double th = 3.0 * rng.normal();
      const double h = 1e-5 * std::max(1.0, std::abs(th));
      const double fd = (eta_gauss(th + h) - eta_gauss(th - h)) / (2.0 * h);
      const double d = RewardFamily::gaussian(sigma).eta_derivative(th);
      CHECK(std::abs(fd - d) <= 1e-6 * std::abs(d));
    }
    {
      const double th = 0.05 + 0.9 * rng.uniform();
      const double h = 1e-6;
      const double fd = (eta_bern(th + h) - eta_bern(th - h)) / (2.0 * h);
      const double d = RewardFamily::bernoulli().eta_derivative(th);
      CHECK(std::abs(fd - d) <= 1e-6 * std::abs(d));
    }
    {
      const double th = 0.1 + 10.0 * rng.uniform();
      const double h = 1e-6 * th;
      const double fd = (eta_pois(th + h) - eta_pois(th - h)) / (2.0 * h);
      const double d = RewardFamily::poisson().eta_derivative(th);
      CHECK(std::abs(fd - d) <= 1e-6 * std::abs(d));
    }
  }
}

TEST_CASE("sampling determinism and domain checks") {
  const RewardFamily g = RewardFamily::gaussian(1.0);
  Rng a(99), b(99);
  for (int i = 0; i < 1000; ++i) CHECK(g.sample(0.3, a) == g.sample(0.3, b));

  CHECK_THROWS_AS((void)RewardFamily::bernoulli().sample(1.0, a), std::invalid_argument);
  CHECK_THROWS_AS((void)RewardFamily::poisson().sample(0.0, a), std::invalid_argument);
}

TEST_CASE("near-degenerate bernoulli concentration") {
  const RewardFamily b = RewardFamily::bernoulli();
  const double theta = 1.0 - 1e-12;
  Rng rng(5);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += b.sample(theta, rng);
  CHECK(sum / n > 0.999);
}

TEST_CASE("gaussian sample mean obeys the CLT bound") {
  const RewardFamily g = RewardFamily::gaussian(1.0);
  Rng rng(6);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += g.sample(0.0, rng);
  // 3 sigma / sqrt(N) ~= 0.003; the stated budget is 0.01.
  CHECK(std::abs(sum / n) < 0.01);
}

TEST_CASE("poisson sampler mean sanity") {
  const RewardFamily p = RewardFamily::poisson();
  Rng rng(7);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += p.sample(4.0, rng);
  CHECK(std::abs(sum / n - 4.0) < 0.02);
}

TEST_CASE("instance validation and best-arm queries") {
  CHECK_THROWS_AS(Instance(RewardFamily::gaussian(1.0), {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Instance(RewardFamily::bernoulli(), {0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(Instance(RewardFamily::poisson(), {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS((void)RewardFamily::gaussian(0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)RewardFamily::gaussian(-1.0), std::invalid_argument);

  const Instance tied(RewardFamily::gaussian(1.0), {1.0, 1.0, 0.0});
  CHECK_FALSE(tied.has_unique_best());
  CHECK_THROWS_AS((void)tied.best_arm(), std::logic_error);

  const Instance inst = testing::gaussian_instance({0.2, 0.9, 0.5});
  CHECK(inst.has_unique_best());
  CHECK(inst.best_arm() == 1);
  CHECK(inst.gap(0) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(inst.gap(1) == 0.0);
}
