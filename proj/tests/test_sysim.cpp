#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spark/sysim.hpp"

using namespace spark;

namespace {

struct ZeroRng {
  double next_double() { return 0.0; }
};

}  // namespace

TEST_CASE("per-user report is 220 bits and scales linearly") {
  SimConfig cfg;
  CHECK(cfg.nr_report_bits() == 220);
  cfg.users = 50;
  CHECK(baseline_overhead_bits(cfg) == 11000);
  cfg.users = 10;
  CHECK(baseline_overhead_bits(cfg) == 2200);
  cfg.users = 0;
  CHECK(baseline_overhead_bits(cfg) == 0);
}

TEST_CASE("poisson inversion walks the CDF") {
  CHECK(poisson_inverse_cdf(0.0, 2.0) == 0);
  // P(X=0) = e^-2 ~ 0.1353; just below goes to 0, just above to 1
  CHECK(poisson_inverse_cdf(0.135, 2.0) == 0);
  CHECK(poisson_inverse_cdf(0.136, 2.0) == 1);
  CHECK(poisson_inverse_cdf(0.99999, 2.0) >= 8);
  CHECK(poisson_inverse_cdf(0.5, 0.0) == 0);
}

TEST_CASE("degenerate rng gives the minimum-path overhead") {
  SimConfig cfg;
  cfg.users = 10;
  cfg.coherence_snapshots = 100.0;
  ZeroRng rng;
  CHECK(spark_overhead_trial(cfg, rng) == doctest::Approx(487.68).epsilon(1e-12));
}

TEST_CASE("trial mean and std match the analytic values") {
  struct Combo {
    int users;
    double coherence;
    double lambda;
  };
  for (const Combo& combo : {Combo{50, 100.0, 2.0}, Combo{10, 25.0, 2.0},
                             Combo{30, 400.0, 0.7}, Combo{50, 10.0, 4.0}}) {
    SimConfig cfg;
    cfg.users = combo.users;
    cfg.coherence_snapshots = combo.coherence;
    cfg.poisson_lambda = combo.lambda;
    cfg.trials = 100000;
    cfg.rng_seed = 2718;
    const SimReport report = run_simulation(cfg);

    const double analytic_mean =
        768.0 / combo.coherence + combo.users * 48.0 * (1.0 + combo.lambda);
    const double analytic_std = 48.0 * std::sqrt(combo.lambda * combo.users);
    const double tol = 3.0 * analytic_std / std::sqrt(static_cast<double>(cfg.trials));
    CHECK(std::abs(report.spark_bits_mean - analytic_mean) <= tol);
    CHECK(report.spark_bits_std == doctest::Approx(analytic_std).epsilon(0.02));
    CHECK(report.saturated_trials == 0);
  }
}

TEST_CASE("goodput bookkeeping on the mean operating points") {
  SimConfig cfg;
  cfg.users = 50;
  const GoodputGain g = goodput_gain(cfg, 11000.0, 7207.68);
  CHECK(g.nr_slots == doctest::Approx(2.685546875));
  CHECK(g.spark_slots == doctest::Approx(1.7596875));
  CHECK(g.gain_fraction * 100.0 == doctest::Approx(12.66).epsilon(0.002));
  CHECK(g.uplift_mbps == doctest::Approx(13.89).epsilon(0.002));
  CHECK_FALSE(g.saturated);

  const GoodputGain equal = goodput_gain(cfg, 5000.0, 5000.0);
  CHECK(equal.gain_fraction == 0.0);
  CHECK(equal.uplift_mbps == 0.0);

  const GoodputGain u10 = goodput_gain(cfg, 2200.0, 1447.68);
  CHECK(u10.gain_fraction * 100.0 == doctest::Approx(1.94).epsilon(0.005));
  CHECK(u10.uplift_mbps == doctest::Approx(2.76).epsilon(0.005));

  const GoodputGain sat = goodput_gain(cfg, 41000.0, 1000.0);
  CHECK(sat.saturated);
}

TEST_CASE("simulation determinism and seed independence") {
  SimConfig cfg;
  cfg.users = 30;
  cfg.trials = 20000;
  cfg.rng_seed = 5;
  const SimReport a = run_simulation(cfg);
  const SimReport b = run_simulation(cfg);
  CHECK(a.spark_bits_mean == b.spark_bits_mean);
  CHECK(a.spark_bits_std == b.spark_bits_std);
  CHECK(a.gain_pct_mean == b.gain_pct_mean);

  cfg.rng_seed = 6;
  const SimReport c = run_simulation(cfg);
  CHECK(c.spark_bits_mean != a.spark_bits_mean);
  // different seeds still agree statistically
  const double tol = 5.0 * a.spark_bits_std / std::sqrt(static_cast<double>(cfg.trials));
  CHECK(std::abs(c.spark_bits_mean - a.spark_bits_mean) < 2.0 * tol);
}

TEST_CASE("monotonicity in users and coherence") {
  SimConfig cfg;
  cfg.trials = 4000;
  double prev_nr = -1.0;
  double prev_spark = -1.0;
  for (int users : {5, 15, 30, 50}) {
    cfg.users = users;
    const SimReport r = run_simulation(cfg);
    CHECK(r.nr_bits_mean > prev_nr);
    CHECK(r.spark_bits_mean > prev_spark);
    prev_nr = r.nr_bits_mean;
    prev_spark = r.spark_bits_mean;
  }

  cfg.users = 50;
  double prev = std::numeric_limits<double>::infinity();
  for (double t : {10.0, 50.0, 100.0, 500.0}) {
    cfg.coherence_snapshots = t;
    const SimReport r = run_simulation(cfg);
    CHECK(r.spark_bits_mean <= prev);
    prev = r.spark_bits_mean;
  }
}

TEST_CASE("gain stays positive across the user range") {
  SimConfig cfg;
  cfg.trials = 2000;
  for (int users = 1; users <= 50; users += 7) {
    cfg.users = users;
    const SimReport r = run_simulation(cfg);
    CHECK(r.gain_pct_mean > 0.0);
  }
}

TEST_CASE("coherence sweep converges to the amortization-free limit") {
  SimConfig cfg;
  cfg.users = 50;
  cfg.trials = 400000;  // mean-gain noise ~0.0025 pp, budget is 0.01 pp
  cfg.rng_seed = 99;
  const auto reports = coherence_sweep(cfg, {100.0, 1e9});
  REQUIRE(reports.size() == 2);

  // analytic limit: no broadcast term at all
  const double spark_mean_limit = 50.0 * 48.0 * 3.0;
  const GoodputGain limit = goodput_gain(cfg, 11000.0, spark_mean_limit);
  CHECK(std::abs(reports[1].gain_pct_mean - limit.gain_fraction * 100.0) <= 0.01);

  // single-T sweep equals a direct run
  cfg.coherence_snapshots = 100.0;
  const SimReport direct = run_simulation(cfg);
  CHECK(reports[0].gain_pct_mean == direct.gain_pct_mean);
  CHECK(reports[0].spark_bits_mean == direct.spark_bits_mean);
}

TEST_CASE("input validation") {
  SimConfig cfg;
  cfg.trials = 0;
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
  cfg = SimConfig{};
  cfg.users = 0;
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
  cfg = SimConfig{};
  cfg.users = 200;  // 44,000 bits > 40,960-bit budget
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
  cfg = SimConfig{};
  CHECK_THROWS_AS(coherence_sweep(cfg, {}), std::invalid_argument);
}
