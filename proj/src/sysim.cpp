#include "spark/sysim.hpp"

#include <cmath>
#include <stdexcept>

namespace spark {

int poisson_inverse_cdf(double u, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("poisson: lambda must be >= 0");
  int k = 0;
  double p = std::exp(-lambda);
  double cdf = p;
  // u in [0, 1): walk the CDF. The loop bound only guards against a
  // pathological u extremely close to 1.
  while (u >= cdf && k < 1000000) {
    ++k;
    p *= lambda / k;
    cdf += p;
  }
  return k;
}

long long baseline_overhead_bits(const SimConfig& cfg) {
  if (cfg.users < 0) throw std::invalid_argument("baseline_overhead: negative users");
  return static_cast<long long>(cfg.users) * cfg.nr_report_bits();
}

GoodputGain goodput_gain(const SimConfig& cfg, double nr_bits, double spark_bits) {
  GoodputGain g;
  g.nr_slots = nr_bits / cfg.slot_capacity_bits;
  g.spark_slots = spark_bits / cfg.slot_capacity_bits;
  const double slots = static_cast<double>(cfg.uplink_slots);
  g.nr_data_fraction = (slots - g.nr_slots) / slots;
  g.spark_data_fraction = (slots - g.spark_slots) / slots;
  if (g.nr_data_fraction <= 0.0 || g.spark_data_fraction <= 0.0) {
    g.saturated = true;
    return g;
  }
  g.gain_fraction = g.spark_data_fraction / g.nr_data_fraction - 1.0;
  g.uplift_mbps = (g.spark_data_fraction - g.nr_data_fraction) * cfg.link_capacity_mbps;
  return g;
}

namespace {

struct RunningStats {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double stddev() const {
    return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
  }
};

}  // namespace

SimReport run_simulation(const SimConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("run_simulation: trials must be >= 1");
  if (cfg.users < 1) throw std::invalid_argument("run_simulation: users must be >= 1");
  if (cfg.coherence_snapshots <= 0.0) {
    throw std::invalid_argument("run_simulation: coherence must be positive");
  }
  const double nr_bits = static_cast<double>(baseline_overhead_bits(cfg));
  if (nr_bits >= cfg.budget_bits()) {
    throw std::invalid_argument("run_simulation: baseline overhead saturates the budget");
  }

  SimReport report;
  report.users = cfg.users;
  report.trials = cfg.trials;
  report.seed = cfg.rng_seed;
  report.coherence_snapshots = cfg.coherence_snapshots;
  report.uplink_slots = cfg.uplink_slots;

  RunningStats spark_bits_stats;
  RunningStats gain_stats;
  RunningStats uplift_stats;

  for (long long t = 0; t < cfg.trials; ++t) {
    SplitMix64 rng = trial_substream(cfg.rng_seed, static_cast<std::uint64_t>(t));
    const double spark_bits = spark_overhead_trial(cfg, rng);
    spark_bits_stats.add(spark_bits);
    const GoodputGain g = goodput_gain(cfg, nr_bits, spark_bits);
    if (g.saturated) {
      ++report.saturated_trials;
      continue;
    }
    gain_stats.add(g.gain_fraction * 100.0);
    uplift_stats.add(g.uplift_mbps);
  }

  const GoodputGain mean_gain = goodput_gain(cfg, nr_bits, spark_bits_stats.mean);
  report.nr_bits_mean = nr_bits;
  report.nr_bits_std = 0.0;
  report.nr_slots = mean_gain.nr_slots;
  report.nr_data_fraction = mean_gain.nr_data_fraction;
  report.spark_bits_mean = spark_bits_stats.mean;
  report.spark_bits_std = spark_bits_stats.stddev();
  report.spark_slots = mean_gain.spark_slots;
  report.spark_data_fraction = mean_gain.spark_data_fraction;
  report.gain_pct_mean = gain_stats.mean;
  report.gain_pct_std = gain_stats.stddev();
  report.uplift_mbps_mean = uplift_stats.mean;
  report.uplift_mbps_std = uplift_stats.stddev();
  return report;
}

std::vector<SimReport> coherence_sweep(const SimConfig& cfg,
                                       const std::vector<double>& t_values) {
  if (t_values.empty()) throw std::invalid_argument("coherence_sweep: empty T list");
  std::vector<SimReport> reports;
  reports.reserve(t_values.size());
  for (double t : t_values) {
    SimConfig c = cfg;
    c.coherence_snapshots = t;
    reports.push_back(run_simulation(c));
  }
  return reports;
}

}  // namespace spark
