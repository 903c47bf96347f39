#pragma once

#include <cstdint>
#include <vector>

namespace spark {

/// Feedback-overhead Monte Carlo configuration. The codebook baseline pays a
/// fixed per-user report (wideband + per-subband bits); the decoupled scheme
/// pays an amortized pattern broadcast plus stochastic per-user path reports.
struct SimConfig {
  int users = 50;
  long long trials = 100000;

  // Codebook-style per-user report: wideband + n_subbands * subband bits.
  int wideband_bits = 10;
  int n_subbands = 15;
  int subband_bits = 14;  // 10 PMI + 4 CQI per subband

  // Decoupled scheme: broadcast_params at broadcast_bits_per_param bits,
  // amortized over coherence_snapshots; per path, 3 params at 16 bits.
  int broadcast_params = 48;
  int broadcast_bits_per_param = 16;
  double coherence_snapshots = 100.0;
  int path_param_bits = 48;
  double poisson_lambda = 2.0;  // paths per user = 1 + Poisson(lambda)

  // Fixed uplink budget and the rate it carries.
  int uplink_slots = 10;
  double slot_capacity_bits = 4096.0;
  double link_capacity_mbps = 150.0;

  std::uint64_t rng_seed = 1;

  long long nr_report_bits() const {
    return wideband_bits + static_cast<long long>(n_subbands) * subband_bits;
  }
  double broadcast_bits() const {
    return static_cast<double>(broadcast_params) * broadcast_bits_per_param;
  }
  double budget_bits() const { return uplink_slots * slot_capacity_bits; }
};

/// SplitMix64: tiny, portable, deterministic across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Independent per-trial substream: results do not depend on trial order.
inline SplitMix64 trial_substream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mixer(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
  return SplitMix64(mixer.next());
}

/// Poisson sample by CDF inversion; portable for the small lambdas used here.
int poisson_inverse_cdf(double u, double lambda);

/// Deterministic per-cell codebook overhead: users * per-user report bits.
long long baseline_overhead_bits(const SimConfig& cfg);

/// One stochastic draw of the decoupled scheme's per-cell overhead:
/// broadcast/T + sum over users of path_param_bits * (1 + Poisson(lambda)).
template <typename Rng>
double spark_overhead_trial(const SimConfig& cfg, Rng& rng) {
  double bits = cfg.broadcast_bits() / cfg.coherence_snapshots;
  for (int u = 0; u < cfg.users; ++u) {
    const int paths = 1 + poisson_inverse_cdf(rng.next_double(), cfg.poisson_lambda);
    bits += static_cast<double>(cfg.path_param_bits) * paths;
  }
  return bits;
}

struct GoodputGain {
  double nr_slots = 0.0;
  double spark_slots = 0.0;
  double nr_data_fraction = 0.0;
  double spark_data_fraction = 0.0;
  double gain_fraction = 0.0;  // data_frac_spark / data_frac_nr - 1
  double uplift_mbps = 0.0;
  bool saturated = false;      // an overhead met or exceeded the slot budget
};

/// Slot bookkeeping for one (nr_bits, spark_bits) pair under the fixed
/// uplink budget.
GoodputGain goodput_gain(const SimConfig& cfg, double nr_bits, double spark_bits);

struct SimReport {
  int users = 0;
  long long trials = 0;
  std::uint64_t seed = 0;
  double coherence_snapshots = 0.0;
  int uplink_slots = 0;

  double nr_bits_mean = 0.0;
  double nr_bits_std = 0.0;
  double nr_slots = 0.0;
  double nr_data_fraction = 0.0;

  double spark_bits_mean = 0.0;
  double spark_bits_std = 0.0;  // per-trial standard deviation
  double spark_slots = 0.0;
  double spark_data_fraction = 0.0;

  double gain_pct_mean = 0.0;  // mean over per-trial ratios, in percent
  double gain_pct_std = 0.0;
  double uplift_mbps_mean = 0.0;
  double uplift_mbps_std = 0.0;

  long long saturated_trials = 0;
};

/// Monte Carlo over cfg.trials independent trials; deterministic given the
/// seed. Saturated trials are counted and excluded from the gain statistics.
SimReport run_simulation(const SimConfig& cfg);

/// One report per coherence value, all with the same seed so the sweep
/// isolates the amortization term.
std::vector<SimReport> coherence_sweep(const SimConfig& cfg,
                                       const std::vector<double>& t_values);

}  // namespace spark
