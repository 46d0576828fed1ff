#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcyl/measure.hpp"
#include "pcyl/report.hpp"
#include "pcyl/vacancy.hpp"

namespace pcyl {

inline constexpr double kSlowGrowth = 3.8 / 3.0;

/// Scale sequences a_0, ..., a_{n_max}.
///   kPowerThreeHalves: a_n = a_0^{(3/2)^n}
///   kPowerSlow:        a_n = a_0^{(3.8/3)^n}
///   kGeometric:        a_n = a_0 * growth^n
struct ScaleSchedule {
  enum class Rule { kPowerThreeHalves, kPowerSlow, kGeometric };
  Rule rule = Rule::kPowerSlow;
  double a0 = 10.0;
  double growth = 2.0;
  int n_max = 2;

  std::vector<double> scales() const;
};

struct ExpOptions {
  int threads = 1;
  /// Independent groups used for Monte Carlo measure estimates; the reported
  /// stderr and jackknife slope error come from their spread.
  int groups = 32;
};

/// Two balls B(0, r), B(alpha e_1, r): estimate of mu(L_{B_1,B_2}) per alpha
/// and the log-log slope. Requires alpha >= 2(r + 1).
EstimateReport exp_mu_scaling(int d, double r, const std::vector<double>& alphas,
                              std::uint64_t n_lines, std::uint64_t seed,
                              JointEstimator estimator = JointEstimator::kCrofton,
                              const ExpOptions& options = {});

/// Coplanar squares of side s with gap r along e_1. Also reports the ratio
/// mu(2s) / mu(s) at `ratio_r` (the largest r when <= 0).
EstimateReport exp_square_scaling(int d, double s, const std::vector<double>& rs,
                                  std::uint64_t n_lines, std::uint64_t seed,
                                  double ratio_r = 0.0, const ExpOptions& options = {});

EstimateReport exp_covariance_decay(int d, double u, const std::vector<double>& separations,
                                    std::uint64_t n_lines, std::uint64_t seed,
                                    const ExpOptions& options = {});

/// P[occupied planar crossing from S(0, a/10) to the boundary of S(0, a)] for
/// each u, scale and resolution. All intensities come from one sample by
/// thinning; a coupled monotonicity failure throws InvariantViolated.
EstimateReport exp_occupied_crossing(int d, const std::vector<double>& us,
                                     const std::vector<double>& scales,
                                     const std::vector<double>& epsilons, int replicates,
                                     std::uint64_t seed, const ExpOptions& options = {});

/// P[B(0, 1/4) vacant-connected to the sphere of radius R] per u, coupled by
/// thinning.
EstimateReport exp_vacant_reach(int d, const std::vector<double>& us, double R, double eps,
                                int replicates, std::uint64_t seed,
                                ReachMode mode = ReachMode::kFull,
                                const ExpOptions& options = {});

/// P[Delta_a] per a, its log-log slope, and the two-segment measure m1(a).
/// With `factorized`, each of the three segment pairs is resolved from its
/// own sample around S_i^-, which is exact because the three line sets are
/// disjoint; otherwise one window B(0, a + 1) is sampled.
EstimateReport exp_triangle_contrast(int d, double u, const std::vector<double>& as,
                                     int replicates, std::uint64_t seed,
                                     std::uint64_t m1_pairs = 400000, bool factorized = true,
                                     const ExpOptions& options = {});

/// d = 2 vacant crossing of S(0, a/10) to the boundary of S(0, a).
EstimateReport exp_d2_sanity(const std::vector<double>& us, const std::vector<double>& scales,
                             double eps, int replicates, std::uint64_t seed,
                             const ExpOptions& options = {});

/// Names accepted by the CLI `experiment` subcommand.
const std::vector<std::string>& experiment_names();

}  // namespace pcyl
