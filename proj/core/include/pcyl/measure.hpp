#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pcyl/geometry.hpp"
#include "pcyl/rng.hpp"

namespace pcyl {

enum class MeasureMethod { kExact, kMonteCarlo, kCrofton };

/// Mass of a set of lines under mu = gamma(lambda x nu), nu(SO_d) = 1.
struct MeasureValue {
  double value = 0.0;
  double std_error = 0.0;
  MeasureMethod method = MeasureMethod::kExact;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
};

struct McOptions {
  int threads = 1;
  /// Separates substreams of different callers sharing one seed.
  std::uint64_t stream = 0;
};

/// Lines per deterministic substream batch.
inline constexpr std::uint64_t kMcBatch = 1u << 16;

/// Volume kappa_m of the unit m-ball, 1 <= m <= 8.
double unit_ball_volume(int m);

/// mu(L_{B(x, r)}) = kappa_{d-1} (r + 1)^{d-1}; independent of the center.
MeasureValue mu_hit_ball_exact(int d, double radius);
MeasureValue mu_hit_ball_exact(int d, const Point& center, double radius);

/// Envelope importance estimate of mu(L_target): lines are drawn from the
/// normalized measure on L_envelope and the hit fraction is scaled by the
/// exact envelope mass.
MeasureValue mu_hit_mc(int d, const HitRegion& target, const Ball& envelope, std::uint64_t n_lines,
                       std::uint64_t seed, const McOptions& options = {});

/// Estimate of mu(L_a ∩ L_b) with an envelope containing `a`.
MeasureValue mu_joint_hit_mc(int d, const HitRegion& a, const HitRegion& b, const Ball& envelope,
                             std::uint64_t n_lines, std::uint64_t seed,
                             const McOptions& options = {});

/// Joint estimates of mu(L_a ∩ L_{b_k}) for several b_k, all from the same
/// sampled line set (pathwise comparable).
std::vector<MeasureValue> mu_joint_hit_mc_multi(int d, const HitRegion& a,
                                                std::span<const HitRegion> bs,
                                                const Ball& envelope, std::uint64_t n_lines,
                                                std::uint64_t seed, const McOptions& options = {});

/// Two-point (Blaschke-Petkantschin) estimate of mu(L_a ∩ L_b):
///   mu(L_{a,b}) = 2/(d kappa_d) * E-integral over x in a+B1, y in b+B1 of
///                 |x-y|^{1-d} / (chord_a(l_xy) chord_b(l_xy)).
/// Requires the unit neighbourhoods of a and b to be disjoint.
MeasureValue mu_joint_hit_crofton(int d, const HitRegion& a, const HitRegion& b,
                                  std::uint64_t n_pairs, std::uint64_t seed,
                                  const McOptions& options = {});

/// P_u[B(0, r) ⊆ V] = exp(-u kappa_{d-1} (r + 1)^{d-1}).
double void_probability_exact(int d, double u, double r);

enum class JointEstimator { kEnvelope, kCrofton };

struct CovarianceEstimate {
  double covariance = 0.0;
  double std_error = 0.0;
  MeasureValue joint;  // mu(L_{x} ∩ L_{y})
};

/// cov(1{x in V}, 1{y in V}) = e^{-2 u kappa_{d-1}} (e^{u m} - 1), m = mu(L_{x,y}),
/// for two points at the given separation; stderr by the delta method.
CovarianceEstimate point_pair_covariance(int d, double u, double separation,
                                         std::uint64_t n_samples, std::uint64_t seed,
                                         JointEstimator estimator = JointEstimator::kEnvelope,
                                         const McOptions& options = {});

/// Uniform sample from {x : dist(x, region) <= 1}.
Point sample_neighbourhood(CounterRng& rng, const HitRegion& region);

}  // namespace pcyl
