#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nodim/geometry.hpp"
#include "nodim/random.hpp"
#include "nodim/space.hpp"

namespace nodim {

enum class WitnessStatus {
  found,          // certified within tol of the target
  absent,         // certified farther than tol
  indeterminate,  // solver could not separate the two cases
};

struct ConvexWitness {
  WitnessStatus status = WitnessStatus::indeterminate;
  std::vector<double> weights;  // meaningful when found
  DistanceCertificate certificate;
};

/// Convex weights over `points` whose combination lies within `tol` of
/// `target`. Weights below 1e-12 are clipped and the rest renormalized.
ConvexWitness convex_witness(const NormSpec& space, const Eigen::Ref<const Vector>& target,
                             const PointSet& points, double tol);

/// Sparse multiset approximation of a target by per-color sample averages.
struct SparseApprox {
  std::vector<IndexList> chosen;  // k draws (with multiplicity) per color
  Vector approx_point;            // centroid of the per-color averages
  double achieved_error = 0.0;
  double bound = 0.0;             // T_p k^w r^w D + eta_used
  double diameter = 0.0;          // D = max_i diam P_i
  double eta_used = 0.0;
  std::size_t trials_used = 0;
  bool within_bound = false;
};

inline constexpr std::size_t kDefaultMaureyTrials = 64;

/// One draw of k i.i.d. indices per color from the given weight
/// distributions, no retry. `diameter` is D = max_i diam P_i (precomputed by
/// the caller); the bound is T_p k^w r^w D + eta.
SparseApprox maurey_draw(const NormSpec& space, const std::vector<PointSet>& classes,
                         const std::vector<std::vector<double>>& weights,
                         const Eigen::Ref<const Vector>& target, std::size_t k,
                         double diameter, double eta, Rng& rng);

/// Single color: a = sum_j w_j y_j approximated by the mean of k draws.
/// Trial t uses substream (seed, t); the first trial meeting T_p k^w diam P
/// is returned. Throws BoundMissError (best value attached) if none does.
SparseApprox maurey_sample(const NormSpec& space, const PointSet& points,
                           const std::vector<double>& weights, std::size_t k,
                           std::size_t trials = kDefaultMaureyTrials, std::uint64_t seed = 0);

/// Colored approximate Caratheodory. Each class must reach B(target, eta);
/// witnesses are searched with tolerance max(eta, 1e-6 max(1, D)) and the
/// certified witness distance enters the bound when it exceeds eta.
/// Returns the first trial within bound or, on a miss, the best trial with
/// within_bound = false. Throws PreconditionError if a class has no witness.
SparseApprox colored_caratheodory_best(const NormSpec& space,
                                       const std::vector<PointSet>& classes,
                                       const Eigen::Ref<const Vector>& target, double eta,
                                       std::size_t k,
                                       std::size_t trials = kDefaultMaureyTrials,
                                       std::uint64_t seed = 0);

/// As colored_caratheodory_best, but a miss throws BoundMissError.
SparseApprox colored_caratheodory(const NormSpec& space, const std::vector<PointSet>& classes,
                                  const Eigen::Ref<const Vector>& target, double eta,
                                  std::size_t k, std::size_t trials = kDefaultMaureyTrials,
                                  std::uint64_t seed = 0);

const char* to_string(WitnessStatus status);

}  // namespace nodim
