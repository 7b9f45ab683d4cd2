#pragma once

#include <cstddef>
#include <vector>

#include "nodim/space.hpp"

namespace nodim {

enum class CertificateStatus {
  converged,  // upper - lower <= tol
  loose,      // iteration budget exhausted; bounds still valid
};

/// Two-sided certificate for dist(q, conv P).
struct DistanceCertificate {
  double upper = 0.0;                  // norm at witness_weights
  double lower = 0.0;                  // dual (separating functional) bound
  std::vector<double> witness_weights;  // convex weights over the points
  std::vector<double> separator;        // g with ||g||_* <= 1, lower = min_j <g, x_j - q>
  std::size_t iterations = 0;
  CertificateStatus status = CertificateStatus::converged;

  double gap() const noexcept { return upper - lower; }
};

inline constexpr std::size_t kDefaultMaxIterations = 100'000;

/// 1e-6 * max(1, D).
double default_tolerance(double diameter);

/// Minimizes ||q - sum_j lambda_j x_j|| over the simplex with pairwise
/// conditional-gradient steps. For q = 2 the line search is exact on the
/// squared objective; other exponents minimize the s-th power of the l_s norm.
/// The polyhedral norms q in {1, inf} are solved as linear programs (dense
/// simplex) while the problem is small, with conditional gradient on a smooth
/// surrogate as fallback. The upper bound is the true norm at the returned
/// weights; the lower bound is min_j <g, x_j - q> for a dual-unit g, valid in
/// every norm whatever the solver did.
/// Requires tol > 0; throws InputError on dimension mismatch.
DistanceCertificate dist_to_hull(const NormSpec& space, const Eigen::Ref<const Vector>& q,
                                 const PointSet& points, double tol,
                                 std::size_t max_iters = kDefaultMaxIterations);

enum class Intersection { yes, no, unknown };

/// yes if certified upper <= radius, no if certified lower > radius.
Intersection ball_hull_intersects(const NormSpec& space, const Eigen::Ref<const Vector>& q,
                                  double radius, const PointSet& points, double tol,
                                  DistanceCertificate* certificate = nullptr);

const char* to_string(CertificateStatus status);
const char* to_string(Intersection value);

}  // namespace nodim
