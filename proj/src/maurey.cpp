#include "nodim/maurey.hpp"

#include <algorithm>
#include <cmath>

#include "nodim/errors.hpp"

namespace nodim {

namespace {

constexpr double kClipThreshold = 1e-12;

std::vector<double> normalized_weights(const std::vector<double>& weights, std::size_t count) {
  if (weights.size() != count)
    throw InputError("weight_count", "expected " + std::to_string(count) + " weights, got " +
                                         std::to_string(weights.size()));
  std::vector<double> out(weights);
  double sum = 0.0;
  for (double& w : out) {
    if (!std::isfinite(w) || w < -kClipThreshold)
      throw InputError("invalid_weights", "convex weights must be finite and nonnegative");
    if (w < kClipThreshold) w = 0.0;
    sum += w;
  }
  if (!(std::abs(sum - 1.0) <= 1e-9 * count + kClipThreshold) || sum <= 0.0)
    throw InputError("invalid_weights", "convex weights must sum to 1");
  for (double& w : out) w /= sum;
  return out;
}

Vector combination(const PointSet& points, const std::vector<double>& weights) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(points.dim()));
  for (std::size_t j = 0; j < points.size(); ++j)
    if (weights[j] != 0.0) v += weights[j] * points.point(j);
  return v;
}

}  // namespace

ConvexWitness convex_witness(const NormSpec& space, const Eigen::Ref<const Vector>& target,
                             const PointSet& points, double tol) {
  if (!(tol >= 0.0)) throw InputError("invalid_tolerance", "tolerance must be nonnegative");
  ConvexWitness out;
  const double solver_tol = tol > 0.0 ? 1e-3 * tol : 1e-12;
  out.certificate = dist_to_hull(space, target, points, solver_tol);
  if (out.certificate.upper <= tol) {
    out.status = WitnessStatus::found;
    std::vector<double> w = out.certificate.witness_weights;
    double sum = 0.0;
    for (double& x : w) {
      if (x < kClipThreshold) x = 0.0;
      sum += x;
    }
    for (double& x : w) x /= sum;
    out.weights = std::move(w);
  } else if (out.certificate.lower > tol) {
    out.status = WitnessStatus::absent;
  } else {
    out.status = WitnessStatus::indeterminate;
  }
  return out;
}

SparseApprox maurey_draw(const NormSpec& space, const std::vector<PointSet>& classes,
                         const std::vector<std::vector<double>>& weights,
                         const Eigen::Ref<const Vector>& target, std::size_t k,
                         double diameter, double eta, Rng& rng) {
  if (k == 0) throw InputError("invalid_k", "sample size k must be at least 1");
  if (classes.empty() || classes.size() != weights.size())
    throw InputError("weight_count", "one weight vector per color class is required");
  const std::size_t r = classes.size();
  SparseApprox out;
  out.chosen.resize(r);
  Vector sum = Vector::Zero(target.size());
  for (std::size_t c = 0; c < r; ++c) {
    std::discrete_distribution<std::size_t> pick(weights[c].begin(), weights[c].end());
    out.chosen[c].reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t idx = pick(rng);
      out.chosen[c].push_back(idx);
      sum += classes[c].point(idx);
    }
  }
  out.approx_point = sum / static_cast<double>(k * r);
  out.achieved_error = space.distance(out.approx_point, target);
  out.diameter = diameter;
  out.eta_used = eta;
  out.bound = space.type_constant() * std::pow(static_cast<double>(k), space.w()) *
                  std::pow(static_cast<double>(r), space.w()) * diameter +
              eta;
  out.within_bound = within_bound(out.achieved_error, out.bound);
  out.trials_used = 1;
  return out;
}

namespace {

SparseApprox retry_draws(const NormSpec& space, const std::vector<PointSet>& classes,
                         const std::vector<std::vector<double>>& weights,
                         const Vector& target, std::size_t k, double diameter, double eta,
                         std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw InputError("invalid_trials", "trial budget must be at least 1");
  SparseApprox best;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, {0x6d617572ULL, t});
    SparseApprox draw = maurey_draw(space, classes, weights, target, k, diameter, eta, rng);
    draw.trials_used = t + 1;
    if (draw.within_bound) return draw;
    if (t == 0 || draw.achieved_error < best.achieved_error) best = std::move(draw);
  }
  best.trials_used = trials;
  return best;
}

}  // namespace

SparseApprox maurey_sample(const NormSpec& space, const PointSet& points,
                           const std::vector<double>& weights, std::size_t k, std::size_t trials,
                           std::uint64_t seed) {
  std::vector<std::vector<double>> w{normalized_weights(weights, points.size())};
  const Vector target = combination(points, w.front());
  SparseApprox out = retry_draws(space, {points}, w, target, k, diameter(space, points), 0.0,
                                 trials, seed);
  if (!out.within_bound)
    throw BoundMissError("Maurey sampling missed the bound after " + std::to_string(trials) +
                             " trials",
                         out.achieved_error, out.bound);
  return out;
}

SparseApprox colored_caratheodory_best(const NormSpec& space,
                                       const std::vector<PointSet>& classes,
                                       const Eigen::Ref<const Vector>& target, double eta,
                                       std::size_t k, std::size_t trials, std::uint64_t seed) {
  if (classes.empty()) throw InputError("no_colors", "at least one color class is required");
  if (!(eta >= 0.0)) throw InputError("invalid_eta", "eta must be nonnegative");
  double D = 0.0;
  for (const auto& cls : classes) {
    if (static_cast<Eigen::Index>(cls.dim()) != target.size())
      throw InputError("dimension_mismatch", "target dimension does not match the point sets");
    D = std::max(D, diameter(space, cls));
  }
  const double witness_tol = std::max(eta, default_tolerance(D));
  std::vector<std::vector<double>> weights;
  weights.reserve(classes.size());
  double eta_used = eta;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    ConvexWitness w = convex_witness(space, target, classes[c], witness_tol);
    if (w.status != WitnessStatus::found)
      throw PreconditionError("color class " + std::to_string(c) +
                              " has no convex witness within " + std::to_string(witness_tol) +
                              " of the target (certified distance in [" +
                              std::to_string(w.certificate.lower) + ", " +
                              std::to_string(w.certificate.upper) + "], status " +
                              to_string(w.status) + ")");
    eta_used = std::max(eta_used, w.certificate.upper);
    weights.push_back(std::move(w.weights));
  }
  return retry_draws(space, classes, weights, target, k, D, eta_used, trials, seed);
}

SparseApprox colored_caratheodory(const NormSpec& space, const std::vector<PointSet>& classes,
                                  const Eigen::Ref<const Vector>& target, double eta,
                                  std::size_t k, std::size_t trials, std::uint64_t seed) {
  SparseApprox out = colored_caratheodory_best(space, classes, target, eta, k, trials, seed);
  if (!out.within_bound)
    throw BoundMissError("colored Caratheodory sampling missed the bound after " +
                             std::to_string(trials) + " trials",
                         out.achieved_error, out.bound);
  return out;
}

const char* to_string(WitnessStatus status) {
  switch (status) {
    case WitnessStatus::found:
      return "found";
    case WitnessStatus::absent:
      return "absent";
    case WitnessStatus::indeterminate:
      return "indeterminate";
  }
  return "?";
}

}  // namespace nodim
