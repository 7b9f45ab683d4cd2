#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <set>

#include "nodim/combinatorics.hpp"
#include "nodim/errors.hpp"
#include "nodim/parallel.hpp"
#include "nodim/random.hpp"
#include "nodim/selection.hpp"

namespace nodim {

namespace {

constexpr std::uint64_t kMaxTrackedTuples = 10'000'000;

IndexList random_subset(std::size_t n, std::size_t m, Rng& rng) {
  IndexList pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

class Coverage {
 public:
  Coverage(const NormSpec& space, const PointSet& points, double radius, double tol)
      : space_(space), points_(points), radius_(radius), tol_(tol) {}

  /// Certified: some net point's ball meets conv Y.
  bool covered_by(const Vector& f, const IndexList& subset) const {
    return ball_hull_intersects(space_, f, radius_, points_.subset(subset), tol_) ==
           Intersection::yes;
  }

 private:
  const NormSpec& space_;
  const PointSet& points_;
  double radius_;
  double tol_;
};

}  // namespace

NetResult weak_epsnet(const NormSpec& space, const PointSet& points, std::size_t r,
                      double epsilon, NetMode mode, std::uint64_t seed,
                      std::size_t sample_budget) {
  const std::size_t n = points.size();
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw InputError("invalid_epsilon", "epsilon must lie in (0, 1]");
  if (r < 1 || r > n) throw InputError("invalid_r", "r must satisfy 1 <= r <= n");
  const auto m = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(epsilon * static_cast<double>(n) - 1e-9)), 1, n);
  if (m < r)
    throw InputError("subset_smaller_than_r", "ceil(eps n) = " + std::to_string(m) +
                                                  " is smaller than r = " + std::to_string(r));

  NetResult out;
  out.subset_size = m;
  const double D = diameter(space, points);
  out.radius = theorem_bound(space, BoundKind::selection_or_net, r, D);
  out.size_bound = std::pow(static_cast<double>(r) / epsilon, static_cast<double>(r));
  const BigInt subset_count = binomial(n, m);
  if (mode == NetMode::exhaustive && subset_count > kMaxExhaustiveNetSubsets)
    mode = NetMode::sampled;
  out.mode = mode;
  constexpr auto kMax64 = std::numeric_limits<std::uint64_t>::max();
  out.subsets_total = subset_count > kMax64 ? kMax64 : subset_count.convert_to<std::uint64_t>();
  if (mode == NetMode::sampled && sample_budget == 0)
    throw InputError("invalid_budget", "sampled mode needs a positive sample budget");

  const double tol = default_tolerance(D);
  const Coverage coverage(space, points, out.radius, tol);

  // The working family of r-tuples not yet certified near a net point.
  const bool track_tuples = binomial(n, r) <= kMaxTrackedTuples;
  std::set<IndexList> family;
  if (track_tuples) {
    IndexList t(r);
    std::iota(t.begin(), t.end(), std::size_t{0});
    do family.insert(t);
    while (next_combination(t, n));
  }

  std::vector<IndexList> subsets;
  std::vector<std::size_t> checked_against;  // net points already tested
  std::vector<char> covered;
  if (mode == NetMode::exhaustive) {
    IndexList y(m);
    std::iota(y.begin(), y.end(), std::size_t{0});
    do subsets.push_back(y);
    while (next_combination(y, n));
    checked_against.assign(subsets.size(), 0);
    covered.assign(subsets.size(), 0);
  }

  const auto max_rounds = static_cast<std::size_t>(std::ceil(out.size_bound - 1e-9)) + 1;
  for (std::size_t round = 0;; ++round) {
    std::optional<IndexList> violator;
    if (mode == NetMode::exhaustive) {
      parallel_for(subsets.size(), [&](std::size_t i) {
        for (std::size_t f = checked_against[i]; f < out.net_points.size() && !covered[i]; ++f)
          covered[i] = coverage.covered_by(out.net_points[f], subsets[i]) ? 1 : 0;
        checked_against[i] = out.net_points.size();
      });
      const auto it = std::find(covered.begin(), covered.end(), 0);
      if (it != covered.end()) violator = subsets[static_cast<std::size_t>(it - covered.begin())];
      out.subsets_checked = subsets.size();
    } else {
      Rng rng = make_rng(seed, {0x6e6574ULL, round});
      std::vector<IndexList> draws(sample_budget);
      for (auto& d : draws) d = random_subset(n, m, rng);
      std::vector<char> hit(draws.size(), 0);
      parallel_for(draws.size(), [&](std::size_t i) {
        for (const Vector& f : out.net_points)
          if (coverage.covered_by(f, draws[i])) {
            hit[i] = 1;
            break;
          }
      });
      const auto it = std::find(hit.begin(), hit.end(), 0);
      if (it != hit.end()) violator = draws[static_cast<std::size_t>(it - hit.begin())];
      out.subsets_checked = draws.size();
    }

    if (!violator) break;
    if (mode == NetMode::exhaustive && round + 1 > max_rounds)
      throw TheoremViolationError("greedy net needed more than " + std::to_string(max_rounds) +
                                  " rounds");

    NetRound log;
    log.violator = *violator;
    const SelectionResult sel = selection(space, points.subset(*violator), r,
                                          derive_seed(seed, {0x73656cULL, round}));
    log.added_point = sel.center_q;
    log.selection_certified = sel.certified_tuples;
    log.selection_required = sel.required;
    out.net_points.push_back(sel.center_q);

    if (track_tuples) {
      IndexList pos(r);
      std::iota(pos.begin(), pos.end(), std::size_t{0});
      do {
        IndexList tuple;
        for (std::size_t p : pos) tuple.push_back((*violator)[p]);
        auto found = family.find(tuple);
        if (found != family.end() && coverage.covered_by(sel.center_q, tuple)) {
          family.erase(found);
          ++log.tuples_removed;
        }
      } while (next_combination(pos, m));
    }
    out.violator_log.push_back(std::move(log));
  }

  out.tuples_remaining = track_tuples ? family.size() : 0;
  out.certified = mode == NetMode::exhaustive;
  return out;
}

const char* to_string(NetMode mode) {
  return mode == NetMode::exhaustive ? "exhaustive" : "sampled";
}

}  // namespace nodim
