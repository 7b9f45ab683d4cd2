#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nodim/geometry.hpp"
#include "nodim/partition.hpp"
#include "nodim/space.hpp"

namespace nodim {

struct TupleWitness {
  IndexList tuple;  // r distinct point indices, ascending
  DistanceCertificate certificate;
  bool certified = false;  // certificate.upper <= radius
};

struct SelectionResult {
  Vector center_q;
  double radius = 0.0;     // 2 gamma, gamma = C_tverberg r^w D
  double gamma = 0.0;
  double diameter = 0.0;
  std::size_t parts = 0;   // k = floor(n / r)
  std::uint64_t tuples_examined = 0;
  std::uint64_t tuples_total = 0;  // C(k + r - 1, r)
  std::uint64_t certified_tuples = 0;
  double required = 0.0;   // r^-r C(n, r)
  bool exhaustive = true;
  std::vector<TupleWitness> tuple_witnesses;
  UncoloredTverberg tverberg;

  /// Smallest radius that still certifies ceil(required) tuples.
  double radius_needed() const;
};

inline constexpr std::uint64_t kMaxSelectionMultisets = 100'000;

/// Point q whose ball of radius 2 gamma meets the hulls of many r-tuples:
/// partitions P into k = floor(n/r) parts around q, then for every multiset
/// 1 <= j_1 <= ... <= j_r <= k (sampled when there are more than 1e5) draws
/// one Maurey point per listed part, fills repeated parts with further
/// distinct points lowest-index-first, and certifies the tuple's hull
/// against B(q, 2 gamma). In exhaustive mode fewer than r^-r C(n, r)
/// certified tuples throws TheoremViolationError.
SelectionResult selection(const NormSpec& space, const PointSet& points, std::size_t r,
                          std::uint64_t seed = 0);

enum class NetMode { exhaustive, sampled };

struct NetRound {
  IndexList violator;  // Y, indices into P
  Vector added_point;  // q appended to F
  std::uint64_t tuples_removed = 0;
  std::uint64_t selection_certified = 0;
  double selection_required = 0.0;
};

struct NetResult {
  std::vector<Vector> net_points;
  double radius = 0.0;      // 2 C_tverberg r^w D
  double size_bound = 0.0;  // r^r eps^-r
  std::size_t subset_size = 0;  // ceil(eps n)
  NetMode mode = NetMode::exhaustive;
  std::vector<NetRound> violator_log;
  std::uint64_t subsets_checked = 0;  // in the final round
  std::uint64_t subsets_total = 0;    // C(n, subset_size)
  bool certified = false;  // exhaustive: every subset certified covered
  std::uint64_t tuples_remaining = 0;
};

inline constexpr std::uint64_t kMaxExhaustiveNetSubsets = 1'000'000;
inline constexpr std::size_t kDefaultNetSampleBudget = 4096;

/// Greedy weak epsilon-net: while some Y with |Y| = ceil(eps n) has
/// conv Y farther than `radius` from every point of F, run `selection` on Y,
/// add its q to F and drop the r-tuples of Y whose hulls are certified to
/// meet B(q, radius). Exhaustive mode scans all subsets; above 1e6 subsets it
/// falls back to sampled mode and reports it. Sampled mode tests
/// `sample_budget` random subsets per round and certifies nothing beyond
/// them. Requires ceil(eps n) >= r. Exceeding ceil(r^r eps^-r) + 1 rounds in
/// exhaustive mode throws TheoremViolationError.
NetResult weak_epsnet(const NormSpec& space, const PointSet& points, std::size_t r,
                      double epsilon, NetMode mode, std::uint64_t seed = 0,
                      std::size_t sample_budget = kDefaultNetSampleBudget);

const char* to_string(NetMode mode);

}  // namespace nodim
