#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nodim/geometry.hpp"
#include "nodim/space.hpp"

namespace nodim {

enum class SearchMethod { exhaustive, sampled };

/// Partition of a set into part0 (floor(n/2) per color) and part1
/// (ceil(n/2) per color).
struct BalancedSplit {
  IndexList part0;
  IndexList part1;
  /// Plain split: ||c(part0) - c(part1)||. Colored split:
  /// max(||c(part0) - c(S)||, ||c(part1) - c(S)||).
  double gap = 0.0;
  double bound = 0.0;
  double diameter = 0.0;
  SearchMethod method = SearchMethod::exhaustive;
  std::uint64_t candidates = 0;
  bool within_bound = false;
};

inline constexpr std::size_t kMaxExhaustivePlainSplit = 14;
inline constexpr std::uint64_t kMaxExhaustiveColoredSplits = 100'000;
inline constexpr std::size_t kDefaultSplitBudget = 256;

/// Minimum-gap balanced bipartition: exhaustive for n <= 14, otherwise the
/// best of `budget` uniform random bipartitions. Ties go to the
/// lexicographically first candidate. Bound: 2^(1/p) T_p ceil(n/2)^w diam S.
/// Throws InputError for n < 2 or coincident points. A sampled miss is
/// returned with within_bound = false.
BalancedSplit balanced_split(const NormSpec& space, const PointSet& points,
                             std::size_t budget = kDefaultSplitBudget, std::uint64_t seed = 0);

/// Per-color balanced split of a colored set; indices are global. Exhaustive
/// while C(n, floor(n/2))^r <= 1e5. Bound: 2^(1/p) T_p ceil(n/2)^w r^w diam S.
BalancedSplit colored_balanced_split(const NormSpec& space, const ColoredPointSet& set,
                                     std::size_t budget = kDefaultSplitBudget,
                                     std::uint64_t seed = 0);

/// Node of the recursive splitting tree. Path "" is the root; children
/// append '0' (floor side) or '1' (ceil side).
struct TreeNode {
  std::string path;
  IndexList members;  // global indices, ascending
  double centroid_gap = 0.0;  // ||c(parent) - c(this)||, zero at the root
  bool is_leaf = false;
  // Split data, set for internal nodes.
  double split_gap = 0.0;
  double split_bound = 0.0;
  bool split_within_bound = true;
  SearchMethod split_method = SearchMethod::exhaustive;
};

struct TverbergPartition {
  Vector center_q;
  std::vector<IndexList> parts;
  std::vector<DistanceCertificate> certificates;  // one per part
  std::vector<double> centroid_distances;         // ||q - c(part)||
  double bound = 0.0;     // C(X) r^w D with the Tverberg constant
  double diameter = 0.0;  // D
  std::size_t colors = 0;
  std::size_t tree_depth = 0;
  std::vector<TreeNode> tree;  // pre-order
  double tolerance = 0.0;

  /// Largest certified upper distance. Distances at or below `tolerance` are
  /// below the certificate's resolution and count as zero.
  double max_upper() const;
};

/// Recursive colored splitting until every leaf is a transversal; q = c(S),
/// D = max_i diam Z_i. Each leaf's hull distance to q is certified with
/// tolerance 1e-6 D (1e-12 when D = 0); a certified upper distance above both
/// the bound and that tolerance throws CertificationError. Subtree seeds derive from (seed, path).
TverbergPartition colorful_tverberg(const NormSpec& space, const ColoredPointSet& set,
                                    std::uint64_t seed = 0,
                                    std::size_t split_budget = kDefaultSplitBudget);

struct UncoloredTverberg {
  TverbergPartition partition;  // parts index the input point set
  std::size_t colors = 0;       // r = floor(n / k)
  IndexList deleted;            // the last s input points, reinserted
  double corollary_bound = 0.0; // C(X) (k/n)^w diam P, reported alongside
};

/// n = k r + s: drops the last s points, colors the rest by contiguous blocks
/// of size k, runs colorful_tverberg and puts every dropped point back into
/// the currently smallest part (lowest index on ties). The certified bound is
/// C(X) r^w diam P with r as constructed.
UncoloredTverberg uncolored_tverberg(const NormSpec& space, const PointSet& points,
                                     std::size_t k, std::uint64_t seed = 0,
                                     std::size_t split_budget = kDefaultSplitBudget);

const char* to_string(SearchMethod method);

}  // namespace nodim
