#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nodim/random.hpp"
#include "nodim/space.hpp"

namespace nodim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt binomial(std::size_t n, std::size_t k);

/// Shrinkage coefficient relating balanced-subset sums to Rademacher sums:
///
///   gamma = 2^-n [ sum_{j=0}^{n-d} (1 - j/(n-d)) C(n, n-d-j)
///                + sum_{j=1}^{d}   (1 - j/d)     C(n, d-j) ]
///
/// Evaluated in exact rational arithmetic. Requires n >= 2 and 1 <= d <= n-1,
/// otherwise throws InputError. gamma lies in [1/2, 1); n = 2 attains 1/2.
Rational gamma_coefficient_exact(std::size_t n, std::size_t d);
double gamma_coefficient(std::size_t n, std::size_t d);

/// One element of binom(S, d/r): d member indices (within-class, ascending)
/// for each of the r colors.
struct BalancedSubset {
  std::vector<IndexList> per_color;

  /// Global indices (color * k + member) in ascending order.
  IndexList global(std::size_t class_size) const;
};

/// Largest enumeration allowed by enumerate_balanced_subsets.
inline constexpr std::uint64_t kMaxBalancedSubsets = 10'000'000;

/// C(n, d)^r as an exact integer.
BigInt balanced_subset_count(std::size_t n, std::size_t d, std::size_t r);

/// Lexicographic stream over binom(S, d/r); each subset is produced once.
/// Throws CapacityError (carrying C(n,d)^r) above kMaxBalancedSubsets.
class BalancedSubsetEnumerator {
 public:
  BalancedSubsetEnumerator(std::size_t class_size, std::size_t colors, std::size_t d);

  /// Writes the next subset into `out`; false once the stream is exhausted.
  bool next(BalancedSubset& out);
  std::uint64_t total() const noexcept { return total_; }

 private:
  std::size_t n_;
  std::size_t d_;
  std::uint64_t total_;
  bool started_ = false;
  bool done_ = false;
  BalancedSubset current_;
};

BalancedSubsetEnumerator enumerate_balanced_subsets(const ColoredPointSet& set, std::size_t d);

/// Uniform element of binom(S, d/r), deterministic in `seed`.
BalancedSubset sample_balanced_subset(const ColoredPointSet& set, std::size_t d,
                                      std::uint64_t seed);
BalancedSubset sample_balanced_subset(std::size_t class_size, std::size_t colors,
                                      std::size_t d, Rng& rng);

/// Advances `c` (ascending, values < n) to the next k-combination in
/// lexicographic order; false after the last one.
bool next_combination(IndexList& c, std::size_t n);

struct JensenReport {
  double lhs = 0.0;    // mean over Q of ||gamma * sigma(Q)||
  double rhs = 0.0;    // Rademacher average of S
  double gamma = 0.0;
  std::uint64_t subsets = 0;
  bool holds = false;
};

/// Largest n * r for which jensen_inequality_check runs.
inline constexpr std::size_t kMaxJensenPoints = 20;

/// Recentres every class to zero sum, then compares the exact mean of
/// ||gamma sigma(Q)|| over all balanced subsets against the exact Rademacher
/// average of S. Throws CapacityError when n * r > kMaxJensenPoints.
JensenReport jensen_inequality_check(const NormSpec& space, const ColoredPointSet& set,
                                     std::size_t d);

}  // namespace nodim
