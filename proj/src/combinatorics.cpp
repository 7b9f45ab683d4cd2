#include "nodim/combinatorics.hpp"

#include <algorithm>
#include <numeric>

#include "nodim/errors.hpp"

namespace nodim {

BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

Rational gamma_coefficient_exact(std::size_t n, std::size_t d) {
  if (n < 2 || d < 1 || d > n - 1)
    throw InputError("invalid_gamma_args", "gamma requires n >= 2 and 1 <= d <= n-1 (got n=" +
                                               std::to_string(n) + ", d=" + std::to_string(d) +
                                               ")");
  const std::size_t plus = d;
  const std::size_t minus = n - d;
  Rational sum = 0;
  for (std::size_t j = 0; j <= minus; ++j)
    sum += (Rational(1) - Rational(j, minus)) * Rational(binomial(n, minus - j));
  for (std::size_t j = 1; j <= plus; ++j)
    sum += (Rational(1) - Rational(j, plus)) * Rational(binomial(n, plus - j));
  return sum / Rational(BigInt(1) << n);
}

double gamma_coefficient(std::size_t n, std::size_t d) {
  return gamma_coefficient_exact(n, d).convert_to<double>();
}

IndexList BalancedSubset::global(std::size_t class_size) const {
  IndexList out;
  for (std::size_t c = 0; c < per_color.size(); ++c)
    for (std::size_t m : per_color[c]) out.push_back(c * class_size + m);
  return out;
}

BigInt balanced_subset_count(std::size_t n, std::size_t d, std::size_t r) {
  return boost::multiprecision::pow(binomial(n, d), static_cast<unsigned>(r));
}

bool next_combination(IndexList& c, std::size_t n) {
  const std::size_t k = c.size();
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

namespace {

IndexList first_combination(std::size_t d) {
  IndexList c(d);
  std::iota(c.begin(), c.end(), std::size_t{0});
  return c;
}

void check_d(std::size_t n, std::size_t d) {
  if (d > n)
    throw InputError("invalid_subset_size", "subset size d=" + std::to_string(d) +
                                                " exceeds class size " + std::to_string(n));
}

}  // namespace

BalancedSubsetEnumerator::BalancedSubsetEnumerator(std::size_t class_size, std::size_t colors,
                                                   std::size_t d)
    : n_(class_size), d_(d), total_(0) {
  check_d(class_size, d);
  const BigInt count = balanced_subset_count(class_size, d, colors);
  if (count > kMaxBalancedSubsets)
    throw CapacityError("balanced subset enumeration would produce " + count.str() +
                            " subsets (limit " + std::to_string(kMaxBalancedSubsets) + ")",
                        count.convert_to<double>());
  total_ = count.convert_to<std::uint64_t>();
  current_.per_color.assign(colors, first_combination(d));
}

bool BalancedSubsetEnumerator::next(BalancedSubset& out) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    out = current_;
    return true;
  }
  for (std::size_t c = current_.per_color.size(); c > 0; --c) {
    if (next_combination(current_.per_color[c - 1], n_)) {
      out = current_;
      return true;
    }
    current_.per_color[c - 1] = first_combination(d_);
  }
  done_ = true;
  return false;
}

BalancedSubsetEnumerator enumerate_balanced_subsets(const ColoredPointSet& set, std::size_t d) {
  return BalancedSubsetEnumerator(set.class_size(), set.colors(), d);
}

BalancedSubset sample_balanced_subset(std::size_t class_size, std::size_t colors, std::size_t d,
                                      Rng& rng) {
  check_d(class_size, d);
  BalancedSubset out;
  out.per_color.resize(colors);
  IndexList pool(class_size);
  for (auto& chosen : out.per_color) {
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    // Partial Fisher-Yates: the first d slots become a uniform d-subset.
    for (std::size_t i = 0; i < d; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, class_size - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    chosen.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(d));
    std::sort(chosen.begin(), chosen.end());
  }
  return out;
}

BalancedSubset sample_balanced_subset(const ColoredPointSet& set, std::size_t d,
                                      std::uint64_t seed) {
  Rng rng = make_rng(seed, {0x62616cULL});
  return sample_balanced_subset(set.class_size(), set.colors(), d, rng);
}

JensenReport jensen_inequality_check(const NormSpec& space, const ColoredPointSet& set,
                                     std::size_t d) {
  const std::size_t n = set.class_size();
  const std::size_t r = set.colors();
  if (n * r > kMaxJensenPoints)
    throw CapacityError("Jensen check enumerates 2^(n*r) sign patterns; n*r=" +
                            std::to_string(n * r) + " exceeds " +
                            std::to_string(kMaxJensenPoints),
                        std::ldexp(1.0, static_cast<int>(n * r)));
  JensenReport report;
  report.gamma = gamma_coefficient(n, d);

  Matrix centred = set.all().coords();
  for (std::size_t c = 0; c < r; ++c) {
    auto block = centred.middleCols(static_cast<Eigen::Index>(c * n), static_cast<Eigen::Index>(n));
    const Vector mean = block.rowwise().mean();
    block.colwise() -= mean;
  }

  BalancedSubsetEnumerator subsets(n, r, d);
  BalancedSubset q;
  Vector sum(centred.rows());
  double acc = 0.0;
  while (subsets.next(q)) {
    sum.setZero();
    for (std::size_t c = 0; c < r; ++c)
      for (std::size_t m : q.per_color[c]) sum += centred.col(static_cast<Eigen::Index>(c * n + m));
    acc += space.norm(report.gamma * sum);
    ++report.subsets;
  }
  report.lhs = acc / static_cast<double>(report.subsets);
  report.rhs = rademacher_average(space, centred, AverageMode::exact).value;
  report.holds = report.lhs <= report.rhs * (1.0 + kBoundSlack) + 1e-12 * (1.0 + report.rhs);
  return report;
}

}  // namespace nodim
