#include "nodim/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nodim/combinatorics.hpp"
#include "nodim/errors.hpp"
#include "nodim/parallel.hpp"
#include "nodim/random.hpp"

namespace nodim {

namespace {

enum class GapKind { difference, max_to_center };

struct NodeSplit {
  std::vector<IndexList> part0;  // per color
  std::vector<IndexList> part1;
  double gap = kInfinity;
  SearchMethod method = SearchMethod::exhaustive;
  std::uint64_t candidates = 0;
};

class GapEvaluator {
 public:
  GapEvaluator(const NormSpec& space, const PointSet& all, const std::vector<IndexList>& classes,
               GapKind kind)
      : space_(space), kind_(kind) {
    const std::size_t n = classes.front().size();
    const std::size_t r = classes.size();
    size0_ = static_cast<double>((n / 2) * r);
    size1_ = static_cast<double>((n - n / 2) * r);
    total_ = Vector::Zero(static_cast<Eigen::Index>(all.dim()));
    for (const auto& cls : classes)
      for (std::size_t i : cls) total_ += all.point(i);
    center_ = total_ / static_cast<double>(n * r);
  }

  double operator()(const Vector& sum0) const {
    const Vector c0 = sum0 / size0_;
    const Vector c1 = (total_ - sum0) / size1_;
    if (kind_ == GapKind::difference) return space_.distance(c0, c1);
    return std::max(space_.distance(c0, center_), space_.distance(c1, center_));
  }

 private:
  const NormSpec& space_;
  GapKind kind_;
  double size0_ = 0.0;
  double size1_ = 0.0;
  Vector total_;
  Vector center_;
};

IndexList complement(const IndexList& members, const IndexList& chosen_positions) {
  IndexList out;
  std::size_t next = 0;
  for (std::size_t pos = 0; pos < members.size(); ++pos) {
    if (next < chosen_positions.size() && chosen_positions[next] == pos) {
      ++next;
      continue;
    }
    out.push_back(members[pos]);
  }
  return out;
}

IndexList pick(const IndexList& members, const IndexList& positions) {
  IndexList out;
  out.reserve(positions.size());
  for (std::size_t pos : positions) out.push_back(members[pos]);
  return out;
}

void assign_split(NodeSplit& split, const std::vector<IndexList>& classes,
                  const std::vector<IndexList>& positions) {
  split.part0.resize(classes.size());
  split.part1.resize(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    split.part0[c] = pick(classes[c], positions[c]);
    split.part1[c] = complement(classes[c], positions[c]);
  }
}

// Mixed-radix increment, last digit fastest; false after wrapping around.
bool advance(std::vector<std::size_t>& digits, std::size_t base) {
  for (std::size_t i = digits.size(); i > 0; --i) {
    if (++digits[i - 1] < base) return true;
    digits[i - 1] = 0;
  }
  return false;
}

NodeSplit exhaustive_split(const PointSet& all, const std::vector<IndexList>& classes,
                           const GapEvaluator& gap_of) {
  const std::size_t n = classes.front().size();
  const std::size_t r = classes.size();
  const std::size_t half = n / 2;
  const auto dim = static_cast<Eigen::Index>(all.dim());

  std::vector<IndexList> combos;
  IndexList c(half);
  std::iota(c.begin(), c.end(), std::size_t{0});
  do combos.push_back(c);
  while (next_combination(c, n));

  // Column j of partial[c] is the sum of the j-th half-subset of color c;
  // skipped when the table would be too large.
  const bool tabulate = combos.size() * static_cast<std::size_t>(dim) * r <= 20'000'000;
  std::vector<Matrix> partial;
  if (tabulate) {
    partial.assign(r, Matrix::Zero(dim, static_cast<Eigen::Index>(combos.size())));
    for (std::size_t color = 0; color < r; ++color)
      for (std::size_t j = 0; j < combos.size(); ++j)
        for (std::size_t pos : combos[j])
          partial[color].col(static_cast<Eigen::Index>(j)) += all.point(classes[color][pos]);
  }

  NodeSplit best;
  best.method = SearchMethod::exhaustive;
  std::vector<std::size_t> odometer(r, 0);
  std::vector<std::size_t> best_odometer(r, 0);
  Vector sum0(dim);
  do {
    sum0.setZero();
    for (std::size_t color = 0; color < r; ++color) {
      if (tabulate) {
        sum0 += partial[color].col(static_cast<Eigen::Index>(odometer[color]));
      } else {
        for (std::size_t pos : combos[odometer[color]]) sum0 += all.point(classes[color][pos]);
      }
    }
    const double gap = gap_of(sum0);
    ++best.candidates;
    if (gap < best.gap) {
      best.gap = gap;
      best_odometer = odometer;
    }
  } while (advance(odometer, combos.size()));
  std::vector<IndexList> positions(r);
  for (std::size_t color = 0; color < r; ++color) positions[color] = combos[best_odometer[color]];
  assign_split(best, classes, positions);
  return best;
}

NodeSplit sampled_split(const PointSet& all, const std::vector<IndexList>& classes,
                        const GapEvaluator& gap_of, std::size_t budget, Rng& rng) {
  const std::size_t n = classes.front().size();
  const std::size_t r = classes.size();
  const std::size_t half = n / 2;
  NodeSplit best;
  best.method = SearchMethod::sampled;
  std::vector<IndexList> positions(r);
  std::vector<IndexList> best_positions;
  Vector sum0(static_cast<Eigen::Index>(all.dim()));
  for (std::size_t t = 0; t < budget; ++t) {
    sum0.setZero();
    BalancedSubset sample = sample_balanced_subset(n, r, half, rng);
    for (std::size_t color = 0; color < r; ++color) {
      positions[color] = std::move(sample.per_color[color]);
      for (std::size_t pos : positions[color]) sum0 += all.point(classes[color][pos]);
    }
    const double gap = gap_of(sum0);
    ++best.candidates;
    if (gap < best.gap) {
      best.gap = gap;
      best_positions = positions;
    }
  }
  assign_split(best, classes, best_positions);
  return best;
}

NodeSplit split_node(const NormSpec& space, const PointSet& all,
                     const std::vector<IndexList>& classes, GapKind kind, bool exhaustive,
                     std::size_t budget, Rng& rng) {
  const GapEvaluator gap_of(space, all, classes, kind);
  if (exhaustive) return exhaustive_split(all, classes, gap_of);
  if (budget == 0) throw InputError("invalid_budget", "sampling budget must be at least 1");
  return sampled_split(all, classes, gap_of, budget, rng);
}

bool colored_exhaustive(std::size_t n, std::size_t r) {
  return balanced_subset_count(n, n / 2, r) <= kMaxExhaustiveColoredSplits;
}

IndexList flatten(const std::vector<IndexList>& per_color) {
  IndexList out;
  for (const auto& cls : per_color) out.insert(out.end(), cls.begin(), cls.end());
  std::sort(out.begin(), out.end());
  return out;
}

double split_bound(const NormSpec& space, std::size_t n, std::size_t r, double diam) {
  return theorem_bound(space, BoundKind::split, n - n / 2, diam) *
         std::pow(static_cast<double>(r), space.w());
}

void require_distinct(const PointSet& points) {
  std::size_t a = 0;
  std::size_t b = 0;
  if (points.has_duplicates(&a, &b))
    throw InputError("duplicate_points", "points " + std::to_string(a) + " and " +
                                             std::to_string(b) + " coincide");
}

}  // namespace

BalancedSplit balanced_split(const NormSpec& space, const PointSet& points, std::size_t budget,
                             std::uint64_t seed) {
  const std::size_t n = points.size();
  if (n < 2) throw InputError("too_few_points", "a balanced split needs at least 2 points");
  require_distinct(points);
  std::vector<IndexList> classes(1, IndexList(n));
  std::iota(classes[0].begin(), classes[0].end(), std::size_t{0});
  Rng rng = make_rng(seed, {0x73706c74ULL});
  NodeSplit s = split_node(space, points, classes, GapKind::difference,
                           n <= kMaxExhaustivePlainSplit, budget, rng);
  BalancedSplit out;
  out.part0 = std::move(s.part0[0]);
  out.part1 = std::move(s.part1[0]);
  out.gap = s.gap;
  out.diameter = diameter(space, points);
  out.bound = theorem_bound(space, BoundKind::split, n - n / 2, out.diameter);
  out.method = s.method;
  out.candidates = s.candidates;
  out.within_bound = within_bound(out.gap, out.bound);
  return out;
}

BalancedSplit colored_balanced_split(const NormSpec& space, const ColoredPointSet& set,
                                     std::size_t budget, std::uint64_t seed) {
  const std::size_t n = set.class_size();
  const std::size_t r = set.colors();
  if (n < 2) throw InputError("too_few_points", "each color class needs at least 2 points");
  require_distinct(set.all());
  std::vector<IndexList> classes(r);
  for (std::size_t c = 0; c < r; ++c)
    for (std::size_t m = 0; m < n; ++m) classes[c].push_back(set.global_index(c, m));
  Rng rng = make_rng(seed, {0x63737074ULL});
  NodeSplit s = split_node(space, set.all(), classes, GapKind::max_to_center,
                           colored_exhaustive(n, r), budget, rng);
  BalancedSplit out;
  out.part0 = flatten(s.part0);
  out.part1 = flatten(s.part1);
  out.gap = s.gap;
  out.diameter = diameter(space, set.all());
  out.bound = split_bound(space, n, r, out.diameter);
  out.method = s.method;
  out.candidates = s.candidates;
  out.within_bound = within_bound(out.gap, out.bound);
  return out;
}

double TverbergPartition::max_upper() const {
  double best = 0.0;
  for (const auto& c : certificates)
    if (c.upper > tolerance) best = std::max(best, c.upper);
  return best;
}

namespace {

struct PendingNode {
  std::vector<IndexList> classes;
  std::string path;
  std::uint64_t code;  // 1 followed by the path bits
  Vector parent_centroid;
  bool has_parent;
};

void certify_parts(const NormSpec& space, const PointSet& all, TverbergPartition& result) {
  result.certificates.assign(result.parts.size(), {});
  result.centroid_distances.assign(result.parts.size(), 0.0);
  parallel_for(result.parts.size(), [&](std::size_t i) {
    const PointSet part = all.subset(result.parts[i]);
    result.certificates[i] = dist_to_hull(space, result.center_q, part, result.tolerance);
    result.centroid_distances[i] = space.distance(result.center_q, centroid(part));
  });
  for (std::size_t i = 0; i < result.parts.size(); ++i) {
    const auto& cert = result.certificates[i];
    if (cert.upper > result.tolerance && !within_bound(cert.upper, result.bound))
      throw CertificationError("part " + std::to_string(i) + " has certified distance in [" +
                                   std::to_string(cert.lower) + ", " +
                                   std::to_string(cert.upper) + "] above the bound " +
                                   std::to_string(result.bound),
                               i, cert.lower, cert.upper, result.bound);
  }
}

}  // namespace

TverbergPartition colorful_tverberg(const NormSpec& space, const ColoredPointSet& set,
                                    std::uint64_t seed, std::size_t split_budget) {
  const std::size_t k = set.class_size();
  const std::size_t r = set.colors();
  const PointSet& all = set.all();

  TverbergPartition result;
  result.colors = r;
  result.center_q = centroid(all);
  result.diameter = max_class_diameter(space, set);
  result.bound = theorem_bound(space, BoundKind::tverberg, r, result.diameter);
  result.tolerance = result.diameter > 0.0 ? 1e-6 * result.diameter : 1e-12;

  std::vector<PendingNode> stack;
  {
    PendingNode root;
    root.classes.resize(r);
    for (std::size_t c = 0; c < r; ++c)
      for (std::size_t m = 0; m < k; ++m) root.classes[c].push_back(set.global_index(c, m));
    root.code = 1;
    root.has_parent = false;
    stack.push_back(std::move(root));
  }
  while (!stack.empty()) {
    PendingNode node = std::move(stack.back());
    stack.pop_back();
    TreeNode out;
    out.path = node.path;
    out.members = flatten(node.classes);
    const Vector c = centroid(all, out.members);
    if (node.has_parent) out.centroid_gap = space.distance(node.parent_centroid, c);
    result.tree_depth = std::max(result.tree_depth, node.path.size());

    const std::size_t m = node.classes.front().size();
    if (m == 1) {
      out.is_leaf = true;
      result.parts.push_back(out.members);
      result.tree.push_back(std::move(out));
      continue;
    }
    Rng rng = make_rng(seed, {0x74766267ULL, node.code});
    NodeSplit s = split_node(space, all, node.classes, GapKind::max_to_center,
                             colored_exhaustive(m, r), split_budget, rng);
    out.split_gap = s.gap;
    out.split_bound = split_bound(space, m, r, diameter(space, all, out.members));
    out.split_within_bound = within_bound(s.gap, out.split_bound);
    out.split_method = s.method;
    result.tree.push_back(std::move(out));

    // Push '1' first so the '0' subtree is visited next (pre-order).
    PendingNode one{std::move(s.part1), node.path + "1", node.code * 2 + 1, c, true};
    PendingNode zero{std::move(s.part0), node.path + "0", node.code * 2, c, true};
    stack.push_back(std::move(one));
    stack.push_back(std::move(zero));
  }

  certify_parts(space, all, result);
  return result;
}

UncoloredTverberg uncolored_tverberg(const NormSpec& space, const PointSet& points, std::size_t k,
                                     std::uint64_t seed, std::size_t split_budget) {
  const std::size_t n = points.size();
  if (k < 1 || k > n)
    throw InputError("invalid_k", "number of parts k must satisfy 1 <= k <= n (k=" +
                                      std::to_string(k) + ", n=" + std::to_string(n) + ")");
  UncoloredTverberg out;
  const std::size_t r = n / k;
  const std::size_t kept = k * r;
  out.colors = r;
  for (std::size_t i = kept; i < n; ++i) out.deleted.push_back(i);

  std::vector<PointSet> classes;
  classes.reserve(r);
  for (std::size_t c = 0; c < r; ++c) {
    IndexList block(k);
    std::iota(block.begin(), block.end(), c * k);
    classes.push_back(points.subset(block));
  }
  // Global index color * k + member equals the input index by construction.
  TverbergPartition& part = out.partition;
  part = colorful_tverberg(space, ColoredPointSet(std::move(classes)), seed, split_budget);

  const double diam = diameter(space, points);
  part.diameter = diam;
  part.bound = theorem_bound(space, BoundKind::tverberg, r, diam);
  part.tolerance = diam > 0.0 ? 1e-6 * diam : 1e-12;
  out.corollary_bound = theorem_constant(space, BoundKind::tverberg) *
                        std::pow(static_cast<double>(k) / static_cast<double>(n), space.w()) *
                        diam;

  for (std::size_t idx : out.deleted) {
    std::size_t target = 0;
    for (std::size_t i = 1; i < part.parts.size(); ++i)
      if (part.parts[i].size() < part.parts[target].size()) target = i;
    part.parts[target].push_back(idx);
  }
  for (auto& p : part.parts) std::sort(p.begin(), p.end());
  certify_parts(space, points, part);
  return out;
}

const char* to_string(SearchMethod method) {
  return method == SearchMethod::exhaustive ? "exhaustive" : "sampled";
}

}  // namespace nodim
