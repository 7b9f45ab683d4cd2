#include "nodim/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "nodim/combinatorics.hpp"
#include "nodim/errors.hpp"
#include "nodim/maurey.hpp"
#include "nodim/parallel.hpp"
#include "nodim/random.hpp"

namespace nodim {

namespace {

// Non-decreasing sequences 0 <= j_1 <= ... <= j_r < k in lexicographic order.
std::vector<IndexList> all_multisets(std::size_t k, std::size_t r) {
  std::vector<IndexList> out;
  IndexList seq(r, 0);
  while (true) {
    out.push_back(seq);
    std::size_t i = r;
    while (i > 0 && seq[i - 1] == k - 1) --i;
    if (i == 0) break;
    ++seq[i - 1];
    for (std::size_t j = i; j < r; ++j) seq[j] = seq[i - 1];
  }
  return out;
}

std::vector<IndexList> sampled_multisets(std::size_t k, std::size_t r, std::uint64_t count,
                                         std::uint64_t seed) {
  Rng rng = make_rng(seed, {0x6d756c74ULL});
  std::uniform_int_distribution<std::size_t> part(0, k - 1);
  std::set<IndexList> seen;
  std::vector<IndexList> out;
  for (std::uint64_t attempt = 0; attempt < 4 * count && out.size() < count; ++attempt) {
    IndexList seq(r);
    for (auto& j : seq) j = part(rng);
    std::sort(seq.begin(), seq.end());
    if (seen.insert(seq).second) out.push_back(std::move(seq));
  }
  return out;
}

// One Maurey point per occurrence of a part, then further distinct points of
// that part (lowest index first) until it contributes its multiplicity.
IndexList transversal(const std::vector<IndexList>& parts, const IndexList& multiset,
                      const SparseApprox& draw) {
  std::map<std::size_t, std::vector<std::size_t>> picked;  // part -> member positions
  for (std::size_t slot = 0; slot < multiset.size(); ++slot)
    picked[multiset[slot]].push_back(draw.chosen[slot].front());
  IndexList tuple;
  for (auto& [part, positions] : picked) {
    const std::size_t multiplicity = positions.size();
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
    for (std::size_t pos = 0; positions.size() < multiplicity && pos < parts[part].size(); ++pos)
      if (!std::binary_search(positions.begin(), positions.end(), pos)) {
        positions.insert(std::lower_bound(positions.begin(), positions.end(), pos), pos);
      }
    for (std::size_t pos : positions) tuple.push_back(parts[part][pos]);
  }
  std::sort(tuple.begin(), tuple.end());
  return tuple;
}

}  // namespace

double SelectionResult::radius_needed() const {
  const auto needed = static_cast<std::size_t>(std::ceil(required - 1e-12));
  if (needed == 0) return 0.0;
  std::vector<double> uppers;
  for (const auto& w : tuple_witnesses) uppers.push_back(w.certificate.upper);
  if (uppers.size() < needed) return kInfinity;
  std::nth_element(uppers.begin(), uppers.begin() + static_cast<std::ptrdiff_t>(needed - 1),
                   uppers.end());
  return uppers[needed - 1];
}

SelectionResult selection(const NormSpec& space, const PointSet& points, std::size_t r,
                          std::uint64_t seed) {
  const std::size_t n = points.size();
  if (r < 1 || r > n)
    throw InputError("invalid_r", "r must satisfy 1 <= r <= n (r=" + std::to_string(r) +
                                      ", n=" + std::to_string(n) + ")");
  SelectionResult out;
  const std::size_t k = n / r;
  out.parts = k;
  out.tverberg = uncolored_tverberg(space, points, k, seed);
  const TverbergPartition& tv = out.tverberg.partition;
  out.center_q = tv.center_q;
  out.diameter = tv.diameter;
  out.gamma = theorem_bound(space, BoundKind::tverberg, r, out.diameter);
  out.radius = 2.0 * out.gamma;

  const BigInt n_choose_r = binomial(n, r);
  const BigInt r_pow_r = boost::multiprecision::pow(BigInt(r), static_cast<unsigned>(r));
  out.required = Rational(n_choose_r, r_pow_r).convert_to<double>();

  const BigInt total = binomial(k + r - 1, r);
  constexpr auto kMax64 = std::numeric_limits<std::uint64_t>::max();
  out.tuples_total = total > kMax64 ? kMax64 : total.convert_to<std::uint64_t>();
  out.exhaustive = total <= kMaxSelectionMultisets;
  const std::vector<IndexList> multisets =
      out.exhaustive ? all_multisets(k, r)
                     : sampled_multisets(k, r, kMaxSelectionMultisets, seed);
  out.tuples_examined = multisets.size();

  const double tol = default_tolerance(out.diameter);
  // Every part reaches B(q, gamma); the slack keeps the witness re-solve from
  // landing a hair outside.
  std::vector<PointSet> part_sets;
  double eta = out.gamma;
  for (std::size_t j = 0; j < k; ++j) {
    part_sets.push_back(points.subset(tv.parts[j]));
    eta = std::max(eta, tv.certificates[j].upper * (1.0 + 1e-3) + tol);
  }

  out.tuple_witnesses.resize(multisets.size());
  parallel_for(multisets.size(), [&](std::size_t m) {
    std::vector<PointSet> classes;
    classes.reserve(r);
    for (std::size_t j : multisets[m]) classes.push_back(part_sets[j]);
    const SparseApprox draw = colored_caratheodory_best(
        space, classes, out.center_q, eta, 1, kDefaultMaureyTrials, derive_seed(seed, {m}));
    TupleWitness& w = out.tuple_witnesses[m];
    w.tuple = transversal(tv.parts, multisets[m], draw);
    w.certificate = dist_to_hull(space, out.center_q, points.subset(w.tuple), tol);
    w.certified = w.certificate.upper <= out.radius;
  });
  for (const auto& w : out.tuple_witnesses) out.certified_tuples += w.certified ? 1 : 0;

  if (out.exhaustive && BigInt(out.certified_tuples) * r_pow_r < n_choose_r)
    throw TheoremViolationError("selection certified " + std::to_string(out.certified_tuples) +
                                " tuples, fewer than r^-r C(n,r) = " +
                                std::to_string(out.required));
  return out;
}

}  // namespace nodim
