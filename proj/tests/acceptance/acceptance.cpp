// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance            run everything
//   acceptance 3 7        run the listed criteria only
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "../oracles.hpp"
#include "nodim/cli.hpp"
#include "nodim/combinatorics.hpp"
#include "nodim/errors.hpp"
#include "nodim/geometry.hpp"
#include "nodim/maurey.hpp"
#include "nodim/partition.hpp"
#include "nodim/selection.hpp"

using namespace nodim;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

const std::string kFixtures = NODIM_FIXTURE_DIR;

Outcome gamma_suite() {
  bool ok = gamma_coefficient_exact(4, 2) == Rational(5, 8) &&
            gamma_coefficient_exact(2, 1) == Rational(1, 2);
  Rational lo = 1, hi = 0;
  for (std::size_t n = 2; n <= 40; ++n)
    for (std::size_t d = 1; d < n; ++d) {
      const Rational g = gamma_coefficient_exact(n, d);
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
  ok = ok && lo >= Rational(1, 2) && hi < 1;
  return {ok, "range [" + fmt(lo.convert_to<double>()) + ", " + fmt(hi.convert_to<double>()) +
                  "], gamma(4,2)=" + gamma_coefficient_exact(4, 2).str() +
                  ", gamma(2,1)=" + gamma_coefficient_exact(2, 1).str()};
}

Outcome jensen_suite() {
  std::mt19937_64 rng(1001);
  const double norms[] = {1.0, 1.5, 2.0, 3.0, kInfinity};
  int failures = 0;
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    const int r = 1 + static_cast<int>(rng() % 2);
    const int n = 2 + static_cast<int>(rng() % 5);
    const int dim = 1 + static_cast<int>(rng() % 5);
    const int d = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
    std::vector<PointSet> classes;
    for (int c = 0; c < r; ++c) classes.emplace_back(oracle::gaussian(dim, n, rng));
    const auto rep =
        jensen_inequality_check(NormSpec::from_q(norms[t % 5]), ColoredPointSet(classes),
                                static_cast<std::size_t>(d));
    if (!rep.holds) ++failures;
    if (rep.rhs > 0) worst = std::max(worst, rep.lhs / rep.rhs);
  }
  return {failures == 0, std::to_string(failures) + " failures in 1000, max lhs/rhs " + fmt(worst)};
}

Outcome maurey_expectation() {
  std::mt19937_64 rng(1002);
  const auto space = NormSpec::euclidean();
  double worst = 0;
  bool ok = true;
  std::string detail;
  for (std::size_t k : {4u, 16u, 64u}) {
    double worst_k = 0;
    for (int inst = 0; inst < 100; ++inst) {
      const Matrix y = oracle::gaussian(50, 20, rng);
      std::vector<double> w(20);
      double total = 0;
      for (auto& v : w) total += (v = std::exponential_distribution<double>(1.0)(rng));
      for (auto& v : w) v /= total;
      Vector a = Vector::Zero(50);
      for (int j = 0; j < 20; ++j) a += w[j] * y.col(j);
      const double D = oracle::diameter(y, 2);
      const std::vector<PointSet> classes{PointSet(y)};
      Rng draw_rng(rng());
      double sum = 0;
      for (int t = 0; t < 500; ++t)
        sum += maurey_draw(space, classes, {w}, a, k, D, 0.0, draw_rng).achieved_error;
      const double ratio = (sum / 500) / (D / std::sqrt(static_cast<double>(k)));
      worst_k = std::max(worst_k, ratio);
    }
    ok = ok && worst_k <= 1.0;
    worst = std::max(worst, worst_k);
    detail += "k=" + std::to_string(k) + " max mean/bound " + fmt(worst_k) + "; ";
  }
  return {ok, detail};
}

Outcome split_oracle() {
  std::mt19937_64 rng(1003);
  const auto space = NormSpec::euclidean();
  int violations = 0, mismatches = 0;
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + static_cast<int>(rng() % 11);
    const int dim = 1 + static_cast<int>(rng() % 6);
    const Matrix x = oracle::gaussian(dim, n, rng);
    const auto s = balanced_split(space, PointSet(x));
    const double D = oracle::diameter(x, 2);
    const double bound = std::sqrt(2.0) / std::sqrt(std::ceil(n / 2.0)) * D;
    if (!(s.gap <= bound)) ++violations;
    if (std::abs(s.gap - oracle::best_split_gap(x, 2)) > 1e-12 * (1 + D)) ++mismatches;
    worst = std::max(worst, s.gap / bound);
  }
  return {violations == 0 && mismatches == 0,
          std::to_string(violations) + " bound violations, " + std::to_string(mismatches) +
              " oracle mismatches, max gap/bound " + fmt(worst)};
}

Outcome tverberg_end_to_end() {
  std::mt19937_64 rng(1004);
  const auto space = NormSpec::euclidean();
  int bad_parts = 0, loose = 0, violations = 0, degenerate = 0;
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t r = 1 + rng() % 4;
    const std::size_t k = 1 + rng() % 8;
    const int dim = 1 + static_cast<int>(rng() % 100);
    std::vector<PointSet> classes;
    for (std::size_t c = 0; c < r; ++c)
      classes.emplace_back(oracle::gaussian(dim, static_cast<int>(k), rng));
    const ColoredPointSet set(classes);
    TverbergPartition tv;
    try {
      tv = colorful_tverberg(space, set, t);
    } catch (const CertificationError&) {
      ++violations;
      continue;
    }
    double D = 0;
    for (const auto& c : classes) D = std::max(D, oracle::diameter(c.coords(), 2));
    const double bound = 2 * (std::sqrt(2.0) + 1) / std::sqrt(static_cast<double>(r)) * D;
    // Singleton classes give D = 0: the exact distance is 0 and the
    // certificate can only resolve it to 1e-12.
    const double resolution = D > 0 ? 0.0 : 1e-12;
    degenerate += D > 0 ? 0 : 1;
    std::set<std::size_t> used;
    if (tv.parts.size() != k) ++bad_parts;
    for (std::size_t j = 0; j < tv.parts.size(); ++j) {
      std::set<std::size_t> colors;
      for (std::size_t g : tv.parts[j]) {
        colors.insert(set.color_of(g));
        used.insert(g);
      }
      if (tv.parts[j].size() != r || colors.size() != r) ++bad_parts;
      const auto& c = tv.certificates[j];
      if (c.gap() > 1e-6 * D + resolution) ++loose;
      if (!(c.upper <= bound * (1 + 1e-9) + resolution)) ++violations;
      if (bound > 0) worst = std::max(worst, c.upper / bound);
    }
    if (used.size() != r * k) ++bad_parts;
  }
  return {bad_parts == 0 && loose == 0 && violations == 0,
          std::to_string(bad_parts) + " non-transversal, " + std::to_string(loose) +
              " loose certificates, " + std::to_string(violations) +
              " bound violations, max dist/bound " + fmt(worst) + ", " +
              std::to_string(degenerate) + " instances with D = 0"};
}

Outcome dimension_sweep_suite() {
  const auto sweep =
      cli::dimension_sweep(NormSpec::euclidean(), {2, 10, 100, 1000}, 50, 3, 4, 1006);
  std::string detail;
  double worst_ratio = 0;
  for (const auto& row : sweep.rows) {
    detail += "d=" + std::to_string(row.dim) + " max " + fmt(row.max_normalized_distance) +
              " mean " + fmt(row.mean_normalized_distance) + "; ";
    worst_ratio = std::max(worst_ratio, row.max_ratio);
  }
  detail += "slope " + fmt(sweep.slope_vs_log_dim) + ", max dist/bound " + fmt(worst_ratio);
  return {sweep.slope_vs_log_dim <= 0.02, detail};
}

Outcome selection_suite() {
  std::mt19937_64 rng(1007);
  const auto space = NormSpec::euclidean();
  std::uint64_t fewest = ~0ull;
  int bad_radius = 0;
  for (int t = 0; t < 50; ++t) {
    const Matrix x = oracle::gaussian(10, 8, rng);
    SelectionResult sel;
    try {
      sel = selection(space, PointSet(x), 2, t);
    } catch (const TheoremViolationError&) {
      fewest = 0;
      continue;
    }
    const double D = oracle::diameter(x, 2);
    const double radius = 2 * 2 * (std::sqrt(2.0) + 1) / std::sqrt(2.0) * D;
    if (std::abs(sel.radius - radius) > 1e-9 * radius) ++bad_radius;
    // Re-certify each counted tuple against the oracle distance.
    std::uint64_t certified = 0;
    for (const auto& w : sel.tuple_witnesses)
      if (w.certified && oracle::qp_distance(sel.center_q, PointSet(x).subset(w.tuple).coords()) <=
                             sel.radius)
        ++certified;
    fewest = std::min(fewest, certified);
  }
  return {fewest >= 7 && bad_radius == 0,
          "fewest certified tuples " + std::to_string(fewest) + " (need 7), radius mismatches " +
              std::to_string(bad_radius)};
}

Outcome epsnet_suite() {
  std::mt19937_64 rng(1008);
  const auto space = NormSpec::euclidean();
  std::size_t largest = 0;
  int uncovered = 0, not_exhaustive = 0;
  for (int t = 0; t < 20; ++t) {
    const Matrix x = oracle::gaussian(3, 10, rng);
    const auto net = weak_epsnet(space, PointSet(x), 2, 0.5, NetMode::exhaustive, t);
    largest = std::max(largest, net.net_points.size());
    if (net.mode != NetMode::exhaustive || net.subsets_total != 252) ++not_exhaustive;
    IndexList y{0, 1, 2, 3, 4};
    std::size_t checked = 0;
    do {
      const Matrix sub = PointSet(x).subset(y).coords();
      bool hit = false;
      for (const auto& f : net.net_points) hit = hit || oracle::qp_distance(f, sub) <= net.radius;
      uncovered += hit ? 0 : 1;
      ++checked;
    } while (next_combination(y, 10));
    if (checked != 252) ++not_exhaustive;
  }
  return {largest <= 16 && uncovered == 0 && not_exhaustive == 0,
          "largest |F| " + std::to_string(largest) + " (bound 16), uncovered subsets " +
              std::to_string(uncovered) + " of 20 x 252"};
}

Outcome counting_suite() {
  int failures = 0;
  for (long n = 1; n <= 200; ++n)
    for (long r = 1; r <= std::min(10L, n); ++r) {
      const BigInt lhs = oracle::choose(n / r + r - 1, r) * boost::multiprecision::pow(BigInt(r), r);
      if (lhs < oracle::choose(n, r)) ++failures;
    }
  return {failures == 0, std::to_string(failures) + " failures over n <= 200, r <= 10"};
}

Outcome negative_fixture() {
  const auto in = cli::parse_input(kFixtures + "/negative_example.json");
  const PointSet& p = in.points;
  double smallest = kInfinity;
  IndexList c{0, 1, 2, 3};
  do smallest = std::min(smallest, centroid(p, c).norm());
  while (next_combination(c, p.size()));
  const auto cert = dist_to_hull(NormSpec::euclidean(), Vector::Zero(2), p, 1e-9);
  return {smallest >= 0.5 && cert.upper <= 1e-6,
          "min 4-subset centroid norm " + fmt(smallest) + ", certified dist(0, conv S) <= " +
              fmt(cert.upper)};
}

Outcome geometry_oracle() {
  std::mt19937_64 rng(1011);
  double worst = 0;
  int bad = 0;
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int dim = 1 + static_cast<int>(rng() % 4);
    const Matrix x = oracle::gaussian(dim, n, rng);
    const Vector q = oracle::gaussian(dim, 1, rng).col(0) * 1.5;
    const auto c = dist_to_hull(NormSpec::euclidean(), q, PointSet(x), 1e-9);
    const double err = std::abs(c.upper - oracle::qp_distance(q, x));
    worst = std::max(worst, err);
    if (err > 1e-6) ++bad;
  }
  return {bad == 0, std::to_string(bad) + " mismatches, max |fw - qp| " + fmt(worst)};
}

// Runs the CLI twice per invocation and compares reports minus wall clock.
Outcome reproducibility() {
  const std::string f = kFixtures + "/";
  const std::vector<std::string> invocations{
      "gamma --n 7 --d 3",
      "split --input " + f + "points.json --seed 3",
      "split --input " + f + "colored.json --seed 3",
      "tverberg --input " + f + "colored.json --seed 4",
      "tverberg --input " + f + "k1.json",
      "tverberg-uncolored --input " + f + "points.json --k 3 --seed 5",
      "caratheodory --input " + f + "colored.json --target " + f +
          "target.json --k 3 --eta 0.05 --seed 6",
      "dist --input " + f + "points.json --query " + f + "query.json",
      "dist --input " + f + "points_linf.csv --q inf --query " + f + "target.json",
      "select --input " + f + "points.json --r 2 --seed 7",
      "epsnet --input " + f + "points.json --r 2 --eps 0.5 --seed 8",
      "epsnet --input " + f + "points.json --r 2 --eps 0.5 --mode sampled --sample-budget 32",
      "verify-sweep --dims 2,5 --trials 3 --seed 9",
  };
  const auto tmp = std::filesystem::temp_directory_path();
  int differing = 0;
  std::string which;
  for (std::size_t i = 0; i < invocations.size(); ++i) {
    cli::json reports[2];
    int codes[2];
    for (int rep = 0; rep < 2; ++rep) {
      const auto out = tmp / ("nodim_repro_" + std::to_string(i) + "_" + std::to_string(rep));
      const std::string cmd = std::string(NODIM_CLI_PATH) + " " + invocations[i] + " --out " +
                              out.string() + " > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      codes[rep] = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      std::ifstream in(out);
      try {
        reports[rep] = cli::json::parse(in);
      } catch (const std::exception&) {
        reports[rep] = nullptr;
      }
      if (reports[rep].is_object()) reports[rep].erase("wall_clock_seconds");
    }
    const bool exit_matches =
        reports[0].is_object() && reports[0].contains("bound_check") &&
        codes[0] == (reports[0]["bound_check"]["pass"].get<bool>() ? 0 : 2);
    if (reports[0].is_null() || reports[0].dump() != reports[1].dump() || codes[0] != codes[1] ||
        !exit_matches) {
      ++differing;
      which += " [" + invocations[i].substr(0, invocations[i].find(' ')) + "]";
    }
  }
  return {differing == 0, std::to_string(invocations.size()) + " invocations, " +
                              std::to_string(differing) + " not reproducible or failing" + which};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "gamma coefficient range and exact values", 1, gamma_suite},
      {2, "balanced-subset Jensen inequality, 1000 instances", 120, jensen_suite},
      {3, "Maurey sampling error in expectation", 300, maurey_expectation},
      {4, "exhaustive balanced split vs oracle and bound", 120, split_oracle},
      {5, "colorful Tverberg transversals and certified distances", 600, tverberg_end_to_end},
      {6, "dimension-independence sweep slope", 600, dimension_sweep_suite},
      {7, "selection, n=8 r=2 in l2^10", 300, selection_suite},
      {8, "exhaustive weak epsilon-net, n=10 r=2 eps=1/2", 600, epsnet_suite},
      {9, "multiset counting identity", 1, counting_suite},
      {10, "negative example fixture", 1, negative_fixture},
      {11, "hull distance vs QP oracle", 60, geometry_oracle},
      {12, "CLI reproducibility across subcommands", 300, reproducibility},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s %2d  %s: %s (%.2f s, budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), o.detail.c_str(), secs, c.budget_seconds,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
