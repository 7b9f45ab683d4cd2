#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "nodim/cli.hpp"
#include "nodim/combinatorics.hpp"
#include "nodim/errors.hpp"
#include "nodim/geometry.hpp"
#include "nodim/maurey.hpp"
#include "nodim/parallel.hpp"
#include "nodim/partition.hpp"
#include "nodim/random.hpp"
#include "nodim/selection.hpp"

namespace nodim::cli {

namespace {

// JSON has no infinity; keep it visible instead of letting it become null.
json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

json vec(const Eigen::Ref<const Vector>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v[i]));
  return out;
}

IndexList remap(const IndexList& idx, const std::vector<std::size_t>& source) {
  IndexList out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(source[i]);
  return out;
}

json norm_json(const NormSpec& s) {
  return {{"q", num(s.q_norm())},
          {"type_p", s.type_exponent()},
          {"type_constant", s.type_constant()},
          {"assumed_type_constant", s.assumed_type_constant()}};
}

json cert_json(const DistanceCertificate& c) {
  return {{"upper", num(c.upper)},
          {"lower", num(c.lower)},
          {"gap", num(c.gap())},
          {"iterations", c.iterations},
          {"status", to_string(c.status)},
          {"witness_weights", c.witness_weights}};
}

json split_json(const BalancedSplit& s, const std::vector<std::size_t>* source) {
  return {{"part0", source ? remap(s.part0, *source) : s.part0},
          {"part1", source ? remap(s.part1, *source) : s.part1},
          {"gap", num(s.gap)},
          {"bound", num(s.bound)},
          {"diameter", num(s.diameter)},
          {"method", to_string(s.method)},
          {"candidates", s.candidates},
          {"within_bound", s.within_bound}};
}

json tverberg_json(const TverbergPartition& t, const std::vector<std::size_t>& source) {
  json parts = json::array(), certs = json::array(), tree = json::array();
  for (const auto& p : t.parts) parts.push_back(remap(p, source));
  for (const auto& c : t.certificates) certs.push_back(cert_json(c));
  std::map<std::size_t, double> level_gap;  // depth -> max centroid gap
  for (const auto& node : t.tree) {
    json j = {{"path", node.path},
              {"members", remap(node.members, source)},
              {"centroid_gap", num(node.centroid_gap)},
              {"is_leaf", node.is_leaf}};
    if (!node.is_leaf)
      j["split"] = {{"gap", num(node.split_gap)},
                    {"bound", num(node.split_bound)},
                    {"within_bound", node.split_within_bound},
                    {"method", to_string(node.split_method)}};
    tree.push_back(std::move(j));
    auto& g = level_gap[node.path.size()];
    g = std::max(g, node.centroid_gap);
  }
  json levels = json::array();
  for (const auto& [depth, gap] : level_gap) levels.push_back({{"depth", depth}, {"max_centroid_gap", num(gap)}});
  return {{"center_q", vec(t.center_q)},
          {"parts", parts},
          {"certificates", certs},
          {"centroid_distances", t.centroid_distances},
          {"max_certified_distance", num(t.max_upper())},
          {"bound", num(t.bound)},
          {"diameter", num(t.diameter)},
          {"colors", t.colors},
          {"tree_depth", t.tree_depth},
          {"tolerance", t.tolerance},
          {"levels", levels},
          {"tree", tree}};
}

json selection_json(const SelectionResult& s) {
  json tuples = json::array();
  for (const auto& w : s.tuple_witnesses)
    tuples.push_back({{"tuple", w.tuple},
                      {"upper", num(w.certificate.upper)},
                      {"lower", num(w.certificate.lower)},
                      {"certified", w.certified}});
  // Parts of the uncolored partition already index the input points.
  std::size_t n = 0;
  for (const auto& p : s.tverberg.partition.parts) n += p.size();
  std::vector<std::size_t> identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  return {{"center_q", vec(s.center_q)},
          {"radius", num(s.radius)},
          {"gamma", num(s.gamma)},
          {"diameter", num(s.diameter)},
          {"parts", s.parts},
          {"tuples_examined", s.tuples_examined},
          {"tuples_total", s.tuples_total},
          {"certified_tuples", s.certified_tuples},
          {"required", s.required},
          {"radius_needed", num(s.radius_needed())},
          {"exhaustive", s.exhaustive},
          {"tuples", tuples},
          {"tverberg", tverberg_json(s.tverberg.partition, identity)}};
}

json approx_json(const SparseApprox& a, const ColoredInput& in) {
  json chosen = json::array();
  for (std::size_t c = 0; c < a.chosen.size(); ++c) {
    IndexList global;
    for (std::size_t m : a.chosen[c])
      global.push_back(in.source_index[in.set.global_index(c, m)]);
    chosen.push_back(global);
  }
  return {{"chosen", chosen},
          {"approx_point", vec(a.approx_point)},
          {"achieved_error", num(a.achieved_error)},
          {"bound", num(a.bound)},
          {"diameter", num(a.diameter)},
          {"eta_used", num(a.eta_used)},
          {"trials_used", a.trials_used},
          {"within_bound", a.within_bound}};
}

std::size_t require_positive(std::size_t v, const char* flag) {
  if (v == 0) throw InputError("missing_flag", std::string("missing or zero ") + flag);
  return v;
}

ParsedInput load(const Options& o) {
  if (o.input.empty()) throw InputError("missing_flag", "missing --input");
  return parse_input(o.input, o.norm);
}

void fill_from_input(RunReport& r, const ParsedInput& in) {
  r.input_digest = in.digest;
  r.norm = norm_json(in.space);
  r.warnings = in.warnings;
}

NormSpec flag_space(const Options& o, std::vector<std::string>& warnings) {
  NormSpec s = NormSpec::from_q(o.norm.q.value_or(2.0), o.norm.type_p, o.norm.type_constant);
  if (s.assumed_type_constant())
    warnings.push_back("type constant T_p = 1 assumed for " + s.describe() +
                       "; bounds are only proven when the true constant is supplied");
  return s;
}

void check(RunReport& r, double theoretical, double achieved) {
  r.bound_check = {theoretical, achieved, within_bound(achieved, theoretical)};
}

using Handler = std::function<void(const Options&, RunReport&)>;

void run_gamma(const Options& o, RunReport& r) {
  const Rational g = gamma_coefficient_exact(o.n, o.d);
  std::ostringstream exact;
  exact << g;
  const double value = g.convert_to<double>();
  r.input_digest = "none";
  r.norm = nullptr;
  r.result = {{"n", o.n}, {"d", o.d}, {"gamma_exact", exact.str()}, {"gamma", value}};
  check(r, 1.0, value);
}

void run_split(const Options& o, RunReport& r) {
  const ParsedInput in = load(o);
  fill_from_input(r, in);
  BalancedSplit s;
  bool colored = false;
  if (in.colors) {
    const ColoredInput c = to_colored(in);
    if (c.set.colors() > 1) {
      colored = true;
      s = colored_balanced_split(in.space, c.set, o.budget, o.seed);
      r.result = split_json(s, &c.source_index);
    }
  }
  if (!colored) {
    s = balanced_split(in.space, in.points, o.budget, o.seed);
    r.result = split_json(s, nullptr);
  }
  r.result["colored"] = colored;
  check(r, s.bound, s.gap);
}

void run_tverberg(const Options& o, RunReport& r) {
  const ParsedInput in = load(o);
  fill_from_input(r, in);
  const ColoredInput c = to_colored(in);
  const TverbergPartition t = colorful_tverberg(in.space, c.set, o.seed, o.budget);
  r.result = tverberg_json(t, c.source_index);
  check(r, t.bound, t.max_upper());
}

void run_tverberg_uncolored(const Options& o, RunReport& r) {
  const ParsedInput in = load(o);
  fill_from_input(r, in);
  const std::size_t k = require_positive(o.k, "--k");
  const UncoloredTverberg u = uncolored_tverberg(in.space, in.points, k, o.seed, o.budget);
  std::vector<std::size_t> identity(in.points.size());
  std::iota(identity.begin(), identity.end(), 0);
  r.result = tverberg_json(u.partition, identity);
  r.result["k"] = k;
  r.result["r"] = u.colors;
  r.result["deleted"] = u.deleted;
  r.result["corollary_bound"] = num(u.corollary_bound);
  check(r, u.partition.bound, u.partition.max_upper());
}

void run_caratheodory(const Options& o, RunReport& r) {
  const ParsedInput in = load(o);
  fill_from_input(r, in);
  if (o.target.empty()) throw InputError("missing_flag", "missing --target");
  const Vector target = read_vector(o.target);
  if (static_cast<std::size_t>(target.size()) != in.points.dim())
    throw InputError("ragged_dimensions", "target dimension differs from the points");
  const ColoredInput c = to_colored(in);
  const std::size_t k = require_positive(o.k, "--k");
  const SparseApprox a = colored_caratheodory_best(in.space, c.set.classes(), target, o.eta, k,
                                                   o.trials.value_or(kDefaultMaureyTrials), o.seed);
  r.result = approx_json(a, c);
  r.result["k"] = k;
  r.result["eta"] = o.eta;
  check(r, a.bound, a.achieved_error);
}

void run_dist(const Options& o, RunReport& r) {
  const ParsedInput in = load(o);
  fill_from_input(r, in);
  if (o.query.empty()) throw InputError("missing_flag", "missing --query");
  const Vector q = read_vector(o.query);
  const double tol = o.tol.value_or(default_tolerance(diameter(in.space, in.points)));
  if (!(tol > 0)) throw InputError("invalid_tolerance", "--tol must be positive");
  const DistanceCertificate c = dist_to_hull(in.space, q, in.points, tol);
  r.result = cert_json(c);
  r.result["query"] = vec(q);
  r.result["tol"] = tol;
  check(r, tol, c.gap());
}

void run_select(const Options& o, RunReport& r) {
  const ParsedInput in = load(o);
  fill_from_input(r, in);
  const SelectionResult s = selection(in.space, in.points, require_positive(o.r, "--r"), o.seed);
  r.result = selection_json(s);
  check(r, s.radius, s.radius_needed());
}

void run_epsnet(const Options& o, RunReport& r) {
  const ParsedInput in = load(o);
  fill_from_input(r, in);
  NetMode mode;
  if (o.mode == "exhaustive") mode = NetMode::exhaustive;
  else if (o.mode == "sampled") mode = NetMode::sampled;
  else throw InputError("invalid_mode", "--mode must be exhaustive or sampled");
  if (!(o.eps > 0 && o.eps <= 1)) throw InputError("invalid_epsilon", "--eps must lie in (0, 1]");
  const NetResult n = weak_epsnet(in.space, in.points, require_positive(o.r, "--r"), o.eps, mode,
                                  o.seed, o.sample_budget);
  json pts = json::array(), rounds = json::array();
  for (const auto& p : n.net_points) pts.push_back(vec(p));
  for (const auto& round : n.violator_log)
    rounds.push_back({{"violator", round.violator},
                      {"added_point", vec(round.added_point)},
                      {"tuples_removed", round.tuples_removed},
                      {"selection_certified", round.selection_certified},
                      {"selection_required", round.selection_required}});
  r.result = {{"net_points", pts},
              {"size", n.net_points.size()},
              {"radius", num(n.radius)},
              {"size_bound", num(n.size_bound)},
              {"subset_size", n.subset_size},
              {"mode", to_string(n.mode)},
              {"violator_log", rounds},
              {"subsets_checked", n.subsets_checked},
              {"subsets_total", n.subsets_total},
              {"certified", n.certified},
              {"tuples_remaining", n.tuples_remaining}};
  check(r, n.size_bound, static_cast<double>(n.net_points.size()));
}

void run_sweep(const Options& o, RunReport& r) {
  std::vector<std::string> warnings;
  const NormSpec space = flag_space(o, warnings);
  const std::size_t colors = o.r ? o.r : 3;
  const std::size_t k = o.k ? o.k : 4;
  const std::size_t trials = o.trials.value_or(50);
  const DimensionSweep s = dimension_sweep(space, o.dims, trials, colors, k, o.seed);
  r.input_digest = "none";
  r.norm = norm_json(space);
  r.warnings = warnings;
  json rows = json::array();
  double worst = 0.0;
  for (const auto& row : s.rows) {
    rows.push_back({{"dim", row.dim},
                    {"max_ratio", num(row.max_ratio)},
                    {"max_normalized_distance", num(row.max_normalized_distance)},
                    {"mean_normalized_distance", num(row.mean_normalized_distance)}});
    worst = std::max(worst, row.max_ratio);
  }
  r.result = {{"colors", s.colors},
              {"class_size", s.class_size},
              {"trials", s.trials},
              {"rows", rows},
              {"slope_vs_log_dim", num(s.slope_vs_log_dim)}};
  check(r, 1.0, worst);
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"gamma", run_gamma},
      {"split", run_split},
      {"tverberg", run_tverberg},
      {"tverberg-uncolored", run_tverberg_uncolored},
      {"caratheodory", run_caratheodory},
      {"dist", run_dist},
      {"select", run_select},
      {"epsnet", run_epsnet},
      {"verify-sweep", run_sweep},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"gamma",        "split", "tverberg",
                                              "tverberg-uncolored", "caratheodory",
                                              "dist",         "select", "epsnet",
                                              "verify-sweep"};
  return names;
}

RunReport run(const std::string& subcommand, const Options& options) {
  const auto it = handlers().find(subcommand);
  if (it == handlers().end())
    throw InputError("unknown_subcommand", "unknown subcommand '" + subcommand + "'");
  set_max_threads(options.threads);
  RunReport report;
  report.subcommand = subcommand;
  report.seed = options.seed;
  const auto start = std::chrono::steady_clock::now();
  it->second(options, report);
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

json error_report(const std::string& subcommand, const std::exception& error) {
  json e = {{"message", error.what()}};
  if (const auto* x = dynamic_cast<const InputError*>(&error)) {
    e["type"] = "input_error";
    e["kind"] = x->kind();
  } else if (const auto* x = dynamic_cast<const CapacityError*>(&error)) {
    e["type"] = "capacity_error";
    e["requested"] = num(x->requested());
  } else if (dynamic_cast<const PreconditionError*>(&error)) {
    e["type"] = "precondition_error";
  } else if (const auto* x = dynamic_cast<const BoundMissError*>(&error)) {
    e["type"] = "bound_miss";
    e["best"] = num(x->best());
    e["bound"] = num(x->bound());
  } else if (dynamic_cast<const TheoremViolationError*>(&error)) {
    e["type"] = "theorem_violation";
  } else if (const auto* x = dynamic_cast<const CertificationError*>(&error)) {
    e["type"] = "certification_error";
    e["part"] = x->part();
    e["lower"] = num(x->lower());
    e["upper"] = num(x->upper());
    e["bound"] = num(x->bound());
  } else {
    e["type"] = "internal_error";
  }
  return {{"subcommand", subcommand}, {"error", e}};
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const BoundMissError*>(&error) ||
      dynamic_cast<const TheoremViolationError*>(&error) ||
      dynamic_cast<const CertificationError*>(&error))
    return 2;
  return 1;
}

Matrix random_ball_points(std::size_t dim, std::size_t count, std::uint64_t seed) {
  Rng rng = make_rng(seed, {0x62616c6cULL});
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  Matrix out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(count));
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    Vector g(out.rows());
    for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = gauss(rng);
    const double radius = std::pow(unif(rng), 1.0 / static_cast<double>(dim));
    out.col(j) = g * (radius / g.norm());
  }
  return out;
}

DimensionSweep dimension_sweep(const NormSpec& space, const std::vector<std::size_t>& dims,
                               std::size_t trials, std::size_t r, std::size_t k,
                               std::uint64_t seed) {
  if (dims.empty() || trials == 0 || r == 0 || k == 0)
    throw InputError("invalid_sweep", "sweep needs dims, trials, r and k to be non-empty");
  DimensionSweep out{r, k, trials, {}, 0.0};
  for (std::size_t dim : dims) {
    if (dim == 0) throw InputError("invalid_sweep", "dimension must be positive");
    SweepRow row{dim, 0.0, 0.0, 0.0};
    for (std::size_t t = 0; t < trials; ++t) {
      const Matrix pts = random_ball_points(dim, r * k, derive_seed(seed, {dim, t}));
      std::vector<PointSet> classes;
      for (std::size_t c = 0; c < r; ++c)
        classes.emplace_back(pts.middleCols(static_cast<Eigen::Index>(c * k),
                                            static_cast<Eigen::Index>(k)));
      const ColoredPointSet set(std::move(classes));
      const TverbergPartition tv =
          colorful_tverberg(space, set, derive_seed(seed, {dim, t, 0x7476ULL}));
      const double dist = tv.max_upper();
      const double normalized = tv.diameter > 0 ? dist / tv.diameter : 0.0;
      row.max_ratio = std::max(row.max_ratio, tv.bound > 0 ? dist / tv.bound : 0.0);
      row.max_normalized_distance = std::max(row.max_normalized_distance, normalized);
      row.mean_normalized_distance += normalized / static_cast<double>(trials);
    }
    out.rows.push_back(row);
  }
  if (out.rows.size() >= 2) {
    double mx = 0, my = 0;
    for (const auto& row : out.rows) {
      mx += std::log(static_cast<double>(row.dim));
      my += row.max_normalized_distance;
    }
    mx /= static_cast<double>(out.rows.size());
    my /= static_cast<double>(out.rows.size());
    double sxy = 0, sxx = 0;
    for (const auto& row : out.rows) {
      const double dx = std::log(static_cast<double>(row.dim)) - mx;
      sxy += dx * (row.max_normalized_distance - my);
      sxx += dx * dx;
    }
    out.slope_vs_log_dim = sxx > 0 ? sxy / sxx : 0.0;
  }
  return out;
}

}  // namespace nodim::cli
