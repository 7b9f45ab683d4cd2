#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nodim/cli.hpp"
#include "nodim/combinatorics.hpp"
#include "nodim/errors.hpp"
#include "nodim/geometry.hpp"
#include "nodim/maurey.hpp"
#include "nodim/partition.hpp"
#include "nodim/selection.hpp"

namespace py = pybind11;
using namespace nodim;

namespace {

using RowPoints = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Python side passes points as an (n, dim) array; the library stores columns.
PointSet to_points(const RowPoints& rows) { return PointSet(rows.transpose()); }

ColoredPointSet to_colored(const std::vector<RowPoints>& classes) {
  std::vector<PointSet> sets;
  for (const auto& c : classes) sets.push_back(to_points(c));
  return ColoredPointSet(std::move(sets));
}

py::dict certificate(const DistanceCertificate& c) {
  py::dict d;
  d["upper"] = c.upper;
  d["lower"] = c.lower;
  d["gap"] = c.gap();
  d["iterations"] = c.iterations;
  d["status"] = to_string(c.status);
  d["witness_weights"] = c.witness_weights;
  d["separator"] = c.separator;
  return d;
}

py::dict partition(const TverbergPartition& t) {
  py::dict d;
  d["center_q"] = t.center_q;
  d["parts"] = t.parts;
  py::list certs;
  for (const auto& c : t.certificates) certs.append(certificate(c));
  d["certificates"] = certs;
  d["centroid_distances"] = t.centroid_distances;
  d["max_certified_distance"] = t.max_upper();
  d["bound"] = t.bound;
  d["diameter"] = t.diameter;
  d["tree_depth"] = t.tree_depth;
  return d;
}

py::dict approx(const SparseApprox& a) {
  py::dict d;
  d["chosen"] = a.chosen;
  d["approx_point"] = a.approx_point;
  d["achieved_error"] = a.achieved_error;
  d["bound"] = a.bound;
  d["diameter"] = a.diameter;
  d["trials_used"] = a.trials_used;
  d["within_bound"] = a.within_bound;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dimension-free Caratheodory, Tverberg, selection and weak epsilon-net tools";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<BoundMissError>(m, "BoundMissError", base.ptr());
  py::register_exception<TheoremViolationError>(m, "TheoremViolationError", base.ptr());
  py::register_exception<CertificationError>(m, "CertificationError", base.ptr());

  py::class_<NormSpec>(m, "NormSpec")
      .def(py::init([](double q, std::optional<double> p, std::optional<double> t) {
             return NormSpec::from_q(q, p, t);
           }),
           py::arg("q") = 2.0, py::arg("type_p") = py::none(),
           py::arg("type_constant") = py::none())
      .def_property_readonly("q", &NormSpec::q_norm)
      .def_property_readonly("type_p", &NormSpec::type_exponent)
      .def_property_readonly("type_constant", &NormSpec::type_constant)
      .def_property_readonly("w", &NormSpec::w)
      .def_property_readonly("assumed_type_constant", &NormSpec::assumed_type_constant)
      .def("norm", [](const NormSpec& s, const Vector& v) { return s.norm(v); })
      .def("__repr__", &NormSpec::describe);

  m.def(
      "gamma_coefficient",
      [](std::size_t n, std::size_t d) {
        std::ostringstream os;
        os << gamma_coefficient_exact(n, d);
        return py::make_tuple(os.str(), gamma_coefficient(n, d));
      },
      py::arg("n"), py::arg("d"), "Exact shrinkage coefficient as ('num/den', float).");

  m.def(
      "dist_to_hull",
      [](const NormSpec& s, const Vector& q, const RowPoints& pts, double tol) {
        return certificate(dist_to_hull(s, q, to_points(pts), tol));
      },
      py::arg("space"), py::arg("q"), py::arg("points"), py::arg("tol") = 1e-6);

  m.def(
      "balanced_split",
      [](const NormSpec& s, const RowPoints& pts, std::size_t budget, std::uint64_t seed) {
        const auto b = balanced_split(s, to_points(pts), budget, seed);
        py::dict d;
        d["part0"] = b.part0;
        d["part1"] = b.part1;
        d["gap"] = b.gap;
        d["bound"] = b.bound;
        d["method"] = to_string(b.method);
        d["within_bound"] = b.within_bound;
        return d;
      },
      py::arg("space"), py::arg("points"), py::arg("budget") = kDefaultSplitBudget,
      py::arg("seed") = 0);

  m.def(
      "colorful_tverberg",
      [](const NormSpec& s, const std::vector<RowPoints>& classes, std::uint64_t seed) {
        return partition(colorful_tverberg(s, to_colored(classes), seed));
      },
      py::arg("space"), py::arg("classes"), py::arg("seed") = 0,
      "Classes are (k, dim) arrays; part indices are color * k + member.");

  m.def(
      "uncolored_tverberg",
      [](const NormSpec& s, const RowPoints& pts, std::size_t k, std::uint64_t seed) {
        const auto u = uncolored_tverberg(s, to_points(pts), k, seed);
        py::dict d = partition(u.partition);
        d["deleted"] = u.deleted;
        d["corollary_bound"] = u.corollary_bound;
        return d;
      },
      py::arg("space"), py::arg("points"), py::arg("k"), py::arg("seed") = 0);

  m.def(
      "maurey_sample",
      [](const NormSpec& s, const RowPoints& pts, const std::vector<double>& weights,
         std::size_t k, std::size_t trials, std::uint64_t seed) {
        return approx(maurey_sample(s, to_points(pts), weights, k, trials, seed));
      },
      py::arg("space"), py::arg("points"), py::arg("weights"), py::arg("k"),
      py::arg("trials") = kDefaultMaureyTrials, py::arg("seed") = 0);

  m.def(
      "colored_caratheodory",
      [](const NormSpec& s, const std::vector<RowPoints>& classes, const Vector& target,
         double eta, std::size_t k, std::size_t trials, std::uint64_t seed) {
        std::vector<PointSet> sets;
        for (const auto& c : classes) sets.push_back(to_points(c));
        return approx(colored_caratheodory_best(s, sets, target, eta, k, trials, seed));
      },
      py::arg("space"), py::arg("classes"), py::arg("target"), py::arg("eta"), py::arg("k"),
      py::arg("trials") = kDefaultMaureyTrials, py::arg("seed") = 0);

  m.def(
      "selection",
      [](const NormSpec& s, const RowPoints& pts, std::size_t r, std::uint64_t seed) {
        const auto sel = selection(s, to_points(pts), r, seed);
        py::dict d;
        d["center_q"] = sel.center_q;
        d["radius"] = sel.radius;
        d["certified_tuples"] = sel.certified_tuples;
        d["required"] = sel.required;
        d["exhaustive"] = sel.exhaustive;
        py::list tuples;
        for (const auto& w : sel.tuple_witnesses)
          if (w.certified) tuples.append(w.tuple);
        d["certified"] = tuples;
        return d;
      },
      py::arg("space"), py::arg("points"), py::arg("r"), py::arg("seed") = 0);

  m.def(
      "weak_epsnet",
      [](const NormSpec& s, const RowPoints& pts, std::size_t r, double eps,
         const std::string& mode, std::uint64_t seed, std::size_t sample_budget) {
        if (mode != "exhaustive" && mode != "sampled")
          throw InputError("invalid_mode", "mode must be 'exhaustive' or 'sampled'");
        const auto net = weak_epsnet(s, to_points(pts), r, eps,
                                     mode == "exhaustive" ? NetMode::exhaustive : NetMode::sampled,
                                     seed, sample_budget);
        py::dict d;
        d["net_points"] = net.net_points;
        d["radius"] = net.radius;
        d["size_bound"] = net.size_bound;
        d["mode"] = to_string(net.mode);
        d["certified"] = net.certified;
        d["subsets_checked"] = net.subsets_checked;
        return d;
      },
      py::arg("space"), py::arg("points"), py::arg("r"), py::arg("eps"),
      py::arg("mode") = "exhaustive", py::arg("seed") = 0,
      py::arg("sample_budget") = kDefaultNetSampleBudget);

  m.def(
      "run_json",
      [](const std::string& subcommand, const py::dict& flags) {
        cli::Options o;
        for (auto item : flags) {
          const auto key = py::str(item.first).cast<std::string>();
          const py::handle v = item.second;
          if (key == "input") o.input = v.cast<std::string>();
          else if (key == "target") o.target = v.cast<std::string>();
          else if (key == "query") o.query = v.cast<std::string>();
          else if (key == "seed") o.seed = v.cast<std::uint64_t>();
          else if (key == "tol") o.tol = v.cast<double>();
          else if (key == "trials") o.trials = v.cast<std::size_t>();
          else if (key == "mode") o.mode = v.cast<std::string>();
          else if (key == "threads") o.threads = v.cast<unsigned>();
          else if (key == "q") o.norm.q = v.cast<double>();
          else if (key == "type_p") o.norm.type_p = v.cast<double>();
          else if (key == "type_constant") o.norm.type_constant = v.cast<double>();
          else if (key == "n") o.n = v.cast<std::size_t>();
          else if (key == "d") o.d = v.cast<std::size_t>();
          else if (key == "k") o.k = v.cast<std::size_t>();
          else if (key == "r") o.r = v.cast<std::size_t>();
          else if (key == "eta") o.eta = v.cast<double>();
          else if (key == "eps") o.eps = v.cast<double>();
          else if (key == "budget") o.budget = v.cast<std::size_t>();
          else if (key == "sample_budget") o.sample_budget = v.cast<std::size_t>();
          else if (key == "dims") o.dims = v.cast<std::vector<std::size_t>>();
          else throw InputError("unknown_flag", "unknown flag '" + key + "'");
        }
        return cli::run(subcommand, o).to_json().dump();
      },
      py::arg("subcommand"), py::arg("flags") = py::dict(),
      "Runs a CLI subcommand in-process and returns the report as JSON text.");
}
