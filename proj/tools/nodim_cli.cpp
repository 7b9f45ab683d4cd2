// Command-line front end: one JSON report per invocation.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nodim/cli.hpp"

namespace {

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) dims.push_back(std::stoul(item));
  return dims;
}

int emit(const nodim::cli::json& body, const std::string& out) {
  const std::string text = body.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out);
  if (!f) {
    std::cerr << "cannot write '" << out << "'\n";
    return 1;
  }
  f << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace nodim::cli;
  CLI::App app{"Dimension-free Caratheodory, Tverberg, selection and weak epsilon-net tools"};
  app.require_subcommand(1);

  Options o;
  std::string q_text, dims_text;
  std::optional<double> type_p, type_constant, tol;
  std::optional<std::size_t> trials;

  for (const auto& name : subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--input", o.input, "point-set file (.json or .csv)");
    sub->add_option("--out", o.out, "write the report here instead of stdout");
    sub->add_option("--seed", o.seed, "master seed")->capture_default_str();
    sub->add_option("--tol", tol, "distance certification tolerance");
    sub->add_option("--trials", trials, "trial count");
    sub->add_option("--mode", o.mode, "exhaustive or sampled")->capture_default_str();
    sub->add_option("--threads", o.threads, "worker cap, 0 = all cores");
    sub->add_option("--q", q_text, "norm exponent (number or inf)");
    sub->add_option("--type-p", type_p, "Rademacher type exponent");
    sub->add_option("--type-constant", type_constant, "type constant T_p");
    sub->add_option("--n", o.n);
    sub->add_option("--d", o.d);
    sub->add_option("--k", o.k);
    sub->add_option("--r", o.r);
    sub->add_option("--eta", o.eta);
    sub->add_option("--eps", o.eps);
    sub->add_option("--target", o.target, "target vector file");
    sub->add_option("--query", o.query, "query vector file");
    sub->add_option("--budget", o.budget, "random split candidates")->capture_default_str();
    sub->add_option("--sample-budget", o.sample_budget, "subsets tested per sampled net round")
        ->capture_default_str();
    sub->add_option("--dims", dims_text, "comma-separated dimensions");
  }
  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (!q_text.empty())
      o.norm.q = (q_text == "inf" || q_text == "infinity") ? nodim::kInfinity : std::stod(q_text);
    o.norm.type_p = type_p;
    o.norm.type_constant = type_constant;
    o.tol = tol;
    o.trials = trials;
    if (!dims_text.empty()) o.dims = parse_dims(dims_text);
  } catch (const std::exception&) {
    std::cerr << "invalid numeric flag\n";
    return 1;
  }

  try {
    const RunReport report = run(name, o);
    const int written = emit(report.to_json(), o.out);
    return written ? written : report.exit_code();
  } catch (const std::exception& e) {
    emit(error_report(name, e), o.out);
    return exit_code_for(e);
  }
}
