#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nodim/space.hpp"

namespace nodim::cli {

using json = nlohmann::json;

/// Point-set file contents. JSON:
///   {"norm": {"q": 2, "type_p": 2, "type_constant": 1},
///    "points": [[x, ...], ...], "colors": [0, 0, 1, 1]}
/// `q` may be the string "inf". CSV: header `x1,...,xd[,color]`, one point
/// per row, Euclidean unless overridden.
struct ParsedInput {
  NormSpec space = NormSpec::euclidean();
  PointSet points{Matrix::Zero(1, 1)};
  std::optional<std::vector<long long>> colors;
  std::string digest;  // "sha256:<hex>" of the raw file
  std::vector<std::string> warnings;
};

/// Norm fields given on the command line take precedence over the file.
struct NormOverride {
  std::optional<double> q;
  std::optional<double> type_p;
  std::optional<double> type_constant;
};

/// Throws InputError with kinds "missing_file", "malformed_json",
/// "malformed_csv", "ragged_dimensions", "missing_field", "invalid_colors".
ParsedInput parse_input(const std::string& path, const NormOverride& overrides = {});
ParsedInput parse_input_text(const std::string& text, bool csv,
                             const NormOverride& overrides = {});

/// Colored view of a parsed input; classes are ordered by ascending color
/// value, members by input order. Absent colors give a single class.
struct ColoredInput {
  ColoredPointSet set;
  std::vector<std::size_t> source_index;  // global index -> input index
  std::vector<long long> color_values;
};
/// Throws InputError("unequal_color_classes") when class sizes differ.
ColoredInput to_colored(const ParsedInput& input);

/// A single vector: a JSON array of numbers, or an object with a "point",
/// "target" or "query" array.
Vector read_vector(const std::string& path);

std::string sha256_hex(const std::string& bytes);

struct BoundCheck {
  double theoretical = 0.0;
  double achieved = 0.0;
  bool pass = false;
};

struct RunReport {
  std::string subcommand;
  std::string input_digest;
  json norm;
  std::uint64_t seed = 0;
  double wall_clock_seconds = 0.0;
  json result;
  BoundCheck bound_check;
  std::vector<std::string> warnings;

  json to_json() const;
  static RunReport from_json(const json& j);
  /// 0 when the bound check passes, 2 otherwise.
  int exit_code() const { return bound_check.pass ? 0 : 2; }
};

/// Flags shared by all subcommands; each subcommand reads what it needs.
struct Options {
  std::string input;
  std::string out;
  std::string target;
  std::string query;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::optional<std::size_t> trials;
  std::string mode = "exhaustive";
  unsigned threads = 0;
  NormOverride norm;

  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t k = 0;
  std::size_t r = 0;
  double eta = 0.0;
  double eps = 0.0;
  std::size_t budget = 256;
  std::size_t sample_budget = 4096;
  std::vector<std::size_t> dims{2, 10, 100};
};

const std::vector<std::string>& subcommands();

/// Dispatches one subcommand. Module errors propagate as exceptions.
RunReport run(const std::string& subcommand, const Options& options);

/// JSON body describing an exception, and its exit code (1 input-type
/// errors, 2 bound/certification failures).
json error_report(const std::string& subcommand, const std::exception& error);
int exit_code_for(const std::exception& error);

struct SweepRow {
  std::size_t dim = 0;
  double max_ratio = 0.0;                 // max certified distance / bound
  double max_normalized_distance = 0.0;   // max certified distance / D
  double mean_normalized_distance = 0.0;  // mean over trials of the per-trial max
};

struct DimensionSweep {
  std::size_t colors = 0;
  std::size_t class_size = 0;
  std::size_t trials = 0;
  std::vector<SweepRow> rows;
  double slope_vs_log_dim = 0.0;  // least squares of max_normalized_distance on ln(dim)
};

/// Colorful Tverberg on `trials` instances of r classes of k points drawn
/// i.i.d. uniformly from the unit ball, per dimension.
DimensionSweep dimension_sweep(const NormSpec& space, const std::vector<std::size_t>& dims,
                               std::size_t trials, std::size_t r, std::size_t k,
                               std::uint64_t seed);

/// Uniform sample from the unit Euclidean ball.
Matrix random_ball_points(std::size_t dim, std::size_t count, std::uint64_t seed);

}  // namespace nodim::cli
