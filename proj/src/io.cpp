#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <openssl/evp.h>

#include "nodim/cli.hpp"
#include "nodim/errors.hpp"

namespace nodim::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("missing_file", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

double parse_exponent(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return kInfinity;
  }
  throw InputError("malformed_json", "norm.q must be a number or \"inf\"");
}

std::optional<double> optional_number(const json& obj, const char* key) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  if (!obj[key].is_number())
    throw InputError("malformed_json", std::string("norm.") + key + " must be a number");
  return obj[key].get<double>();
}

NormSpec make_space(std::optional<double> q, std::optional<double> p, std::optional<double> t,
                    const NormOverride& o, std::vector<std::string>& warnings) {
  if (o.q) q = o.q;
  if (o.type_p) p = o.type_p;
  if (o.type_constant) t = o.type_constant;
  NormSpec space = NormSpec::from_q(q.value_or(2.0), p, t);
  if (space.assumed_type_constant())
    warnings.push_back("type constant T_p = 1 assumed for " + space.describe() +
                       "; bounds are only proven when the true constant is supplied");
  return space;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_csv_number(const std::string& cell, std::size_t row) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size())
    throw InputError("malformed_csv",
                     "row " + std::to_string(row) + ": '" + cell + "' is not a number");
  return v;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

ParsedInput parse_input_text(const std::string& text, bool csv, const NormOverride& overrides) {
  std::vector<std::vector<double>> rows;
  std::optional<std::vector<long long>> colors;
  std::optional<double> q, p, t;

  if (!csv) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw InputError("malformed_json", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("malformed_json", "top level must be an object");
    if (doc.contains("norm")) {
      const json& nrm = doc["norm"];
      if (!nrm.is_object()) throw InputError("malformed_json", "norm must be an object");
      if (nrm.contains("q")) q = parse_exponent(nrm["q"]);
      p = optional_number(nrm, "type_p");
      t = optional_number(nrm, "type_constant");
    }
    if (!doc.contains("points")) throw InputError("missing_field", "missing \"points\"");
    const json& pts = doc["points"];
    if (!pts.is_array()) throw InputError("malformed_json", "points must be an array");
    for (const auto& row : pts) {
      if (!row.is_array()) throw InputError("malformed_json", "each point must be an array");
      std::vector<double> v;
      for (const auto& x : row) {
        if (!x.is_number()) throw InputError("malformed_json", "coordinates must be numbers");
        v.push_back(x.get<double>());
      }
      rows.push_back(std::move(v));
    }
    if (doc.contains("colors") && !doc["colors"].is_null()) {
      const json& c = doc["colors"];
      if (!c.is_array()) throw InputError("invalid_colors", "colors must be an array");
      std::vector<long long> values;
      for (const auto& x : c) {
        if (!x.is_number_integer()) throw InputError("invalid_colors", "colors must be integers");
        values.push_back(x.get<long long>());
      }
      colors = std::move(values);
    }
  } else {
    std::stringstream ss(text);
    std::string line;
    std::vector<std::string> header;
    while (header.empty() && std::getline(ss, line))
      if (!trim(line).empty()) header = split_csv_line(line);
    if (header.empty()) throw InputError("malformed_csv", "missing header row");
    const bool has_color = header.back() == "color";
    const std::size_t dim = header.size() - (has_color ? 1 : 0);
    if (dim == 0) throw InputError("malformed_csv", "header has no coordinate columns");
    std::vector<long long> values;
    std::size_t row_no = 1;
    while (std::getline(ss, line)) {
      ++row_no;
      if (trim(line).empty()) continue;
      const auto cells = split_csv_line(line);
      if (cells.size() != header.size())
        throw InputError("ragged_dimensions", "row " + std::to_string(row_no) + " has " +
                                                  std::to_string(cells.size()) +
                                                  " columns, header has " +
                                                  std::to_string(header.size()));
      std::vector<double> v;
      for (std::size_t i = 0; i < dim; ++i) v.push_back(parse_csv_number(cells[i], row_no));
      rows.push_back(std::move(v));
      if (has_color) {
        const double c = parse_csv_number(cells.back(), row_no);
        if (c != std::floor(c)) throw InputError("invalid_colors", "colors must be integers");
        values.push_back(static_cast<long long>(c));
      }
    }
    if (has_color) colors = std::move(values);
  }

  if (rows.empty()) throw InputError("empty_point_set", "input contains no points");
  if (colors && colors->size() != rows.size())
    throw InputError("invalid_colors", "colors has " + std::to_string(colors->size()) +
                                           " entries for " + std::to_string(rows.size()) +
                                           " points");
  std::vector<std::string> warnings;
  NormSpec space = make_space(q, p, t, overrides, warnings);
  ParsedInput out{space, PointSet::from_rows(rows), std::move(colors),
                  "sha256:" + sha256_hex(text), std::move(warnings)};
  return out;
}

ParsedInput parse_input(const std::string& path, const NormOverride& overrides) {
  const std::string text = read_file(path);
  bool csv = ends_with(path, ".csv");
  if (!ends_with(path, ".json") && !csv) {
    const auto first = text.find_first_not_of(" \t\r\n");
    csv = first != std::string::npos && text[first] != '{';
  }
  return parse_input_text(text, csv, overrides);
}

ColoredInput to_colored(const ParsedInput& input) {
  const std::size_t n = input.points.size();
  std::map<long long, IndexList> by_color;
  for (std::size_t i = 0; i < n; ++i) by_color[input.colors ? (*input.colors)[i] : 0].push_back(i);
  std::vector<PointSet> classes;
  std::vector<std::size_t> source;
  std::vector<long long> values;
  const std::size_t k = by_color.begin()->second.size();
  for (const auto& [color, members] : by_color) {
    if (members.size() != k)
      throw InputError("unequal_color_classes",
                       "color " + std::to_string(color) + " has " +
                           std::to_string(members.size()) + " points but color " +
                           std::to_string(by_color.begin()->first) + " has " +
                           std::to_string(k));
    classes.push_back(input.points.subset(members));
    source.insert(source.end(), members.begin(), members.end());
    values.push_back(color);
  }
  return ColoredInput{ColoredPointSet(std::move(classes)), std::move(source), std::move(values)};
}

Vector read_vector(const std::string& path) {
  const std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("malformed_json", std::string("invalid JSON in '") + path + "': " + e.what());
  }
  if (doc.is_object()) {
    for (const char* key : {"point", "target", "query"})
      if (doc.contains(key)) {
        doc = doc[key];
        break;
      }
  }
  if (!doc.is_array() || doc.empty())
    throw InputError("malformed_json", "'" + path + "' must hold a non-empty array of numbers");
  Vector v(static_cast<Eigen::Index>(doc.size()));
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!doc[i].is_number()) throw InputError("malformed_json", "vector entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = doc[i].get<double>();
  }
  return v;
}

json RunReport::to_json() const {
  return json{{"subcommand", subcommand},
              {"input_digest", input_digest},
              {"norm", norm},
              {"seed", seed},
              {"wall_clock_seconds", wall_clock_seconds},
              {"result", result},
              {"bound_check",
               {{"theoretical", bound_check.theoretical},
                {"achieved", bound_check.achieved},
                {"pass", bound_check.pass}}},
              {"warnings", warnings}};
}

RunReport RunReport::from_json(const json& j) {
  RunReport r;
  r.subcommand = j.at("subcommand").get<std::string>();
  r.input_digest = j.at("input_digest").get<std::string>();
  r.norm = j.at("norm");
  r.seed = j.at("seed").get<std::uint64_t>();
  r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  r.result = j.at("result");
  const json& b = j.at("bound_check");
  r.bound_check = {b.at("theoretical").get<double>(), b.at("achieved").get<double>(),
                   b.at("pass").get<bool>()};
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

}  // namespace nodim::cli
