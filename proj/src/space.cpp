#include "nodim/space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "nodim/errors.hpp"
#include "nodim/parallel.hpp"
#include "nodim/random.hpp"

namespace nodim {

namespace {

void require_finite(const Eigen::Ref<const Vector>& v) {
  if (!v.allFinite()) throw InputError("non_finite", "vector has non-finite coordinates");
}

std::string format_exponent(double q) {
  if (std::isinf(q)) return "inf";
  std::ostringstream os;
  os << q;
  return os.str();
}

}  // namespace

NormSpec::NormSpec(double q_norm, double type_exponent, double type_constant)
    : q_(q_norm), p_(type_exponent), t_(type_constant) {
  if (std::isnan(q_) || q_ < 1.0)
    throw InputError("invalid_norm", "norm exponent q must satisfy q >= 1");
  if (!(p_ > 1.0 && p_ <= 2.0))
    throw InputError("invalid_type", "type exponent p must lie in (1, 2]");
  if (!(t_ > 0.0) || std::isinf(t_))
    throw InputError("invalid_type", "type constant must be positive and finite");
}

NormSpec NormSpec::from_q(double q_norm, std::optional<double> type_exponent,
                          std::optional<double> type_constant) {
  double p = 2.0;
  if (type_exponent) {
    p = *type_exponent;
  } else if (q_norm > 1.0 && q_norm < 2.0) {
    p = q_norm;
  }
  NormSpec spec(q_norm, p, type_constant.value_or(1.0));
  spec.assumed_constant_ = !type_constant.has_value() && q_norm != 2.0;
  return spec;
}

double NormSpec::dual_exponent() const noexcept {
  if (q_ == 1.0) return kInfinity;
  if (std::isinf(q_)) return 1.0;
  return q_ / (q_ - 1.0);
}

namespace {

double lq_norm(const Eigen::Ref<const Vector>& v, double q) {
  if (q == 2.0) return v.norm();
  if (q == 1.0) return v.lpNorm<1>();
  if (std::isinf(q)) return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
  const double scale = v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]) / scale, q);
  return scale * std::pow(acc, 1.0 / q);
}

}  // namespace

double NormSpec::norm(const Eigen::Ref<const Vector>& v) const {
  require_finite(v);
  return lq_norm(v, q_);
}

double NormSpec::dual_norm(const Eigen::Ref<const Vector>& v) const {
  require_finite(v);
  return lq_norm(v, dual_exponent());
}

double NormSpec::distance(const Eigen::Ref<const Vector>& a,
                          const Eigen::Ref<const Vector>& b) const {
  return lq_norm(a - b, q_);
}

std::string NormSpec::describe() const {
  std::ostringstream os;
  os << "l_" << format_exponent(q_) << " (p=" << p_ << ", T_p=" << t_ << ")";
  return os.str();
}

PointSet::PointSet(Matrix coords, std::vector<std::string> labels)
    : coords_(std::move(coords)), labels_(std::move(labels)) {
  if (coords_.cols() == 0) throw InputError("empty_point_set", "point set is empty");
  if (coords_.rows() == 0) throw InputError("zero_dimension", "points have dimension 0");
  if (!coords_.allFinite()) throw InputError("non_finite", "point coordinates are not finite");
  if (!labels_.empty() && labels_.size() != size())
    throw InputError("label_count", "label count does not match point count");
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InputError("empty_point_set", "point set is empty");
  const std::size_t dim = rows.front().size();
  Matrix m(dim, rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != dim)
      throw InputError("ragged_dimensions", "point " + std::to_string(j) + " has dimension " +
                                                std::to_string(rows[j].size()) + ", expected " +
                                                std::to_string(dim));
    for (std::size_t i = 0; i < dim; ++i) m(i, j) = rows[j][i];
  }
  return PointSet(std::move(m));
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  Matrix m(coords_.rows(), static_cast<Eigen::Index>(indices.size()));
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] >= size()) throw InputError("index_range", "subset index out of range");
    m.col(static_cast<Eigen::Index>(j)) = point(indices[j]);
    if (!labels_.empty()) labels.push_back(labels_[indices[j]]);
  }
  return PointSet(std::move(m), std::move(labels));
}

bool PointSet::has_duplicates(std::size_t* first, std::size_t* second) const {
  std::vector<std::size_t> order(size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto less = [this](std::size_t a, std::size_t b) {
    auto pa = point(a);
    auto pb = point(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (point(order[i - 1]) == point(order[i])) {
      if (first) *first = std::min(order[i - 1], order[i]);
      if (second) *second = std::max(order[i - 1], order[i]);
      return true;
    }
  }
  return false;
}

namespace {

PointSet concatenate(const std::vector<PointSet>& classes) {
  if (classes.empty()) throw InputError("no_colors", "colored point set needs at least one class");
  const auto dim = static_cast<Eigen::Index>(classes.front().dim());
  const std::size_t k = classes.front().size();
  Matrix m(dim, static_cast<Eigen::Index>(k * classes.size()));
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].size() != k)
      throw InputError("unequal_color_classes",
                       "color class " + std::to_string(c) + " has " +
                           std::to_string(classes[c].size()) + " points, expected " +
                           std::to_string(k));
    if (static_cast<Eigen::Index>(classes[c].dim()) != dim)
      throw InputError("ragged_dimensions", "color classes have different dimensions");
    m.middleCols(static_cast<Eigen::Index>(c * k), static_cast<Eigen::Index>(k)) =
        classes[c].coords();
  }
  return PointSet(std::move(m));
}

}  // namespace

ColoredPointSet::ColoredPointSet(std::vector<PointSet> classes)
    : classes_(std::move(classes)), all_(concatenate(classes_)) {
  if (colors() < 2 || !all_.has_duplicates()) return;
  for (std::size_t i = 0; i < all_.size(); ++i)
    for (std::size_t j = i + 1; j < all_.size(); ++j)
      if (color_of(i) != color_of(j) && all_.point(i) == all_.point(j))
        throw InputError("shared_point", "color classes " + std::to_string(color_of(i)) +
                                             " and " + std::to_string(color_of(j)) +
                                             " share a point");
}

double norm(const NormSpec& space, const Eigen::Ref<const Vector>& v) { return space.norm(v); }

Vector centroid(const PointSet& points) { return points.coords().rowwise().mean(); }

Vector centroid(const PointSet& points, std::span<const std::size_t> indices) {
  if (indices.empty()) throw InputError("empty_point_set", "centroid of an empty set");
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(points.dim()));
  for (std::size_t i : indices) sum += points.point(i);
  return sum / static_cast<double>(indices.size());
}

double diameter(const NormSpec& space, const PointSet& points,
                std::span<const std::size_t> indices) {
  double best = 0.0;
  for (std::size_t a = 0; a < indices.size(); ++a)
    for (std::size_t b = a + 1; b < indices.size(); ++b)
      best = std::max(best, space.distance(points.point(indices[a]), points.point(indices[b])));
  return best;
}

double diameter(const NormSpec& space, const PointSet& points) {
  double best = 0.0;
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b)
      best = std::max(best, space.distance(points.point(a), points.point(b)));
  return best;
}

double max_class_diameter(const NormSpec& space, const ColoredPointSet& set) {
  double best = 0.0;
  for (const auto& cls : set.classes()) best = std::max(best, diameter(space, cls));
  return best;
}

namespace {

// Gray-code walk over the sign patterns with the last sign pinned to +; the
// pinned half is the mirror image and has identical norms.
double exact_rademacher(const NormSpec& space, const Matrix& x) {
  const auto m = static_cast<std::size_t>(x.cols());
  if (m == 0) return 0.0;
  const std::size_t free_bits = m - 1;
  const std::uint64_t count = std::uint64_t{1} << free_bits;
  Vector sum = x.rowwise().sum();
  std::vector<signed char> sign(m, 1);
  double acc = space.norm(sum);
  for (std::uint64_t g = 1; g < count; ++g) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(g));
    sum -= (2.0 * sign[bit]) * x.col(static_cast<Eigen::Index>(bit));
    sign[bit] = static_cast<signed char>(-sign[bit]);
    acc += space.norm(sum);
  }
  return acc / static_cast<double>(count);
}

}  // namespace

RademacherAverage rademacher_average(const NormSpec& space, const Matrix& vectors,
                                     AverageMode mode, std::uint64_t trials,
                                     std::uint64_t seed) {
  if (!vectors.allFinite()) throw InputError("non_finite", "vectors are not finite");
  RademacherAverage out;
  out.mode = mode;
  const auto m = static_cast<std::size_t>(vectors.cols());
  if (mode == AverageMode::exact) {
    if (m > kMaxExactRademacher)
      throw CapacityError("exact Rademacher average limited to " +
                              std::to_string(kMaxExactRademacher) + " vectors, got " +
                              std::to_string(m),
                          std::ldexp(1.0, static_cast<int>(m)));
    out.value = exact_rademacher(space, vectors);
    out.patterns = m == 0 ? 1 : (std::uint64_t{1} << m);
    return out;
  }

  if (trials == 0) throw InputError("invalid_trials", "Monte-Carlo mode needs trials > 0");
  constexpr std::uint64_t kChunk = 1024;
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<double> sums(chunks, 0.0);
  std::vector<double> squares(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    Rng rng = make_rng(seed, {0x7261646dULL, c});
    std::bernoulli_distribution coin(0.5);
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(trials, begin + kChunk);
    Vector sum(vectors.rows());
    for (std::uint64_t t = begin; t < end; ++t) {
      sum.setZero();
      for (std::size_t j = 0; j < m; ++j)
        sum += (coin(rng) ? 1.0 : -1.0) * vectors.col(static_cast<Eigen::Index>(j));
      const double v = space.norm(sum);
      sums[c] += v;
      squares[c] += v * v;
    }
  });
  double s = 0.0;
  double s2 = 0.0;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    s += sums[c];
    s2 += squares[c];
  }
  const auto n = static_cast<double>(trials);
  out.value = s / n;
  const double var = trials > 1 ? std::max(0.0, (s2 - n * out.value * out.value) / (n - 1.0)) : 0.0;
  out.standard_error = std::sqrt(var / n);
  out.patterns = trials;
  return out;
}

TypeInequalityReport type_inequality_check(const NormSpec& space, const Matrix& vectors) {
  TypeInequalityReport report;
  report.lhs = rademacher_average(space, vectors, AverageMode::exact).value;
  const double p = space.type_exponent();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) acc += std::pow(space.norm(vectors.col(j)), p);
  report.rhs = space.type_constant() * std::pow(acc, 1.0 / p);
  report.holds = within_bound(report.lhs, report.rhs);
  return report;
}

double theorem_constant(const NormSpec& space, BoundKind which) {
  const double p = space.type_exponent();
  const double base = std::pow(2.0, 1.0 / p) * space.type_constant();
  switch (which) {
    case BoundKind::split:
      return base;
    case BoundKind::tverberg:
      return base / (1.0 - std::pow(2.0, space.w()));
    case BoundKind::selection_or_net:
      return 2.0 * base / (1.0 - std::pow(2.0, space.w()));
  }
  return base;
}

double theorem_bound(const NormSpec& space, BoundKind which, std::size_t scale, double D) {
  if (scale == 0) throw InputError("invalid_scale", "bound scale must be at least 1");
  if (!(D >= 0.0)) throw InputError("invalid_diameter", "diameter must be nonnegative");
  return theorem_constant(space, which) * std::pow(static_cast<double>(scale), space.w()) * D;
}

const char* to_string(BoundKind which) {
  switch (which) {
    case BoundKind::split:
      return "split";
    case BoundKind::tverberg:
      return "tverberg";
    case BoundKind::selection_or_net:
      return "selection_or_net";
  }
  return "?";
}

const char* to_string(AverageMode mode) {
  return mode == AverageMode::exact ? "exact" : "monte_carlo";
}

}  // namespace nodim
