#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nodim {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IndexList = std::vector<std::size_t>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Relative slack applied to every comparison against a theoretical bound.
inline constexpr double kBoundSlack = 1e-9;

/// achieved <= bound up to kBoundSlack.
inline bool within_bound(double achieved, double bound) {
  return achieved <= bound * (1.0 + kBoundSlack);
}

/// The normed space (R^d, ||.||_q) together with the Rademacher type data
/// (exponent p in (1, 2], constant T_p) used by every bound formula.
class NormSpec {
 public:
  /// Explicit construction. Throws InputError on q < 1, p outside (1, 2] or
  /// a non-positive constant.
  NormSpec(double q_norm, double type_exponent, double type_constant);

  /// Defaults: p = min(q, 2) (p = 2 when q = 1, which has no uniform type
  /// above 1), T_p = 1. A constant of 1 is only proven for q = 2;
  /// `assumed_type_constant()` reports whether the default was taken.
  static NormSpec from_q(double q_norm,
                         std::optional<double> type_exponent = std::nullopt,
                         std::optional<double> type_constant = std::nullopt);

  static NormSpec euclidean() { return NormSpec(2.0, 2.0, 1.0); }

  double q_norm() const noexcept { return q_; }
  double type_exponent() const noexcept { return p_; }
  double type_constant() const noexcept { return t_; }
  /// w = (1 - p) / p, in [-1/2, 0).
  double w() const noexcept { return (1.0 - p_) / p_; }
  bool is_euclidean() const noexcept { return q_ == 2.0; }
  bool assumed_type_constant() const noexcept { return assumed_constant_; }

  /// Exponent of the dual norm.
  double dual_exponent() const noexcept;

  double norm(const Eigen::Ref<const Vector>& v) const;
  double dual_norm(const Eigen::Ref<const Vector>& v) const;
  double distance(const Eigen::Ref<const Vector>& a,
                  const Eigen::Ref<const Vector>& b) const;

  /// Human readable, e.g. "l_2 (p=2, T_p=1)".
  std::string describe() const;

 private:
  double q_;
  double p_;
  double t_;
  bool assumed_constant_ = false;
};

/// A finite point set in R^dim, stored column-wise.
class PointSet {
 public:
  /// Throws InputError if `coords` has no columns, no rows or non-finite data.
  explicit PointSet(Matrix coords, std::vector<std::string> labels = {});
  static PointSet from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return static_cast<std::size_t>(coords_.cols()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(coords_.rows()); }
  const Matrix& coords() const noexcept { return coords_; }
  auto point(std::size_t i) const { return coords_.col(static_cast<Eigen::Index>(i)); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  PointSet subset(std::span<const std::size_t> indices) const;
  /// True if two points coincide exactly; sets `first`/`second` to the pair.
  bool has_duplicates(std::size_t* first = nullptr, std::size_t* second = nullptr) const;

 private:
  Matrix coords_;
  std::vector<std::string> labels_;
};

/// r color classes Z_1..Z_r of equal cardinality k in a common R^dim.
/// Points are addressed globally as color * k + member.
class ColoredPointSet {
 public:
  /// Throws InputError on unequal sizes, mixed dimensions or a point shared
  /// between two classes.
  explicit ColoredPointSet(std::vector<PointSet> classes);

  std::size_t colors() const noexcept { return classes_.size(); }
  std::size_t class_size() const noexcept { return classes_.front().size(); }
  std::size_t dim() const noexcept { return classes_.front().dim(); }
  std::size_t total_size() const noexcept { return colors() * class_size(); }
  const PointSet& color_class(std::size_t c) const { return classes_.at(c); }
  const std::vector<PointSet>& classes() const noexcept { return classes_; }

  /// Every point, in global index order.
  const PointSet& all() const noexcept { return all_; }
  std::size_t color_of(std::size_t global) const noexcept { return global / class_size(); }
  std::size_t global_index(std::size_t color, std::size_t member) const noexcept {
    return color * class_size() + member;
  }

 private:
  std::vector<PointSet> classes_;
  PointSet all_;
};

double norm(const NormSpec& space, const Eigen::Ref<const Vector>& v);

/// Coordinate-wise mean. Throws InputError on an empty set.
Vector centroid(const PointSet& points);
Vector centroid(const PointSet& points, std::span<const std::size_t> indices);

/// Exact maximum pairwise distance (O(n^2)).
double diameter(const NormSpec& space, const PointSet& points);
double diameter(const NormSpec& space, const PointSet& points,
                std::span<const std::size_t> indices);
/// max_i diam Z_i.
double max_class_diameter(const NormSpec& space, const ColoredPointSet& set);

enum class AverageMode { exact, monte_carlo };

/// Largest family for which the exact Rademacher enumeration is allowed.
inline constexpr std::size_t kMaxExactRademacher = 22;

struct RademacherAverage {
  double value = 0.0;
  double standard_error = 0.0;  // zero in exact mode
  AverageMode mode = AverageMode::exact;
  std::uint64_t patterns = 0;   // sign patterns evaluated
};

/// E_eps || sum_j eps_j x_j || over uniform signs; vectors are the columns.
/// Exact mode enumerates all sign patterns and throws CapacityError beyond
/// kMaxExactRademacher vectors.
RademacherAverage rademacher_average(const NormSpec& space, const Matrix& vectors,
                                     AverageMode mode = AverageMode::exact,
                                     std::uint64_t trials = 0, std::uint64_t seed = 0);

struct TypeInequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// lhs = exact Rademacher average, rhs = T_p (sum ||x_j||^p)^(1/p).
TypeInequalityReport type_inequality_check(const NormSpec& space, const Matrix& vectors);

enum class BoundKind {
  split,             // C = 2^(1/p) T_p, scale = ceil(n/2)
  tverberg,          // C = 2^(1/p) / (1 - 2^w) T_p, scale = r
  selection_or_net,  // twice the Tverberg constant, scale = r
};

double theorem_constant(const NormSpec& space, BoundKind which);
/// C(X) * scale^w * D.
double theorem_bound(const NormSpec& space, BoundKind which, std::size_t scale, double D);

const char* to_string(BoundKind which);
const char* to_string(AverageMode mode);

}  // namespace nodim
