#include "nodim/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "nodim/errors.hpp"

namespace nodim {

namespace {

// Exponent of the smooth objective ||v||_s^s the solver actually descends.
double surrogate_exponent(double q) {
  if (q == 1.0) return 1.0 + 1.0 / 32.0;
  if (std::isinf(q)) return 32.0;
  return q;
}

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Direction of the gradient of ||v||_s^s (any positive multiple).
Vector surrogate_gradient(const Vector& v, double s) {
  if (s == 2.0) return v;
  const double scale = max_abs(v);
  Vector g(v.size());
  if (scale == 0.0) return g.setZero();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]) / scale;
    g[i] = (v[i] > 0 ? 1.0 : (v[i] < 0 ? -1.0 : 0.0)) * std::pow(a, s - 1.0);
  }
  return g;
}

// A unit vector of the dual norm with <g, v> = ||v||.
Vector dual_vector(const NormSpec& space, const Vector& v) {
  const double q = space.q_norm();
  Vector g = Vector::Zero(v.size());
  if (max_abs(v) == 0.0) return g;
  if (std::isinf(q)) {
    Eigen::Index i = 0;
    v.cwiseAbs().maxCoeff(&i);
    g[i] = v[i] > 0 ? 1.0 : -1.0;
    return g;
  }
  if (q == 1.0) return v.cwiseSign();
  g = surrogate_gradient(v, q);
  return g / space.dual_norm(g);
}

// Derivative sign of t -> ||r + t d||_s^s, up to a positive factor.
double directional_slope(const Vector& r, const Vector& d, double t, double s, double scale) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double v = (r[i] + t * d[i]) / scale;
    if (v == 0.0) continue;
    acc += (v > 0 ? 1.0 : -1.0) * std::pow(std::abs(v), s - 1.0) * d[i];
  }
  return acc;
}

double line_search(const Vector& r, const Vector& d, double t_max, double s) {
  if (s == 2.0) {
    const double dd = d.squaredNorm();
    if (dd == 0.0) return t_max;
    return std::clamp(-r.dot(d) / dd, 0.0, t_max);
  }
  const double scale = std::max(max_abs(r), t_max * max_abs(d));
  if (scale == 0.0) return t_max;
  if (directional_slope(r, d, 0.0, s, scale) >= 0.0) return 0.0;
  if (directional_slope(r, d, t_max, s, scale) <= 0.0) return t_max;
  double lo = 0.0;
  double hi = t_max;
  for (int i = 0; i < 200 && hi - lo > 1e-17 * t_max; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (directional_slope(r, d, mid, s, scale) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}


// Dense two-phase simplex for min c'x, Ax = b, x >= 0 with Bland's rule.
// Returns false when the pivot budget runs out. `y` receives the row duals.
bool simplex(const Matrix& A, const Vector& b, const Vector& c, Vector& x, Vector& y) {
  const Eigen::Index m = A.rows(), n = A.cols(), rhs = n + m;
  constexpr double eps = 1e-11;
  Matrix T = Matrix::Zero(m + 1, n + m + 1);
  std::vector<double> sign(static_cast<std::size_t>(m));
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    sign[i] = b[i] < 0 ? -1.0 : 1.0;
    T.row(i).head(n) = sign[i] * A.row(i);
    T(i, n + i) = 1.0;
    T(i, rhs) = sign[i] * b[i];
    basis[i] = n + i;
  }
  auto pivot = [&](Eigen::Index r, Eigen::Index col) {
    T.row(r) /= T(r, col);
    for (Eigen::Index i = 0; i <= m; ++i)
      if (i != r && T(i, col) != 0.0) T.row(i) -= T(i, col) * T.row(r);
    basis[r] = col;
  };
  const long budget = 50 * static_cast<long>(n + m) + 1000;
  long pivots = 0;
  auto optimize = [&](Eigen::Index columns) {
    while (pivots++ < budget) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < columns; ++j)
        if (T(m, j) < -eps) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = kInfinity;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (T(i, enter) <= eps) continue;
        const double ratio = T(i, rhs) / T(i, enter);
        if (ratio < best - eps || (ratio <= best + eps && leave >= 0 && basis[i] < basis[leave])) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) return false;  // unbounded; cannot happen for a norm objective
      pivot(leave, enter);
    }
    return false;
  };

  // Phase 1: minimize the sum of artificials.
  for (Eigen::Index j = 0; j < n; ++j) T(m, j) = -T.col(j).head(m).sum();
  T(m, rhs) = -T.col(rhs).head(m).sum();
  if (!optimize(n + m) || -T(m, rhs) > 1e-9 * (1.0 + b.cwiseAbs().sum())) return false;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(T(i, j)) > 1e-9) {
        pivot(i, j);
        break;
      }
  }

  // Phase 2 over the structural columns only.
  T.row(m).setZero();
  T.row(m).head(n) = c.transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double cb = basis[i] < n ? c[basis[i]] : 0.0;
    if (cb != 0.0) T.row(m) -= cb * T.row(i);
  }
  if (!optimize(n)) return false;

  x = Vector::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = T(i, rhs);
  y.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) y[i] = -sign[i] * T(m, n + i);
  return true;
}

// Largest LP tableau (entries) attempted for the polyhedral norms.
constexpr double kMaxTableau = 4e6;

// min ||sum_j lambda_j x_j|| over the simplex for l_1 or l_inf, points already
// shifted so the query is the origin. Writes weights and a dual direction.
bool polyhedral_lp(const Matrix& shifted, bool l_inf, Vector& lambda, Vector& g) {
  const Eigen::Index d = shifted.rows(), n = shifted.cols();
  const Eigen::Index aux = l_inf ? 1 : d;  // t, or u_1..u_d
  const Eigen::Index cols = n + aux + 2 * d, rows = 2 * d + 1;
  if (static_cast<double>(rows) * static_cast<double>(cols + rows) > kMaxTableau) return false;
  const double scale = std::max(shifted.cwiseAbs().maxCoeff(), 1e-300);
  Matrix A = Matrix::Zero(rows, cols);
  Vector b = Vector::Zero(rows), c = Vector::Zero(cols);
  // x_i'lambda - aux + s+ = 0 and -x_i'lambda - aux + s- = 0 for each coordinate.
  A.topLeftCorner(d, n) = shifted / scale;
  A.block(d, 0, d, n) = -shifted / scale;
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::Index a = n + (l_inf ? 0 : i);
    A(i, a) = -1.0;
    A(d + i, a) = -1.0;
    A(i, n + aux + i) = 1.0;
    A(d + i, n + aux + d + i) = 1.0;
  }
  A.row(2 * d).head(n).setOnes();
  b[2 * d] = 1.0;
  c.segment(n, aux).setOnes();
  Vector x, y;
  if (!simplex(A, b, c, x, y)) return false;
  lambda = x.head(n).cwiseMax(0.0);
  if (!(lambda.sum() > 0.0)) return false;
  lambda /= lambda.sum();
  g = y.head(d) - y.segment(d, d);
  return true;
}

}  // namespace

double default_tolerance(double diameter) { return 1e-6 * std::max(1.0, diameter); }

DistanceCertificate dist_to_hull(const NormSpec& space, const Eigen::Ref<const Vector>& q,
                                 const PointSet& points, double tol, std::size_t max_iters) {
  if (static_cast<std::size_t>(q.size()) != points.dim())
    throw InputError("dimension_mismatch", "query has dimension " + std::to_string(q.size()) +
                                               ", points have " + std::to_string(points.dim()));
  if (!q.allFinite()) throw InputError("non_finite", "query is not finite");
  if (!(tol > 0.0)) throw InputError("invalid_tolerance", "tolerance must be positive");

  const Matrix shifted = points.coords().colwise() - q;
  const auto n = static_cast<Eigen::Index>(points.size());
  const double s = surrogate_exponent(space.q_norm());

  Eigen::Index start = 0;
  double start_norm = kInfinity;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double v = space.norm(shifted.col(j));
    if (v < start_norm) {
      start_norm = v;
      start = j;
    }
  }
  Vector lambda = Vector::Zero(n);
  lambda[start] = 1.0;
  Vector r = shifted.col(start);

  DistanceCertificate cert;
  cert.status = CertificateStatus::loose;
  double lower = 0.0;
  double best_width = kInfinity;
  std::size_t stalled = 0;

  Vector separator = Vector::Zero(shifted.rows());
  // Records the best unit separator seen; either sign of g may separate.
  auto dual_lower = [&](const Vector& g) {
    const double scale = space.dual_norm(g);
    if (!(scale > 0.0)) return 0.0;
    const Vector unit = g / scale;
    const double plus = (shifted.transpose() * unit).minCoeff();
    const double minus = -(shifted.transpose() * unit).maxCoeff();
    const double value = std::max(plus, minus);
    if (value > lower) separator = plus >= minus ? unit : Vector(-unit);
    return value;
  };

  const bool polyhedral = space.q_norm() == 1.0 || std::isinf(space.q_norm());
  if (polyhedral) {
    Vector weights, g;
    if (polyhedral_lp(shifted, std::isinf(space.q_norm()), weights, g)) {
      lower = std::max(lower, dual_lower(g));
      const Vector rl = shifted * weights;
      if (space.norm(rl) < space.norm(r)) {
        lambda = weights;
        r = rl;
      }
    }
  }

  std::size_t it = 0;
  for (; it < max_iters; ++it) {
    if (it % 128 == 127) r = shifted * lambda;
    const double upper = space.norm(r);
    if (upper <= tol) {
      cert.status = CertificateStatus::converged;
      break;
    }
    const Vector h = surrogate_gradient(r, s);
    const Eigen::VectorXd scores = shifted.transpose() * h;
    Eigen::Index fw = 0;
    scores.minCoeff(&fw);
    lower = std::max(lower, dual_lower(h));
    if (s != space.q_norm()) lower = std::max(lower, dual_lower(dual_vector(space, r)));
    const double width = upper - lower;
    if (width <= tol) {
      cert.status = CertificateStatus::converged;
      break;
    }
    if (width < best_width * (1.0 - 1e-12)) {
      best_width = width;
      stalled = 0;
    } else if (++stalled > 2000) {
      break;
    }

    Eigen::Index away = -1;
    for (Eigen::Index j = 0; j < n; ++j)
      if (lambda[j] > 0.0 && (away < 0 || scores[j] > scores[away])) away = j;
    if (away == fw || scores[away] <= scores[fw]) break;
    const Vector d = shifted.col(fw) - shifted.col(away);
    const double t = line_search(r, d, lambda[away], s);
    if (t <= 0.0) break;
    lambda[fw] += t;
    lambda[away] -= t;
    if (lambda[away] <= 1e-15) {
      lambda[fw] += lambda[away];
      lambda[away] = 0.0;
    }
    r += t * d;
  }

  lambda = lambda.cwiseMax(0.0);
  lambda /= lambda.sum();
  r = shifted * lambda;
  cert.upper = space.norm(r);
  lower = std::max(lower, dual_lower(dual_vector(space, r)));
  cert.lower = std::min(cert.upper, lower);
  cert.separator.assign(separator.data(), separator.data() + separator.size());
  if (cert.upper - cert.lower <= tol || cert.upper <= tol) cert.status = CertificateStatus::converged;
  cert.iterations = it;
  cert.witness_weights.assign(lambda.data(), lambda.data() + lambda.size());
  return cert;
}

Intersection ball_hull_intersects(const NormSpec& space, const Eigen::Ref<const Vector>& q,
                                  double radius, const PointSet& points, double tol,
                                  DistanceCertificate* certificate) {
  if (!(radius >= 0.0)) throw InputError("invalid_radius", "radius must be nonnegative");
  DistanceCertificate cert = dist_to_hull(space, q, points, tol);
  Intersection out = Intersection::unknown;
  if (cert.upper <= radius)
    out = Intersection::yes;
  else if (cert.lower > radius)
    out = Intersection::no;
  if (certificate) *certificate = std::move(cert);
  return out;
}

const char* to_string(CertificateStatus status) {
  return status == CertificateStatus::converged ? "converged" : "loose";
}

const char* to_string(Intersection value) {
  switch (value) {
    case Intersection::yes:
      return "yes";
    case Intersection::no:
      return "no";
    case Intersection::unknown:
      return "unknown";
  }
  return "?";
}

}  // namespace nodim
