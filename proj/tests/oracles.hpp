// Brute-force reference computations. None of these call into the library
// code they are used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt choose(long n, long k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Shrinkage coefficient by enumerating sign patterns. For Q = {0..d-1} fixed,
// the mean of sigma(Q) over balanced subsets, written against the uniform
// measure on sign vectors, puts weight C(n,d) / (2^n W) on each pattern with m
// pluses, where W counts the subsets compatible with the pattern: C(m, d) if
// m >= d (Q inside the plus set) and C(n-m, n-d) otherwise (plus set inside Q).
// The resulting coefficient of eps_i for i in Q and for i outside Q are
// averaged; their mean is gamma.
inline Rational gamma_by_sign_patterns(int n, int d) {
  Rational alpha_in = 0, alpha_out = 0;
  const BigInt cnd = choose(n, d);
  const BigInt two_n = BigInt(1) << n;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const int m = __builtin_popcount(mask);
    // Representations (Q', Y) of this pattern: Y = plus set, Q' ranges over
    // d-subsets related to Y by inclusion. We count how often a fixed Q = {0..d-1}
    // appears among them and weight eps_0 and eps_{n-1}.
    bool compatible;
    BigInt w;
    if (m >= d) {
      compatible = true;
      for (int i = 0; i < d; ++i) compatible &= ((mask >> i) & 1u) != 0;
      w = choose(m, d);
    } else {
      compatible = true;
      for (int i = d; i < n; ++i) compatible &= ((mask >> i) & 1u) == 0;
      w = choose(n - m, n - d);
    }
    if (!compatible || w == 0) continue;
    const Rational weight(cnd, two_n * w);
    const int eps_in = (mask & 1u) ? 1 : -1;
    const int eps_out = (mask >> (n - 1) & 1u) ? 1 : -1;
    alpha_in += weight * eps_in;
    alpha_out -= weight * eps_out;
  }
  return (alpha_in + alpha_out) / 2;
}

inline double lq_norm(const Eigen::VectorXd& v, double q) {
  if (std::isinf(q)) return v.cwiseAbs().maxCoeff();
  double s = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), q);
  return std::pow(s, 1.0 / q);
}

// E || sum eps_j x_j ||_q over all 2^m sign vectors, by direct enumeration.
inline double rademacher(const Eigen::MatrixXd& x, double q) {
  const auto m = static_cast<int>(x.cols());
  double total = 0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(x.rows());
    for (int j = 0; j < m; ++j) s += ((mask >> j) & 1u ? 1.0 : -1.0) * x.col(j);
    total += lq_norm(s, q);
  }
  return total / static_cast<double>(1u << m);
}

// Euclidean distance from q to conv(columns of x) by active-set enumeration:
// the minimizer is the affine projection onto some affinely independent face
// with non-negative barycentric weights.
inline double qp_distance(const Eigen::VectorXd& q, const Eigen::MatrixXd& x) {
  const auto n = static_cast<int>(x.cols());
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> face;
    for (int j = 0; j < n; ++j)
      if ((mask >> j) & 1u) face.push_back(j);
    const int m = static_cast<int>(face.size());
    const Eigen::VectorXd x0 = x.col(face[0]);
    if (m == 1) {
      best = std::min(best, (q - x0).norm());
      continue;
    }
    Eigen::MatrixXd v(x.rows(), m - 1);
    for (int i = 1; i < m; ++i) v.col(i - 1) = x.col(face[i]) - x0;
    Eigen::FullPivHouseholderQR<Eigen::MatrixXd> qr(v);
    if (qr.rank() < m - 1) continue;
    const Eigen::VectorXd mu = qr.solve(q - x0);
    if (mu.minCoeff() < -1e-12 || mu.sum() > 1 + 1e-12) continue;
    best = std::min(best, (q - x0 - v * mu).norm());
  }
  return best;
}

// min over balanced bipartitions of || c(A) - c(B) ||_q with |A| = floor(n/2).
inline double best_split_gap(const Eigen::MatrixXd& x, double q) {
  const auto n = static_cast<int>(x.cols());
  const int half = n / 2;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != half) continue;
    Eigen::VectorXd a = Eigen::VectorXd::Zero(x.rows()), b = a;
    for (int j = 0; j < n; ++j) ((mask >> j) & 1u ? a : b) += x.col(j);
    best = std::min(best, lq_norm(a / half - b / (n - half), q));
  }
  return best;
}

inline double diameter(const Eigen::MatrixXd& x, double q) {
  double d = 0;
  for (Eigen::Index i = 0; i < x.cols(); ++i)
    for (Eigen::Index j = i + 1; j < x.cols(); ++j)
      d = std::max(d, lq_norm(x.col(i) - x.col(j), q));
  return d;
}

inline Eigen::MatrixXd gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = g(rng);
  return m;
}

}  // namespace oracle
