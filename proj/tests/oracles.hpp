#pragma once

// Test-only oracles, kept independent of the library's computation paths:
// brute-force integer-box lattice searches, a plain re-implementation of the
// union-bound summations, one-sample KS statistics, and random instance
// generators.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "ifoutage/lattice.hpp"
#include "ifoutage/random.hpp"

namespace oracles {

using ifoutage::IntVector;

// All integer vectors in the box ||a||_inf <= box (excluding zero).
inline std::vector<IntVector> box_vectors(int dim, long long box) {
  std::vector<IntVector> out;
  IntVector a = IntVector::Constant(dim, -box);
  while (true) {
    bool nonzero = false;
    for (int i = 0; i < dim; ++i)
      if (a(i) != 0) nonzero = true;
    if (nonzero) out.push_back(a);
    int level = 0;
    while (level < dim) {
      if (++a(level) <= box) break;
      a(level) = -box;
      ++level;
    }
    if (level == dim) break;
  }
  return out;
}

// Exact rank of a set of integer vectors via rational Gaussian elimination
// on long doubles (entries here are small).
inline int rank_of(const std::vector<IntVector>& vecs, int dim) {
  std::vector<std::vector<long double>> rows;
  for (const auto& v : vecs) {
    std::vector<long double> r(dim);
    for (int i = 0; i < dim; ++i) r[i] = static_cast<long double>(v(i));
    for (const auto& e : rows) {
      int p = 0;
      while (p < dim && e[p] == 0.0L) ++p;
      if (p == dim || r[p] == 0.0L) continue;
      const long double f = r[p] / e[p];
      for (int i = 0; i < dim; ++i) r[i] -= f * e[i];
    }
    bool zero = true;
    for (int i = 0; i < dim; ++i)
      if (std::abs((double)r[i]) > 1e-9) zero = false;
    if (!zero) rows.push_back(r);
  }
  return static_cast<int>(rows.size());
}

// Successive minima by brute force over an integer box: sort all box
// vectors by ||G a|| and pick greedily while the rank grows.  The box must
// be large enough to contain the minima; callers derive it from an LLL
// radius bound.
struct BoxMinima {
  std::vector<double> norms;
  std::vector<IntVector> vectors;
};

inline BoxMinima box_successive_minima(const Eigen::MatrixXd& g,
                                       long long box) {
  const int dim = static_cast<int>(g.cols());
  auto cands = box_vectors(dim, box);
  std::vector<std::pair<double, std::size_t>> order(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i)
    order[i] = {(g * cands[i].cast<double>()).squaredNorm(), i};
  std::sort(order.begin(), order.end());
  BoxMinima out;
  std::vector<IntVector> picked;
  for (const auto& [nsq, idx] : order) {
    if (static_cast<int>(picked.size()) == dim) break;
    picked.push_back(cands[idx]);
    if (rank_of(picked, dim) == static_cast<int>(picked.size())) {
      out.norms.push_back(std::sqrt(nsq));
      out.vectors.push_back(cands[idx]);
    } else {
      picked.pop_back();
    }
  }
  return out;
}

// Side of the integer box that is guaranteed to contain every vector with
// ||G a|| <= radius: |a_i| <= radius * ||row_i(G^{-1})||.
inline long long box_for_radius(const Eigen::MatrixXd& g, double radius) {
  const Eigen::MatrixXd ginv = g.inverse();
  double worst = 0.0;
  for (int i = 0; i < ginv.rows(); ++i)
    worst = std::max(worst, ginv.row(i).norm());
  return static_cast<long long>(std::ceil(radius * worst + 1e-9));
}

// Plain re-implementation of the IF union-bound summation: loop over the
// raw integer box in natural order, long double accumulation.
inline double direct_if_bound_sum(double c_bits, double gap_bits, int n_t,
                                  double alpha_value, double d_min,
                                  bool primitive, bool quadruple) {
  const double beta = std::exp2((c_bits - gap_bits) / n_t) * alpha_value;
  const int dim = 2 * n_t;
  const double r2 = beta / d_min;
  if (r2 <= 1.0) return 0.0;
  const long long box =
      static_cast<long long>(std::ceil(std::sqrt(r2)));
  long double sum = 0.0L;
  for (const auto& a : box_vectors(dim, box)) {
    const double nsq = static_cast<double>(a.squaredNorm());
    if (!(nsq < r2) || nsq == 0.0) continue;
    if (primitive) {
      long long g = 0;
      for (int i = 0; i < dim; ++i) g = std::gcd(g, std::llabs(a(i)));
      if (g != 1) continue;
    }
    const long double term =
        2.0L * n_t * std::pow((long double)beta, n_t - 0.5L) *
        std::sqrt((long double)d_min) /
        (std::pow((long double)nsq, n_t - 0.5L) *
         std::exp2((long double)c_bits) * 2.0L);
    sum += term;
  }
  if (quadruple) sum /= 4.0L;
  return std::min(1.0, static_cast<double>(sum));
}

inline double direct_sic_bound_sum(double c_bits, double gap_bits,
                                   double d_max, bool primitive,
                                   bool quadruple) {
  const double beta = std::exp2(-0.5 * (c_bits + gap_bits));
  const double r2 = beta * d_max;
  if (r2 <= 1.0) return 0.0;
  const long long box =
      static_cast<long long>(std::ceil(std::sqrt(r2)));
  long double sum = 0.0L;
  for (const auto& a : box_vectors(4, box)) {
    const double nsq = static_cast<double>(a.squaredNorm());
    if (!(nsq < r2) || nsq == 0.0) continue;
    if (primitive) {
      long long g = 0;
      for (int i = 0; i < 4; ++i) g = std::gcd(g, std::llabs(a(i)));
      if (g != 1) continue;
    }
    const long double term =
        2.0L * std::exp2(-0.75L * (c_bits + gap_bits)) *
        std::exp2((long double)c_bits) /
        (std::pow((long double)nsq, 1.5L) * std::sqrt((long double)d_max));
    sum += term;
  }
  if (quadruple) sum /= 4.0L;
  return std::min(1.0, static_cast<double>(sum));
}

// One-sample KS statistic against a CDF given as a callable.
template <typename Cdf>
double ks_one_sample(std::vector<double> x, Cdf&& cdf) {
  std::sort(x.begin(), x.end());
  double d = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(f - i / n));
  }
  return d;
}

inline Eigen::MatrixXd random_real_matrix(int n, ifoutage::Xoshiro256pp& eng) {
  Eigen::MatrixXd m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = ifoutage::standard_normal(eng);
  return m;
}

inline Eigen::MatrixXcd random_complex_matrix(int rows, int cols,
                                              ifoutage::Xoshiro256pp& eng) {
  Eigen::MatrixXcd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i)
      m(i, j) = ifoutage::standard_complex_normal(eng);
  return m;
}

}  // namespace oracles
