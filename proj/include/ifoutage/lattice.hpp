#pragma once

// Exact small-dimension lattice computations: LLL reduction, shortest
// vectors and successive minima via Fincke-Pohst enumeration, dual bases,
// and integer-vector ball enumeration with primitivity / unit-multiple
// filters.  Exact mode is capped at dimension 8.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ifoutage {

using IntVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;
using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr int kExactDimensionCap = 8;

namespace detail {

using int128 = __int128;

inline int128 int128_abs(int128 x) { return x < 0 ? -x : x; }

inline int128 int128_gcd(int128 a, int128 b) {
  a = int128_abs(a);
  b = int128_abs(b);
  while (b != 0) {
    const int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Fraction-free determinant (Bareiss).  Operands are guarded before each
// multiplication so intermediate products stay inside 128 bits.
inline int128 integer_determinant(const IntMatrix& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<std::vector<int128>> a(n, std::vector<int128>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = m(i, j);
  const int128 guard = int128(1) << 60;
  int128 prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i][k] != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        if (int128_abs(a[i][j]) > guard || int128_abs(a[k][k]) > guard ||
            int128_abs(a[i][k]) > guard || int128_abs(a[k][j]) > guard)
          throw std::runtime_error("integer_determinant: overflow");
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// Incremental fraction-free row echelon over the integers; gcd-normalized
// rows keep entry growth contained.  Used for exact linear-independence
// tests on witness vectors.
class IntegerEchelon {
 public:
  explicit IntegerEchelon(int dim) : dim_(dim) {}

  int rank() const { return static_cast<int>(rows_.size()); }

  // Inserts v if it is independent of the rows seen so far.
  bool try_insert(const IntVector& v) {
    std::vector<int128> r(dim_);
    for (int i = 0; i < dim_; ++i) r[i] = v(i);
    const int128 guard = int128(1) << 60;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const int p = pivot_[k];
      if (r[p] == 0) continue;
      const int128 pv = rows_[k][p];
      const int128 rv = r[p];
      if (int128_abs(pv) > guard || int128_abs(rv) > guard)
        throw std::runtime_error("IntegerEchelon: overflow");
      for (int j = 0; j < dim_; ++j) {
        if (int128_abs(r[j]) > guard || int128_abs(rows_[k][j]) > guard)
          throw std::runtime_error("IntegerEchelon: overflow");
        r[j] = r[j] * pv - rows_[k][j] * rv;
      }
      normalize(r);
    }
    int pivot = -1;
    for (int j = 0; j < dim_; ++j)
      if (r[j] != 0) {
        pivot = j;
        break;
      }
    if (pivot < 0) return false;
    normalize(r);
    rows_.push_back(std::move(r));
    pivot_.push_back(pivot);
    return true;
  }

 private:
  static void normalize(std::vector<int128>& r) {
    int128 g = 0;
    for (const int128 x : r) g = int128_gcd(g, x);
    if (g > 1)
      for (int128& x : r) x /= g;
  }
  int dim_;
  std::vector<std::vector<int128>> rows_;
  std::vector<int> pivot_;
};

inline bool lex_less(const IntVector& a, const IntVector& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

// Sign convention for enumeration output: first nonzero entry positive.
inline IntVector canonical_sign(IntVector v) {
  for (int i = 0; i < v.size(); ++i) {
    if (v(i) != 0) {
      if (v(i) < 0) v = -v;
      break;
    }
  }
  return v;
}

}  // namespace detail

class LatticeBasis {
 public:
  explicit LatticeBasis(Eigen::MatrixXd generator)
      : g_(std::move(generator)) {
    if (g_.rows() != g_.cols() || g_.rows() < 1)
      throw std::invalid_argument("LatticeBasis: generator must be square");
    if (!g_.allFinite())
      throw std::invalid_argument("LatticeBasis: entries must be finite");
    double scale = 1.0;
    for (int j = 0; j < g_.cols(); ++j) scale *= std::max(g_.col(j).norm(), 1e-300);
    const double det = g_.partialPivLu().determinant();
    if (!(std::abs(det) > 1e-12 * scale))
      throw std::invalid_argument("LatticeBasis: rank-deficient generator");
  }

  const Eigen::MatrixXd& generator() const { return g_; }
  int dim() const { return static_cast<int>(g_.rows()); }

 private:
  Eigen::MatrixXd g_;
};

struct IntegerMatrix {
  IntMatrix entries;
  bool unimodular = false;

  IntegerMatrix(IntMatrix m, bool require_unimodular = false)
      : entries(std::move(m)) {
    if (entries.rows() != entries.cols())
      throw std::invalid_argument("IntegerMatrix: must be square");
    const auto det = detail::integer_determinant(entries);
    if (det == 0) throw std::invalid_argument("IntegerMatrix: singular");
    unimodular = (det == 1 || det == -1);
    if (require_unimodular && !unimodular)
      throw std::invalid_argument("IntegerMatrix: |det| != 1");
  }

  static IntegerMatrix identity(int n) {
    IntMatrix m = IntMatrix::Identity(n, n);
    return IntegerMatrix(std::move(m), true);
  }
};

struct MinimaReport {
  std::vector<double> norms;            // lambda_1 <= ... <= lambda_K
  std::vector<IntVector> vectors;       // witnessing coefficient vectors
};

// delta-LLL reduction on columns; returns the reduced basis and the
// unimodular transform U with reduced = b * U.
inline std::pair<LatticeBasis, IntegerMatrix> lll_reduce(const LatticeBasis& b,
                                                         double delta = 0.99) {
  if (!(delta > 0.25 && delta < 1.0))
    throw std::invalid_argument("lll_reduce: delta must be in (0.25, 1)");
  const int k_dim = b.dim();
  Eigen::MatrixXd basis = b.generator();
  IntMatrix u = IntMatrix::Identity(k_dim, k_dim);

  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(k_dim, k_dim);
  Eigen::VectorXd bstar_sq = Eigen::VectorXd::Zero(k_dim);
  Eigen::MatrixXd bstar = basis;

  const auto gram_schmidt = [&]() {
    for (int i = 0; i < k_dim; ++i) {
      bstar.col(i) = basis.col(i);
      for (int j = 0; j < i; ++j) {
        mu(i, j) = basis.col(i).dot(bstar.col(j)) / bstar_sq(j);
        bstar.col(i) -= mu(i, j) * bstar.col(j);
      }
      bstar_sq(i) = bstar.col(i).squaredNorm();
      if (!(bstar_sq(i) > 0.0))
        throw std::runtime_error("lll_reduce: numerically rank-deficient");
    }
  };

  gram_schmidt();
  int k = 1;
  long long iters = 0;
  while (k < k_dim) {
    if (++iters > 200000)
      throw std::runtime_error("lll_reduce: iteration cap exceeded");
    for (int j = k - 1; j >= 0; --j) {
      const double m = basis.col(k).dot(bstar.col(j)) / bstar_sq(j);
      const long long q = std::llround(m);
      if (q != 0) {
        basis.col(k) -= static_cast<double>(q) * basis.col(j);
        u.col(k) -= q * u.col(j);
      }
    }
    gram_schmidt();
    if (bstar_sq(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * bstar_sq(k - 1)) {
      ++k;
    } else {
      basis.col(k).swap(basis.col(k - 1));
      u.col(k).swap(u.col(k - 1));
      gram_schmidt();
      k = std::max(1, k - 1);
    }
  }
  return {LatticeBasis(std::move(basis)), IntegerMatrix(std::move(u), true)};
}

namespace detail {

// Visits every nonzero integer x with ||Bx||^2 <= r2 whose highest-index
// nonzero coordinate is positive (one representative per +-x pair).
// Returns false if the node budget is exhausted.
template <typename Visit>
bool enumerate_half(const Eigen::MatrixXd& rfac, double r2, Visit&& visit,
                    std::size_t node_cap = 50'000'000) {
  const int n = static_cast<int>(rfac.rows());
  IntVector x = IntVector::Zero(n);
  std::vector<double> center(n, 0.0), partial(n + 1, 0.0);
  std::vector<long long> lo(n, 0), hi(n, 0);
  std::size_t nodes = 0;

  int level = n - 1;
  bool descend = true;
  while (true) {
    if (descend) {
      // interval of feasible x[level] given x[level+1..]
      double c = 0.0;
      for (int j = level + 1; j < n; ++j) c += rfac(level, j) * x(j);
      c = -c / rfac(level, level);
      center[level] = c;
      const double room = r2 * (1.0 + 1e-12) - partial[level + 1];
      if (room < 0.0) {
        descend = false;
        ++level;
        if (level >= n) return true;
        continue;
      }
      const double w = std::sqrt(room) / rfac(level, level);
      lo[level] = static_cast<long long>(std::ceil(c - w - 1e-12));
      hi[level] = static_cast<long long>(std::floor(c + w + 1e-12));
      bool all_zero_above = true;
      for (int j = level + 1; j < n; ++j)
        if (x(j) != 0) {
          all_zero_above = false;
          break;
        }
      if (all_zero_above) lo[level] = std::max(lo[level], 0LL);
      x(level) = lo[level];
    } else {
      ++x(level);
    }
    if (x(level) > hi[level]) {
      descend = false;
      ++level;
      if (level >= n) return true;
      continue;
    }
    if (++nodes > node_cap) return false;
    const double step = rfac(level, level) * (x(level) - center[level]);
    const double dist = partial[level + 1] + step * step;
    if (dist > r2 * (1.0 + 1e-12)) {
      descend = false;
      continue;
    }
    if (level == 0) {
      bool nonzero = false;
      for (int j = 0; j < n; ++j)
        if (x(j) != 0) {
          nonzero = true;
          break;
        }
      if (nonzero) visit(x, dist);
      descend = false;
    } else {
      partial[level] = dist;
      --level;
      descend = true;
    }
  }
}

inline Eigen::MatrixXd cholesky_r_factor(const Eigen::MatrixXd& gram) {
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("cholesky_r_factor: matrix not positive definite");
  return Eigen::MatrixXd(llt.matrixU());
}

}  // namespace detail

// Globally shortest nonzero lattice vector (coefficients and norm).
inline std::pair<IntVector, double> shortest_vector(const LatticeBasis& b) {
  if (b.dim() > kExactDimensionCap)
    throw std::invalid_argument("shortest_vector: dimension above exact cap");
  const auto [reduced, u] = lll_reduce(b);
  const Eigen::MatrixXd rfac =
      detail::cholesky_r_factor(reduced.generator().transpose() *
                                reduced.generator());
  double best = reduced.generator().col(0).squaredNorm();
  IntVector best_x = IntVector::Unit(b.dim(), 0);
  detail::enumerate_half(rfac, best, [&](const IntVector& x, double dist) {
    if (dist < best - 1e-15 * best ||
        (std::abs(dist - best) <= 1e-12 * best &&
         detail::lex_less(detail::canonical_sign(x), best_x))) {
      best = dist;
      best_x = detail::canonical_sign(x);
    }
  });
  // map back through the LLL transform: lattice coefficients of b
  IntVector coeffs = u.entries * best_x;
  return {detail::canonical_sign(coeffs), std::sqrt(best)};
}

// Exact successive minima with witnessing linearly independent integer
// vectors; greedy by increasing norm with exact integer rank tests.
inline MinimaReport successive_minima(const LatticeBasis& b) {
  const int k_dim = b.dim();
  if (k_dim > kExactDimensionCap)
    throw std::invalid_argument("successive_minima: dimension above exact cap");
  const auto [reduced, u] = lll_reduce(b);
  const Eigen::MatrixXd& rb = reduced.generator();
  const Eigen::MatrixXd rfac =
      detail::cholesky_r_factor(rb.transpose() * rb);

  double radius_sq = 0.0;
  for (int j = 0; j < k_dim; ++j)
    radius_sq = std::max(radius_sq, rb.col(j).squaredNorm());

  struct Candidate {
    double norm_sq;
    IntVector x;
  };
  std::vector<Candidate> cands;
  const bool ok = detail::enumerate_half(
      rfac, radius_sq, [&](const IntVector& x, double dist) {
        cands.push_back({dist, detail::canonical_sign(x)});
      });
  if (!ok)
    throw std::runtime_error("successive_minima: enumeration budget exceeded");
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& c) {
    if (a.norm_sq != c.norm_sq) return a.norm_sq < c.norm_sq;
    return detail::lex_less(a.x, c.x);
  });

  MinimaReport report;
  detail::IntegerEchelon echelon(k_dim);
  for (const auto& c : cands) {
    if (report.vectors.size() == static_cast<std::size_t>(k_dim)) break;
    IntVector coeffs = detail::canonical_sign(u.entries * c.x);
    if (echelon.try_insert(coeffs)) {
      report.norms.push_back(std::sqrt(c.norm_sq));
      report.vectors.push_back(std::move(coeffs));
    }
  }
  if (report.vectors.size() != static_cast<std::size_t>(k_dim))
    throw std::runtime_error("successive_minima: incomplete witness set");
  return report;
}

// Dual generator (G^T)^{-1}; Gram(dual) = Gram(primal)^{-1}.
inline LatticeBasis dual_basis(const LatticeBasis& b) {
  const Eigen::MatrixXd gt = b.generator().transpose();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(gt);
  return LatticeBasis(lu.inverse());
}

// All integer vectors with 0 < ||a|| < sqrt(beta/d), lexicographically
// sorted.  Throws when the set would exceed `cap`.
inline std::vector<IntVector> enumerate_ball(double beta, double d, int dim,
                                             std::size_t cap = 100'000'000) {
  if (!(beta > 0.0) || !(d > 0.0))
    throw std::invalid_argument("enumerate_ball: beta and d must be > 0");
  if (dim < 1) throw std::invalid_argument("enumerate_ball: dim must be >= 1");
  const double r2 = beta / d;
  std::vector<IntVector> out;
  if (r2 <= 1.0) return out;
  const long long box = static_cast<long long>(std::ceil(std::sqrt(r2)));
  IntVector a = IntVector::Zero(dim);
  // plain nested scan with radius pruning; strict norm inequality
  const std::function<void(int, double)> rec = [&](int level, double used) {
    if (level == dim) {
      if (used > 0.0) {
        if (out.size() >= cap)
          throw std::runtime_error("enumerate_ball: size cap exceeded");
        out.push_back(a);
      }
      return;
    }
    for (long long v = -box; v <= box; ++v) {
      const double nu = used + static_cast<double>(v) * static_cast<double>(v);
      if (nu >= r2) continue;
      a(level) = v;
      rec(level + 1, nu);
    }
    a(level) = 0;
  };
  rec(0, 0.0);
  std::sort(out.begin(), out.end(), detail::lex_less);
  return out;
}

// Keeps exactly the vectors whose entry gcd is 1.
inline std::vector<IntVector> primitive_filter(const std::vector<IntVector>& s) {
  std::vector<IntVector> out;
  out.reserve(s.size());
  for (const auto& a : s) {
    long long g = 0;
    for (int i = 0; i < a.size(); ++i) g = std::gcd(g, std::abs(a(i)));
    if (g == 1) out.push_back(a);
  }
  return out;
}

namespace detail {

// Orbit of the real lift of a complex integer vector under multiplication of
// the complex vector by {1, -1, j, -j}.
inline std::array<IntVector, 4> unit_multiple_orbit(const IntVector& a) {
  const int n2 = static_cast<int>(a.size());
  if (n2 % 2 != 0)
    throw std::invalid_argument("unit_multiple_orbit: even dimension required");
  const int n = n2 / 2;
  IntVector ja(n2), mja(n2);
  for (int i = 0; i < n; ++i) {
    ja(i) = -a(n + i);      // j * (x + iy) = -y + ix
    ja(n + i) = a(i);
    mja(i) = a(n + i);
    mja(n + i) = -a(i);
  }
  return {a, IntVector(-a), ja, mja};
}

}  // namespace detail

// One lexicographically-smallest representative per {1,-1,j,-j} orbit.
inline std::vector<IntVector> quadruple_reduce(const std::vector<IntVector>& s) {
  std::vector<IntVector> reps;
  reps.reserve(s.size() / 4 + 1);
  for (const auto& a : s) {
    const auto orbit = detail::unit_multiple_orbit(a);
    const IntVector* smallest = &orbit[0];
    for (const auto& o : orbit)
      if (detail::lex_less(o, *smallest)) smallest = &o;
    reps.push_back(*smallest);
  }
  std::sort(reps.begin(), reps.end(), detail::lex_less);
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  return reps;
}

}  // namespace ifoutage
