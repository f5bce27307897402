#pragma once

// Seeded random ensembles: CUE / CRE sampling via QR with phase fix, and the
// capacity-normalized Rayleigh channel ensemble.  All sampling is driven by
// counter-based substreams so that parallel Monte Carlo runs are reproducible
// regardless of thread count.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "ifoutage/channel.hpp"

namespace ifoutage {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// xoshiro256++; small state, fast, good statistical quality.
class Xoshiro256pp {
 public:
  Xoshiro256pp() : Xoshiro256pp(0, 0, 0) {}

  Xoshiro256pp(std::uint64_t master_seed, std::uint64_t stream_index,
               std::uint64_t sample_index) {
    std::uint64_t sm = master_seed;
    (void)detail::splitmix64(sm);
    sm ^= stream_index * 0xd1342543de82ef95ULL;
    (void)detail::splitmix64(sm);
    sm ^= sample_index * 0x9e3779b97f4a7c15ULL;
    for (auto& w : s_) w = detail::splitmix64(sm);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Identifies a reproducible stream of samples.  Equal (master_seed,
// stream_index) pairs reproduce bit-identical sequences across runs and
// thread counts; a single RandomStream must not be shared concurrently.
struct RandomStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
  std::uint64_t next_sample = 0;

  Xoshiro256pp engine_at(std::uint64_t sample_index) const {
    return Xoshiro256pp(master_seed, stream_index, sample_index);
  }
  Xoshiro256pp next_engine() { return engine_at(next_sample++); }
  RandomStream substream(std::uint64_t index) const {
    return RandomStream{master_seed, index, 0};
  }
};

// Box-Muller.  std::normal_distribution is implementation-defined, which
// would break manifest-level reproducibility.
inline double standard_normal(Xoshiro256pp& eng) {
  const double u1 = 1.0 - eng.uniform01();
  const double u2 = eng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
inline std::complex<double> standard_complex_normal(Xoshiro256pp& eng) {
  const double u1 = 1.0 - eng.uniform01();
  const double u2 = eng.uniform01();
  const double r = std::sqrt(-std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

namespace detail {

inline Eigen::MatrixXcd complex_gaussian_matrix(int rows, int cols,
                                                Xoshiro256pp& eng) {
  Eigen::MatrixXcd g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = standard_complex_normal(eng);
  return g;
}

}  // namespace detail

// Haar-distributed unitary matrix: QR of an i.i.d. complex Gaussian matrix
// with R's diagonal phases rotated out.
inline UnitaryMatrix sample_cue(int n, Xoshiro256pp& eng) {
  if (n < 1) throw std::invalid_argument("sample_cue: n must be >= 1");
  const Eigen::MatrixXcd g = detail::complex_gaussian_matrix(n, n, eng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const std::complex<double> d = r(j, j);
    const double a = std::abs(d);
    const std::complex<double> phase = (a > 0.0) ? d / a : 1.0;
    q.col(j) *= phase;
  }
  return UnitaryMatrix(std::move(q));
}

inline UnitaryMatrix sample_cue(int n, RandomStream& rs) {
  Xoshiro256pp eng = rs.next_engine();
  return sample_cue(n, eng);
}

// Haar-distributed real orthogonal matrix via QR with sign fix.
inline OrthogonalMatrix sample_cre(int m, Xoshiro256pp& eng) {
  if (m < 1) throw std::invalid_argument("sample_cre: m must be >= 1");
  Eigen::MatrixXd g(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) g(i, j) = standard_normal(eng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return OrthogonalMatrix(std::move(q));
}

inline OrthogonalMatrix sample_cre(int m, RandomStream& rs) {
  Xoshiro256pp eng = rs.next_engine();
  return sample_cre(m, eng);
}

// Real lift of a unitary matrix; always orthogonal with determinant +1.
inline OrthogonalMatrix induced_real_orthogonal(const UnitaryMatrix& v) {
  const auto& vc = v.entries();
  const int n = static_cast<int>(vc.rows());
  Eigen::MatrixXd o(2 * n, 2 * n);
  o.topLeftCorner(n, n) = vc.real();
  o.topRightCorner(n, n) = -vc.imag();
  o.bottomLeftCorner(n, n) = vc.imag();
  o.bottomRightCorner(n, n) = vc.real();
  return OrthogonalMatrix(std::move(o));
}

// i.i.d. complex Gaussian square channel scaled so that its white-input
// mutual information hits c_target exactly (bisection on the scale factor).
inline ComplexChannel sample_normalized_rayleigh(int n_t, double c_target,
                                                 Xoshiro256pp& eng) {
  if (n_t < 1)
    throw std::invalid_argument("sample_normalized_rayleigh: n_t must be >= 1");
  if (!(c_target > 0.0))
    throw std::invalid_argument(
        "sample_normalized_rayleigh: c_target must be > 0");

  for (int attempt = 0; attempt < 100; ++attempt) {
    const Eigen::MatrixXcd g = detail::complex_gaussian_matrix(n_t, n_t, eng);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g);
    const Eigen::VectorXd sigma = svd.singularValues();
    if (!(sigma(0) > 0.0) || sigma(n_t - 1) / sigma(0) < 1e-14) continue;

    const auto capacity_at = [&](double s) {
      double c = 0.0;
      for (int i = 0; i < n_t; ++i) {
        const double x = s * sigma(i);
        c += std::log2(1.0 + x * x);
      }
      return c;
    };

    double lo = std::exp2(c_target / (2.0 * n_t)) / g.norm();
    while (capacity_at(lo) > c_target) lo *= 0.5;
    double hi = lo;
    while (capacity_at(hi) < c_target) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (capacity_at(mid) < c_target)
        lo = mid;
      else
        hi = mid;
      if (std::abs(capacity_at(mid) - c_target) < 1e-12) break;
    }
    const double s = 0.5 * (lo + hi);
    if (std::abs(capacity_at(s) - c_target) > 1e-9) continue;
    return ComplexChannel(s * g);
  }
  throw std::runtime_error(
      "sample_normalized_rayleigh: could not draw a well-conditioned channel");
}

inline ComplexChannel sample_normalized_rayleigh(int n_t, double c_target,
                                                 RandomStream& rs) {
  Xoshiro256pp eng = rs.next_engine();
  return sample_normalized_rayleigh(n_t, c_target, eng);
}

}  // namespace ifoutage
