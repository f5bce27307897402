#pragma once

// Channel representations and the compound-class machinery: complex channels,
// their real lifts, paired singular-value spectra with a fixed white-input
// mutual information, and deterministic spectrum grids over the compound
// class.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ifoutage {

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kSpectrumPairTol = 1e-9;

class ComplexChannel {
 public:
  explicit ComplexChannel(Eigen::MatrixXcd entries) : h_(std::move(entries)) {
    if (h_.rows() < 1 || h_.cols() < 1)
      throw std::invalid_argument("ComplexChannel: dimensions must be >= 1");
    if (!h_.allFinite())
      throw std::invalid_argument("ComplexChannel: entries must be finite");
  }

  const Eigen::MatrixXcd& entries() const { return h_; }
  int n_r() const { return static_cast<int>(h_.rows()); }
  int n_t() const { return static_cast<int>(h_.cols()); }

 private:
  Eigen::MatrixXcd h_;
};

class RealChannel {
 public:
  explicit RealChannel(Eigen::MatrixXd entries) : h_(std::move(entries)) {
    if (h_.rows() < 2 || h_.cols() < 2 || h_.rows() % 2 != 0 ||
        h_.cols() % 2 != 0)
      throw std::invalid_argument("RealChannel: dimensions must be even");
    if (!h_.allFinite())
      throw std::invalid_argument("RealChannel: entries must be finite");
  }

  const Eigen::MatrixXd& entries() const { return h_; }
  int rows() const { return static_cast<int>(h_.rows()); }
  int cols() const { return static_cast<int>(h_.cols()); }
  int n_t() const { return cols() / 2; }

  // True when the matrix has the [P -Q; Q P] lift structure.
  bool is_complex_lift(double tol = 1e-12) const {
    const int nr = rows() / 2, nt = cols() / 2;
    const double scale = std::max(1.0, h_.cwiseAbs().maxCoeff());
    return (h_.topLeftCorner(nr, nt) - h_.bottomRightCorner(nr, nt))
                   .cwiseAbs()
                   .maxCoeff() <= tol * scale &&
           (h_.topRightCorner(nr, nt) + h_.bottomLeftCorner(nr, nt))
                   .cwiseAbs()
                   .maxCoeff() <= tol * scale;
  }

 private:
  Eigen::MatrixXd h_;
};

class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Eigen::MatrixXcd entries) : u_(std::move(entries)) {
    if (u_.rows() != u_.cols() || u_.rows() < 1)
      throw std::invalid_argument("UnitaryMatrix: must be square");
    const Eigen::MatrixXcd gram = u_.adjoint() * u_;
    const Eigen::MatrixXcd err =
        gram - Eigen::MatrixXcd::Identity(u_.rows(), u_.cols());
    if (err.cwiseAbs().maxCoeff() > kUnitaryTol)
      throw std::invalid_argument("UnitaryMatrix: U^H U != I");
  }

  const Eigen::MatrixXcd& entries() const { return u_; }
  int dim() const { return static_cast<int>(u_.rows()); }

 private:
  Eigen::MatrixXcd u_;
};

class OrthogonalMatrix {
 public:
  explicit OrthogonalMatrix(Eigen::MatrixXd entries) : o_(std::move(entries)) {
    if (o_.rows() != o_.cols() || o_.rows() < 1)
      throw std::invalid_argument("OrthogonalMatrix: must be square");
    const Eigen::MatrixXd gram = o_.transpose() * o_;
    const Eigen::MatrixXd err =
        gram - Eigen::MatrixXd::Identity(o_.rows(), o_.cols());
    if (err.cwiseAbs().maxCoeff() > kUnitaryTol)
      throw std::invalid_argument("OrthogonalMatrix: O^T O != I");
  }

  const Eigen::MatrixXd& entries() const { return o_; }
  int dim() const { return static_cast<int>(o_.rows()); }

 private:
  Eigen::MatrixXd o_;
};

// Paired diagonal spectrum d_i = 1 + sigma_i^2 of a real-lifted channel,
// descending, with prod sqrt(d_i) = 2^C.  This is the sweep variable for all
// worst-case computations: channels with equal spectra have equal outage
// statistics under Haar pre-processing.
class SpectrumD {
 public:
  SpectrumD(std::vector<double> d_descending, double capacity_bits)
      : d_(std::move(d_descending)), capacity_bits_(capacity_bits) {
    const int k = static_cast<int>(d_.size());
    if (k < 2 || k % 2 != 0)
      throw std::invalid_argument("SpectrumD: need an even number of entries");
    double log_det_half = 0.0;
    for (int i = 0; i < k; ++i) {
      if (!(d_[i] >= 1.0 - 1e-12))
        throw std::invalid_argument("SpectrumD: entries must be >= 1");
      d_[i] = std::max(d_[i], 1.0);
      if (i + 1 < k && d_[i + 1] > d_[i] + kSpectrumPairTol * d_[i])
        throw std::invalid_argument("SpectrumD: entries must be descending");
      log_det_half += 0.5 * std::log2(d_[i]);
    }
    for (int i = 0; i + 1 < k; i += 2) {
      const double rel = std::abs(d_[i] - d_[i + 1]) / std::max(1.0, d_[i]);
      if (rel > kSpectrumPairTol)
        throw std::invalid_argument("SpectrumD: entries must come in pairs");
    }
    if (std::abs(log_det_half - capacity_bits_) >
        1e-9 * std::max(1.0, std::abs(capacity_bits_)))
      throw std::invalid_argument(
          "SpectrumD: prod sqrt(d_i) inconsistent with capacity");
  }

  const std::vector<double>& d() const { return d_; }
  double capacity_bits() const { return capacity_bits_; }
  int dim() const { return static_cast<int>(d_.size()); }
  int n_t() const { return dim() / 2; }
  double d_min() const { return d_.back(); }
  double d_max() const { return d_.front(); }

  // One entry per complex singular value, descending.
  std::vector<double> d_complex() const {
    std::vector<double> dc(n_t());
    for (int i = 0; i < n_t(); ++i) dc[i] = d_[2 * i];
    return dc;
  }

  // Diagonal of the real lift in block order (d_c, d_c), matching the
  // [Re -Im; Im Re] lift of unitary matrices.
  Eigen::VectorXd real_diagonal() const {
    const auto dc = d_complex();
    Eigen::VectorXd out(dim());
    for (int i = 0; i < n_t(); ++i) {
      out(i) = dc[i];
      out(i + n_t()) = dc[i];
    }
    return out;
  }

 private:
  std::vector<double> d_;
  double capacity_bits_;
};

// [Re(H) -Im(H); Im(H) Re(H)]; singular values of the output are those of the
// input with doubled multiplicity.
inline RealChannel realify(const ComplexChannel& h) {
  const auto& hc = h.entries();
  const int nr = h.n_r(), nt = h.n_t();
  Eigen::MatrixXd out(2 * nr, 2 * nt);
  out.topLeftCorner(nr, nt) = hc.real();
  out.topRightCorner(nr, nt) = -hc.imag();
  out.bottomLeftCorner(nr, nt) = hc.imag();
  out.bottomRightCorner(nr, nt) = hc.real();
  return RealChannel(std::move(out));
}

// White-input mutual information log2 det(I + H^H H) in bits.
inline double wi_mutual_information(const ComplexChannel& h) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h.entries());
  const Eigen::VectorXd sigma = svd.singularValues();
  double c = 0.0;
  for (int i = 0; i < sigma.size(); ++i) c += std::log2(1.0 + sigma(i) * sigma(i));
  return c;
}

inline SpectrumD spectrum_from_channel(const ComplexChannel& h) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h.entries());
  const Eigen::VectorXd sigma = svd.singularValues();
  std::vector<double> d(2 * h.n_t(), 1.0);
  double c = 0.0;
  for (int i = 0; i < sigma.size() && i < h.n_t(); ++i) {
    const double di = 1.0 + sigma(i) * sigma(i);
    d[2 * i] = di;
    d[2 * i + 1] = di;
    c += std::log2(di);
  }
  return SpectrumD(std::move(d), c);
}

// Canonical synthesis H = Sigma V^H with the left factor fixed to identity;
// spectrum_from_channel round-trips the input spectrum.
inline ComplexChannel channel_from_spectrum(const SpectrumD& s,
                                            const UnitaryMatrix& v) {
  if (v.dim() != s.n_t())
    throw std::invalid_argument("channel_from_spectrum: dimension mismatch");
  const auto dc = s.d_complex();
  Eigen::MatrixXcd h(s.n_t(), s.n_t());
  for (int i = 0; i < s.n_t(); ++i) {
    const double sig = std::sqrt(std::max(0.0, dc[i] - 1.0));
    h.row(i) = sig * v.entries().col(i).adjoint();
  }
  return ComplexChannel(std::move(h));
}

// Channel with all capacity concentrated on the first singular value; the
// remaining transmit directions are annihilated.
inline ComplexChannel worst_case_channel(double c_bits, int n_t) {
  if (n_t < 1) throw std::invalid_argument("worst_case_channel: n_t >= 1");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n_t, n_t);
  h(0, 0) = std::sqrt(std::exp2(c_bits) - 1.0);
  return ComplexChannel(std::move(h));
}

namespace detail {

inline void spectrum_grid_rec(double c_bits, int n_t, int resolution,
                              std::vector<double>& t,
                              std::vector<std::vector<double>>& out) {
  const int level = static_cast<int>(t.size());
  const double used = [&] {
    double s = 0.0;
    for (double x : t) s += x;
    return s;
  }();
  const double remaining = c_bits - used;
  if (level == n_t - 1) {
    t.push_back(remaining);
    out.push_back(t);
    t.pop_back();
    return;
  }
  const int levels_left = n_t - level;
  const double hi =
      level == 0 ? remaining : std::min(t.back(), remaining);
  const double lo = remaining / levels_left;
  for (int i = 0; i <= resolution; ++i) {
    const double ti = hi - (hi - lo) * static_cast<double>(i) / resolution;
    if (i > 0 && hi == lo) break;
    t.push_back(ti);
    spectrum_grid_rec(c_bits, n_t, resolution, t, out);
    t.pop_back();
  }
}

}  // namespace detail

// Deterministic grid over the compound class: exponents log2 d_{c,i} cover
// the ordered simplex {t_1 >= ... >= t_{n_t} >= 0, sum t_i = C} with
// `resolution` uniform steps per free coordinate.  Both extremes (all
// capacity on one singular value; equal split) are always included.
inline std::vector<SpectrumD> spectrum_grid(double c_bits, int n_t,
                                            int resolution) {
  if (c_bits < 0.0) throw std::invalid_argument("spectrum_grid: c_bits >= 0");
  if (n_t < 1 || resolution < 1)
    throw std::invalid_argument("spectrum_grid: n_t >= 1, resolution >= 1");
  std::vector<std::vector<double>> exponents;
  std::vector<double> t;
  detail::spectrum_grid_rec(c_bits, n_t, resolution, t, exponents);
  std::sort(exponents.begin(), exponents.end(),
            std::greater<std::vector<double>>());
  exponents.erase(std::unique(exponents.begin(), exponents.end()),
                  exponents.end());

  std::vector<SpectrumD> grid;
  grid.reserve(exponents.size());
  for (const auto& e : exponents) {
    std::vector<double> d(2 * n_t);
    for (int i = 0; i < n_t; ++i) {
      const double di = std::exp2(std::max(0.0, e[i]));
      d[2 * i] = di;
      d[2 * i + 1] = di;
    }
    grid.emplace_back(std::move(d), c_bits);
  }
  return grid;
}

}  // namespace ifoutage
