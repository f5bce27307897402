#pragma once

// Achievable rates and receiver matrices for MMSE, integer-forcing, IF with
// successive interference cancellation, and joint maximum-likelihood
// decoding.  Exact integer-forcing rates reduce to successive minima of the
// lattice whose Gram matrix is (I + H^T H)^{-1}; two-antenna complex
// channels additionally admit a fast exact path through rank-2 Gauss
// reduction over the Gaussian integers.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ifoutage/channel.hpp"
#include "ifoutage/lattice.hpp"

namespace ifoutage {

enum class Scheme { MMSE, IF, IF_SIC, JOINT_ML };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::MMSE: return "mmse";
    case Scheme::IF: return "if";
    case Scheme::IF_SIC: return "if-sic";
    case Scheme::JOINT_ML: return "joint-ml";
  }
  return "?";
}

struct RateReport {
  Scheme scheme;
  double total_rate_bits = 0.0;
  std::vector<double> per_stream_bits;
  std::optional<IntegerMatrix> integer_matrix;
};

struct EqualizerSet {
  Eigen::MatrixXd b_matrix;   // MMSE equalizer A H^T (I + H H^T)^{-1}
  Eigen::MatrixXd l_matrix;   // lower Cholesky factor of A (I+H^T H)^{-1} A^T
  Eigen::MatrixXd s_matrix;   // SIC feedback matrix diag(l_mm) L^{-1}
  Eigen::MatrixXd b_tilde;    // combined front end S B
};

// (I + H^T H)^{-1}, the Gram matrix of the decision lattice.
inline Eigen::MatrixXd noise_whitened_gram(const RealChannel& h) {
  const Eigen::MatrixXd& m = h.entries();
  const int k = m.cols();
  const Eigen::MatrixXd a =
      Eigen::MatrixXd::Identity(k, k) + m.transpose() * m;
  return a.llt().solve(Eigen::MatrixXd::Identity(k, k));
}

inline double wi_mutual_information(const RealChannel& h) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(h.entries());
  const Eigen::VectorXd sigma = svd.singularValues();
  double c = 0.0;
  for (int i = 0; i < sigma.size(); ++i)
    c += 0.5 * std::log2(1.0 + sigma(i) * sigma(i));
  return c;
}

inline double effective_snr(const RealChannel& h, const IntVector& a) {
  if (a.size() != h.cols())
    throw std::invalid_argument("effective_snr: dimension mismatch");
  bool nonzero = false;
  for (int i = 0; i < a.size(); ++i)
    if (a(i) != 0) nonzero = true;
  if (!nonzero) throw std::invalid_argument("effective_snr: a must be nonzero");
  const Eigen::MatrixXd m = noise_whitened_gram(h);
  const Eigen::VectorXd ad = a.cast<double>();
  return 1.0 / ad.dot(m * ad);
}

inline double rate_per_equation(const RealChannel& h, const IntVector& a) {
  return std::max(0.0, 0.5 * std::log2(effective_snr(h, a)));
}

inline EqualizerSet mmse_equalizer(const RealChannel& h,
                                   const IntegerMatrix& a) {
  const Eigen::MatrixXd& hm = h.entries();
  const int k = hm.cols();
  if (a.entries.rows() != k)
    throw std::invalid_argument("mmse_equalizer: dimension mismatch");
  const Eigen::MatrixXd ad = a.entries.cast<double>();
  const Eigen::MatrixXd rx_gram =
      Eigen::MatrixXd::Identity(hm.rows(), hm.rows()) + hm * hm.transpose();
  const Eigen::MatrixXd b =
      ad * hm.transpose() * rx_gram.llt().solve(
                               Eigen::MatrixXd::Identity(hm.rows(), hm.rows()));
  const Eigen::MatrixXd kzz = ad * noise_whitened_gram(h) * ad.transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(kzz);
  if (llt.info() != Eigen::Success) {
    const double cond =
        kzz.norm() * kzz.llt().solve(Eigen::MatrixXd::Identity(k, k)).norm();
    throw std::runtime_error(
        "mmse_equalizer: Cholesky failed, condition estimate " +
        std::to_string(cond));
  }
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::MatrixXd s =
      l.diagonal().asDiagonal() *
      l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(k, k));
  return EqualizerSet{b, l, s, s * b};
}

// Unclipped per-stream SIC rates 1/2 log2(1 / l_mm^2) in the row order of a.
inline std::vector<double> sic_stream_rates(const RealChannel& h,
                                            const IntegerMatrix& a) {
  const EqualizerSet eq = mmse_equalizer(h, a);
  std::vector<double> rates(eq.l_matrix.rows());
  for (int m = 0; m < eq.l_matrix.rows(); ++m)
    rates[m] = -std::log2(eq.l_matrix(m, m));
  return rates;
}

namespace detail {

using CGauss = std::complex<long long>;

inline CGauss cg_mul(CGauss a, CGauss b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}
inline CGauss cg_sub(CGauss a, CGauss b) {
  return {a.real() - b.real(), a.imag() - b.imag()};
}
inline CGauss cg_add(CGauss a, CGauss b) {
  return {a.real() + b.real(), a.imag() + b.imag()};
}
inline CGauss cg_conj(CGauss a) { return {a.real(), -a.imag()}; }
inline CGauss cg_neg(CGauss a) { return {-a.real(), -a.imag()}; }
inline long long cg_norm(CGauss a) {
  return a.real() * a.real() + a.imag() * a.imag();
}
inline bool cg_zero(CGauss a) { return a.real() == 0 && a.imag() == 0; }

inline CGauss round_gauss(std::complex<double> z) {
  return {std::llround(z.real()), std::llround(z.imag())};
}

// Rank-2 lattice over the Gaussian integers with Hermitian Gram matrix P.
// Gauss reduction plus a small coefficient box gives the two exact complex
// successive minima with witnesses.
struct ComplexPairMinima {
  double mu1_sq = 0.0;
  double mu2_sq = 0.0;
  std::array<CGauss, 2> w1{};  // coefficients of the mu1 witness
  std::array<CGauss, 2> w2{};  // coefficients of the mu2 witness
  std::array<CGauss, 2> b1{};  // reduced basis (unimodular image of I)
  std::array<CGauss, 2> b2{};
};

inline ComplexPairMinima complex_pair_minima(const Eigen::Matrix2cd& p) {
  std::array<CGauss, 2> b1 = {CGauss{1, 0}, CGauss{0, 0}};
  std::array<CGauss, 2> b2 = {CGauss{0, 0}, CGauss{1, 0}};

  const auto quad = [&](const std::array<CGauss, 2>& c) {
    const std::complex<double> ca(static_cast<double>(c[0].real()),
                                  static_cast<double>(c[0].imag()));
    const std::complex<double> cb(static_cast<double>(c[1].real()),
                                  static_cast<double>(c[1].imag()));
    const double v =
        std::real(std::conj(ca) * ca * p(0, 0) + std::conj(cb) * cb * p(1, 1) +
                  2.0 * std::real(std::conj(ca) * cb * p(0, 1)));
    return v;
  };
  const auto cross = [&](const std::array<CGauss, 2>& x,
                         const std::array<CGauss, 2>& y) {
    return cg_sub(cg_mul(x[0], y[1]), cg_mul(x[1], y[0]));
  };
  const auto inner = [&](const std::array<CGauss, 2>& x,
                         const std::array<CGauss, 2>& y) {
    // x^H P y over the original coordinates
    const std::complex<double> xa(static_cast<double>(x[0].real()),
                                  static_cast<double>(x[0].imag()));
    const std::complex<double> xb(static_cast<double>(x[1].real()),
                                  static_cast<double>(x[1].imag()));
    const std::complex<double> ya(static_cast<double>(y[0].real()),
                                  static_cast<double>(y[0].imag()));
    const std::complex<double> yb(static_cast<double>(y[1].real()),
                                  static_cast<double>(y[1].imag()));
    return std::conj(xa) * ya * p(0, 0) + std::conj(xa) * yb * p(0, 1) +
           std::conj(xb) * ya * std::conj(p(0, 1)) +
           std::conj(xb) * yb * p(1, 1);
  };

  for (int iter = 0; iter < 64; ++iter) {
    if (quad(b2) < quad(b1)) std::swap(b1, b2);
    const std::complex<double> g12 = inner(b1, b2);
    const double q11 = quad(b1);
    const CGauss r = round_gauss(g12 / q11);
    if (cg_zero(r)) break;
    b2 = {cg_sub(b2[0], cg_mul(r, b1[0])), cg_sub(b2[1], cg_mul(r, b1[1]))};
  }
  if (quad(b2) < quad(b1)) std::swap(b1, b2);

  ComplexPairMinima out;
  out.b1 = b1;
  out.b2 = b2;
  // coefficient box around the reduced basis covers both minima
  std::vector<std::pair<double, std::array<CGauss, 2>>> box;
  box.reserve(440);
  for (long long c2r = -1; c2r <= 1; ++c2r)
    for (long long c2i = -1; c2i <= 1; ++c2i)
      for (long long c1r = -3; c1r <= 3; ++c1r)
        for (long long c1i = -3; c1i <= 3; ++c1i) {
          const CGauss c1{c1r, c1i}, c2{c2r, c2i};
          if (cg_zero(c1) && cg_zero(c2)) continue;
          const std::array<CGauss, 2> v = {
              cg_add(cg_mul(c1, b1[0]), cg_mul(c2, b2[0])),
              cg_add(cg_mul(c1, b1[1]), cg_mul(c2, b2[1]))};
          box.emplace_back(quad(v), v);
        }
  bool have1 = false, have2 = false;
  for (const auto& [q, v] : box)
    if (!have1 || q < out.mu1_sq) {
      out.mu1_sq = q;
      out.w1 = v;
      have1 = true;
    }
  for (const auto& [q, v] : box) {
    if (cg_zero(cross(out.w1, v))) continue;
    if (!have2 || q < out.mu2_sq) {
      out.mu2_sq = q;
      out.w2 = v;
      have2 = true;
    }
  }
  if (!have1 || !have2)
    throw std::runtime_error("complex_pair_minima: witness search failed");
  return out;
}

// Real lift [Re(a); Im(a)] of a complex integer pair.
inline IntVector lift_pair(const std::array<CGauss, 2>& c) {
  IntVector v(4);
  v << c[0].real(), c[1].real(), c[0].imag(), c[1].imag();
  return v;
}

inline std::array<CGauss, 2> times_j(const std::array<CGauss, 2>& c) {
  return {cg_mul({0, 1}, c[0]), cg_mul({0, 1}, c[1])};
}

// Extended Euclid over the Gaussian integers; returns (g, u, v) with
// u*a + v*b = g and g a gcd.
inline std::array<CGauss, 3> cg_ext_gcd(CGauss a, CGauss b) {
  CGauss r0 = a, r1 = b;
  CGauss s0{1, 0}, s1{0, 0}, t0{0, 0}, t1{1, 0};
  while (!cg_zero(r1)) {
    const std::complex<double> q =
        std::complex<double>(static_cast<double>(r0.real()),
                             static_cast<double>(r0.imag())) /
        std::complex<double>(static_cast<double>(r1.real()),
                             static_cast<double>(r1.imag()));
    const CGauss qq = round_gauss(q);
    const CGauss r2 = cg_sub(r0, cg_mul(qq, r1));
    const CGauss s2 = cg_sub(s0, cg_mul(qq, s1));
    const CGauss t2 = cg_sub(t0, cg_mul(qq, t1));
    r0 = r1; r1 = r2;
    s0 = s1; s1 = s2;
    t0 = t1; t1 = t2;
  }
  return {r0, s0, t0};
}

// Completes a primitive pair (p, q) to a unimodular 2x2 Gaussian-integer
// matrix: returns (x, y) with p*y - q*x a unit.
inline std::array<CGauss, 2> cg_complete(CGauss pc, CGauss qc) {
  const auto [g, u, v] = cg_ext_gcd(pc, qc);
  if (cg_norm(g) != 1)
    throw std::runtime_error("cg_complete: pair is not primitive");
  const CGauss ginv = [&] {
    if (g == CGauss{1, 0}) return CGauss{1, 0};
    if (g == CGauss{-1, 0}) return CGauss{-1, 0};
    if (g == CGauss{0, 1}) return CGauss{0, -1};
    return CGauss{0, 1};
  }();
  // p*(u/g) + q*(v/g) = 1  ->  y = u/g, x = -v/g
  return {cg_neg(cg_mul(v, ginv)), cg_mul(u, ginv)};
}

}  // namespace detail

// Exact rate quantities of a two-antenna complex channel expressed through
// the complex Gram matrix P = (I + H^H H)^{-1}.
struct PairRates {
  double capacity_bits = 0.0;
  double if_total = 0.0;      // 2 log2(1/mu2^2), clipped at zero
  double sic_total = 0.0;     // 4 min(R1, C/2 - R1), clipped at zero
  double best_equation = 0.0; // R1 = -1/2 log2(mu1^2)
  double mmse_total = 0.0;
  detail::ComplexPairMinima minima;
};

inline PairRates pair_rates_from_gram(const Eigen::Matrix2cd& p,
                                      double capacity_bits) {
  PairRates out;
  out.capacity_bits = capacity_bits;
  out.minima = detail::complex_pair_minima(p);
  const double r1 = -0.5 * std::log2(out.minima.mu1_sq);
  out.best_equation = r1;
  out.if_total = std::max(0.0, -2.0 * std::log2(out.minima.mu2_sq));
  out.sic_total =
      4.0 * std::max(0.0, std::min(r1, 0.5 * capacity_bits - r1));
  const double worst_diag = std::max(p(0, 0).real(), p(1, 1).real());
  out.mmse_total = std::max(0.0, -2.0 * std::log2(worst_diag));
  return out;
}

inline Eigen::Matrix2cd pair_gram_from_channel(const ComplexChannel& h) {
  if (h.n_t() != 2)
    throw std::invalid_argument("pair_gram_from_channel: n_t must be 2");
  const Eigen::MatrixXcd& hc = h.entries();
  const Eigen::Matrix2cd a =
      Eigen::Matrix2cd::Identity() + hc.adjoint() * hc;
  return a.inverse();
}

namespace detail {

// 4x4 unimodular integer matrix whose first two rows achieve the best
// decoded equation; rows ordered by descending effective SNR.
inline IntegerMatrix sic_matrix_from_minima(const ComplexPairMinima& mm) {
  // complete the mu1 witness to a basis of Z[i]^2
  const CGauss p = mm.w1[0], q = mm.w1[1];
  std::array<CGauss, 2> comp;
  const CGauss crossb1 = cg_sub(cg_mul(p, mm.b1[1]), cg_mul(q, mm.b1[0]));
  const CGauss crossb2 = cg_sub(cg_mul(p, mm.b2[1]), cg_mul(q, mm.b2[0]));
  if (cg_norm(crossb2) == 1)
    comp = mm.b2;
  else if (cg_norm(crossb1) == 1)
    comp = mm.b1;
  else
    comp = cg_complete(p, q);

  IntMatrix a(4, 4);
  a.row(0) = lift_pair(mm.w1).transpose();
  a.row(1) = lift_pair(times_j(mm.w1)).transpose();
  a.row(2) = lift_pair(comp).transpose();
  a.row(3) = lift_pair(times_j(comp)).transpose();
  return IntegerMatrix(std::move(a), true);
}

struct SicSearchResult {
  double min_stream_rate = -std::numeric_limits<double>::infinity();
  std::vector<double> stream_rates;
  std::optional<IntegerMatrix> matrix;
};

// Evaluates the SIC stream rates of candidate row sets directly from the
// Cholesky geometry: rows are mapped through the upper Cholesky factor of
// the Gram matrix, where the m-th diagonal is the distance of row m to the
// span of the earlier rows.
inline std::vector<double> sic_rates_from_rows(
    const std::vector<Eigen::VectorXd>& rows_mapped) {
  const int k = static_cast<int>(rows_mapped.size());
  std::vector<Eigen::VectorXd> ortho;
  std::vector<double> rates(k);
  for (int m = 0; m < k; ++m) {
    Eigen::VectorXd r = rows_mapped[m];
    for (const auto& o : ortho) r -= r.dot(o) * o;
    const double ell = r.norm();
    rates[m] = -std::log2(std::max(ell, 1e-300));
    if (ell > 1e-300) ortho.push_back(r / ell);
  }
  return rates;
}

// Bounded exact search for the best unimodular SIC matrix: candidate rows
// are lattice vectors within a norm slack of the last successive minimum,
// consumed in ascending norm order (the decode order).
inline SicSearchResult if_sic_search(const Eigen::MatrixXd& gram,
                                     const MinimaReport& minima,
                                     std::size_t candidate_cap = 4000,
                                     std::size_t node_cap = 2'000'000) {
  const int k = static_cast<int>(gram.rows());
  const Eigen::MatrixXd rfac = cholesky_r_factor(gram);

  SicSearchResult best;
  const auto consider = [&](const std::vector<IntVector>& rows,
                            bool require_unimodular) {
    IntMatrix a(k, k);
    for (int i = 0; i < k; ++i) a.row(i) = rows[i].transpose();
    int128 det;
    try {
      det = integer_determinant(a);
    } catch (const std::runtime_error&) {
      return;
    }
    if (det == 0) return;
    if (require_unimodular && !(det == 1 || det == -1)) return;
    std::vector<Eigen::VectorXd> mapped(k);
    for (int i = 0; i < k; ++i)
      mapped[i] = rfac * rows[i].cast<double>();
    const auto rates = sic_rates_from_rows(mapped);
    const double worst = *std::min_element(rates.begin(), rates.end());
    if (worst > best.min_stream_rate) {
      best.min_stream_rate = worst;
      best.stream_rates = rates;
      best.matrix = IntegerMatrix(std::move(a), det == 1 || det == -1);
    }
  };

  // incumbent: the successive-minima witnesses (full rank, maybe not
  // unimodular); guarantees the search never returns less than plain IF
  consider(minima.vectors, false);

  const double lambda_k = minima.norms.back();
  const double r2 = (1.5 * lambda_k) * (1.5 * lambda_k);
  struct Cand {
    double norm_sq;
    IntVector x;
  };
  std::vector<Cand> cands;
  bool complete = enumerate_half(
      rfac, r2,
      [&](const IntVector& x, double dist) {
        if (cands.size() < candidate_cap)
          cands.push_back({dist, canonical_sign(x)});
      },
      node_cap);
  if (!complete || cands.size() >= candidate_cap) return best;
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
    return lex_less(a.x, b.x);
  });

  // depth-first over ascending-norm row choices with pruning on the worst
  // stream seen so far
  std::vector<int> chosen;
  std::vector<Eigen::VectorXd> ortho;
  std::size_t nodes = 0;
  bool budget_ok = true;

  const std::function<void(int)> dfs = [&](int start) {
    if (!budget_ok) return;
    const int depth = static_cast<int>(chosen.size());
    if (depth == k) {
      std::vector<IntVector> rows(k);
      for (int i = 0; i < k; ++i) rows[i] = cands[chosen[i]].x;
      consider(rows, true);
      return;
    }
    for (std::size_t ci = start; ci < cands.size(); ++ci) {
      if (++nodes > node_cap) {
        budget_ok = false;
        return;
      }
      Eigen::VectorXd r = rfac * cands[ci].x.cast<double>();
      for (const auto& o : ortho) r -= r.dot(o) * o;
      const double ell = r.norm();
      if (ell <= 1e-300) continue;  // dependent on chosen rows
      const double rate = -std::log2(ell);
      if (rate <= best.min_stream_rate) continue;
      chosen.push_back(static_cast<int>(ci));
      ortho.push_back(r / ell);
      dfs(static_cast<int>(ci) + 1);
      ortho.pop_back();
      chosen.pop_back();
      if (!budget_ok) return;
    }
  };
  dfs(0);
  return best;
}

}  // namespace detail

// Exact (or LLL-heuristic) integer-forcing rate.  Exact mode assembles the
// integer matrix from successive-minima witnesses.
inline RateReport if_rate(const RealChannel& h, bool exact = true) {
  const int k = h.cols();
  const Eigen::MatrixXd gram = noise_whitened_gram(h);
  RateReport report;
  report.scheme = Scheme::IF;
  const Eigen::MatrixXd gen = detail::cholesky_r_factor(gram);
  const LatticeBasis basis{gen};

  if (exact) {
    if (k > kExactDimensionCap)
      throw std::invalid_argument("if_rate: dimension above exact cap");
    const MinimaReport minima = successive_minima(basis);
    IntMatrix a(k, k);
    for (int m = 0; m < k; ++m) a.row(m) = minima.vectors[m].transpose();
    report.integer_matrix = IntegerMatrix(std::move(a));
    report.per_stream_bits.resize(k);
    for (int m = 0; m < k; ++m)
      report.per_stream_bits[m] =
          std::max(0.0, -std::log2(minima.norms[m]));
    report.total_rate_bits =
        k * *std::min_element(report.per_stream_bits.begin(),
                              report.per_stream_bits.end());
  } else {
    const auto [reduced, u] = lll_reduce(basis);
    IntMatrix a = u.entries.transpose();
    report.per_stream_bits.resize(k);
    for (int m = 0; m < k; ++m) {
      const double norm = reduced.generator().col(m).norm();
      report.per_stream_bits[m] = std::max(0.0, -std::log2(norm));
    }
    report.integer_matrix = IntegerMatrix(std::move(a), true);
    report.total_rate_bits =
        k * *std::min_element(report.per_stream_bits.begin(),
                              report.per_stream_bits.end());
  }
  return report;
}

// IF with successive interference cancellation.  Complex-lifted channels use
// the exact rank-2 closed form; generic real channels use the bounded
// unimodular row search.
inline RateReport if_sic_rate(const RealChannel& h, bool exact = true) {
  const int k = h.cols();
  RateReport report;
  report.scheme = Scheme::IF_SIC;
  const double c_bits = wi_mutual_information(h);

  if (!exact) {
    const Eigen::MatrixXd gram = noise_whitened_gram(h);
    const LatticeBasis basis{detail::cholesky_r_factor(gram)};
    const auto [reduced, u] = lll_reduce(basis);
    std::vector<std::pair<double, IntVector>> rows(k);
    for (int m = 0; m < k; ++m)
      rows[m] = {reduced.generator().col(m).squaredNorm(),
                 IntVector(u.entries.col(m))};
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    IntMatrix a(k, k);
    for (int m = 0; m < k; ++m) a.row(m) = rows[m].second.transpose();
    IntegerMatrix am(std::move(a), true);
    const auto stream = sic_stream_rates(h, am);
    report.per_stream_bits.resize(k);
    for (int m = 0; m < k; ++m)
      report.per_stream_bits[m] = std::max(0.0, stream[m]);
    report.total_rate_bits =
        k * *std::min_element(report.per_stream_bits.begin(),
                              report.per_stream_bits.end());
    report.integer_matrix = std::move(am);
    return report;
  }

  if (k > kExactDimensionCap)
    throw std::invalid_argument("if_sic_rate: dimension above exact cap");

  if (k == 4 && h.is_complex_lift()) {
    const int nr = h.rows() / 2;
    Eigen::MatrixXcd hc(nr, 2);
    hc.real() = h.entries().topLeftCorner(nr, 2);
    hc.imag() = h.entries().bottomLeftCorner(nr, 2);
    const Eigen::Matrix2cd p = pair_gram_from_channel(ComplexChannel(hc));
    const PairRates pr = pair_rates_from_gram(p, c_bits);
    const double r1 = pr.best_equation;
    const double r2 = 0.5 * c_bits - r1;
    report.per_stream_bits = {std::max(0.0, r1), std::max(0.0, r1),
                              std::max(0.0, r2), std::max(0.0, r2)};
    report.total_rate_bits = pr.sic_total;
    report.integer_matrix = detail::sic_matrix_from_minima(pr.minima);
    return report;
  }

  const Eigen::MatrixXd gram = noise_whitened_gram(h);
  const LatticeBasis basis{detail::cholesky_r_factor(gram)};
  const MinimaReport minima = successive_minima(basis);
  const auto result = detail::if_sic_search(gram, minima);
  if (!result.matrix)
    throw std::runtime_error("if_sic_rate: search produced no candidate");
  report.per_stream_bits.resize(k);
  for (int m = 0; m < k; ++m)
    report.per_stream_bits[m] = std::max(0.0, result.stream_rates[m]);
  report.total_rate_bits =
      k * *std::min_element(report.per_stream_bits.begin(),
                            report.per_stream_bits.end());
  report.integer_matrix = result.matrix;
  return report;
}

// Linear MMSE is integer forcing with the identity matrix.
inline RateReport mmse_rate(const RealChannel& h) {
  const int k = h.cols();
  const Eigen::MatrixXd gram = noise_whitened_gram(h);
  RateReport report;
  report.scheme = Scheme::MMSE;
  report.per_stream_bits.resize(k);
  for (int m = 0; m < k; ++m)
    report.per_stream_bits[m] = std::max(0.0, -0.5 * std::log2(gram(m, m)));
  report.total_rate_bits =
      k * *std::min_element(report.per_stream_bits.begin(),
                            report.per_stream_bits.end());
  report.integer_matrix = IntegerMatrix::identity(k);
  return report;
}

// Equal-rate joint maximum-likelihood benchmark: the worst column subset
// bounds the symmetric rate.
inline RateReport joint_ml_rate(const ComplexChannel& h_eff) {
  const Eigen::MatrixXcd& hc = h_eff.entries();
  const int nt = h_eff.n_t();
  RateReport report;
  report.scheme = Scheme::JOINT_ML;
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << nt); ++mask) {
    std::vector<int> cols;
    for (int i = 0; i < nt; ++i)
      if (mask & (1u << i)) cols.push_back(i);
    Eigen::MatrixXcd hs(hc.rows(), cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) hs.col(i) = hc.col(cols[i]);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(hs);
    const Eigen::VectorXd sigma = svd.singularValues();
    double logdet = 0.0;
    for (int i = 0; i < sigma.size(); ++i)
      logdet += std::log2(1.0 + sigma(i) * sigma(i));
    best = std::min(best, static_cast<double>(nt) / cols.size() * logdet);
  }
  report.total_rate_bits = std::max(0.0, best);
  report.per_stream_bits.assign(2 * nt, report.total_rate_bits / (2 * nt));
  return report;
}

}  // namespace ifoutage
