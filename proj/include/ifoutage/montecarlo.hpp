#pragma once

// Empirical outage estimation under CUE pre-processing: per-spectrum outage
// probabilities with confidence intervals, worst-case sweeps over spectrum
// grids, rate histograms, and the CUE/CRE norm-distribution bridge check.
// Per-sample counter-based substreams make every estimate reproducible
// across runs and thread counts.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ifoutage/bounds.hpp"
#include "ifoutage/channel.hpp"
#include "ifoutage/random.hpp"
#include "ifoutage/rates.hpp"

namespace ifoutage {

struct SimConfig {
  Scheme scheme = Scheme::IF;
  std::int64_t n_samples = 10000;
  RandomStream seed{};
  bool exact_if = true;
  std::vector<SpectrumD> grid;
  double target_rate_bits = 0.0;
  int threads = 1;
  double bin_width_bits = 0.05;

  void validate() const {
    if (n_samples < 1)
      throw std::invalid_argument("SimConfig: n_samples must be >= 1");
  }
};

struct OutageEstimate {
  double p_hat = 0.0;
  double ci95_halfwidth = 0.0;
  std::int64_t n_samples = 0;
};

namespace detail {

// log of the binomial tail P(X <= k) for X ~ Bin(n, p), computed directly;
// used only for small k.
inline double binom_cdf(std::int64_t n, std::int64_t k, double p) {
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return k >= n ? 1.0 : 0.0;
  double cdf = 0.0;
  for (std::int64_t j = 0; j <= k; ++j) {
    const double logterm = std::lgamma(static_cast<double>(n) + 1.0) -
                           std::lgamma(static_cast<double>(j) + 1.0) -
                           std::lgamma(static_cast<double>(n - j) + 1.0) +
                           j * std::log(p) + (n - j) * std::log1p(-p);
    cdf += std::exp(logterm);
  }
  return std::min(cdf, 1.0);
}

// Clopper-Pearson 95% interval by bisection on the binomial tails.
inline std::pair<double, double> clopper_pearson(std::int64_t successes,
                                                 std::int64_t n) {
  const double alpha_half = 0.025;
  double lo = 0.0, hi = 1.0;
  if (successes > 0) {
    // largest p with P(X >= successes; p) <= alpha/2
    double a = 0.0, b = 1.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (a + b);
      const double tail = 1.0 - binom_cdf(n, successes - 1, mid);
      if (tail < alpha_half)
        a = mid;
      else
        b = mid;
    }
    lo = 0.5 * (a + b);
  }
  if (successes < n) {
    double a = 0.0, b = 1.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (a + b);
      const double tail = binom_cdf(n, successes, mid);
      if (tail < alpha_half)
        b = mid;
      else
        a = mid;
    }
    hi = 0.5 * (a + b);
  }
  return {lo, hi};
}

}  // namespace detail

// Wald interval, switching to exact Clopper-Pearson when the success count
// is in the small-sample regime.
inline OutageEstimate make_outage_estimate(std::int64_t successes,
                                           std::int64_t n) {
  OutageEstimate e;
  e.n_samples = n;
  e.p_hat = static_cast<double>(successes) / static_cast<double>(n);
  if (static_cast<double>(successes) < 10.0) {
    const auto [lo, hi] = detail::clopper_pearson(successes, n);
    e.ci95_halfwidth = std::max(e.p_hat - lo, hi - e.p_hat);
  } else {
    e.ci95_halfwidth = 1.96 * std::sqrt(e.p_hat * (1.0 - e.p_hat) /
                                        static_cast<double>(n));
  }
  return e;
}

namespace detail {

inline void parallel_samples(std::int64_t n, int threads,
                             const std::function<void(std::int64_t)>& body) {
  threads = std::max(1, threads);
  if (threads == 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::int64_t> next{0};
  const std::int64_t chunk = 256;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&]() {
      while (true) {
        const std::int64_t lo = next.fetch_add(chunk);
        if (lo >= n) break;
        const std::int64_t hi = std::min(n, lo + chunk);
        for (std::int64_t i = lo; i < hi; ++i) body(i);
      }
    });
  for (auto& th : pool) th.join();
}

// Rate of one scheme for one CUE draw on a fixed spectrum.
inline double sampled_scheme_rate(Scheme scheme, const SpectrumD& s,
                                  Xoshiro256pp& eng, bool exact) {
  const int nt = s.n_t();
  const UnitaryMatrix v = sample_cue(nt, eng);

  if (scheme == Scheme::JOINT_ML) {
    const ComplexChannel h = channel_from_spectrum(s, v);
    return joint_ml_rate(h).total_rate_bits;
  }

  if (nt == 2 && exact) {
    const auto dc = s.d_complex();
    const Eigen::Matrix2cd vc = v.entries();
    const Eigen::Vector2cd dinv(1.0 / dc[0], 1.0 / dc[1]);
    const Eigen::Matrix2cd p = vc * dinv.asDiagonal() * vc.adjoint();
    switch (scheme) {
      case Scheme::MMSE: {
        const double worst = std::max(p(0, 0).real(), p(1, 1).real());
        return std::max(0.0, -2.0 * std::log2(worst));
      }
      case Scheme::IF:
      case Scheme::IF_SIC: {
        const PairRates pr = pair_rates_from_gram(p, s.capacity_bits());
        return scheme == Scheme::IF ? pr.if_total : pr.sic_total;
      }
      default: break;
    }
  }

  const ComplexChannel h = channel_from_spectrum(s, v);
  const RealChannel hr = realify(h);
  switch (scheme) {
    case Scheme::MMSE: return mmse_rate(hr).total_rate_bits;
    case Scheme::IF: return if_rate(hr, exact).total_rate_bits;
    case Scheme::IF_SIC: return if_sic_rate(hr, exact).total_rate_bits;
    default: break;
  }
  throw std::logic_error("sampled_scheme_rate: unreachable");
}

}  // namespace detail

// Rate samples for one spectrum; sample i is fully determined by
// (seed.master_seed, seed.stream_index, i).
inline std::vector<double> sample_rates(Scheme scheme, const SpectrumD& s,
                                        const RandomStream& seed,
                                        std::int64_t n, bool exact,
                                        int threads) {
  std::vector<double> rates(n);
  detail::parallel_samples(n, threads, [&](std::int64_t i) {
    Xoshiro256pp eng = seed.engine_at(static_cast<std::uint64_t>(i));
    rates[i] = detail::sampled_scheme_rate(scheme, s, eng, exact);
  });
  return rates;
}

// Outage fraction Pr(rate < r_bits) for one spectrum (strict inequality).
inline OutageEstimate empirical_outage(const SpectrumD& s, double r_bits,
                                       const SimConfig& cfg) {
  cfg.validate();
  if (r_bits < 0.0)
    throw std::invalid_argument("empirical_outage: r_bits must be >= 0");
  const auto rates = sample_rates(cfg.scheme, s, cfg.seed, cfg.n_samples,
                                  cfg.exact_if, cfg.threads);
  std::int64_t outages = 0;
  for (const double r : rates)
    if (r < r_bits) ++outages;
  return make_outage_estimate(outages, cfg.n_samples);
}

struct WorstCasePoint {
  double gap_bits = 0.0;
  OutageEstimate estimate;
  int argmax_index = -1;
};

// Worst case over cfg.grid of the empirical outage at rate C - gap, for a
// whole gap sweep at once.  Spectrum j uses stream index
// cfg.seed.stream_index + j; samples are shared across gaps.
inline std::vector<WorstCasePoint> worst_case_empirical(
    double c_bits, const std::vector<double>& gaps, const SimConfig& cfg) {
  cfg.validate();
  if (cfg.grid.empty())
    throw std::invalid_argument("worst_case_empirical: grid must be nonempty");
  std::vector<std::vector<std::int64_t>> outage_counts(
      cfg.grid.size(), std::vector<std::int64_t>(gaps.size(), 0));

  for (std::size_t j = 0; j < cfg.grid.size(); ++j) {
    RandomStream rs = cfg.seed.substream(cfg.seed.stream_index + j);
    const auto rates = sample_rates(cfg.scheme, cfg.grid[j], rs,
                                    cfg.n_samples, cfg.exact_if, cfg.threads);
    for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
      const double target = c_bits - gaps[gi];
      std::int64_t count = 0;
      for (const double r : rates)
        if (r < target) ++count;
      outage_counts[j][gi] = count;
    }
  }

  std::vector<WorstCasePoint> curve(gaps.size());
  for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
    std::int64_t best_count = -1;
    int best_j = -1;
    for (std::size_t j = 0; j < cfg.grid.size(); ++j)
      if (outage_counts[j][gi] > best_count) {
        best_count = outage_counts[j][gi];
        best_j = static_cast<int>(j);
      }
    curve[gi].gap_bits = gaps[gi];
    curve[gi].estimate = make_outage_estimate(best_count, cfg.n_samples);
    curve[gi].argmax_index = best_j;
  }
  return curve;
}

inline WorstCasePoint worst_case_empirical(double c_bits, double gap_bits,
                                           const SimConfig& cfg) {
  return worst_case_empirical(c_bits, std::vector<double>{gap_bits}, cfg)[0];
}

enum class RateEnsemble { NormalizedRayleigh, FixedSpectrumCue };

struct RateHistogram {
  double bin_width = 0.05;
  std::vector<double> mass;  // bin i covers [i*w, (i+1)*w)
  std::int64_t n_samples = 0;

  double total_mass() const {
    double t = 0.0;
    for (const double m : mass) t += m;
    return t;
  }
  // empirical CDF evaluated at bin upper edges
  std::vector<double> cdf() const {
    std::vector<double> c(mass.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      acc += mass[i];
      c[i] = acc;
    }
    return c;
  }
};

// Binned rate distribution under the chosen ensemble, normalized to unit
// mass.  The Rayleigh ensemble needs c_bits/n_t; the fixed-spectrum
// ensemble uses cfg.grid[0].
inline RateHistogram rate_pdf(RateEnsemble ensemble, Scheme scheme,
                              const SimConfig& cfg, double c_bits = 0.0,
                              int n_t = 0) {
  cfg.validate();
  std::vector<double> rates(cfg.n_samples);
  if (ensemble == RateEnsemble::FixedSpectrumCue) {
    if (cfg.grid.empty())
      throw std::invalid_argument("rate_pdf: fixed-spectrum needs a grid entry");
    rates = sample_rates(scheme, cfg.grid[0], cfg.seed, cfg.n_samples,
                         cfg.exact_if, cfg.threads);
  } else {
    if (n_t < 1 || !(c_bits > 0.0))
      throw std::invalid_argument("rate_pdf: Rayleigh ensemble needs c, n_t");
    detail::parallel_samples(cfg.n_samples, cfg.threads, [&](std::int64_t i) {
      Xoshiro256pp eng = cfg.seed.engine_at(static_cast<std::uint64_t>(i));
      const ComplexChannel h = sample_normalized_rayleigh(n_t, c_bits, eng);
      if (scheme == Scheme::JOINT_ML) {
        rates[i] = joint_ml_rate(h).total_rate_bits;
        return;
      }
      if (n_t == 2 && cfg.exact_if) {
        const Eigen::Matrix2cd p = pair_gram_from_channel(h);
        const PairRates pr = pair_rates_from_gram(p, c_bits);
        rates[i] = scheme == Scheme::MMSE  ? pr.mmse_total
                   : scheme == Scheme::IF ? pr.if_total
                                          : pr.sic_total;
        return;
      }
      const RealChannel hr = realify(h);
      rates[i] = scheme == Scheme::MMSE ? mmse_rate(hr).total_rate_bits
                 : scheme == Scheme::IF
                     ? if_rate(hr, cfg.exact_if).total_rate_bits
                     : if_sic_rate(hr, cfg.exact_if).total_rate_bits;
    });
  }

  RateHistogram hist;
  hist.bin_width = cfg.bin_width_bits;
  hist.n_samples = cfg.n_samples;
  double max_rate = 0.0;
  for (const double r : rates) max_rate = std::max(max_rate, r);
  const std::size_t bins =
      static_cast<std::size_t>(std::floor(max_rate / hist.bin_width)) + 1;
  std::vector<std::int64_t> counts(bins, 0);
  for (const double r : rates) {
    std::size_t b = static_cast<std::size_t>(std::floor(r / hist.bin_width));
    b = std::min(b, bins - 1);
    ++counts[b];
  }
  hist.mass.resize(bins);
  for (std::size_t i = 0; i < bins; ++i)
    hist.mass[i] =
        static_cast<double>(counts[i]) / static_cast<double>(cfg.n_samples);
  return hist;
}

// Two-sample Kolmogorov-Smirnov statistic; tied values advance both sides.
inline double ks_two_sample(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty())
    throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    const double fx = static_cast<double>(i) / x.size();
    const double fy = static_cast<double>(j) / y.size();
    d = std::max(d, std::abs(fx - fy));
  }
  return d;
}

// Distribution bridge: || D^{1/2} lift(CUE) a || versus || D^{1/2} CRE a ||
// must agree in distribution.  Returns the two-sample KS statistic.
inline double cue_cre_norm_ks(const SpectrumD& s, const IntVector& a,
                              std::int64_t n, const RandomStream& seed) {
  if (n < 1000)
    throw std::invalid_argument("cue_cre_norm_ks: n must be >= 1000");
  if (a.size() != s.dim())
    throw std::invalid_argument("cue_cre_norm_ks: dimension mismatch");
  bool nonzero = false;
  for (int i = 0; i < a.size(); ++i)
    if (a(i) != 0) nonzero = true;
  if (!nonzero) throw std::invalid_argument("cue_cre_norm_ks: a must be nonzero");

  const Eigen::VectorXd dh = s.real_diagonal().cwiseSqrt();
  const Eigen::VectorXd ad = a.cast<double>();
  // norms are quantized to 12 significant digits so that degenerate
  // distributions compare as exactly equal despite representation jitter
  const auto quantize = [](double x) {
    if (x == 0.0) return 0.0;
    const double mag = std::pow(10.0, 11 - std::floor(std::log10(x)));
    return std::round(x * mag) / mag;
  };
  std::vector<double> cue_side(n), cre_side(n);
  RandomStream rs_cue = seed.substream(seed.stream_index);
  RandomStream rs_cre = seed.substream(seed.stream_index + 1);
  for (std::int64_t i = 0; i < n; ++i) {
    Xoshiro256pp e1 = rs_cue.engine_at(static_cast<std::uint64_t>(i));
    const UnitaryMatrix vc = sample_cue(s.n_t(), e1);
    const OrthogonalMatrix v = induced_real_orthogonal(vc);
    cue_side[i] = quantize((dh.asDiagonal() * (v.entries() * ad)).norm());
    Xoshiro256pp e2 = rs_cre.engine_at(static_cast<std::uint64_t>(i));
    const OrthogonalMatrix o = sample_cre(s.dim(), e2);
    cre_side[i] = quantize((dh.asDiagonal() * (o.entries() * ad)).norm());
  }
  return ks_two_sample(std::move(cue_side), std::move(cre_side));
}

}  // namespace ifoutage
