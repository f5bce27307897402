#pragma once

// Analytic worst-case outage bounds for CUE pre-processed integer forcing.
//
// Two families are provided for each receiver:
//   * union bounds over short integer vectors, evaluated per spectrum and
//     maximized over a spectrum grid (optionally restricted to primitive
//     vectors and/or reduced by the {1,-1,j,-j} unit-multiple symmetry);
//   * closed-form universal bounds c * 2^{-gap} depending only on the
//     number of transmit antennas and the gap-to-capacity.
//
// The union bounds come in two strengths: the surface-area form, which
// lower-bounds each ellipsoid surface through Carlson's inequality, and an
// exact-cap form (two transmit antennas only) that evaluates each
// vector's cap probability in closed form.  The exact-cap form is the one
// tight enough for guaranteed-multicast inversion; the surface-area form
// has a fully analytic derivation chain up to the universal constants.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ifoutage/channel.hpp"
#include "ifoutage/lattice.hpp"

namespace ifoutage {

// Exact Hermite constants gamma_k for the dimensions where they are known.
inline bool hermite_exact(int k, double& value) {
  switch (k) {
    case 1: value = 1.0; return true;
    case 2: value = 2.0 / std::sqrt(3.0); return true;
    case 3: value = std::pow(2.0, 1.0 / 3.0); return true;
    case 4: value = std::sqrt(2.0); return true;
    case 5: value = std::pow(8.0, 1.0 / 5.0); return true;
    case 6: value = std::pow(64.0 / 3.0, 1.0 / 6.0); return true;
    case 7: value = std::pow(64.0, 1.0 / 7.0); return true;
    case 8: value = 2.0; return true;
    case 24: value = 4.0; return true;
    default: return false;
  }
}

// Blichfeldt's upper bound gamma_k <= (2/pi) Gamma(2 + k/2)^{2/k}.
inline double blichfeldt_bound(int k) {
  return 2.0 / std::numbers::pi *
         std::exp(2.0 / k * std::lgamma(2.0 + 0.5 * k));
}

// Monotonized Hermite constant: running maximum of exact values where known
// and the Blichfeldt bound elsewhere.
inline double hermite_bar(int k) {
  if (k < 1) throw std::invalid_argument("hermite_bar: k must be >= 1");
  double bar = 0.0;
  for (int i = 1; i <= k; ++i) {
    double gi;
    if (!hermite_exact(i, gi)) gi = blichfeldt_bound(i);
    bar = std::max(bar, gi);
  }
  return bar;
}

// Duality slack alpha = (2 n_t + 3)/4 * gamma_{2 n_t}^2, with exact Hermite
// values in the dimensions 4, 6, 8 and 24 and Blichfeldt's bound otherwise.
// `use_all_known_dims` additionally uses the exact value for dimension 2.
inline double alpha(int n_t, bool use_all_known_dims = false) {
  if (n_t < 1) throw std::invalid_argument("alpha: n_t must be >= 1");
  const double factor = (2.0 * n_t + 3.0) / 4.0;
  double gamma;
  const bool exact_branch =
      n_t == 2 || n_t == 3 || n_t == 4 || n_t == 12 ||
      (use_all_known_dims && hermite_exact(2 * n_t, gamma));
  if (exact_branch) {
    if (!hermite_exact(2 * n_t, gamma))
      throw std::logic_error("alpha: missing exact Hermite value");
    return factor * gamma * gamma;
  }
  const double b = blichfeldt_bound(2 * n_t);
  return factor * b * b;
}

struct BoundVariants {
  bool primitive = false;   // drop integer multiples of shorter vectors
  bool quadruple = false;   // one representative per {1,-1,j,-j} orbit
  bool tightened = false;   // sharper constant in the universal bounds
  bool exact_cap = false;   // exact per-vector cap probability (n_t = 2)
};

// Everything an analytic bound evaluation needs.  beta is the squared-radius
// parameter of the relevant short-vector event.
struct BoundParams {
  double c_bits = 0.0;
  double gap_bits = 0.0;
  int n_t = 0;
  double beta = 0.0;
  double alpha_value = 0.0;
  BoundVariants variants;

  static BoundParams for_if(double c_bits, double gap_bits, int n_t,
                            BoundVariants variants = {}) {
    if (n_t < 1) throw std::invalid_argument("BoundParams: n_t must be >= 1");
    BoundParams p;
    p.c_bits = c_bits;
    p.gap_bits = gap_bits;
    p.n_t = n_t;
    p.alpha_value = alpha(n_t);
    p.beta = std::exp2((c_bits - gap_bits) / n_t) * p.alpha_value;
    p.variants = variants;
    return p;
  }

  static BoundParams for_if_sic(double c_bits, double gap_bits,
                                BoundVariants variants = {}) {
    if (!(c_bits > 1.0))
      throw std::invalid_argument("BoundParams: IF-SIC bound needs C > 1");
    if (!(gap_bits > 1.0))
      throw std::invalid_argument("BoundParams: IF-SIC bound needs gap > 1");
    BoundParams p;
    p.c_bits = c_bits;
    p.gap_bits = gap_bits;
    p.n_t = 2;
    p.alpha_value = alpha(2);
    p.beta = std::exp2(-0.5 * (c_bits + gap_bits));
    p.variants = variants;
    return p;
  }
};

namespace detail {

struct ShellCounts {
  std::vector<double> norm_sq;       // descending
  std::vector<std::uint64_t> all;    // vectors per integer norm value
  std::vector<std::uint64_t> prim;   // primitive vectors per norm value
};

// Counts integer vectors with 0 < ||a||^2 < r2 bucketed by squared norm.
// Enumerates one representative per +-a pair and doubles the counts.
inline ShellCounts shell_counts(int dim, double r2, std::size_t cap) {
  std::vector<std::uint64_t> all_by_k, prim_by_k;
  const long long max_k =
      r2 > 1.0 ? static_cast<long long>(std::ceil(r2)) : 0;
  all_by_k.assign(static_cast<std::size_t>(std::max(0LL, max_k)) + 1, 0);
  prim_by_k.assign(all_by_k.size(), 0);

  std::size_t seen = 0;
  // nested scan over the canonical half-space (highest nonzero coordinate
  // positive), counts doubled
  const std::function<void(int, long long, long long, bool)> rec =
      [&](int level, long long used, long long g, bool all_zero_above) {
        if (level < 0) {
          if (used > 0) {
            if (++seen > cap)
              throw std::runtime_error("shell_counts: size cap exceeded");
            all_by_k[used] += 2;
            if (g == 1) prim_by_k[used] += 2;
          }
          return;
        }
        const double room = r2 - static_cast<double>(used);
        const long long w =
            room > 0.0 ? static_cast<long long>(std::floor(std::sqrt(room)))
                       : 0;
        const long long lo = all_zero_above ? 0 : -w;
        for (long long v = lo; v <= w; ++v) {
          const long long nu = used + v * v;
          if (static_cast<double>(nu) >= r2) continue;
          rec(level - 1, nu, std::gcd(g, std::llabs(v)),
              all_zero_above && v == 0);
        }
      };
  if (r2 > 1.0) rec(dim - 1, 0, 0, true);

  ShellCounts out;
  for (long long k = max_k; k >= 1; --k) {
    if (all_by_k[k] == 0) continue;
    out.norm_sq.push_back(static_cast<double>(k));
    out.all.push_back(all_by_k[k]);
    out.prim.push_back(prim_by_k[k]);
  }
  return out;
}

// Kahan-compensated sum of term(norm_sq) * count over shells in descending
// norm order.
template <typename Term>
double shell_sum(const ShellCounts& shells, bool primitive, bool quadruple,
                 Term&& term) {
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < shells.norm_sq.size(); ++i) {
    const double count = static_cast<double>(primitive ? shells.prim[i]
                                                       : shells.all[i]) /
                         (quadruple ? 4.0 : 1.0);
    if (count == 0.0) continue;
    const double y = count * term(shells.norm_sq[i]) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace detail

// Union bound on the IF outage probability for one spectrum: short dual
// lattice vectors, each weighted by a sphere-cap upper bound over a
// Carlson surface lower bound.  With exact_cap (n_t = 2), each vector's
// probability is instead computed exactly from the uniform distribution of
// the paired coordinate mass on the sphere.
inline double if_outage_union_bound(const BoundParams& p, const SpectrumD& s,
                                    std::size_t enum_cap = 100'000'000) {
  if (s.n_t() != p.n_t)
    throw std::invalid_argument("if_outage_union_bound: n_t mismatch");
  if (std::abs(s.capacity_bits() - p.c_bits) >
      1e-6 * std::max(1.0, std::abs(p.c_bits)))
    throw std::invalid_argument("if_outage_union_bound: capacity mismatch");

  const int dim = 2 * p.n_t;
  const double d_min = s.d_min();
  const double r2 = p.beta / d_min;
  if (r2 <= 1.0) return 0.0;
  const auto shells = detail::shell_counts(dim, r2, enum_cap);

  double sum;
  if (p.variants.exact_cap) {
    if (p.n_t != 2)
      throw std::invalid_argument("if_outage_union_bound: exact_cap needs n_t=2");
    const double da = s.d_max(), db = s.d_min();
    sum = detail::shell_sum(
        shells, p.variants.primitive, p.variants.quadruple, [&](double nsq) {
          if (da == db) return p.beta / nsq > da ? 1.0 : 0.0;
          const double t = (p.beta / nsq - db) / (da - db);
          return std::clamp(t, 0.0, 1.0);
        });
  } else {
    // log-domain prefactor: 2 n_t beta^{n_t - 1/2} sqrt(d_min) / 2^{C+1}
    const double log2_pref = std::log2(2.0 * p.n_t) +
                             (p.n_t - 0.5) * std::log2(p.beta) +
                             0.5 * std::log2(d_min) - (p.c_bits + 1.0);
    const double pref = std::exp2(log2_pref);
    sum = detail::shell_sum(
        shells, p.variants.primitive, p.variants.quadruple, [&](double nsq) {
          return pref / std::pow(nsq, p.n_t - 0.5);
        });
  }
  return std::min(1.0, sum);
}

// Universal IF bound c(n_t) 2^{-gap}.
inline double if_outage_universal_bound(int n_t, double gap_bits,
                                        bool tightened = false) {
  if (n_t < 2)
    throw std::invalid_argument("if_outage_universal_bound: n_t must be >= 2");
  const double a = alpha(n_t);
  const double root = std::sqrt(2.0 * n_t);
  const double count_factor =
      tightened ? std::pow(2.0 + 0.5 * root, 2.0 * n_t)
                : 2.0 * n_t + std::pow(1.0 + root, 2.0 * n_t);
  const double c = count_factor * n_t * std::pow(a, n_t) *
                   std::pow(std::numbers::pi, n_t) / std::tgamma(n_t + 1.0);
  return std::min(1.0, c * std::exp2(-gap_bits));
}

// Union bound on the IF-SIC outage probability for one spectrum (two
// transmit antennas): short primal lattice vectors against the inverse
// spectrum.
inline double sic_outage_union_bound(const BoundParams& p, const SpectrumD& s,
                                     std::size_t enum_cap = 100'000'000) {
  if (p.n_t != 2 || s.n_t() != 2)
    throw std::invalid_argument("sic_outage_union_bound: n_t must be 2");
  if (!(p.c_bits > 1.0) || !(p.gap_bits > 1.0))
    throw std::invalid_argument(
        "sic_outage_union_bound: requires C > 1 and gap > 1");
  if (std::abs(s.capacity_bits() - p.c_bits) >
      1e-6 * std::max(1.0, std::abs(p.c_bits)))
    throw std::invalid_argument("sic_outage_union_bound: capacity mismatch");

  const double d_max = s.d_max();
  const double r2 = p.beta * d_max;
  if (r2 <= 1.0) return 0.0;
  const auto shells = detail::shell_counts(4, r2, enum_cap);

  double sum;
  if (p.variants.exact_cap) {
    const double da = s.d_max(), db = s.d_min();
    sum = detail::shell_sum(
        shells, p.variants.primitive, p.variants.quadruple, [&](double nsq) {
          if (da == db) return p.beta > nsq / da ? 1.0 : 0.0;
          const double t = (p.beta - nsq / da) / (nsq / db - nsq / da);
          return std::clamp(t, 0.0, 1.0);
        });
  } else {
    // per-vector weight: 2 * 2^{-3(C+gap)/4} * 2^C / (||a||^3 sqrt(d_max))
    const double pref =
        2.0 * std::exp2(-0.75 * (p.c_bits + p.gap_bits) + p.c_bits) /
        std::sqrt(d_max);
    sum = detail::shell_sum(
        shells, p.variants.primitive, p.variants.quadruple,
        [&](double nsq) { return pref / std::pow(nsq, 1.5); });
  }
  return std::min(1.0, sum);
}

// Universal IF-SIC bound 85 pi^2 2^{-gap} (81 pi^2 when tightened); valid
// for gaps above one bit.
inline double sic_outage_universal_bound(double gap_bits,
                                         bool tightened = false) {
  if (!(gap_bits > 1.0))
    throw std::invalid_argument(
        "sic_outage_universal_bound: requires gap > 1");
  const double c = (tightened ? 81.0 : 85.0) * std::numbers::pi *
                   std::numbers::pi;
  return std::min(1.0, c * std::exp2(-gap_bits));
}

enum class BoundScheme { IF, IF_SIC };

struct WorstCaseBound {
  double value = 0.0;
  int argmax_index = -1;
};

// Supremum of the per-spectrum union bound over a grid.
inline WorstCaseBound worst_case_bound(double c_bits, double gap_bits,
                                       int n_t, BoundScheme scheme,
                                       const std::vector<SpectrumD>& grid,
                                       BoundVariants variants = {},
                                       std::size_t enum_cap = 100'000'000) {
  if (grid.empty())
    throw std::invalid_argument("worst_case_bound: grid must be nonempty");
  WorstCaseBound out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double v;
    if (scheme == BoundScheme::IF) {
      const auto p = BoundParams::for_if(c_bits, gap_bits, n_t, variants);
      v = if_outage_union_bound(p, grid[i], enum_cap);
    } else {
      const auto p = BoundParams::for_if_sic(c_bits, gap_bits, variants);
      v = sic_outage_union_bound(p, grid[i], enum_cap);
    }
    if (v > out.value || out.argmax_index < 0) {
      out.value = v;
      out.argmax_index = static_cast<int>(i);
    }
  }
  return out;
}

// Benchmark gap of the space-time pre-processed scheme for two transmit
// antennas (NVD code construction).
inline constexpr double kNvdBenchmarkGapBits = 15.24;

}  // namespace ifoutage
