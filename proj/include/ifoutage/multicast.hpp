#pragma once

// Closed-loop multicast over pre-processed integer forcing: normalize user
// channels into the compound class at the multicast capacity, and invert
// worst-case outage bounds into guaranteed common rates by the probabilistic
// method (outage below 1/K certifies a pre-processing matrix good for every
// user simultaneously).

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifoutage/bounds.hpp"
#include "ifoutage/channel.hpp"

namespace ifoutage {

struct MulticastScenario {
  std::vector<ComplexChannel> user_channels;
  int k_users = 0;
  double c_multicast = 0.0;  // min over users of the WI mutual information

  explicit MulticastScenario(std::vector<ComplexChannel> users)
      : user_channels(std::move(users)) {
    if (user_channels.empty())
      throw std::invalid_argument("MulticastScenario: need at least one user");
    k_users = static_cast<int>(user_channels.size());
    c_multicast = wi_mutual_information(user_channels[0]);
    for (const auto& h : user_channels)
      c_multicast = std::min(c_multicast, wi_mutual_information(h));
  }
};

struct NormalizedUsers {
  std::vector<ComplexChannel> breve_channels;  // all at the multicast capacity
  std::vector<double> alphas;                  // per-user excess-SNR factors
};

// Scales each user down to the common capacity; the binding user keeps its
// channel and alpha = 1.
inline NormalizedUsers normalize_users(const MulticastScenario& sc) {
  NormalizedUsers out;
  out.breve_channels.reserve(sc.user_channels.size());
  out.alphas.reserve(sc.user_channels.size());
  for (const auto& h : sc.user_channels) {
    const double c_user = wi_mutual_information(h);
    if (c_user < sc.c_multicast - 1e-9)
      throw std::invalid_argument(
          "normalize_users: user below the multicast capacity");
    if (c_user <= sc.c_multicast + 1e-12) {
      out.breve_channels.push_back(h);
      out.alphas.push_back(1.0);
      continue;
    }
    double lo = 0.0, hi = 1.0;  // scale t with wi(t H) = c_multicast
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double c_mid =
          wi_mutual_information(ComplexChannel(mid * h.entries()));
      if (c_mid < sc.c_multicast)
        lo = mid;
      else
        hi = mid;
      if (hi - lo < 1e-15) break;
    }
    const double t = 0.5 * (lo + hi);
    const ComplexChannel breve(t * h.entries());
    if (std::abs(wi_mutual_information(breve) - sc.c_multicast) > 1e-8)
      throw std::runtime_error("normalize_users: bisection did not converge");
    out.breve_channels.push_back(breve);
    out.alphas.push_back(1.0 / t);
  }
  return out;
}

struct BoundSelector {
  enum class Kind { IfUnion, IfUniversal, SicUnion, SicUniversal };
  Kind kind = Kind::SicUnion;
  BoundVariants variants;
  int grid_resolution = 50;
  std::size_t enum_cap = 100'000'000;
};

// Worst-case bound value at (C, gap) for the selected bound family.
inline double bound_value(const BoundSelector& sel, double c_bits,
                          double gap_bits, int n_t) {
  switch (sel.kind) {
    case BoundSelector::Kind::IfUniversal:
      return if_outage_universal_bound(n_t, gap_bits, sel.variants.tightened);
    case BoundSelector::Kind::SicUniversal:
      return sic_outage_universal_bound(gap_bits, sel.variants.tightened);
    case BoundSelector::Kind::IfUnion: {
      const auto grid = spectrum_grid(c_bits, n_t, sel.grid_resolution);
      return worst_case_bound(c_bits, gap_bits, n_t, BoundScheme::IF, grid,
                              sel.variants, sel.enum_cap)
          .value;
    }
    case BoundSelector::Kind::SicUnion: {
      const auto grid = spectrum_grid(c_bits, n_t, sel.grid_resolution);
      return worst_case_bound(c_bits, gap_bits, n_t, BoundScheme::IF_SIC,
                              grid, sel.variants, sel.enum_cap)
          .value;
    }
  }
  throw std::logic_error("bound_value: unreachable");
}

// Largest rate whose worst-case outage bound stays below 1/K, by bisection
// to 1e-4 bits; zero when no positive rate qualifies.
inline double guaranteed_rate(double c_bits, int k_users, int n_t,
                              const BoundSelector& sel) {
  if (k_users < 1)
    throw std::invalid_argument("guaranteed_rate: k_users must be >= 1");
  const double threshold = 1.0 / k_users;
  const bool sic = sel.kind == BoundSelector::Kind::SicUnion ||
                   sel.kind == BoundSelector::Kind::SicUniversal;
  // the SIC bounds require gap > 1
  const double r_max = sic ? c_bits - 1.0 - 1e-9 : c_bits - 1e-9;
  if (r_max <= 0.0) return 0.0;

  const auto qualifies = [&](double r) {
    return bound_value(sel, c_bits, c_bits - r, n_t) <= threshold;
  };
  if (!qualifies(1e-9)) return 0.0;
  if (qualifies(r_max)) return r_max;
  double lo = 1e-9, hi = r_max;
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    if (qualifies(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

// 1 - K * bound(C, C - R); positive values certify that one pre-processing
// matrix achieves rate R for all K users at once.
inline double existence_margin(double c_bits, double rate_bits, int k_users,
                               int n_t, const BoundSelector& sel) {
  if (k_users < 1)
    throw std::invalid_argument("existence_margin: k_users must be >= 1");
  return 1.0 - k_users * bound_value(sel, c_bits, c_bits - rate_bits, n_t);
}

}  // namespace ifoutage
