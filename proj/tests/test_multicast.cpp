#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ifoutage/montecarlo.hpp"
#include "ifoutage/multicast.hpp"
#include "ifoutage/random.hpp"
#include "ifoutage/rates.hpp"
#include "oracles.hpp"

using namespace ifoutage;

namespace {

BoundSelector sic_selector(bool primitive = true, bool exact_cap = true) {
  BoundSelector sel;
  sel.kind = BoundSelector::Kind::SicUnion;
  sel.variants.primitive = primitive;
  sel.variants.exact_cap = exact_cap;
  sel.grid_resolution = 50;
  return sel;
}

}  // namespace

TEST_CASE("single-user scenarios normalize trivially") {
  RandomStream rs{601, 0, 0};
  const auto h = sample_normalized_rayleigh(2, 9.0, rs);
  MulticastScenario sc({h});
  CHECK(sc.k_users == 1);
  CHECK(sc.c_multicast == doctest::Approx(9.0).epsilon(1e-8));
  const auto norm = normalize_users(sc);
  CHECK(norm.alphas[0] == 1.0);
  CHECK(norm.breve_channels[0].entries() == h.entries());
}

TEST_CASE("excess-capacity users scale down onto the compound class") {
  RandomStream rs{602, 0, 0};
  const auto h1 = sample_normalized_rayleigh(2, 9.0, rs);
  const auto h2 = sample_normalized_rayleigh(2, 12.0, rs);
  MulticastScenario sc({h1, h2});
  CHECK(sc.c_multicast == doctest::Approx(9.0).epsilon(1e-8));
  const auto norm = normalize_users(sc);
  CHECK(norm.alphas[0] == doctest::Approx(1.0));
  CHECK(norm.alphas[1] > 1.0);
  for (const auto& breve : norm.breve_channels)
    CHECK(wi_mutual_information(breve) ==
          doctest::Approx(sc.c_multicast).epsilon(1e-7));
  // the scaled channel is a pure scalar multiple
  CHECK((norm.alphas[1] * norm.breve_channels[1].entries())
            .isApprox(h2.entries(), 1e-9));
}

TEST_CASE("excess SNR can only help integer forcing") {
  RandomStream rs{603, 0, 0};
  const auto h = sample_normalized_rayleigh(2, 8.0, rs);
  const ComplexChannel strong(1.4 * h.entries());
  RandomStream rs_p{604, 0, 0};
  for (int t = 0; t < 50; ++t) {
    const UnitaryMatrix p = sample_cue(2, rs_p);
    const auto weak_rate =
        if_rate(realify(ComplexChannel(h.entries() * p.entries())))
            .total_rate_bits;
    const auto strong_rate =
        if_rate(realify(ComplexChannel(strong.entries() * p.entries())))
            .total_rate_bits;
    CHECK(strong_rate >= weak_rate - 1e-9);
  }
}

TEST_CASE("guaranteed rate is monotone in users, capacity and bound quality") {
  const auto sel = sic_selector();
  const double r1 = guaranteed_rate(14.0, 1, 2, sel);
  const double r2 = guaranteed_rate(14.0, 2, 2, sel);
  const double r4 = guaranteed_rate(14.0, 4, 2, sel);
  CHECK(r1 >= r2 - 1e-9);
  CHECK(r2 >= r4 - 1e-9);
  CHECK(guaranteed_rate(12.0, 2, 2, sel) <= r2 + 1e-9);

  // primitive restriction tightens the bound, so it cannot lower the rate
  const double r2_plain = guaranteed_rate(14.0, 2, 2, sic_selector(false));
  CHECK(r2 >= r2_plain - 1e-4);

  // the universal bound is looser than the union bound
  BoundSelector uni;
  uni.kind = BoundSelector::Kind::SicUniversal;
  CHECK(guaranteed_rate(14.0, 2, 2, uni) <= r2 + 1e-9);
}

TEST_CASE("existence margins certify rates below the guarantee") {
  const auto sel = sic_selector();
  for (const int k : {2, 3}) {
    const double r = guaranteed_rate(14.0, k, 2, sel);
    CHECK(existence_margin(14.0, r - 0.1, k, 2, sel) > 0.0);
  }
  // a single user qualifies wherever the bound falls below one
  CHECK(existence_margin(14.0, 8.0, 1, 2, sel) > 0.0);
  // operating point near the two-user guarantee
  const double r2 = guaranteed_rate(14.0, 2, 2, sic_selector(false));
  CHECK(existence_margin(14.0, r2 - 0.01, 2, 2, sic_selector(false)) > 0.0);
}

TEST_CASE("guaranteed rate is zero when even tiny rates fail the threshold") {
  // a universal bound above one for all feasible gaps cannot qualify:
  // with C barely above the SIC precondition the gap range is empty-ish
  BoundSelector uni;
  uni.kind = BoundSelector::Kind::SicUniversal;
  CHECK(guaranteed_rate(1.2, 2, 2, uni) == 0.0);
}

TEST_CASE("scenario construction rejects inconsistent input") {
  CHECK_THROWS_AS(MulticastScenario({}), std::invalid_argument);
}

TEST_CASE("IF-family bound selectors invert too") {
  BoundSelector sel;
  sel.kind = BoundSelector::Kind::IfUnion;
  sel.grid_resolution = 20;
  sel.variants.primitive = true;
  sel.variants.quadruple = true;
  const double r = guaranteed_rate(14.0, 2, 2, sel);
  CHECK(r > 0.0);
  CHECK(r < 14.0);
  BoundSelector uni;
  uni.kind = BoundSelector::Kind::IfUniversal;
  uni.variants.tightened = true;
  const double ru = guaranteed_rate(30.0, 2, 2, uni);
  // the universal constant costs about 13.3 bits at threshold 1/2
  CHECK(ru == doctest::Approx(30.0 - std::log2(2.0) -
                              std::log2(81.0 * 2.0 * 3.5 * 3.5 *
                                        std::numbers::pi * std::numbers::pi /
                                        2.0))
                  .epsilon(1e-3));
}
