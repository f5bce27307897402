#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "ifoutage/channel.hpp"
#include "ifoutage/montecarlo.hpp"
#include "ifoutage/random.hpp"
#include "oracles.hpp"

using namespace ifoutage;

TEST_CASE("CUE scalars have unit modulus and uniform phase") {
  RandomStream rs{101, 0, 0};
  std::vector<double> phases;
  phases.reserve(10000);
  for (int i = 0; i < 10000; ++i) {
    const auto u = sample_cue(1, rs);
    CHECK(std::abs(std::abs(u.entries()(0, 0)) - 1.0) < 1e-12);
    double p = std::arg(u.entries()(0, 0));
    if (p < 0) p += 2.0 * std::numbers::pi;
    phases.push_back(p);
  }
  const double ks = oracles::ks_one_sample(
      phases, [](double x) { return x / (2.0 * std::numbers::pi); });
  CHECK(ks < 0.02);
}

TEST_CASE("CUE matrices are unitary") {
  RandomStream rs{102, 0, 0};
  for (const int n : {2, 3, 5}) {
    const auto u = sample_cue(n, rs);
    const Eigen::MatrixXcd err =
        u.entries().adjoint() * u.entries() -
        Eigen::MatrixXcd::Identity(n, n);
    CHECK(err.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("CUE corner entry squared modulus is uniform for n=2") {
  RandomStream rs{103, 0, 0};
  std::vector<double> vals;
  vals.reserve(10000);
  for (int i = 0; i < 10000; ++i)
    vals.push_back(std::norm(sample_cue(2, rs).entries()(0, 0)));
  const double ks =
      oracles::ks_one_sample(vals, [](double x) { return x; });
  CHECK(ks < 0.02);
}

TEST_CASE("CRE scalars are fair signs and columns are uniform directions") {
  RandomStream rs{104, 0, 0};
  int plus = 0;
  for (int i = 0; i < 10000; ++i) {
    const double v = sample_cre(1, rs).entries()(0, 0);
    CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
    if (v > 0) ++plus;
  }
  CHECK(std::abs(plus / 10000.0 - 0.5) < 0.02);

  RandomStream rs2{105, 0, 0};
  std::vector<double> angles;
  for (int i = 0; i < 10000; ++i) {
    const auto o = sample_cre(2, rs2);
    double a = std::atan2(o.entries()(1, 0), o.entries()(0, 0));
    if (a < 0) a += 2.0 * std::numbers::pi;
    angles.push_back(a);
  }
  const double ks = oracles::ks_one_sample(
      angles, [](double x) { return x / (2.0 * std::numbers::pi); });
  CHECK(ks < 0.02);

  RandomStream rs3{106, 0, 0};
  for (const int m : {2, 4, 6}) {
    const auto o = sample_cre(m, rs3);
    const Eigen::MatrixXd err = o.entries().transpose() * o.entries() -
                                Eigen::MatrixXd::Identity(m, m);
    CHECK(err.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("real lift of a unitary matrix") {
  CHECK(induced_real_orthogonal(
            UnitaryMatrix(Eigen::MatrixXcd::Identity(2, 2)))
            .entries()
            .isApprox(Eigen::MatrixXd::Identity(4, 4)));

  Eigen::MatrixXcd jay(1, 1);
  jay << std::complex<double>{0.0, 1.0};
  Eigen::Matrix2d expected;
  expected << 0.0, -1.0, 1.0, 0.0;
  CHECK(induced_real_orthogonal(UnitaryMatrix(jay)).entries().isApprox(
      expected));

  RandomStream rs{107, 0, 0};
  for (int t = 0; t < 20; ++t) {
    const auto v = sample_cue(3, rs);
    const auto o = induced_real_orthogonal(v);
    CHECK(o.entries().determinant() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("normalized Rayleigh channels hit the target capacity") {
  RandomStream rs{108, 0, 0};
  for (int t = 0; t < 20; ++t) {
    const auto h = sample_normalized_rayleigh(2, 8.0, rs);
    CHECK(wi_mutual_information(h) == doctest::Approx(8.0).epsilon(1e-8));
  }
  // capacity is strictly increasing in the scale (bracket validity)
  Xoshiro256pp eng(109, 0, 0);
  const Eigen::MatrixXcd g = oracles::random_complex_matrix(2, 2, eng);
  double prev = 0.0;
  for (const double s : {0.5, 1.0, 2.0, 4.0}) {
    const double c = wi_mutual_information(ComplexChannel(s * g));
    CHECK(c > prev);
    prev = c;
  }
}

TEST_CASE("sampler argument validation") {
  RandomStream rs{1, 0, 0};
  CHECK_THROWS_AS(sample_cue(0, rs), std::invalid_argument);
  CHECK_THROWS_AS(sample_cre(0, rs), std::invalid_argument);
  CHECK_THROWS_AS(sample_normalized_rayleigh(2, 0.0, rs),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_normalized_rayleigh(0, 4.0, rs),
                  std::invalid_argument);
}

TEST_CASE("identical streams reproduce identical samples") {
  RandomStream a{42, 7, 0}, b{42, 7, 0};
  const auto ua = sample_cue(3, a);
  const auto ub = sample_cue(3, b);
  CHECK(ua.entries() == ub.entries());
  const auto oa = sample_cre(4, a);
  const auto ob = sample_cre(4, b);
  CHECK(oa.entries() == ob.entries());
  RandomStream c{42, 8, 0};
  CHECK(sample_cue(3, c).entries() != ua.entries());
}

TEST_CASE("Haar invariance under a fixed left factor") {
  RandomStream rs{110, 0, 0};
  const UnitaryMatrix w = sample_cue(2, rs);
  RandomStream rs_a{111, 0, 0}, rs_b{112, 0, 0};
  std::vector<double> plain, rotated;
  for (int i = 0; i < 10000; ++i) {
    plain.push_back(std::abs(sample_cue(2, rs_a).entries()(0, 0)));
    rotated.push_back(
        std::abs((w.entries() * sample_cue(2, rs_b).entries())(0, 0)));
  }
  CHECK(ks_two_sample(plain, rotated) < 0.03);
}

TEST_CASE("lifted CUE and CRE give the same weighted-norm distribution") {
  const SpectrumD s({100.0, 100.0, 1.5, 1.5}, std::log2(150.0));
  IntVector a(4);
  a << 2, -1, 0, 3;
  const Eigen::VectorXd dh = s.real_diagonal().cwiseSqrt();
  const Eigen::VectorXd ad = a.cast<double>();
  RandomStream rs_cue{113, 0, 0}, rs_cre{114, 0, 0};
  std::vector<double> cue_side, cre_side;
  for (int i = 0; i < 10000; ++i) {
    const auto v = induced_real_orthogonal(sample_cue(2, rs_cue));
    cue_side.push_back((dh.asDiagonal() * (v.entries() * ad)).norm());
    const auto o = sample_cre(4, rs_cre);
    cre_side.push_back((dh.asDiagonal() * (o.entries() * ad)).norm());
  }
  CHECK(ks_two_sample(cue_side, cre_side) < 0.03);
}
