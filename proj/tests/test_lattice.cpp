#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ifoutage/bounds.hpp"
#include "ifoutage/lattice.hpp"
#include "ifoutage/random.hpp"
#include "oracles.hpp"

using namespace ifoutage;

namespace {

LatticeBasis random_basis(int dim, Xoshiro256pp& eng) {
  while (true) {
    const Eigen::MatrixXd g = oracles::random_real_matrix(dim, eng);
    if (std::abs(g.determinant()) > 0.05) return LatticeBasis(g);
  }
}

bool same_lattice(const LatticeBasis& a, const LatticeBasis& b,
                  const IntegerMatrix& u) {
  return (a.generator() * u.entries.cast<double>()).isApprox(b.generator(),
                                                             1e-9);
}

}  // namespace

TEST_CASE("LLL leaves an identity basis alone") {
  const auto [reduced, u] = lll_reduce(LatticeBasis(Eigen::Matrix3d::Identity()));
  CHECK(reduced.generator().cwiseAbs().isApprox(Eigen::Matrix3d::Identity()));
  CHECK(u.entries.cwiseAbs() ==
        IntMatrix::Identity(3, 3).cwiseAbs());
}

TEST_CASE("LLL finds the short vector of a skewed planar basis") {
  Eigen::Matrix2d g;
  g << 1.0, 0.0, 0.99, 0.001;  // columns (1, 0.99) and (0, 0.001)
  const LatticeBasis b(g);
  const auto [reduced, u] = lll_reduce(b);
  const auto exact = oracles::box_successive_minima(
      g, oracles::box_for_radius(g, reduced.generator().col(0).norm()));
  CHECK(reduced.generator().col(0).norm() ==
        doctest::Approx(exact.norms[0]).epsilon(1e-9));
}

TEST_CASE("LLL output is a unimodular re-basing satisfying both conditions") {
  Xoshiro256pp eng(301, 0, 0);
  for (int t = 0; t < 25; ++t) {
    const LatticeBasis b = random_basis(4, eng);
    const auto [reduced, u] = lll_reduce(b, 0.99);
    CHECK(u.unimodular);
    CHECK(same_lattice(b, reduced, u));

    // size reduction and the exchange condition on the reduced basis
    const Eigen::MatrixXd& rb = reduced.generator();
    Eigen::MatrixXd bstar = rb;
    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(4, 4);
    Eigen::VectorXd bsq(4);
    for (int i = 0; i < 4; ++i) {
      bstar.col(i) = rb.col(i);
      for (int j = 0; j < i; ++j) {
        mu(i, j) = rb.col(i).dot(bstar.col(j)) / bsq(j);
        bstar.col(i) -= mu(i, j) * bstar.col(j);
      }
      bsq(i) = bstar.col(i).squaredNorm();
    }
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < i; ++j) CHECK(std::abs(mu(i, j)) <= 0.5 + 1e-9);
    for (int k = 1; k < 4; ++k)
      CHECK(bsq(k) >=
            (0.99 - mu(k, k - 1) * mu(k, k - 1)) * bsq(k - 1) - 1e-12);
  }
}

TEST_CASE("shortest vector matches brute force") {
  const auto [x_id, n_id] =
      shortest_vector(LatticeBasis(Eigen::MatrixXd::Identity(4, 4)));
  CHECK(n_id == doctest::Approx(1.0));
  CHECK(x_id.cwiseAbs().sum() == 1);

  Eigen::Matrix2d diag13 = Eigen::Vector2d(1.0, 3.0).asDiagonal();
  const auto [x_d, n_d] = shortest_vector(LatticeBasis(diag13));
  CHECK(n_d == doctest::Approx(1.0));
  CHECK(std::abs(x_d(0)) == 1);
  CHECK(x_d(1) == 0);

  Xoshiro256pp eng(302, 0, 0);
  for (int t = 0; t < 20; ++t) {
    const LatticeBasis b = random_basis(4, eng);
    const auto [x, norm] = shortest_vector(b);
    const auto oracle = oracles::box_successive_minima(
        b.generator(), oracles::box_for_radius(b.generator(), norm * 1.001));
    CHECK(norm == doctest::Approx(oracle.norms[0]).epsilon(1e-9));
  }
}

TEST_CASE("successive minima match brute force with independent witnesses") {
  const auto id2 = successive_minima(LatticeBasis(Eigen::Matrix2d::Identity()));
  CHECK(id2.norms == std::vector<double>{1.0, 1.0});

  Eigen::Matrix2d diag13 = Eigen::Vector2d(1.0, 3.0).asDiagonal();
  const auto d13 = successive_minima(LatticeBasis(diag13));
  CHECK(d13.norms[0] == doctest::Approx(1.0));
  CHECK(d13.norms[1] == doctest::Approx(3.0));

  Xoshiro256pp eng(303, 0, 0);
  for (int t = 0; t < 15; ++t) {
    const LatticeBasis b = random_basis(4, eng);
    const auto report = successive_minima(b);
    const double radius = report.norms.back() * 1.001;
    const auto oracle = oracles::box_successive_minima(
        b.generator(), oracles::box_for_radius(b.generator(), radius));
    for (int k = 0; k < 4; ++k) {
      CHECK(report.norms[k] ==
            doctest::Approx(oracle.norms[k]).epsilon(1e-9));
      CHECK((b.generator() * report.vectors[k].cast<double>()).norm() ==
            doctest::Approx(report.norms[k]).epsilon(1e-9));
    }
    CHECK(oracles::rank_of(report.vectors, 4) == 4);
  }
}

TEST_CASE("dual basis inverts the Gram matrix") {
  CHECK(dual_basis(LatticeBasis(Eigen::Matrix3d::Identity()))
            .generator()
            .isApprox(Eigen::Matrix3d::Identity()));

  Xoshiro256pp eng(304, 0, 0);
  for (int t = 0; t < 10; ++t) {
    const LatticeBasis b = random_basis(4, eng);
    const LatticeBasis d = dual_basis(b);
    const Eigen::MatrixXd gram_b =
        b.generator().transpose() * b.generator();
    const Eigen::MatrixXd gram_d =
        d.generator().transpose() * d.generator();
    CHECK((gram_b * gram_d).isApprox(Eigen::MatrixXd::Identity(4, 4), 1e-9));
    CHECK(dual_basis(d).generator().isApprox(b.generator(), 1e-9));
  }
}

TEST_CASE("transference inequality between primal and dual minima") {
  Xoshiro256pp eng(305, 0, 0);
  for (const int dim : {4, 6}) {
    const double bound =
        (dim + 3.0) / 4.0 * hermite_bar(dim) * hermite_bar(dim);
    for (int t = 0; t < 15; ++t) {
      const LatticeBasis b = random_basis(dim, eng);
      const auto primal = successive_minima(b);
      const auto [xd, dual_min] = shortest_vector(dual_basis(b));
      const double lhs = dual_min * dual_min * primal.norms.back() *
                         primal.norms.back();
      CHECK(lhs <= bound * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("ball enumeration with strict radius") {
  const auto small = enumerate_ball(3.0, 1.0, 2);
  CHECK(small.size() == 8);
  const auto none = enumerate_ball(0.5, 1.0, 4);
  CHECK(none.empty());
  const auto bigger = enumerate_ball(5.0, 1.0, 2);
  CHECK(bigger.size() == 12);

  // monotone in beta
  std::set<std::vector<long long>> as_set;
  for (const auto& v : bigger)
    as_set.insert({v.data(), v.data() + v.size()});
  for (const auto& v : small)
    CHECK(as_set.count({v.data(), v.data() + v.size()}) == 1);
}

TEST_CASE("primitivity filter") {
  std::vector<IntVector> s;
  IntVector a(2), b(2);
  a << 1, 0;
  b << 2, 0;
  s = {a, b};
  const auto f = primitive_filter(s);
  REQUIRE(f.size() == 1);
  CHECK(f[0] == a);

  const auto ball = enumerate_ball(5.0, 1.0, 2);
  CHECK(primitive_filter(ball).size() == 8);

  // idempotent and identity on unit vectors
  const auto units = enumerate_ball(1.5, 1.0, 3);
  CHECK(primitive_filter(units).size() == units.size());
  CHECK(primitive_filter(primitive_filter(ball)).size() == 8);
}

TEST_CASE("unit-multiple orbit reduction") {
  IntVector e1(4);
  e1 << 1, 0, 0, 0;
  const auto orbit = detail::unit_multiple_orbit(e1);
  std::set<std::vector<long long>> orbit_set;
  for (const auto& o : orbit)
    orbit_set.insert({o.data(), o.data() + o.size()});
  CHECK(orbit_set.size() == 4);
  CHECK(orbit_set.count({1, 0, 0, 0}) == 1);
  CHECK(orbit_set.count({-1, 0, 0, 0}) == 1);
  CHECK(orbit_set.count({0, 0, 1, 0}) == 1);
  CHECK(orbit_set.count({0, 0, -1, 0}) == 1);

  const auto reps = quadruple_reduce({e1});
  CHECK(reps.size() == 1);

  const auto ball4 = enumerate_ball(3.0, 1.0, 4);
  const auto reduced = quadruple_reduce(ball4);
  CHECK(reduced.size() * 4 == ball4.size());

  CHECK(quadruple_reduce({}).empty());

  // orbits of the representatives are pairwise disjoint and cover the set
  std::set<std::vector<long long>> covered;
  for (const auto& r : reduced)
    for (const auto& o : detail::unit_multiple_orbit(r)) {
      const bool fresh =
          covered.insert({o.data(), o.data() + o.size()}).second;
      CHECK(fresh);
    }
  for (const auto& v : ball4)
    CHECK(covered.count({v.data(), v.data() + v.size()}) == 1);
}

TEST_CASE("LLL first vector is within the guaranteed factor of the minimum") {
  Xoshiro256pp eng(306, 0, 0);
  for (int t = 0; t < 10; ++t) {
    const LatticeBasis b = random_basis(4, eng);
    const auto [reduced, u] = lll_reduce(b);
    const auto minima = successive_minima(b);
    CHECK(reduced.generator().col(0).norm() <=
          std::exp2(1.5) * minima.norms[0] * (1.0 + 1e-9));
  }
}

TEST_CASE("exact-mode dimension cap is enforced") {
  Xoshiro256pp eng(307, 0, 0);
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(9, 9);
  CHECK_THROWS_AS(successive_minima(LatticeBasis(g)), std::invalid_argument);
  CHECK_THROWS_AS(shortest_vector(LatticeBasis(g)), std::invalid_argument);
}

TEST_CASE("rank-deficient bases are rejected") {
  Eigen::Matrix2d g;
  g << 1.0, 2.0, 2.0, 4.0;
  CHECK_THROWS_AS(LatticeBasis{g}, std::invalid_argument);
}
