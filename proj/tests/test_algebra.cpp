#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "battery.hpp"
#include "mpx/algebra.hpp"
#include "mpx/error.hpp"
#include "mpx/matrix_json.hpp"
#include "oracles.hpp"

using namespace mpx;
using Catch::Approx;

namespace {

bool same(const StateVector& a, const StateVector& b, double tol = 1e-12) { return sup_distance(a, b) <= tol; }

oracle::Vec vec(const StateVector& x) { return {x.begin(), x.end()}; }

}  // namespace

TEST_CASE("max-plus action on small examples") {
  const MaxPlusMatrix a{{0, kNegInf}, {1, 2}};
  CHECK(mp_apply(a, StateVector{3, 4}) == StateVector{3, 6});
  CHECK(mp_apply(MaxPlusMatrix::identity(3), StateVector{1, -2, 5}) == StateVector{1, -2, 5});
  // constant matrix maps everything to max(x) + c
  CHECK(mp_apply(MaxPlusMatrix::constant(3, 1.5), StateVector{1, -2, 5}) == StateVector{6.5, 6.5, 6.5});
}

TEST_CASE("composition matches the independent product and is associative") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0), p(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + trial % 4;
    auto rand_mat = [&] {
      oracle::Mat m(d, oracle::Vec(d));
      for (auto& row : m) {
        for (double& v : row) v = p(rng) < 0.3 ? kNegInf : u(rng);
        row[trial % d] = u(rng);
      }
      return m;
    };
    const auto ma = rand_mat(), mb = rand_mat();
    const auto a = battery::from_oracle(ma), b = battery::from_oracle(mb);
    const auto ab = mp_compose(a, b);
    CHECK(battery::to_oracle(ab) == oracle::compose(ma, mb));
    std::vector<double> xs(d);
    for (double& v : xs) v = u(rng);
    const StateVector x(xs);
    CHECK(vec(mp_apply(a, x)) == oracle::apply(ma, xs));
    CHECK(same(mp_apply(ab, x), mp_apply(a, mp_apply(b, x)), 1e-12));
  }
}

TEST_CASE("topical laws") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-4.0, 4.0), nonneg(0.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 2 + trial % 3;
    std::vector<double> e(d * d), xs(d), ys(d), zs(d);
    for (double& v : e) v = u(rng);
    e[1] = kNegInf;
    for (std::size_t i = 0; i < d; ++i) {
      xs[i] = u(rng);
      ys[i] = u(rng);
      zs[i] = xs[i] + nonneg(rng);
    }
    const MaxPlusMatrix a(d, e);
    const StateVector x(xs), y(ys), z(zs);
    const double c = u(rng);
    CHECK(same(mp_apply(a, x.shifted(c)), mp_apply(a, x).shifted(c), 1e-9));
    const auto ax = mp_apply(a, x), az = mp_apply(a, z);
    for (std::size_t i = 0; i < d; ++i) CHECK(ax[i] <= az[i]);
    CHECK(sup_distance(ax, mp_apply(a, y)) <= sup_distance(x, y) + 1e-12);
    CHECK(projective_distance(ax, mp_apply(a, y)) <= projective_distance(x, y) + 1e-12);
  }
}

TEST_CASE("matrix construction rejects invalid entries") {
  CHECK_THROWS_AS((MaxPlusMatrix{{kNegInf, kNegInf}, {0, 1}}), ValidationError);
  CHECK_THROWS_AS((MaxPlusMatrix{{0, std::numeric_limits<double>::infinity()}, {0, 1}}), ValidationError);
  CHECK_THROWS_AS((MaxPlusMatrix{{0, std::nan("")}, {0, 1}}), ValidationError);
  CHECK_THROWS_AS(MaxPlusMatrix(2, {0, 1, 2}), DimensionError);
  CHECK_THROWS_AS(mp_apply(MaxPlusMatrix::identity(2), StateVector{1, 2, 3}), DimensionError);
  CHECK_THROWS_AS(StateVector({1.0, kNegInf}), ValidationError);
}

TEST_CASE("projective distance, norm and top coordinate") {
  const StateVector x{1, 3, 2}, y{0, 0, 0};
  CHECK(projective_distance(x, y) == 2.0);
  CHECK(projective_distance(x, x.shifted(7.5)) == 0.0);
  CHECK(projective_norm(x) == 2.0);
  CHECK(psi(x) == 3.0);
  CHECK(projective_distance(x, y) == projective_distance(y, x));
}

TEST_CASE("split and unsplit") {
  SECTION("exact on a dyadic grid") {
    const StateVector x{0.25, -1.5, 3.0};
    const auto [h, p] = split(x);
    CHECK(h == 3.0);
    CHECK(p.rep() == StateVector{-2.75, -4.5, 0.0});
    CHECK(unsplit(h, p) == x);
  }
  SECTION("round trip within 1e-12 on arbitrary reals") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
      const StateVector x{u(rng), u(rng), u(rng), u(rng)};
      const auto [h, p] = split(x);
      CHECK(same(unsplit(h, p), x, 1e-12));
      CHECK(p.rep().max() == 0.0);
    }
  }
}

TEST_CASE("xi depends only on the projective class") {
  const MaxPlusMatrix a{{1, 0}, {kNegInf, 2}};
  const StateVector x{0.5, -0.25};
  CHECK(xi_increment(a, x) == Approx(xi_increment(a, x.shifted(42.0))).margin(1e-12));
  CHECK(xi_increment(a, x) == Approx(psi(mp_apply(a, x)) - psi(x)));
  // |ξ(A, x)| <= |max (A0)| + |x|_P
  CHECK(std::abs(xi_increment(a, x)) <= std::abs(psi(mp_apply(a, StateVector::zeros(2)))) + projective_norm(x));
}

TEST_CASE("rank-1 certificate") {
  CHECK(is_rank_one(MaxPlusMatrix::constant(3, 0)));
  CHECK(is_rank_one(MaxPlusMatrix{{0, 1}, {2, 3}}));
  CHECK(is_rank_one(MaxPlusMatrix{{0, kNegInf}, {5, kNegInf}}));
  CHECK_FALSE(is_rank_one(MaxPlusMatrix::identity(2)));
  CHECK_FALSE(is_rank_one(MaxPlusMatrix{{0, kNegInf}, {0, 0}}));
  CHECK_FALSE(is_rank_one(MaxPlusMatrix{{0, 0}, {0, 1}}));
  CHECK(is_rank_one(MaxPlusMatrix{{4.0}}));
  CHECK(is_rank_one(MaxPlusMatrix{{0, 1}, {2, 3 + 1e-12}}));
}

TEST_CASE("rank-1 certificate matches the probe oracle on 2x2 matrices") {
  std::mt19937_64 rng(1);
  std::size_t n = 0;
  oracle::for_each_matrix(2, {kNegInf, 0, 1, 2}, [&](const oracle::Mat& m) {
    ++n;
    CHECK(is_rank_one(battery::from_oracle(m)) == oracle::probe_rank_one(m, rng));
  });
  CHECK(n == 225);
}

TEST_CASE("rank-1 maps collapse the projective space") {
  const MaxPlusMatrix a{{0, 1, kNegInf}, {3, 4, kNegInf}, {-1, 0, kNegInf}};
  REQUIRE(is_rank_one(a));
  const ProjectivePoint p(mp_apply(a, StateVector{0, 0, 0}));
  CHECK(ProjectivePoint(mp_apply(a, StateVector{7, -3, 100})).approx_equal(p));
}

TEST_CASE("matrix JSON round trip") {
  const MaxPlusMatrix a{{1.5, kNegInf}, {0, 2}};
  const auto j = matrix_to_json(a);
  CHECK(j[0][1] == "-inf");
  CHECK(matrix_from_json(j) == a);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse(R"([[1, 2], [3]])")), DimensionError);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse(R"([["-inf", "-inf"], [3, 4]])")), ValidationError);
}
