#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "battery.hpp"
#include "mpx/error.hpp"
#include "mpx/models.hpp"
#include "mpx/random.hpp"

using namespace mpx;
using Catch::Approx;

TEST_CASE("seed derivation") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  const StreamKey f{3, Direction::forward, 0}, b{3, Direction::backward, 0}, l{3, Direction::forward, 1};
  CHECK(derive_seed(1, f) == derive_seed(1, f));
  CHECK(derive_seed(1, f) != derive_seed(1, b));
  CHECK(derive_seed(1, f) != derive_seed(1, l));
  CHECK(derive_seed(1, f) != derive_seed(2, f));
  CHECK(derive_seed(1, f) != derive_seed(1, StreamKey{4, Direction::forward, 0}));
}

TEST_CASE("variates") {
  Rng rng(123);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(s / n == Approx(0.0).margin(0.01));
  CHECK(s2 / n == Approx(1.0).margin(0.02));
}

TEST_CASE("finite support validation") {
  const auto a = MaxPlusMatrix::identity(2), b = MaxPlusMatrix::constant(2, 0);
  CHECK_THROWS_WITH(make_finite_support_model({a, b}, {0.5, 0.4}), Catch::Matchers::ContainsSubstring("sum"));
  CHECK_THROWS_AS(make_finite_support_model({a, b}, {1.5, -0.5}), ValidationError);
  CHECK_THROWS_AS(make_finite_support_model({a, MaxPlusMatrix::identity(3)}, {0.5, 0.5}), DimensionError);
  CHECK_THROWS_AS(make_finite_support_model({}, {}), ValidationError);
  CHECK_NOTHROW(make_finite_support_model({a, b}, {0.5, 0.5}));
}

TEST_CASE("finite support frequencies are binomial") {
  const auto spec = battery::finite2x2(21);
  OperatorStream s(spec, 0);
  const int n = 20000;
  int first = 0;
  for (int i = 0; i < n; ++i) {
    const auto m = s.next();
    if (s.last_atom() == 0) {
      ++first;
      CHECK(m == MaxPlusMatrix{{1, kNegInf}, {0, 2}});
    }
  }
  CHECK(s.position() == std::size_t(n));
  const double sd = std::sqrt(n * 0.4 * 0.6);
  CHECK(std::abs(first - 0.4 * n) < 4 * sd);
}

TEST_CASE("entrywise generator keeps the -inf pattern") {
  const auto spec = battery::entrywise3(2);
  OperatorStream s(spec, 4);
  double sum = 0;
  for (int i = 0; i < 5000; ++i) {
    const auto m = s.next();
    CHECK(is_null(m(0, 1)));
    CHECK(is_null(m(1, 2)));
    CHECK(m(2, 2) >= 0.0);
    CHECK(m(2, 2) < 2.0);
    sum += m(0, 0);
  }
  CHECK(sum / 5000 == Approx(1.0).margin(0.05));
  CHECK_THROWS_AS(make_entrywise_model(2, {std::nullopt, std::nullopt, Distribution::constant(0), std::nullopt}),
                  ValidationError);
}

TEST_CASE("markov modulation") {
  const std::vector<std::vector<double>> p{{0.9, 0.1}, {0.3, 0.7}};
  const auto pi = stationary_distribution(p);
  CHECK(pi[0] == Approx(0.75).margin(1e-12));
  CHECK(pi[1] == Approx(0.25).margin(1e-12));

  SECTION("reversed kernel satisfies detailed balance") {
    const std::vector<std::vector<double>> q{{0.1, 0.6, 0.3}, {0.5, 0.0, 0.5}, {0.2, 0.2, 0.6}};
    const auto w = stationary_distribution(q);
    const auto r = reversed_kernel(q, w);
    for (std::size_t i = 0; i < 3; ++i) {
      double row = 0;
      for (std::size_t j = 0; j < 3; ++j) {
        CHECK(w[i] * r[i][j] == Approx(w[j] * q[j][i]).margin(1e-12));
        row += r[i][j];
      }
      CHECK(row == Approx(1.0).margin(1e-12));
    }
  }

  SECTION("forward regimes follow P, backward regimes follow the reversal") {
    const std::vector<std::vector<double>> q{{0.0, 1.0, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
    const auto g = detail::make_finite_support({MaxPlusMatrix::constant(2, 0)}, {1.0}, 2);
    const auto spec = make_markov_model(2, q, {g, g, g}, 3);
    const auto& mm = std::get<MarkovModulated>(spec.params);
    for (Direction dir : {Direction::forward, Direction::backward}) {
      const auto& kernel = dir == Direction::forward ? mm.transition : mm.reversed;
      OperatorStream s(spec, 0, dir);
      std::vector<std::vector<double>> counts(3, std::vector<double>(3, 0.0));
      s.next();
      auto prev = s.regime();
      for (int i = 0; i < 60000; ++i) {
        s.next();
        counts[prev][s.regime()] += 1;
        prev = s.regime();
      }
      for (std::size_t i = 0; i < 3; ++i) {
        double tot = 0;
        for (double c : counts[i]) tot += c;
        for (std::size_t j = 0; j < 3; ++j) CHECK(counts[i][j] / tot == Approx(kernel[i][j]).margin(0.02));
      }
    }
  }

  SECTION("validation") {
    const auto g = detail::make_finite_support({MaxPlusMatrix::constant(2, 0)}, {1.0}, 2);
    CHECK_THROWS_AS(make_markov_model(2, {{0.5, 0.4}, {0.5, 0.5}}, {g, g}), ValidationError);
    CHECK_THROWS_AS(make_markov_model(2, {{1.0, 0.0}, {0.5, 0.5}}, {g, g}), ValidationError);
    CHECK_THROWS_AS(make_markov_model(2, {{0.5, 0.5}, {0.5, 0.5}}, {g}), ValidationError);
    const auto g3 = detail::make_finite_support({MaxPlusMatrix::constant(3, 0)}, {1.0}, 3);
    CHECK_THROWS_AS(make_markov_model(2, {{0.5, 0.5}, {0.5, 0.5}}, {g, g3}), DimensionError);
  }
}

TEST_CASE("example1 operator") {
  const auto m = example1_matrix(1, 2, 3, 4, 5, 6);
  CHECK(m == MaxPlusMatrix{{1, kNegInf, 4}, {kNegInf, 2, 4}, {6, 8, 9}});
  CHECK_THROWS_AS(example1_matrix(-1, 2, 3, 4, 5, 6), ValidationError);
  const auto u = Distribution::uniform(0, 1);
  CHECK_THROWS_AS(make_example1_model({Distribution::uniform(-1, 1), u, u, u, u}), ValidationError);
  CHECK_THROWS_AS(make_example1_model({u, u, u, Distribution::normal(1, 1), u}), ValidationError);
}

TEST_CASE("example1 carries the assembly time between steps") {
  const auto spec = battery::example1_uniform(4);
  SECTION("forward") {
    OperatorStream s(spec, 0);
    s.next();
    Example1Draw prev = s.last_example1();
    for (int i = 0; i < 200; ++i) {
      const auto m = s.next();
      const auto& d = s.last_example1();
      CHECK(d.a3_prev == prev.a3);
      CHECK(m(2, 2) == std::max(d.t1, d.t2) + d.a3_prev);
      CHECK(m(0, 2) == d.a3);
      prev = d;
    }
  }
  SECTION("backward") {
    OperatorStream s(spec, 0, Direction::backward);
    s.next();
    Example1Draw later = s.last_example1();
    for (int i = 0; i < 200; ++i) {
      s.next();
      const auto& d = s.last_example1();
      CHECK(d.a3 == later.a3_prev);
      later = d;
    }
  }
}

TEST_CASE("streams are reproducible per key and distinct across replicas") {
  const auto spec = battery::entrywise3(6);
  OperatorStream a(spec, 1), b(spec, 1), c(spec, 2), back(spec, 1, Direction::backward);
  bool differs_c = false, differs_back = false;
  for (int i = 0; i < 20; ++i) {
    const auto ma = a.next();
    CHECK(ma == b.next());
    differs_c = differs_c || !(ma == c.next());
    differs_back = differs_back || !(ma == back.next());
  }
  CHECK(differs_c);
  CHECK(differs_back);
}

TEST_CASE("shifted models") {
  const auto spec = battery::finite2x2();
  const auto shifted = shifted_model(spec, 2.5);
  const auto& atoms = std::get<FiniteSupport>(shifted.params).atoms;
  CHECK(atoms[0] == MaxPlusMatrix{{3.5, kNegInf}, {2.5, 4.5}});
  CHECK_THROWS_AS(shifted_model(battery::example1_uniform(), 1.0), ValidationError);
}

TEST_CASE("mixing classes") {
  CHECK(mixing_class(battery::finite2x2()).label == "iid");
  CHECK(mixing_class(battery::d1_gaussian()).label == "iid");
  CHECK(mixing_class(battery::example1_uniform()).label == "1-dependent");
  CHECK(mixing_class(battery::markov2()).label == "geometric");
  const auto g = detail::make_finite_support({MaxPlusMatrix::constant(2, 0)}, {1.0}, 2);
  CHECK(mixing_class(make_markov_model(2, {{0, 1}, {1, 0}}, {g, g})).label == "unclassified");
}

TEST_CASE("model files") {
  SECTION("shipped examples load") {
    const auto d1 = load_model(battery::source_path("models/d1_gaussian.json"));
    CHECK(d1.dim == 1);
    CHECK(d1.kind == ModelKind::entrywise_iid);
    const auto ex = load_model(battery::source_path("models/example1.json"));
    CHECK(ex.kind == ModelKind::example1);
    const auto fs = load_model(battery::source_path("models/finite2x2.json"));
    CHECK(std::get<FiniteSupport>(fs.params).atoms.size() == 2);
    CHECK(fs.seed == 7);
  }
  SECTION("markov models parse") {
    const auto spec = parse_model(R"({"dim": 2, "kind": "markov_modulated", "params": {
      "transition": [[0.5, 0.5], [0.2, 0.8]],
      "regimes": [
        {"kind": "finite_support_iid", "params": {"atoms": [{"matrix": [[0, "-inf"], [1, 0]], "prob": 1}]}},
        {"kind": "entrywise_iid", "params": {"entries": [[{"uniform": [0, 1]}, 0], ["-inf", {"normal": [0, 1]}]]}}
      ]}})");
    CHECK(spec.kind == ModelKind::markov_modulated);
    CHECK(spec.seed == 0);
  }
  SECTION("invalid documents") {
    CHECK_THROWS_AS(parse_model("not json"), ValidationError);
    CHECK_THROWS_AS(parse_model(R"({"dim": 1, "kind": "entrywise_iid", "params": {"entries": [[0]]}, "x": 1})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_model(R"({"dim": 1, "kind": "bogus", "params": {}})"), ValidationError);
    CHECK_THROWS_AS(parse_model(R"({"dim": 2, "kind": "entrywise_iid", "params": {"entries": [[0]]}})"),
                    DimensionError);
    CHECK_THROWS_AS(
        parse_model(R"({"dim": 2, "kind": "finite_support_iid", "params": {"atoms": [{"matrix": [[0,0],[0,0]], "prob": 0.7}]}})"),
        ValidationError);
    CHECK_THROWS_AS(parse_model(R"({"dim": 2, "kind": "example1", "params": {}})"), DimensionError);
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), ValidationError);
  }
}
