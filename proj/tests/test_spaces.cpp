#include "bgkit/curvature.hpp"
#include "bgkit/model.hpp"
#include "bgkit/space.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace bgkit;

namespace {

std::vector<Point> points_of(const std::vector<BallEntry>& ball) {
  std::vector<Point> out;
  for (const auto& e : ball) out.push_back(e.point);
  return out;
}

void check_metric_axioms(const Space& s, const std::vector<Point>& pts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = pts.size();
  const bool exhaustive = n * n * n <= 10000;
  const std::size_t trials = exhaustive ? n * n * n : 10000;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto& x = pts[exhaustive ? t / (n * n) : pick(rng)];
    const auto& y = pts[exhaustive ? t / n % n : pick(rng)];
    const auto& z = pts[exhaustive ? t % n : pick(rng)];
    const Length dxy = s.distance(x, y);
    REQUIRE(s.distance(x, x) == 0);
    REQUIRE(dxy == s.distance(y, x));
    REQUIRE((x == y) == (dxy == 0));
    REQUIRE(s.distance(x, z) <= dxy + s.distance(y, z));
  }
}

}  // namespace

TEST_SUITE("spaces") {
  TEST_CASE("glued line distances") {
    auto gl = build_glued_line(Rational(1, 10), Rational(1, 2), 30);
    CHECK(gl->distance(gl->tip(0), gl->tip(3)) == Rational(13, 10));
    CHECK(gl->distance(gl->tip(0), gl->tip(1)) == Rational(11, 10));
    CHECK(gl->distance(gl->tip(0), gl->base(0)) == Rational(1, 2));
    CHECK(gl->distance(gl->tip(5), gl->tip(5)) == 0);
  }

  TEST_CASE("glued line window counts hairs") {
    auto gl = build_glued_line(1, 1, 1);
    int tips = 0;
    for (const auto& p : gl->support())
      if (auto b = std::get_if<BranchPoint>(&p); b && b->offset == 1) ++tips;
    CHECK(tips == 3);
  }

  TEST_CASE("glued line closed form matches a discretized graph model") {
    const Rational eps(1, 10), hair(1, 2);
    const int W = 12;
    auto gl = build_glued_line(eps, hair, W);
    // Vertices 0..2W are base points -W..W, 2W+1.. the tips.
    std::vector<oracle::Edge> edges;
    const int nb = 2 * W + 1;
    for (int i = 0; i + 1 < nb; ++i) edges.push_back({i, i + 1, eps});
    for (int i = 0; i < nb; ++i) edges.push_back({i, nb + i, hair});
    auto d = oracle::all_pairs(2 * nb, edges);
    for (int k = -W; k <= W; ++k)
      for (int l = -W; l <= W; ++l) {
        CHECK(gl->distance(gl->tip(k), gl->tip(l)) == *d[nb + k + W][nb + l + W]);
        CHECK(gl->distance(gl->tip(k), gl->base(l)) == *d[nb + k + W][l + W]);
      }
  }

  TEST_CASE("tripod distances") {
    auto t = build_tripod(3, 2, 1);
    CHECK(t->distance(t->endpoint(0), t->endpoint(1)) == 5);
    auto z = build_tripod(0, 0, 0);
    for (int i = 0; i < 3; ++i) CHECK(z->distance(z->endpoint(i), z->center()) == 0);
    auto e = build_tripod(1, 1, 1);
    CHECK(e->distance(e->endpoint(0), e->endpoint(1)) == 2);
    CHECK(e->distance(e->endpoint(1), e->endpoint(2)) == 2);
    CHECK(e->distance(e->endpoint(0), e->endpoint(2)) == 2);
  }

  TEST_CASE("balls") {
    auto z2 = std::make_shared<CayleySpace>(std::make_shared<FreeAbelianGroup>(2));
    CHECK(z2->ball(WordPoint{{0, 0}}, 3, false).size() == 13);
    CHECK(z2->ball(WordPoint{{0, 0}}, 0, false).empty());
    auto f2 = std::make_shared<CayleySpace>(std::make_shared<FreeGroup>(2));
    CHECK(f2->ball(WordPoint{{}}, 3, true).size() == 53);
    for (int r = 0; r <= 6; ++r)
      CHECK(f2->ball(WordPoint{{}}, r, true).size() == oracle::free_group_ball(2, r).size());
  }

  TEST_CASE("ball monotonicity and the open/closed relation") {
    auto z2 = std::make_shared<CayleySpace>(std::make_shared<FreeAbelianGroup>(2));
    auto gl = build_glued_line(Rational(1, 10), Rational(1, 2), 40);
    auto g = make_grid_graph(5, 4);
    std::vector<std::pair<const Space*, Point>> cases{
        {z2.get(), WordPoint{{1, -2}}}, {gl.get(), gl->tip(0)}, {gl.get(), LinePoint{Rational(1, 20)}}, {g.get(), VertexPoint{7}}};
    for (const auto& [s, x] : cases) {
      std::set<Point> prev;
      for (int k = 0; k <= 24; ++k) {
        const Rational r(k, 8);
        auto open = points_of(s->ball(x, r, false));
        auto closed = points_of(s->ball(x, r, true));
        std::set<Point> cur(closed.begin(), closed.end());
        CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
        prev = cur;
        // Open ball of radius r = closed ball at the largest support distance below r.
        if (!open.empty()) {
          Length below = 0;
          for (const auto& e : s->ball(x, r, false)) below = std::max(below, e.distance);
          CHECK(points_of(s->ball(x, below, true)) == open);
        }
      }
    }
  }

  TEST_CASE("metric axioms on sampled triples") {
    auto z2 = std::make_shared<CayleySpace>(std::make_shared<FreeAbelianGroup>(2));
    auto f2 = std::make_shared<CayleySpace>(std::make_shared<FreeGroup>(2));
    auto gl = build_glued_line(Rational(1, 10), Rational(1, 2), 20);
    auto tri = build_tripod(3, 2, 1);
    auto g = std::make_shared<WeightedGraph>(
        5, std::vector<GraphEdge>{{0, 1, Rational(1, 2)}, {1, 2, 2}, {2, 3, 1}, {3, 0, 3}, {1, 4, Rational(3, 4)}});
    check_metric_axioms(*z2, points_of(z2->ball(WordPoint{{0, 0}}, 4, true)), 1);
    check_metric_axioms(*f2, points_of(f2->ball(WordPoint{{}}, 3, true)), 2);
    auto glp = gl->support();
    glp.push_back(LinePoint{Rational(3, 20)});
    glp.push_back(BranchPoint{2, Rational(1, 4)});
    check_metric_axioms(*gl, glp, 3);
    auto tp = tri->support();
    tp.push_back(BranchPoint{0, Rational(3, 2)});
    tp.push_back(BranchPoint{2, Rational(1, 2)});
    check_metric_axioms(*tri, tp, 4);
    auto gp = g->support();
    gp.push_back(g->edge_point(1, Rational(1, 3)));
    gp.push_back(g->edge_point(3, 2));
    check_metric_axioms(*g, gp, 5);
  }

  TEST_CASE("graph distances agree with Floyd-Warshall") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 12);
      std::vector<GraphEdge> edges;
      std::vector<oracle::Edge> oe;
      for (int i = 1; i < n; ++i) {
        const int j = static_cast<int>(rng() % i);
        const Rational w(1 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 3));
        edges.push_back({i, j, w});
        oe.push_back({i, j, w});
      }
      for (int e = 0; e < n / 2; ++e) {
        const int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
        edges.push_back({a, b, 1});
        oe.push_back({a, b, 1});
      }
      WeightedGraph g(n, edges);
      auto d = oracle::all_pairs(n, oe);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) CHECK(g.distance(VertexPoint{a}, VertexPoint{b}) == *d[a][b]);
    }
  }

  TEST_CASE("validation diagnostics") {
    using R = Rational;
    FiniteMetricSpace ok({{0, 5, 4}, {5, 0, 3}, {4, 3, 0}});
    CHECK(ok.validate().ok());
    FiniteMetricSpace bad({{R(0), R(10), R(1)}, {R(10), R(0), R(1)}, {R(1), R(1), R(0)}});
    CHECK_FALSE(bad.validate().ok());
    CHECK_THROWS(make_validated_metric({{R(0), R(10), R(1)}, {R(10), R(0), R(1)}, {R(1), R(1), R(0)}}));
    WeightedGraph split(4, {{0, 1, 1}, {2, 3, 1}});
    CHECK(split.validate().ok());
    CHECK(split.validate().warnings.size() == 1);
  }

  TEST_CASE("model ball volumes") {
    for (int n = 2; n <= 5; ++n)
      CHECK(model_ball_volume({0, n}, 2) / model_ball_volume({0, n}, 1) == doctest::Approx(std::pow(2.0, n)));
    CHECK(model_ball_volume({-1, 2}, 0) == 0);
    CHECK_THROWS(model_ball_volume({0, 1}, 1));
    CHECK(model_ball_volume({-1, 2}, 1) == doctest::Approx(std::cosh(1.0) - 1).epsilon(1e-9));
    for (int n = 2; n <= 4; ++n)
      for (double k : {-1.0, -0.25, -4.0})
        for (int R2 = 1; R2 <= 12; ++R2) {
          const Rational R(R2, 2);
          const ModelProfile m{exact_rational(k), n};
          const double ratio = model_ball_volume(m, R * 2) / model_ball_volume(m, R);
          CHECK(ratio <= std::pow(2.0, n) * std::exp((n - 1) * std::sqrt(-k) * R2 / 2.0) * (1 + 1e-9));
        }
  }
}
