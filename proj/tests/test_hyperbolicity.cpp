#include "bgkit/covers.hpp"
#include "bgkit/entropy.hpp"
#include "bgkit/hyperbolicity.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <queue>
#include <random>

using namespace bgkit;

namespace {

std::vector<std::vector<Rational>> matrix_of(const Space& s, const std::vector<Point>& pts) {
  std::vector<std::vector<Rational>> d(pts.size(), std::vector<Rational>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) d[i][j] = s.distance(pts[i], pts[j]);
  return d;
}

std::shared_ptr<WeightedGraph> random_tree(std::mt19937_64& rng, int n) {
  std::vector<GraphEdge> edges;
  for (int i = 1; i < n; ++i)
    edges.push_back({i, static_cast<std::int64_t>(rng() % i), Rational(1 + static_cast<int>(rng() % 4), 2)});
  return std::make_shared<WeightedGraph>(n, edges);
}

// Thin-triangle oracle for simple unit-edge graphs: lexicographically smallest
// geodesics by greedy descent, fibers sampled on a 1/4 grid.
struct UnitGraph {
  int n;
  std::vector<std::vector<int>> adj;
  std::vector<std::vector<int>> d;

  explicit UnitGraph(int n_, const std::vector<std::pair<int, int>>& edges) : n(n_), adj(n_), d(n_, std::vector<int>(n_, -1)) {
    for (auto [u, v] : edges) adj[u].push_back(v), adj[v].push_back(u);
    for (auto& a : adj) std::sort(a.begin(), a.end());
    for (int s = 0; s < n; ++s) {
      std::queue<int> q;
      q.push(s);
      d[s][s] = 0;
      while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u])
          if (d[s][v] < 0) d[s][v] = d[s][u] + 1, q.push(v);
      }
    }
  }
  std::vector<int> path(int a, int b) const {
    std::vector<int> p{a};
    while (p.back() != b)
      for (int v : adj[p.back()])
        if (d[v][b] == d[p.back()][b] - 1) {
          p.push_back(v);
          break;
        }
    return p;
  }
  // Point at arclength s: edge (p[i], p[i+1]) at fraction f.
  struct Pos {
    int a, b;
    double f;
  };
  static Pos at(const std::vector<int>& p, double s) {
    const int i = std::min(static_cast<int>(std::floor(s)), static_cast<int>(p.size()) - 1);
    if (i + 1 >= static_cast<int>(p.size())) return {p.back(), p.back(), 0};
    return {p[i], p[i + 1], s - i};
  }
  double dist(const Pos& x, const Pos& y) const {
    if ((x.a == y.a && x.b == y.b)) return std::abs(x.f - y.f);
    if (x.a == y.b && x.b == y.a) return std::abs(x.f - (1 - y.f));
    double best = 1e18;
    for (auto [u, du] : {std::pair{x.a, x.f}, {x.b, 1 - x.f}})
      for (auto [v, dv] : {std::pair{y.a, y.f}, {y.b, 1 - y.f}}) best = std::min(best, du + d[u][v] + dv);
    return best;
  }
  double thin_delta() const {
    double best = 0;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          const int v[3] = {x, y, z};
          for (int b = 0; b < 3; ++b) {
            const int o = v[b], p = v[(b + 1) % 3], q = v[(b + 2) % 3];
            const double leg = (d[o][p] + d[o][q] - d[p][q]) / 2.0;
            const auto c0 = path(o, p), c1 = path(o, q);
            for (double t = 0; t <= leg + 1e-12; t += 0.25) best = std::max(best, dist(at(c0, t), at(c1, t)));
          }
        }
    return best;
  }
};

}  // namespace

TEST_SUITE("hyperbolicity") {
  TEST_CASE("gromov tripod") {
    FiniteMetricSpace m({{0, 5, 4}, {5, 0, 3}, {4, 3, 0}});
    auto t = gromov_tripod(m, vertex(0), vertex(1), vertex(2));
    CHECK(t.alpha == 3);
    CHECK(t.beta == 2);
    CHECK(t.gamma == 1);
    auto deg = gromov_tripod(m, vertex(0), vertex(1), vertex(1));
    CHECK(deg.alpha == 5);
    CHECK(deg.beta == 0);
    CHECK(deg.gamma == 0);
    FiniteMetricSpace eq({{0, 2, 2}, {2, 0, 2}, {2, 2, 0}});
    auto e = gromov_tripod(eq, vertex(0), vertex(1), vertex(2));
    CHECK((e.alpha == 1 && e.beta == 1 && e.gamma == 1));
    FiniteMetricSpace bad({{0, 10, 1}, {10, 0, 1}, {1, 1, 0}});
    CHECK_THROWS(gromov_tripod(bad, vertex(0), vertex(1), vertex(2)));
  }

  TEST_CASE("tripod legs reconstruct the sides") {
    std::mt19937_64 rng(5);
    auto g = random_tree(rng, 12);
    auto pts = g->support();
    for (std::int64_t e = 0; e < 11; ++e) pts.push_back(g->edge_point(e, g->edges()[e].weight / 3));
    for (int trial = 0; trial < 500; ++trial) {
      const auto& x = pts[rng() % pts.size()];
      const auto& y = pts[rng() % pts.size()];
      const auto& z = pts[rng() % pts.size()];
      auto t = gromov_tripod(*g, x, y, z);
      CHECK(t.alpha + t.beta == g->distance(x, y));
      CHECK(t.alpha + t.gamma == g->distance(x, z));
      CHECK(t.beta + t.gamma == g->distance(y, z));
      CHECK(std::min({t.alpha, t.beta, t.gamma}) >= 0);
    }
  }

  TEST_CASE("four-point delta on small graphs") {
    auto c4 = make_cycle_graph(4);
    auto rep = four_point_delta(*c4, c4->support(), {});
    CHECK(rep.delta == 1);
    CHECK(rep.delta == oracle::four_point(matrix_of(*c4, c4->support())));
    REQUIRE(rep.witness.size() == 4);
    CHECK(oracle::four_point(matrix_of(*c4, rep.witness)) == rep.delta);
    auto k4 = make_complete_graph(4);
    CHECK(four_point_delta(*k4, k4->support(), {}).delta == 0);
    auto big = make_path_graph(200);
    CHECK_THROWS(four_point_delta(*big, big->support(), {}));
    CHECK_NOTHROW(four_point_delta(*big, big->support(), {false, 500, 3}));
  }

  TEST_CASE("four-point delta agrees with the oracle on random graphs") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 15; ++trial) {
      const int n = 4 + static_cast<int>(rng() % 8);
      std::vector<GraphEdge> edges;
      std::vector<oracle::Edge> oe;
      auto add = [&](int u, int v, Rational w) {
        edges.push_back({u, v, w});
        oe.push_back({u, v, w});
      };
      for (int i = 1; i < n; ++i) add(i, static_cast<int>(rng() % i), Rational(1 + static_cast<int>(rng() % 3)));
      for (int k = 0; k < n / 3; ++k) add(static_cast<int>(rng() % n), static_cast<int>(rng() % n), 1);
      WeightedGraph g(n, edges);
      auto d = oracle::all_pairs(n, oe);
      std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = *d[i][j];
      auto ex = four_point_delta(g, g.support(), {});
      CHECK(ex.delta == oracle::four_point(m));
      CHECK(four_point_delta(g, g.support(), {false, 50, static_cast<std::uint64_t>(trial)}).delta <= ex.delta);
    }
  }

  TEST_CASE("trees are 0-hyperbolic") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
      auto g = random_tree(rng, 10 + trial);
      auto pts = g->support();
      pts.push_back(g->edge_point(0, g->edges()[0].weight / 2));
      CHECK(four_point_delta(*g, pts, {}).delta == 0);
      CHECK(thin_triangle_delta(*g, {}).delta == 0);
      CHECK(convexity_defect(*g, {}, 6).defect == 0);
    }
    auto tri = build_tripod(3, 2, 1);
    auto tp = tri->support();
    tp.push_back(BranchPoint{0, Rational(3, 2)});
    CHECK(four_point_delta(*tri, tp, {}).delta == 0);
    auto cover = universal_cover(make_complete_graph(4));
    std::vector<Point> ball;
    for (const auto& e : cover.space->ball(word({}), 3, true)) ball.push_back(e.point);
    CHECK(four_point_delta(*cover.space, ball, {false, 20000, 9}).delta == 0);
    auto edge = make_path_graph(2);
    CHECK(thin_triangle_delta(*edge, {}).delta == 0);
    CHECK(convexity_defect(*make_path_graph(7), {}, 8).defect == 0);
  }

  TEST_CASE("thin triangles on cycles match the oracle") {
    for (int n : {4, 5, 6, 7}) {
      std::vector<std::pair<int, int>> e;
      for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
      UnitGraph oracle_graph(n, e);
      auto rep = thin_triangle_delta(*make_cycle_graph(n), {});
      CHECK(to_double(rep.delta) == doctest::Approx(oracle_graph.thin_delta()));
      if (n == 6) CHECK(rep.delta > 0);
    }
  }

  TEST_CASE("convexity defect on C6") {
    auto c6 = make_cycle_graph(6);
    auto rep = convexity_defect(*c6, {}, 8);
    CHECK(rep.defect > 0);
    REQUIRE(rep.witness.size() == 3);
    const auto o = rep.witness[0], y1 = rep.witness[1], y2 = rep.witness[2];
    const auto g0 = c6->geodesic(o, y1), g1 = c6->geodesic(o, y2);
    const Length l0 = *c6->vertex_distance(o, y1), l1 = *c6->vertex_distance(o, y2);
    CHECK(c6->distance(c6->point_along(o, g0, l0 * rep.t), c6->point_along(o, g1, l1 * rep.t)) -
              *c6->vertex_distance(y1, y2) * rep.t ==
          rep.defect);
  }

  TEST_CASE("cocompact bound formulas") {
    CHECK(cocompact_bound_ii_doubling(3, std::log(3.0)) == doctest::Approx(81 * std::exp(6.5 * std::log(3.0) * 3)));
    CHECK(cocompact_bound_ii_ratio(2, 8, 0.5) == doctest::Approx(3 * std::pow(4.0, 6.25) * std::exp(3 * (8 - 1.6))));
    CHECK(cocompact_bound_i(2, 8, 1, 0.5) ==
          doctest::Approx(3 * std::exp(0.5) * std::pow(4.0, 6.25) * std::pow(4.0, 3.0) * std::exp(3 * (8 - 1.6))));
  }

  TEST_CASE("cocompact check on F2") {
    auto f2 = std::make_shared<CayleySpace>(std::make_shared<FreeGroup>(2));
    auto mu = counting_measure(std::make_shared<LeftTranslationAction>(f2), word({}));
    auto rep = cocompact_bg_check(*mu, word({}), true, 0, 0, std::log(3.0), {{3, 6}}, true);
    CHECK(rep.status == Status::verified);
    bool seen = false;
    for (const auto& row : rep.rows)
      if (row.bound == "ii_doubling") {
        seen = true;
        CHECK(row.ratio == Rational(1457, 53));
      }
    CHECK(seen);
    auto skip = cocompact_bg_check(*mu, word({}), true, 1, 1, std::log(3.0), {{1, 2}}, true);
    CHECK(skip.rows.empty());
    CHECK_FALSE(skip.skipped.empty());
  }

  TEST_CASE("cocompact check with measured parameters") {
    // Universal cover of the theta graph: delta = 0, D from the vertex sample.
    auto theta = std::make_shared<WeightedGraph>(2, std::vector<GraphEdge>{{0, 1, 1}, {0, 1, 1}, {0, 1, 1}});
    auto cover = universal_cover(theta);
    auto orbit = pullback_measure(cover, AtomicMeasure(theta, {{vertex(0), 1}}));
    const Length D = codiameter(*cover.deck, word({}), {word({}), word({1})});
    const double K = entropy_estimate(growth_profile(*orbit, word({}), 40, 2)).estimate;
    auto rep = cocompact_bg_check(*orbit, word({}), true, 0, to_double(D), K,
                                  {{10, 20}, {10, 30}, {12, 24}, {18, 36}, {20, 40}}, true);
    CHECK(rep.status != Status::violated);
    CHECK_FALSE(rep.rows.empty());

    // Z^2 / (5Z)^2: delta from a sample, not a global bound, D the codiameter.
    auto z2 = std::make_shared<CayleySpace>(std::make_shared<FreeAbelianGroup>(2));
    auto act = std::make_shared<LatticeTranslationAction>(2, 5, z2);
    auto mu = counting_measure(act, word({0, 0}));
    std::vector<Point> dom, sample;
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b) dom.push_back(word({a, b}));
    for (const auto& e : z2->ball(word({0, 0}), 4, true)) sample.push_back(e.point);
    const double delta = to_double(four_point_delta(*z2, sample, {}).delta);
    const double Dz = to_double(codiameter(*act, word({0, 0}), dom));
    const double Kz = entropy_estimate(growth_profile(*mu, word({0, 0}), 200, 10)).estimate;
    auto rz = cocompact_bg_check(*mu, word({0, 0}), true, delta, Dz, Kz, {{120, 240}, {150, 300}, {120, 360}}, true);
    CHECK(rz.status != Status::violated);
    CHECK_FALSE(rz.rows.empty());
  }
}
