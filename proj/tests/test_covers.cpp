#include "bgkit/covers.hpp"
#include "bgkit/errors.hpp"
#include "bgkit/hyperbolicity.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <functional>
#include <map>
#include <random>

using namespace bgkit;

namespace {

std::shared_ptr<WeightedGraph> figure_eight() {
  return std::make_shared<WeightedGraph>(1, std::vector<GraphEdge>{{0, 0, 1}, {0, 0, 1}});
}

std::shared_ptr<WeightedGraph> random_connected(std::mt19937_64& rng, int n, int extra) {
  std::vector<GraphEdge> edges;
  for (int i = 1; i < n; ++i) edges.push_back({i, static_cast<std::int64_t>(rng() % i), 1 + static_cast<int>(rng() % 2)});
  for (int k = 0; k < extra; ++k)
    edges.push_back({static_cast<std::int64_t>(rng() % n), static_cast<std::int64_t>(rng() % n), 1 + static_cast<int>(rng() % 2)});
  return std::make_shared<WeightedGraph>(n, edges);
}

// Lengths of all non-backtracking edge walks from v of length <= R, by direct
// recursion over (edge, direction) steps.
std::map<Rational, long> walk_lengths(const WeightedGraph& g, std::int64_t v, const Rational& R) {
  std::map<Rational, long> out;
  std::function<void(std::int64_t, std::int64_t, int, Rational)> rec = [&](std::int64_t at, std::int64_t edge, int dir,
                                                                           Rational len) {
    ++out[len];
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
      const auto& ed = g.edges()[e];
      for (int d : {+1, -1}) {
        const std::int64_t from = d > 0 ? ed.u : ed.v, to = d > 0 ? ed.v : ed.u;
        if (from != at) continue;
        if (static_cast<std::int64_t>(e) == edge && d == -dir) continue;
        if (len + ed.weight > R) continue;
        rec(to, static_cast<std::int64_t>(e), d, len + ed.weight);
      }
    }
  };
  rec(v, -1, 0, 0);
  return out;
}

}  // namespace

TEST_SUITE("covers") {
  TEST_CASE("cycle cover is a line") {
    auto c3 = make_cycle_graph(3);
    auto cover = universal_cover(c3);
    CHECK(cover.betti == 1);
    auto mu = pullback_measure(cover, VertexUniformMeasure(c3));
    CHECK(mu->ball_mass(word({}), Rational(5, 2), false) == 5);
    CHECK(cover.space->ball(word({}), 10, true).size() == 21);
  }

  TEST_CASE("tree base has trivial deck group") {
    auto t = make_path_graph(6);
    auto cover = universal_cover(t, 2);
    CHECK(cover.betti == 0);
    CHECK(cover.deck->orbit_within(word({}), 100).size() == 1);
    for (const auto& e : cover.space->ball(word({}), 10, true))
      CHECK(e.distance == *t->vertex_distance(2, cover.space->project(e.point)));
    CHECK(cover.space->ball(word({}), 10, true).size() == 6);
  }

  TEST_CASE("figure-eight cover is the 4-regular tree") {
    auto cover = universal_cover(figure_eight());
    CHECK(cover.betti == 2);
    CHECK(cover.deck->group().family() == "free");
    auto mu = pullback_measure(cover, VertexUniformMeasure(figure_eight()));
    CHECK(mu->ball_mass(word({}), 1, true) == 5);
    for (int R = 0; R <= 5; ++R)
      CHECK(cover.space->ball(word({}), R, true).size() == oracle::free_group_ball(2, R).size());
  }

  TEST_CASE("graph betti numbers") {
    CHECK(graph_betti(*make_path_graph(5)).total == 0);
    CHECK(graph_betti(*make_cycle_graph(3)).total == 1);
    CHECK(graph_betti(*make_complete_graph(4)).total == 3);
    WeightedGraph split(5, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {3, 4, 1}});
    auto b = graph_betti(split);
    CHECK_FALSE(b.connected);
    CHECK(b.per_component == std::vector<std::int64_t>{1, 0});
    CHECK_THROWS_AS(universal_cover(std::make_shared<WeightedGraph>(split)), HypothesisError);
  }

  TEST_CASE("zero base measure pulls back to zero") {
    auto c3 = make_cycle_graph(3);
    auto cover = universal_cover(c3);
    auto mu = pullback_measure(cover, AtomicMeasure(c3, {}));
    CHECK(mu->ball_mass(word({}), 7, true) == 0);
  }

  TEST_CASE("cover balls match non-backtracking walk enumeration") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 12; ++trial) {
      auto g = random_connected(rng, 2 + static_cast<int>(rng() % 5), 1 + static_cast<int>(rng() % 3));
      auto cover = universal_cover(g);
      const Rational R = 5;
      auto expect = walk_lengths(*g, 0, R);
      std::map<Rational, long> got;
      for (const auto& e : cover.space->ball(word({}), R, true)) ++got[e.distance];
      CHECK(got == expect);
    }
  }

  TEST_CASE("deck action is free, isometric and displaces by loop length") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 8; ++trial) {
      auto g = random_connected(rng, 3 + static_cast<int>(rng() % 4), 2);
      auto cover = universal_cover(g);
      const auto& sp = *cover.space;
      std::vector<Point> sample;
      for (const auto& e : sp.ball(word({}), 3, true)) sample.push_back(e.point);
      auto elements = word_ball(cover.deck->group(), 2);
      CHECK(validate_isometry(*cover.deck, sample, elements).empty());
      for (const auto& gamma : elements) {
        const Point moved = cover.deck->apply(gamma, word({}));
        CHECK(sp.distance(word({}), moved) == sp.path_length(sp.loop(gamma)));
        if (!cover.deck->group().is_identity(gamma))
          for (const auto& p : sample) CHECK(cover.deck->apply(gamma, p) != p);
      }
    }
  }

  TEST_CASE("pullback masses: dynamic programme against enumeration") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 8; ++trial) {
      auto g = random_connected(rng, 2 + static_cast<int>(rng() % 5), 2);
      auto cover = universal_cover(g);
      std::vector<std::pair<Point, Mass>> atoms;
      for (std::int64_t v = 0; v < g->vertex_count(); ++v) atoms.push_back({vertex(v), Rational(1 + v, 2)});
      AtomicMeasure base(g, atoms);
      auto mu = pullback_measure(cover, base);
      const Point center = cover.space->ball(word({}), 2, true).back().point;
      for (int k = 0; k <= 12; ++k) {
        const Rational r(k, 2);
        Mass direct = 0;
        for (const auto& e : cover.space->ball(center, r, true))
          direct += Rational(1 + cover.space->project(e.point), 2);
        CHECK(mu->ball_mass(center, r, true) == direct);
      }
      // Deck invariance.
      for (const auto& gamma : word_ball(cover.deck->group(), 1))
        CHECK(mu->ball_mass(cover.deck->apply(gamma, center), 4, false) == mu->ball_mass(center, 4, false));
    }
  }

  TEST_CASE("cover trees are 0-hyperbolic") {
    auto cover = universal_cover(make_complete_graph(4));
    std::vector<Point> pts;
    for (const auto& e : cover.space->ball(word({}), 2, true)) pts.push_back(e.point);
    CHECK(four_point_delta(*cover.space, pts, {}).delta == 0);
  }

  TEST_CASE("points round-trip through text") {
    auto cover = universal_cover(make_complete_graph(4));
    for (const auto& e : cover.space->ball(word({}), 2, true))
      CHECK(cover.space->parse_point(to_string(e.point)) == e.point);
    CHECK(cover.space->parse_point("root") == Point(word({})));
    CHECK_THROWS(cover.space->parse_point("w[99]"));
  }
}
