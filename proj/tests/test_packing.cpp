#include "bgkit/errors.hpp"
#include "bgkit/packing.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace bgkit;

namespace {

std::vector<Point> within(const Space& s, const Point& x, const Length& rad) {
  std::vector<Point> out;
  for (const auto& e : s.ball(x, rad, true)) out.push_back(e.point);
  return out;
}

int subset_oracle(const Space& s, const std::vector<Point>& cand, const Length& r) {
  return oracle::max_independent(static_cast<int>(cand.size()),
                                 [&](int i, int j) { return s.distance(cand[i], cand[j]) >= r * 2; });
}

// Packings with r = 1 on a tree are independent sets: (take, skip) DP on the
// regular tree of the given degree, truncated at depth `depth`.
std::pair<long, long> tree_mis(int degree, int children, int depth) {
  if (depth == 0) return {1, 0};
  auto [in, out] = tree_mis(degree, degree - 1, depth - 1);
  return {1 + children * out, children * std::max(in, out)};
}

void check_valid(const Space& s, const Point& x, const Length& r, const Length& R, const PackingResult& p) {
  CHECK(p.count == p.centers.size());
  for (std::size_t i = 0; i < p.centers.size(); ++i) {
    CHECK(s.distance(x, p.centers[i]) <= R - r);
    for (std::size_t j = i + 1; j < p.centers.size(); ++j) CHECK(s.distance(p.centers[i], p.centers[j]) >= r * 2);
  }
}

std::shared_ptr<const CayleySpace> cayley(GroupPtr g) { return std::make_shared<CayleySpace>(std::move(g)); }

}  // namespace

TEST_SUITE("packing") {
  TEST_CASE("line graph packing matches the subset oracle") {
    // Centers within R - r = 4 of vertex 5 and pairwise >= 2 apart: {1, 3, 5, 7, 9}.
    auto line = make_path_graph(11);
    auto p = packing_count(*line, vertex(5), 1, 5);
    CHECK(p.count == 5);
    CHECK(static_cast<int>(p.count) == subset_oracle(*line, within(*line, vertex(5), 4), 1));
    check_valid(*line, vertex(5), 1, 5, p);
    // r = R/2: tangent open balls B(3, 2) and B(7, 2) both lie in B(5, 4).
    CHECK(packing_count(*line, vertex(5), 2, 4).count == 2);
    CHECK(packing_count(*line, vertex(5), 2, 4).count == static_cast<std::size_t>(subset_oracle(*line, within(*line, vertex(5), 2), 2)));
    CHECK(packing_count(*line, vertex(0), 1, 2).count == 1);
    CHECK_THROWS_AS(packing_count(*line, vertex(5), 3, 5), std::domain_error);
    CHECK_THROWS_AS(packing_count(*line, vertex(5), 0, 5), std::domain_error);
  }

  TEST_CASE("Z^2 packing matches the subset oracle") {
    auto z2 = cayley(std::make_shared<FreeAbelianGroup>(2));
    auto p = packing_count(*z2, word({0, 0}), 1, 4);
    CHECK(static_cast<int>(p.count) == subset_oracle(*z2, within(*z2, word({0, 0}), 3), 1));
    check_valid(*z2, word({0, 0}), 1, 4, p);
  }

  TEST_CASE("exact cap") {
    auto z2 = cayley(std::make_shared<FreeAbelianGroup>(2));
    CHECK_THROWS_AS(packing_count(*z2, word({0, 0}), 1, 10), HypothesisError);
    PackingOptions greedy;
    greedy.mode = PackMode::greedy;
    auto g = packing_count(*z2, word({0, 0}), 1, 10, greedy);
    CHECK(g.method == PackMode::greedy);
    check_valid(*z2, word({0, 0}), 1, 10, g);
  }

  TEST_CASE("orbit packings") {
    auto triv = cayley(std::make_shared<FreeAbelianGroup>(0));
    auto ta = std::make_shared<LeftTranslationAction>(triv);
    CHECK(gamma_packing_count(*ta, word({}), 1, 2).count == 1);

    auto z = cayley(std::make_shared<FreeAbelianGroup>(1));
    auto za = std::make_shared<LeftTranslationAction>(z);
    auto pz = gamma_packing_count(*za, word({0}), 1, 5);
    CHECK(static_cast<int>(pz.count) == subset_oracle(*z, within(*z, word({0}), 4), 1));
    CHECK(pz.count == 5);

    auto f2 = cayley(std::make_shared<FreeGroup>(2));
    auto fa = std::make_shared<LeftTranslationAction>(f2);
    auto pf = gamma_packing_count(*fa, word({}), 1, 4);
    auto [in, out] = tree_mis(4, 4, 3);
    CHECK(static_cast<long>(pf.count) == std::max(in, out));
    CHECK(pf.count == 40);
    check_valid(*f2, word({}), 1, 4, pf);
  }

  TEST_CASE("greedy <= exact, orbit <= full, monotone in r and R") {
    auto z2 = cayley(std::make_shared<FreeAbelianGroup>(2));
    auto act = std::make_shared<LatticeTranslationAction>(2, 2, z2);
    PackingOptions greedy;
    greedy.mode = PackMode::greedy;
    PackingOptions wide;
    wide.exact_cap = 200;
    const Point x = word({0, 0});
    for (int R2 = 2; R2 <= 10; ++R2) {
      const Rational R(R2, 2);
      std::size_t prev_r = SIZE_MAX;
      for (int r4 = 1; 2 * r4 <= 2 * R2; ++r4) {
        const Rational r(r4, 4);
        if (r * 2 > R) break;
        auto ex = packing_count(*z2, x, r, R, wide);
        auto gr = packing_count(*z2, x, r, R, greedy);
        auto og = gamma_packing_count(*act, x, r, R, wide);
        check_valid(*z2, x, r, R, ex);
        check_valid(*z2, x, r, R, gr);
        check_valid(*z2, x, r, R, og);
        CHECK(gr.count <= ex.count);
        CHECK(og.count <= ex.count);
        CHECK(ex.count <= prev_r);
        prev_r = ex.count;
        if (R2 > 2 && r * 2 <= R - Rational(1, 2))
          CHECK(packing_count(*z2, x, r, R - Rational(1, 2), wide).count <= ex.count);
      }
    }
  }

  TEST_CASE("maximum clique") {
    // 5-cycle plus a chord: largest clique is a triangle.
    const std::size_t n = 5;
    std::vector<std::vector<std::uint64_t>> adj(n, std::vector<std::uint64_t>(1, 0));
    auto link = [&](int a, int b) { adj[a][0] |= 1ull << b, adj[b][0] |= 1ull << a; };
    for (int i = 0; i < 5; ++i) link(i, (i + 1) % 5);
    link(0, 2);
    auto c = maximum_clique(adj, n, 1000);
    CHECK(c.size() == 3);
  }

  TEST_CASE("packing condition") {
    auto pt = std::make_shared<FiniteMetricSpace>(std::vector<std::vector<Rational>>{{0}});
    CHECK(packing_condition(*pt, {vertex(0)}, 1, 1).status == Status::verified);

    auto z2 = cayley(std::make_shared<FreeAbelianGroup>(2));
    PackingOptions wide;
    wide.exact_cap = 500;
    // Pack(x, 1/2, 11): every lattice point within 10.5, since distinct points are >= 1 apart.
    auto rep = packing_condition(*z2, {word({0, 0})}, 1, 221, wide);
    CHECK(rep.status == Status::verified);
    CHECK(rep.rows.at(0).packing.count == 221);
    CHECK(packing_condition(*z2, {word({0, 0})}, 1, 220, wide).status == Status::violated);

    auto gl = build_glued_line(Rational(1, 10), Rational(1, 2), 200);
    PackingOptions greedy;
    greedy.mode = PackMode::greedy;
    auto g = packing_condition(*gl, {gl->tip(0)}, 1, 20, greedy);
    CHECK(g.status == Status::violated);
    CHECK(g.rows.at(0).packing.count > 20);
  }

  TEST_CASE("sandwich chain") {
    auto z = cayley(std::make_shared<FreeAbelianGroup>(1));
    auto za = std::make_shared<LeftTranslationAction>(z);
    auto mu = counting_measure(za, word({0}));
    auto rep = sandwich_check(*za, *mu, word({0}), 1, 5, {word({0})});
    CHECK(rep.holds);
    // Orbit lower: B̄(4) has 9 points, B(2) has 3.
    CHECK(rep.orbit_lower == 3);
    CHECK(rep.pack_gamma == 5);
    CHECK(rep.measure_upper == 9);
    CHECK(rep.pack == 5);

    auto triv = cayley(std::make_shared<FreeAbelianGroup>(0));
    auto ta = std::make_shared<LeftTranslationAction>(triv);
    auto atom = single_atom(triv, word({}));
    auto t = sandwich_check(*ta, *atom, word({}), 1, 2, {word({})});
    CHECK(t.holds);
    CHECK(t.orbit_lower == 1);
    CHECK(t.pack_gamma == 1);
    CHECK(t.measure_upper == 1);
    CHECK(t.pack == 1);
  }

  TEST_CASE("covering lemma on a torus quotient action") {
    auto z2 = cayley(std::make_shared<FreeAbelianGroup>(2));
    auto act = std::make_shared<LatticeTranslationAction>(2, 5, z2);
    const Point x = word({0, 0});
    std::vector<Point> dom;
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b) dom.push_back(word({a, b}));
    const Length D = codiameter(*act, x, dom);
    CHECK(D == 4);
    const Length r = D + 1, R = r * 4;
    PackingOptions wide;
    wide.exact_cap = 1000;
    const auto pack = packing_count(*z2, x, r, R, wide);
    const auto shrunk = gamma_packing_count(*act, x, r - D, R, wide);
    CHECK(pack.count <= shrunk.count);
  }
}
