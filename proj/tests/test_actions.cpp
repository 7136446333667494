#include "bgkit/action_analysis.hpp"
#include "bgkit/entropy.hpp"
#include "bgkit/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace bgkit;

namespace {

std::shared_ptr<const CayleySpace> cayley(GroupPtr g) { return std::make_shared<CayleySpace>(std::move(g)); }

std::shared_ptr<const GroupAction> translations(GroupPtr g) {
  return std::make_shared<LeftTranslationAction>(cayley(std::move(g)));
}

std::vector<Point> square(int m) {
  std::vector<Point> out;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) out.push_back(word({a, b}));
  return out;
}

}  // namespace

TEST_SUITE("actions") {
  TEST_CASE("orbit windows") {
    auto triv = translations(std::make_shared<FreeAbelianGroup>(0));
    auto o = triv->orbit_within(word({}), 10);
    REQUIRE(o.size() == 1);
    CHECK(o[0].displacement == 0);
    CHECK(translations(std::make_shared<FreeAbelianGroup>(2))->orbit_within(word({0, 0}), 1).size() == 5);
    auto f2 = translations(std::make_shared<FreeGroup>(2));
    for (int R = 0; R <= 5; ++R)
      CHECK(f2->orbit_within(word({}), R).size() == oracle::free_group_ball(2, R).size());
  }

  TEST_CASE("actions are isometric on samples") {
    auto z2 = cayley(std::make_shared<FreeAbelianGroup>(2));
    LatticeTranslationAction act(2, 3, z2);
    std::vector<Point> pts;
    for (const auto& e : z2->ball(word({0, 0}), 3, true)) pts.push_back(e.point);
    CHECK(validate_isometry(act, pts, word_ball(act.group(), 2)).empty());
    auto gl = build_glued_line(Rational(1, 10), Rational(1, 2), 60);
    LatticeTranslationAction shift(1, 1, gl);
    std::vector<Point> gp{gl->tip(0), gl->tip(3), gl->base(-2), LinePoint{Rational(1, 20)}, BranchPoint{1, Rational(1, 4)}};
    CHECK(validate_isometry(shift, gp, word_ball(shift.group(), 5)).empty());
  }

  TEST_CASE("sigma_r") {
    auto z2 = translations(std::make_shared<FreeAbelianGroup>(2));
    CHECK(sigma_r(*z2, word({0, 0}), Rational(1, 2)).elements.size() == 1);
    CHECK(sigma_r(*z2, word({0, 0}), Rational(1, 2)).generators.empty());
    auto s = sigma_r(*z2, word({0, 0}), 1);
    CHECK(s.elements.size() == 5);
    CHECK(s.classification == Nilpotency::virtually_nilpotent);
    auto idx = z2->group().subgroup_index(s.generators, 100);
    CHECK(idx.verdict == IndexEvidence::Verdict::verified);
    CHECK(idx.index == 1);

    auto f2 = translations(std::make_shared<FreeGroup>(2));
    auto sf = sigma_r(*f2, word({}), 1);
    CHECK(sf.elements.size() == 5);
    CHECK(sf.classification == Nilpotency::not_virtually_nilpotent);

    std::size_t prev = 0;
    for (int k = 0; k <= 12; ++k) {
      const auto n = sigma_r(*f2, word({}), Rational(k, 3)).elements.size();
      CHECK(n >= prev);
      prev = n;
    }
  }

  TEST_CASE("systoles") {
    auto z2 = cayley(std::make_shared<FreeAbelianGroup>(2));
    LatticeTranslationAction act(2, 5, z2);
    auto rep = systole(act, square(5));
    for (const auto& row : rep.rows) {
      CHECK(row.sys == 5);
      CHECK(row.sys_tf == 5);
    }
    CHECK(rep.diastole == 5);
    CHECK(rep.global_sys == 5);

    auto f2 = translations(std::make_shared<FreeGroup>(2));
    CHECK(systole(*f2, {word({})}).rows.at(0).sys == 1);

    auto s3 = std::make_shared<PermutationGroup>(3, std::vector<GroupElement>{{1, 0, 2}, {1, 2, 0}});
    PermutationAction perm(s3, make_complete_graph(3));
    auto ps = systole(perm, {vertex(0)});
    CHECK(ps.rows.at(0).sys == 0);
    CHECK(ps.rows.at(0).stabilized);
    CHECK_FALSE(ps.warnings.empty());
    CHECK_FALSE(ps.rows.at(0).sys_tf);

    for (const auto& row : rep.rows)
      if (row.sys && row.sys_tf) CHECK(*row.sys <= *row.sys_tf);
  }

  TEST_CASE("thin sets") {
    auto z = cayley(std::make_shared<FreeAbelianGroup>(1));
    LatticeTranslationAction act(1, 3, z);
    std::vector<Point> sample;
    for (int i = -10; i <= 10; ++i) sample.push_back(word({i}));
    auto sys = systole(act, sample);
    CHECK(thin_set(act, 3, sample, false, sys).verdict == Connectivity::empty);
    auto all = thin_set(act, 4, sample, false, sys);
    CHECK(all.members.size() == sample.size());
    CHECK(all.verdict == Connectivity::connected);

    // Tips are displaced by 2 hair + eps = 11/10, base points by eps.
    auto gl = build_glued_line(Rational(1, 10), Rational(1, 2), 40);
    LatticeTranslationAction shift(1, 1, gl);
    std::vector<Point> tips;
    for (int k = -5; k <= 5; ++k) tips.push_back(gl->tip(k));
    auto gs = systole(shift, tips);
    for (const auto& row : gs.rows) CHECK(row.sys == Rational(11, 10));
    CHECK(thin_set(shift, Rational(11, 10), tips, false, gs).members.empty());
    auto above = thin_set(shift, Rational(12, 10), tips, false, gs);
    CHECK(above.members.size() == tips.size());
    CHECK(above.verdict == Connectivity::inconclusive);
  }

  TEST_CASE("margulis estimates") {
    auto z2 = translations(std::make_shared<FreeAbelianGroup>(2));
    auto mz = margulis_estimate(*z2, {word({0, 0})}, 6);
    CHECK(mz.rows.at(0).estimate == 6);

    auto f2 = translations(std::make_shared<FreeGroup>(2));
    auto mf = margulis_estimate(*f2, {word({})}, 6);
    CHECK(mf.rows.at(0).estimate == 1);
    CHECK_FALSE(mf.rows.at(0).attained);
    REQUIRE(mf.rows.at(0).flip);
    CHECK(*mf.rows.at(0).estimate <= *mf.rows.at(0).flip);

    auto prod = translations(std::make_shared<ProductGroup>(
        std::vector<GroupPtr>{std::make_shared<FreeAbelianGroup>(1), std::make_shared<FreeGroup>(2)}));
    auto mp = margulis_estimate(*prod, {WordPoint{prod->group().identity()}}, 4);
    CHECK(mp.rows.at(0).estimate == 1);
  }

  TEST_CASE("short generators") {
    auto z2 = translations(std::make_shared<FreeAbelianGroup>(2));
    auto sg = short_generators(*z2, word({0, 0}), 2, 0);
    CHECK(sg.displacement_ok);
    CHECK(sg.separation_ok);
    CHECK(sg.index.verdict == IndexEvidence::Verdict::verified);
    for (std::size_t i = 0; i < sg.family.size(); ++i) {
      CHECK(z2->space().distance(word({0, 0}), sg.family[i].point) <= 2);
      for (std::size_t j = i + 1; j < sg.family.size(); ++j)
        CHECK(z2->space().distance(sg.family[i].point, sg.family[j].point) >= 2);
    }

    auto triv = translations(std::make_shared<FreeAbelianGroup>(0));
    CHECK(short_generators(*triv, word({}), 1, 0).family.empty());

    auto space = cayley(std::make_shared<FreeAbelianGroup>(2));
    LatticeTranslationAction lat(2, 5, space);
    const Length D = codiameter(lat, word({0, 0}), square(5));
    auto sl = short_generators(lat, word({0, 0}), 5, D);
    CHECK(sl.displacement_ok);
    CHECK(sl.separation_ok);
    for (const auto& e : sl.family) CHECK(e.displacement <= D * 2 + 5);
  }

  TEST_CASE("bound formulas") {
    CHECK(evaluate_bound("generators", {{"N", 2}, {"K", 0}, {"D", 5}}).value == 14641);
    CHECK(evaluate_bound("betti_simply_connected", {{"N", 1}, {"K", 0}, {"D", 1}}).value == 121);
    CHECK(evaluate_bound("betti_hyperbolic", {{"K", 0}, {"D", 3}}).value == doctest::Approx(729));
    CHECK(evaluate_bound("systole_lower", {{"D", 1}, {"C", 2}, {"K", 0}, {"r0", 1}}).value ==
          doctest::Approx(1.0 / 14));
    CHECK(evaluate_bound("generator_count", {{"C", 2}, {"K", 0}, {"D", 1}, {"eps0", 4}}).value ==
          doctest::Approx(4));
    CHECK_THROWS(evaluate_bound("margulis_scale", {{"C", 2}, {"K", 0}, {"r0", 1}}));
    CHECK_THROWS(evaluate_bound("nonsense", {}));
    CHECK_THROWS(evaluate_bound("generators", {{"N", 2}, {"K", -1}, {"D", 5}}));

    NuOracle nu({{10, 2}, {100, 5}, {1e300, 9}});
    CHECK(nu(3) == 2);
    CHECK(nu(10) == 2);
    CHECK(nu(11) == 5);
    // C^3 + 1 = 9 at (C, K) = (2, 0): nu = 2, N0 = 1.
    auto m = evaluate_bound("margulis_scale", {{"C", 2}, {"K", 0}, {"r0", 3}}, &nu);
    CHECK(m.intermediates.at("N0") == 1);
    CHECK(m.value == 3);
    auto eps = evaluate_bound("systole_lower_eps1", {{"C", 2}, {"K", 0}, {"D", 1}}, &nu);
    CHECK(eps.intermediates.at("eps1") == doctest::Approx(0.5));
    CHECK(eps.value == doctest::Approx(0.5 * std::pow(7.0, -1.0)));
    CHECK_THROWS(NuOracle({{10, 5}, {100, 2}}));
    CHECK_THROWS(NuOracle({{10, 0}}));
    CHECK_THROWS(nu(1e301));
    for (const auto& kind : bound_kinds()) CHECK_NOTHROW(evaluate_bound(kind, {{"N", 1}, {"K", 0.5}, {"D", 1}, {"C", 2}, {"r0", 1}, {"eps0", 1}, {"delta", 0}}, &nu));
  }

  TEST_CASE("cross checks") {
    auto c = bound_cross_check("generators", 13, {{"N", 2}, {"K", 0.1}, {"D", 2}});
    CHECK(c.relation == "<=");
    CHECK(c.holds);
    auto s = bound_cross_check("systole_lower", 5, {{"D", 1}, {"C", 2}, {"K", 0}, {"r0", 1}});
    CHECK(s.relation == ">=");
    CHECK(s.holds);
    auto unest = bound_cross_check("generators", 1e9, {{"N", 1}, {"K", 0}, {"D", 1}}, nullptr, {"cocompact"}, false);
    CHECK_FALSE(unest.established);
    CHECK(unest.holds);
  }

  TEST_CASE("strengthened bounds on a torus quotient action") {
    auto space = cayley(std::make_shared<FreeAbelianGroup>(2));
    auto act = std::make_shared<LatticeTranslationAction>(2, 5, space);
    const Point x = word({0, 0});
    auto mu = counting_measure(act, x);
    const Length D = codiameter(*act, x, square(5));
    const double K = 0.5;
    const double C = minimal_factor(*mu, x, 1, K, 12) * (1 + 1e-6);
    auto cert = check_weak_bg(*mu, {x}, {1, C, K}, 12);
    REQUIRE(cert.status == Status::verified);
    PackingOptions wide;
    wide.exact_cap = 100;
    auto rep = strengthened_bg_check(*act, x, cert, to_double(D), {{2, 6}, {1, 6}}, wide);
    CHECK(rep.status == Status::verified);
    std::set<std::string> seen;
    for (const auto& row : rep.rows) seen.insert(row.formula);
    CHECK(seen == std::set<std::string>{"i", "ii", "iii"});
    CHECK(strengthened_bound_i({1, 2, 0}, 1, 2) == doctest::Approx(10));
    CHECK(strengthened_bound_iii({1, 2, 0}, 1, 1, 2) == doctest::Approx(8));

    auto bad = check_weak_bg(*mu, {x}, {1, 1.01, 0}, 12);
    CHECK_THROWS_AS(strengthened_bg_check(*act, x, bad, 1, {{2, 6}}), HypothesisError);
  }
}
