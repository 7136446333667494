#include "bgkit/hyperbolicity.hpp"

#include "bgkit/errors.hpp"
#include "bgkit/parallel.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

namespace bgkit {

TripodDecomposition gromov_tripod(const Space& space, const Point& x, const Point& y, const Point& z) {
  const Length xy = space.distance(x, y), xz = space.distance(x, z), yz = space.distance(y, z);
  TripodDecomposition t{(xy + xz - yz) / 2, (xy + yz - xz) / 2, (xz + yz - xy) / 2};
  if (t.alpha < 0 || t.beta < 0 || t.gamma < 0)
    throw std::domain_error("triangle inequality fails on (" + to_string(x) + ", " + to_string(y) + ", " +
                            to_string(z) + ")");
  return t;
}

// ---------------------------------------------------------------- four-point

namespace {

template <class T>
T four_point_gap(const T& ab, const T& cd, const T& ac, const T& bd, const T& ad, const T& bc) {
  T s[3] = {ab + cd, ac + bd, ad + bc};
  std::sort(s, s + 3);
  return s[2] - s[1];
}

// Distances scaled to a common denominator, when they fit comfortably in int64.
std::optional<std::pair<std::vector<std::int64_t>, Integer>> scaled_matrix(const std::vector<Length>& d) {
  Integer den = 1;
  for (const auto& q : d) {
    den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(q));
    if (den > Integer(1) << 40) return std::nullopt;
  }
  std::vector<std::int64_t> out;
  out.reserve(d.size());
  const Integer limit = Integer(1) << 60;
  for (const auto& q : d) {
    Integer v = boost::multiprecision::numerator(q) * (den / boost::multiprecision::denominator(q));
    if (v > limit / 4) return std::nullopt;
    out.push_back(v.convert_to<std::int64_t>());
  }
  return std::make_pair(std::move(out), den);
}

struct QuadBest {
  Rational gap = -1;
  std::array<std::size_t, 4> idx{};
};

template <class T, class Get>
QuadBest exhaustive_quadruples(std::size_t n, Get&& get, std::function<Rational(const T&)> to_rational) {
  std::vector<std::pair<T, std::array<std::size_t, 4>>> per(n, {T(-1), {}});
  parallel_for(n, [&](std::size_t a) {
    T best = T(-1);
    std::array<std::size_t, 4> w{};
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        for (std::size_t d = c + 1; d < n; ++d) {
          T g = four_point_gap<T>(get(a, b), get(c, d), get(a, c), get(b, d), get(a, d), get(b, c));
          if (g > best) best = g, w = {a, b, c, d};
        }
    per[a] = {best, w};
  });
  QuadBest out;
  T best = T(-1);
  for (const auto& [g, w] : per)
    if (g > best) best = g, out.idx = w;
  out.gap = best < T(0) ? Rational(0) : to_rational(best);
  return out;
}

}  // namespace

HyperbolicityReport four_point_delta(const Space& space, const std::vector<Point>& points, const SampleSpec& spec,
                                     std::size_t cap) {
  for (const auto& p : points) space.require(p);
  const std::size_t n = points.size();
  HyperbolicityReport rep;
  rep.delta = 0;
  if (n < 4) {
    rep.method = spec.exhaustive ? "four_point_exhaustive" : "four_point_sampled";
    return rep;
  }
  if (spec.exhaustive) {
    if (n > cap)
      throw std::invalid_argument(std::to_string(n) + " points exceed the exhaustive cap of " + std::to_string(cap) +
                                  "; use sampled mode");
    rep.method = "four_point_exhaustive";
    std::vector<Length> dist(n * n);
    parallel_for(n, [&](std::size_t i) {
      for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = i == j ? Length(0) : space.distance(points[i], points[j]);
    });
    QuadBest best;
    if (auto scaled = scaled_matrix(dist)) {
      const auto& m = scaled->first;
      const Integer den = scaled->second;
      best = exhaustive_quadruples<std::int64_t>(
          n, [&](std::size_t i, std::size_t j) { return m[i * n + j]; },
          [&](const std::int64_t& g) { return Rational(Integer(g), den); });
    } else {
      best = exhaustive_quadruples<Rational>(
          n, [&](std::size_t i, std::size_t j) -> const Rational& { return dist[i * n + j]; },
          [](const Rational& g) { return g; });
    }
    rep.delta = best.gap / 2;
    for (auto i : best.idx) rep.witness.push_back(points[i]);
    rep.evaluated = n * (n - 1) * (n - 2) * (n - 3) / 24;
    return rep;
  }
  rep.method = "four_point_sampled";
  rep.seed = spec.seed;
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  Rational best = -1;
  std::array<std::size_t, 4> w{};
  for (std::size_t s = 0; s < spec.count; ++s) {
    std::array<std::size_t, 4> q{};
    for (std::size_t k = 0; k < 4; ++k) {
      std::size_t v;
      do v = pick(rng);
      while (std::find(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(k), v) != q.begin() + static_cast<std::ptrdiff_t>(k));
      q[k] = v;
    }
    std::sort(q.begin(), q.end());
    auto d = [&](std::size_t i, std::size_t j) { return space.distance(points[q[i]], points[q[j]]); };
    Rational g = four_point_gap<Rational>(d(0, 1), d(2, 3), d(0, 2), d(1, 3), d(0, 3), d(1, 2));
    if (g > best || (g == best && q < w)) best = g, w = q;
  }
  rep.delta = best > 0 ? Rational(best / 2) : Rational(0);
  for (auto i : w) rep.witness.push_back(points[i]);
  rep.evaluated = spec.count;
  return rep;
}

// ---------------------------------------------------------------- thin triangles

namespace {

struct Path {
  std::int64_t origin;
  std::vector<PathStep> steps;
  std::vector<Length> starts;  // arclength at the start of each step
  Length length;
};

Path make_path(const WeightedGraph& g, std::int64_t origin, std::vector<PathStep> steps) {
  Path p{origin, std::move(steps), {}, 0};
  for (const auto& s : p.steps) {
    p.starts.push_back(p.length);
    p.length += g.edges()[static_cast<std::size_t>(s.edge)].weight;
  }
  return p;
}

Path reversed(const WeightedGraph& g, const Path& p) {
  std::vector<PathStep> steps;
  for (auto it = p.steps.rbegin(); it != p.steps.rend(); ++it) steps.push_back({it->to, it->edge, it->from});
  const std::int64_t origin = p.steps.empty() ? p.origin : p.steps.back().to;
  return make_path(g, origin, std::move(steps));
}

Path geodesic_path(const WeightedGraph& g, std::int64_t a, std::int64_t b) {
  if (!g.vertex_distance(a, b)) throw HypothesisError("no geodesic: vertices are disconnected");
  return make_path(g, a, g.geodesic(a, b));
}

// Index of the step covering (l, r), or nullopt when the path is exhausted.
std::optional<std::size_t> step_covering(const Path& p, const Length& l) {
  if (l >= p.length) return std::nullopt;
  auto it = std::upper_bound(p.starts.begin(), p.starts.end(), l);
  return static_cast<std::size_t>(it - p.starts.begin()) - 1;
}

// Affine function c + k t.
struct Line {
  Rational c;
  int k;
};

// Lines whose minimum is d(P(t), Q(t)) while both points stay on fixed steps.
std::vector<Line> distance_lines(const WeightedGraph& g, const Path& P, std::size_t i, const Path& Q,
                                 std::size_t j) {
  const auto& sp = P.steps[i];
  const auto& sq = Q.steps[j];
  const Length& wp = g.edges()[static_cast<std::size_t>(sp.edge)].weight;
  const Length& wq = g.edges()[static_cast<std::size_t>(sq.edge)].weight;
  // Distance from P(t) to the step's start is t - s; to its end, s + w - t.
  Line p_ends[2] = {{-P.starts[i], 1}, {P.starts[i] + wp, -1}};
  Line q_ends[2] = {{-Q.starts[j], 1}, {Q.starts[j] + wq, -1}};
  const std::int64_t pv[2] = {sp.from, sp.to};
  const std::int64_t qv[2] = {sq.from, sq.to};
  std::vector<Line> out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      out.push_back({p_ends[a].c + q_ends[b].c + *g.vertex_distance(pv[a], qv[b]), p_ends[a].k + q_ends[b].k});
  if (sp.edge == sq.edge) {
    // Position measured from the edge's first endpoint.
    const auto u = g.edges()[static_cast<std::size_t>(sp.edge)].u;
    Line pos_p = sp.from == u ? p_ends[0] : Line{wp - p_ends[0].c, -1};
    Line pos_q = sq.from == u ? q_ends[0] : Line{wq - q_ends[0].c, -1};
    out.push_back({pos_p.c - pos_q.c, pos_p.k - pos_q.k});
    out.push_back({pos_q.c - pos_p.c, pos_q.k - pos_p.k});
  }
  return out;
}

Point at(const WeightedGraph& g, const Path& p, const Length& t) { return g.point_along(p.origin, p.steps, t); }

// max over t in [0, T] of d(P(t), Q(t)); attained at a breakpoint of the
// piecewise-linear distance, so candidates are step boundaries and pairwise
// crossings of the local distance lines.
std::pair<Length, Length> max_fiber_distance(const WeightedGraph& g, const Path& P, const Path& Q, const Length& T) {
  std::set<Length> bps{Length(0), T};
  for (const auto* path : {&P, &Q})
    for (const auto& s : path->starts)
      if (s > 0 && s < T) bps.insert(s);
  std::set<Length> cand(bps);
  for (auto it = bps.begin(); std::next(it) != bps.end(); ++it) {
    const Length& l = *it;
    const Length& r = *std::next(it);
    auto i = step_covering(P, l), j = step_covering(Q, l);
    if (!i || !j) continue;
    auto lines = distance_lines(g, P, *i, Q, *j);
    for (std::size_t a = 0; a < lines.size(); ++a)
      for (std::size_t b = a + 1; b < lines.size(); ++b) {
        if (lines[a].k == lines[b].k) continue;
        Rational t = (lines[b].c - lines[a].c) / (lines[a].k - lines[b].k);
        if (t > l && t < r) cand.insert(t);
      }
  }
  Length best = -1, where = 0;
  for (const auto& t : cand) {
    Length d = g.distance(at(g, P, t), at(g, Q, t));
    if (d > best) best = d, where = t;
  }
  return {best, where};
}

std::vector<std::array<std::int64_t, 3>> sample_triples(std::int64_t n, const SampleSpec& spec, bool ordered_pair_tail) {
  std::vector<std::array<std::int64_t, 3>> out;
  if (spec.exhaustive) {
    const auto total = static_cast<double>(n) * n * n;
    if (total > 2.5e7) throw std::invalid_argument("too many vertex triples for exhaustive mode; use sampled mode");
    for (std::int64_t a = 0; a < n; ++a)
      for (std::int64_t b = ordered_pair_tail ? 0 : a + 1; b < n; ++b)
        for (std::int64_t c = b + 1; c < n; ++c) out.push_back({a, b, c});
    return out;
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::int64_t> pick(0, n - 1);
  for (std::size_t s = 0; s < spec.count; ++s) out.push_back({pick(rng), pick(rng), pick(rng)});
  return out;
}

}  // namespace

HyperbolicityReport triangle_thinness(const WeightedGraph& graph, std::int64_t x, std::int64_t y, std::int64_t z) {
  const Point px = VertexPoint{x}, py = VertexPoint{y}, pz = VertexPoint{z};
  const auto legs = gromov_tripod(graph, px, py, pz);
  const Path xy = geodesic_path(graph, x, y), xz = geodesic_path(graph, x, z), yz = geodesic_path(graph, y, z);
  const Path yx = reversed(graph, xy), zx = reversed(graph, xz), zy = reversed(graph, yz);
  const std::pair<const Path*, const Path*> branches[3] = {{&xy, &xz}, {&yx, &yz}, {&zx, &zy}};
  const Length* leg[3] = {&legs.alpha, &legs.beta, &legs.gamma};
  HyperbolicityReport rep;
  rep.method = "thin_triangle";
  rep.delta = -1;
  rep.evaluated = 1;
  for (int b = 0; b < 3; ++b) {
    auto [d, t] = max_fiber_distance(graph, *branches[b].first, *branches[b].second, *leg[b]);
    if (d > rep.delta) {
      rep.delta = d;
      rep.branch = b;
      rep.t = t;
      rep.witness = {px, py, pz, at(graph, *branches[b].first, t), at(graph, *branches[b].second, t)};
    }
  }
  return rep;
}

HyperbolicityReport thin_triangle_delta(const WeightedGraph& graph, const SampleSpec& spec) {
  if (!graph.connected()) throw HypothesisError("thin-triangle delta needs a connected graph");
  const auto triples = sample_triples(graph.vertex_count(), spec, false);
  std::vector<HyperbolicityReport> per(triples.size());
  parallel_for(triples.size(), [&](std::size_t i) {
    per[i] = triangle_thinness(graph, triples[i][0], triples[i][1], triples[i][2]);
  });
  HyperbolicityReport rep;
  rep.method = "thin_triangle";
  rep.delta = 0;
  for (auto& r : per)
    if (r.delta > rep.delta) rep = std::move(r);
  rep.method = "thin_triangle";
  rep.evaluated = triples.size();
  rep.seed = spec.exhaustive ? 0 : spec.seed;
  return rep;
}

// ---------------------------------------------------------------- convexity

ConvexityReport convexity_defect(const WeightedGraph& graph, const SampleSpec& spec, int grid) {
  if (grid < 2) throw std::invalid_argument("grid must have at least 2 parameter steps");
  if (!graph.connected()) throw HypothesisError("convexity defect needs a connected graph");
  const auto triples = sample_triples(graph.vertex_count(), spec, true);
  struct Local {
    Length defect = -1, t = 0;
    std::size_t idx = 0;
  };
  std::vector<Local> per(triples.size());
  parallel_for(triples.size(), [&](std::size_t i) {
    const auto [o, y1, y2] = triples[i];
    const Path c0 = geodesic_path(graph, o, y1), c1 = geodesic_path(graph, o, y2);
    const Length end = *graph.vertex_distance(y1, y2);
    Local best{-1, 0, i};
    for (int k = 0; k <= grid; ++k) {
      const Rational t(k, grid);
      Length v = graph.distance(at(graph, c0, c0.length * t), at(graph, c1, c1.length * t)) - end * t;
      if (v > best.defect) best.defect = v, best.t = t;
    }
    per[i] = best;
  });
  ConvexityReport rep;
  rep.defect = 0;
  rep.evaluated = triples.size();
  Length worst = -1;
  for (const auto& l : per)
    if (l.defect > worst) {
      worst = l.defect;
      rep.t = l.t;
      rep.witness = {triples[l.idx][0], triples[l.idx][1], triples[l.idx][2]};
    }
  rep.defect = std::max(worst, Length(0));
  return rep;
}

// ---------------------------------------------------------------- cocompact bounds

double cocompact_bound_i(double r, double R, double D, double K) {
  const double q = std::log(R / r);
  return 3 * std::exp(K * D + (25.0 / 4 + 6 * K * D) * q + 6 * K * (R - 0.8 * r));
}

double cocompact_bound_ii_doubling(double r, double K) { return 81 * std::exp(6.5 * K * r); }

double cocompact_bound_ii_ratio(double r, double R, double K) {
  return 3 * std::exp(25.0 / 4 * std::log(R / r) + 6 * K * (R - 0.8 * r));
}

CocompactReport cocompact_bg_check(const Measure& mu, const Point& x, bool counting, double delta, double D,
                                   double K, const std::vector<std::pair<Length, Length>>& pairs, bool closed) {
  if (!(delta >= 0) || !(D >= 0) || !(K >= 0)) throw std::invalid_argument("delta, D and K must be nonnegative");
  CocompactReport rep;
  rep.scale_i = exact_rational(2.5 * (7 * D + 4 * delta));
  rep.scale_ii = exact_rational(10 * (D + delta));
  Length top = 0;
  for (const auto& [r, R] : pairs) {
    if (!(r > 0) || !(r < R)) throw std::invalid_argument("pairs need 0 < r < R");
    top = std::max({top, R, Length(r * 2)});
  }
  const RadialProfile prof = mu.profile(x, top);
  auto ratio = [&](const Length& a, const Length& b) {
    Mass m = prof.mass(a, closed);
    if (m == 0) throw HypothesisError("zero-mass ball at radius " + to_string(a));
    return Rational(prof.mass(b, closed) / m);
  };
  auto add = [&](const Length& r, const Length& R, const char* which, double bound) {
    CocompactRow row{r, R, which, ratio(r, R), bound};
    row.status = compare_with_margin(row.ratio, std::log(bound));
    row.slack = to_double(row.ratio) / bound;
    rep.status = combine(rep.status, row.status);
    rep.rows.push_back(std::move(row));
  };
  std::set<Length> doubled;
  for (const auto& [r, R] : pairs) {
    const double rd = to_double(r), Rd = to_double(R);
    const std::string tag = "(" + to_string(r) + ", " + to_string(R) + ")";
    if (r >= rep.scale_i)
      add(r, R, "i", cocompact_bound_i(rd, Rd, D, K));
    else
      rep.skipped.push_back(tag + ": r below the scale " + to_string(rep.scale_i) + " of bound (i)");
    if (!counting) continue;
    if (r >= rep.scale_ii) {
      if (doubled.insert(r).second) add(r, r * 2, "ii_doubling", cocompact_bound_ii_doubling(rd, K));
      add(r, R, "ii_ratio", cocompact_bound_ii_ratio(rd, Rd, K));
    } else {
      rep.skipped.push_back(tag + ": r below the scale " + to_string(rep.scale_ii) + " of bounds (ii)");
    }
  }
  return rep;
}

}  // namespace bgkit
