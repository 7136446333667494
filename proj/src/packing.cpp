#include "bgkit/packing.hpp"

#include "bgkit/errors.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <stdexcept>

namespace bgkit {

std::string to_string(PackMode m) { return m == PackMode::greedy ? "greedy" : "exact"; }

// ---------------------------------------------------------------- max clique

namespace {

using Bits = std::vector<std::uint64_t>;

bool test(const Bits& b, std::size_t i) { return (b[i >> 6] >> (i & 63)) & 1; }
void set_bit(Bits& b, std::size_t i) { b[i >> 6] |= std::uint64_t(1) << (i & 63); }
void clear_bit(Bits& b, std::size_t i) { b[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
std::size_t popcount(const Bits& b) {
  std::size_t c = 0;
  for (auto w : b) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

// Tomita-style branch and bound with greedy colouring bounds, vertices
// renumbered by non-increasing degree.
class CliqueSearch {
 public:
  CliqueSearch(const std::vector<Bits>& adj, std::size_t n, std::uint64_t budget)
      : adj_(adj), n_(n), words_((n + 63) / 64), budget_(budget) {}

  std::vector<std::size_t> run() {
    Bits all(words_, 0);
    for (std::size_t i = 0; i < n_; ++i) set_bit(all, i);
    std::vector<std::size_t> cur;
    expand(all, cur);
    return best_;
  }

 private:
  void colour(const Bits& P, std::vector<std::size_t>& order, std::vector<std::size_t>& bounds) {
    Bits uncoloured = P;
    std::size_t k = 0;
    while (popcount(uncoloured)) {
      ++k;
      Bits q = uncoloured;
      for (std::size_t w = 0; w < words_; ++w)
        while (q[w]) {
          const std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(q[w]));
          clear_bit(q, v);
          clear_bit(uncoloured, v);
          for (std::size_t u = 0; u < words_; ++u) q[u] &= ~adj_[v][u];
          order.push_back(v);
          bounds.push_back(k);
        }
    }
  }

  void expand(Bits P, std::vector<std::size_t>& cur) {
    if (++nodes_ > budget_) throw HypothesisError("exact packing exceeded its node budget; use greedy mode");
    std::vector<std::size_t> order, bounds;
    colour(P, order, bounds);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (cur.size() + bounds[i] <= best_.size()) return;
      const std::size_t v = order[i];
      cur.push_back(v);
      Bits next(words_);
      for (std::size_t w = 0; w < words_; ++w) next[w] = P[w] & adj_[v][w];
      if (popcount(next) == 0) {
        if (cur.size() > best_.size()) best_ = cur;
      } else {
        expand(next, cur);
      }
      cur.pop_back();
      clear_bit(P, v);
    }
  }

  const std::vector<Bits>& adj_;
  std::size_t n_, words_;
  std::uint64_t budget_, nodes_ = 0;
  std::vector<std::size_t> best_;
};

}  // namespace

std::vector<std::size_t> maximum_clique(const std::vector<std::vector<std::uint64_t>>& adj, std::size_t n,
                                        std::uint64_t node_budget) {
  if (n == 0) return {};
  std::vector<std::size_t> deg(n);
  for (std::size_t i = 0; i < n; ++i) deg[i] = popcount(adj[i]);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return deg[a] > deg[b]; });
  const std::size_t words = (n + 63) / 64;
  std::vector<Bits> re(n, Bits(words, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (test(adj[perm[i]], perm[j])) set_bit(re[i], j);
  auto found = CliqueSearch(re, n, node_budget).run();
  for (auto& v : found) v = perm[v];
  std::sort(found.begin(), found.end());
  return found;
}

// ---------------------------------------------------------------- packings

PackingResult pack_candidates(const Space& space, std::vector<Point> candidates, const Length& r,
                              const PackingOptions& opt) {
  std::set<Point> seen;
  std::erase_if(candidates, [&](const Point& p) { return !seen.insert(p).second; });
  const std::size_t n = candidates.size();
  const Length two_r = r * 2;
  PackingResult out;
  out.method = opt.mode;
  out.candidates = n;
  if (opt.mode == PackMode::greedy) {
    for (const auto& c : candidates)
      if (std::all_of(out.centers.begin(), out.centers.end(),
                      [&](const Point& p) { return space.distance(p, c) >= two_r; }))
        out.centers.push_back(c);
    out.count = out.centers.size();
    return out;
  }
  if (n > opt.exact_cap)
    throw HypothesisError(std::to_string(n) + " packing candidates exceed the exact cap of " +
                          std::to_string(opt.exact_cap) + "; use greedy mode or raise the cap");
  const std::size_t words = (n + 63) / 64;
  std::vector<Bits> compatible(n, Bits(words, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (space.distance(candidates[i], candidates[j]) >= two_r) set_bit(compatible[i], j), set_bit(compatible[j], i);
  for (auto i : maximum_clique(compatible, n, opt.node_budget)) out.centers.push_back(candidates[i]);
  out.count = out.centers.size();
  return out;
}

namespace {

void check_radii(const Length& r, const Length& R) {
  if (!(r > 0)) throw std::domain_error("packing radius must be positive");
  if (r * 2 > R) throw std::domain_error("packing needs r <= R/2");
}

}  // namespace

PackingResult packing_count(const Space& space, const Point& x, const Length& r, const Length& R,
                            const PackingOptions& opt) {
  check_radii(r, R);
  std::vector<Point> cand;
  for (auto& e : space.ball(x, R - r, true)) cand.push_back(std::move(e.point));
  return pack_candidates(space, std::move(cand), r, opt);
}

PackingResult gamma_packing_count(const GroupAction& action, const Point& x, const Length& r, const Length& R,
                                  const PackingOptions& opt) {
  check_radii(r, R);
  std::vector<Point> cand;
  for (auto& e : action.orbit_within(x, R - r)) cand.push_back(std::move(e.point));
  return pack_candidates(action.space(), std::move(cand), r, opt);
}

PackingConditionReport packing_condition(const Space& space, const std::vector<Point>& centers, const Length& r0,
                                         std::int64_t N0, const PackingOptions& opt) {
  PackingConditionReport rep{r0, N0, {}, Status::verified};
  for (const auto& c : centers) {
    PackingConditionRow row{c, packing_count(space, c, r0 / 2, r0 * 11, opt)};
    const bool within = static_cast<std::int64_t>(row.packing.count) <= N0;
    if (!within)
      row.status = Status::violated;
    else if (row.packing.method == PackMode::greedy)
      row.status = Status::inconclusive;
    rep.status = combine(rep.status, row.status);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// ---------------------------------------------------------------- sandwich

SandwichReport sandwich_check(const GroupAction& action, const Measure& mu, const Point& x, const Length& r,
                              const Length& R, const std::vector<Point>& y_sample, std::optional<Length> codiameter,
                              const PackingOptions& opt) {
  check_radii(r, R);
  if (opt.mode != PackMode::exact) throw std::invalid_argument("the sandwich check needs exact packings");
  const Space& sp = action.space();
  SandwichReport rep;
  rep.r = r;
  rep.R = R;

  const CountingOrbitMeasure orbit(std::shared_ptr<const GroupAction>(&action, [](const GroupAction*) {}), x);
  const Length top = std::max(R, Length(r * 2));
  const RadialProfile op = orbit.profile(x, top);
  rep.orbit_lower = op.mass(R - r, true) / op.mass(r * 2, false);

  const auto pg = gamma_packing_count(action, x, r, R, opt);
  rep.pack_gamma = pg.count;
  const RadialProfile mp = mu.profile(x, R);
  const Mass inner = mp.mass(r, false);
  if (inner == 0) throw HypothesisError("zero-mass ball at radius " + to_string(r));
  rep.measure_upper = mp.mass(R, false) / inner;

  const auto pk = packing_count(sp, x, r, R, opt);
  rep.pack = pk.count;
  std::set<Point> ys(y_sample.begin(), y_sample.end());
  ys.insert(pk.centers.begin(), pk.centers.end());
  rep.sup_ratio = 0;
  for (const auto& y : ys) {
    const RadialProfile yp = mu.profile(y, R * 2);
    const Mass m = yp.mass(r, false);
    if (m == 0) throw HypothesisError("zero-mass ball around " + to_string(y));
    rep.sup_ratio = std::max(rep.sup_ratio, Rational(yp.mass(R * 2, false) / m));
  }

  auto ineq = [&](std::string name, Rational lhs, Rational rhs) {
    const bool ok = lhs <= rhs;
    rep.holds = rep.holds && ok;
    rep.inequalities.push_back({std::move(name), std::move(lhs), std::move(rhs), ok});
  };
  const Rational pgq(static_cast<long long>(rep.pack_gamma)), pq(static_cast<long long>(rep.pack));
  ineq("orbit_lower <= pack_gamma", rep.orbit_lower, pgq);
  ineq("pack_gamma <= measure_upper", pgq, rep.measure_upper);
  ineq("pack_gamma <= pack", pgq, pq);
  ineq("pack <= sup_ratio", pq, rep.sup_ratio);
  if (codiameter && *codiameter < r) {
    rep.codiameter = codiameter;
    rep.pack_gamma_shrunk = gamma_packing_count(action, x, r - *codiameter, R, opt).count;
    ineq("pack <= pack_gamma(r - D)", pq, Rational(static_cast<long long>(*rep.pack_gamma_shrunk)));
  }
  return rep;
}

}  // namespace bgkit
