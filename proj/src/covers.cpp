#include "bgkit/covers.hpp"

#include "bgkit/errors.hpp"
#include "spaces/parse.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace bgkit {

namespace {

std::size_t edge_of(std::int64_t letter) { return static_cast<std::size_t>(std::abs(letter) - 1); }

}  // namespace

CoverTreeSpace::CoverTreeSpace(std::shared_ptr<const WeightedGraph> base, std::int64_t basepoint,
                               std::size_t enumeration_cap)
    : base_(std::move(base)), basepoint_(basepoint), cap_(enumeration_cap) {
  if (!base_->connected()) throw HypothesisError("universal covers need a connected base graph");
  if (basepoint_ < 0 || basepoint_ >= base_->vertex_count()) throw std::out_of_range("basepoint outside the graph");
  const auto n = static_cast<std::size_t>(base_->vertex_count());
  in_tree_.assign(base_->edges().size(), false);
  parent_letter_.assign(n, 0);
  std::vector<bool> seen(n, false);
  std::deque<std::int64_t> queue{basepoint_};
  seen[static_cast<std::size_t>(basepoint_)] = true;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (const auto& [e, w] : base_->incident(v)) {
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = true;
      in_tree_[static_cast<std::size_t>(e)] = true;
      const auto& ed = base_->edges()[static_cast<std::size_t>(e)];
      parent_letter_[static_cast<std::size_t>(w)] = ed.u == v ? e + 1 : -(e + 1);
      queue.push_back(w);
    }
  }
  for (std::size_t e = 0; e < in_tree_.size(); ++e)
    if (!in_tree_[e]) cycle_edges_.push_back(static_cast<std::int64_t>(e));
}

std::int64_t CoverTreeSpace::tail(std::int64_t letter) const {
  const auto& ed = base_->edges()[edge_of(letter)];
  return letter > 0 ? ed.u : ed.v;
}

std::int64_t CoverTreeSpace::head(std::int64_t letter) const {
  const auto& ed = base_->edges()[edge_of(letter)];
  return letter > 0 ? ed.v : ed.u;
}

const Length& CoverTreeSpace::weight(std::int64_t letter) const { return base_->edges()[edge_of(letter)].weight; }

std::int64_t CoverTreeSpace::project(const Point& p) const {
  require(p);
  const auto& w = std::get<WordPoint>(p).word;
  return w.empty() ? basepoint_ : head(w.back());
}

GroupElement CoverTreeSpace::reduce(GroupElement path) const {
  GroupElement out;
  out.reserve(path.size());
  for (auto l : path) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

GroupElement CoverTreeSpace::tree_path(std::int64_t v) const {
  GroupElement out;
  while (v != basepoint_) {
    const auto l = parent_letter_[static_cast<std::size_t>(v)];
    out.push_back(l);
    v = tail(l);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

GroupElement CoverTreeSpace::loop(const GroupElement& deck) const {
  GroupElement walk;
  for (auto g : deck) {
    if (g == 0 || static_cast<std::size_t>(std::abs(g)) > cycle_edges_.size())
      throw std::invalid_argument("deck letter out of range");
    const auto e = cycle_edges_[static_cast<std::size_t>(std::abs(g) - 1)];
    const std::int64_t letter = g > 0 ? e + 1 : -(e + 1);
    auto to = tree_path(tail(letter));
    walk.insert(walk.end(), to.begin(), to.end());
    walk.push_back(letter);
    auto back = tree_path(head(letter));
    for (auto it = back.rbegin(); it != back.rend(); ++it) walk.push_back(-*it);
  }
  return reduce(std::move(walk));
}

Length CoverTreeSpace::path_length(const GroupElement& path) const {
  Length out = 0;
  for (auto l : path) out += weight(l);
  return out;
}

bool CoverTreeSpace::contains(const Point& p) const {
  auto w = std::get_if<WordPoint>(&p);
  if (!w) return false;
  const auto m = static_cast<std::int64_t>(base_->edges().size());
  std::int64_t at = basepoint_;
  for (std::size_t i = 0; i < w->word.size(); ++i) {
    const auto l = w->word[i];
    if (l == 0 || std::abs(l) > m) return false;
    if (tail(l) != at) return false;
    if (i > 0 && w->word[i - 1] == -l) return false;
    at = head(l);
  }
  return true;
}

Length CoverTreeSpace::distance(const Point& a, const Point& b) const {
  require(a);
  require(b);
  const auto& x = std::get<WordPoint>(a).word;
  const auto& y = std::get<WordPoint>(b).word;
  std::size_t k = 0;
  while (k < x.size() && k < y.size() && x[k] == y[k]) ++k;
  Length d = 0;
  for (std::size_t i = k; i < x.size(); ++i) d += weight(x[i]);
  for (std::size_t i = k; i < y.size(); ++i) d += weight(y[i]);
  return d;
}

std::vector<Point> CoverTreeSpace::adjacent(const Point& p) const {
  require(p);
  const auto& w = std::get<WordPoint>(p).word;
  std::vector<Point> out;
  if (!w.empty()) out.push_back(WordPoint{GroupElement(w.begin(), w.end() - 1)});
  const std::int64_t at = w.empty() ? basepoint_ : head(w.back());
  for (const auto& [e, other] : base_->incident(at)) {
    (void)other;
    for (std::int64_t l : {e + 1, -(e + 1)}) {
      if (tail(l) != at || (!w.empty() && w.back() == -l)) continue;
      auto next = w;
      next.push_back(l);
      out.push_back(WordPoint{std::move(next)});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<BallEntry> CoverTreeSpace::ball(const Point& center, const Length& r, bool closed) const {
  require(center);
  std::vector<BallEntry> out;
  if (r < 0 || (r == 0 && !closed)) return out;
  // Walk the tree outward from the center; `from` marks the neighbour we came from.
  struct Item {
    Point p;
    Length d;
    std::optional<Point> from;
  };
  std::vector<Item> stack{{center, 0, std::nullopt}};
  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    out.push_back({it.p, it.d});
    if (out.size() > cap_)
      throw WindowError("cover ball of radius " + to_string(r) + " exceeds " + std::to_string(cap_) + " points");
    for (auto& q : adjacent(it.p)) {
      if (it.from && q == *it.from) continue;
      Length d = it.d + distance(it.p, q);
      if (closed ? d <= r : d < r) stack.push_back({std::move(q), std::move(d), it.p});
    }
  }
  sort_ball(out);
  return out;
}

Point CoverTreeSpace::parse_point(std::string_view text) const {
  Point p;
  if (text == "root" || text == "e")
    p = WordPoint{{}};
  else
    p = WordPoint{detail::parse_int_list(detail::starts_with(text, "w") ? text.substr(1) : text)};
  require(p);
  return p;
}

// ---------------------------------------------------------------- deck action

DeckAction::DeckAction(std::shared_ptr<const CoverTreeSpace> cover)
    : GroupAction(std::make_shared<FreeGroup>(static_cast<int>(cover->betti())), cover), cover_(std::move(cover)) {
  for (std::int64_t i = 1; i <= cover_->betti(); ++i)
    max_loop_ = std::max(max_loop_, cover_->path_length(cover_->loop({i})));
}

Point DeckAction::apply(const GroupElement& g, const Point& p) const {
  cover_->require(p);
  auto walk = cover_->loop(g);
  const auto& w = std::get<WordPoint>(p).word;
  walk.insert(walk.end(), w.begin(), w.end());
  return WordPoint{cover_->reduce(std::move(walk))};
}

// d(x, γ'x) <= d(x, γx) + |loop(s)| + 2 d(x, root) when γ = γ's for a generator s.
Length DeckAction::exploration_slack(const Point& x) const {
  return max_loop_ + cover_->distance(x, WordPoint{{}}) * 2;
}

CoverData universal_cover(std::shared_ptr<const WeightedGraph> graph, std::int64_t basepoint) {
  auto space = std::make_shared<const CoverTreeSpace>(std::move(graph), basepoint);
  auto deck = std::make_shared<const DeckAction>(space);
  return {space, deck, space->betti()};
}

// ---------------------------------------------------------------- pullback

PullbackMeasure::PullbackMeasure(std::shared_ptr<const CoverTreeSpace> cover, std::vector<Mass> vertex_mass)
    : cover_(std::move(cover)), mass_(std::move(vertex_mass)) {
  if (static_cast<std::int64_t>(mass_.size()) != cover_->base().vertex_count())
    throw std::invalid_argument("pullback needs one mass per base vertex");
  for (const auto& m : mass_)
    if (m < 0) throw std::domain_error("negative vertex mass");
  for (const auto& e : cover_->base().edges())
    scale_ = boost::multiprecision::lcm(scale_, boost::multiprecision::denominator(e.weight));
}

RadialProfile PullbackMeasure::profile(const Point& center, const Length& R) const {
  cover_->require(center);
  if (R < 0) return RadialProfile(center, R, {});
  const auto& base = cover_->base();
  const auto& edges = base.edges();
  const Integer Ti = floor_of(R * Rational(scale_));
  const auto letters = 2 * edges.size();
  if (Ti * letters > Integer(50'000'000))
    throw WindowError("pullback profile to radius " + to_string(R) + " is too large for the walk table");
  const auto T = Ti.convert_to<std::size_t>();
  auto letter = [](std::size_t i) { return i % 2 == 0 ? static_cast<std::int64_t>(i / 2 + 1) : -static_cast<std::int64_t>(i / 2 + 1); };
  std::vector<std::size_t> wlen(letters);
  for (std::size_t i = 0; i < letters; ++i)
    wlen[i] = Integer(edges[i / 2].weight * Rational(scale_)).convert_to<std::size_t>();
  // Successors of each directed letter: letters leaving its head, minus the reversal.
  std::vector<std::vector<std::size_t>> next(letters);
  std::vector<std::vector<std::size_t>> leaving(static_cast<std::size_t>(base.vertex_count()));
  for (std::size_t i = 0; i < letters; ++i) leaving[static_cast<std::size_t>(cover_->tail(letter(i)))].push_back(i);
  for (std::size_t i = 0; i < letters; ++i)
    for (auto j : leaving[static_cast<std::size_t>(cover_->head(letter(i)))])
      if (letter(j) != -letter(i)) next[i].push_back(j);

  // Every lift of a vertex sees the same tree of non-backtracking walks.
  const std::int64_t at = cover_->project(center);
  std::vector<std::vector<Integer>> f(T + 1, std::vector<Integer>(letters));
  for (auto j : leaving[static_cast<std::size_t>(at)])
    if (wlen[j] <= T) f[wlen[j]][j] += 1;
  std::vector<Mass> shell(T + 1);
  shell[0] = mass_[static_cast<std::size_t>(at)];
  for (std::size_t t = 1; t <= T; ++t)
    for (std::size_t i = 0; i < letters; ++i) {
      if (f[t][i] == 0) continue;
      shell[t] += Mass(f[t][i]) * mass_[static_cast<std::size_t>(cover_->head(letter(i)))];
      for (auto j : next[i])
        if (t + wlen[j] <= T) f[t + wlen[j]][j] += f[t][i];
    }
  std::vector<RadialShell> raw;
  for (std::size_t t = 0; t <= T; ++t)
    if (shell[t] > 0) raw.push_back({Length(Integer(t)) / Rational(scale_), shell[t]});
  return RadialProfile(center, R, make_shells(std::move(raw)));
}

MeasurePtr pullback_measure(const CoverData& cover, const Measure& base) {
  const auto& g = cover.space->base();
  if (&base.space() != static_cast<const Space*>(&g) && base.space().kind() != "graph")
    throw std::invalid_argument("the base measure must live on the cover's base graph");
  std::vector<Mass> masses;
  for (std::int64_t v = 0; v < g.vertex_count(); ++v) masses.push_back(base.ball_mass(VertexPoint{v}, 0, true));
  return std::make_shared<PullbackMeasure>(cover.space, std::move(masses));
}

BettiReport graph_betti(const WeightedGraph& graph) {
  BettiReport rep;
  const auto comps = graph.components();
  rep.connected = comps.size() <= 1;
  std::vector<std::int64_t> comp_of(static_cast<std::size_t>(graph.vertex_count()));
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (auto v : comps[c]) comp_of[static_cast<std::size_t>(v)] = static_cast<std::int64_t>(c);
  std::vector<std::int64_t> edges(comps.size(), 0);
  for (const auto& e : graph.edges()) ++edges[static_cast<std::size_t>(comp_of[static_cast<std::size_t>(e.u)])];
  for (std::size_t c = 0; c < comps.size(); ++c) {
    rep.per_component.push_back(edges[c] - static_cast<std::int64_t>(comps[c].size()) + 1);
    rep.total += rep.per_component.back();
  }
  return rep;
}

}  // namespace bgkit
