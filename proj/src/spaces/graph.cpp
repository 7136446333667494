#include "bgkit/space.hpp"
#include "parse.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace bgkit {

namespace {

struct Anchor {
  std::int64_t vertex;
  Length cost;
};

}  // namespace

WeightedGraph::WeightedGraph(std::int64_t vertices, std::vector<GraphEdge> edges)
    : n_(vertices), edges_(std::move(edges)) {
  if (n_ < 1) throw std::invalid_argument("graph needs at least one vertex");
  incident_.resize(static_cast<std::size_t>(n_));
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& ed = edges_[e];
    if (ed.u < 0 || ed.u >= n_ || ed.v < 0 || ed.v >= n_)
      throw std::invalid_argument("edge " + std::to_string(e) + " has an endpoint outside the vertex range");
    if (ed.weight <= 0) throw std::invalid_argument("edge " + std::to_string(e) + " has nonpositive weight");
    auto id = static_cast<std::int64_t>(e);
    incident_[static_cast<std::size_t>(ed.u)].push_back({id, ed.v});
    if (ed.u != ed.v) incident_[static_cast<std::size_t>(ed.v)].push_back({id, ed.u});
  }
  for (auto& inc : incident_)
    std::sort(inc.begin(), inc.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second < b.second;
      return a.first < b.first;
    });

  // All-pairs shortest paths by Dijkstra from every vertex, exact rationals.
  apsp_.assign(static_cast<std::size_t>(n_), std::vector<std::optional<Length>>(static_cast<std::size_t>(n_)));
  for (std::int64_t s = 0; s < n_; ++s) {
    auto& dist = apsp_[static_cast<std::size_t>(s)];
    using Item = std::pair<Length, std::int64_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[static_cast<std::size_t>(s)] = Length(0);
    pq.push({Length(0), s});
    std::vector<bool> done(static_cast<std::size_t>(n_), false);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (done[static_cast<std::size_t>(u)]) continue;
      done[static_cast<std::size_t>(u)] = true;
      for (const auto& [e, w] : incident_[static_cast<std::size_t>(u)]) {
        Length nd = d + edges_[static_cast<std::size_t>(e)].weight;
        auto& cur = dist[static_cast<std::size_t>(w)];
        if (!cur || nd < *cur) {
          cur = nd;
          pq.push({nd, w});
        }
      }
    }
  }
}

bool WeightedGraph::connected() const {
  for (const auto& d : apsp_[0])
    if (!d) return false;
  return true;
}

std::vector<std::vector<std::int64_t>> WeightedGraph::components() const {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<bool> seen(static_cast<std::size_t>(n_), false);
  for (std::int64_t v = 0; v < n_; ++v) {
    if (seen[static_cast<std::size_t>(v)]) continue;
    std::vector<std::int64_t> comp;
    for (std::int64_t w = 0; w < n_; ++w)
      if (apsp_[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)]) {
        comp.push_back(w);
        seen[static_cast<std::size_t>(w)] = true;
      }
    out.push_back(std::move(comp));
  }
  return out;
}

Length WeightedGraph::diameter() const {
  if (!connected()) throw std::domain_error("diameter of a disconnected graph");
  Length best = 0;
  for (const auto& row : apsp_)
    for (const auto& d : row) best = std::max(best, *d);
  return best;
}

bool WeightedGraph::contains(const Point& p) const {
  if (auto v = std::get_if<VertexPoint>(&p)) return v->index >= 0 && v->index < n_;
  if (auto e = std::get_if<EdgePoint>(&p)) {
    if (e->edge < 0 || e->edge >= static_cast<std::int64_t>(edges_.size())) return false;
    return e->offset > 0 && e->offset < edges_[static_cast<std::size_t>(e->edge)].weight;
  }
  return false;
}

Point WeightedGraph::edge_point(std::int64_t e, const Length& t) const {
  const auto& ed = edges_.at(static_cast<std::size_t>(e));
  if (t < 0 || t > ed.weight) throw std::domain_error("edge offset outside [0, weight]");
  if (t == 0) return VertexPoint{ed.u};
  if (t == ed.weight) return VertexPoint{ed.v};
  return EdgePoint{e, t};
}

Length WeightedGraph::distance(const Point& a, const Point& b) const {
  require(a);
  require(b);
  auto anchors = [this](const Point& p) {
    std::vector<Anchor> out;
    if (auto v = std::get_if<VertexPoint>(&p)) {
      out.push_back({v->index, Length(0)});
    } else {
      const auto& ep = std::get<EdgePoint>(p);
      const auto& ed = edges_[static_cast<std::size_t>(ep.edge)];
      out.push_back({ed.u, ep.offset});
      out.push_back({ed.v, ed.weight - ep.offset});
    }
    return out;
  };
  std::optional<Length> best;
  auto ea = std::get_if<EdgePoint>(&a);
  auto eb = std::get_if<EdgePoint>(&b);
  if (ea && eb && ea->edge == eb->edge) best = abs_of(ea->offset - eb->offset);
  for (const auto& x : anchors(a))
    for (const auto& y : anchors(b)) {
      const auto& d = apsp_[static_cast<std::size_t>(x.vertex)][static_cast<std::size_t>(y.vertex)];
      if (!d) continue;
      Length total = x.cost + *d + y.cost;
      if (!best || total < *best) best = total;
    }
  if (!best) throw std::domain_error("points " + to_string(a) + " and " + to_string(b) + " are in different components");
  return *best;
}

std::vector<BallEntry> WeightedGraph::ball(const Point& center, const Length& r, bool closed) const {
  require(center);
  std::vector<BallEntry> out;
  for (std::int64_t v = 0; v < n_; ++v) {
    Point p = VertexPoint{v};
    Length d;
    try {
      d = distance(center, p);
    } catch (const std::domain_error&) {
      continue;  // other component
    }
    if (d < r || (closed && d == r)) out.push_back({p, d});
  }
  sort_ball(out);
  return out;
}

std::vector<Point> WeightedGraph::support() const {
  std::vector<Point> out;
  for (std::int64_t v = 0; v < n_; ++v) out.push_back(VertexPoint{v});
  return out;
}

std::vector<Point> WeightedGraph::adjacent(const Point& p) const {
  std::vector<Point> out;
  if (auto v = std::get_if<VertexPoint>(&p)) {
    for (const auto& [e, w] : incident(v->index))
      if (w != v->index && (out.empty() || !(out.back() == Point(VertexPoint{w})))) out.push_back(VertexPoint{w});
  }
  return out;
}

std::vector<PathStep> WeightedGraph::geodesic(std::int64_t a, std::int64_t b) const {
  const auto& total = vertex_distance(a, b);
  if (!total) throw std::domain_error("no geodesic: vertices " + std::to_string(a) + " and " + std::to_string(b) +
                                      " are disconnected");
  std::vector<PathStep> path;
  std::int64_t cur = a;
  while (cur != b) {
    const Length& remaining = *vertex_distance(cur, b);
    bool stepped = false;
    for (const auto& [e, w] : incident(cur)) {
      if (w == cur) continue;
      const auto& rest = vertex_distance(w, b);
      if (rest && edges_[static_cast<std::size_t>(e)].weight + *rest == remaining) {
        path.push_back({cur, e, w});
        cur = w;
        stepped = true;
        break;
      }
    }
    if (!stepped) throw std::logic_error("geodesic reconstruction failed");
  }
  return path;
}

Point WeightedGraph::point_along(std::int64_t origin, const std::vector<PathStep>& path, const Length& s) const {
  if (s < 0) throw std::domain_error("negative arclength");
  Length walked = 0;
  if (s == 0) return VertexPoint{origin};
  for (const auto& step : path) {
    const auto& ed = edges_[static_cast<std::size_t>(step.edge)];
    Length next = walked + ed.weight;
    if (s <= next) {
      Length into = s - walked;
      Length offset = (step.from == ed.u) ? into : ed.weight - into;
      return edge_point(step.edge, offset);
    }
    walked = next;
  }
  throw std::domain_error("arclength beyond the end of the path");
}

Point WeightedGraph::parse_point(std::string_view text) const {
  Point p;
  if (detail::starts_with(text, "e")) {
    auto at = text.find('@');
    if (at == std::string_view::npos) throw std::invalid_argument("edge point needs e<edge>@<offset>");
    p = edge_point(detail::parse_int(text.substr(1, at - 1)), parse_rational(text.substr(at + 1)));
  } else {
    if (detail::starts_with(text, "v")) text.remove_prefix(1);
    p = VertexPoint{detail::parse_int(text)};
  }
  require(p);
  return p;
}

Diagnostics WeightedGraph::validate() const {
  Diagnostics diag;
  auto comps = components();
  if (comps.size() > 1)
    diag.warnings.push_back("graph is disconnected (" + std::to_string(comps.size()) + " components)");
  return diag;
}

std::shared_ptr<WeightedGraph> make_path_graph(std::int64_t n, const Length& w) {
  std::vector<GraphEdge> edges;
  for (std::int64_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, w});
  return std::make_shared<WeightedGraph>(n, std::move(edges));
}

std::shared_ptr<WeightedGraph> make_cycle_graph(std::int64_t n, const Length& w) {
  std::vector<GraphEdge> edges;
  for (std::int64_t i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, w});
  return std::make_shared<WeightedGraph>(n, std::move(edges));
}

std::shared_ptr<WeightedGraph> make_complete_graph(std::int64_t n, const Length& w) {
  std::vector<GraphEdge> edges;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = i + 1; j < n; ++j) edges.push_back({i, j, w});
  return std::make_shared<WeightedGraph>(n, std::move(edges));
}

std::shared_ptr<WeightedGraph> make_grid_graph(std::int64_t width, std::int64_t height) {
  std::vector<GraphEdge> edges;
  for (std::int64_t y = 0; y < height; ++y)
    for (std::int64_t x = 0; x < width; ++x) {
      std::int64_t v = y * width + x;
      if (x + 1 < width) edges.push_back({v, v + 1, 1});
      if (y + 1 < height) edges.push_back({v, v + width, 1});
    }
  return std::make_shared<WeightedGraph>(width * height, std::move(edges));
}

}  // namespace bgkit
