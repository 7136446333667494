#pragma once

#include "bgkit/group.hpp"
#include "bgkit/point.hpp"
#include "bgkit/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bgkit {

struct BallEntry {
  Point point;
  Length distance;
};

struct Diagnostics {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

class Space {
 public:
  virtual ~Space() = default;

  virtual std::string kind() const = 0;
  virtual bool contains(const Point& p) const = 0;
  virtual Length distance(const Point& a, const Point& b) const = 0;
  // Support points p with d(center,p) < r (open) or <= r (closed), sorted by
  // distance then point. Throws if the request exceeds safe_radius(center).
  virtual std::vector<BallEntry> ball(const Point& center, const Length& r, bool closed) const = 0;
  // Supremum of radii for which ball() around `center` is exhaustive, if bounded.
  virtual std::optional<Length> safe_radius(const Point&) const { return std::nullopt; }
  virtual bool is_finite() const = 0;
  virtual std::vector<Point> support() const;
  // Sphere sizes around `center` when the support is the vertex set of a
  // vertex-transitive unit-length graph (Cayley graphs).
  virtual std::optional<std::vector<Integer>> unit_sphere_sizes(const Point&, int) const { return std::nullopt; }
  // Support points adjacent to p (graph edges); used for connectivity of samples.
  virtual std::vector<Point> adjacent(const Point&) const { return {}; }
  virtual Point parse_point(std::string_view text) const = 0;
  virtual Diagnostics validate() const { return {}; }

  void require(const Point& p) const;
  // Throws a window error when a ball of radius r around `center` is not exhaustive.
  void require_window(const Point& center, const Length& r, bool closed) const;
};

using SpacePtr = std::shared_ptr<const Space>;

void sort_ball(std::vector<BallEntry>& entries);

// ---------------------------------------------------------------- finite metric

class FiniteMetricSpace final : public Space {
 public:
  // Shape and nonnegativity are enforced; symmetry and the triangle
  // inequality are reported by validate().
  explicit FiniteMetricSpace(std::vector<std::vector<Rational>> matrix);

  std::size_t size() const { return d_.size(); }
  const std::vector<std::vector<Rational>>& matrix() const { return d_; }

  std::string kind() const override { return "finite_metric"; }
  bool contains(const Point& p) const override;
  Length distance(const Point& a, const Point& b) const override;
  std::vector<BallEntry> ball(const Point& center, const Length& r, bool closed) const override;
  bool is_finite() const override { return true; }
  std::vector<Point> support() const override;
  Point parse_point(std::string_view text) const override;
  Diagnostics validate() const override;

 private:
  std::vector<std::vector<Rational>> d_;
};

// Throws std::domain_error when validate() reports any error.
std::shared_ptr<FiniteMetricSpace> make_validated_metric(std::vector<std::vector<Rational>> matrix);

// ---------------------------------------------------------------- weighted graph

struct GraphEdge {
  std::int64_t u = 0;
  std::int64_t v = 0;
  Length weight = 1;
};

// One step of a materialized path: traverse `edge` from `from` to `to`.
struct PathStep {
  std::int64_t from;
  std::int64_t edge;
  std::int64_t to;
};

// Finite graph with positive rational edge lengths, viewed as a metric graph:
// vertices form the support, interior edge points are admitted in distance queries.
// Loops and parallel edges are allowed.
class WeightedGraph final : public Space {
 public:
  WeightedGraph(std::int64_t vertices, std::vector<GraphEdge> edges);

  std::int64_t vertex_count() const { return n_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  // Incident (edge, other endpoint) pairs, sorted by other endpoint then edge id.
  const std::vector<std::pair<std::int64_t, std::int64_t>>& incident(std::int64_t v) const {
    return incident_[static_cast<std::size_t>(v)];
  }
  // Vertex distance; nullopt when disconnected.
  const std::optional<Length>& vertex_distance(std::int64_t a, std::int64_t b) const {
    return apsp_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  bool connected() const;
  std::vector<std::vector<std::int64_t>> components() const;
  Length diameter() const;
  // Lexicographically smallest shortest path by vertex index.
  std::vector<PathStep> geodesic(std::int64_t a, std::int64_t b) const;
  // Point at arclength s along a materialized path starting at `origin`.
  Point point_along(std::int64_t origin, const std::vector<PathStep>& path, const Length& s) const;
  // Canonical point at offset t from the first endpoint of edge e.
  Point edge_point(std::int64_t e, const Length& t) const;

  std::string kind() const override { return "graph"; }
  bool contains(const Point& p) const override;
  Length distance(const Point& a, const Point& b) const override;
  std::vector<BallEntry> ball(const Point& center, const Length& r, bool closed) const override;
  bool is_finite() const override { return true; }
  std::vector<Point> support() const override;
  std::vector<Point> adjacent(const Point& p) const override;
  Point parse_point(std::string_view text) const override;
  Diagnostics validate() const override;

 private:
  std::int64_t n_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> incident_;
  std::vector<std::vector<std::optional<Length>>> apsp_;
};

std::shared_ptr<WeightedGraph> make_path_graph(std::int64_t n, const Length& w = 1);
std::shared_ptr<WeightedGraph> make_cycle_graph(std::int64_t n, const Length& w = 1);
std::shared_ptr<WeightedGraph> make_complete_graph(std::int64_t n, const Length& w = 1);
// Vertex (x, y) has index y * width + x.
std::shared_ptr<WeightedGraph> make_grid_graph(std::int64_t width, std::int64_t height);

// ---------------------------------------------------------------- Cayley

// Cayley graph of a group with respect to its family's symmetrized standard
// generating set; every edge has length 1.
class CayleySpace final : public Space {
 public:
  explicit CayleySpace(GroupPtr group);
  const GroupPtr& group() const { return group_; }

  std::string kind() const override { return "cayley"; }
  bool contains(const Point& p) const override;
  Length distance(const Point& a, const Point& b) const override;
  std::vector<BallEntry> ball(const Point& center, const Length& r, bool closed) const override;
  bool is_finite() const override { return group_->order().has_value(); }
  std::vector<Point> support() const override;
  std::optional<std::vector<Integer>> unit_sphere_sizes(const Point& center, int n_max) const override;
  std::vector<Point> adjacent(const Point& p) const override;
  Point parse_point(std::string_view text) const override;

 private:
  GroupPtr group_;
  std::vector<GroupElement> steps_;
};

// ---------------------------------------------------------------- glued line

// The real line with a hair of length `hair` glued at every multiple of eps.
// Distances follow the infinite model; the support (base points eps*k and hair
// tips) is enumerable for |k| <= window.
class GluedLineSpace final : public Space {
 public:
  GluedLineSpace(Length eps, Length hair, std::int64_t window);

  const Length& eps() const { return eps_; }
  const Length& hair() const { return hair_; }
  std::int64_t window() const { return window_; }
  Point tip(std::int64_t k) const { return BranchPoint{k, hair_}; }
  Point base(std::int64_t k) const { return LinePoint{eps_ * k}; }
  // Translate a point by `shift` hairs.
  Point translate(const Point& p, std::int64_t shift) const;

  std::string kind() const override { return "glued_line"; }
  bool contains(const Point& p) const override;
  Length distance(const Point& a, const Point& b) const override;
  std::vector<BallEntry> ball(const Point& center, const Length& r, bool closed) const override;
  std::optional<Length> safe_radius(const Point& center) const override;
  bool is_finite() const override { return false; }
  std::vector<Point> support() const override;
  std::vector<Point> adjacent(const Point& p) const override;
  Point parse_point(std::string_view text) const override;

 private:
  Length eps_;
  Length hair_;
  std::int64_t window_;
};

std::shared_ptr<GluedLineSpace> build_glued_line(const Length& eps, const Length& hair, std::int64_t window);

// ---------------------------------------------------------------- tripod

// Tree with center c and endpoints x', y', z' at distances alpha, beta, gamma.
// Branch i in {0,1,2}; the center is BranchPoint{0, 0}.
class TripodSpace final : public Space {
 public:
  TripodSpace(Length alpha, Length beta, Length gamma);

  const Length& branch_length(int i) const { return len_[static_cast<std::size_t>(i)]; }
  Point endpoint(int i) const;
  Point center() const { return BranchPoint{0, 0}; }

  std::string kind() const override { return "tripod"; }
  bool contains(const Point& p) const override;
  Length distance(const Point& a, const Point& b) const override;
  std::vector<BallEntry> ball(const Point& center, const Length& r, bool closed) const override;
  bool is_finite() const override { return true; }
  std::vector<Point> support() const override;
  Point parse_point(std::string_view text) const override;

 private:
  Length len_[3];
};

std::shared_ptr<TripodSpace> build_tripod(const Length& alpha, const Length& beta, const Length& gamma);

}  // namespace bgkit
