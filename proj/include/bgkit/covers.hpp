#pragma once

#include "bgkit/action.hpp"
#include "bgkit/measure.hpp"

#include <memory>
#include <vector>

namespace bgkit {

// Universal cover of a connected weighted graph: points are reduced edge paths
// from the basepoint, written as WordPoints of directed letters (+(e+1) runs
// edge e from u to v, -(e+1) from v to u).
class CoverTreeSpace final : public Space {
 public:
  CoverTreeSpace(std::shared_ptr<const WeightedGraph> base, std::int64_t basepoint,
                 std::size_t enumeration_cap = 5'000'000);

  const WeightedGraph& base() const { return *base_; }
  const std::shared_ptr<const WeightedGraph>& base_ptr() const { return base_; }
  std::int64_t basepoint() const { return basepoint_; }
  // Non-tree edges of the breadth-first spanning tree, in edge-id order.
  const std::vector<std::int64_t>& cycle_edges() const { return cycle_edges_; }
  std::int64_t betti() const { return static_cast<std::int64_t>(cycle_edges_.size()); }
  const std::vector<bool>& tree_edge() const { return in_tree_; }

  std::int64_t tail(std::int64_t letter) const;
  std::int64_t head(std::int64_t letter) const;
  const Length& weight(std::int64_t letter) const;
  // End vertex of a path in the base graph.
  std::int64_t project(const Point& p) const;
  // Freely reduce a walk that starts at the basepoint.
  GroupElement reduce(GroupElement path) const;
  // Tree path from the basepoint to v.
  GroupElement tree_path(std::int64_t v) const;
  // Reduced loop at the basepoint for a deck element (a reduced word in free(b1)).
  GroupElement loop(const GroupElement& deck) const;
  Length path_length(const GroupElement& path) const;

  std::string kind() const override { return "cover_tree"; }
  bool contains(const Point& p) const override;
  Length distance(const Point& a, const Point& b) const override;
  std::vector<BallEntry> ball(const Point& center, const Length& r, bool closed) const override;
  bool is_finite() const override { return false; }
  std::vector<Point> adjacent(const Point& p) const override;
  Point parse_point(std::string_view text) const override;

 private:
  std::shared_ptr<const WeightedGraph> base_;
  std::int64_t basepoint_;
  std::size_t cap_;
  std::vector<bool> in_tree_;
  std::vector<std::int64_t> parent_letter_;  // letter entering v along the tree, 0 at the root
  std::vector<std::int64_t> cycle_edges_;
};

// free(b1) acting on the cover by prepending loops.
class DeckAction final : public GroupAction {
 public:
  explicit DeckAction(std::shared_ptr<const CoverTreeSpace> cover);
  std::string rule() const override { return "deck"; }
  Point apply(const GroupElement& g, const Point& p) const override;
  Length exploration_slack(const Point& x) const override;
  const CoverTreeSpace& cover() const { return *cover_; }

 private:
  std::shared_ptr<const CoverTreeSpace> cover_;
  Length max_loop_ = 0;
};

struct CoverData {
  std::shared_ptr<const CoverTreeSpace> space;
  std::shared_ptr<const DeckAction> deck;
  std::int64_t betti = 0;
};

CoverData universal_cover(std::shared_ptr<const WeightedGraph> graph, std::int64_t basepoint = 0);

// Mass of a lift equals the mass of its projection. Ball profiles count
// non-backtracking walks by dynamic programming over integer-scaled lengths.
class PullbackMeasure final : public Measure {
 public:
  PullbackMeasure(std::shared_ptr<const CoverTreeSpace> cover, std::vector<Mass> vertex_mass);
  std::string kind() const override { return "pullback"; }
  const Space& space() const override { return *cover_; }
  RadialProfile profile(const Point& center, const Length& R) const override;
  const std::vector<Mass>& vertex_mass() const { return mass_; }

 private:
  std::shared_ptr<const CoverTreeSpace> cover_;
  std::vector<Mass> mass_;
  Integer scale_ = 1;  // common denominator of edge weights
};

// Base measure must live on the base graph's vertices.
MeasurePtr pullback_measure(const CoverData& cover, const Measure& base);

struct BettiReport {
  bool connected = true;
  std::int64_t total = 0;                 // E - V + #components
  std::vector<std::int64_t> per_component;
};
BettiReport graph_betti(const WeightedGraph& graph);

}  // namespace bgkit
