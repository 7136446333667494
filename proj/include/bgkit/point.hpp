#pragma once

#include "bgkit/rational.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

namespace bgkit {

// Vertex of a graph or finite metric space.
struct VertexPoint {
  std::int64_t index = 0;
  friend bool operator==(const VertexPoint&, const VertexPoint&) = default;
  friend bool operator<(const VertexPoint& a, const VertexPoint& b) { return a.index < b.index; }
};

// Interior point of a graph edge, `offset` measured from the edge's first endpoint.
struct EdgePoint {
  std::int64_t edge = 0;
  Rational offset;
  friend bool operator==(const EdgePoint& a, const EdgePoint& b) { return a.edge == b.edge && a.offset == b.offset; }
  friend bool operator<(const EdgePoint& a, const EdgePoint& b) {
    if (a.edge != b.edge) return a.edge < b.edge;
    return a.offset < b.offset;
  }
};

// Canonical normal form of a group element, or a reduced edge path in a cover tree.
struct WordPoint {
  std::vector<std::int64_t> word;
  friend bool operator==(const WordPoint&, const WordPoint&) = default;
  friend bool operator<(const WordPoint& a, const WordPoint& b) {
    if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
    return a.word < b.word;
  }
};

// Point on a branch: hair k of a glued line, or branch 0..2 of a tripod.
struct BranchPoint {
  std::int64_t branch = 0;
  Rational offset;
  friend bool operator==(const BranchPoint& a, const BranchPoint& b) {
    return a.branch == b.branch && a.offset == b.offset;
  }
  friend bool operator<(const BranchPoint& a, const BranchPoint& b) {
    if (a.branch != b.branch) return a.branch < b.branch;
    return a.offset < b.offset;
  }
};

// Point on the base line of a glued line.
struct LinePoint {
  Rational position;
  friend bool operator==(const LinePoint& a, const LinePoint& b) { return a.position == b.position; }
  friend bool operator<(const LinePoint& a, const LinePoint& b) { return a.position < b.position; }
};

using Point = std::variant<VertexPoint, EdgePoint, WordPoint, BranchPoint, LinePoint>;

std::string to_string(const Point& p);

struct PointHash {
  std::size_t operator()(const Point& p) const;
};

inline Point vertex(std::int64_t i) { return VertexPoint{i}; }
inline Point word(std::vector<std::int64_t> w) { return WordPoint{std::move(w)}; }

}  // namespace bgkit
