#include "bgkit/space.hpp"
#include "parse.hpp"

#include <stdexcept>

namespace bgkit {

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::vector<Rational>> matrix) : d_(std::move(matrix)) {
  if (d_.empty()) throw std::invalid_argument("finite metric needs at least one point");
  for (const auto& row : d_) {
    if (row.size() != d_.size()) throw std::invalid_argument("distance matrix is not square");
    for (const auto& x : row)
      if (x < 0) throw std::invalid_argument("distance matrix has a negative entry");
  }
}

bool FiniteMetricSpace::contains(const Point& p) const {
  auto v = std::get_if<VertexPoint>(&p);
  return v && v->index >= 0 && v->index < static_cast<std::int64_t>(d_.size());
}

Length FiniteMetricSpace::distance(const Point& a, const Point& b) const {
  require(a);
  require(b);
  return d_[static_cast<std::size_t>(std::get<VertexPoint>(a).index)]
           [static_cast<std::size_t>(std::get<VertexPoint>(b).index)];
}

std::vector<BallEntry> FiniteMetricSpace::ball(const Point& center, const Length& r, bool closed) const {
  require(center);
  std::vector<BallEntry> out;
  for (std::size_t j = 0; j < d_.size(); ++j) {
    Point p = VertexPoint{static_cast<std::int64_t>(j)};
    Length d = distance(center, p);
    if (d < r || (closed && d == r)) out.push_back({p, d});
  }
  sort_ball(out);
  return out;
}

std::vector<Point> FiniteMetricSpace::support() const {
  std::vector<Point> out;
  for (std::size_t j = 0; j < d_.size(); ++j) out.push_back(VertexPoint{static_cast<std::int64_t>(j)});
  return out;
}

Point FiniteMetricSpace::parse_point(std::string_view text) const {
  if (detail::starts_with(text, "v")) text.remove_prefix(1);
  Point p = VertexPoint{detail::parse_int(text)};
  require(p);
  return p;
}

Diagnostics FiniteMetricSpace::validate() const {
  Diagnostics diag;
  const std::size_t n = d_.size();
  auto name = [](std::size_t i) { return "v" + std::to_string(i); };
  for (std::size_t i = 0; i < n; ++i) {
    if (d_[i][i] != 0) diag.errors.push_back("nonzero diagonal at " + name(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d_[i][j] != d_[j][i]) diag.errors.push_back("asymmetric entry between " + name(i) + " and " + name(j));
      if (d_[i][j] == 0) diag.errors.push_back("distinct points " + name(i) + " and " + name(j) + " at distance 0");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (i < j && d_[i][j] > d_[i][k] + d_[k][j])
          diag.errors.push_back("triangle inequality fails: d(" + name(i) + "," + name(j) + ") = " +
                                to_string(d_[i][j]) + " > " + to_string(d_[i][k] + d_[k][j]) + " via " + name(k));
  return diag;
}

std::shared_ptr<FiniteMetricSpace> make_validated_metric(std::vector<std::vector<Rational>> matrix) {
  auto space = std::make_shared<FiniteMetricSpace>(std::move(matrix));
  auto diag = space->validate();
  if (!diag.ok()) throw std::domain_error("invalid metric: " + diag.errors.front());
  return space;
}

}  // namespace bgkit
