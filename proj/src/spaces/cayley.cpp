#include "bgkit/space.hpp"
#include "parse.hpp"

#include <unordered_set>

namespace bgkit {

CayleySpace::CayleySpace(GroupPtr group) : group_(std::move(group)), steps_(group_->symmetric_generators()) {}

bool CayleySpace::contains(const Point& p) const {
  auto w = std::get_if<WordPoint>(&p);
  return w && group_->contains(w->word);
}

Length CayleySpace::distance(const Point& a, const Point& b) const {
  require(a);
  require(b);
  const auto& g = std::get<WordPoint>(a).word;
  const auto& h = std::get<WordPoint>(b).word;
  return Length(group_->word_length(group_->multiply(group_->inverse(g), h)));
}

std::vector<BallEntry> CayleySpace::ball(const Point& center, const Length& r, bool closed) const {
  require(center);
  Integer limit = closed ? floor_of(r) : Integer(ceil_of(r) - 1);
  std::vector<BallEntry> out;
  if (limit < 0) return out;
  const auto depth = limit.convert_to<std::int64_t>();
  const auto& c = std::get<WordPoint>(center).word;
  std::unordered_set<GroupElement, ElementHash> seen{c};
  std::vector<std::pair<GroupElement, std::int64_t>> frontier{{c, 0}};
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    auto [g, d] = frontier[head];
    out.push_back({WordPoint{g}, Length(d)});
    if (d == depth) continue;
    for (const auto& s : steps_) {
      auto next = group_->multiply(g, s);
      if (seen.insert(next).second) frontier.push_back({std::move(next), d + 1});
    }
  }
  sort_ball(out);
  return out;
}

std::vector<Point> CayleySpace::support() const {
  auto n = group_->order();
  if (!n) return Space::support();
  std::vector<Point> out;
  for (const auto& e : ball(WordPoint{group_->identity()}, Length(static_cast<long long>(*n)), true))
    out.push_back(e.point);
  return out;
}

std::optional<std::vector<Integer>> CayleySpace::unit_sphere_sizes(const Point& center, int n_max) const {
  require(center);
  return group_->sphere_sizes(n_max);
}

std::vector<Point> CayleySpace::adjacent(const Point& p) const {
  require(p);
  std::vector<Point> out;
  for (const auto& s : steps_) out.push_back(WordPoint{group_->multiply(std::get<WordPoint>(p).word, s)});
  return out;
}

Point CayleySpace::parse_point(std::string_view text) const {
  Point p;
  if (text == "e" || text == "id")
    p = WordPoint{group_->identity()};
  else {
    if (detail::starts_with(text, "w")) text.remove_prefix(1);
    p = WordPoint{detail::parse_int_list(text)};
  }
  require(p);
  return p;
}

}  // namespace bgkit
