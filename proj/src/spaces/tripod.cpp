#include "bgkit/space.hpp"
#include "parse.hpp"

#include <stdexcept>

namespace bgkit {

TripodSpace::TripodSpace(Length alpha, Length beta, Length gamma) : len_{alpha, beta, gamma} {
  for (const auto& l : len_)
    if (l < 0) throw std::domain_error("tripod branch lengths must be nonnegative");
}

std::shared_ptr<TripodSpace> build_tripod(const Length& alpha, const Length& beta, const Length& gamma) {
  return std::make_shared<TripodSpace>(alpha, beta, gamma);
}

Point TripodSpace::endpoint(int i) const {
  if (i < 0 || i > 2) throw std::domain_error("tripod has branches 0, 1, 2");
  if (len_[i] == 0) return center();
  return BranchPoint{i, len_[i]};
}

bool TripodSpace::contains(const Point& p) const {
  auto b = std::get_if<BranchPoint>(&p);
  if (!b) return false;
  if (b->branch == 0 && b->offset == 0) return true;
  if (b->branch < 0 || b->branch > 2) return false;
  return b->offset > 0 && b->offset <= len_[b->branch];
}

Length TripodSpace::distance(const Point& a, const Point& b) const {
  require(a);
  require(b);
  const auto& pa = std::get<BranchPoint>(a);
  const auto& pb = std::get<BranchPoint>(b);
  if (pa.branch == pb.branch) return abs_of(pa.offset - pb.offset);
  return pa.offset + pb.offset;
}

std::vector<Point> TripodSpace::support() const {
  std::vector<Point> out{center()};
  for (int i = 0; i < 3; ++i) {
    Point e = endpoint(i);
    if (!(e == center())) out.push_back(e);
  }
  return out;
}

std::vector<BallEntry> TripodSpace::ball(const Point& center_pt, const Length& r, bool closed) const {
  require(center_pt);
  std::vector<BallEntry> out;
  for (const auto& p : support()) {
    Length d = distance(center_pt, p);
    if (d < r || (closed && d == r)) out.push_back({p, d});
  }
  sort_ball(out);
  return out;
}

Point TripodSpace::parse_point(std::string_view text) const {
  Point p;
  if (text == "x'" || text == "x")
    p = endpoint(0);
  else if (text == "y'" || text == "y")
    p = endpoint(1);
  else if (text == "z'" || text == "z")
    p = endpoint(2);
  else if (text == "c")
    p = center();
  else if (detail::starts_with(text, "b")) {
    auto at = text.find('@');
    if (at == std::string_view::npos) throw std::invalid_argument("branch point needs b<i>@<offset>");
    Length t = parse_rational(text.substr(at + 1));
    p = t == 0 ? center() : Point(BranchPoint{detail::parse_int(text.substr(1, at - 1)), t});
  } else {
    throw std::invalid_argument("unknown tripod point: " + std::string(text));
  }
  require(p);
  return p;
}

}  // namespace bgkit
