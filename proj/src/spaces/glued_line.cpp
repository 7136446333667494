#include "bgkit/space.hpp"
#include "parse.hpp"

#include <algorithm>
#include <stdexcept>

namespace bgkit {

GluedLineSpace::GluedLineSpace(Length eps, Length hair, std::int64_t window)
    : eps_(std::move(eps)), hair_(std::move(hair)), window_(window) {
  if (eps_ <= 0) throw std::domain_error("glued line: eps must be positive");
  if (hair_ <= 0) throw std::domain_error("glued line: hair length must be positive");
  if (window_ < 1) throw std::domain_error("glued line: window must be at least 1");
}

std::shared_ptr<GluedLineSpace> build_glued_line(const Length& eps, const Length& hair, std::int64_t window) {
  return std::make_shared<GluedLineSpace>(eps, hair, window);
}

bool GluedLineSpace::contains(const Point& p) const {
  if (std::holds_alternative<LinePoint>(p)) return true;
  if (auto b = std::get_if<BranchPoint>(&p)) return b->offset > 0 && b->offset <= hair_;
  return false;
}

Length GluedLineSpace::distance(const Point& a, const Point& b) const {
  require(a);
  require(b);
  // Each point is (foot on the line, height above the foot, hair index or none).
  auto la = std::get_if<LinePoint>(&a), lb = std::get_if<LinePoint>(&b);
  if (la && lb) return abs_of(la->position - lb->position);
  if (la || lb) {
    const auto& line = la ? *la : *lb;
    const auto& h = la ? std::get<BranchPoint>(b) : std::get<BranchPoint>(a);
    return abs_of(line.position - eps_ * h.branch) + h.offset;
  }
  const auto& ha = std::get<BranchPoint>(a);
  const auto& hb = std::get<BranchPoint>(b);
  if (ha.branch == hb.branch) return abs_of(ha.offset - hb.offset);
  return ha.offset + hb.offset + eps_ * (ha.branch > hb.branch ? ha.branch - hb.branch : hb.branch - ha.branch);
}

Point GluedLineSpace::translate(const Point& p, std::int64_t shift) const {
  if (auto l = std::get_if<LinePoint>(&p)) return LinePoint{l->position + eps_ * shift};
  const auto& h = std::get<BranchPoint>(p);
  return BranchPoint{h.branch + shift, h.offset};
}

std::optional<Length> GluedLineSpace::safe_radius(const Point& center) const {
  require(center);
  Length foot = std::holds_alternative<LinePoint>(center) ? std::get<LinePoint>(center).position
                                                          : eps_ * std::get<BranchPoint>(center).branch;
  Length edge = eps_ * window_;
  if (foot < -edge || foot > edge) return Length(0);
  Length best = -1;
  for (std::int64_t k : {window_ + 1, -(window_ + 1)})
    for (const Point& q : {base(k), tip(k)}) {
      Length d = distance(center, q);
      if (best < 0 || d < best) best = d;
    }
  return best;
}

std::vector<Point> GluedLineSpace::support() const {
  std::vector<Point> out;
  for (std::int64_t k = -window_; k <= window_; ++k) {
    out.push_back(base(k));
    out.push_back(tip(k));
  }
  return out;
}

std::vector<BallEntry> GluedLineSpace::ball(const Point& center, const Length& r, bool closed) const {
  require_window(center, r, closed);
  std::vector<BallEntry> out;
  for (const auto& p : support()) {
    Length d = distance(center, p);
    if (d < r || (closed && d == r)) out.push_back({p, d});
  }
  sort_ball(out);
  return out;
}

std::vector<Point> GluedLineSpace::adjacent(const Point& p) const {
  require(p);
  std::vector<Point> out;
  if (auto h = std::get_if<BranchPoint>(&p)) {
    if (h->offset == hair_) out.push_back(base(h->branch));
    return out;
  }
  const auto& l = std::get<LinePoint>(p);
  Rational k = l.position / eps_;
  if (denominator(k) != 1) return out;
  auto idx = numerator(k).convert_to<std::int64_t>();
  out.push_back(base(idx - 1));
  out.push_back(tip(idx));
  out.push_back(base(idx + 1));
  return out;
}

Point GluedLineSpace::parse_point(std::string_view text) const {
  using detail::parse_int;
  using detail::starts_with;
  Point p;
  if (starts_with(text, "tip:")) {
    p = tip(parse_int(text.substr(4)));
  } else if (starts_with(text, "base:")) {
    p = base(parse_int(text.substr(5)));
  } else if (starts_with(text, "hair:")) {
    auto at = text.find('@');
    if (at == std::string_view::npos) throw std::invalid_argument("hair point needs hair:<k>@<height>");
    Length t = parse_rational(text.substr(at + 1));
    std::int64_t k = parse_int(text.substr(5, at - 5));
    p = t == 0 ? base(k) : Point(BranchPoint{k, t});
  } else if (starts_with(text, "line:")) {
    p = LinePoint{parse_rational(text.substr(5))};
  } else if (starts_with(text, "l")) {
    p = LinePoint{parse_rational(text.substr(1))};
  } else if (starts_with(text, "b")) {
    auto at = text.find('@');
    if (at == std::string_view::npos) throw std::invalid_argument("branch point needs b<k>@<height>");
    p = BranchPoint{parse_int(text.substr(1, at - 1)), parse_rational(text.substr(at + 1))};
  } else {
    throw std::invalid_argument("unknown glued-line point: " + std::string(text));
  }
  require(p);
  return p;
}

}  // namespace bgkit
