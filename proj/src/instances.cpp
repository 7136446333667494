#include "bgkit/instances.hpp"

#include <stdexcept>

namespace bgkit {

namespace {

Json group(const std::string& family, int rank) { return {{"family", family}, {"params", {{"rank", rank}}}}; }

Json cayley(const Json& g, const std::string& rule) {
  return {{"kind", "cayley"}, {"group", g}, {"action", {{"group", g}, {"action", rule}}}};
}

std::int64_t positive_int(const std::string& s, const std::string& name) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < 1) throw std::invalid_argument("instance " + name + " needs a positive integer");
  return v;
}

}  // namespace

Json instance_document(const std::string& name) {
  const auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);
  if (name == "z1") return cayley(group("free_abelian", 1), "left_translation");
  if (name == "z2") return cayley(group("free_abelian", 2), "left_translation");
  if (name == "f2") return cayley(group("free", 2), "left_translation");
  if (head == "line" || head == "torus") {
    const int rank = head == "line" ? 1 : 2;
    auto doc = cayley(group("free_abelian", rank), "lattice_translation");
    doc["action"]["scale"] = positive_int(arg, name);
    return doc;
  }
  if (name == "exemplebis") return instance_document("glued_line:1/10:1/2");
  if (head == "glued_line") {
    const auto sep = arg.find(':');
    if (sep == std::string::npos) throw std::invalid_argument("glued_line instances read glued_line:<eps>:<hair>");
    const Rational eps = parse_rational(arg.substr(0, sep));
    const Rational hair = parse_rational(arg.substr(sep + 1));
    // Enough hairs for balls of radius 30 around tip 0.
    const auto window = static_cast<std::int64_t>(floor_of(Rational(30) / eps)) + 2;
    return {{"kind", "glued_line"},
            {"eps", to_string(eps)},
            {"hair", to_string(hair)},
            {"window", window},
            {"action", {{"group", group("free_abelian", 1)}, {"action", "lattice_translation"}, {"scale", 1}}}};
  }
  if (head == "cycle")
    return {{"kind", "graph"},
            {"generator", {{"family", "cycle"}, {"n", positive_int(arg, name)}}},
            {"action", {{"action", "deck"}}}};
  if (name == "figure_eight")
    return {{"kind", "graph"}, {"vertices", 1}, {"edges", {{0, 0}, {0, 0}}}, {"action", {{"action", "deck"}}}};
  if (name == "tripod") return {{"kind", "tripod"}, {"alpha", 1}, {"beta", 2}, {"gamma", 3}};
  throw std::invalid_argument("unknown instance \"" + name + "\"");
}

std::optional<Length> declared_delta(const std::string& name) {
  const std::string head = name.substr(0, name.find(':'));
  // Trees and trees with hairs; the plane lattices are not hyperbolic.
  if (head == "z2" || head == "torus") return std::nullopt;
  instance_document(name);
  return Length(0);
}

std::vector<std::string> instance_names() {
  return {"z1", "z2", "f2", "line:<m>", "torus:<m>", "glued_line:<eps>:<hair>", "exemplebis",
          "cycle:<n>", "figure_eight", "tripod"};
}

Point default_center(const Space& space) {
  const auto kind = space.kind();
  if (kind == "cayley") return space.parse_point("e");
  if (kind == "glued_line") return space.parse_point("tip:0");
  if (kind == "tripod") return space.parse_point("c");
  if (kind == "cover_tree") return space.parse_point("root");
  return VertexPoint{0};
}

}  // namespace bgkit
