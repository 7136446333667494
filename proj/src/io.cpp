#include "bgkit/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>

namespace bgkit {

namespace {

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path, "missing field \"" + key + "\"");
  return *it;
}

std::string string_field(const Json& j, const std::string& key, const std::string& path) {
  const auto& v = field(j, key, path);
  if (!v.is_string()) throw SchemaError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

const Json& array_field(const Json& j, const std::string& key, const std::string& path) {
  const auto& v = field(j, key, path);
  if (!v.is_array()) throw SchemaError(path + "." + key, "expected an array");
  return v;
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

// Rethrow library argument errors with the document location attached.
template <class F>
auto located(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, e.what());
  } catch (const std::domain_error& e) {
    throw SchemaError(path, e.what());
  } catch (const std::out_of_range& e) {
    throw SchemaError(path, e.what());
  }
}

Point point_from_json(const Json& j, const Space& space, const std::string& path) {
  if (j.is_number_integer()) return located(path, [&] { return space.parse_point(std::to_string(j.get<std::int64_t>())); });
  if (!j.is_string()) throw SchemaError(path, "expected a point literal");
  return located(path, [&] { return space.parse_point(j.get<std::string>()); });
}

GroupElement element_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an integer array");
  GroupElement g;
  for (std::size_t i = 0; i < j.size(); ++i) g.push_back(integer_from_json(j[i], at(path, i)));
  return g;
}

}  // namespace

Rational rational_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number()) throw SchemaError(path, "floating-point numbers are not accepted; write \"p/q\"");
  if (!j.is_string()) throw SchemaError(path, "expected a rational \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    throw SchemaError(path, e.what());
  }
}

std::int64_t integer_from_json(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<std::int64_t>();
}

Json to_json(const Rational& q) { return to_string(q); }
Json to_json(const Point& p) { return to_string(p); }

// ---------------------------------------------------------------- groups and spaces

GroupPtr parse_group(const Json& j, const std::string& path) {
  const auto family = string_field(j, "family", path);
  const Json params = j.contains("params") ? j["params"] : Json::object();
  const std::string pp = path + ".params";
  auto rank = [&]() -> int {
    const auto r = integer_from_json(field(params, "rank", pp), pp + ".rank");
    if (r < 0 || r > 64) throw SchemaError(pp + ".rank", "rank must lie in [0, 64]");
    return static_cast<int>(r);
  };
  if (family == "free") return std::make_shared<FreeGroup>(rank());
  if (family == "free_abelian") return std::make_shared<FreeAbelianGroup>(rank());
  if (family == "trivial") return std::make_shared<FreeAbelianGroup>(0);
  if (family == "finite_permutation") {
    const auto degree = integer_from_json(field(params, "degree", pp), pp + ".degree");
    const auto& gens = array_field(params, "generators", pp);
    std::vector<GroupElement> g;
    for (std::size_t i = 0; i < gens.size(); ++i) g.push_back(element_from_json(gens[i], at(pp + ".generators", i)));
    return located(pp, [&] { return std::make_shared<PermutationGroup>(static_cast<int>(degree), g); });
  }
  if (family == "product") {
    const auto& fs = array_field(params, "factors", pp);
    std::vector<GroupPtr> factors;
    for (std::size_t i = 0; i < fs.size(); ++i) factors.push_back(parse_group(fs[i], at(pp + ".factors", i)));
    return located(pp, [&] { return std::make_shared<ProductGroup>(std::move(factors)); });
  }
  throw SchemaError(path + ".family", "unknown group family \"" + family + "\"");
}

namespace {

std::shared_ptr<WeightedGraph> parse_graph(const Json& j, const std::string& path) {
  if (j.contains("generator")) {
    const auto& g = j["generator"];
    const std::string gp = path + ".generator";
    const auto family = string_field(g, "family", gp);
    auto count = [&](const char* key) {
      const auto n = integer_from_json(field(g, key, gp), gp + "." + key);
      if (n < 1 || n > 100000) throw SchemaError(gp + "." + key, "must lie in [1, 100000]");
      return n;
    };
    const Length w = g.contains("weight") ? rational_from_json(g["weight"], gp + ".weight") : Length(1);
    return located(gp, [&]() -> std::shared_ptr<WeightedGraph> {
      if (family == "path") return make_path_graph(count("n"), w);
      if (family == "cycle") return make_cycle_graph(count("n"), w);
      if (family == "complete") return make_complete_graph(count("n"), w);
      if (family == "grid") return make_grid_graph(count("width"), count("height"));
      throw SchemaError(gp + ".family", "unknown graph generator \"" + family + "\"");
    });
  }
  const auto n = integer_from_json(field(j, "vertices", path), path + ".vertices");
  if (n < 1) throw SchemaError(path + ".vertices", "a graph needs at least one vertex");
  const auto& es = array_field(j, "edges", path);
  std::vector<GraphEdge> edges;
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string ep = at(path + ".edges", i);
    const auto& e = es[i];
    if (!e.is_array() || e.size() < 2 || e.size() > 3) throw SchemaError(ep, "expected [u, v] or [u, v, weight]");
    GraphEdge ge{integer_from_json(e[0], ep + "[0]"), integer_from_json(e[1], ep + "[1]"), 1};
    if (e.size() == 3) ge.weight = rational_from_json(e[2], ep + "[2]");
    if (ge.u < 0 || ge.u >= n || ge.v < 0 || ge.v >= n) throw SchemaError(ep, "endpoint outside [0, vertices)");
    if (!(ge.weight > 0)) throw SchemaError(ep + "[2]", "edge weights must be positive");
    edges.push_back(std::move(ge));
  }
  return located(path, [&] { return std::make_shared<WeightedGraph>(n, std::move(edges)); });
}

}  // namespace

SpacePtr parse_space(const Json& j, const std::string& path) {
  const auto kind = string_field(j, "kind", path);
  if (kind == "finite_metric") {
    const auto& rows = array_field(j, "matrix", path);
    std::vector<std::vector<Rational>> m;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string rp = at(path + ".matrix", i);
      if (!rows[i].is_array()) throw SchemaError(rp, "expected a row array");
      std::vector<Rational> row;
      for (std::size_t k = 0; k < rows[i].size(); ++k) row.push_back(rational_from_json(rows[i][k], at(rp, k)));
      m.push_back(std::move(row));
    }
    return located(path + ".matrix", [&] { return make_validated_metric(std::move(m)); });
  }
  if (kind == "graph") return parse_graph(j, path);
  if (kind == "cayley") return std::make_shared<CayleySpace>(parse_group(field(j, "group", path), path + ".group"));
  if (kind == "glued_line") {
    const auto eps = rational_from_json(field(j, "eps", path), path + ".eps");
    const auto hair = rational_from_json(field(j, "hair", path), path + ".hair");
    const auto window = j.contains("window") ? integer_from_json(j["window"], path + ".window") : 200;
    return located(path, [&] { return build_glued_line(eps, hair, window); });
  }
  if (kind == "tripod") {
    const auto a = rational_from_json(field(j, "alpha", path), path + ".alpha");
    const auto b = rational_from_json(field(j, "beta", path), path + ".beta");
    const auto c = rational_from_json(field(j, "gamma", path), path + ".gamma");
    return located(path, [&] { return build_tripod(a, b, c); });
  }
  throw SchemaError(path + ".kind", "unknown space kind \"" + kind + "\"");
}

Setup load_setup(const Json& space_doc, const Json* action_doc) {
  Setup s;
  s.space = parse_space(space_doc, "$");
  std::string path = "$action";
  if (!action_doc && space_doc.contains("action")) {
    action_doc = &space_doc["action"];
    path = "$.action";
  }
  if (!action_doc) return s;
  const auto rule = string_field(*action_doc, "action", path);
  const Json* group_doc = action_doc->contains("group") ? &(*action_doc)["group"] : nullptr;
  const GroupPtr group = group_doc ? parse_group(*group_doc, path + ".group") : nullptr;
  if (rule == "left_translation") {
    auto cayley = std::dynamic_pointer_cast<const CayleySpace>(s.space);
    if (!cayley) throw SchemaError(path + ".action", "left translation needs a cayley space");
    if (group && group->describe() != cayley->group()->describe())
      throw SchemaError(path + ".group", "group " + group->describe() + " differs from the Cayley graph's group " +
                                             cayley->group()->describe());
    s.action = std::make_shared<LeftTranslationAction>(cayley);
  } else if (rule == "lattice_translation") {
    auto fa = std::dynamic_pointer_cast<const FreeAbelianGroup>(group);
    if (!fa) throw SchemaError(path + ".group", "lattice translation needs a free_abelian group");
    const auto scale = action_doc->contains("scale") ? integer_from_json((*action_doc)["scale"], path + ".scale") : 1;
    s.action = located(path, [&] { return std::make_shared<LatticeTranslationAction>(fa->rank(), scale, s.space); });
  } else if (rule == "permutation") {
    auto pg = std::dynamic_pointer_cast<const PermutationGroup>(group);
    if (!pg) throw SchemaError(path + ".group", "permutation actions need a finite_permutation group");
    s.action = located(path, [&] { return std::make_shared<PermutationAction>(pg, s.space); });
  } else if (rule == "deck") {
    auto graph = std::dynamic_pointer_cast<const WeightedGraph>(s.space);
    if (!graph) throw SchemaError(path + ".action", "deck actions need a graph space");
    const auto basepoint =
        action_doc->contains("basepoint") ? integer_from_json((*action_doc)["basepoint"], path + ".basepoint") : 0;
    auto cover = located(path, [&] { return universal_cover(graph, basepoint); });
    if (auto fg = std::dynamic_pointer_cast<const FreeGroup>(group); group && (!fg || fg->rank() != cover.betti))
      throw SchemaError(path + ".group", "the deck group is free of rank " + std::to_string(cover.betti));
    s.base_graph = graph;
    s.cover = cover.space;
    s.space = cover.space;
    s.action = cover.deck;
  } else {
    throw SchemaError(path + ".action", "unknown action rule \"" + rule + "\"");
  }
  return s;
}

MeasurePtr parse_measure(const Json& j, const Setup& setup, const std::optional<Point>& center,
                         const std::string& path) {
  const Json doc = j.is_string() ? Json{{"kind", j}} : j;
  const auto kind = string_field(doc, "kind", path);
  auto basepoint = [&]() -> Point {
    if (doc.contains("basepoint")) return point_from_json(doc["basepoint"], *setup.space, path + ".basepoint");
    if (!center) throw SchemaError(path, "no basepoint given and no --center to default to");
    return *center;
  };
  if (kind == "counting_orbit") {
    if (!setup.action) throw SchemaError(path, "counting_orbit needs an action");
    return counting_measure(setup.action, basepoint());
  }
  if (kind == "vertex_uniform") return std::make_shared<VertexUniformMeasure>(setup.space);
  if (kind == "atom") return single_atom(setup.space, basepoint());
  if (kind == "vertex_weights") {
    std::map<std::int64_t, Mass> w;
    const auto& ws = array_field(doc, "weights", path);
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const std::string wp = at(path + ".weights", i);
      if (!ws[i].is_array() || ws[i].size() != 2) throw SchemaError(wp, "expected [vertex, mass]");
      const auto m = rational_from_json(ws[i][1], wp + "[1]");
      if (m < 0) throw SchemaError(wp + "[1]", "masses must be nonnegative");
      w[integer_from_json(ws[i][0], wp + "[0]")] = m;
    }
    return located(path, [&] { return vertex_weights(setup.space, w); });
  }
  if (kind == "pullback") {
    if (!setup.cover) throw SchemaError(path, "pullback needs a deck action on a graph");
    Setup base{setup.base_graph, nullptr, nullptr, nullptr};
    const Json base_doc = doc.contains("base") ? doc["base"] : Json("vertex_uniform");
    auto mu = parse_measure(base_doc, base, std::nullopt, path + ".base");
    CoverData cd{setup.cover, std::dynamic_pointer_cast<const DeckAction>(setup.action), setup.cover->betti()};
    return located(path, [&] { return pullback_measure(cd, *mu); });
  }
  throw SchemaError(path + ".kind", "unknown measure kind \"" + kind + "\"");
}

NuOracle parse_nu_table(const Json& j, const std::string& path) {
  const auto& rows = array_field(j, "nu_table", path);
  std::vector<std::pair<double, std::int64_t>> table;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string rp = at(path + ".nu_table", i);
    if (!rows[i].is_array() || rows[i].size() != 2) throw SchemaError(rp, "expected [C, nu]");
    table.emplace_back(to_double(rational_from_json(rows[i][0], rp + "[0]")), integer_from_json(rows[i][1], rp + "[1]"));
  }
  return located(path + ".nu_table", [&] { return NuOracle(std::move(table)); });
}

Json read_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw SchemaError(file, "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(file, std::string("malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------- reports

namespace {

Json timestamp() {
  const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
  if (!epoch || !*epoch) return nullptr;
  char* end = nullptr;
  const long long secs = std::strtoll(epoch, &end, 10);
  if (*end != '\0') return nullptr;
  const std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Json report_to_json(const Report& r) {
  Json j;
  j["tool_version"] = kToolVersion;
  j["timestamp"] = timestamp();
  j["operation"] = r.operation;
  j["params"] = r.params;
  j["status"] = r.status;
  j["result"] = r.result;
  j["witnesses"] = r.witnesses;
  j["assumptions"] = r.assumptions;
  j["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
  if (r.table) {
    j["table"]["columns"] = r.table->columns;
    j["table"]["rows"] = r.table->rows;
  }
  return j;
}

std::string serialize(const Json& j) { return j.dump(2) + "\n"; }

std::string decimal(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string decimal(const Rational& q) {
  const double d = to_double(q);
  if (std::isfinite(d) && (d != 0 || q == 0)) return decimal(d);
  // Outside the double range: mantissa and exponent from the logarithm.
  const double l10 = log_of(abs_of(q)) / std::log(10.0);
  const double e = std::floor(l10);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%.11fe%+d", q < 0 ? "-" : "", std::pow(10.0, l10 - e), static_cast<int>(e));
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void csv_row(std::ostream& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
  out << "\r\n";
}

}  // namespace

void export_csv(const Report& report, std::ostream& out) {
  if (!report.table) throw std::invalid_argument("report '" + report.operation + "' has no tabular payload");
  csv_row(out, report.table->columns);
  for (const auto& row : report.table->rows) csv_row(out, row);
}

void export_csv(const Report& report, const std::string& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file);
  export_csv(report, out);
}

}  // namespace bgkit
