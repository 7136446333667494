#include "bgkit/cli.hpp"

#include "bgkit/action_analysis.hpp"
#include "bgkit/covers.hpp"
#include "bgkit/curvature.hpp"
#include "bgkit/entropy.hpp"
#include "bgkit/errors.hpp"
#include "bgkit/hyperbolicity.hpp"
#include "bgkit/instances.hpp"
#include "bgkit/io.hpp"
#include "bgkit/packing.hpp"
#include "bgkit/parallel.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace bgkit {

namespace {

struct Globals {
  std::string space_file, action_file, instance, measure, center, points, format = "json", csv_file;
  std::uint64_t seed = 1;
  int threads = 0;
  bool dry_run = false, closed = false;
};

// Values of subcommand options, kept as text until the command parses them.
struct Options {
  std::string r0 = "1", r, R, rmax, step = "1", ceiling = "64", eps = "1/10", D, max_radius = "1024";
  std::string C = "2", K, N, C0, delta, eps0, nu_table, kind, name, radius;
  double tail = kDefaultTail;
  std::size_t samples = 0, cap = 60, index_bound = 100000;
  int grid = 4;
  bool all_centers = false, thin = false, exhaustive = false, greedy = false, exact = false, orbit = false;
};

class Failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Rational rat(const std::string& text, const std::string& flag) {
  if (text.empty()) throw SchemaError("--" + flag, "required");
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw SchemaError("--" + flag, e.what());
  }
}

double real(const std::string& text, const std::string& flag) { return to_double(rat(text, flag)); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

Json rational_pair(const Rational& q) { return {{"exact", to_string(q)}, {"decimal", decimal(q)}}; }

class Context {
 public:
  Context(Globals g, Options o, CLI::App* sub) : g(std::move(g)), o(std::move(o)), sub(sub) {}

  Globals g;
  Options o;
  CLI::App* sub;
  Report report;
  Setup setup;
  Point center;
  bool loaded = false;

  void load() {
    Json doc;
    if (!g.instance.empty()) {
      try {
        doc = instance_document(g.instance);
      } catch (const std::exception& e) {
        throw SchemaError("--instance", e.what());
      }
      const auto delta = declared_delta(g.instance);
      report.assumptions.push_back("declared class of " + g.instance + ": " +
                                   (delta ? to_string(*delta) + "-hyperbolic" : std::string("not hyperbolic")) +
                                   " (annotation only)");
    } else if (!g.space_file.empty()) {
      doc = read_json_file(g.space_file);
    } else {
      throw SchemaError("--space", "a space file or --instance is required");
    }
    if (!g.action_file.empty()) {
      const Json action = read_json_file(g.action_file);
      setup = load_setup(doc, &action);
    } else {
      setup = load_setup(doc);
    }
    center = g.center.empty() ? default_center(*setup.space) : parse_point(g.center, "--center");
    loaded = true;
  }

  Point parse_point(const std::string& text, const std::string& where) const {
    try {
      return setup.space->parse_point(text);
    } catch (const std::exception& e) {
      throw SchemaError(where, e.what());
    }
  }

  const GroupAction& action() const {
    if (!setup.action) throw SchemaError("--action", "this command needs a group action");
    return *setup.action;
  }

  MeasurePtr measure() const {
    Json spec;
    if (g.measure.empty())
      spec = setup.action ? "counting_orbit" : "vertex_uniform";
    else if (g.measure.front() == '{')
      try {
        spec = Json::parse(g.measure);
      } catch (const Json::parse_error& e) {
        throw SchemaError("--measure", e.what());
      }
    else if (g.measure.size() > 5 && g.measure.substr(g.measure.size() - 5) == ".json")
      spec = read_json_file(g.measure);
    else
      spec = g.measure;
    return parse_measure(spec, setup, center, "--measure");
  }

  const WeightedGraph& graph() const {
    auto gph = dynamic_cast<const WeightedGraph*>(setup.space.get());
    if (!gph) throw SchemaError("--space", "this command needs a graph space");
    return *gph;
  }

  // Explicit --points, else a fundamental domain when one is known, else the
  // finite support, else the center alone.
  std::vector<Point> sample(bool* exhaustive = nullptr) const {
    if (exhaustive) *exhaustive = false;
    if (!g.points.empty()) {
      std::vector<Point> out;
      for (const auto& t : split(g.points, ';')) out.push_back(parse_point(t, "--points"));
      return out;
    }
    if (auto lat = dynamic_cast<const LatticeTranslationAction*>(setup.action.get())) {
      if (auto gl = dynamic_cast<const GluedLineSpace*>(setup.space.get()))
        return {gl->base(0), gl->tip(0), LinePoint{gl->eps() / 2}};
      const auto rank = static_cast<const FreeAbelianGroup&>(lat->group()).rank();
      std::vector<Point> out;
      GroupElement c(static_cast<std::size_t>(rank), 0);
      while (true) {
        out.push_back(WordPoint{c});
        std::size_t i = 0;
        while (i < c.size() && ++c[i] == lat->scale()) c[i++] = 0;
        if (i == c.size()) break;
      }
      return out;
    }
    if (setup.cover) {
      std::vector<Point> out;
      for (std::int64_t v = 0; v < setup.cover->base().vertex_count(); ++v)
        out.push_back(WordPoint{setup.cover->tree_path(v)});
      return out;
    }
    if (setup.space->is_finite()) {
      if (exhaustive) *exhaustive = true;
      return setup.space->support();
    }
    return {center};
  }

  void echo_params() {
    auto add = [&](const CLI::App* app) {
      for (const CLI::Option* opt : app->get_options()) {
        if (opt->count() == 0 || opt->get_name() == "--help") continue;
        std::string key = opt->get_name();
        while (!key.empty() && key.front() == '-') key.erase(key.begin());
        const auto& res = opt->results();
        if (opt->get_expected_min() == 0)
          report.params[key] = true;
        else
          report.params[key] = res.size() == 1 ? Json(res.front()) : Json(res);
      }
    };
    add(sub->get_parent());
    add(sub);
    report.params.erase("threads");
    report.params.erase("format");
    report.params.erase("csv");
  }
};

Json witness_json(const Witness& w) {
  return {{"center", to_string(w.center)}, {"radius", to_string(w.radius)}, {"outer", to_string(w.outer)},
          {"inner", to_string(w.inner)},   {"lhs", rational_pair(w.lhs)},   {"rhs", w.rhs}};
}

void certificate_report(Context& c, const Certificate& cert) {
  auto& r = c.report;
  r.status = to_string(cert.status);
  r.result["status"] = to_string(cert.status);
  r.result["critical_radii_checked"] = cert.critical_radii_checked;
  r.result["worst_ratio"] = cert.worst_ratio;
  r.result["r_min"] = to_string(cert.r_min);
  r.result["r_max"] = to_string(cert.r_max);
  r.result["centers"] = cert.centers.size();
  r.result["all_centers"] = cert.all_centers;
  if (cert.witness) {
    r.result["witness"] = witness_json(*cert.witness);
    r.witnesses.push_back(r.result["witness"]);
  }
  Table t{{"r", "r_decimal", "lhs_exact", "lhs_decimal", "rhs", "slack", "center"}, {}};
  for (const auto& row : cert.rows) {
    const double rhs = std::exp(log_rhs(cert.params, row.rhs_radius));
    t.rows.push_back({to_string(row.radius), decimal(row.radius), to_string(row.ratio), decimal(row.ratio),
                      decimal(rhs), decimal(rhs - to_double(row.ratio)), to_string(row.center)});
  }
  r.table = std::move(t);
}

// ---------------------------------------------------------------- commands

using Command = std::function<void(Context&)>;

void cmd_validate(Context& c) {
  const auto diag = c.setup.space->validate();
  auto& res = c.report.result;
  res["kind"] = c.setup.space->kind();
  res["finite"] = c.setup.space->is_finite();
  if (c.setup.space->is_finite()) res["support_size"] = c.setup.space->support().size();
  res["errors"] = diag.errors;
  res["warnings"] = diag.warnings;
  if (c.g.dry_run) return;
  if (c.setup.action) {
    const auto& a = *c.setup.action;
    res["action"] = {{"rule", a.rule()}, {"group", a.group().describe()}};
    std::vector<Point> pts = c.setup.space->is_finite() ? c.setup.space->support() : std::vector<Point>{};
    if (pts.empty())
      for (auto& e : c.setup.space->ball(c.center, 3, true)) pts.push_back(std::move(e.point));
    const auto defects = validate_isometry(a, pts, a.group().symmetric_generators());
    res["isometry_defects"] = defects.size();
    for (const auto& d : defects)
      c.report.witnesses.push_back(
          {{"p", to_string(d.p)}, {"q", to_string(d.q)}, {"element", a.group().element_to_string(d.element)}});
    if (!defects.empty()) res["errors"].push_back("the action does not preserve distances");
  }
  if (!res["errors"].empty()) {
    c.report.status = "invalid";
    throw Failure("validation found " + std::to_string(res["errors"].size()) + " error(s)");
  }
  c.report.status = "valid";
}

void cmd_balls(Context& c) {
  const Length r = rat(c.o.r, "r");
  if (c.g.dry_run) return;
  const auto ball = c.setup.space->ball(c.center, r, c.g.closed);
  c.report.result["count"] = ball.size();
  if (!c.g.measure.empty() || c.setup.action) c.report.result["mass"] = to_string(c.measure()->ball_mass(c.center, r, c.g.closed));
  Table t{{"point", "distance_exact", "distance_decimal"}, {}};
  for (const auto& e : ball) t.rows.push_back({to_string(e.point), to_string(e.distance), decimal(e.distance)});
  c.report.table = std::move(t);
}

std::vector<Point> certificate_centers(Context& c) {
  if (!c.o.all_centers) return {c.center};
  bool exhaustive = false;
  auto s = c.sample(&exhaustive);
  return s;
}

void cmd_certify(Context& c) {
  const BGParams p{rat(c.o.r0, "r0"), real(c.o.C, "C"), real(c.o.K, "K")};
  const Length rmax = rat(c.o.rmax, "rmax");
  try {
    p.check();
  } catch (const std::exception& e) {
    throw SchemaError("--r0/--C/--K", e.what());
  }
  if (c.g.dry_run) return;
  const auto mu = c.measure();
  certificate_report(c, check_weak_bg(*mu, certificate_centers(c), p, rmax, c.g.closed, c.o.all_centers));
}

void cmd_synthetic(Context& c) {
  const SyntheticParams p{real(c.o.N, "N"), real(c.o.K, "K")};
  const Length rmax = rat(c.o.rmax, "rmax");
  try {
    p.check();
  } catch (const std::exception& e) {
    throw SchemaError("--N/--K", e.what());
  }
  if (c.g.dry_run) return;
  certificate_report(c, check_bg_synthetic(*c.measure(), c.center, p, rmax, c.g.closed));
  c.report.result["threshold"] = to_string(p.threshold());
  c.report.result["weak_equivalent"] = {{"r0", to_string(synthetic_to_weak(p).r0)}, {"C", synthetic_to_weak(p).C},
                                        {"K", synthetic_to_weak(p).K}};
}

void cmd_doubling(Context& c) {
  const Length r0 = rat(c.o.r0, "r0");
  if (c.g.dry_run) return;
  const auto d = doubling_constant(*c.measure(), c.center, r0, c.g.closed);
  c.report.result["C0"] = rational_pair(d.C0);
  c.report.result["attained_at"] = to_string(d.radius);
  c.report.result["window"] = {to_string(r0 / 2), to_string(r0 * 5 / 2)};
  c.report.result["critical_radii_checked"] = d.critical_radii_checked;
}

void cmd_entropy(Context& c) {
  const Length rmax = rat(c.o.rmax, "rmax"), step = rat(c.o.step, "step");
  if (c.g.dry_run) return;
  const auto mu = c.measure();
  const auto prof = growth_profile(*mu, c.center, rmax, step);
  const auto est = entropy_estimate(prof, c.o.tail);
  auto& res = c.report.result;
  res["estimate"] = est.estimate;
  res["window"] = {est.window_low, est.window_high};
  res["raw_window"] = {est.raw_low, est.raw_high};
  res["tail_samples"] = est.tail_samples;
  res["converged"] = est.converged;
  if (!est.converged) c.report.assumptions.push_back("doubling increments over the tail spread by more than 0.1");
  if (!c.o.K.empty()) {
    const BGParams p{rat(c.o.r0, "r0"), real(c.o.C, "C"), real(c.o.K, "K")};
    const auto cert = check_weak_bg(*mu, {c.center}, p, rmax / 2, false);
    const auto cons = entropy_bg_consistency(*mu, c.center, cert, prof);
    res["bg_consistency"] = {{"certificate", to_string(cert.status)},
                             {"certified_K", cons.certified_K},
                             {"consistent", cons.consistent},
                             {"tolerance", cons.tolerance}};
  }
  Table t{{"R", "mass_exact", "mass_decimal", "h", "h_doubling"}, {}};
  for (const auto& s : prof.samples)
    t.rows.push_back({to_string(s.R), to_string(s.mass), decimal(s.mass), decimal(s.h), decimal(s.h_doubling)});
  c.report.table = std::move(t);
}

SampleSpec sample_spec(Context& c) {
  SampleSpec s;
  s.exhaustive = c.o.samples == 0 || c.o.exhaustive;
  s.count = c.o.samples;
  s.seed = c.g.seed;
  if (!s.exhaustive) c.report.seed = c.g.seed;
  return s;
}

void hyperbolicity_report(Context& c, const HyperbolicityReport& h) {
  auto& res = c.report.result;
  res["delta"] = rational_pair(h.delta);
  res["method"] = h.method;
  res["evaluated"] = h.evaluated;
  Json w = Json::array();
  for (const auto& p : h.witness) w.push_back(to_string(p));
  res["witness"] = w;
  if (h.branch) res["branch"] = *h.branch;
  if (h.t) res["t"] = to_string(*h.t);
  if (!h.witness.empty()) c.report.witnesses.push_back(w);
}

void cmd_delta(Context& c) {
  const auto spec = sample_spec(c);
  if (c.o.thin) c.graph();
  std::vector<Point> pts;
  if (c.setup.space->is_finite()) {
    pts = c.setup.space->support();
  } else {
    for (auto& e : c.setup.space->ball(c.center, rat(c.o.radius, "radius"), true)) pts.push_back(std::move(e.point));
    c.report.assumptions.push_back("points restricted to the closed ball of radius " + c.o.radius);
  }
  if (c.g.dry_run) return;
  hyperbolicity_report(c, c.o.thin ? thin_triangle_delta(c.graph(), spec) : four_point_delta(*c.setup.space, pts, spec, c.o.cap));
}

void cmd_convexity(Context& c) {
  const auto& g = c.graph();
  if (c.o.grid < 1) throw SchemaError("--grid", "must be positive");
  const auto spec = sample_spec(c);
  if (c.g.dry_run) return;
  const auto rep = convexity_defect(g, spec, c.o.grid);
  c.report.result["defect"] = rational_pair(rep.defect);
  c.report.result["t"] = to_string(rep.t);
  c.report.result["evaluated"] = rep.evaluated;
  c.report.result["witness"] = rep.witness;
  if (!rep.witness.empty()) c.report.witnesses.push_back(rep.witness);
}

void cmd_pack(Context& c) {
  const Length r = rat(c.o.r, "r"), R = rat(c.o.R, "R");
  PackingOptions opt;
  opt.mode = c.o.greedy ? PackMode::greedy : PackMode::exact;
  opt.exact_cap = c.o.cap;
  if (c.o.orbit) c.action();
  if (c.g.dry_run) return;
  const auto res = c.o.orbit ? gamma_packing_count(c.action(), c.center, r, R, opt)
                             : packing_count(*c.setup.space, c.center, r, R, opt);
  c.report.result["count"] = res.count;
  c.report.result["method"] = to_string(res.method);
  c.report.result["candidates"] = res.candidates;
  Json centers = Json::array();
  for (const auto& p : res.centers) centers.push_back(to_string(p));
  c.report.result["centers"] = centers;
  if (res.method == PackMode::greedy) c.report.assumptions.push_back("greedy count is a lower bound");
}

Json optional_length(const std::optional<Length>& v) { return v ? Json(to_string(*v)) : Json(nullptr); }

void systole_common(Context& c, bool diastole) {
  const auto& a = c.action();
  const Length cap = rat(c.o.max_radius, "max-radius");
  const auto pts = c.sample();
  if (c.g.dry_run) return;
  const auto rep = systole(a, pts, cap);
  auto& res = c.report.result;
  Json rows = Json::array();
  for (const auto& row : rep.rows)
    rows.push_back({{"point", to_string(row.point)},
                    {"sys", optional_length(row.sys)},
                    {"sys_tf", optional_length(row.sys_tf)},
                    {"stabilized", row.stabilized}});
  res["rows"] = rows;
  res["diastole"] = optional_length(rep.diastole);
  res["diastole_tf"] = optional_length(rep.diastole_tf);
  res["global_sys"] = optional_length(rep.global_sys);
  res["global_sys_tf"] = optional_length(rep.global_sys_tf);
  res["primary"] = diastole ? "diastole" : "global_sys";
  for (const auto& w : rep.warnings) c.report.assumptions.push_back(w);
}

void cmd_systole(Context& c) { systole_common(c, false); }
void cmd_diastole(Context& c) { systole_common(c, true); }

void cmd_thin_set(Context& c) {
  const auto& a = c.action();
  const Length r = rat(c.o.r, "r");
  bool exhaustive = false;
  const auto pts = c.sample(&exhaustive);
  if (c.g.dry_run) return;
  const auto sys = systole(a, pts, rat(c.o.max_radius, "max-radius"));
  const auto rep = thin_set(a, r, pts, exhaustive, sys);
  auto list = [](const std::vector<Point>& v) {
    Json j = Json::array();
    for (const auto& p : v) j.push_back(to_string(p));
    return j;
  };
  auto& res = c.report.result;
  res["members"] = list(rep.members);
  res["members_tf"] = list(rep.members_tf);
  res["verdict"] = to_string(rep.verdict);
  res["verdict_tf"] = to_string(rep.verdict_tf);
  res["components"] = rep.components;
  res["components_tf"] = rep.components_tf;
  res["exhaustive_sample"] = exhaustive;
}

void cmd_margulis(Context& c) {
  const auto& a = c.action();
  const Length ceiling = rat(c.o.ceiling, "ceiling");
  const auto pts = c.sample();
  if (c.g.dry_run) return;
  const auto est = margulis_estimate(a, pts, ceiling);
  auto& res = c.report.result;
  Json rows = Json::array();
  std::optional<Length> lowest;
  bool known = true;
  for (const auto& row : est.rows) {
    rows.push_back({{"point", to_string(row.point)},
                    {"estimate", optional_length(row.estimate)},
                    {"attained", row.attained},
                    {"flip", optional_length(row.flip)}});
    if (!row.estimate)
      known = false;
    else if (!lowest || *row.estimate < *lowest)
      lowest = row.estimate;
  }
  res["rows"] = rows;
  res["estimate"] = known ? optional_length(lowest) : Json(nullptr);
  res["ceiling"] = to_string(est.ceiling);
  res["provenance"] = est.provenance;
  res["alpha0"] = "unknown";
  c.report.assumptions.push_back("the entropy Margulis constant alpha0(delta0, H0) has no explicit value");
  if (!known) c.report.status = "inconclusive";
}

void cmd_short_gens(Context& c) {
  const auto& a = c.action();
  const Length R = rat(c.o.R, "R");
  const auto pts = c.sample();
  if (c.g.dry_run) return;
  Length D;
  if (c.o.D.empty()) {
    D = codiameter(a, c.center, pts);
    c.report.assumptions.push_back("D is the codiameter measured over the sample");
  } else {
    D = rat(c.o.D, "D");
  }
  const auto sg = short_generators(a, c.center, R, D, c.o.index_bound);
  auto& res = c.report.result;
  Json fam = Json::array();
  for (const auto& e : sg.family)
    fam.push_back({{"element", a.group().element_to_string(e.element)}, {"displacement", to_string(e.displacement)}});
  res["family"] = fam;
  res["count"] = sg.family.size();
  res["D"] = to_string(D);
  res["displacement_ok"] = sg.displacement_ok;
  res["separation_ok"] = sg.separation_ok;
  res["index"] = {{"verdict", to_string(sg.index.verdict)},
                  {"index", sg.index.index ? Json(sg.index.index->str()) : Json(nullptr)},
                  {"method", sg.index.method}};
  if (!sg.displacement_ok || !sg.separation_ok) c.report.status = "violated";
}

BoundParams bound_params(const Context& c) {
  BoundParams p;
  auto put = [&](const std::string& key, const std::string& v) {
    if (!v.empty()) p[key] = real(v, key);
  };
  put("N", c.o.N);
  put("K", c.o.K);
  put("D", c.o.D);
  put("C", c.sub->get_option("--C")->count() ? c.o.C : "");
  put("r0", c.sub->get_option("--r0")->count() ? c.o.r0 : "");
  put("delta", c.o.delta);
  put("eps0", c.o.eps0);
  return p;
}

std::optional<NuOracle> nu_oracle(const Context& c) {
  if (c.o.nu_table.empty()) return std::nullopt;
  return parse_nu_table(read_json_file(c.o.nu_table), c.o.nu_table);
}

Json bound_json(const BoundValue& b) { return {{"kind", b.kind}, {"value", b.value}, {"intermediates", b.intermediates}}; }

void cmd_bounds(Context& c) {
  const auto kinds = bound_kinds();
  if (std::find(kinds.begin(), kinds.end(), c.o.kind) == kinds.end())
    throw SchemaError("kind", "unknown bound kind \"" + c.o.kind + "\"");
  const auto params = bound_params(c);
  const auto nu = nu_oracle(c);
  if (c.g.dry_run) return;
  BoundValue b;
  try {
    b = evaluate_bound(c.o.kind, params, nu ? &*nu : nullptr);
  } catch (const std::invalid_argument& e) {
    throw SchemaError("--params", e.what());
  }
  c.report.result = bound_json(b);
}

void cmd_check(Context& c) {
  const auto kinds = bound_kinds();
  const std::string& kind = c.o.kind;
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
    throw SchemaError("kind", "unknown bound kind \"" + kind + "\"");
  auto params = bound_params(c);
  const auto nu = nu_oracle(c);
  if (c.g.dry_run) return;
  double measured = 0;
  std::vector<std::string> assumed;
  auto& res = c.report.result;
  const bool betti = kind.rfind("betti", 0) == 0;
  if (betti) {
    const WeightedGraph& g = c.setup.cover ? c.setup.cover->base() : c.graph();
    const auto b = graph_betti(g);
    if (!b.connected) throw HypothesisError("the Betti bounds need a connected graph");
    measured = static_cast<double>(b.total);
    if (!params.count("D")) {
      params["D"] = to_double(g.diameter());
      assumed.push_back("D is the graph diameter");
    }
    if (!params.count("K")) {
      auto graph_ptr = c.setup.cover ? c.setup.base_graph
                                     : std::dynamic_pointer_cast<const WeightedGraph>(c.setup.space);
      auto cover = universal_cover(graph_ptr);
      auto mu = pullback_measure(cover, VertexUniformMeasure(graph_ptr));
      const Length rmax = c.o.rmax.empty() ? Length(12) : rat(c.o.rmax, "rmax");
      const auto est = entropy_estimate(growth_profile(*mu, WordPoint{{}}, rmax, rat(c.o.step, "step")), c.o.tail);
      params["K"] = std::max(0.0, est.estimate);
      assumed.push_back("K is the entropy estimate of the universal cover");
    }
  } else {
    const auto& a = c.action();
    const auto pts = c.sample();
    if (!params.count("D")) {
      params["D"] = to_double(codiameter(a, c.center, pts));
      assumed.push_back("D is the codiameter measured over the sample");
    }
    if (kind == "generators" || kind == "generator_count") {
      measured = static_cast<double>(sigma_r(a, c.center, exact_rational(2 * params["D"])).elements.size());
      res["measured_quantity"] = "#Sigma_2D(x)";
    } else if (kind.rfind("systole", 0) == 0) {
      const auto rep = systole(a, pts, rat(c.o.max_radius, "max-radius"));
      if (!rep.global_sys) throw HypothesisError("no nontrivial element displaces the sample");
      measured = to_double(*rep.global_sys);
      res["measured_quantity"] = "min sys over the sample";
    } else {
      const auto est = margulis_estimate(a, pts, rat(c.o.ceiling, "ceiling"));
      std::optional<Length> low;
      for (const auto& row : est.rows) {
        if (!row.estimate) throw HypothesisError("the Margulis estimate is unknown at " + to_string(row.point));
        if (!low || *row.estimate < *low) low = row.estimate;
      }
      measured = to_double(*low);
      res["measured_quantity"] = "min Margulis estimate over the sample";
    }
  }
  const auto cc = bound_cross_check(kind, measured, params, nu ? &*nu : nullptr, assumed);
  res["measured"] = measured;
  res["bound"] = bound_json(cc.bound);
  res["relation"] = cc.relation;
  res["holds"] = cc.holds;
  res["params"] = params;
  for (const auto& a : cc.assumed) c.report.assumptions.push_back(a);
  c.report.status = !cc.established ? "inconclusive" : cc.holds ? "verified" : "violated";
}

void cmd_reproduce(Context& c) {
  if (c.o.name != "exemplebis") throw SchemaError("name", "unknown reproduction \"" + c.o.name + "\"");
  const Length r0 = rat(c.o.r0, "r0"), eps = rat(c.o.eps, "eps");
  const BGParams p{r0, real(c.sub->get_option("--C")->count() ? c.o.C : "4", "C"),
                   real(c.o.K.empty() ? "1" : c.o.K, "K")};
  const Length rmax = c.o.rmax.empty() ? r0 * 2 : rat(c.o.rmax, "rmax");
  if (!(eps > 0) || !(r0 > 0)) throw SchemaError("--eps/--r0", "must be positive");
  try {
    p.check();
  } catch (const std::exception& e) {
    throw SchemaError("--r0/--C/--K", e.what());
  }
  if (rmax < r0) throw SchemaError("--rmax", "must be at least r0");
  if (c.g.dry_run) return;
  const auto window = static_cast<std::int64_t>(floor_of(rmax * 4 / eps)) + 4;
  auto space = build_glued_line(eps, r0 / 2, window);
  auto action = std::make_shared<LatticeTranslationAction>(1, 1, space);
  const Point x = space->tip(0);
  const auto mu = counting_measure(action, x);
  const Length r = r0 + eps;
  auto& res = c.report.result;
  res["space"] = {{"kind", "glued_line"}, {"eps", to_string(eps)}, {"hair", to_string(r0 / 2)}, {"window", window}};
  res["x"] = to_string(x);
  res["r"] = to_string(r);
  if (r * 2 <= *space->safe_radius(x)) {
    res["mass_r"] = to_string(mu->ball_mass(x, r, false));
    res["mass_2r"] = to_string(mu->ball_mass(x, r * 2, false));
    res["predicted_mass_2r"] = (floor_of(r0 / eps) * 2 + 3).str();
  }
  certificate_report(c, check_weak_bg(*mu, {x}, p, rmax, c.g.closed));
}

void cmd_cover(Context& c) {
  auto graph = c.setup.cover ? c.setup.base_graph : std::dynamic_pointer_cast<const WeightedGraph>(c.setup.space);
  if (!graph) throw SchemaError("--space", "cover needs a graph space");
  const auto b = graph_betti(*graph);
  auto& res = c.report.result;
  res["betti"] = {{"connected", b.connected}, {"total", b.total}, {"per_component", b.per_component}};
  if (!b.connected) throw HypothesisError("universal covers need a connected graph");
  if (c.g.dry_run) return;
  const auto cover = universal_cover(graph, c.setup.cover ? c.setup.cover->basepoint() : 0);
  res["deck_group"] = cover.deck->group().describe();
  res["cycle_edges"] = cover.space->cycle_edges();
  Table t{{"generator", "edge", "loop", "length_exact", "length_decimal"}, {}};
  Json gens = Json::array();
  for (std::int64_t i = 1; i <= cover.betti; ++i) {
    const auto loop = cover.space->loop({i});
    const Length len = cover.space->path_length(loop);
    const Length d = cover.space->distance(WordPoint{{}}, cover.deck->apply({i}, WordPoint{{}}));
    gens.push_back({{"generator", i},
                    {"edge", cover.space->cycle_edges()[static_cast<std::size_t>(i - 1)]},
                    {"loop", to_string(Point(WordPoint{loop}))},
                    {"length", to_string(len)},
                    {"displacement", to_string(d)}});
    t.rows.push_back({std::to_string(i), std::to_string(cover.space->cycle_edges()[static_cast<std::size_t>(i - 1)]),
                      to_string(Point(WordPoint{loop})), to_string(len), decimal(len)});
  }
  res["generators"] = gens;
  if (!c.o.rmax.empty()) {
    auto mu = pullback_measure(cover, VertexUniformMeasure(graph));
    const auto est = entropy_estimate(growth_profile(*mu, WordPoint{{}}, rat(c.o.rmax, "rmax"), rat(c.o.step, "step")),
                                      c.o.tail);
    res["entropy"] = {{"estimate", est.estimate}, {"window", {est.window_low, est.window_high}}, {"converged", est.converged}};
  }
  c.report.table = std::move(t);
}

struct Spec {
  const char* name;
  const char* help;
  Command fn;
  bool needs_space = true;
};

int finish(Context& c, std::ostream& out, std::ostream& err, int code) {
  if (c.g.format == "csv") {
    if (code == 1 && !c.report.table) return code;
    export_csv(c.report, out);
  } else {
    out << serialize(report_to_json(c.report));
  }
  if (!c.g.csv_file.empty()) export_csv(c.report, c.g.csv_file);
  err << c.report.operation << ": " << c.report.status << "\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bishop-Gromov curvature toolkit for discrete metric measure spaces", "bgkit"};
  app.require_subcommand(1);
  Globals g;
  Options o;
  app.add_option("--space", g.space_file, "space description (JSON)");
  app.add_option("--action", g.action_file, "action description (JSON)");
  app.add_option("--instance", g.instance, "bundled setup instead of --space");
  app.add_option("--measure", g.measure, "measure kind, JSON file or inline JSON");
  app.add_option("--center", g.center, "center point literal");
  app.add_option("--points", g.points, "sample points separated by ';'");
  app.add_option("--seed", g.seed, "seed for sampled modes");
  app.add_option("--threads", g.threads, "worker threads, 0 for all cores");
  app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--csv", g.csv_file, "also write the table as CSV");
  app.add_flag("--dry-run", g.dry_run, "validate inputs and print the plan");
  app.add_flag("--closed", g.closed, "closed balls instead of open ones");

  const std::vector<Spec> specs = {
      {"validate", "check a space (and action) description", cmd_validate},
      {"balls", "enumerate a ball", cmd_balls},
      {"certify-bg", "weak Bishop-Gromov certificate", cmd_certify},
      {"synthetic", "BG-synthetic certificate", cmd_synthetic},
      {"doubling", "doubling constant at a scale", cmd_doubling},
      {"entropy", "growth profile and entropy estimate", cmd_entropy},
      {"delta", "Gromov hyperbolicity constant", cmd_delta},
      {"convexity", "Busemann convexity defect of a graph", cmd_convexity},
      {"pack", "packing number", cmd_pack},
      {"systole", "systoles over a sample", cmd_systole},
      {"diastole", "diastole over a sample", cmd_diastole},
      {"thin-set", "thin part of the space", cmd_thin_set},
      {"margulis", "Margulis constant estimate", cmd_margulis},
      {"short-gens", "short generating family", cmd_short_gens},
      {"bounds", "evaluate a closed-form bound", cmd_bounds, false},
      {"check", "compare a measured quantity with its bound", cmd_check},
      {"reproduce", "reproduce a worked example", cmd_reproduce, false},
      {"cover", "universal cover of a graph", cmd_cover},
  };
  std::map<std::string, const Spec*> by_name;
  for (const auto& s : specs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->fallthrough();
    by_name[s.name] = &s;
    const std::string n = s.name;
    auto opt = [&](const char* flag, std::string& v, const char* help) { sub->add_option(flag, v, help); };
    if (n == "balls" || n == "pack" || n == "thin-set") opt("--r", o.r, "radius");
    if (n == "pack" || n == "short-gens") opt("--R", o.R, "outer radius");
    if (n == "certify-bg" || n == "synthetic" || n == "entropy" || n == "reproduce" || n == "check" || n == "cover")
      opt("--rmax", o.rmax, "largest radius");
    if (n == "certify-bg" || n == "doubling" || n == "entropy" || n == "reproduce" || n == "bounds" || n == "check")
      opt("--r0", o.r0, "scale");
    if (n == "certify-bg" || n == "entropy" || n == "reproduce" || n == "bounds" || n == "check")
      opt("--C", o.C, "factor");
    if (n == "certify-bg" || n == "synthetic" || n == "entropy" || n == "reproduce" || n == "bounds" || n == "check")
      opt("--K", o.K, "exponent");
    if (n == "synthetic" || n == "bounds" || n == "check") opt("--N", o.N, "dimension");
    if (n == "bounds" || n == "check" || n == "short-gens") opt("--D", o.D, "codiameter");
    if (n == "bounds" || n == "check") {
      opt("--delta", o.delta, "hyperbolicity constant");
      opt("--eps0", o.eps0, "scale epsilon'_0");
      opt("--nu-table", o.nu_table, "JSON file with {\"nu_table\": [[C, nu], ...]}");
      sub->add_option("kind", o.kind, "bound kind")->required();
    }
    if (n == "certify-bg") sub->add_flag("--all-centers", o.all_centers, "every sample point as a center");
    if (n == "entropy" || n == "check" || n == "cover") {
      opt("--step", o.step, "radius step");
      sub->add_option("--tail", o.tail, "tail fraction");
    }
    if (n == "delta" || n == "convexity") {
      sub->add_flag("--exhaustive", o.exhaustive, "all tuples (default)");
      sub->add_option("--samples", o.samples, "random tuples instead");
    }
    if (n == "delta") {
      sub->add_flag("--thin", o.thin, "thin triangles instead of four points");
      sub->add_option("--cap", o.cap, "exhaustive four-point point cap");
      opt("--radius", o.radius, "ball of points for infinite spaces");
      o.radius = "4";
    }
    if (n == "convexity") sub->add_option("--grid", o.grid, "parameter grid");
    if (n == "pack") {
      sub->add_flag("--exact", o.exact, "maximum packing (default)");
      sub->add_flag("--greedy", o.greedy, "greedy lower bound");
      sub->add_flag("--orbit", o.orbit, "centers restricted to the orbit");
      sub->add_option("--cap", o.cap, "candidate cap for exact mode");
    }
    if (n == "systole" || n == "diastole" || n == "thin-set" || n == "check")
      opt("--max-radius", o.max_radius, "search radius cap");
    if (n == "margulis" || n == "check") opt("--ceiling", o.ceiling, "largest radius tried");
    if (n == "short-gens") sub->add_option("--index-bound", o.index_bound, "coset enumeration cap");
    if (n == "reproduce") {
      sub->add_option("name", o.name, "worked example")->required();
      opt("--eps", o.eps, "hair spacing");
    }
  }

  if (argc > 1 && argv[1][0] != '-' && !by_name.count(argv[1])) {
    err << "error: unknown subcommand \"" << argv[1] << "\"\n";
    return 1;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (o.exact && o.greedy) {
    err << "error: --exact and --greedy are exclusive\n";
    return 1;
  }
  CLI::App* sub = app.get_subcommands().front();
  const Spec& spec = *by_name.at(sub->get_name());
  set_thread_count(g.threads < 0 ? 1 : static_cast<std::size_t>(g.threads));
  Context c(g, o, sub);
  c.report.operation = sub->get_name();
  try {
    c.echo_params();
    if (spec.needs_space) c.load();
    if (g.dry_run) c.report.status = "planned";
    spec.fn(c);
    if (g.dry_run) {
      c.report.status = "planned";
      c.report.result["plan"] = std::string(spec.help) + (c.loaded ? " on " + c.setup.space->kind() : "");
    }
  } catch (const Failure& e) {
    c.report.result["error"] = e.what();
    err << "error: " << e.what() << "\n";
    return finish(c, out, err, 1);
  } catch (const std::exception& e) {
    c.report.status = "error";
    c.report.result["error"] = e.what();
    err << "error: " << e.what() << "\n";
    return finish(c, out, err, 1);
  }
  try {
    return finish(c, out, err, c.report.status == "violated" ? 2 : 0);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace bgkit
