#include "bgkit/action_analysis.hpp"

#include "bgkit/errors.hpp"
#include "bgkit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace bgkit {

SigmaR sigma_r(const GroupAction& action, const Point& x, const Length& r) {
  SigmaR out{r, action.orbit_within(x, r), {}, Nilpotency::unknown};
  for (const auto& e : out.elements)
    if (!action.group().is_identity(e.element)) out.generators.push_back(e.element);
  out.classification = action.group().classify_subgroup(out.generators);
  return out;
}

// ---------------------------------------------------------------- systole

namespace {

bool trivial_group(const Group& g) { return g.order() == std::size_t(1); }

SystoleRow systole_at(const GroupAction& action, const Point& x, const Length& max_radius) {
  const Group& g = action.group();
  SystoleRow row{x, std::nullopt, std::nullopt, false};
  if (trivial_group(g)) return row;
  const bool finite = g.order().has_value();
  Length R = finite ? max_radius : Length(1);
  while (true) {
    const Length cap = std::min(R, max_radius);
    for (const auto& e : action.orbit_within(x, cap)) {
      if (g.is_identity(e.element)) continue;
      if (!row.sys) row.sys = e.displacement;
      if (e.displacement == 0) row.stabilized = true;
      if (!row.sys_tf && !g.is_torsion(e.element)) row.sys_tf = e.displacement;
    }
    if (row.sys && (row.sys_tf || finite)) break;
    if (cap >= max_radius) {
      if (!row.sys)
        throw HypothesisError("no nontrivial displacement within radius " + to_string(max_radius) + " at " +
                              to_string(x));
      break;
    }
    row.sys.reset();
    row.sys_tf.reset();
    row.stabilized = false;
    R *= 2;
  }
  return row;
}

}  // namespace

SystoleReport systole(const GroupAction& action, const std::vector<Point>& sample, const Length& max_radius) {
  SystoleReport rep;
  rep.rows.resize(sample.size());
  parallel_for(sample.size(), [&](std::size_t i) { rep.rows[i] = systole_at(action, sample[i], max_radius); });
  auto fold = [](std::optional<Length>& acc, const std::optional<Length>& v, bool take_max) {
    if (!v) return;
    if (!acc || (take_max ? *v > *acc : *v < *acc)) acc = v;
  };
  for (const auto& row : rep.rows) {
    fold(rep.diastole, row.sys, true);
    fold(rep.diastole_tf, row.sys_tf, true);
    fold(rep.global_sys, row.sys, false);
    fold(rep.global_sys_tf, row.sys_tf, false);
    if (row.stabilized) rep.warnings.push_back("nontrivial stabilizer at " + to_string(row.point) + ": sys = 0");
  }
  rep.warnings.push_back("diastole and global systole are statistics over the sampled points");
  return rep;
}

// ---------------------------------------------------------------- thin sets

std::string to_string(Connectivity c) {
  switch (c) {
    case Connectivity::empty: return "empty";
    case Connectivity::disconnected: return "disconnected";
    case Connectivity::connected: return "connected";
    case Connectivity::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

std::size_t count_components(const Space& space, const std::vector<Point>& members) {
  const std::set<Point> in(members.begin(), members.end());
  std::set<Point> seen;
  std::size_t comps = 0;
  for (const auto& start : members) {
    if (!seen.insert(start).second) continue;
    ++comps;
    std::vector<Point> stack{start};
    while (!stack.empty()) {
      Point p = std::move(stack.back());
      stack.pop_back();
      for (auto& q : space.adjacent(p))
        if (in.count(q) && seen.insert(q).second) stack.push_back(std::move(q));
    }
  }
  return comps;
}

Connectivity verdict(std::size_t comps, bool exhaustive) {
  if (comps == 0) return Connectivity::empty;
  if (comps == 1) return Connectivity::connected;
  return exhaustive ? Connectivity::disconnected : Connectivity::inconclusive;
}

}  // namespace

ThinSetReport thin_set(const GroupAction& action, const Length& r, const std::vector<Point>& sample,
                       bool exhaustive_sample, const SystoleReport& systoles) {
  if (systoles.rows.size() != sample.size()) throw std::invalid_argument("systole report does not match the sample");
  ThinSetReport rep;
  rep.r = r;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& row = systoles.rows[i];
    if (!(row.point == sample[i])) throw std::invalid_argument("systole report does not match the sample");
    if (row.sys && *row.sys < r) rep.members.push_back(sample[i]);
    if (row.sys_tf && *row.sys_tf < r) rep.members_tf.push_back(sample[i]);
  }
  rep.components = count_components(action.space(), rep.members);
  rep.components_tf = count_components(action.space(), rep.members_tf);
  rep.verdict = verdict(rep.components, exhaustive_sample);
  rep.verdict_tf = verdict(rep.components_tf, exhaustive_sample);
  return rep;
}

// ---------------------------------------------------------------- Margulis

MargulisEstimate margulis_estimate(const GroupAction& action, const std::vector<Point>& sample,
                                   const Length& ceiling) {
  const Group& g = action.group();
  MargulisEstimate rep{ceiling, std::vector<MargulisRow>(sample.size()), g.family() + " family rule"};
  bool unknown = false;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    MargulisRow& row = rep.rows[i];
    row.point = sample[i];
    const auto orbit = action.orbit_within(sample[i], ceiling);
    std::vector<GroupElement> gens;
    std::size_t k = 0;
    row.estimate = ceiling;
    row.attained = true;
    while (k < orbit.size()) {
      const Length d = orbit[k].displacement;
      for (; k < orbit.size() && orbit[k].displacement == d; ++k)
        if (!g.is_identity(orbit[k].element)) gens.push_back(orbit[k].element);
      const auto c = g.classify_subgroup(gens);
      if (c == Nilpotency::unknown) {
        row.estimate.reset();
        row.attained = false;
        unknown = true;
        break;
      }
      if (c == Nilpotency::not_virtually_nilpotent) {
        row.flip = d;
        row.estimate = d;
        row.attained = false;
        break;
      }
    }
  }
  if (unknown) rep.provenance = "unknown";
  return rep;
}

// ---------------------------------------------------------------- short generators

ShortGenerators short_generators(const GroupAction& action, const Point& x0, const Length& R, const Length& D,
                                 std::size_t index_bound) {
  if (!(R > 0)) throw std::invalid_argument("separation R must be positive");
  if (D < 0) throw std::invalid_argument("codiameter must be nonnegative");
  const Space& sp = action.space();
  const Group& g = action.group();
  ShortGenerators out{R, D, {}, true, true, {}};
  const Length reach = D * 2 + R;
  for (const auto& e : action.orbit_within(x0, reach)) {
    if (g.is_identity(e.element)) continue;
    if (std::all_of(out.family.begin(), out.family.end(),
                    [&](const OrbitEntry& f) { return sp.distance(f.point, e.point) >= R; }))
      out.family.push_back(e);
  }
  // Re-verify (i) and (ii) from raw distances.
  for (std::size_t i = 0; i < out.family.size(); ++i) {
    if (sp.distance(x0, out.family[i].point) > reach) out.displacement_ok = false;
    for (std::size_t j = i + 1; j < out.family.size(); ++j)
      if (sp.distance(out.family[i].point, out.family[j].point) < R) out.separation_ok = false;
  }
  std::vector<GroupElement> gens;
  for (const auto& e : out.family) gens.push_back(e.element);
  out.index = g.subgroup_index(gens, index_bound);
  return out;
}

// ---------------------------------------------------------------- bound formulas

NuOracle::NuOracle(std::vector<std::pair<double, std::int64_t>> table) : table_(std::move(table)) {
  if (table_.empty()) throw std::invalid_argument("nu table is empty");
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (table_[i].second < 1) throw std::invalid_argument("nu values must be positive integers");
    if (i > 0 && !(table_[i].first > table_[i - 1].first))
      throw std::invalid_argument("nu table C values must be strictly increasing");
    if (i > 0 && table_[i].second < table_[i - 1].second) throw std::invalid_argument("nu must be nondecreasing");
  }
}

std::int64_t NuOracle::operator()(double C) const {
  auto it = std::lower_bound(table_.begin(), table_.end(), C,
                             [](const std::pair<double, std::int64_t>& e, double c) { return e.first < c; });
  if (it == table_.end())
    throw std::out_of_range("nu table ends at C = " + std::to_string(table_.back().first) + ", asked for " +
                            std::to_string(C));
  return it->second;
}

std::vector<std::string> bound_kinds() {
  return {"generators",   "generator_count", "betti_simply_connected", "betti_hyperbolic",        "systole_lower",
          "systole_lower_eps1", "margulis_scale", "margulis_scale_synthetic", "systole_busemann"};
}

namespace {

double need(const BoundParams& p, const char* name) {
  auto it = p.find(name);
  if (it == p.end()) throw std::invalid_argument(std::string("missing parameter ") + name);
  if (!std::isfinite(it->second)) throw std::invalid_argument(std::string("parameter ") + name + " is not finite");
  return it->second;
}

double positive(const BoundParams& p, const char* name) {
  double v = need(p, name);
  if (!(v > 0)) throw std::invalid_argument(std::string(name) + " must be positive");
  return v;
}

double nonnegative(const BoundParams& p, const char* name) {
  double v = need(p, name);
  if (!(v >= 0)) throw std::invalid_argument(std::string(name) + " must be nonnegative");
  return v;
}

double factor(const BoundParams& p) {
  double C = need(p, "C");
  if (!(C > 1)) throw std::invalid_argument("C must exceed 1");
  return C;
}

const NuOracle& need_nu(const NuOracle* nu) {
  if (!nu) throw std::invalid_argument("nu oracle required (the paper's function C -> nu(C) is not explicit)");
  return *nu;
}

}  // namespace

BoundValue evaluate_bound(const std::string& kind, const BoundParams& params, const NuOracle* nu) {
  BoundValue out{kind, 0, {}};
  const double ln2 = std::log(2.0);
  if (kind == "generators" || kind == "betti_simply_connected") {
    const double N = positive(params, "N"), K = nonnegative(params, "K"), D = nonnegative(params, "D");
    out.value = std::floor(std::exp(N * std::log(121.0) + 3 * K * D));
  } else if (kind == "generator_count") {
    const double C = factor(params), K = nonnegative(params, "K"), D = positive(params, "D");
    const double eps = positive(params, "eps0");
    out.value = C * std::exp(std::log(C) / ln2 * std::log1p(4 * D / eps) + K * (2 * D + eps / 2));
  } else if (kind == "betti_hyperbolic") {
    const double K = nonnegative(params, "K"), D = nonnegative(params, "D");
    const double delta = params.count("delta") ? nonnegative(params, "delta") : 0.0;
    out.value = 729 * std::exp(13 * K * (16 * D + 15 * delta));
  } else if (kind == "systole_lower") {
    const double C = factor(params), K = nonnegative(params, "K"), D = positive(params, "D");
    const double r0 = positive(params, "r0");
    out.value = D / C * std::exp(-std::log(C) / ln2 * std::log1p(6 * D / r0) - K * (3 * D + r0 / 2));
  } else if (kind == "systole_lower_eps1") {
    const double C = factor(params), K = nonnegative(params, "K"), D = positive(params, "D");
    const double arg = C * C * C * std::exp(15 * K * D) + 1;
    const double eps1 = D / static_cast<double>(need_nu(nu)(arg));
    out.intermediates["nu_argument"] = arg;
    out.intermediates["eps1"] = eps1;
    out.value = D / C * std::exp(-std::log(C) / ln2 * std::log1p(3 * D / eps1) - K * (3 * D + eps1));
  } else if (kind == "margulis_scale") {
    const double C = factor(params), K = nonnegative(params, "K"), r0 = positive(params, "r0");
    const double arg = C * C * C * std::exp(15 * K * r0) + 1;
    const double N0 = 0.5 * static_cast<double>(need_nu(nu)(arg));
    out.intermediates["nu_argument"] = arg;
    out.intermediates["N0"] = N0;
    out.value = r0 / N0;
  } else if (kind == "margulis_scale_synthetic") {
    const double N = positive(params, "N"), K = positive(params, "K");
    const double arg = std::exp(3 * N * std::log(300.0));
    const double N1 = 0.5 * static_cast<double>(need_nu(nu)(arg));
    out.intermediates["nu_argument"] = arg;
    out.intermediates["N1"] = N1;
    out.value = N / N1 / K;
  } else if (kind == "systole_busemann") {
    const double C = factor(params), K = nonnegative(params, "K"), D = positive(params, "D");
    const double r0 = positive(params, "r0");
    const double arg = C * C * C * std::exp(15 * K * r0) + 1;
    const double N0 = 0.5 * static_cast<double>(need_nu(nu)(arg));
    out.intermediates["nu_argument"] = arg;
    out.intermediates["N0"] = N0;
    const double stretch = 1 + 4 * N0 * D / r0;
    out.value = std::pow(C, -13.0 / 5) * D *
                std::exp(-std::log(C) / ln2 * std::log((1 + D / r0) * stretch) - 3 * K * (D + r0) * stretch);
  } else {
    throw std::invalid_argument("unknown bound kind '" + kind + "'");
  }
  return out;
}

CrossCheck bound_cross_check(const std::string& kind, double measured, const BoundParams& params,
                             const NuOracle* nu, std::vector<std::string> assumed, bool hypotheses_established) {
  CrossCheck out;
  out.kind = kind;
  out.measured = measured;
  out.assumed = std::move(assumed);
  out.relation = kind.rfind("systole", 0) == 0 || kind.rfind("margulis", 0) == 0 ? ">=" : "<=";
  out.established = hypotheses_established;
  out.bound = evaluate_bound(kind, params, nu);
  if (out.established) out.holds = out.relation == "<=" ? measured <= out.bound.value : measured >= out.bound.value;
  return out;
}

// ---------------------------------------------------------------- strengthened BG

double strengthened_bound_i(const BGParams& p, double r, double R) {
  return p.C * std::exp(std::log(p.C) / std::log(2.0) * std::log1p(2 * R / r) + p.K * (R + r / 2));
}

double strengthened_bound_ii(const BGParams& p, double D, double r, double R) {
  const double r0 = to_double(p.r0);
  const double stretch = 1 + 2 * R / r;
  return p.C * std::exp(std::log(p.C) / std::log(2.0) * std::log((1 + D / r0) * stretch) + p.K * (D + r0) * stretch);
}

double strengthened_bound_iii(const BGParams& p, double D, double r, double R) {
  const double r0 = to_double(p.r0);
  return p.C * std::exp(std::log(p.C) / std::log(2.0) * std::log((1 + D / r0) * R / r) + p.K * (D + r0) * R / r);
}

StrengthenedReport strengthened_bg_check(const GroupAction& action, const Point& x, const Certificate& certificate,
                                         double D, const std::vector<std::pair<Length, Length>>& pairs,
                                         const PackingOptions& packing) {
  if (certificate.status != Status::verified)
    throw HypothesisError("strengthened bounds need a verified weak certificate, got " +
                          to_string(certificate.status));
  const auto* pp = std::get_if<BGParams>(&certificate.params);
  if (!pp) throw HypothesisError("strengthened bounds need a weak (r0, C, K) certificate");
  const BGParams& p = *pp;
  if (!(D >= 0)) throw std::invalid_argument("codiameter must be nonnegative");
  const CountingOrbitMeasure orbit(std::shared_ptr<const GroupAction>(&action, [](const GroupAction*) {}), x);
  Length top = 0;
  for (const auto& [r, R] : pairs) {
    if (!(r > 0) || R < r) throw std::invalid_argument("pairs need 0 < r <= R");
    top = std::max(top, R);
  }
  const RadialProfile prof = orbit.profile(x, top);
  StrengthenedReport rep;
  auto add = [&](const Length& r, const Length& R, const char* f, Rational measured, double bound) {
    StrengthenedRow row{r, R, f, std::move(measured), bound};
    row.status = compare_with_margin(row.measured, std::log(bound));
    rep.status = combine(rep.status, row.status);
    rep.rows.push_back(std::move(row));
  };
  for (const auto& [r, R] : pairs) {
    const double rd = to_double(r), Rd = to_double(R);
    const Mass inner = prof.mass(r, false);
    const std::string tag = "(" + to_string(r) + ", " + to_string(R) + ")";
    if (r >= p.r0 * 2)
      add(r, R, "i", prof.mass(R, false) / inner, strengthened_bound_i(p, rd, Rd));
    else
      add(r, R, "ii", prof.mass(R, true) / inner, strengthened_bound_ii(p, D, rd, Rd));
    if (r < R && r <= p.r0) {
      std::size_t pack = 1;
      if (r * 2 <= R) pack = packing_count(action.space(), x, r, R, packing).count;
      add(r, R, "iii", Rational(static_cast<long long>(pack)), strengthened_bound_iii(p, D, rd, Rd));
    } else {
      rep.skipped.push_back(tag + ": (iii) needs r < R and r <= r0");
    }
  }
  return rep;
}

}  // namespace bgkit
