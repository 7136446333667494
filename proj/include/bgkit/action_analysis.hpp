#pragma once

#include "bgkit/action.hpp"
#include "bgkit/curvature.hpp"
#include "bgkit/packing.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bgkit {

// Σ_r(x) and the subgroup Γ_r(x) it generates.
struct SigmaR {
  Length r;
  std::vector<OrbitEntry> elements;
  std::vector<GroupElement> generators;  // the nontrivial elements of Σ_r(x)
  Nilpotency classification = Nilpotency::unknown;
};
SigmaR sigma_r(const GroupAction& action, const Point& x, const Length& r);

struct SystoleRow {
  Point point;
  std::optional<Length> sys;     // nullopt for a trivial group
  std::optional<Length> sys_tf;  // nullopt when no torsion-free element exists
  bool stabilized = false;       // some γ != e fixes the point
};

struct SystoleReport {
  std::vector<SystoleRow> rows;
  std::optional<Length> diastole, diastole_tf;        // max over the sample
  std::optional<Length> global_sys, global_sys_tf;    // min over the sample
  std::vector<std::string> warnings;
};

// Minimal displacements, searching radii start, 2 start, ... up to max_radius.
SystoleReport systole(const GroupAction& action, const std::vector<Point>& sample, const Length& max_radius = 1024);

enum class Connectivity { empty, disconnected, connected, inconclusive };
std::string to_string(Connectivity c);

struct ThinSetReport {
  Length r;
  std::vector<Point> members, members_tf;  // X_r and its torsion-free variant
  Connectivity verdict = Connectivity::empty, verdict_tf = Connectivity::empty;
  std::size_t components = 0, components_tf = 0;
};

// Connectivity on the subgraph induced by the sample's adjacency. A disconnected
// induced subgraph only proves disconnection when the sample is exhaustive.
ThinSetReport thin_set(const GroupAction& action, const Length& r, const std::vector<Point>& sample,
                       bool exhaustive_sample, const SystoleReport& systoles);

struct MargulisRow {
  Point point;
  std::optional<Length> estimate;  // nullopt when some classification is unknown
  bool attained = false;           // false when the supremum is a flip radius
  std::optional<Length> flip;      // first radius with Γ_r(x) not virtually nilpotent
};

struct MargulisEstimate {
  Length ceiling;
  std::vector<MargulisRow> rows;
  std::string provenance;  // classifier used, or "unknown"
};
MargulisEstimate margulis_estimate(const GroupAction& action, const std::vector<Point>& sample,
                                   const Length& ceiling);

struct ShortGenerators {
  Length R, D;
  std::vector<OrbitEntry> family;
  bool displacement_ok = true;  // d(x0, γ_i x0) <= 2D + R
  bool separation_ok = true;    // d(γ_i x0, γ_j x0) >= R
  IndexEvidence index;
};
ShortGenerators short_generators(const GroupAction& action, const Point& x0, const Length& R, const Length& D,
                                 std::size_t index_bound = 100000);

// Step function C -> ν(C): the value of the smallest tabulated C_i >= C.
class NuOracle {
 public:
  explicit NuOracle(std::vector<std::pair<double, std::int64_t>> table);
  std::int64_t operator()(double C) const;
  const std::vector<std::pair<double, std::int64_t>>& table() const { return table_; }

 private:
  std::vector<std::pair<double, std::int64_t>> table_;
};

struct BoundValue {
  std::string kind;
  double value = 0;
  std::map<std::string, double> intermediates;
};

using BoundParams = std::map<std::string, double>;

// Kinds: generators, generator_count, betti_simply_connected, betti_hyperbolic,
// systole_lower, systole_lower_eps1, margulis_scale, margulis_scale_synthetic,
// systole_busemann.
BoundValue evaluate_bound(const std::string& kind, const BoundParams& params, const NuOracle* nu = nullptr);
std::vector<std::string> bound_kinds();

struct CrossCheck {
  std::string kind;
  double measured = 0;
  BoundValue bound;
  std::string relation;  // "<=" (counts) or ">=" (systole lower bounds)
  bool established = true;
  bool holds = true;
  std::vector<std::string> assumed;
};

CrossCheck bound_cross_check(const std::string& kind, double measured, const BoundParams& params,
                             const NuOracle* nu = nullptr, std::vector<std::string> assumed = {},
                             bool hypotheses_established = true);

struct StrengthenedRow {
  Length r, R;
  std::string formula;  // "i", "ii", "iii"
  Rational measured;
  double bound = 0;
  Status status = Status::verified;
};

struct StrengthenedReport {
  std::vector<StrengthenedRow> rows;
  std::vector<std::string> skipped;
  Status status = Status::verified;
  std::optional<Length> convexity_defect;  // supporting evidence only
};

double strengthened_bound_i(const BGParams& p, double r, double R);
double strengthened_bound_ii(const BGParams& p, double D, double r, double R);
double strengthened_bound_iii(const BGParams& p, double D, double r, double R);

// Needs a verified weak certificate of a Γ-invariant measure at the given params.
StrengthenedReport strengthened_bg_check(const GroupAction& action, const Point& x, const Certificate& certificate,
                                         double D, const std::vector<std::pair<Length, Length>>& pairs,
                                         const PackingOptions& packing = {});

}  // namespace bgkit
