#pragma once

#include "bgkit/action_analysis.hpp"
#include "bgkit/covers.hpp"
#include "bgkit/measure.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bgkit {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

// Input document does not match the schema; `path` is a JSON-pointer-like location.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Rationals are "p/q" strings or JSON integers; floating-point numbers are rejected.
Rational rational_from_json(const Json& j, const std::string& path);
std::int64_t integer_from_json(const Json& j, const std::string& path);
Json to_json(const Rational& q);
Json to_json(const Point& p);

GroupPtr parse_group(const Json& j, const std::string& path = "$.group");
SpacePtr parse_space(const Json& j, const std::string& path = "$");

// A space, optionally with an action. For deck actions `space` is the cover
// and `base_graph` the graph it covers.
struct Setup {
  SpacePtr space;
  ActionPtr action;
  std::shared_ptr<const WeightedGraph> base_graph;
  std::shared_ptr<const CoverTreeSpace> cover;
};

Setup load_setup(const Json& space_doc, const Json* action_doc = nullptr);

// {"kind": "counting_orbit" | "vertex_uniform" | "vertex_weights" | "pullback" | "atom", ...}.
// A bare string is shorthand for {"kind": <string>}. `center` is the default basepoint.
MeasurePtr parse_measure(const Json& j, const Setup& setup, const std::optional<Point>& center,
                         const std::string& path = "$.measure");

NuOracle parse_nu_table(const Json& j, const std::string& path = "$");

Json read_json_file(const std::string& file);

// ---------------------------------------------------------------- reports

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  std::string operation;
  Json params = Json::object();
  std::string status = "success";
  Json result = Json::object();
  Json witnesses = Json::array();
  std::vector<std::string> assumptions;
  std::optional<std::uint64_t> seed;
  std::optional<Table> table;
};

// Keys sorted, timestamp from SOURCE_DATE_EPOCH or null.
Json report_to_json(const Report& report);
std::string serialize(const Json& j);

// 12 significant digits.
std::string decimal(const Rational& q);
std::string decimal(double v);

// RFC-4180; throws std::invalid_argument when the report has no table.
void export_csv(const Report& report, std::ostream& out);
void export_csv(const Report& report, const std::string& file);

}  // namespace bgkit
