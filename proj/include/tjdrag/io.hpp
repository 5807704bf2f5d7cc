#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tjdrag/compat.hpp"
#include "tjdrag/diagnostics.hpp"
#include "tjdrag/fixedpoint.hpp"
#include "tjdrag/flow.hpp"
#include "tjdrag/geometry.hpp"
#include "tjdrag/scenario.hpp"
#include "tjdrag/stationary.hpp"

namespace tjdrag {

using json = nlohmann::json;

/// %.17g: enough digits to round-trip any double.
std::string format_double(double v);

json to_json(const Vec2& p);
json to_json(const Curve& c);      // {"n", "points"}
json to_json(const Network& net);  // {"curves": [...], "anchors"}
json to_json(const TensionModel& m);
json to_json(const IntersectionEvent& e);
json to_json(const SimEvent& e);
json to_json(const SimRecord& rec);
json to_json(const CompatReport& rep);
json to_json(const StationaryReport& rep);
json to_json(const ContractionReport& rep);
json to_json(const IntersectionScenario& sc);

/// Throw ConfigError on missing fields, wrong types or bad shapes.
Vec2 vec2_from_json(const json& j);
Curve curve_from_json(const json& j);
Network network_from_json(const json& j);

Network read_network_file(const std::filesystem::path& path);

void write_trace_csv(std::ostream& os, const std::vector<TracePoint>& trace);
void write_snapshot_csv(std::ostream& os, const Network& net);
void write_eigen_sweep_csv(std::ostream& os, const std::vector<double>& cs);
void write_contraction_csv(std::ostream& os, const ContractionReport& rep);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace tjdrag
