#pragma once

#include "uqbench/budget.hpp"
#include "uqbench/calibration.hpp"
#include "uqbench/estimators.hpp"
#include "uqbench/xustein.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace uqbench {

enum class Format { json, csv, svg };

std::string_view to_string(Format f);
Format parse_format(std::string_view name);

/// Serializes with sorted keys, two-space indent and floats at 12
/// significant digits (shortest round-trip form when that is shorter).
/// Non-finite floats become null. Ends with a newline.
std::string dump_json(const nlohmann::json& j);

nlohmann::json to_json(const Estimate& e, const std::vector<double>& levels);
nlohmann::json to_json(const CalibrationReport& r);
nlohmann::json to_json(const ComparisonTable& t);
nlohmann::json to_json(const std::vector<ScaleGrowthReport>& reports);

/// Checks an artifact produced by dump_json against its documented schema
/// (dispatching on the "kind" key). Throws ValidationError naming the
/// first problem.
void validate_artifact(const nlohmann::json& j);

std::string render(const Estimate& e, const std::vector<double>& levels, Format f);
std::string render(const CalibrationReport& r, Format f);
std::string render(const ComparisonTable& t, Format f);
std::string render(const std::vector<ScaleGrowthReport>& reports, Format f);

/// Coverage against level with the y = x reference diagonal.
std::string coverage_svg(const CalibrationReport& r);
/// Log-log RMSE against modeled cost, one marker per included method.
std::string comparison_svg(const ComparisonTable& t);
/// Log-log sigma_hat against n, one polyline per p.
std::string scale_growth_svg(const std::vector<ScaleGrowthReport>& reports);

/// Writes `content` to `path` ("-" means stdout). Throws IoError on failure.
void write_artifact(const std::string& path, const std::string& content);

} // namespace uqbench
