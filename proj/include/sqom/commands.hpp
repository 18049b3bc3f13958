#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqom/metrics.hpp"

namespace sqom {

inline constexpr const char* toolkit_version = "0.1.0";

// One CLI invocation. Returns the exit code: 0 on success (manifest written),
// 2 for usage and parameter errors, 3 for physics-domain errors, 1 otherwise.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

nlohmann::json to_json(const OptimumReport& r);

// "NAME", "NAME:lo:hi" or "NAME:lo:hi:log". Bounds are in axis units
// (rad for phi and theta, ratios for C_over_CSQL and G_over_kappa).
AxisBounds parse_axis_bounds(const std::string& text);

}  // namespace sqom
