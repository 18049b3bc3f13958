#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqom/configuration.hpp"

namespace sqom {

// A parameter file: flat JSON object of name -> number, or
// name -> {"value": number, "unit": "Hz"}. Bare numbers are SI (rad/s for rates).
struct Scenario {
  std::string name;
  RawParams raw;
  SqueezerParams sq;
  std::optional<double> C_over_CSQL;
  std::optional<double> G_over_kappa;
  double Omega = 2.0 * 3.14159265358979323846 * 100.0;
  double phi = 3.14159265358979323846 / 2.0;
  double S_sig = 1.9e-21 * 1.9e-21;
};

Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

// "KEY=VALUE" or "KEY=VALUE UNIT", e.g. "Omega=100 Hz".
void apply_override(Scenario& s, const std::string& assignment);

// Number with optional unit, converted with the unit table of a scenario key.
double parse_quantity(const std::string& key, const std::string& text);

// Reference membrane device at n_bar = 0.21,
// C = 0.505 C_SQL, G = 0.246 kappa, theta = -1e-4 (inside the stable band).
Scenario reference_scenario();

Configuration resolve(const Scenario& s);

// Resolved parameters in SI units, for manifests and reports.
nlohmann::json to_json(const SystemParams& sys);
nlohmann::json to_json(const SqueezerParams& sq);
nlohmann::json to_json(const Configuration& cfg);

std::vector<std::string> scenario_keys();

}  // namespace sqom
