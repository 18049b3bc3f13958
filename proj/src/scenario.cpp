#include "sqom/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>

#include "sqom/constants.hpp"
#include "sqom/errors.hpp"
#include "sqom/spectra.hpp"

namespace sqom {

namespace {

using json = nlohmann::json;

enum class Dim { rate, coupling, length, mass, power, angle, temperature, force_psd, none };

const std::map<std::string, double>& unit_table(Dim d) {
  static const std::map<Dim, std::map<std::string, double>> tables = {
      {Dim::rate,
       {{"rad/s", 1.0}, {"Hz", two_pi}, {"mHz", two_pi * 1e-3}, {"uHz", two_pi * 1e-6},
        {"kHz", two_pi * 1e3}, {"MHz", two_pi * 1e6}, {"GHz", two_pi * 1e9}}},
      {Dim::coupling,
       {{"rad/s/m^2", 1.0}, {"Hz/m^2", two_pi}, {"Hz/nm^2", two_pi * 1e18},
        {"kHz/nm^2", two_pi * 1e21}, {"MHz/nm^2", two_pi * 1e24}}},
      {Dim::length, {{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}}},
      {Dim::mass, {{"kg", 1.0}, {"g", 1e-3}, {"mg", 1e-6}, {"ug", 1e-9}, {"ng", 1e-12}, {"pg", 1e-15}}},
      {Dim::power, {{"W", 1.0}, {"mW", 1e-3}, {"uW", 1e-6}, {"nW", 1e-9}}},
      {Dim::angle, {{"rad", 1.0}, {"deg", pi / 180.0}}},
      {Dim::temperature, {{"K", 1.0}, {"mK", 1e-3}}},
      {Dim::force_psd, {{"N^2/Hz", 1.0}, {"aN^2/Hz", 1e-36}, {"zN^2/Hz", 1e-42}}},
      {Dim::none, {{"", 1.0}, {"1", 1.0}}},
  };
  return tables.at(d);
}

struct Key {
  Dim dim;
  std::function<void(Scenario&, double)> set;
};

const std::map<std::string, Key>& registry() {
  static const std::map<std::string, Key> keys = {
      {"Omega_m", {Dim::rate, [](Scenario& s, double v) { s.raw.Omega_m = v; }}},
      {"Q_m", {Dim::none, [](Scenario& s, double v) { s.raw.Q_m = v; }}},
      {"Gamma_m", {Dim::rate, [](Scenario& s, double v) { s.raw.Gamma_m = v; }}},
      {"m_eff", {Dim::mass, [](Scenario& s, double v) { s.raw.m_eff = v; }}},
      {"kappa", {Dim::rate, [](Scenario& s, double v) { s.raw.kappa = v; }}},
      {"eta_c", {Dim::none, [](Scenario& s, double v) { s.raw.eta_c = v; }}},
      {"g0", {Dim::rate, [](Scenario& s, double v) { s.raw.g0 = v; }}},
      {"g_om", {Dim::coupling, [](Scenario& s, double v) { s.raw.g_om = v; }}},
      {"Delta", {Dim::rate, [](Scenario& s, double v) { s.raw.Delta = v; }}},
      {"n_bar", {Dim::none, [](Scenario& s, double v) { s.raw.n_bar = v; }}},
      {"temperature", {Dim::temperature, [](Scenario& s, double v) { s.raw.temperature = v; }}},
      {"lambda_s", {Dim::length, [](Scenario& s, double v) { s.raw.lambda_s = v; }}},
      {"cavity_length", {Dim::length, [](Scenario& s, double v) { s.raw.cavity_length = v; }}},
      {"membrane_reflectivity", {Dim::none, [](Scenario& s, double v) { s.raw.membrane_reflectivity = v; }}},
      {"q_bar_m", {Dim::none, [](Scenario& s, double v) { s.raw.q_bar_m = v; }}},
      {"coop", {Dim::none, [](Scenario& s, double v) { s.raw.coop = v; }}},
      {"C_over_CSQL", {Dim::none, [](Scenario& s, double v) { s.C_over_CSQL = v; }}},
      {"n_c", {Dim::none, [](Scenario& s, double v) { s.raw.n_c = v; }}},
      {"G", {Dim::rate, [](Scenario& s, double v) { s.sq.G = v; }}},
      {"G_over_kappa", {Dim::none, [](Scenario& s, double v) { s.G_over_kappa = v; }}},
      {"theta", {Dim::angle, [](Scenario& s, double v) { s.sq.theta = v; }}},
      {"nu", {Dim::rate, [](Scenario& s, double v) { s.sq.nu = v; }}},
      {"Delta_p", {Dim::rate, [](Scenario& s, double v) { s.sq.Delta_p = v; }}},
      {"P_p", {Dim::power, [](Scenario& s, double v) { s.sq.P_p = v; }}},
      {"eta_p", {Dim::none, [](Scenario& s, double v) { s.sq.eta_p = v; }}},
      {"Phi", {Dim::angle, [](Scenario& s, double v) { s.sq.Phi = v; }}},
      {"P_s", {Dim::power, [](Scenario& s, double v) { s.sq.P_s = v; }}},
      {"Omega", {Dim::rate, [](Scenario& s, double v) { s.Omega = v; }}},
      {"phi", {Dim::angle, [](Scenario& s, double v) { s.phi = v; }}},
      {"S_sig", {Dim::force_psd, [](Scenario& s, double v) { s.S_sig = v; }}},
  };
  return keys;
}

double convert(const std::string& key, Dim dim, double value, const std::string& unit) {
  const auto& table = unit_table(dim);
  auto it = table.find(unit);
  if (it == table.end()) {
    std::string allowed;
    for (const auto& [u, f] : table) allowed += (allowed.empty() ? "" : ", ") + (u.empty() ? "<none>" : u);
    throw parameter_error("unit '" + unit + "' not valid for " + key + " (allowed: " + allowed + ")");
  }
  if (!std::isfinite(value)) throw parameter_error(key + " is not finite");
  return value * it->second;
}

// Unit assumed for bare numbers: the SI entry of each table.
std::string bare_unit(Dim d) {
  for (const auto& [u, f] : unit_table(d))
    if (f == 1.0) return u;
  return "";
}

void set_key(Scenario& s, const std::string& key, double value, const std::string& unit) {
  const Key& k = registry().at(key);
  k.set(s, convert(key, k.dim, value, unit));
}

}  // namespace

std::vector<std::string> scenario_keys() {
  std::vector<std::string> out{"name", "description"};
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) throw parameter_error("scenario must be a JSON object");
  std::string unknown;
  for (const auto& [key, val] : doc.items())
    if (key != "name" && key != "description" && !registry().count(key))
      unknown += (unknown.empty() ? "" : ", ") + key;
  if (!unknown.empty()) throw parameter_error("unknown scenario keys: " + unknown);

  Scenario s;
  for (const auto& [key, val] : doc.items()) {
    if (key == "name" || key == "description") {
      if (!val.is_string()) throw parameter_error(key + " must be a string");
      if (key == "name") s.name = val.get<std::string>();
      continue;
    }
    if (val.is_number()) {
      set_key(s, key, val.get<double>(), bare_unit(registry().at(key).dim));
    } else if (val.is_object()) {
      for (const auto& [f, x] : val.items())
        if (f != "value" && f != "unit") throw parameter_error(key + ": unknown field '" + f + "' in unit tag");
      if (!val.contains("value") || !val["value"].is_number())
        throw parameter_error(key + ": unit tag needs a numeric \"value\"");
      std::string unit = val.contains("unit") ? val["unit"].get<std::string>() : bare_unit(registry().at(key).dim);
      set_key(s, key, val["value"].get<double>(), unit);
    } else {
      throw parameter_error(key + " must be a number or {\"value\", \"unit\"}");
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parameter_error("cannot open scenario file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw parameter_error("scenario " + path + ": " + e.what());
  }
  return parse_scenario(doc);
}

double parse_quantity(const std::string& key, const std::string& text) {
  auto it = registry().find(key);
  if (it == registry().end()) throw parameter_error("unknown scenario keys: " + key);
  const char* begin = text.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin) throw parameter_error(key + ": cannot parse number from '" + text + "'");
  std::string unit(end);
  unit.erase(0, unit.find_first_not_of(' '));
  unit.erase(unit.find_last_not_of(' ') + 1);
  if (unit.empty()) unit = bare_unit(it->second.dim);
  return convert(key, it->second.dim, v, unit);
}

void apply_override(Scenario& s, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw parameter_error("--set expects KEY=VALUE, got '" + assignment + "'");
  std::string key = assignment.substr(0, eq);
  double v = parse_quantity(key, assignment.substr(eq + 1));
  registry().at(key).set(s, v);
}

Scenario reference_scenario() {
  // membrane-in-the-middle device; g_om follows from R and L
  Scenario s;
  s.name = "reference";
  s.raw.Omega_m = two_pi * 1e6;
  s.raw.Q_m = 5e8;
  s.raw.m_eff = 1e-12;
  s.raw.kappa = two_pi * 2.75e6;
  s.raw.eta_c = 1.0;
  s.raw.n_bar = 0.21;
  s.raw.lambda_s = 1560e-9;
  s.raw.cavity_length = 1e-3;
  s.raw.membrane_reflectivity = 0.76;
  s.C_over_CSQL = 0.505;
  s.G_over_kappa = 0.246;
  s.sq.theta = -1e-4;
  return s;
}

Configuration resolve(const Scenario& s) {
  RawParams raw = s.raw;
  if (s.C_over_CSQL) {
    if (raw.coop || raw.q_bar_m) throw parameter_error("C_over_CSQL excludes coop and q_bar_m");
    raw.coop = 0.0;
  }
  Configuration c;
  c.sys = derive_params(raw);
  c.sq = s.sq;
  c.Omega = s.Omega;
  c.phi = s.phi;
  if (s.C_over_CSQL) {
    if (*s.C_over_CSQL < 0.0) throw parameter_error("C_over_CSQL must be non-negative");
    c = with_axis(c, Axis::C_over_CSQL, *s.C_over_CSQL);
  }
  if (s.G_over_kappa) {
    if (s.sq.G != 0.0) throw parameter_error("give either G or G_over_kappa, not both");
    c = with_axis(c, Axis::G_over_kappa, *s.G_over_kappa);
  }
  if (c.sq.G < 0.0) throw parameter_error("G must be non-negative");
  if (c.sq.eta_p && !(*c.sq.eta_p > 0.0 && *c.sq.eta_p <= 1.0)) throw parameter_error("eta_p must lie in (0, 1]");
  return c;
}

json to_json(const SystemParams& p) {
  json j = {{"Omega_m", p.Omega_m}, {"Q_m", p.Q_m}, {"Gamma_m", p.Gamma_m}, {"m_eff", p.m_eff},
            {"kappa", p.kappa}, {"eta_c", p.eta_c}, {"g0", p.g0}, {"Delta", p.Delta},
            {"Delta_c", p.Delta_c}, {"n_bar", p.n_bar}, {"lambda_s", p.lambda_s},
            {"Omega_l", p.Omega_l}, {"q_zp", p.q_zp}, {"n_c", p.n_c}, {"q_bar_m", p.q_bar_m},
            {"g", p.g}, {"coop", p.coop}};
  if (p.g_om) j["g_om"] = *p.g_om;
  if (p.temperature) j["temperature"] = *p.temperature;
  if (p.cavity_length) j["cavity_length"] = *p.cavity_length;
  if (p.membrane_reflectivity) j["membrane_reflectivity"] = *p.membrane_reflectivity;
  return j;
}

json to_json(const SqueezerParams& q) {
  json j = {{"G", q.G}, {"theta", q.theta}};
  if (q.nu) j["nu"] = *q.nu;
  if (q.Delta_p) j["Delta_p"] = *q.Delta_p;
  if (q.P_p) j["P_p"] = *q.P_p;
  if (q.eta_p) j["eta_p"] = *q.eta_p;
  if (q.Phi) j["Phi"] = *q.Phi;
  if (q.P_s) j["P_s"] = *q.P_s;
  return j;
}

json to_json(const Configuration& c) {
  json j = {{"system", to_json(c.sys)}, {"squeezer", to_json(c.sq)}, {"Omega", c.Omega}, {"phi", c.phi}};
  j["G_over_kappa"] = c.sq.G / c.sys.kappa;
  j["C_over_CSQL"] = c.sys.coop / cooperativity_sql(c.sys, c.Omega);
  j["phi_deg"] = c.phi * 180.0 / pi;
  return j;
}

}  // namespace sqom
