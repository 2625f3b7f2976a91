// Copyright 2026 The qedge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qedge/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qedge/discrete_oracle.hpp"
#include "qedge/edge_analytics.hpp"
#include "qedge/io.hpp"
#include "qedge/model.hpp"
#include "qedge/parallel.hpp"
#include "qedge/profiles.hpp"
#include "qedge/scattering.hpp"
#include "qedge/special_functions.hpp"
#include "qedge/spoiler_analytics.hpp"
#include "qedge/statistical_band.hpp"

namespace qedge {

const char* const kToolVersion = QEDGE_VERSION;

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum class Kind { Real, Int, Bool, Text, List };

struct KeySpec {
  const char* name;
  Kind kind;
  const char* def;
  const char* choices = "";  // '|' separated, Text only
};

using KeyTable = std::vector<KeySpec>;

const std::map<std::string, KeyTable>& key_tables() {
  static const std::map<std::string, KeyTable> t = {
      {"oracle",
       {{"mode", Kind::Text, "static", "static|moving"},
        {"m", Kind::Int, "4000"},
        {"v", Kind::Real, "0.1"},
        {"gamma", Kind::Real, "40"},
        {"e0", Kind::Real, "-1"},
        {"t_max", Kind::Real, "50"},
        {"n_t", Kind::Int, "101"},
        {"e_o", Kind::Real, "0"},
        {"alpha", Kind::Real, "1"},
        {"t_span", Kind::Real, "0"},
        {"dressed_start", Kind::Bool, "true"},
        {"e_s", Kind::Real, "0"},
        {"v_s", Kind::Real, "0"}}},
      {"edge",
       {{"mode", Kind::Text, "series", "series|surface"},
        {"w", Kind::Real, "1"},
        {"ebar0", Kind::Real, "1"},
        {"v", Kind::Real, "0.1"},
        {"gamma", Kind::Real, "40"},
        {"t_max", Kind::Real, "100"},
        {"n_t", Kind::Int, "201"},
        {"e_max", Kind::Real, "0"},
        {"n_e", Kind::Int, "400"},
        {"gaps", Kind::List, "0.2,0.5,1,2,5,10"}}},
      {"spoiler",
       {{"w", Kind::Real, "1"},
        {"ebar0", Kind::Real, "1"},
        {"v", Kind::Real, "0.1"},
        {"gamma", Kind::Real, "40"},
        {"e_s", Kind::Real, "5"},
        {"v_s", Kind::Real, "2.2360679774997898"},
        {"t_max", Kind::Real, "100"},
        {"n_t", Kind::Int, "201"},
        {"e_max", Kind::Real, "0"},
        {"n_e", Kind::Int, "400"},
        {"t_large", Kind::Real, "0"}}},
      {"scatter",
       {{"mode", Kind::Text, "single", "single|width_surface|transfer_surface|spoiler_surface"},
        {"w", Kind::Real, "1"},
        {"e_o", Kind::Real, "-1"},
        {"alpha", Kind::Real, "1"},
        {"gamma", Kind::Real, "40"},
        {"e_s", Kind::List, ""},
        {"v_s", Kind::List, ""},
        {"absorption", Kind::Bool, "true"},
        {"n_profile", Kind::Int, "2000"},
        {"e_o_grid", Kind::List, "-4,-2,-1,0,1,2"},
        {"alpha_grid", Kind::List, "0.1,0.3,1,3,10"},
        {"axis1", Kind::Text, "v_s2", "e_o|alpha|sqrt_alpha|e_s|v_s2"},
        {"values1", Kind::List, "0.5,1,2,5,10"},
        {"axis2", Kind::Text, "e_s", "e_o|alpha|sqrt_alpha|e_s|v_s2"},
        {"values2", Kind::List, "2,4,6,8,10"},
        {"quantity", Kind::Text, "inverse_width", "inverse_width|ratio|absorbed"}}},
      {"ensemble",
       {{"w", Kind::Real, "1"},
        {"gamma", Kind::Real, "40"},
        {"count", Kind::List, "30"},
        {"v_max", Kind::Real, "1"},
        {"realizations", Kind::Int, "50"},
        {"batches", Kind::Int, "1"},
        {"e_o", Kind::List, "0"},
        {"alpha", Kind::List, "1"}}},
      {"stats",
       {{"mode", Kind::Text, "tractable", "tractable|stationary|decay|tractable_surface|edge_density"},
        {"w", Kind::Real, "1"},
        {"u", Kind::List, "1"},
        {"ebar_o", Kind::List, "1"},
        {"e_max", Kind::Real, "0"},
        {"n_e", Kind::Int, "200"},
        {"coefficient", Kind::Real, "56.548667764616276"},
        {"v_probe", Kind::Real, "0.1"},
        {"t_min", Kind::Real, "10"},
        {"t_max", Kind::Real, "10000"},
        {"n_t", Kind::Int, "61"}}},
      {"spectrum",
       {{"n_atoms", Kind::Int, "7"},
        {"omega", Kind::Real, "1"},
        {"scale2", Kind::Real, "0.3"},
        {"scale3", Kind::Real, "0.1"},
        {"scale4", Kind::Real, "0.05"}}},
  };
  return t;
}

using Values = std::vector<std::pair<std::string, std::string>>;

std::string num(double x) { return format_double(x); }

// Named parameter sets; explicit keys still override them.
const std::map<std::string, std::map<std::string, Values>>& presets() {
  static const std::map<std::string, std::map<std::string, Values>> p = [] {
    std::map<std::string, std::map<std::string, Values>> m;
    const double r5 = std::sqrt(5.0);
    // Analytic counterpart of the scattering preset: E0 = -w, g = 100, V = 0.03.
    const double w = 0.09;
    m["spoiler"]["figD3"] = {{"w", num(w)},
                             {"v", "0.03"},
                             {"gamma", "40"},
                             {"ebar0", num(w + w * std::log(40.0))},
                             {"e_s", num(5 * w)},
                             {"v_s", num(w * r5)}};
    m["scatter"]["figD3"] = {{"mode", "single"}, {"w", "1"}, {"e_o", "-1"}, {"alpha", "1"},
                             {"e_s", "5"},      {"v_s", num(r5)}};
    const Values widths = {{"mode", "spoiler_surface"}, {"quantity", "inverse_width"}};
    auto with = [](Values base, const Values& extra) {
      base.insert(base.end(), extra.begin(), extra.end());
      return base;
    };
    m["scatter"]["figSpNonad_caption"] =
        with(widths, {{"e_o", "-5"}, {"alpha", "1"}, {"e_s", "5"}, {"v_s", "1"}, {"axis1", "e_s"},
                      {"values1", "2,4,6,8,10,12"}, {"axis2", "v_s2"}, {"values2", "0.5,1,2,4,8"}});
    m["scatter"]["figSpNonad_body"] =
        with(widths, {{"e_o", "-9"}, {"alpha", "0.01"}, {"e_s", "5"}, {"v_s", "1"}, {"axis1", "e_s"},
                      {"values1", "2,4,6,8,10,12"}, {"axis2", "v_s2"}, {"values2", "0.5,1,2,4,8"}});
    m["scatter"]["figD4_caption"] =
        with(widths, {{"e_o", "-5"}, {"e_s", "2"}, {"v_s", "1"}, {"axis1", "alpha"},
                      {"values1", "0.1,0.3,1,3,10"}, {"axis2", "v_s2"}, {"values2", "0.5,1,2,4,8"}});
    m["scatter"]["figD4_body"] =
        with(widths, {{"e_o", "-9"}, {"e_s", "8.7"}, {"v_s", "1"}, {"axis1", "alpha"},
                      {"values1", "0.1,0.3,1,3,10"}, {"axis2", "v_s2"}, {"values2", "0.5,1,2,4,8"}});
    m["scatter"]["figSp2"] = {{"mode", "spoiler_surface"}, {"quantity", "ratio"}, {"e_o", "-5"},
                              {"e_s", "2"}, {"v_s", "1"}, {"axis1", "v_s2"},
                              {"values1", "0.5,1,2,4,8"}, {"axis2", "sqrt_alpha"},
                              {"values2", "0.3,0.5,1,2,3"}};
    m["scatter"]["figSp3"] = {{"mode", "spoiler_surface"}, {"quantity", "ratio"}, {"e_o", "-5"},
                              {"alpha", "1"}, {"e_s", "2"}, {"v_s", "1"}, {"axis1", "v_s2"},
                              {"values1", "0.5,1,2,4,8"}, {"axis2", "e_s"},
                              {"values2", "2,4,6,8,10"}};
    return m;
  }();
  return p;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& field, const std::string& s) {
  std::string t = trim(s);
  char* end = nullptr;
  double x = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || !std::isfinite(x)) throw ConfigError(field, "expected a finite number, got '" + s + "'");
  return x;
}

long long parse_int(const std::string& field, const std::string& s) {
  std::string t = trim(s);
  char* end = nullptr;
  long long x = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || *end != '\0') throw ConfigError(field, "expected an integer, got '" + s + "'");
  return x;
}

bool parse_bool(const std::string& field, const std::string& s) {
  std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(field, "expected true or false, got '" + s + "'");
}

std::vector<double> parse_list(const std::string& field, const std::string& s) {
  std::vector<double> out;
  std::string t = trim(s);
  if (t.empty()) return out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(field, item));
  return out;
}

std::string normalize(const KeySpec& k, const std::string& field, const std::string& v) {
  switch (k.kind) {
    case Kind::Real:
      return num(parse_real(field, v));
    case Kind::Int:
      return std::to_string(parse_int(field, v));
    case Kind::Bool:
      return parse_bool(field, v) ? "true" : "false";
    case Kind::List: {
      std::string out;
      for (double x : parse_list(field, v)) out += (out.empty() ? "" : ",") + num(x);
      return out;
    }
    case Kind::Text: {
      std::string t = trim(v);
      std::stringstream ss(k.choices);
      std::string c;
      while (std::getline(ss, c, '|'))
        if (c == t) return t;
      throw ConfigError(field, "must be one of " + std::string(k.choices) + ", got '" + v + "'");
    }
  }
  return v;
}

// Typed view of a resolved parameter map.
class Params {
 public:
  explicit Params(std::map<std::string, std::string> m) : m_(std::move(m)) {}
  const std::string& text(const std::string& k) const { return m_.at(k); }
  double real(const std::string& k) const { return std::strtod(m_.at(k).c_str(), nullptr); }
  long long integer(const std::string& k) const { return std::strtoll(m_.at(k).c_str(), nullptr, 10); }
  bool flag(const std::string& k) const { return m_.at(k) == "true"; }
  std::vector<double> list(const std::string& k) const { return parse_list("params." + k, m_.at(k)); }

 private:
  std::map<std::string, std::string> m_;
};

const KeyTable& table_for(const std::string& scenario) {
  auto it = key_tables().find(scenario);
  if (it == key_tables().end()) {
    std::string ids;
    for (const auto& s : scenario_ids()) ids += (ids.empty() ? "" : ", ") + s;
    throw ConfigError("scenario", "unknown scenario '" + scenario + "' (valid: " + ids + ")");
  }
  return it->second;
}

const KeySpec* find_key(const KeyTable& t, const std::string& name) {
  for (const auto& k : t)
    if (name == k.name) return &k;
  return nullptr;
}

// Module preconditions, each reported against the field that breaks it.
void require(bool ok, const std::string& key, const std::string& msg) {
  if (!ok) throw ConfigError("params." + key, msg);
}

void check_positive(const Params& p, const std::string& k) { require(p.real(k) > 0.0, k, "must be positive"); }

void check_min_int(const Params& p, const std::string& k, long long lo) {
  require(p.integer(k) >= lo, k, "must be >= " + std::to_string(lo));
}

void check_list(const Params& p, const std::string& k, bool positive, std::size_t exact = 0) {
  auto v = p.list(k);
  require(!v.empty(), k, "must not be empty");
  if (exact) require(v.size() == exact, k, "must hold exactly " + std::to_string(exact) + " value(s) in this mode");
  if (positive)
    for (double x : v) require(x > 0.0, k, "values must be positive");
}

void check_scenario(const std::string& s, const Params& p) {
  if (s == "oracle") {
    check_min_int(p, "m", 2);
    require(p.integer("m") <= 200000, "m", "exceeds the supported size 200000");
    require(p.real("v") != 0.0, "v", "must be nonzero");
    check_positive(p, "gamma");
    check_min_int(p, "n_t", 2);
    check_positive(p, "t_max");
    if (p.text("mode") == "static") require(p.real("e0") < 0.0, "e0", "must lie below the band edge");
    if (p.text("mode") == "moving") {
      check_positive(p, "alpha");
      require(p.real("t_span") >= 0.0, "t_span", "must be >= 0 (0 selects it automatically)");
    }
    if (p.real("v_s") != 0.0)
      require(p.real("e_s") > 0.0 && p.real("e_s") < p.real("gamma"), "e_s", "must lie inside the band (0, gamma)");
  } else if (s == "edge" || s == "spoiler") {
    check_positive(p, "w");
    require(p.real("v") != 0.0, "v", "must be nonzero");
    check_positive(p, "gamma");
    check_positive(p, "t_max");
    check_min_int(p, "n_t", 2);
    check_min_int(p, "n_e", 2);
    require(p.real("e_max") >= 0.0, "e_max", "must be >= 0 (0 selects it automatically)");
    if (s == "edge" && p.text("mode") == "surface") check_list(p, "gaps", true);
    if (s == "spoiler") {
      check_positive(p, "e_s");
      require(p.real("e_s") < p.real("gamma"), "e_s", "must lie inside the band (0, gamma)");
      require(p.real("t_large") >= 0.0, "t_large", "must be >= 0 (0 selects it automatically)");
    }
  } else if (s == "scatter") {
    check_positive(p, "w");
    check_positive(p, "alpha");
    check_positive(p, "gamma");
    check_min_int(p, "n_profile", 16);
    auto es = p.list("e_s"), vs = p.list("v_s");
    require(es.size() == vs.size(), "v_s", "needs one coupling per spoiler energy in e_s");
    for (double e : es) require(e > 0.0, "e_s", "spoiler energies must be positive");
    const std::string mode = p.text("mode");
    if (mode == "width_surface" || mode == "transfer_surface") {
      check_list(p, "e_o_grid", false);
      check_list(p, "alpha_grid", true);
    }
    if (mode == "spoiler_surface") {
      require(es.size() == 1, "e_s", "spoiler_surface needs exactly one spoiler");
      require(p.text("axis1") != p.text("axis2"), "axis2", "must differ from axis1");
      for (const char* a : {"1", "2"}) {
        std::string axis = p.text(std::string("axis") + a);
        check_list(p, std::string("values") + a, axis != "e_o");
      }
    }
  } else if (s == "ensemble") {
    check_positive(p, "w");
    check_positive(p, "gamma");
    require(p.real("v_max") >= 0.0, "v_max", "must be >= 0");
    check_min_int(p, "realizations", 1);
    check_min_int(p, "batches", 1);
    check_list(p, "count", false);
    for (double c : p.list("count"))
      require(c >= 0.0 && c == std::floor(c) && c <= 10000, "count", "values must be integers in [0, 10000]");
    check_list(p, "e_o", false);
    check_list(p, "alpha", true);
  } else if (s == "stats") {
    check_positive(p, "w");
    check_min_int(p, "n_e", 2);
    require(p.real("e_max") >= 0.0, "e_max", "must be >= 0 (0 selects it automatically)");
    const std::string mode = p.text("mode");
    bool surface = mode == "tractable_surface" || mode == "edge_density";
    check_list(p, "u", false, surface ? 0 : 1);
    check_list(p, "ebar_o", false, surface ? 0 : 1);
    for (double u : p.list("u")) require(u > 0.0, "u", "must be positive");
    if (mode == "stationary") {
      check_positive(p, "v_probe");
      // Reference root must sit below -w.
      double e = p.list("ebar_o")[0], w = p.real("w");
      require(w * lambert_w0_exp(e / w - std::log(w)) > w, "ebar_o", "too small: the reference root must lie below -w");
    }
    if (mode == "decay") {
      check_positive(p, "t_min");
      require(p.real("t_max") > p.real("t_min"), "t_max", "must exceed t_min");
      check_min_int(p, "n_t", 2);
    }
    check_positive(p, "coefficient");
  } else if (s == "spectrum") {
    check_min_int(p, "n_atoms", 1);
    require(p.integer("n_atoms") <= 16, "n_atoms", "exceeds the supported size 16");
  }
}

// ---------------------------------------------------------------- output

struct Writer {
  std::string dir;
  std::vector<Artifact> arts;

  void put(const std::string& file, const std::string& schema, const std::string& bytes) {
    write_file((fs::path(dir) / file).string(), bytes);
    arts.push_back({file, schema, sha256_hex(bytes), bytes.size()});
  }
  void csv(const std::string& file, const std::string& schema, CsvTable t) {
    t.columns = csv_schema(schema).columns;
    put(file, schema, to_csv(t));
  }
  void summary(const std::string& file, const std::string& schema, const json& j) {
    for (const auto& k : json_schema(schema).keys)
      if (!j.contains(k)) throw NumericError("internal: summary lacks key " + k);
    put(file, schema, j.dump(2) + "\n");
  }
};

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json windows_json(const Windows& w) {
  return {{"edge", {w.edge_lo, w.edge_hi}}, {"spoiler", {w.spoiler_lo, w.spoiler_hi}}};
}

std::vector<double> time_grid(double t_max, long long n) { return linspace(0.0, t_max, static_cast<std::size_t>(n)); }

// Band grid from half a level spacing up to e_max.
std::vector<double> energy_grid(const EdgeParams& ep, double e_max, long long n) {
  double lo = 0.5 * ep.v * ep.v / ep.w;
  if (!(e_max > lo)) throw ConfigError("params.e_max", "must exceed half the level spacing");
  return logspace(lo, e_max, static_cast<std::size_t>(n));
}

// ---------------------------------------------------------------- runners

void run_oracle(const Params& p, Writer& out) {
  ContinuumEdgeParams cp;
  cp.v = p.real("v");
  cp.gamma = p.real("gamma");
  cp.e0 = p.real("e0");
  const auto m = static_cast<std::size_t>(p.integer("m"));
  cp.g = static_cast<double>(m - 1) / cp.gamma;
  DiscreteBand band = build_uniform_edge_band(cp, m);
  if (p.real("v_s") != 0.0) band = with_extra_levels(band, {{p.real("e_s"), p.real("v_s")}});
  const double w = cp.g * cp.v * cp.v;

  CsvTable bandcsv;
  for (std::size_t n = 0; n < band.levels.size(); ++n)
    bandcsv.rows.push_back({static_cast<double>(n), band.levels[n].e, band.levels[n].v});
  out.csv("band.csv", "band", bandcsv);

  json s;
  s["m"] = m;
  s["e0"] = cp.e0;
  s["g"] = cp.g;
  s["v"] = cp.v;
  s["gamma"] = cp.gamma;
  s["w"] = w;
  s["mode"] = p.text("mode");
  std::vector<double> rho_final;
  if (p.text("mode") == "static") {
    ArrowheadEigenSystem es(band);
    auto t = time_grid(p.real("t_max"), p.integer("n_t"));
    AmplitudeTrajectory tr = evolve_static(es, t);
    CsvTable traj;
    for (std::size_t i = 0; i < t.size(); ++i) {
      auto b = band_amplitudes(es, t[i]);
      double norm = std::norm(tr.psi0[i]);
      for (auto& a : b) norm += std::norm(a);
      traj.rows.push_back({t[i], tr.psi0[i].real(), tr.psi0[i].imag(), std::norm(tr.psi0[i]), norm});
      if (i + 1 == t.size())
        for (auto& a : b) rho_final.push_back(std::norm(a));
    }
    out.csv("trajectory.csv", "trajectory", traj);
    s["norm_drift"] = tr.norm_drift;
    s["heisenberg_time"] = band.heisenberg_time();
    s["transferred"] = 1.0 - std::norm(tr.psi0.back());
  } else {
    const double alpha = p.real("alpha"), e_o = p.real("e_o");
    double T = p.real("t_span");
    if (T == 0.0) T = std::sqrt((20.0 * w + std::abs(e_o)) / alpha);
    auto t = linspace(-T, T, static_cast<std::size_t>(p.integer("n_t")));
    MovingOptions opt;
    opt.dressed_start = p.flag("dressed_start");
    MovingResult r = evolve_moving(band, e_o, alpha, -T, T, t, opt);
    CsvTable series;
    for (std::size_t i = 0; i < r.trajectory.times.size(); ++i) {
      cplx a = r.trajectory.psi0[i];
      series.rows.push_back({r.trajectory.times[i], std::norm(a), a.real(), a.imag()});
    }
    out.csv("rho0_series.csv", "rho0_series", series);
    rho_final = r.band_population;
    s["norm_drift"] = r.trajectory.norm_drift;
    s["t_span"] = T;
    s["transferred"] = r.transferred;
    s["transferred_dressed"] = r.transferred_dressed;
    s["steps"] = r.steps;
  }
  CsvTable pops;
  for (std::size_t n = 0; n < band.levels.size(); ++n) pops.rows.push_back({band.levels[n].e, rho_final[n]});
  out.csv("band_populations.csv", "band_populations", pops);
  s["band_w50"] = population_moments(band, rho_final, 0.0, cp.gamma / 20.0).w50;
  out.summary("summary.json", "oracle_summary", s);
}


EdgeParams edge_params(const Params& p) {
  EdgeParams ep{p.real("w"), p.real("ebar0"), p.real("v"), p.real("gamma")};
  try {
    ep.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("params", e.what());
  }
  return ep;
}

void run_edge(const Params& p, Writer& out) {
  EdgeParams ep = edge_params(p);
  json s;
  if (p.text("mode") == "surface") {
    double e_max = p.real("e_max") > 0.0 ? p.real("e_max") : ep.gamma / 100.0;
    require(e_max / ep.w > 1e-3, "e_max", "must exceed 1e-3 w");
    auto gaps = p.list("gaps");
    auto e_over_w = logspace(1e-3, e_max / ep.w, static_cast<std::size_t>(p.integer("n_e")));
    EdgeSurface sf = edge_transfer_surface(ep.w, ep.v, ep.gamma, gaps, e_over_w);
    CsvTable t;
    for (std::size_t i = 0; i < sf.gaps.size(); ++i)
      for (std::size_t j = 0; j < sf.energies.size(); ++j)
        t.rows.push_back({sf.gaps[i], sf.energies[j], sf.density[i * sf.energies.size() + j]});
    out.csv("edge_surface.csv", "edge_surface", t);
    s["w"] = ep.w;
    s["v"] = ep.v;
    s["gamma"] = ep.gamma;
    s["gaps"] = sf.gaps;
    s["window_population"] = sf.window_population;
    out.summary("summary.json", "edge_surface_summary", s);
    return;
  }
  EdgeResolvent r(ep);
  auto t = time_grid(p.real("t_max"), p.integer("n_t"));
  std::vector<cplx> psi(t.size());
  parallel_for(t.size(), [&](std::size_t i) { psi[i] = r.psi0(t[i]); });
  CsvTable series;
  for (std::size_t i = 0; i < t.size(); ++i) series.rows.push_back({t[i], std::norm(psi[i]), psi[i].real(), psi[i].imag()});
  out.csv("rho0_series.csv", "rho0_series", series);

  double e_max = p.real("e_max") > 0.0 ? p.real("e_max") : ep.gamma / 20.0;
  require(e_max <= ep.gamma, "e_max", "must not exceed gamma");
  auto e = energy_grid(ep, e_max, p.integer("n_e"));
  std::vector<double> rho(e.size()), dens(e.size());
  parallel_for(e.size(), [&](std::size_t i) { rho[i] = r.rho_stationary(e[i]); });
  CsvTable prof;
  for (std::size_t i = 0; i < e.size(); ++i) {
    dens[i] = ep.g() * rho[i];
    prof.rows.push_back({e[i], rho[i], dens[i]});
  }
  out.csv("edge_profile.csv", "edge_profile", prof);
  PopulationMoments mom = moments_density(e, dens, 0.0, e_max);
  s["w"] = ep.w;
  s["ebar0"] = ep.ebar0;
  s["e0"] = ep.e0();
  s["eps0"] = pole_epsilon0(ep);
  s["residue_weight"] = residue_weight_edge(ep);
  s["rho0_infinity"] = r.rho0_infinity();
  json poles = json::array();
  for (auto z : r.poles()) poles.push_back(cjson(z));
  s["poles"] = poles;
  s["edge_w50"] = mom.w50;
  s["edge_fwhm"] = mom.fwhm;
  s["profile_population"] = mom.total;
  out.summary("summary.json", "edge_summary", s);
}

void run_spoiler(const Params& p, Writer& out) {
  EdgeParams ep = edge_params(p);
  Spoiler sp{p.real("e_s"), p.real("v_s")};
  EdgeResolvent r(ep, sp);
  auto t = time_grid(p.real("t_max"), p.integer("n_t"));
  std::vector<cplx> a0(t.size()), as(t.size());
  parallel_for(t.size(), [&](std::size_t i) {
    a0[i] = r.psi0(t[i]);
    as[i] = r.psiS(t[i]);
  });
  CsvTable s0, ss;
  for (std::size_t i = 0; i < t.size(); ++i) {
    s0.rows.push_back({t[i], std::norm(a0[i]), a0[i].real(), a0[i].imag()});
    ss.rows.push_back({t[i], std::norm(as[i]), as[i].real(), as[i].imag()});
  }
  out.csv("rho0_series.csv", "rho0_series", s0);
  out.csv("spoiler_series.csv", "spoiler_series", ss);

  double reach = sp.e_s + 10.0 * std::max(ep.w, sp.v_s * sp.v_s / sp.e_s);
  double e_max = p.real("e_max") > 0.0 ? p.real("e_max") : std::min(ep.gamma, reach);
  require(e_max <= ep.gamma, "e_max", "must not exceed gamma");
  double t_large = p.real("t_large") > 0.0 ? p.real("t_large") : 1e4 / ep.w;
  auto e = energy_grid(ep, e_max, p.integer("n_e"));
  SpoilerProfile prof = spoiler_profile(ep, sp, e, t_large);
  CsvTable pc;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (!prof.excluded[i]) pc.rows.push_back({e[i], prof.rho[i], ep.g() * prof.rho[i]});
  out.csv("edge_profile.csv", "edge_profile", pc);

  SpoilerRoots roots = find_spoiler_roots(ep, sp);
  json s;
  s["w"] = ep.w;
  s["ebar0"] = ep.ebar0;
  s["e_s"] = sp.e_s;
  s["v_s"] = sp.v_s;
  s["eps1"] = roots.eps1;
  s["eps2"] = cjson(roots.eps2);
  json other = json::array();
  for (auto z : roots.other) other.push_back(cjson(z));
  s["other_roots"] = other;
  s["weight1"] = cjson(roots.weight1);
  s["weight2"] = cjson(roots.weight2);
  s["residual1"] = roots.residual1;
  s["residual2"] = roots.residual2;
  s["rho0"] = prof.rho0;
  s["rho_s"] = prof.rho_s;
  s["windows"] = windows_json(prof.windows);
  s["edge_population"] = prof.edge_population;
  s["spoiler_population"] = prof.spoiler_population;
  s["remainder"] = prof.remainder;
  s["stationary"] = prof.stationary;
  out.summary("summary.json", "spoiler_summary", s);
}

ScatteringPotential scatter_potential(const Params& p) {
  ScatteringPotential pot;
  pot.w = p.real("w");
  pot.e_o = p.real("e_o");
  pot.alpha = p.real("alpha");
  pot.gamma = p.real("gamma");
  pot.absorption = p.flag("absorption");
  auto es = p.list("e_s"), vs = p.list("v_s");
  for (std::size_t i = 0; i < es.size(); ++i) pot.spoilers.push_back({es[i], vs[i]});
  return pot;
}

void surface_csv(Writer& out, const std::string& file, const Surface& sf) {
  CsvTable t;
  for (std::size_t i = 0; i < sf.x.size(); ++i)
    for (std::size_t j = 0; j < sf.y.size(); ++j) {
      std::size_t k = i * sf.y.size() + j;
      t.rows.push_back({sf.x[i], sf.y[j], sf.mean[k], sf.stddev[k], static_cast<double>(sf.failures[k])});
    }
  out.csv(file, "surface", t);
}

json surface_summary(const std::string& mode, const std::string& a1, const std::string& a2,
                     const std::string& q, const Surface& sf) {
  int fails = 0;
  for (int f : sf.failures) fails += f;
  return {{"mode", mode}, {"axis1", a1}, {"axis2", a2}, {"quantity", q},
          {"points", sf.mean.size()}, {"failures", fails}};
}

void set_axis(ScatteringPotential& pot, const std::string& axis, double x) {
  const double w = pot.w;
  if (axis == "e_o") pot.e_o = x * w;
  else if (axis == "alpha") pot.alpha = x * w * w;
  else if (axis == "sqrt_alpha") pot.alpha = x * x * w * w;
  else if (axis == "e_s") pot.spoilers[0].e_s = x * w;
  else if (axis == "v_s2") pot.spoilers[0].v_s = std::sqrt(x) * w;
}

void run_scatter(const Params& p, Writer& out) {
  ScatteringPotential pot = scatter_potential(p);
  try {
    pot.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("params", e.what());
  }
  ScatteringGrid grid;
  grid.n_profile = static_cast<std::size_t>(p.integer("n_profile"));
  const std::string mode = p.text("mode");
  if (mode == "single") {
    ScatteringSolution sol = solve_scattering(pot, grid);
    CsvTable t;
    for (std::size_t i = 0; i < sol.eps.size(); ++i)
      t.rows.push_back({sol.eps[i], sol.psi[i].real(), sol.psi[i].imag(), std::norm(sol.psi[i]),
                        sol.potential[i].real(), sol.potential[i].imag()});
    out.csv("scatter_profile.csv", "scatter_profile", t);
    json s;
    s["w"] = pot.w;
    s["e_o"] = pot.e_o;
    s["alpha"] = pot.alpha;
    json sp = json::array();
    for (const auto& x : pot.spoilers) sp.push_back({{"e_s", x.e_s}, {"v_s", x.v_s}});
    s["spoilers"] = sp;
    s["absorption"] = pot.absorption;
    s["absorbed"] = sol.absorbed_fraction;
    s["absorbed_flux"] = sol.absorbed_flux;
    s["band_flux"] = sol.band_flux;
    s["spoiler_state_flux"] = sol.spoiler_state_flux;
    s["incident"] = cjson(sol.incident);
    s["reflected"] = cjson(sol.reflected);
    s["turning"] = sol.turning;
    s["windows"] = windows_json(sol.windows);
    s["edge_population"] = sol.edge_population;
    s["spoiler_population"] = sol.spoiler_population;
    s["edge_w50"] = sol.edge_w50;
    s["edge_fwhm"] = sol.edge_fwhm;
    s["warnings"] = sol.warnings;
    out.summary("summary.json", "scatter_summary", s);
    return;
  }
  if (mode == "width_surface") {
    Surface sf = width_surface(pot.w, p.list("e_o_grid"), p.list("alpha_grid"), grid);
    surface_csv(out, "surface.csv", sf);
    out.summary("summary.json", "surface_summary",
                surface_summary(mode, "e_o_over_w", "alpha_over_w2", "inverse_width", sf));
    return;
  }
  if (mode == "transfer_surface") {
    TransferSurfaces ts = transfer_surfaces(pot.w, p.list("e_o_grid"), p.list("alpha_grid"), grid);
    surface_csv(out, "surface_numeric.csv", ts.numeric);
    surface_csv(out, "surface_wkb.csv", ts.wkb);
    out.summary("summary.json", "surface_summary",
                surface_summary(mode, "e_o_over_w", "alpha_over_w2", "absorbed", ts.numeric));
    return;
  }
  // spoiler_surface
  const std::string a1 = p.text("axis1"), a2 = p.text("axis2"), q = p.text("quantity");
  Surface sf;
  sf.x = p.list("values1");
  sf.y = p.list("values2");
  const std::size_t n = sf.x.size() * sf.y.size();
  sf.mean.assign(n, std::numeric_limits<double>::quiet_NaN());
  sf.stddev.assign(n, 0.0);
  sf.failures.assign(n, 0);
  parallel_for(n, [&](std::size_t k) {
    ScatteringPotential q_pot = pot;
    set_axis(q_pot, a1, sf.x[k / sf.y.size()]);
    set_axis(q_pot, a2, sf.y[k % sf.y.size()]);
    try {
      SpoilerReport r = spoiler_scattering_report(q_pot, nullptr, grid);
      sf.mean[k] = q == "ratio" ? r.ratio : q == "absorbed" ? r.absorbed : 1.0 / r.edge_w50;
    } catch (const std::exception&) {
      sf.failures[k] = 1;
    }
  });
  surface_csv(out, "surface.csv", sf);
  out.summary("summary.json", "surface_summary", surface_summary(mode, a1, a2, q, sf));
}

void run_ensemble(const Params& p, Writer& out, std::uint64_t seed) {
  ScatteringPotential base;
  base.w = p.real("w");
  base.gamma = p.real("gamma");
  const double v_max = p.real("v_max");
  const auto counts = p.list("count"), e_o = p.list("e_o"), alpha = p.list("alpha");
  const int batches = static_cast<int>(p.integer("batches"));
  const int reals = static_cast<int>(p.integer("realizations"));
  CsvTable t;
  int fails = 0;
  for (int b = 0; b < batches; ++b) {
    for (double c : counts) {
      SpoilerEnsembleSpec spec{static_cast<int>(c), v_max, seed + static_cast<std::uint64_t>(b)};
      EnsembleResult r = random_spoiler_ensemble(base, spec, e_o, alpha, reals);
      const Surface& sf = r.width;
      for (std::size_t i = 0; i < sf.x.size(); ++i)
        for (std::size_t j = 0; j < sf.y.size(); ++j) {
          std::size_t k = i * sf.y.size() + j;
          fails += sf.failures[k];
          t.rows.push_back({static_cast<double>(b), c, sf.x[i], sf.y[j], sf.mean[k], sf.stddev[k],
                            static_cast<double>(sf.failures[k])});
        }
    }
  }
  out.csv("ensemble.csv", "ensemble", t);
  // <g_s V_s^2>/w with g_s = count/gamma and <V_s^2> = v_max^2/3.
  std::vector<double> frac;
  for (double c : counts) frac.push_back(c * v_max * v_max / (3.0 * base.gamma * base.w));
  json s;
  s["w"] = base.w;
  s["gamma"] = base.gamma;
  s["count"] = counts;
  s["fraction"] = frac;
  s["v_max"] = v_max;
  s["realizations"] = reals;
  s["batches"] = batches;
  s["seed"] = seed;
  s["batch_seeds"] = json::array();
  for (int b = 0; b < batches; ++b) s["batch_seeds"].push_back(seed + static_cast<std::uint64_t>(b));
  s["failures"] = fails;
  out.summary("summary.json", "ensemble_summary", s);
}

void run_stats(const Params& p, Writer& out) {
  const double w = p.real("w");
  const auto us = p.list("u"), es = p.list("ebar_o");
  const std::string mode = p.text("mode");
  TractableOptions opt;
  opt.coefficient = p.real("coefficient");
  double e_max = p.real("e_max") > 0.0 ? p.real("e_max") : 10.0 * w;
  auto grid = linspace(0.0, e_max, static_cast<std::size_t>(p.integer("n_e")));
  json s;
  s["mode"] = mode;
  s["w"] = w;
  if (mode == "decay") {
    auto t = logspace(p.real("t_min"), p.real("t_max"), static_cast<std::size_t>(p.integer("n_t")));
    DecaySeries d = decay_of_positive_eta_branch(w, us[0], es[0], t);
    CsvTable c;
    for (std::size_t i = 0; i < d.t.size(); ++i)
      c.rows.push_back({d.t[i], d.value[i].real(), d.value[i].imag(), d.magnitude[i]});
    out.csv("decay_series.csv", "decay_series", c);
    s["u"] = us[0];
    s["ebar_o"] = es[0];
    s["exponent"] = d.exponent;
    out.summary("summary.json", "decay_summary", s);
    return;
  }
  if (mode == "tractable" || mode == "stationary") {
    StationaryDistribution d = mode == "tractable"
                                   ? tractable_profile(w, us[0], es[0], grid, opt)
                                   : stationary_distribution(MomentStatistics{w, us[0]}, es[0], grid, p.real("v_probe"));
    CsvTable c;
    for (std::size_t i = 0; i < d.energies.size(); ++i)
      c.rows.push_back({d.energies[i], d.rho[i], d.rho[i] / d.rho_edge});
    out.csv("stats_profile.csv", "stats_profile", c);
    s["u"] = us[0];
    s["ebar_o"] = es[0];
    s["rho_edge"] = d.rho_edge;
    s["half_width"] = d.half_width;
    s["w50"] = d.w50;
    if (mode == "tractable") s["tail_coefficient"] = tractable_tail_coefficient(w, us[0], es[0], opt);
    out.summary("summary.json", "stats_summary", s);
    return;
  }
  // Surfaces over every (u, ebar_o) pair.
  std::vector<StationaryDistribution> prof(us.size() * es.size());
  for (std::size_t k = 0; k < prof.size(); ++k) prof[k] = tractable_profile(w, us[k / es.size()], es[k % es.size()], grid, opt);
  CsvTable c;
  json hw = json::array();
  for (std::size_t k = 0; k < prof.size(); ++k) {
    const auto& d = prof[k];
    double u = us[k / es.size()], e = es[k % es.size()];
    hw.push_back(d.half_width);
    if (mode == "edge_density") {
      c.rows.push_back({u, e, d.rho_edge, d.half_width});
    } else {
      for (std::size_t i = 0; i < d.energies.size(); ++i) c.rows.push_back({u, e, d.energies[i], d.rho[i] / d.rho_edge});
    }
  }
  if (mode == "edge_density")
    out.csv("edge_density.csv", "edge_density", c);
  else
    out.csv("stats_surface.csv", "stats_surface", c);
  s["u"] = us;
  s["ebar_o"] = es;
  s["half_width"] = hw;
  out.summary("summary.json", "stats_surface_summary", s);
}

void run_spectrum(const Params& p, Writer& out, std::uint64_t seed) {
  SpinEnsembleSpec spec;
  spec.n_atoms = static_cast<int>(p.integer("n_atoms"));
  spec.omega = p.real("omega");
  spec.scale2 = p.real("scale2");
  spec.scale3 = p.real("scale3");
  spec.scale4 = p.real("scale4");
  spec.seed = seed;
  SpinSpectrum sp = spin_ensemble_spectrum(spec);
  CsvTable t;
  for (std::size_t i = 0; i < sp.energies.size(); ++i)
    t.rows.push_back({static_cast<double>(i), sp.energies[i], static_cast<double>(sp.excitations[i])});
  out.csv("spectrum.csv", "spectrum", t);
  // Lowest energy per excitation, divided by the excitation number.
  std::vector<double> best(static_cast<std::size_t>(spec.n_atoms) + 1, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < sp.energies.size(); ++i) {
    auto k = static_cast<std::size_t>(sp.excitations[i]);
    best[k] = std::min(best[k], sp.energies[i]);
  }
  int arg = 1;
  for (int k = 1; k <= spec.n_atoms; ++k)
    if (best[k] / k < best[arg] / arg) arg = k;
  json s;
  s["n_atoms"] = spec.n_atoms;
  s["omega"] = spec.omega;
  s["count"] = sp.energies.size();
  s["scales"] = {spec.scale2, spec.scale3, spec.scale4};
  s["min_energy_per_atom_excitations"] = arg;
  out.summary("summary.json", "spectrum_summary", s);
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "config_error";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "invalid_argument";
  if (dynamic_cast<const DomainError*>(&e)) return "domain_error";
  if (dynamic_cast<const NumericError*>(&e)) return "numeric_error";
  if (dynamic_cast<const ResourceLimit*>(&e)) return "resource_limit";
  return "error";
}

}  // namespace

// ---------------------------------------------------------------- config

const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids = {"oracle", "edge", "spoiler", "scatter", "ensemble", "stats", "spectrum"};
  return ids;
}

std::vector<std::string> preset_ids(const std::string& scenario) {
  table_for(scenario);  // rejects unknown scenarios
  std::vector<std::string> out;
  auto it = presets().find(scenario);
  if (it != presets().end())
    for (const auto& kv : it->second) out.push_back(kv.first);
  return out;
}

void set_config_value(ScenarioConfig& c, const std::string& key, const std::string& value) {
  if (key == "scenario") {
    c.scenario = trim(value);
  } else if (key == "preset") {
    c.preset = trim(value);
  } else if (key == "out") {
    c.out = trim(value);
  } else if (key == "seed") {
    long long s = parse_int("seed", value);
    if (s < 0) throw ConfigError("seed", "must be >= 0");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "threads") {
    long long n = parse_int("threads", value);
    if (n < 0 || n > 1024) throw ConfigError("threads", "must be in [0, 1024]");
    c.threads = static_cast<unsigned>(n);
  } else {
    std::string k = key.rfind("params.", 0) == 0 ? key.substr(7) : key;
    if (k.empty()) throw ConfigError(key, "empty key");
    c.params[k] = value;
  }
}

ScenarioConfig parse_config(const std::string& ini_text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(ini_text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config", std::string("malformed INI: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  ScenarioConfig c;
  for (const auto& kv : tree) {
    if (kv.second.empty()) {
      static const std::set<std::string> top = {"scenario", "preset", "out", "seed", "threads"};
      if (!top.count(kv.first)) throw ConfigError(kv.first, "unknown top-level key");
      set_config_value(c, kv.first, kv.second.data());
    } else if (kv.first == "params") {
      for (const auto& p : kv.second) c.params[p.first] = p.second.data();
    } else {
      throw ConfigError(kv.first, "unknown section (only [params] is recognized)");
    }
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const InvalidArgument&) {
    throw ConfigError("config", "cannot read " + path);
  }
  return parse_config(text);
}

std::map<std::string, std::string> resolve(const ScenarioConfig& c) {
  if (c.scenario.empty()) throw ConfigError("scenario", "missing");
  const KeyTable& table = table_for(c.scenario);
  std::map<std::string, std::string> raw;
  for (const auto& k : table) raw[k.name] = k.def;
  if (!c.preset.empty()) {
    auto sit = presets().find(c.scenario);
    const std::map<std::string, Values>* ps = sit == presets().end() ? nullptr : &sit->second;
    auto pit = ps ? ps->find(c.preset) : decltype(ps->end()){};
    if (!ps || pit == ps->end()) {
      std::string ids;
      for (const auto& id : preset_ids(c.scenario)) ids += (ids.empty() ? "" : ", ") + id;
      throw ConfigError("preset", "unknown preset '" + c.preset + "' for scenario " + c.scenario +
                                      (ids.empty() ? " (none defined)" : " (valid: " + ids + ")"));
    }
    for (const auto& kv : pit->second) raw[kv.first] = kv.second;
  }
  for (const auto& kv : c.params) {
    if (!find_key(table, kv.first)) throw ConfigError("params." + kv.first, "unknown key for scenario " + c.scenario);
    raw[kv.first] = kv.second;
  }
  std::map<std::string, std::string> out;
  for (const auto& k : table) out[k.name] = normalize(k, "params." + std::string(k.name), raw[k.name]);
  return out;
}

void validate(const ScenarioConfig& c) { check_scenario(c.scenario, Params(resolve(c))); }

std::string canonical_config(const ScenarioConfig& c) {
  auto r = resolve(c);
  std::string s = "scenario = " + c.scenario + "\nseed = " + std::to_string(c.seed) + "\n\n[params]\n";
  for (const auto& k : table_for(c.scenario)) s += std::string(k.name) + " = " + r[k.name] + "\n";
  return s;
}

std::string output_dir(const ScenarioConfig& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("QEDGE_OUT_DIR"); env && *env) return env;
  return "qedge_out";
}

RunResult run_scenario(const ScenarioConfig& c) {
  auto resolved = resolve(c);
  Params p(resolved);
  check_scenario(c.scenario, p);
  const std::string canon = canonical_config(c);
  RunResult res;
  res.out_dir = output_dir(c);
  std::error_code ec;
  fs::create_directories(res.out_dir, ec);
  if (ec) throw ConfigError("out", "cannot create " + res.out_dir + ": " + ec.message());

  unsigned saved = parallelism();
  set_parallelism(c.threads);
  auto t0 = std::chrono::steady_clock::now();
  Writer w{res.out_dir, {}};
  try {
    if (c.scenario == "oracle") run_oracle(p, w);
    else if (c.scenario == "edge") run_edge(p, w);
    else if (c.scenario == "spoiler") run_spoiler(p, w);
    else if (c.scenario == "scatter") run_scatter(p, w);
    else if (c.scenario == "ensemble") run_ensemble(p, w, c.seed);
    else if (c.scenario == "stats") run_stats(p, w);
    else if (c.scenario == "spectrum") run_spectrum(p, w, c.seed);
  } catch (...) {
    set_parallelism(saved);
    throw;
  }
  set_parallelism(saved);
  res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.artifacts = w.arts;

  json m;
  m["tool"] = "qedge";
  m["version"] = kToolVersion;
  m["scenario"] = c.scenario;
  m["preset"] = c.preset;
  json cfg;
  for (const auto& kv : resolved) cfg[kv.first] = kv.second;
  m["config"] = cfg;
  m["config_text"] = canon;
  m["config_sha256"] = sha256_hex(canon);
  m["seed"] = c.seed;
  m["threads"] = c.threads;
  m["wall_time_s"] = res.wall_time_s;
  json arts = json::array();
  for (const auto& a : res.artifacts) arts.push_back({{"file", a.file}, {"schema", a.schema}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  m["artifacts"] = arts;
  res.manifest_path = (fs::path(res.out_dir) / "manifest.json").string();
  write_file(res.manifest_path, m.dump(2) + "\n");
  return res;
}

ReplayReport replay_manifest(const std::string& manifest_path, const std::string& out_dir) {
  json m;
  try {
    m = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw ConfigError("manifest", std::string("not valid JSON: ") + e.what());
  }
  for (const auto& k : json_schema("manifest").keys)
    if (!m.contains(k)) throw ConfigError("manifest", "missing key " + k);
  if (!m.contains("config_text")) throw ConfigError("manifest", "missing key config_text");
  const std::string text = m["config_text"].get<std::string>();
  if (sha256_hex(text) != m["config_sha256"].get<std::string>())
    throw ConfigError("manifest", "config_sha256 does not match config_text");
  ScenarioConfig c = parse_config(text);
  c.threads = m["threads"].get<unsigned>();
  c.out = out_dir.empty() ? (fs::path(manifest_path).parent_path() / "replay").string() : out_dir;
  ReplayReport rep;
  rep.rerun = run_scenario(c);
  std::map<std::string, std::string> got;
  for (const auto& a : rep.rerun.artifacts) got[a.file] = a.sha256;
  for (const auto& a : m["artifacts"]) {
    std::string f = a["file"].get<std::string>();
    auto it = got.find(f);
    if (it == got.end() || it->second != a["sha256"].get<std::string>()) rep.mismatched.push_back(f);
  }
  return rep;
}

std::string error_json(const std::exception& e) {
  json j;
  json err;
  err["type"] = error_kind(e);
  if (auto* ce = dynamic_cast<const ConfigError*>(&e)) err["field"] = ce->field();
  err["message"] = e.what();
  j["error"] = err;
  return j.dump() + "\n";
}

int exit_code_for(const std::exception& e) {
  std::string k = error_kind(e);
  if (k == "config_error" || k == "invalid_argument") return 2;
  if (k == "domain_error") return 3;
  if (k == "numeric_error") return 4;
  if (k == "resource_limit") return 5;
  return 1;
}

}  // namespace qedge
