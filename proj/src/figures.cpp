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


// Parameter plans behind each reproducible figure dataset.

#include <cmath>
#include <filesystem>

#include "qedge/io.hpp"
#include "qedge/profiles.hpp"
#include "qedge/scenario.hpp"

namespace qedge {

namespace {

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + format_double(x);
  return s;
}

using Plan = std::vector<std::pair<std::string, ScenarioConfig>>;

ScenarioConfig make(const std::string& scenario, const std::string& preset, const FigureOptions& o,
                    const std::vector<std::pair<std::string, std::string>>& params) {
  ScenarioConfig c;
  c.scenario = scenario;
  c.preset = preset;
  c.seed = o.seed;
  c.threads = o.threads;
  for (const auto& kv : params) c.params[kv.first] = kv.second;
  return c;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"fig1a", "fig1",    "fig1Bbiss", "NonAdPo", "FigD2",  "ProbNA",
                                               "PrNAWidth", "FigD3", "FigSpNonad", "FigD4", "FigSp2", "FIGSp3",
                                               "SpSt1", "SpSt2",   "SpSt3",     "RandAd",  "RandAdE"};
  return ids;
}

std::vector<std::pair<std::string, ScenarioConfig>> figure_plan(const std::string& id, const FigureOptions& o) {
  const bool q = o.quick;
  Plan plan;
  if (id == "fig1a") {
    plan.push_back({"", make("spectrum", "", o, {{"n_atoms", "7"}})});
  } else if (id == "fig1") {
    // w/|E0| in {0.2, 1, 5} at w = 1.
    for (const char* tag : {"0.2", "1", "5"}) {
      double e0 = -1.0 / std::stod(tag);
      plan.push_back({std::string("w_over_gap_") + tag,
                      make("edge", "", o,
                           {{"w", "1"}, {"v", "0.1"}, {"gamma", "40"}, {"ebar0", format_double(-e0 + std::log(40.0))},
                            {"t_max", "100"}, {"n_t", q ? "11" : "401"}, {"n_e", q ? "20" : "400"}})});
    }
  } else if (id == "fig1Bbiss") {
    plan.push_back({"", make("edge", "", o,
                             {{"mode", "surface"}, {"w", "1"}, {"v", "0.1"}, {"gamma", "40"},
                              {"gaps", q ? "1,5" : join(logspace(0.2, 20.0, 12))}, {"n_e", q ? "6" : "60"}})});
  } else if (id == "NonAdPo") {
    const std::string n = q ? "400" : "2000";
    plan.push_back({"deep_gap", make("scatter", "", o, {{"e_o", "-6"}, {"alpha", "1"}, {"n_profile", n}})});
    plan.push_back({"small_gap", make("scatter", "", o, {{"e_o", "-1.5"}, {"alpha", "1"}, {"n_profile", n}})});
    plan.push_back({"close_approach", make("scatter", "", o, {{"e_o", "0"}, {"alpha", "0.1"}, {"n_profile", n}})});
  } else if (id == "FigD2") {
    plan.push_back({"", make("scatter", "", o, {{"e_o", "-1"}, {"alpha", "1"}})});
  } else if (id == "ProbNA" || id == "PrNAWidth") {
    std::size_t n = q ? 3 : 20;
    plan.push_back({"", make("scatter", "", o,
                             {{"mode", id == "ProbNA" ? "transfer_surface" : "width_surface"},
                              {"e_o_grid", join(linspace(-10.0, 2.0, n))},
                              {"alpha_grid", join(logspace(0.01, 10.0, n))}})});
  } else if (id == "FigD3") {
    plan.push_back({"scatter", make("scatter", "figD3", o, {})});
    plan.push_back({"analytic", make("spoiler", "figD3", o, {{"n_t", q ? "11" : "201"}, {"n_e", q ? "20" : "400"}})});
  } else if (id == "FigSpNonad" || id == "FigD4") {
    std::string base = id == "FigSpNonad" ? "figSpNonad" : "figD4";
    for (const char* v : {"caption", "body"}) {
      std::vector<std::pair<std::string, std::string>> over;
      if (q) over = {{"values1", id == "FigD4" ? "1,3" : "8,12"}, {"values2", "1,2"}, {"n_profile", "400"}};
      plan.push_back({v, make("scatter", base + "_" + v, o, over)});
    }
  } else if (id == "FigSp2" || id == "FIGSp3") {
    std::vector<std::pair<std::string, std::string>> over;
    if (q) over = {{"values1", "1,2"}, {"values2", id == "FigSp2" ? "1,2" : "2,4"}, {"n_profile", "400"}};
    plan.push_back({"", make("scatter", id == "FigSp2" ? "figSp2" : "figSp3", o, over)});
  } else if (id == "SpSt1") {
    plan.push_back({"", make("stats", "", o,
                             {{"mode", "tractable_surface"}, {"ebar_o", "1,10"},
                              {"u", q ? "1,3" : join(logspace(0.1, 10.0, 9))}, {"n_e", q ? "11" : "201"}})});
  } else if (id == "SpSt2") {
    plan.push_back({"", make("stats", "", o,
                             {{"mode", "tractable_surface"}, {"u", "1,10"},
                              {"ebar_o", q ? "1,5" : join(linspace(1.0, 10.0, 10))}, {"n_e", q ? "11" : "201"}})});
  } else if (id == "SpSt3") {
    plan.push_back({"", make("stats", "", o,
                             {{"mode", "edge_density"}, {"u", "1"},
                              {"ebar_o", q ? "1,5" : join(linspace(1.0, 10.0, 19))}, {"n_e", q ? "11" : "201"}})});
  } else if (id == "RandAd" || id == "RandAdE") {
    std::vector<std::pair<std::string, std::string>> p = {
        {"realizations", std::to_string(o.realizations)},
        {"batches", std::to_string(o.batches)},
        {"count", q ? "6" : "12,30,60"},
        {"v_max", "1"}};
    if (id == "RandAd") {
      p.push_back({"e_o", "0"});
      p.push_back({"alpha", q ? "1,3" : "0.1,0.3,1,3,10"});
    } else {
      p.push_back({"alpha", "1"});
      p.push_back({"e_o", q ? "0,2" : "-2,-1,0,2,4"});
    }
    plan.push_back({"", make("ensemble", "", o, p)});
  } else {
    std::string ids;
    for (const auto& f : figure_ids()) ids += (ids.empty() ? "" : ", ") + f;
    throw ConfigError("figure", "unknown figure id '" + id + "' (valid: " + ids + ")");
  }
  return plan;
}

std::vector<RunResult> reproduce_figure(const std::string& id, const FigureOptions& o) {
  if (o.batches < 1) throw ConfigError("batches", "must be >= 1");
  if (o.realizations < 1) throw ConfigError("realizations", "must be >= 1");
  auto plan = figure_plan(id, o);
  ScenarioConfig probe;
  probe.out = o.out;
  std::filesystem::path root = std::filesystem::path(output_dir(probe)) / id;
  // Validate everything before the first long run starts.
  for (auto& [sub, cfg] : plan) validate(cfg);
  std::vector<RunResult> out;
  for (auto& [sub, cfg] : plan) {
    cfg.out = (sub.empty() ? root : root / sub).string();
    out.push_back(run_scenario(cfg));
  }
  return out;
}

}  // namespace qedge
