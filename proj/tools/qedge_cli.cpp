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


// Command-line front end. Everything goes through the C interface.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qedge/qedge.h"

namespace {

using json = nlohmann::ordered_json;

std::string take(char* s) {
  std::string out = s ? s : "";
  qe_free_string(s);
  return out;
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

int fail() {
  std::cout << qe_last_error_json();
  std::cout.flush();
  int code = qe_last_exit_code();
  return code ? code : 1;
}

int usage_error(const std::string& msg) {
  json j;
  j["error"] = {{"type", "usage_error"}, {"message", msg}};
  std::cout << j.dump() << "\n";
  return 2;
}

std::string dashed(std::string k) {
  for (auto& c : k)
    if (c == '_') c = '-';
  return k;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Level-to-band edge transfer: simulations and figure datasets"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run one scenario (oracle, edge, spoiler, scatter, ensemble, stats, spectrum)");
  std::string scenario, config_path, preset, out, seed, threads;
  std::vector<std::string> sets;
  run->add_option("scenario", scenario, "scenario id; optional with --config");
  run->add_option("--config", config_path, "INI config file");
  run->add_option("--preset", preset, "named parameter preset");
  run->add_option("--out", out, "output directory (default $QEDGE_OUT_DIR or ./qedge_out)");
  run->add_option("--seed", seed, "base seed");
  run->add_option("--threads", threads, "worker threads, 0 = all cores");
  run->add_option("--set", sets, "params key=value, repeatable");
  char* keys_raw = nullptr;
  if (qe_param_keys(&keys_raw) != QE_OK) return fail();
  std::vector<std::string> keys = split_lines(take(keys_raw));
  std::map<std::string, std::string> flag_values;
  for (const auto& k : keys) run->add_option("--" + dashed(k), flag_values[k], "params." + k);

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "write the datasets behind a figure");
  std::string fig_id, fig_out;
  qe_figure_options fo;
  qe_figure_options_default(&fo);
  bool quick = false;
  rep->add_option("figure", fig_id, "figure id")->required();
  rep->add_option("--out", fig_out, "parent output directory");
  rep->add_option("--seed", fo.seed, "base seed");
  rep->add_option("--threads", fo.threads, "worker threads, 0 = all cores");
  rep->add_option("--batches", fo.batches, "ensemble batches");
  rep->add_option("--realizations", fo.realizations, "realizations per ensemble batch");
  rep->add_flag("--quick", quick, "coarse grids (smoke test)");

  // replay
  auto* rpl = app.add_subcommand("replay", "re-run a manifest and compare artifact hashes");
  std::string manifest, replay_out;
  rpl->add_option("manifest", manifest, "manifest.json")->required();
  rpl->add_option("--out", replay_out, "output directory (default: replay/ next to the manifest)");

  auto* lst = app.add_subcommand("list", "list figures, scenarios or presets");
  std::string what, what_arg;
  lst->add_option("what", what, "figures | scenarios | presets")->required();
  lst->add_option("scenario", what_arg, "scenario, for presets");

  auto* sch = app.add_subcommand("schemas", "print the CSV and JSON schemas");
  auto* ver = app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }

  if (run->parsed()) {
    qe_config* c = nullptr;
    if (!config_path.empty()) {
      if (qe_config_load(config_path.c_str(), &c) != QE_OK) return fail();
    } else if (qe_config_create(&c) != QE_OK) {
      return fail();
    }
    std::vector<std::pair<std::string, std::string>> kv;
    if (!scenario.empty()) kv.push_back({"scenario", scenario});
    if (!preset.empty()) kv.push_back({"preset", preset});
    if (!out.empty()) kv.push_back({"out", out});
    if (!seed.empty()) kv.push_back({"seed", seed});
    if (!threads.empty()) kv.push_back({"threads", threads});
    for (const auto& s : sets) {
      auto eq = s.find('=');
      if (eq == std::string::npos) {
        qe_config_destroy(c);
        return usage_error("--set expects key=value, got '" + s + "'");
      }
      kv.push_back({s.substr(0, eq), s.substr(eq + 1)});
    }
    for (const auto& k : keys)
      if (run->count("--" + dashed(k))) kv.push_back({k, flag_values[k]});
    for (const auto& [k, v] : kv)
      if (qe_config_set(c, k.c_str(), v.c_str()) != QE_OK) {
        qe_config_destroy(c);
        return fail();
      }
    char* path = nullptr;
    qe_status s = qe_run(c, &path);
    qe_config_destroy(c);
    if (s != QE_OK) return fail();
    json j;
    j["status"] = "ok";
    j["manifest"] = take(path);
    std::cout << j.dump() << "\n";
    return 0;
  }
  if (rep->parsed()) {
    fo.quick = quick ? 1 : 0;
    fo.out = fig_out.empty() ? nullptr : fig_out.c_str();
    char* res = nullptr;
    if (qe_reproduce(fig_id.c_str(), &fo, &res) != QE_OK) return fail();
    json j;
    j["status"] = "ok";
    j["figure"] = fig_id;
    j["manifests"] = json::parse(take(res));
    std::cout << j.dump() << "\n";
    return 0;
  }
  if (rpl->parsed()) {
    char* res = nullptr;
    qe_status s = qe_replay(manifest.c_str(), replay_out.empty() ? nullptr : replay_out.c_str(), &res);
    std::string report = take(res);
    if (s != QE_OK) {
      std::cerr << report;
      return fail();
    }
    json j = json::parse(report);
    j["status"] = "ok";
    std::cout << j.dump() << "\n";
    return 0;
  }
  if (lst->parsed()) {
    char* res = nullptr;
    qe_status s;
    if (what == "figures") s = qe_list_figures(&res);
    else if (what == "scenarios") s = qe_list_scenarios(&res);
    else if (what == "presets") s = qe_list_presets(what_arg.c_str(), &res);
    else return usage_error("list: expected figures, scenarios or presets");
    if (s != QE_OK) return fail();
    std::cout << take(res);
    return 0;
  }
  if (sch->parsed()) {
    char* res = nullptr;
    if (qe_schemas(&res) != QE_OK) return fail();
    std::cout << take(res);
    return 0;
  }
  if (ver->parsed()) {
    std::cout << qe_version() << "\n";
    return 0;
  }
  return 0;
}
