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


#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <limits>
#include <random>
#include <set>

#include "qedge/io.hpp"
#include "qedge/scenario.hpp"

using namespace qedge;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("qedge_test_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

ScenarioConfig small_edge(const std::string& out) {
  ScenarioConfig c = parse_config(
      "scenario = edge\n"
      "[params]\n"
      "w = 1\nebar0 = 1\nt_max = 20\nn_t = 11\nn_e = 20\n");
  c.out = out;
  return c;
}

std::string field_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("csv number format and round trip") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  CsvTable t{{"a", "b", "c"}, {}};
  for (int i = 0; i < 200; ++i) t.rows.push_back({u(rng), std::ldexp(u(rng), -300), std::exp(u(rng) / 10.0)});
  t.rows.push_back({std::nan(""), std::numeric_limits<double>::infinity(), -0.0});
  std::string text = to_csv(t);
  CHECK(text.rfind("a,b,c\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
  CsvTable back = parse_csv(text);
  CHECK(back.columns == t.columns);
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t i = 0; i + 1 < t.rows.size(); ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(back.rows[i][j] == t.rows[i][j]);
  CHECK(std::isnan(back.rows.back()[0]));
  CHECK(std::isinf(back.rows.back()[1]));
  CHECK_THROWS_AS(parse_csv("a,b\r\n1,2\r\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2,3\n"), InvalidArgument);
}

TEST_CASE("hashing") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("schema registry") {
  CHECK(csv_schema("edge_profile").columns == std::vector<std::string>{"e", "rho", "density"});
  CHECK(csv_schema("scatter_profile").columns ==
        std::vector<std::string>{"eps", "re_psi", "im_psi", "abs2_psi", "re_u", "im_u"});
  CHECK(csv_schema("surface").columns ==
        std::vector<std::string>{"param1", "param2", "mean", "stddev", "failures"});
  std::set<std::string> names;
  for (const auto& s : csv_schemas()) CHECK(names.insert(s.name).second);
  CHECK_THROWS_AS(csv_schema("nope"), InvalidArgument);
  const auto& m = json_schema("manifest").keys;
  for (const char* k : {"tool", "version", "config_sha256", "seed", "artifacts"})
    CHECK(std::find(m.begin(), m.end(), k) != m.end());
}

TEST_CASE("config errors name the field") {
  CHECK(field_of([] { validate(parse_config("scenario = edge\n[params]\nbogus = 1\n")); }) == "params.bogus");
  CHECK(field_of([] { validate(parse_config("scenario = edge\n[params]\nw = -1\n")); }) == "params.w");
  CHECK(field_of([] { validate(parse_config("scenario = edge\n[params]\nw = abc\n")); }) == "params.w");
  CHECK(field_of([] { validate(parse_config("scenario = warp\n")); }) == "scenario");
  CHECK(field_of([] { validate(parse_config("[params]\nw = 1\n")); }) == "scenario");
  CHECK(field_of([] { parse_config("colour = red\n"); }) == "colour");
  CHECK(field_of([] { parse_config("scenario = edge\n[extra]\nx = 1\n"); }) == "extra");
  CHECK(field_of([] { validate(parse_config("scenario = edge\npreset = nope\n")); }) == "preset");
  CHECK(field_of([] { parse_config("scenario = edge\n[params\n"); }) == "config");
  CHECK(field_of([] { load_config("/nonexistent/x.ini"); }) == "config");
  ScenarioConfig c;
  CHECK(field_of([&] { set_config_value(c, "seed", "-3"); }) == "seed");
  set_config_value(c, "scenario", "edge");
  set_config_value(c, "params.w", "2");
  set_config_value(c, "ebar0", "3");
  CHECK(resolve(c).at("w") == "2");
  CHECK(resolve(c).at("ebar0") == "3");
}

TEST_CASE("presets apply first, explicit keys win") {
  ScenarioConfig c = parse_config("scenario = scatter\npreset = figD3\n");
  auto r = resolve(c);
  CHECK(r.at("e_o") == "-1");
  c.params["e_o"] = "-2";
  CHECK(resolve(c).at("e_o") == "-2");
  for (const auto& s : scenario_ids())
    for (const auto& p : preset_ids(s)) {
      ScenarioConfig q;
      q.scenario = s;
      q.preset = p;
      CHECK_NOTHROW(validate(q));
    }
}

TEST_CASE("canonical config ignores output location and thread count") {
  ScenarioConfig a = small_edge("/tmp/a");
  ScenarioConfig b = small_edge("/tmp/b");
  b.threads = 4;
  CHECK(canonical_config(a) == canonical_config(b));
  b.seed = 9;
  CHECK(canonical_config(a) != canonical_config(b));
  // Equivalent spellings normalize to the same text.
  ScenarioConfig d = small_edge("");
  d.params["w"] = "1.0";
  CHECK(canonical_config(a) == canonical_config(d));
}

TEST_CASE("runs are byte-identical and match their schemas") {
  fs::path root = scratch_dir("run");
  RunResult r1 = run_scenario(small_edge((root / "one").string()));
  RunResult r2 = run_scenario(small_edge((root / "two").string()));
  REQUIRE(r1.artifacts.size() == r2.artifacts.size());
  for (std::size_t i = 0; i < r1.artifacts.size(); ++i) CHECK(r1.artifacts[i].sha256 == r2.artifacts[i].sha256);
  json m = json::parse(read_file(r1.manifest_path));
  for (const auto& k : json_schema("manifest").keys) CHECK(m.contains(k));
  CHECK(m["config_sha256"] == sha256_hex(m["config_text"].get<std::string>()));
  for (const auto& a : r1.artifacts) {
    std::string bytes = read_file((fs::path(r1.out_dir) / a.file).string());
    CHECK(sha256_hex(bytes) == a.sha256);
    CHECK(bytes.size() == a.bytes);
    if (a.file.size() > 4 && a.file.substr(a.file.size() - 4) == ".csv") {
      CHECK(parse_csv(bytes).columns == csv_schema(a.schema).columns);
    } else {
      json s = json::parse(bytes);
      for (const auto& k : json_schema(a.schema).keys) CHECK(s.contains(k));
    }
  }
  fs::remove_all(root);
}

TEST_CASE("ensemble output does not depend on threads") {
  fs::path root = scratch_dir("ens");
  auto cfg = [&](unsigned threads, const std::string& sub) {
    ScenarioConfig c = parse_config(
        "scenario = ensemble\nseed = 5\n[params]\ncount = 4\nrealizations = 3\nbatches = 2\n"
        "e_o = -1,0\nalpha = 1\n");
    c.threads = threads;
    c.out = (root / sub).string();
    return c;
  };
  RunResult a = run_scenario(cfg(1, "a")), b = run_scenario(cfg(3, "b"));
  REQUIRE(a.artifacts.size() == b.artifacts.size());
  for (std::size_t i = 0; i < a.artifacts.size(); ++i) CHECK(a.artifacts[i].sha256 == b.artifacts[i].sha256);
  fs::remove_all(root);
}

TEST_CASE("replay detects tampering") {
  fs::path root = scratch_dir("replay");
  RunResult r = run_scenario(small_edge((root / "run").string()));
  ReplayReport ok = replay_manifest(r.manifest_path);
  CHECK(ok.ok());
  CHECK(fs::exists(root / "run" / "replay" / "manifest.json"));
  // A manifest whose recorded hash is wrong must fail.
  json m = json::parse(read_file(r.manifest_path));
  m["artifacts"][0]["sha256"] = std::string(64, '0');
  write_file(r.manifest_path, m.dump(2));
  ReplayReport bad = replay_manifest(r.manifest_path, (root / "again").string());
  CHECK_FALSE(bad.ok());
  REQUIRE(bad.mismatched.size() == 1);
  CHECK(bad.mismatched[0] == m["artifacts"][0]["file"]);
  // An edited config no longer matches its hash.
  m = json::parse(read_file(r.manifest_path));
  m["config_text"] = m["config_text"].get<std::string>() + "\n";
  write_file(r.manifest_path, m.dump(2));
  CHECK_THROWS(replay_manifest(r.manifest_path, (root / "third").string()));
  fs::remove_all(root);
}

TEST_CASE("error description and exit codes") {
  ConfigError ce("params.w", "must be positive");
  json j = json::parse(error_json(ce));
  CHECK(j["error"]["type"] == "config_error");
  CHECK(j["error"]["field"] == "params.w");
  CHECK(exit_code_for(ce) == 2);
  CHECK(exit_code_for(DomainError("x")) == 3);
  CHECK(exit_code_for(NumericError("x")) == 4);
  CHECK(exit_code_for(ResourceLimit("x")) == 5);
  CHECK(exit_code_for(std::runtime_error("x")) == 1);
  CHECK_FALSE(json::parse(error_json(DomainError("d")))["error"].contains("field"));
}

TEST_CASE("figure plans") {
  CHECK(figure_ids().size() == 17);
  FigureOptions o;
  o.quick = true;
  for (const auto& id : figure_ids()) {
    auto plan = figure_plan(id, o);
    CHECK_FALSE(plan.empty());
    for (const auto& [sub, cfg] : plan) CHECK_NOTHROW(validate(cfg));
  }
  CHECK(field_of([&] { figure_plan("fig99", o); }) == "figure");
}
