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


#ifndef QEDGE_SCENARIO_HPP_
#define QEDGE_SCENARIO_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qedge/errors.hpp"

namespace qedge {

extern const char* const kToolVersion;

// Validation failure that names the offending config field.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string field, const std::string& msg)
      : InvalidArgument(field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// INI layout: top-level scenario/seed/threads/out/preset, then a [params]
// section whose keys depend on the scenario. Values stay as text until
// resolve() checks them against the scenario's key table.
struct ScenarioConfig {
  std::string scenario;
  std::string preset;
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::map<std::string, std::string> params;
};

const std::vector<std::string>& scenario_ids();
std::vector<std::string> preset_ids(const std::string& scenario);

ScenarioConfig parse_config(const std::string& ini_text);
ScenarioConfig load_config(const std::string& path);
// key is a top-level name or a params key, optionally written "params.key".
void set_config_value(ScenarioConfig& c, const std::string& key, const std::string& value);

// Defaults, then preset values, then explicit params; every value
// normalized. Throws ConfigError.
std::map<std::string, std::string> resolve(const ScenarioConfig& c);
void validate(const ScenarioConfig& c);

// Resolved config as INI text; out and threads are left out since they do
// not change artifact bytes. This is what the manifest hash covers.
std::string canonical_config(const ScenarioConfig& c);

struct Artifact {
  std::string file;
  std::string schema;
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunResult {
  std::string out_dir;
  std::string manifest_path;
  std::vector<Artifact> artifacts;
  double wall_time_s = 0.0;
};

// Output directory: c.out, else $QEDGE_OUT_DIR, else ./qedge_out.
std::string output_dir(const ScenarioConfig& c);
RunResult run_scenario(const ScenarioConfig& c);

struct FigureOptions {
  std::string out;       // parent directory; the figure id is appended
  std::uint64_t seed = 1;
  unsigned threads = 1;
  int batches = 3;
  int realizations = 50;
  bool quick = false;    // coarse grids, for smoke tests
};

const std::vector<std::string>& figure_ids();
// One config per dataset; a figure with caption/body variants gets one per
// variant. Keys are subdirectory names ("" for the figure directory itself).
std::vector<std::pair<std::string, ScenarioConfig>> figure_plan(const std::string& id,
                                                                const FigureOptions& opt);
std::vector<RunResult> reproduce_figure(const std::string& id, const FigureOptions& opt);

struct ReplayReport {
  RunResult rerun;
  std::vector<std::string> mismatched;  // files whose hash differs or are missing
  bool ok() const { return mismatched.empty(); }
};

// Re-runs the config recorded in a manifest into out_dir (default: a
// "replay" directory next to the manifest) and compares artifact hashes.
ReplayReport replay_manifest(const std::string& manifest_path, const std::string& out_dir = "");

// Machine-readable description of an exception, for CLI error output.
std::string error_json(const std::exception& e);
int exit_code_for(const std::exception& e);

}  // namespace qedge

#endif  // QEDGE_SCENARIO_HPP_
