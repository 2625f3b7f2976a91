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


#include "qedge/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qedge/errors.hpp"

namespace qedge {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  // The C locale is never changed by the library, so '.' is the separator.
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string to_csv(const CsvTable& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size()) throw InvalidArgument("csv: row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> f;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        f.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    f.push_back(cur);
    return f;
  };
  if (!std::getline(in, line)) throw InvalidArgument("csv: empty input");
  if (!line.empty() && line.back() == '\r') throw InvalidArgument("csv: CRLF line ending");
  t.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split(line);
    if (f.size() != t.columns.size()) throw InvalidArgument("csv: ragged row");
    std::vector<double> row;
    for (const auto& s : f) row.push_back(std::strtod(s.c_str(), nullptr));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InvalidArgument("cannot open " + path + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw InvalidArgument("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw NumericError("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

const std::vector<CsvSchema>& csv_schemas() {
  static const std::vector<CsvSchema> s = {
      {"rho0_series", {"t", "rho0", "re_psi0", "im_psi0"}, "isolated-level amplitude and population in time"},
      {"edge_profile", {"e", "rho", "density"}, "stationary population per band state and per unit energy"},
      {"band_populations", {"e", "rho"}, "discrete band populations at the final time"},
      {"scatter_profile",
       {"eps", "re_psi", "im_psi", "abs2_psi", "re_u", "im_u"},
       "scattering amplitude over eps with the potential overlay"},
      {"surface", {"param1", "param2", "mean", "stddev", "failures"}, "value over a 2-D parameter grid"},
      {"edge_surface", {"gap", "e", "density"}, "edge density over gap and energy"},
      {"trajectory", {"t", "re_psi0", "im_psi0", "rho0", "norm"}, "discrete-band trajectory of the isolated level"},
      {"band", {"index", "energy", "coupling"}, "discrete band definition"},
      {"stats_profile", {"e", "rho", "rho_normalized"}, "ensemble profile, normalized to the edge value"},
      {"decay_series", {"t", "re", "im", "magnitude"}, "decaying eta > 0 contribution"},
      {"spectrum", {"index", "energy", "excitations"}, "spin-ensemble diagonal spectrum"},
      {"ensemble", {"batch", "count", "e_o", "alpha", "mean", "stddev", "failures"},
       "edge W50 mean and spread over realizations, per batch and spoiler count"},
      {"spoiler_series", {"t", "rho_s", "re_psi_s", "im_psi_s"}, "strong-level amplitude and population in time"},
      {"stats_surface", {"u", "ebar_o", "e", "rho_normalized"}, "normalized ensemble profiles over (u, ebar_o)"},
      {"edge_density", {"u", "ebar_o", "rho_edge", "half_width"}, "unnormalized edge value and half width"},
  };
  return s;
}

const CsvSchema& csv_schema(const std::string& name) {
  for (const auto& s : csv_schemas())
    if (s.name == name) return s;
  throw InvalidArgument("unknown csv schema: " + name);
}

const std::vector<JsonSchema>& json_schemas() {
  static const std::vector<JsonSchema> s = {
      {"manifest",
       {"tool", "version", "scenario", "config", "config_sha256", "seed", "threads", "wall_time_s", "artifacts"}},
      {"edge_summary", {"w", "ebar0", "eps0", "residue_weight", "rho0_infinity", "poles", "edge_w50"}},
      {"oracle_summary", {"m", "e0", "g", "v", "gamma", "w", "mode", "norm_drift", "transferred", "band_w50"}},
      {"scatter_summary",
       {"w", "e_o", "alpha", "spoilers", "absorbed", "absorbed_flux", "turning", "windows", "edge_population",
        "spoiler_population", "edge_w50", "edge_fwhm", "warnings"}},
      {"ensemble_summary", {"count", "fraction", "v_max", "realizations", "batches", "seed", "batch_seeds", "failures"}},
      {"edge_surface_summary", {"w", "v", "gamma", "gaps", "window_population"}},
      {"spoiler_summary",
       {"w", "ebar0", "e_s", "v_s", "eps1", "eps2", "weight1", "weight2", "residual1", "residual2", "rho0",
        "rho_s", "windows", "edge_population", "spoiler_population", "remainder", "stationary"}},
      {"surface_summary", {"mode", "axis1", "axis2", "quantity", "points", "failures"}},
      {"stats_summary", {"mode", "w", "u", "ebar_o", "rho_edge", "half_width", "w50"}},
      {"stats_surface_summary", {"mode", "w", "u", "ebar_o", "half_width"}},
      {"decay_summary", {"mode", "w", "u", "ebar_o", "exponent"}},
      {"spectrum_summary", {"n_atoms", "omega", "count", "scales"}},
      {"error", {"error"}},
  };
  return s;
}

const JsonSchema& json_schema(const std::string& name) {
  for (const auto& s : json_schemas())
    if (s.name == name) return s;
  throw InvalidArgument("unknown json schema: " + name);
}

}  // namespace qedge
