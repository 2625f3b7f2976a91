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


#include "qedge/qedge.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "json.hpp"
#include "qedge/edge_analytics.hpp"
#include "qedge/io.hpp"
#include "qedge/scattering.hpp"
#include "qedge/scenario.hpp"
#include "qedge/statistical_band.hpp"

using namespace qedge;
using json = nlohmann::ordered_json;

struct qe_config {
  ScenarioConfig cfg;
};

struct qe_edge {
  EdgeResolvent r;
};

struct qe_scatter {
  ScatteringSolution sol;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_json;
thread_local int g_exit = 0;

void clear() {
  g_error.clear();
  g_error_json.clear();
  g_exit = 0;
}

qe_status fail(qe_status s, const std::string& msg, const std::string& js, int code) {
  g_error = msg;
  g_error_json = js;
  g_exit = code;
  return s;
}

qe_status fail_arg(const char* msg) {
  InvalidArgument e(msg);
  return fail(QE_ERR_INVALID_ARGUMENT, msg, error_json(e), 2);
}

// Every entry point funnels its body through here so no exception crosses
// the C boundary.
template <class F>
qe_status guard(F&& f) {
  clear();
  try {
    f();
    return QE_OK;
  } catch (const InvalidArgument& e) {
    return fail(QE_ERR_INVALID_ARGUMENT, e.what(), error_json(e), exit_code_for(e));
  } catch (const DomainError& e) {
    return fail(QE_ERR_DOMAIN, e.what(), error_json(e), exit_code_for(e));
  } catch (const NumericError& e) {
    return fail(QE_ERR_NUMERIC, e.what(), error_json(e), exit_code_for(e));
  } catch (const ResourceLimit& e) {
    return fail(QE_ERR_RESOURCE, e.what(), error_json(e), exit_code_for(e));
  } catch (const std::bad_alloc& e) {
    return fail(QE_ERR_RESOURCE, "out of memory", error_json(e), 5);
  } catch (const std::exception& e) {
    return fail(QE_ERR_INTERNAL, e.what(), error_json(e), 1);
  } catch (...) {
    return fail(QE_ERR_INTERNAL, "unknown exception", "{\"error\":{\"type\":\"error\",\"message\":\"unknown\"}}\n", 1);
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

std::string lines(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += x + "\n";
  return s;
}

}  // namespace

extern "C" {

const char* qe_last_error(void) { return g_error.c_str(); }
const char* qe_last_error_json(void) { return g_error_json.c_str(); }
int qe_last_exit_code(void) { return g_exit; }
const char* qe_version(void) { return kToolVersion; }
void qe_free_string(char* s) { std::free(s); }

qe_status qe_config_create(qe_config** out) {
  if (!out) return fail_arg("qe_config_create: null output");
  return guard([&] { *out = new qe_config{}; });
}

qe_status qe_config_load(const char* path, qe_config** out) {
  if (!path || !out) return fail_arg("qe_config_load: null argument");
  return guard([&] { *out = new qe_config{load_config(path)}; });
}

qe_status qe_config_set(qe_config* c, const char* key, const char* value) {
  if (!c || !key || !value) return fail_arg("qe_config_set: null argument");
  return guard([&] { set_config_value(c->cfg, key, value); });
}

qe_status qe_config_validate(const qe_config* c) {
  if (!c) return fail_arg("qe_config_validate: null config");
  return guard([&] { validate(c->cfg); });
}

qe_status qe_config_canonical(const qe_config* c, char** ini_text) {
  if (!c || !ini_text) return fail_arg("qe_config_canonical: null argument");
  return guard([&] { *ini_text = dup(canonical_config(c->cfg)); });
}

void qe_config_destroy(qe_config* c) { delete c; }

qe_status qe_run(const qe_config* c, char** manifest_path) {
  if (!c) return fail_arg("qe_run: null config");
  return guard([&] {
    RunResult r = run_scenario(c->cfg);
    if (manifest_path) *manifest_path = dup(r.manifest_path);
  });
}

void qe_figure_options_default(qe_figure_options* o) {
  if (!o) return;
  FigureOptions d;
  o->out = nullptr;
  o->seed = d.seed;
  o->threads = d.threads;
  o->batches = d.batches;
  o->realizations = d.realizations;
  o->quick = 0;
}

qe_status qe_reproduce(const char* figure_id, const qe_figure_options* o, char** manifests_json) {
  if (!figure_id) return fail_arg("qe_reproduce: null figure id");
  return guard([&] {
    FigureOptions f;
    if (o) {
      if (o->out) f.out = o->out;
      f.seed = o->seed;
      f.threads = o->threads;
      f.batches = o->batches;
      f.realizations = o->realizations;
      f.quick = o->quick != 0;
    }
    auto runs = reproduce_figure(figure_id, f);
    json j = json::array();
    for (const auto& r : runs) j.push_back(r.manifest_path);
    if (manifests_json) *manifests_json = dup(j.dump() + "\n");
  });
}

qe_status qe_replay(const char* manifest_path, const char* out_dir, char** report_json) {
  if (!manifest_path) return fail_arg("qe_replay: null manifest path");
  bool ok = true;
  qe_status s = guard([&] {
    ReplayReport rep = replay_manifest(manifest_path, out_dir ? out_dir : "");
    ok = rep.ok();
    json j;
    j["manifest"] = manifest_path;
    j["replay_manifest"] = rep.rerun.manifest_path;
    j["artifacts"] = rep.rerun.artifacts.size();
    j["mismatched"] = rep.mismatched;
    j["identical"] = ok;
    if (report_json) *report_json = dup(j.dump() + "\n");
  });
  if (s == QE_OK && !ok) {
    json e;
    e["error"] = {{"type", "replay_mismatch"}, {"message", "artifact bytes differ from the manifest"}};
    return fail(QE_ERR_MISMATCH, "artifact bytes differ from the manifest", e.dump() + "\n", 6);
  }
  return s;
}

qe_status qe_list_figures(char** ids) {
  if (!ids) return fail_arg("qe_list_figures: null output");
  return guard([&] { *ids = dup(lines(figure_ids())); });
}

qe_status qe_list_scenarios(char** ids) {
  if (!ids) return fail_arg("qe_list_scenarios: null output");
  return guard([&] { *ids = dup(lines(scenario_ids())); });
}

qe_status qe_list_presets(const char* scenario, char** ids) {
  if (!scenario || !ids) return fail_arg("qe_list_presets: null argument");
  return guard([&] { *ids = dup(lines(preset_ids(scenario))); });
}

qe_status qe_param_keys(char** keys) {
  if (!keys) return fail_arg("qe_param_keys: null output");
  return guard([&] {
    std::vector<std::string> all;
    for (const auto& s : scenario_ids()) {
      ScenarioConfig c;
      c.scenario = s;
      for (const auto& kv : resolve(c))
        if (std::find(all.begin(), all.end(), kv.first) == all.end()) all.push_back(kv.first);
    }
    std::sort(all.begin(), all.end());
    *keys = dup(lines(all));
  });
}

qe_status qe_schemas(char** out) {
  if (!out) return fail_arg("qe_schemas: null output");
  return guard([&] {
    json j;
    json csv = json::object(), js = json::object();
    for (const auto& s : csv_schemas()) csv[s.name] = {{"columns", s.columns}, {"description", s.description}};
    for (const auto& s : json_schemas()) js[s.name] = {{"required", s.keys}};
    j["csv"] = csv;
    j["json"] = js;
    *out = dup(j.dump(2) + "\n");
  });
}

qe_status qe_edge_create(double w, double ebar0, double v, double gamma, qe_edge** out) {
  if (!out) return fail_arg("qe_edge_create: null output");
  return guard([&] { *out = new qe_edge{EdgeResolvent(EdgeParams{w, ebar0, v, gamma})}; });
}

qe_status qe_edge_create_spoiler(double w, double ebar0, double v, double gamma, double e_s, double v_s,
                                 qe_edge** out) {
  if (!out) return fail_arg("qe_edge_create_spoiler: null output");
  return guard([&] { *out = new qe_edge{EdgeResolvent(EdgeParams{w, ebar0, v, gamma}, Spoiler{e_s, v_s})}; });
}

qe_status qe_edge_psi0(const qe_edge* h, double t, double* re, double* im) {
  if (!h || !re || !im) return fail_arg("qe_edge_psi0: null argument");
  return guard([&] {
    cplx z = h->r.psi0(t);
    *re = z.real();
    *im = z.imag();
  });
}

qe_status qe_edge_psiE(const qe_edge* h, double e, double t, double* re, double* im) {
  if (!h || !re || !im) return fail_arg("qe_edge_psiE: null argument");
  return guard([&] {
    cplx z = h->r.psiE(e, t);
    *re = z.real();
    *im = z.imag();
  });
}

qe_status qe_edge_rho0_infinity(const qe_edge* h, double* rho) {
  if (!h || !rho) return fail_arg("qe_edge_rho0_infinity: null argument");
  return guard([&] { *rho = h->r.rho0_infinity(); });
}

qe_status qe_edge_rho_stationary(const qe_edge* h, double e, double* rho) {
  if (!h || !rho) return fail_arg("qe_edge_rho_stationary: null argument");
  return guard([&] { *rho = h->r.rho_stationary(e); });
}

qe_status qe_edge_pole_count(const qe_edge* h, size_t* n) {
  if (!h || !n) return fail_arg("qe_edge_pole_count: null argument");
  return guard([&] { *n = h->r.poles().size(); });
}

qe_status qe_edge_pole(const qe_edge* h, size_t k, double* re, double* im) {
  if (!h || !re || !im) return fail_arg("qe_edge_pole: null argument");
  if (k >= h->r.poles().size()) return fail_arg("qe_edge_pole: index out of range");
  return guard([&] {
    *re = h->r.poles()[k].real();
    *im = h->r.poles()[k].imag();
  });
}

void qe_edge_destroy(qe_edge* h) { delete h; }

qe_status qe_scatter_solve(double w, double e_o, double alpha, const double* e_s, const double* v_s,
                           size_t n_spoilers, int absorption, qe_scatter** out) {
  if (!out) return fail_arg("qe_scatter_solve: null output");
  if (n_spoilers && (!e_s || !v_s)) return fail_arg("qe_scatter_solve: null spoiler arrays");
  return guard([&] {
    ScatteringPotential pot;
    pot.w = w;
    pot.e_o = e_o;
    pot.alpha = alpha;
    pot.absorption = absorption != 0;
    for (size_t i = 0; i < n_spoilers; ++i) pot.spoilers.push_back({e_s[i], v_s[i]});
    pot.validate();
    *out = new qe_scatter{solve_scattering(pot)};
  });
}

qe_status qe_scatter_absorbed(const qe_scatter* h, double* a) {
  if (!h || !a) return fail_arg("qe_scatter_absorbed: null argument");
  *a = h->sol.absorbed_fraction;
  clear();
  return QE_OK;
}

qe_status qe_scatter_edge_w50(const qe_scatter* h, double* w50) {
  if (!h || !w50) return fail_arg("qe_scatter_edge_w50: null argument");
  *w50 = h->sol.edge_w50;
  clear();
  return QE_OK;
}

qe_status qe_scatter_size(const qe_scatter* h, size_t* n) {
  if (!h || !n) return fail_arg("qe_scatter_size: null argument");
  *n = h->sol.eps.size();
  clear();
  return QE_OK;
}

qe_status qe_scatter_profile(const qe_scatter* h, double* eps, double* abs2, size_t n) {
  if (!h || (n && (!eps || !abs2))) return fail_arg("qe_scatter_profile: null argument");
  size_t m = std::min(n, h->sol.eps.size());
  for (size_t i = 0; i < m; ++i) {
    eps[i] = h->sol.eps[i];
    abs2[i] = std::norm(h->sol.psi[i]);
  }
  clear();
  return QE_OK;
}

void qe_scatter_destroy(qe_scatter* h) { delete h; }

qe_status qe_wkb_transfer(double w, double e_o, double alpha, double* probability) {
  if (!probability) return fail_arg("qe_wkb_transfer: null output");
  return guard([&] { *probability = wkb_transfer(w, e_o, alpha).probability; });
}

qe_status qe_tractable_profile(double w, double u, double ebar_o, const double* e, size_t n,
                               double* rho_normalized, double* half_width) {
  if (!e || !rho_normalized || n == 0) return fail_arg("qe_tractable_profile: null or empty grid");
  return guard([&] {
    StationaryDistribution d = tractable_profile(w, u, ebar_o, std::vector<double>(e, e + n));
    for (size_t i = 0; i < n; ++i) rho_normalized[i] = d.rho[i] / d.rho_edge;
    if (half_width) *half_width = d.half_width;
  });
}

}  // extern "C"
