#include "qaoa_fipso.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qaoa_fipso/error.hpp"
#include "qaoa_fipso/experiment.hpp"
#include "qaoa_fipso/graph.hpp"
#include "qaoa_fipso/optimizer.hpp"
#include "qaoa_fipso/qaoasim.hpp"

using namespace qaoa_fipso;

struct qf_graph {
  Graph graph;
};

struct qf_swarm_config {
  SwarmConfig cfg;
  bool explicit_seed = false;
};

struct qf_optimize_result {
  OptimizeResult result;
  double target = 0.0;
  int iterations = 0;
};

struct qf_suite_config {
  SuiteConfig cfg;
};

namespace {

thread_local std::string g_last_error;

qf_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::argument: return QF_ERR_ARGUMENT;
    case ErrorKind::capacity: return QF_ERR_CAPACITY;
    case ErrorKind::dimension: return QF_ERR_DIMENSION;
    case ErrorKind::parse: return QF_ERR_PARSE;
    case ErrorKind::validation: return QF_ERR_VALIDATION;
    case ErrorKind::numerical: return QF_ERR_NUMERICAL;
    case ErrorKind::undefined: return QF_ERR_UNDEFINED;
    case ErrorKind::io: return QF_ERR_IO;
  }
  return QF_ERR_INTERNAL;
}

template <typename Fn>
qf_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return QF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return QF_ERR_INTERNAL;
  }
}

void require(const void* ptr, const char* name) {
  if (ptr == nullptr) throw ArgumentError(std::string(name) + " must not be NULL");
}

// Null-checks a handle output and resets it.
template <typename T>
void require_handle_out(T** out) {
  require(out, "out");
  *out = nullptr;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string read_text_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string("cannot open ") + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

qf_swarm_config* make_swarm_config(std::string_view json) {
  auto* out = new qf_swarm_config{swarm_config_from_json(json), false};
  out->explicit_seed = nlohmann::json::parse(json.begin(), json.end()).contains("seed");
  return out;
}

}  // namespace

extern "C" {

const char* qf_version(void) { return "1.0.0"; }

const char* qf_last_error(void) { return g_last_error.c_str(); }

const char* qf_status_name(qf_status status) {
  switch (status) {
    case QF_OK: return "ok";
    case QF_ERR_ARGUMENT: return "argument error";
    case QF_ERR_CAPACITY: return "capacity error";
    case QF_ERR_DIMENSION: return "dimension error";
    case QF_ERR_PARSE: return "parse error";
    case QF_ERR_VALIDATION: return "validation error";
    case QF_ERR_NUMERICAL: return "numerical error";
    case QF_ERR_UNDEFINED: return "undefined result";
    case QF_ERR_IO: return "I/O error";
    case QF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void qf_string_free(char* s) { std::free(s); }

qf_status qf_graph_create(int n, const int* edge_pairs, size_t edge_count, qf_graph** out) {
  return guarded([&] {
    require_handle_out(out);
    if (edge_count > 0) require(edge_pairs, "edge_pairs");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(edge_count);
    for (size_t i = 0; i < edge_count; ++i) edges.emplace_back(edge_pairs[2 * i], edge_pairs[2 * i + 1]);
    *out = new qf_graph{Graph(n, edges)};
  });
}

qf_status qf_graph_generate_er(int n, double edge_prob, uint64_t seed, qf_graph** out) {
  return guarded([&] {
    require_handle_out(out);
    *out = new qf_graph{generate_er(n, edge_prob, seed)};
  });
}

qf_status qf_graph_generate_ws(int n, int k, double rewire_prob, uint64_t seed, qf_graph** out) {
  return guarded([&] {
    require_handle_out(out);
    *out = new qf_graph{generate_ws(n, k, rewire_prob, seed)};
  });
}

qf_status qf_ws_k_for(int n, int* k_out) {
  return guarded([&] {
    require(k_out, "k_out");
    *k_out = ws_k_for(n);
  });
}

qf_status qf_graph_read(const char* path, qf_graph** out) {
  return guarded([&] {
    require(path, "path");
    require_handle_out(out);
    *out = new qf_graph{read_graph(path)};
  });
}

qf_status qf_graph_write(const qf_graph* g, const char* path) {
  return guarded([&] {
    require(g, "graph");
    require(path, "path");
    write_graph(g->graph, path);
  });
}

void qf_graph_free(qf_graph* g) { delete g; }

int qf_graph_node_count(const qf_graph* g) { return g ? g->graph.node_count() : 0; }

size_t qf_graph_edge_count(const qf_graph* g) { return g ? g->graph.edge_count() : 0; }

qf_status qf_graph_edges(const qf_graph* g, int* pairs_out, size_t capacity) {
  return guarded([&] {
    require(g, "graph");
    const auto& edges = g->graph.edges();
    if (capacity < edges.size()) throw DimensionError("edge buffer too small");
    if (!edges.empty()) require(pairs_out, "pairs_out");
    for (size_t i = 0; i < edges.size(); ++i) {
      pairs_out[2 * i] = edges[i].u;
      pairs_out[2 * i + 1] = edges[i].v;
    }
  });
}

qf_status qf_cut_size(const qf_graph* g, uint64_t mask, int* out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    *out = cut_size(g->graph, mask);
  });
}

qf_status qf_maxcut_bruteforce(const qf_graph* g, int* value, uint64_t* mask) {
  return guarded([&] {
    require(g, "graph");
    const CutResult r = max_cut_bruteforce(g->graph);
    if (value) *value = r.value;
    if (mask) *mask = r.mask;
  });
}

qf_status qf_one_exchange_cut(const qf_graph* g, uint64_t seed, int* value, uint64_t* mask) {
  return guarded([&] {
    require(g, "graph");
    const CutResult r = one_exchange_cut(g->graph, seed);
    if (value) *value = r.value;
    if (mask) *mask = r.mask;
  });
}

qf_status qf_qaoa_expectation(const qf_graph* g, int p, const double* gamma, const double* beta,
                              double* out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    if (p < 1) throw ArgumentError("QAOA depth must be at least 1");
    require(gamma, "gamma");
    require(beta, "beta");
    const QaoaParams params{{gamma, gamma + p}, {beta, beta + p}};
    *out = qaoa_expectation(g->graph, params);
  });
}

qf_status qf_landscape(const qf_graph* g, double gamma_lo, double gamma_hi, double beta_lo,
                       double beta_hi, int resolution, double* values_out) {
  return guarded([&] {
    require(g, "graph");
    require(values_out, "values_out");
    const Landscape l = landscape_grid(g->graph, {gamma_lo, gamma_hi}, {beta_lo, beta_hi}, resolution);
    std::copy(l.values.begin(), l.values.end(), values_out);
  });
}

qf_status qf_landscape_csv(const qf_graph* g, double gamma_lo, double gamma_hi, double beta_lo,
                           double beta_hi, int resolution, char** csv_out) {
  return guarded([&] {
    require(g, "graph");
    require(csv_out, "csv_out");
    const Landscape l = landscape_grid(g->graph, {gamma_lo, gamma_hi}, {beta_lo, beta_hi}, resolution);
    std::ostringstream out;
    write_landscape_csv(l, out);
    *csv_out = dup_string(out.str());
  });
}

qf_status qf_swarm_config_create(qf_swarm_config** out) {
  return guarded([&] {
    require_handle_out(out);
    *out = new qf_swarm_config{};
  });
}

qf_status qf_swarm_config_from_json(const char* json, qf_swarm_config** out) {
  return guarded([&] {
    require(json, "json");
    require_handle_out(out);
    *out = make_swarm_config(json);
  });
}

qf_status qf_swarm_config_read(const char* path, qf_swarm_config** out) {
  return guarded([&] {
    require(path, "path");
    require_handle_out(out);
    const std::string text = read_text_file(path);
    try {
      *out = make_swarm_config(text);
    } catch (const ParseError& e) {
      throw ParseError(std::string(path) + ": " + e.detail(), e.line());
    }
  });
}

qf_status qf_swarm_config_set_seed(qf_swarm_config* cfg, uint64_t seed) {
  return guarded([&] {
    require(cfg, "config");
    cfg->cfg.seed = seed;
    cfg->explicit_seed = true;
  });
}

qf_status qf_swarm_config_get_seed(const qf_swarm_config* cfg, uint64_t* seed) {
  return guarded([&] {
    require(cfg, "config");
    require(seed, "seed");
    *seed = cfg->cfg.seed;
  });
}

int qf_swarm_config_has_explicit_seed(const qf_swarm_config* cfg) {
  return cfg && cfg->explicit_seed ? 1 : 0;
}

qf_status qf_swarm_config_to_json(const qf_swarm_config* cfg, char** json_out) {
  return guarded([&] {
    require(cfg, "config");
    require(json_out, "json_out");
    *json_out = dup_string(swarm_config_to_json(cfg->cfg));
  });
}

void qf_swarm_config_free(qf_swarm_config* cfg) { delete cfg; }

qf_status qf_optimize_with_target(const qf_graph* g, int p, double c_target, const qf_swarm_config* cfg,
                                  qf_optimize_result** out) {
  return guarded([&] {
    require(g, "graph");
    require_handle_out(out);
    const SwarmConfig swarm = cfg ? cfg->cfg : SwarmConfig{};
    auto* r = new qf_optimize_result{adam_fipso_optimize(g->graph, p, c_target, swarm), c_target,
                                     swarm.max_iters};
    *out = r;
  });
}

qf_status qf_optimize(const qf_graph* g, int p, const qf_swarm_config* cfg, qf_optimize_result** out) {
  int max_cut = 0;
  if (qf_status s = qf_maxcut_bruteforce(g, &max_cut, nullptr); s != QF_OK) return s;
  return qf_optimize_with_target(g, p, max_cut, cfg, out);
}

void qf_optimize_result_free(qf_optimize_result* r) { delete r; }

size_t qf_optimize_result_dim(const qf_optimize_result* r) {
  return r ? r->result.best_position.size() : 0;
}

qf_status qf_optimize_result_position(const qf_optimize_result* r, double* out, size_t capacity) {
  return guarded([&] {
    require(r, "result");
    require(out, "out");
    if (capacity < r->result.best_position.size()) throw DimensionError("position buffer too small");
    std::copy(r->result.best_position.begin(), r->result.best_position.end(), out);
  });
}

double qf_optimize_result_loss(const qf_optimize_result* r) {
  return r ? r->result.best_loss : std::numeric_limits<double>::quiet_NaN();
}

double qf_optimize_result_expectation(const qf_optimize_result* r) {
  return r ? r->result.best_expectation : std::numeric_limits<double>::quiet_NaN();
}

double qf_optimize_result_target(const qf_optimize_result* r) {
  return r ? r->target : std::numeric_limits<double>::quiet_NaN();
}

size_t qf_optimize_result_iterations(const qf_optimize_result* r) {
  return r ? static_cast<size_t>(r->iterations) : 0;
}

size_t qf_optimize_result_evaluations(const qf_optimize_result* r) {
  return r ? r->result.evaluations : 0;
}

qf_status qf_optimize_result_to_json(const qf_optimize_result* r, char** json_out) {
  return guarded([&] {
    require(r, "result");
    require(json_out, "json_out");
    nlohmann::ordered_json j;
    j["opt_params"] = r->result.best_position;
    j["opt_cut"] = r->result.best_expectation;
    j["opt_ar"] = approx_ratio(r->result.best_expectation, r->target);
    j["opt_loss"] = r->result.best_loss;
    if (r->target == std::floor(r->target) && std::abs(r->target) < 1e15) {
      j["max_cut"] = static_cast<long long>(r->target);
    } else {
      j["max_cut"] = r->target;
    }
    j["iterations"] = r->iterations;
    j["evaluations"] = r->result.evaluations;
    *json_out = dup_string(j.dump());
  });
}

qf_status qf_suite_config_create(qf_suite_config** out) {
  return guarded([&] {
    require_handle_out(out);
    *out = new qf_suite_config{};
  });
}

void qf_suite_config_free(qf_suite_config* cfg) { delete cfg; }

qf_status qf_suite_config_set_models(qf_suite_config* cfg, const char* models) {
  return guarded([&] {
    require(cfg, "config");
    require(models, "models");
    std::vector<GraphModel> parsed;
    std::istringstream in(models);
    std::string item;
    while (std::getline(in, item, ',')) parsed.push_back(parse_graph_model(item));
    if (parsed.empty()) throw ArgumentError("model list is empty");
    cfg->cfg.models = std::move(parsed);
  });
}

qf_status qf_suite_config_set_nodes(qf_suite_config* cfg, int lo, int hi) {
  return guarded([&] {
    require(cfg, "config");
    cfg->cfg.node_lo = lo;
    cfg->cfg.node_hi = hi;
  });
}

qf_status qf_suite_config_set_depths(qf_suite_config* cfg, const int* depths, size_t count) {
  return guarded([&] {
    require(cfg, "config");
    if (count == 0) throw ArgumentError("depth list is empty");
    require(depths, "depths");
    cfg->cfg.depths.assign(depths, depths + count);
  });
}

qf_status qf_suite_config_set_instances(qf_suite_config* cfg, int instances) {
  return guarded([&] {
    require(cfg, "config");
    cfg->cfg.instances_per_size = instances;
  });
}

qf_status qf_suite_config_set_seed(qf_suite_config* cfg, uint64_t base_seed) {
  return guarded([&] {
    require(cfg, "config");
    cfg->cfg.base_seed = base_seed;
  });
}

qf_status qf_suite_config_set_probabilities(qf_suite_config* cfg, double er_edge_prob,
                                            double ws_rewire_prob) {
  return guarded([&] {
    require(cfg, "config");
    cfg->cfg.er_edge_prob = er_edge_prob;
    cfg->cfg.ws_rewire_prob = ws_rewire_prob;
  });
}

qf_status qf_suite_config_set_swarm(qf_suite_config* cfg, const qf_swarm_config* swarm) {
  return guarded([&] {
    require(cfg, "config");
    require(swarm, "swarm");
    cfg->cfg.swarm = swarm->cfg;
  });
}

qf_status qf_suite_config_set_jobs(qf_suite_config* cfg, int jobs) {
  return guarded([&] {
    require(cfg, "config");
    cfg->cfg.jobs = jobs;
  });
}

qf_status qf_suite_config_set_allow_large(qf_suite_config* cfg, int allow) {
  return guarded([&] {
    require(cfg, "config");
    cfg->cfg.allow_large = allow != 0;
  });
}

qf_status qf_suite_config_validate(const qf_suite_config* cfg, char** warnings_out) {
  return guarded([&] {
    require(cfg, "config");
    std::string text;
    for (const std::string& w : cfg->cfg.validate()) text += w + "\n";
    if (warnings_out) *warnings_out = dup_string(text);
  });
}

qf_status qf_suite_config_record_count(const qf_suite_config* cfg, size_t* count) {
  return guarded([&] {
    require(cfg, "config");
    require(count, "count");
    cfg->cfg.validate();
    *count = plan_suite(cfg->cfg).size();
  });
}

qf_status qf_suite_run(const qf_suite_config* cfg, const char* csv_path, const char* json_path,
                       qf_record_callback callback, void* user, char** summary_out) {
  return guarded([&] {
    require(cfg, "config");
    require(csv_path, "csv_path");
    cfg->cfg.validate();
    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) throw IoError(std::string("cannot write results file ") + csv_path);
    std::ofstream sidecar;
    if (json_path) {
      sidecar.open(json_path, std::ios::binary | std::ios::trunc);
      if (!sidecar) throw IoError(std::string("cannot write sidecar file ") + json_path);
    }
    write_results_header(csv);
    csv.flush();
    const auto records = run_suite(cfg->cfg, [&](const ExperimentRecord& r) {
      std::ostringstream row;
      write_results_row(row, r);
      csv << row.str();
      csv.flush();
      if (!csv) throw IoError(std::string("failed writing ") + csv_path);
      if (callback) {
        std::string line = row.str();
        line.pop_back();
        callback(line.c_str(), user);
      }
    });
    if (json_path) {
      sidecar << sidecar_json(cfg->cfg, records);
      if (!sidecar) throw IoError(std::string("failed writing ") + json_path);
    }
    if (summary_out) *summary_out = dup_string(format_cell_summary(aggregate_report(records)));
  });
}

qf_status qf_report_from_csv(const char* csv_path, char** text_out, char** csv_out) {
  return guarded([&] {
    require(csv_path, "csv_path");
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw IoError(std::string("cannot open results file ") + csv_path);
    std::vector<ExperimentRecord> records;
    try {
      records = read_results_csv(in);
    } catch (const ParseError& e) {
      throw ParseError(std::string(csv_path) + ": " + e.detail(), e.line());
    }
    const Report report = aggregate_report(records);
    if (text_out) *text_out = dup_string(format_report_text(report));
    if (csv_out) *csv_out = dup_string(format_report_csv(report));
  });
}

}  // extern "C"
