#ifndef QAOA_FIPSO_EXPERIMENT_HPP
#define QAOA_FIPSO_EXPERIMENT_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qaoa_fipso/graph.hpp"
#include "qaoa_fipso/optimizer.hpp"

namespace qaoa_fipso {

enum class GraphModel { er, ws };

/// "ER" / "WS".
std::string_view to_string(GraphModel model);
/// Case-insensitive "er" / "ws".
GraphModel parse_graph_model(std::string_view name);

enum class SeedRole { graph, baseline, swarm };

/// Stable 64-bit seed for one role of one suite cell. Graph seeds ignore the
/// depth so every depth of an instance sees the same graph.
std::uint64_t derive_seed(std::uint64_t base_seed, GraphModel model, int graph_index, int n, int p,
                          SeedRole role);

struct ExperimentRecord {
  GraphModel model = GraphModel::er;
  int graph_index = 0;
  int n = 0;
  int p = 0;
  int max_cut = 0;
  int classical_cut = 0;
  std::vector<double> rand_params;
  double rand_cut = 0.0;
  double rand_ar = 0.0;
  std::vector<double> opt_params;
  double opt_cut = 0.0;
  double opt_ar = 0.0;
  double opt_loss = 0.0;
  /// Absent when the baseline AR is zero or the instance failed.
  std::optional<double> improvement_pct;
  std::uint64_t graph_seed = 0;
  std::uint64_t baseline_seed = 0;
  std::uint64_t swarm_seed = 0;
  /// Empty for a clean record; otherwise why it is excluded from aggregates.
  std::string flag;
  std::vector<Edge> edges;
  std::size_t evaluations = 0;
};

struct SuiteConfig {
  std::vector<GraphModel> models{GraphModel::er, GraphModel::ws};
  int node_lo = 3;
  int node_hi = 16;
  int instances_per_size = 5;
  std::vector<int> depths{1, 2, 3};
  double er_edge_prob = 0.5;
  double ws_rewire_prob = 0.3;
  std::uint64_t base_seed = 1;
  SwarmConfig swarm;
  /// Permits node_hi up to kMaxNodes (with a warning).
  bool allow_large = false;
  /// Worker threads for independent instances; output order does not depend on it.
  int jobs = 1;

  /// Throws ArgumentError / CapacityError; returns non-fatal warnings.
  std::vector<std::string> validate() const;
};

struct RandomBaseline {
  std::vector<double> params;
  double cut = 0.0;
  double ar = 0.0;
};

/// One uniform draw in [-pi, pi]^{2p}, scored against the exact MaxCut.
/// Throws ArgumentError for an edgeless graph.
RandomBaseline random_baseline(const Graph& g, int p, std::uint64_t seed);
RandomBaseline random_baseline(const Graph& g, int p, std::uint64_t seed, int max_cut);
/// Scores fixed angles the same way `random_baseline` scores its draw.
RandomBaseline evaluate_baseline(const Graph& g, std::span<const double> theta, int max_cut);

/// Relative AR gain in percent. Throws UndefinedError when ar_rand <= 0.
double improvement(double ar_opt, double ar_rand);

/// Generates the instance graph, resampling edgeless draws with seed + 1.
/// Returns the graph and the seed that produced it.
std::pair<Graph, std::uint64_t> instance_graph(GraphModel model, int n, std::uint64_t seed,
                                              const SuiteConfig& cfg);

ExperimentRecord run_instance(GraphModel model, int graph_index, int n, int p, const SuiteConfig& cfg);

struct InstanceKey {
  GraphModel model;
  int graph_index;
  int n;
  int p;
};

/// Every (model, graph_index, n, p) cell in canonical order.
std::vector<InstanceKey> plan_suite(const SuiteConfig& cfg);

/// Throws ValidationError if two cells would share a baseline or swarm seed,
/// or two distinct graphs would share a graph seed.
void check_seed_collisions(const SuiteConfig& cfg);

using RecordSink = std::function<void(const ExperimentRecord&)>;

/// Runs every planned cell. Records reach `sink` in canonical order as soon as
/// all earlier cells are done. A failing cell yields a record flagged "error: ...".
std::vector<ExperimentRecord> run_suite(const SuiteConfig& cfg, const RecordSink& sink = {});

// --- persistence --------------------------------------------------------------

inline constexpr std::string_view kResultsCsvHeader =
    "model,graph_index,n,p,max_cut,classical_cut,rand_cut,rand_ar,opt_cut,opt_ar,opt_loss,"
    "improvement_pct,graph_seed,baseline_seed,swarm_seed,flag";

void write_results_header(std::ostream& out);
void write_results_row(std::ostream& out, const ExperimentRecord& r);

/// Parses a results CSV. Parameter vectors and edges are left empty.
/// Throws ParseError naming any missing column, or if no data rows follow the header.
std::vector<ExperimentRecord> read_results_csv(std::istream& in);

/// Full records (parameter vectors, edges, config echo) as one JSON document.
std::string sidecar_json(const SuiteConfig& cfg, std::span<const ExperimentRecord> records);

// --- aggregation --------------------------------------------------------------

struct ReportCell {
  GraphModel model;
  int n;
  int p;
  std::optional<double> mean_improvement;
  int count = 0;     // records contributing to the mean
  int excluded = 0;  // flagged records
};

struct Report {
  std::vector<GraphModel> models;
  std::vector<int> nodes;
  std::vector<int> depths;
  std::vector<ReportCell> cells;  // sorted by model, n, p

  const ReportCell* find(GraphModel model, int n, int p) const;
};

/// Arithmetic mean of improvement_pct per (model, n, p). Throws ArgumentError on empty input.
Report aggregate_report(std::span<const ExperimentRecord> records);

/// One aligned table per model: rows Node n, columns p = depth.
std::string format_report_text(const Report& report);
/// `model,node,p=1,...,excluded`, one row per (model, node).
std::string format_report_csv(const Report& report);
/// One line per cell, used as a run summary.
std::string format_cell_summary(const Report& report);

}  // namespace qaoa_fipso

#endif  // QAOA_FIPSO_EXPERIMENT_HPP
