// qaoa-fipso command-line tool. Talks to the library only through qaoa_fipso.h.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qaoa_fipso.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr std::uint64_t kDefaultSeed = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(qf_status status) {
  if (status != QF_OK) throw Failure(std::string(qf_status_name(status)) + ": " + qf_last_error());
}

// Owning wrapper around a malloc'd string from the C API.
struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { qf_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
};

using GraphHandle = Handle<qf_graph, qf_graph_free>;
using SwarmHandle = Handle<qf_swarm_config, qf_swarm_config_free>;
using ResultHandle = Handle<qf_optimize_result, qf_optimize_result_free>;
using SuiteHandle = Handle<qf_suite_config, qf_suite_config_free>;

double parse_angle(std::string token) {
  double sign = 1.0;
  if (!token.empty() && (token[0] == '-' || token[0] == '+')) {
    sign = token[0] == '-' ? -1.0 : 1.0;
    token.erase(0, 1);
  }
  if (token == "pi") return sign * std::numbers::pi;
  double value = 0.0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc{} || ptr != end) throw UsageError("bad number \"" + token + "\"");
  return sign * value;
}

// "lo..hi"
std::pair<double, double> parse_range(const std::string& text, const std::string& flag) {
  const auto sep = text.find("..");
  if (sep == std::string::npos) throw UsageError(flag + " expects lo..hi, got \"" + text + "\"");
  try {
    return {parse_angle(text.substr(0, sep)), parse_angle(text.substr(sep + 2))};
  } catch (const UsageError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::pair<int, int> parse_node_range(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw UsageError("--nodes expects lo..hi or a single size, got \"" + text + "\"");
    }
    return v;
  };
  const auto sep = text.find("..");
  if (sep == std::string::npos) {
    const int n = to_int(text);
    return {n, n};
  }
  const int lo = to_int(text.substr(0, sep));
  const int hi = to_int(text.substr(sep + 2));
  if (hi < lo) throw UsageError("--nodes range " + text + " is empty");
  return {lo, hi};
}

std::vector<int> parse_depths(const std::string& text) {
  std::vector<int> depths;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    int v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
      throw UsageError("--depths expects a comma-separated list of integers, got \"" + text + "\"");
    }
    if (v < 1 || v > 3) throw UsageError("--depths values must be 1, 2 or 3, got " + item);
    depths.push_back(v);
    start = end + 1;
  }
  return depths;
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("QAOA_FIPSO_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  std::uint64_t v = 0;
  const std::string s(raw);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw UsageError("QAOA_FIPSO_SEED must be a non-negative integer, got \"" + s + "\"");
  }
  return v;
}

std::string sidecar_path_for(const std::string& csv) {
  const std::string ext = ".csv";
  if (csv.size() > ext.size() && csv.compare(csv.size() - ext.size(), ext.size(), ext) == 0) {
    return csv.substr(0, csv.size() - ext.size()) + ".json";
  }
  return csv + ".json";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure("cannot write " + path);
  out << text;
  if (!out) throw Failure("failed writing " + path);
}

struct SuiteOptions {
  std::string models = "er,ws";
  std::string nodes = "3..16";
  std::string depths = "1,2,3";
  int instances = 5;
  std::optional<std::uint64_t> seed;
  std::string out = "results.csv";
  std::string json;
  std::string config;
  int jobs = 1;
  double er_prob = 0.5;
  double ws_rewire = 0.3;
  bool allow_large = false;
  bool quiet = false;
};

int cmd_run_suite(const SuiteOptions& o) {
  const auto [lo, hi] = parse_node_range(o.nodes);
  const auto depths = parse_depths(o.depths);

  SuiteHandle suite;
  check(qf_suite_config_create(&suite.ptr));
  if (qf_suite_config_set_models(suite.ptr, o.models.c_str()) != QF_OK) {
    throw UsageError(std::string("--models: ") + qf_last_error());
  }
  check(qf_suite_config_set_nodes(suite.ptr, lo, hi));
  check(qf_suite_config_set_depths(suite.ptr, depths.data(), depths.size()));
  check(qf_suite_config_set_instances(suite.ptr, o.instances));
  check(qf_suite_config_set_seed(suite.ptr, o.seed.value_or(env_seed().value_or(kDefaultSeed))));
  check(qf_suite_config_set_probabilities(suite.ptr, o.er_prob, o.ws_rewire));
  check(qf_suite_config_set_jobs(suite.ptr, o.jobs));
  check(qf_suite_config_set_allow_large(suite.ptr, o.allow_large ? 1 : 0));
  if (!o.config.empty()) {
    SwarmHandle swarm;
    check(qf_swarm_config_read(o.config.c_str(), &swarm.ptr));
    check(qf_suite_config_set_swarm(suite.ptr, swarm.ptr));
  }

  OwnedString warnings;
  check(qf_suite_config_validate(suite.ptr, &warnings.ptr));
  if (!warnings.str().empty()) std::cerr << "warning: " << warnings.str();

  const std::string json = o.json.empty() ? sidecar_path_for(o.out) : o.json;
  OwnedString summary;
  check(qf_suite_run(suite.ptr, o.out.c_str(), json.c_str(), nullptr, nullptr, &summary.ptr));
  if (!o.quiet) std::cout << summary.str();
  return kExitOk;
}

int cmd_optimize(const std::string& graph_path, int depth, const std::string& config,
                 std::optional<std::uint64_t> seed) {
  GraphHandle graph;
  check(qf_graph_read(graph_path.c_str(), &graph.ptr));
  SwarmHandle swarm;
  if (config.empty()) {
    check(qf_swarm_config_create(&swarm.ptr));
  } else {
    check(qf_swarm_config_read(config.c_str(), &swarm.ptr));
  }
  if (seed) {
    check(qf_swarm_config_set_seed(swarm.ptr, *seed));
  } else if (!qf_swarm_config_has_explicit_seed(swarm.ptr)) {
    check(qf_swarm_config_set_seed(swarm.ptr, env_seed().value_or(kDefaultSeed)));
  }
  ResultHandle result;
  check(qf_optimize(graph.ptr, depth, swarm.ptr, &result.ptr));
  OwnedString json;
  check(qf_optimize_result_to_json(result.ptr, &json.ptr));
  std::cout << json.str() << '\n';
  return kExitOk;
}

int cmd_maxcut(const std::string& graph_path) {
  GraphHandle graph;
  check(qf_graph_read(graph_path.c_str(), &graph.ptr));
  int value = 0;
  std::uint64_t mask = 0;
  check(qf_maxcut_bruteforce(graph.ptr, &value, &mask));
  std::string bits;
  for (int i = 0; i < qf_graph_node_count(graph.ptr); ++i) bits += ((mask >> i) & 1U) ? '1' : '0';
  std::cout << value << '\n' << bits << '\n';
  return kExitOk;
}

int cmd_landscape(const std::string& graph_path, int resolution, const std::string& gamma_range,
                  const std::string& beta_range, const std::string& out) {
  const auto [glo, ghi] = parse_range(gamma_range, "--gamma-range");
  const auto [blo, bhi] = parse_range(beta_range, "--beta-range");
  if (!(glo < ghi) || !(blo < bhi)) throw UsageError("ranges must satisfy lo < hi");
  if (resolution < 2) throw UsageError("--resolution must be at least 2");
  GraphHandle graph;
  check(qf_graph_read(graph_path.c_str(), &graph.ptr));
  OwnedString csv;
  check(qf_landscape_csv(graph.ptr, glo, ghi, blo, bhi, resolution, &csv.ptr));
  if (out.empty() || out == "-") {
    std::cout << csv.str();
  } else {
    write_file(out, csv.str());
  }
  return kExitOk;
}

int cmd_report(const std::string& in, const std::string& csv_out) {
  OwnedString text;
  OwnedString csv;
  check(qf_report_from_csv(in.c_str(), &text.ptr, &csv.ptr));
  std::cout << text.str();
  if (!csv_out.empty()) write_file(csv_out, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA MaxCut simulation and Adam-FIPSO parameter optimization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qf_version());

  SuiteOptions suite;
  auto* run_suite = app.add_subcommand("run-suite", "Run the ER/WS x node size x depth sweep");
  run_suite->add_option("--models", suite.models, "Comma-separated graph models (er, ws)")
      ->capture_default_str();
  run_suite->add_option("--nodes", suite.nodes, "Inclusive node range lo..hi")->capture_default_str();
  run_suite->add_option("--depths", suite.depths, "Comma-separated QAOA depths")->capture_default_str();
  run_suite->add_option("--instances", suite.instances, "Graphs per (model, size)")
      ->capture_default_str();
  run_suite->add_option("--seed", suite.seed, "Base seed (default: $QAOA_FIPSO_SEED or 1)");
  run_suite->add_option("--out", suite.out, "Results CSV path")->capture_default_str();
  run_suite->add_option("--json", suite.json, "Sidecar JSON path (default: next to --out)");
  run_suite->add_option("--config", suite.config, "Swarm config JSON");
  run_suite->add_option("--jobs", suite.jobs, "Parallel instances")->capture_default_str();
  run_suite->add_option("--er-prob", suite.er_prob, "ER edge probability")->capture_default_str();
  run_suite->add_option("--ws-rewire", suite.ws_rewire, "WS rewiring probability")->capture_default_str();
  run_suite->add_flag("--allow-large", suite.allow_large, "Permit node sizes above 16 (up to 24)");
  run_suite->add_flag("--quiet", suite.quiet, "Suppress the per-cell summary");

  std::string graph_path;
  int depth = 1;
  std::string config;
  std::optional<std::uint64_t> seed;
  auto* optimize = app.add_subcommand("optimize", "Optimize QAOA angles for one graph");
  optimize->add_option("--graph", graph_path, "Graph JSON file")->required();
  optimize->add_option("--depth", depth, "QAOA depth p")->capture_default_str();
  optimize->add_option("--config", config, "Swarm config JSON");
  optimize->add_option("--seed", seed, "Swarm seed (default: config, $QAOA_FIPSO_SEED, or 1)");

  std::string maxcut_graph;
  auto* maxcut = app.add_subcommand("maxcut", "Exact MaxCut by enumeration");
  maxcut->add_option("--graph", maxcut_graph, "Graph JSON file")->required();

  std::string land_graph;
  int resolution = 64;
  std::string gamma_range = "-pi..pi";
  std::string beta_range = "-pi..pi";
  std::string land_out;
  auto* landscape = app.add_subcommand("landscape", "Export the p=1 expectation landscape as CSV");
  landscape->add_option("--graph", land_graph, "Graph JSON file")->required();
  landscape->add_option("--resolution", resolution, "Lattice points per axis")->capture_default_str();
  landscape->add_option("--gamma-range", gamma_range, "gamma range lo..hi")->capture_default_str();
  landscape->add_option("--beta-range", beta_range, "beta range lo..hi")->capture_default_str();
  landscape->add_option("--out", land_out, "Output CSV path (default: stdout)");

  std::string report_in;
  std::string report_csv;
  auto* report = app.add_subcommand("report", "Mean improvement tables from a results CSV");
  report->add_option("--in", report_in, "Results CSV from run-suite")->required();
  report->add_option("--csv-out", report_csv, "Also write the tables as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run_suite) return cmd_run_suite(suite);
    if (*optimize) return cmd_optimize(graph_path, depth, config, seed);
    if (*maxcut) return cmd_maxcut(maxcut_graph);
    if (*landscape) return cmd_landscape(land_graph, resolution, gamma_range, beta_range, land_out);
    if (*report) return cmd_report(report_in, report_csv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
