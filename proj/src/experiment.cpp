#include "qaoa_fipso/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <condition_variable>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "qaoa_fipso/error.hpp"
#include "qaoa_fipso/qaoasim.hpp"
#include "qaoa_fipso/rng.hpp"

namespace qaoa_fipso {

std::string_view to_string(GraphModel model) { return model == GraphModel::er ? "ER" : "WS"; }

GraphModel parse_graph_model(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "er") return GraphModel::er;
  if (lower == "ws") return GraphModel::ws;
  throw ArgumentError("unknown graph model \"" + std::string(name) + "\" (expected er or ws)");
}

std::uint64_t derive_seed(std::uint64_t base_seed, GraphModel model, int graph_index, int n, int p,
                          SeedRole role) {
  static constexpr std::string_view kRoleTags[] = {"graph", "baseline", "swarm"};
  std::uint64_t h = mix64(base_seed);
  h = hash_combine(h, hash_tag(to_string(model)));
  h = hash_combine(h, static_cast<std::uint64_t>(graph_index));
  h = hash_combine(h, static_cast<std::uint64_t>(n));
  h = hash_combine(h, role == SeedRole::graph ? 0 : static_cast<std::uint64_t>(p));
  return hash_combine(h, hash_tag(kRoleTags[static_cast<int>(role)]));
}

std::vector<std::string> SuiteConfig::validate() const {
  std::vector<std::string> warnings;
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ArgumentError("invalid suite config: " + what);
  };
  require(!models.empty(), "at least one graph model is required");
  require(node_lo >= 3, "node range must start at 3 or above");
  require(node_hi >= node_lo, "node range is empty");
  if (node_hi > kMaxNodes) {
    throw CapacityError("node range ends at " + std::to_string(node_hi) + ", beyond the " +
                        std::to_string(kMaxNodes) + "-node simulation limit");
  }
  if (node_hi > 16) {
    if (!allow_large) {
      throw CapacityError("node range ends at " + std::to_string(node_hi) +
                          "; sizes above 16 must be explicitly allowed");
    }
    warnings.push_back("node sizes above 16 make brute-force MaxCut and simulation very slow");
  }
  require(instances_per_size >= 1, "instances_per_size must be >= 1");
  require(!depths.empty(), "at least one depth is required");
  for (int p : depths) require(p >= 1 && p <= 3, "depths must be drawn from {1, 2, 3}");
  require(er_edge_prob >= 0.0 && er_edge_prob <= 1.0, "er_edge_prob must lie in [0, 1]");
  require(ws_rewire_prob >= 0.0 && ws_rewire_prob <= 1.0, "ws_rewire_prob must lie in [0, 1]");
  require(jobs >= 1, "jobs must be >= 1");
  for (int p : depths) swarm.validate(static_cast<std::size_t>(2 * p));
  return warnings;
}

RandomBaseline evaluate_baseline(const Graph& g, std::span<const double> theta, int max_cut) {
  if (g.edge_count() == 0 || max_cut <= 0) {
    throw ArgumentError("random baseline is undefined for an edgeless graph");
  }
  RandomBaseline out;
  out.params.assign(theta.begin(), theta.end());
  QaoaSimulator sim(g);
  out.cut = sim.expectation(theta);
  out.ar = approx_ratio(out.cut, max_cut);
  return out;
}

RandomBaseline random_baseline(const Graph& g, int p, std::uint64_t seed, int max_cut) {
  Rng rng(seed);
  const auto theta = random_params(p, rng);
  return evaluate_baseline(g, theta, max_cut);
}

RandomBaseline random_baseline(const Graph& g, int p, std::uint64_t seed) {
  if (g.edge_count() == 0) throw ArgumentError("random baseline is undefined for an edgeless graph");
  return random_baseline(g, p, seed, max_cut_bruteforce(g).value);
}

double improvement(double ar_opt, double ar_rand) {
  if (!(ar_rand > 0.0)) throw UndefinedError("improvement is undefined for a zero baseline AR");
  return (ar_opt - ar_rand) / ar_rand * 100.0;
}

std::pair<Graph, std::uint64_t> instance_graph(GraphModel model, int n, std::uint64_t seed,
                                              const SuiteConfig& cfg) {
  for (;;) {
    Graph g = model == GraphModel::er ? generate_er(n, cfg.er_edge_prob, seed)
                                      : generate_ws(n, ws_k_for(n), cfg.ws_rewire_prob, seed);
    if (g.edge_count() > 0) return {std::move(g), seed};
    if (cfg.er_edge_prob == 0.0 && model == GraphModel::er) {
      throw ArgumentError("ER edge probability 0 can never produce an edge");
    }
    ++seed;
  }
}

ExperimentRecord run_instance(GraphModel model, int graph_index, int n, int p, const SuiteConfig& cfg) {
  ExperimentRecord r;
  r.model = model;
  r.graph_index = graph_index;
  r.n = n;
  r.p = p;
  r.baseline_seed = derive_seed(cfg.base_seed, model, graph_index, n, p, SeedRole::baseline);
  r.swarm_seed = derive_seed(cfg.base_seed, model, graph_index, n, p, SeedRole::swarm);

  auto [g, graph_seed] =
      instance_graph(model, n, derive_seed(cfg.base_seed, model, graph_index, n, p, SeedRole::graph), cfg);
  r.graph_seed = graph_seed;
  r.edges = g.edges();

  r.max_cut = max_cut_bruteforce(g).value;
  r.classical_cut = one_exchange_cut(g, hash_combine(graph_seed, hash_tag("one_exchange"))).value;

  const RandomBaseline baseline = random_baseline(g, p, r.baseline_seed, r.max_cut);
  r.rand_params = baseline.params;
  r.rand_cut = baseline.cut;
  r.rand_ar = baseline.ar;

  SwarmConfig swarm = cfg.swarm;
  swarm.seed = r.swarm_seed;
  const OptimizeResult opt = adam_fipso_optimize(g, p, r.max_cut, swarm);
  r.opt_params = opt.best_position;
  r.opt_cut = opt.best_expectation;
  r.opt_ar = approx_ratio(opt.best_expectation, r.max_cut);
  r.opt_loss = opt.best_loss;
  r.evaluations = opt.evaluations;

  try {
    r.improvement_pct = improvement(r.opt_ar, r.rand_ar);
  } catch (const UndefinedError&) {
    r.flag = "undefined_improvement";
  }
  return r;
}

std::vector<InstanceKey> plan_suite(const SuiteConfig& cfg) {
  std::vector<GraphModel> models = cfg.models;
  std::sort(models.begin(), models.end());
  models.erase(std::unique(models.begin(), models.end()), models.end());
  std::vector<int> depths = cfg.depths;
  std::sort(depths.begin(), depths.end());
  depths.erase(std::unique(depths.begin(), depths.end()), depths.end());

  std::vector<InstanceKey> plan;
  for (GraphModel m : models) {
    for (int idx = 1; idx <= cfg.instances_per_size; ++idx) {
      for (int n = cfg.node_lo; n <= cfg.node_hi; ++n) {
        for (int p : depths) plan.push_back({m, idx, n, p});
      }
    }
  }
  return plan;
}

void check_seed_collisions(const SuiteConfig& cfg) {
  std::set<std::uint64_t> run_seeds;
  std::map<std::uint64_t, std::tuple<GraphModel, int, int>> graph_seeds;
  for (const InstanceKey& k : plan_suite(cfg)) {
    for (SeedRole role : {SeedRole::baseline, SeedRole::swarm}) {
      if (!run_seeds.insert(derive_seed(cfg.base_seed, k.model, k.graph_index, k.n, k.p, role)).second) {
        throw ValidationError("derived seed collision in suite plan");
      }
    }
    const auto gs = derive_seed(cfg.base_seed, k.model, k.graph_index, k.n, k.p, SeedRole::graph);
    const auto id = std::make_tuple(k.model, k.graph_index, k.n);
    auto [it, inserted] = graph_seeds.emplace(gs, id);
    if (!inserted && it->second != id) throw ValidationError("derived graph seed collision in suite plan");
  }
}

namespace {

ExperimentRecord run_guarded(const InstanceKey& k, const SuiteConfig& cfg) {
  try {
    return run_instance(k.model, k.graph_index, k.n, k.p, cfg);
  } catch (const std::exception& e) {
    ExperimentRecord r;
    r.model = k.model;
    r.graph_index = k.graph_index;
    r.n = k.n;
    r.p = k.p;
    r.graph_seed = derive_seed(cfg.base_seed, k.model, k.graph_index, k.n, k.p, SeedRole::graph);
    r.baseline_seed = derive_seed(cfg.base_seed, k.model, k.graph_index, k.n, k.p, SeedRole::baseline);
    r.swarm_seed = derive_seed(cfg.base_seed, k.model, k.graph_index, k.n, k.p, SeedRole::swarm);
    r.flag = std::string("error: ") + e.what();
    return r;
  }
}

}  // namespace

std::vector<ExperimentRecord> run_suite(const SuiteConfig& cfg, const RecordSink& sink) {
  cfg.validate();
  check_seed_collisions(cfg);
  const std::vector<InstanceKey> plan = plan_suite(cfg);
  std::vector<std::optional<ExperimentRecord>> slots(plan.size());
  std::vector<ExperimentRecord> records;
  records.reserve(plan.size());

  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next_task{0};
  auto worker = [&] {
    for (std::size_t i = next_task++; i < plan.size(); i = next_task++) {
      ExperimentRecord r = run_guarded(plan[i], cfg);
      std::lock_guard lock(mu);
      slots[i] = std::move(r);
      ready.notify_one();
    }
  };

  const auto workers = cfg.jobs > 1 ? static_cast<std::size_t>(cfg.jobs) : std::size_t{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < std::min(workers, plan.size()); ++t) pool.emplace_back(worker);

  if (pool.empty()) {
    for (const InstanceKey& k : plan) {
      records.push_back(run_guarded(k, cfg));
      if (sink) sink(records.back());
    }
    return records;
  }

  for (std::size_t emit = 0; emit < plan.size(); ++emit) {
    std::unique_lock lock(mu);
    ready.wait(lock, [&] { return slots[emit].has_value(); });
    records.push_back(std::move(*slots[emit]));
    slots[emit].reset();
    lock.unlock();
    if (sink) sink(records.back());
  }
  return records;
}

}  // namespace qaoa_fipso
