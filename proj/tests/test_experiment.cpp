#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "qaoa_fipso/error.hpp"
#include "qaoa_fipso/experiment.hpp"
#include "qaoa_fipso/qaoasim.hpp"

using namespace qaoa_fipso;

namespace {

SuiteConfig small_suite() {
  SuiteConfig cfg;
  cfg.models = {GraphModel::er, GraphModel::ws};
  cfg.node_lo = 3;
  cfg.node_hi = 4;
  cfg.instances_per_size = 2;
  cfg.depths = {1, 2};
  cfg.swarm.swarm_size = 6;
  cfg.swarm.max_iters = 8;
  return cfg;
}

std::string to_csv(std::span<const ExperimentRecord> records) {
  std::ostringstream out;
  write_results_header(out);
  for (const auto& r : records) write_results_row(out, r);
  return out.str();
}

ExperimentRecord with_improvement(GraphModel model, int n, int p, std::optional<double> pct,
                                  std::string flag = {}) {
  ExperimentRecord r;
  r.model = model;
  r.graph_index = 1;
  r.n = n;
  r.p = p;
  r.improvement_pct = pct;
  r.flag = std::move(flag);
  return r;
}

}  // namespace

TEST_CASE("graph model names") {
  CHECK(to_string(GraphModel::er) == "ER");
  CHECK(to_string(GraphModel::ws) == "WS");
  CHECK(parse_graph_model("er") == GraphModel::er);
  CHECK(parse_graph_model("Ws") == GraphModel::ws);
  CHECK_THROWS_AS(parse_graph_model("ba"), ArgumentError);
}

TEST_CASE("derive_seed") {
  const auto s = derive_seed(1, GraphModel::er, 1, 5, 2, SeedRole::swarm);
  CHECK(s == derive_seed(1, GraphModel::er, 1, 5, 2, SeedRole::swarm));
  CHECK(s != derive_seed(2, GraphModel::er, 1, 5, 2, SeedRole::swarm));
  CHECK(s != derive_seed(1, GraphModel::ws, 1, 5, 2, SeedRole::swarm));
  CHECK(s != derive_seed(1, GraphModel::er, 2, 5, 2, SeedRole::swarm));
  CHECK(s != derive_seed(1, GraphModel::er, 1, 6, 2, SeedRole::swarm));
  CHECK(s != derive_seed(1, GraphModel::er, 1, 5, 3, SeedRole::swarm));
  CHECK(s != derive_seed(1, GraphModel::er, 1, 5, 2, SeedRole::baseline));
  CHECK(derive_seed(1, GraphModel::er, 1, 5, 1, SeedRole::graph) ==
        derive_seed(1, GraphModel::er, 1, 5, 3, SeedRole::graph));

  SuiteConfig full;
  CHECK_NOTHROW(check_seed_collisions(full));
  std::set<std::uint64_t> seen;
  for (const InstanceKey& k : plan_suite(full)) {
    CHECK(seen.insert(derive_seed(1, k.model, k.graph_index, k.n, k.p, SeedRole::swarm)).second);
    CHECK(seen.insert(derive_seed(1, k.model, k.graph_index, k.n, k.p, SeedRole::baseline)).second);
  }
}

TEST_CASE("suite config validation") {
  SuiteConfig cfg;
  CHECK(cfg.validate().empty());
  cfg.node_lo = 2;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg = {};
  cfg.node_hi = 18;
  CHECK_THROWS(cfg.validate());
  cfg.allow_large = true;
  CHECK(!cfg.validate().empty());
  cfg.node_hi = 25;
  CHECK_THROWS_AS(cfg.validate(), CapacityError);
  cfg = {};
  cfg.depths = {4};
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg = {};
  cfg.models.clear();
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg = {};
  cfg.instances_per_size = 0;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
}

TEST_CASE("random_baseline") {
  const Graph g = generate_er(6, 0.5, 3);
  const int max_cut = max_cut_bruteforce(g).value;
  const double zeros[] = {0.0, 0.0, 0.0, 0.0};
  const RandomBaseline at_zero = evaluate_baseline(g, zeros, max_cut);
  CHECK(at_zero.cut == doctest::Approx(g.edge_count() / 2.0).epsilon(1e-12));
  CHECK(at_zero.ar == doctest::Approx(g.edge_count() / 2.0 / max_cut).epsilon(1e-12));

  const Graph edge(2, {{0, 1}});
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const RandomBaseline b = random_baseline(edge, 1, seed);
    CHECK(b.params.size() == 2);
    CHECK(b.ar >= 0.0);
    CHECK(b.ar <= 1.0 + 1e-12);
  }
  const RandomBaseline a = random_baseline(g, 3, 42), b = random_baseline(g, 3, 42);
  CHECK(a.params == b.params);
  CHECK(a.cut == b.cut);
  CHECK(a.ar == b.ar);
  CHECK(a.params.size() == 6);
  CHECK(a.cut == qaoa_expectation(g, QaoaParams::from_vector(a.params)));

  CHECK_THROWS_AS(random_baseline(Graph(4, {}), 1, 1), ArgumentError);
}

TEST_CASE("improvement") {
  CHECK(improvement(0.9, 0.6) == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(improvement(0.7, 0.7) == 0.0);
  CHECK(improvement(0.5, 1.0) == doctest::Approx(-50.0).epsilon(1e-12));
  CHECK_THROWS_AS(improvement(0.5, 0.0), UndefinedError);
}

TEST_CASE("instance_graph resamples only edgeless draws") {
  SuiteConfig cfg;
  cfg.er_edge_prob = 0.05;
  int resampled = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto [g, used] = instance_graph(GraphModel::er, 3, seed, cfg);
    CHECK(g.edge_count() >= 1);
    CHECK(g == generate_er(3, cfg.er_edge_prob, used));
    if (used != seed) {
      ++resampled;
      CHECK(generate_er(3, cfg.er_edge_prob, seed).edge_count() == 0);
    }
  }
  CHECK(resampled > 0);
}

TEST_CASE("run_instance") {
  SuiteConfig cfg = small_suite();
  const ExperimentRecord a = run_instance(GraphModel::er, 1, 3, 1, cfg);
  const ExperimentRecord b = run_instance(GraphModel::er, 1, 3, 1, cfg);
  const ExperimentRecord both[] = {a, b};
  std::ostringstream ra, rb;
  write_results_row(ra, a);
  write_results_row(rb, b);
  CHECK(ra.str() == rb.str());
  CHECK(a.opt_params == b.opt_params);
  CHECK(a.rand_params == b.rand_params);
  (void)both;

  CHECK(a.flag.empty());
  REQUIRE(a.improvement_pct);
  CHECK(std::abs(*a.improvement_pct - improvement(a.opt_ar, a.rand_ar)) < 1e-9);
  CHECK(a.classical_cut <= a.max_cut);
  CHECK(a.opt_cut <= a.max_cut + 1e-9);
  CHECK(a.rand_cut <= a.max_cut + 1e-9);
  CHECK(a.opt_ar == doctest::Approx(a.opt_cut / a.max_cut));
  CHECK(a.graph_seed == derive_seed(cfg.base_seed, GraphModel::er, 1, 3, 1, SeedRole::graph));
  CHECK(a.swarm_seed == derive_seed(cfg.base_seed, GraphModel::er, 1, 3, 1, SeedRole::swarm));

  for (int index = 1; index <= 5; ++index) {
    const ExperimentRecord ws = run_instance(GraphModel::ws, index, 3, 1, cfg);
    CHECK(ws.edges.size() == 3);
    CHECK(ws.max_cut == 2);
  }

  // Every depth of one instance is run on the same graph.
  const ExperimentRecord deeper = run_instance(GraphModel::er, 1, 3, 2, cfg);
  CHECK(deeper.edges == a.edges);
  CHECK(deeper.opt_params.size() == 4);
}

TEST_CASE("plan_suite") {
  SuiteConfig full;
  CHECK(plan_suite(full).size() == 420);

  SuiteConfig er;
  er.models = {GraphModel::er};
  er.node_lo = 3;
  er.node_hi = 4;
  er.depths = {1};
  er.instances_per_size = 2;
  const auto keys = plan_suite(er);
  REQUIRE(keys.size() == 4);
  CHECK(keys[0].graph_index == 1);
  CHECK(keys[0].n == 3);
  CHECK(keys[1].n == 4);
  CHECK(keys[2].graph_index == 2);
}

TEST_CASE("run_suite") {
  SuiteConfig cfg = small_suite();
  std::vector<ExperimentRecord> streamed;
  const auto records = run_suite(cfg, [&](const ExperimentRecord& r) { streamed.push_back(r); });
  REQUIRE(records.size() == 16);
  CHECK(to_csv(streamed) == to_csv(records));

  const auto keys = plan_suite(cfg);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].model == keys[i].model);
    CHECK(records[i].graph_index == keys[i].graph_index);
    CHECK(records[i].n == keys[i].n);
    CHECK(records[i].p == keys[i].p);
    CHECK(records[i].flag.empty());
    CHECK(records[i].rand_ar >= 0.0);
    CHECK(records[i].opt_ar <= 1.0 + 1e-12);
  }

  CHECK(to_csv(run_suite(cfg)) == to_csv(records));
  cfg.jobs = 3;
  CHECK(to_csv(run_suite(cfg)) == to_csv(records));
  CHECK(sidecar_json(cfg, records).find("\"opt_params\"") != std::string::npos);
}

TEST_CASE("results CSV round trip") {
  SuiteConfig cfg = small_suite();
  cfg.models = {GraphModel::ws};
  cfg.depths = {1};
  auto records = run_suite(cfg);
  records[0].improvement_pct.reset();
  records[0].flag = "undefined_improvement";
  const std::string csv = to_csv(records);
  CHECK(csv.substr(0, csv.find('\n')) == kResultsCsvHeader);

  std::istringstream in(csv);
  const auto parsed = read_results_csv(in);
  REQUIRE(parsed.size() == records.size());
  CHECK(to_csv(parsed) == csv);
  CHECK(!parsed[0].improvement_pct);
  CHECK(parsed[0].flag == "undefined_improvement");
  CHECK(parsed[1].opt_ar == records[1].opt_ar);

  std::istringstream header_only(std::string(kResultsCsvHeader) + "\n");
  CHECK_THROWS_AS(read_results_csv(header_only), ParseError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_results_csv(empty), ParseError);
  std::istringstream missing("model,graph_index,n,p\nER,1,3,1\n");
  try {
    read_results_csv(missing);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("max_cut") != std::string::npos);
  }
  std::string garbled = csv;
  garbled.replace(garbled.find("WS,1"), 4, "XX,1");
  std::istringstream bad(garbled);
  CHECK_THROWS_AS(read_results_csv(bad), ParseError);
}

TEST_CASE("aggregate_report") {
  std::vector<ExperimentRecord> records;
  for (double pct : {10.0, 20.0, 30.0, 40.0, 50.0}) records.push_back(with_improvement(GraphModel::er, 3, 1, pct));
  records.push_back(with_improvement(GraphModel::er, 3, 1, std::nullopt, "undefined_improvement"));

  const Report single = aggregate_report(records);
  REQUIRE(single.cells.size() == 1);
  CHECK(single.nodes == std::vector<int>{3});
  CHECK(single.depths == std::vector<int>{1});
  const ReportCell* cell = single.find(GraphModel::er, 3, 1);
  REQUIRE(cell);
  REQUIRE(cell->mean_improvement);
  CHECK(*cell->mean_improvement == doctest::Approx(30.0));
  CHECK(cell->count == 5);
  CHECK(cell->excluded == 1);
  CHECK(single.find(GraphModel::ws, 3, 1) == nullptr);

  const std::string text = format_report_text(single);
  CHECK(text.find("Erdos Renyi") != std::string::npos);
  CHECK(text.find("30.0%") != std::string::npos);
  CHECK(text.find("Watts") == std::string::npos);
  const std::string csv = format_report_csv(single);
  CHECK(csv.substr(0, csv.find('\n')) == "model,node,p=1,excluded");
  CHECK(csv.find("ER,3,30,1") != std::string::npos);

  records.push_back(with_improvement(GraphModel::ws, 4, 2, -5.0));
  records.push_back(with_improvement(GraphModel::ws, 5, 1, 12.5));
  const Report two = aggregate_report(records);
  CHECK(two.models.size() == 2);
  CHECK(two.nodes == std::vector<int>{3, 4, 5});
  CHECK(two.depths == std::vector<int>{1, 2});
  CHECK(*two.find(GraphModel::ws, 4, 2)->mean_improvement == -5.0);
  const std::string two_text = format_report_text(two);
  CHECK(two_text.find("Watts") != std::string::npos);
  CHECK(two_text.find("-5.0%") != std::string::npos);
  CHECK(!format_cell_summary(two).empty());

  CHECK_THROWS_AS(aggregate_report(std::span<const ExperimentRecord>{}), ArgumentError);
}
