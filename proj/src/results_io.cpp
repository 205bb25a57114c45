#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qaoa_fipso/error.hpp"
#include "qaoa_fipso/experiment.hpp"
#include "text_format.hpp"

namespace qaoa_fipso {

namespace {

using detail::format_double;

std::string sanitize_flag(std::string flag) {
  for (char& ch : flag) {
    if (ch == ',') ch = ';';
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return flag;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& text, std::string_view column, std::size_t line) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("column \"" + std::string(column) + "\": cannot parse \"" + text + "\"", line);
  }
  return value;
}

}  // namespace

void write_results_header(std::ostream& out) { out << kResultsCsvHeader << '\n'; }

void write_results_row(std::ostream& out, const ExperimentRecord& r) {
  out << to_string(r.model) << ',' << r.graph_index << ',' << r.n << ',' << r.p << ',' << r.max_cut << ','
      << r.classical_cut << ',' << format_double(r.rand_cut) << ',' << format_double(r.rand_ar) << ','
      << format_double(r.opt_cut) << ',' << format_double(r.opt_ar) << ',' << format_double(r.opt_loss)
      << ',' << (r.improvement_pct ? format_double(*r.improvement_pct) : std::string()) << ','
      << r.graph_seed << ',' << r.baseline_seed << ',' << r.swarm_seed << ',' << sanitize_flag(r.flag)
      << '\n';
}

std::vector<ExperimentRecord> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("results CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split(line, ',');
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
  const auto expected = split(std::string(kResultsCsvHeader), ',');
  for (const std::string& name : expected) {
    if (!column.contains(name)) throw ParseError("results CSV is missing column \"" + name + "\"", 1);
  }
  const std::size_t flag_col = column.at("flag");

  std::vector<ExperimentRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, ',');
    // Tolerate stray commas inside a trailing flag column.
    if (flag_col == header.size() - 1 && fields.size() > header.size()) {
      for (std::size_t i = header.size(); i < fields.size(); ++i) fields[flag_col] += ';' + fields[i];
      fields.resize(header.size());
    }
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                       std::to_string(fields.size()),
                       line_no);
    }
    auto get = [&](const char* name) -> const std::string& { return fields[column.at(name)]; };
    auto as_int = [&](const char* name) { return parse_number<int>(get(name), name, line_no); };
    auto as_double = [&](const char* name) { return parse_number<double>(get(name), name, line_no); };
    auto as_u64 = [&](const char* name) { return parse_number<std::uint64_t>(get(name), name, line_no); };

    ExperimentRecord r;
    try {
      r.model = parse_graph_model(get("model"));
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), line_no);
    }
    r.graph_index = as_int("graph_index");
    r.n = as_int("n");
    r.p = as_int("p");
    r.max_cut = as_int("max_cut");
    r.classical_cut = as_int("classical_cut");
    r.rand_cut = as_double("rand_cut");
    r.rand_ar = as_double("rand_ar");
    r.opt_cut = as_double("opt_cut");
    r.opt_ar = as_double("opt_ar");
    r.opt_loss = as_double("opt_loss");
    if (!get("improvement_pct").empty()) r.improvement_pct = as_double("improvement_pct");
    r.graph_seed = as_u64("graph_seed");
    r.baseline_seed = as_u64("baseline_seed");
    r.swarm_seed = as_u64("swarm_seed");
    r.flag = get("flag");
    records.push_back(std::move(r));
  }
  if (records.empty()) throw ParseError("results CSV has a header but no data rows");
  return records;
}

std::string sidecar_json(const SuiteConfig& cfg, std::span<const ExperimentRecord> records) {
  using json = nlohmann::ordered_json;
  json suite;
  auto models = json::array();
  for (GraphModel m : cfg.models) models.push_back(std::string(to_string(m)));
  suite["models"] = models;
  suite["node_range"] = {cfg.node_lo, cfg.node_hi};
  suite["instances_per_size"] = cfg.instances_per_size;
  suite["depths"] = cfg.depths;
  suite["er_edge_prob"] = cfg.er_edge_prob;
  suite["ws_rewire_prob"] = cfg.ws_rewire_prob;
  suite["base_seed"] = cfg.base_seed;
  suite["swarm"] = json::parse(swarm_config_to_json(cfg.swarm));

  auto rows = json::array();
  for (const ExperimentRecord& r : records) {
    json row;
    row["model"] = std::string(to_string(r.model));
    row["graph_index"] = r.graph_index;
    row["n"] = r.n;
    row["p"] = r.p;
    auto edges = json::array();
    for (const Edge& e : r.edges) edges.push_back({e.u, e.v});
    row["edges"] = edges;
    row["max_cut"] = r.max_cut;
    row["classical_cut"] = r.classical_cut;
    row["rand_params"] = r.rand_params;
    row["rand_cut"] = r.rand_cut;
    row["rand_ar"] = r.rand_ar;
    row["opt_params"] = r.opt_params;
    row["opt_cut"] = r.opt_cut;
    row["opt_ar"] = r.opt_ar;
    row["opt_loss"] = r.opt_loss;
    row["improvement_pct"] = r.improvement_pct ? json(*r.improvement_pct) : json(nullptr);
    row["evaluations"] = r.evaluations;
    row["seeds"] = {{"graph", r.graph_seed}, {"baseline", r.baseline_seed}, {"swarm", r.swarm_seed}};
    row["mode"] = std::string(to_string(cfg.swarm.mode));
    row["flag"] = r.flag;
    rows.push_back(std::move(row));
  }
  json doc;
  doc["suite"] = std::move(suite);
  doc["records"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace qaoa_fipso
