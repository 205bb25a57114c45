#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "qaoa_fipso/error.hpp"
#include "qaoa_fipso/experiment.hpp"
#include "text_format.hpp"

namespace qaoa_fipso {

namespace {

std::string model_title(GraphModel m) {
  return m == GraphModel::er ? "Erdos Renyi Graphs" : "Watts Strogatz Graphs";
}

std::string percent(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", *v);
  return buf;
}

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

const ReportCell* Report::find(GraphModel model, int n, int p) const {
  for (const ReportCell& c : cells) {
    if (c.model == model && c.n == n && c.p == p) return &c;
  }
  return nullptr;
}

Report aggregate_report(std::span<const ExperimentRecord> records) {
  if (records.empty()) throw ArgumentError("cannot aggregate an empty record set");
  struct Acc {
    double sum = 0.0;
    int count = 0;
    int excluded = 0;
  };
  std::map<std::tuple<GraphModel, int, int>, Acc> acc;
  Report report;
  for (const ExperimentRecord& r : records) {
    Acc& a = acc[{r.model, r.n, r.p}];
    if (r.flag.empty() && r.improvement_pct) {
      a.sum += *r.improvement_pct;
      ++a.count;
    } else {
      ++a.excluded;
    }
    report.models.push_back(r.model);
    report.nodes.push_back(r.n);
    report.depths.push_back(r.p);
  }
  sort_unique(report.models);
  sort_unique(report.nodes);
  sort_unique(report.depths);
  for (const auto& [key, a] : acc) {
    ReportCell cell{std::get<0>(key), std::get<1>(key), std::get<2>(key), std::nullopt, a.count, a.excluded};
    if (a.count > 0) cell.mean_improvement = a.sum / a.count;
    report.cells.push_back(cell);
  }
  return report;
}

std::string format_report_text(const Report& report) {
  std::ostringstream out;
  bool first = true;
  for (GraphModel m : report.models) {
    if (!first) out << '\n';
    first = false;
    out << "Algorithm: Adam-FIPSO\n" << model_title(m) << " (mean improvement %)\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-9s", "Node");
    out << buf;
    for (int p : report.depths) {
      std::snprintf(buf, sizeof buf, "%10s", ("p=" + std::to_string(p)).c_str());
      out << buf;
    }
    out << "  excluded\n";
    for (int n : report.nodes) {
      bool any = false;
      int excluded = 0;
      std::string row;
      for (int p : report.depths) {
        const ReportCell* c = report.find(m, n, p);
        std::snprintf(buf, sizeof buf, "%10s", c ? percent(c->mean_improvement).c_str() : "-");
        row += buf;
        if (c) {
          any = true;
          excluded += c->excluded;
        }
      }
      if (!any) continue;
      std::snprintf(buf, sizeof buf, "%-9s", ("Node " + std::to_string(n)).c_str());
      out << buf << row;
      std::snprintf(buf, sizeof buf, "%10d\n", excluded);
      out << buf;
    }
  }
  return out.str();
}

std::string format_report_csv(const Report& report) {
  std::ostringstream out;
  out << "model,node";
  for (int p : report.depths) out << ",p=" << p;
  out << ",excluded\n";
  for (GraphModel m : report.models) {
    for (int n : report.nodes) {
      std::string row;
      bool any = false;
      int excluded = 0;
      for (int p : report.depths) {
        row += ',';
        if (const ReportCell* c = report.find(m, n, p)) {
          any = true;
          excluded += c->excluded;
          if (c->mean_improvement) row += detail::format_double(*c->mean_improvement);
        }
      }
      if (any) out << to_string(m) << ',' << n << row << ',' << excluded << '\n';
    }
  }
  return out.str();
}

std::string format_cell_summary(const Report& report) {
  std::ostringstream out;
  for (const ReportCell& c : report.cells) {
    out << to_string(c.model) << " n=" << c.n << " p=" << c.p
        << " mean_improvement=" << percent(c.mean_improvement) << " records=" << c.count;
    if (c.excluded > 0) out << " excluded=" << c.excluded;
    out << '\n';
  }
  return out.str();
}

}  // namespace qaoa_fipso
