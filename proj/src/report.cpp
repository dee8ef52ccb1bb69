#include "curvlab/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace curvlab {

namespace {

using nlohmann::ordered_json;

// JSON has no infinities; keep them readable and stable
ordered_json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string params_text(const CheckRecord& c) {
  std::string s;
  for (const auto& [k, v] : c.params) {
    if (!s.empty()) s += ';';
    s += k + "=" + csv_number(v);
  }
  return s;
}

std::string joined(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& w : v) {
    if (!s.empty()) s += "; ";
    s += w;
  }
  return s;
}

}  // namespace

const char* version() { return CURVLAB_VERSION; }

CheckRecord CheckRecord::from(std::string id, std::string topic, const CheckResult& c,
                              std::vector<std::pair<std::string, double>> params) {
  CheckRecord r;
  r.id = std::move(id);
  r.topic = std::move(topic);
  r.params = std::move(params);
  r.measured = c.measured;
  r.bound = c.bound;
  r.slack = c.evaluated ? c.slack : 0.0;
  r.evaluated = c.evaluated;
  r.violations = c.violations;
  r.pass = c.pass;
  r.skipped = c.evaluated == 0;
  r.warnings = c.warnings;
  return r;
}

void Report::describe(const Graph& g) {
  vertices = g.vertex_count();
  edges = g.edge_total();
  d = g.max_degree();
  C = g.degree_ratio();
}

bool Report::pass() const { return failures() == 0; }

std::size_t Report::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks)
    if (!c.pass || !c.error.empty()) ++n;
  return n;
}

ReportFormat parse_report_format(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  throw InvalidInput("unknown report format '" + s + "' (expected json or csv)");
}

void write_jsonl(std::ostream& os, const Report& r) {
  ordered_json head;
  head["type"] = "header";
  head["version"] = version();
  head["seed"] = r.seed;
  head["A"] = number(r.A);
  head["graph"] = {{"format", "curvlab-graph v1"},
                   {"n", r.vertices},
                   {"m", r.edges},
                   {"d", r.d},
                   {"C", number(r.C)}};
  if (r.curvature) {
    ordered_json cj{{"nonneg", r.curvature->nonneg}, {"min_kappa", r.curvature->min_kappa}};
    if (r.curvature->witness)
      cj["witness"] = {{"x", r.curvature->witness->first},
                       {"y", r.curvature->witness->second},
                       {"kappa", r.curvature->witness_kappa}};
    head["curvature"] = cj;
  }
  os << head.dump() << '\n' << std::flush;

  for (const auto& c : r.checks) {
    ordered_json j;
    j["type"] = "check";
    j["id"] = c.id;
    j["topic"] = c.topic;
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : c.params) params[k] = number(v);
    j["params"] = params;
    j["measured"] = number(c.measured);
    j["bound"] = number(c.bound);
    j["pass"] = c.pass && c.error.empty();
    j["slack"] = number(c.slack);
    j["evaluated"] = c.evaluated;
    j["violations"] = c.violations;
    if (c.skipped) j["skipped"] = true;
    if (!c.error.empty()) j["error"] = c.error;
    if (!c.warnings.empty()) j["warnings"] = c.warnings;
    os << j.dump() << '\n' << std::flush;
  }

  ordered_json tail;
  tail["type"] = "summary";
  tail["checks"] = r.checks.size();
  tail["failures"] = r.failures();
  tail["pass"] = r.pass();
  os << tail.dump() << '\n' << std::flush;
}

void write_csv(std::ostream& os, const Report& r) {
  os << "id,topic,params,measured,bound,pass,slack,evaluated,violations,skipped,error,warnings\n";
  for (const auto& c : r.checks) {
    os << csv_field(c.id) << ',' << csv_field(c.topic) << ',' << csv_field(params_text(c)) << ','
       << csv_number(c.measured) << ',' << csv_number(c.bound) << ','
       << ((c.pass && c.error.empty()) ? "true" : "false") << ',' << csv_number(c.slack) << ','
       << c.evaluated << ',' << c.violations << ',' << (c.skipped ? "true" : "false") << ','
       << csv_field(c.error) << ',' << csv_field(joined(c.warnings)) << '\n';
  }
}

void write_report(std::ostream& os, const Report& r, ReportFormat f) {
  if (f == ReportFormat::Json) write_jsonl(os, r);
  else write_csv(os, r);
}

void write_plot_csv(std::ostream& os, const Report& r) {
  os << "check,n,measured,bound\n";
  for (const auto& p : r.plot)
    os << csv_field(p.check) << ',' << csv_number(p.n) << ',' << csv_number(p.measured) << ','
       << csv_number(p.bound) << '\n';
}

void write_summary(std::ostream& os, const Report& r) {
  if (r.vertices > 0)
    os << "graph: " << r.vertices << " vertices, " << r.edges << " edges, d = " << r.d << ", C = " << r.C << '\n';
  else
    os << "d = " << r.d << ", C = " << r.C << '\n';
  if (r.curvature) {
    os << "curvature: min kappa = " << r.curvature->min_kappa
       << (r.curvature->nonneg ? " (nonnegative)" : " (negative)");
    if (r.curvature->witness)
      os << ", witness edge (" << r.curvature->witness->first << ", " << r.curvature->witness->second
         << ")";
    os << '\n';
  }
  for (const auto& c : r.checks) {
    const char* tag = !c.error.empty() ? "ERROR" : !c.pass ? "FAIL" : c.skipped ? "SKIP" : "ok";
    os << "  " << std::left << std::setw(6) << tag << c.id;
    if (!c.error.empty()) os << ": " << c.error;
    else if (!c.skipped) os << "  (" << c.evaluated << " evaluated, worst " << c.measured << " vs " << c.bound << ")";
    os << '\n';
    for (const auto& w : c.warnings) os << "         warning: " << w << '\n';
  }
  os << (r.pass() ? "all checks passed" : std::to_string(r.failures()) + " check(s) failed") << '\n';
}

}  // namespace curvlab
