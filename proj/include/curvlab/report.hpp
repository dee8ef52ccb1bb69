#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "curvlab/check.hpp"
#include "curvlab/graph.hpp"

namespace curvlab {

/// One line of a report: an inequality `measured <= bound` (or an identity),
/// evaluated over `evaluated` instances.
struct CheckRecord {
  std::string id;
  std::string topic;
  std::vector<std::pair<std::string, double>> params;
  double measured = 0;
  double bound = 0;
  double slack = 0;
  std::int64_t evaluated = 0;
  std::int64_t violations = 0;
  bool pass = true;
  bool skipped = false;
  std::string error;
  std::vector<std::string> warnings;

  /// Copies verdict and extremal point from a CheckResult.
  static CheckRecord from(std::string id, std::string topic, const CheckResult& c,
                          std::vector<std::pair<std::string, double>> params = {});
};

/// One row of tidy plot data.
struct PlotRow {
  std::string check;
  double n = 0;
  double measured = 0;
  double bound = 0;
};

struct CurvatureSummary {
  bool nonneg = true;
  std::string min_kappa;  ///< exact rational
  std::optional<std::pair<Vertex, Vertex>> witness;
  std::string witness_kappa;
};

struct Report {
  std::size_t vertices = 0;
  std::int64_t edges = 0;
  std::int64_t d = 0;
  double C = 1;
  double A = 40;
  std::uint64_t seed = 0;
  std::optional<CurvatureSummary> curvature;
  std::vector<CheckRecord> checks;
  std::vector<PlotRow> plot;

  void describe(const Graph& g);
  bool pass() const;
  std::size_t failures() const;
};

enum class ReportFormat { Json, Csv };

ReportFormat parse_report_format(const std::string& s);

/// JSON Lines: a header object, one object per check, then a summary object.
void write_jsonl(std::ostream& os, const Report& r);
/// One row per check with the same column ids as the JSON check objects.
void write_csv(std::ostream& os, const Report& r);
void write_report(std::ostream& os, const Report& r, ReportFormat f);
/// check,n,measured,bound
void write_plot_csv(std::ostream& os, const Report& r);
/// Short human-readable summary, one line per check.
void write_summary(std::ostream& os, const Report& r);

const char* version();

}  // namespace curvlab
