#include <cmath>
#include <limits>
#include <sstream>

#include "curvlab/generators.hpp"
#include "curvlab/report.hpp"
#include "curvlab/verify.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace curvlab;
using nlohmann::json;

namespace {

VerifyConfig small_config() {
  VerifyConfig c;
  c.ns = {1, 2, 4, 8};
  c.samples = 100;
  c.cell_n = 4;
  c.iso_samples = 20;
  c.iso_radius = 2;
  c.iso_max_size = 5;
  c.conversion_radii = {1};
  return c;
}

std::vector<json> parse_lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(json::parse(line));
  return out;
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("json lines round trip") {
  Report r;
  r.describe(gen::cycle(10));
  r.seed = 3;
  CheckResult c;
  c.record(1.0, 2.0);
  c.record(1.5, 1.75);
  r.checks.push_back(CheckRecord::from("demo.one", "a demo", c, {{"n", 4}}));
  CheckRecord inf;
  inf.id = "demo.inf";
  inf.bound = std::numeric_limits<double>::infinity();
  inf.slack = -std::numeric_limits<double>::infinity();
  inf.error = "boom";
  r.checks.push_back(inf);

  std::ostringstream os;
  write_jsonl(os, r);
  const auto lines = parse_lines(os.str());
  REQUIRE(lines.size() == 4);
  CHECK(lines[0]["type"] == "header");
  CHECK(lines[0]["seed"] == 3);
  CHECK(lines[0]["version"] == version());
  CHECK(lines[0]["graph"]["n"] == 10);
  CHECK(lines[0]["graph"]["m"] == 10);
  CHECK(lines[0]["graph"]["d"] == 2);
  CHECK(lines[1]["id"] == "demo.one");
  CHECK(lines[1]["measured"] == 1.5);
  CHECK(lines[1]["bound"] == 1.75);
  CHECK(lines[1]["slack"] == 0.25);
  CHECK(lines[1]["evaluated"] == 2);
  CHECK(lines[1]["params"]["n"] == 4);
  CHECK(lines[1]["pass"] == true);
  CHECK(lines[2]["pass"] == false);
  CHECK(lines[2]["error"] == "boom");
  CHECK(lines[2]["bound"] == "inf");
  CHECK(lines[2]["slack"] == "-inf");
  CHECK(lines[3]["type"] == "summary");
  CHECK(lines[3]["failures"] == 1);
  CHECK(lines[3]["pass"] == false);
  CHECK(!r.pass());

  std::ostringstream csv;
  write_csv(csv, r);
  CHECK(csv.str().rfind("id,topic,params,measured,bound,pass,slack,evaluated,violations,skipped,error,warnings\n", 0) == 0);
  CHECK(count_lines(csv.str()) == 3);
  CHECK(parse_report_format("json") == ReportFormat::Json);
  CHECK(parse_report_format("csv") == ReportFormat::Csv);
  CHECK_THROWS_AS(parse_report_format("xml"), InvalidInput);
}

TEST_CASE("verify is deterministic and passes on a torus") {
  const auto g = gen::torus({6, 6});
  const auto cfg = small_config();
  const auto a = verify_all(g, cfg);
  const auto b = verify_all(g, cfg);
  std::ostringstream sa, sb;
  write_jsonl(sa, a);
  write_jsonl(sb, b);
  CHECK(sa.str() == sb.str());
  for (const auto& c : a.checks) {
    INFO(c.id << " " << c.error);
    CHECK(c.pass);
    CHECK(c.error.empty());
  }
  CHECK(a.pass());
  REQUIRE(a.curvature);
  CHECK(a.curvature->nonneg);

  auto other = cfg;
  other.seed = 8;
  std::ostringstream sc;
  write_jsonl(sc, verify_all(g, other));
  CHECK(sc.str() != sa.str());

  std::ostringstream plot;
  write_plot_csv(plot, a);
  CHECK(plot.str().rfind("check,n,measured,bound\n", 0) == 0);
  CHECK(count_lines(plot.str()) == a.plot.size() + 1);
}

TEST_CASE("negative curvature skips the gated checks") {
  const auto r = verify_all(gen::hexagonal_torus(4, 4), small_config());
  REQUIRE(r.curvature);
  CHECK(!r.curvature->nonneg);
  CHECK(r.curvature->witness);
  bool any_skipped = false;
  for (const auto& c : r.checks) any_skipped = any_skipped || c.skipped;
  CHECK(any_skipped);
  CHECK(r.pass());
  std::ostringstream os;
  write_summary(os, r);
  CHECK(os.str().find("SKIP") != std::string::npos);
  CHECK(os.str().find("witness edge") != std::string::npos);
}
