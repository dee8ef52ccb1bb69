#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "curvlab/bounds.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/generators.hpp"
#include "curvlab/graph_io.hpp"
#include "curvlab/isoperimetry.hpp"
#include "curvlab/poisson.hpp"
#include "curvlab/report.hpp"
#include "curvlab/separation.hpp"
#include "curvlab/verify.hpp"
#include "curvlab/walk.hpp"

using namespace curvlab;

namespace {

struct Options {
  std::uint64_t seed = 7;
  int workers = 0;
  std::size_t mem_cap = kDefaultMemCap;
  double A = 40;
  std::string format = "json";
  std::string out;
  std::string plot;
  std::vector<int> n;
  std::vector<int> m;
  int r = -1;
  std::int64_t samples = -1;
};

// exit codes
constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kBadInput = 2;
constexpr int kInternal = 3;

void set_workers(int requested) {
  int w = requested;
  if (w <= 0) {
    if (const char* env = std::getenv("CURVLAB_WORKERS")) {
      try {
        w = std::stoi(env);
      } catch (const std::exception&) {
        throw InvalidInput(std::string("CURVLAB_WORKERS is not an integer: ") + env);
      }
    }
  }
  if (w > 0) omp_set_num_threads(w);
}

// Report to --out with the summary on stdout, or the report alone on stdout.
int emit(const Report& r, const Options& o) {
  const auto fmt = parse_report_format(o.format);
  if (o.out.empty()) {
    write_report(std::cout, r, fmt);
    write_summary(std::cerr, r);
  } else {
    std::ofstream f(o.out);
    if (!f) throw InvalidInput("cannot write " + o.out);
    write_report(f, r, fmt);
    write_summary(std::cout, r);
  }
  if (!o.plot.empty()) {
    std::ofstream f(o.plot);
    if (!f) throw InvalidInput("cannot write " + o.plot);
    write_plot_csv(f, r);
  }
  return r.pass() ? kOk : kCheckFailed;
}

std::vector<int> steps_or(const std::vector<int>& given, std::vector<int> fallback) {
  return given.empty() ? fallback : given;
}

Report base_report(const Graph& g, const Options& o) {
  Report r;
  r.describe(g);
  r.seed = o.seed;
  r.A = o.A;
  return r;
}

void add_curvature(Report& r, const Graph& g) {
  const auto rep = curvature_report(g);
  CurvatureSummary cs;
  cs.nonneg = rep.nonneg;
  cs.min_kappa = to_string(rep.min_kappa);
  if (rep.witness) {
    cs.witness = std::make_pair(rep.witness->x, rep.witness->y);
    cs.witness_kappa = to_string(rep.witness->kappa);
  }
  r.curvature = cs;
}

Graph generate(const std::string& family, const std::vector<int>& dims, int k, int degree,
               std::uint64_t seed) {
  auto need = [&](std::size_t count) {
    if (dims.size() != count)
      throw InvalidInput("family '" + family + "' needs " + std::to_string(count) + " value(s) in --dims");
  };
  if (family == "cycle") {
    need(1);
    return gen::cycle(dims[0]);
  }
  if (family == "torus") {
    if (dims.empty()) throw InvalidInput("torus needs --dims");
    return gen::torus(dims);
  }
  if (family == "hypercube") return gen::hypercube(k);
  if (family == "complete") {
    need(1);
    return gen::complete(dims[0]);
  }
  if (family == "triangular") {
    need(2);
    return gen::triangular_torus(dims[0], dims[1]);
  }
  if (family == "hexagonal") {
    need(2);
    return gen::hexagonal_torus(dims[0], dims[1]);
  }
  if (family == "regular") {
    need(1);
    return gen::random_regular(dims[0], degree, seed);
  }
  throw InvalidInput("unknown family '" + family +
                     "' (cycle, torus, hypercube, complete, triangular, hexagonal, regular)");
}

std::vector<Vertex> parse_vertices(const std::string& s) {
  std::vector<Vertex> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(static_cast<Vertex>(std::stol(tok)));
    } catch (const std::exception&) {
      throw InvalidInput("bad vertex id '" + tok + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvlab: checks for graphs of nonnegative Ollivier-Ricci curvature"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--seed", o.seed, "seed for every stochastic check");
  app.add_option("--workers", o.workers, "thread count (default: CURVLAB_WORKERS or all cores)");
  app.add_option("--mem-cap", o.mem_cap, "memory cap in bytes for dense kernels");
  app.add_option("--A", o.A, "universal constant in the closed-form bounds");
  app.add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", o.out, "report file (default: standard output)");
  app.add_option("--emit-plot-data", o.plot, "tidy CSV of (check, n, measured, bound)");
  app.add_option("--n", o.n, "step counts")->delimiter(',');
  app.add_option("--m", o.m, "second step counts (functional inequality)")->delimiter(',');
  app.add_option("--r", o.r, "radius");
  app.add_option("--samples", o.samples, "Monte Carlo samples");
  app.fallthrough();

  std::string graph_path;

  auto* gen_cmd = app.add_subcommand("gen", "generate a graph file");
  std::string family;
  std::vector<int> dims;
  int cube_k = 3, reg_d = 3;
  gen_cmd->add_option("--family", family, "graph family")->required();
  gen_cmd->add_option("--dims", dims, "sizes, comma separated")->delimiter(',');
  gen_cmd->add_option("--k", cube_k, "hypercube dimension");
  gen_cmd->add_option("--degree", reg_d, "degree of a random regular graph");

  auto* curv_cmd = app.add_subcommand("curvature", "exact edge curvatures");
  curv_cmd->add_option("graph", graph_path)->required();
  bool all_edges = false;
  curv_cmd->add_flag("--edges", all_edges, "list every edge curvature on stdout");

  auto* walk_cmd = app.add_subcommand("walk", "walk statistics and heat-kernel checks");
  walk_cmd->add_option("graph", graph_path)->required();

  auto* cells_cmd = app.add_subcommand("cells", "Poisson cell decompositions");
  cells_cmd->add_option("graph", graph_path)->required();

  auto* iso_cmd = app.add_subcommand("iso", "isoperimetric inequality over sampled sets");
  iso_cmd->add_option("graph", graph_path)->required();
  Vertex root = 0;
  int max_size = 12;
  iso_cmd->add_option("--root", root, "center of the domain ball");
  iso_cmd->add_option("--max-size", max_size, "largest sampled set");

  auto* sep_cmd = app.add_subcommand("separation", "Laplacian separation solver and pipeline");
  sep_cmd->add_option("graph", graph_path)->required();
  std::string core_list;
  std::string mode_name = "program";
  sep_cmd->add_option("--core", core_list, "vertices of K, comma separated (default: ball(root, 1))");
  sep_cmd->add_option("--root", root, "center of K and of the domain ball");
  sep_cmd->add_option("--mode", mode_name, "solver")->check(CLI::IsMember({"program", "fixed-point"}));

  auto* bounds_cmd = app.add_subcommand("bounds", "closed-form bounds");
  std::string bounds_graph;
  double bd = 0, bc = 0;
  bounds_cmd->add_option("graph", bounds_graph, "take d and C from this graph");
  bounds_cmd->add_option("--d", bd, "max degree");
  bounds_cmd->add_option("--C", bc, "degree ratio");

  auto* verify_cmd = app.add_subcommand("verify", "run the full battery");
  verify_cmd->add_option("graph", graph_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    set_workers(o.workers);

    if (*gen_cmd) {
      const auto g = generate(family, dims, cube_k, reg_d, o.seed);
      if (o.out.empty()) write_graph(std::cout, g);
      else save_graph(o.out, g);
      return kOk;
    }

    if (*bounds_cmd) {
      BoundParams p;
      if (!bounds_graph.empty()) p = BoundParams::of(load_graph(bounds_graph), o.A);
      if (bd > 0) p.d = bd;
      if (bc > 0) p.C = bc;
      p.A = o.A;
      p.validate();
      Report r;
      r.d = static_cast<std::int64_t>(p.d);
      r.C = p.C;
      r.A = p.A;
      r.seed = o.seed;
      const auto ns = steps_or(o.n, {1, 2, 4, 8, 16, 32, 64});
      std::vector<double> grid(ns.begin(), ns.end());
      const auto curve = bootstrap_run(p, grid);
      for (std::size_t i = 0; i < ns.size(); ++i) {
        const double n = ns[i];
        CheckRecord c;
        c.id = "bounds.n" + std::to_string(ns[i]);
        c.topic = "closed-form";
        c.params = {{"n", n},
                    {"entropy", entropy_bound(n, p)},
                    {"displacement", displacement_bound(n, p)},
                    {"bootstrap", curve.bound[i]},
                    {"bootstrap_closed_form", curve.closed_form[i]}};
        c.measured = curve.bound[i];
        c.bound = curve.closed_form[i];
        c.slack = c.bound - c.measured;
        c.evaluated = 1;
        c.pass = curve.bound[i] <= curve.closed_form[i] * (1 + 1e-12);
        r.checks.push_back(c);
        r.plot.push_back({"bounds.entropy", n, 0, entropy_bound(n, p)});
        r.plot.push_back({"bounds.displacement", n, 0, displacement_bound(n, p)});
      }
      if (o.r >= 1) {
        CheckRecord c;
        c.id = "bounds.growth";
        c.topic = "closed-form";
        c.params = {{"r", static_cast<double>(o.r)}, {"growth", growth_bound(o.r, p)}};
        c.evaluated = 1;
        r.checks.push_back(c);
      }
      for (int m : o.m) {
        for (int n : ns) {
          CheckRecord c;
          c.id = "bounds.functional.n" + std::to_string(n) + ".m" + std::to_string(m);
          c.topic = "closed-form";
          c.params = {{"n", static_cast<double>(n)},
                      {"m", static_cast<double>(m)},
                      {"rhs_zero_entropy", functional_rhs(n, m, 0, 0, p)}};
          c.evaluated = 1;
          r.checks.push_back(c);
        }
      }
      CheckRecord chain;
      chain.id = "bounds.bootstrap_chain";
      chain.topic = "bootstrap";
      chain.params = {{"states", static_cast<double>(curve.states.size())}};
      chain.evaluated = static_cast<std::int64_t>(curve.states.size());
      chain.pass = curve.chain_ok;
      chain.warnings = curve.failures;
      r.checks.push_back(chain);
      return emit(r, o);
    }

    const auto g = load_graph(graph_path);

    if (*curv_cmd) {
      auto r = base_report(g, o);
      const auto rep = curvature_report(g);
      add_curvature(r, g);
      CheckRecord c;
      c.id = "curvature.decision";
      c.topic = "curvature";
      c.measured = to_double(rep.min_kappa);
      c.slack = c.measured;
      c.evaluated = static_cast<std::int64_t>(rep.edges.size());
      r.checks.push_back(c);
      if (all_edges)
        for (const auto& e : rep.edges)
          std::cout << e.x << ' ' << e.y << ' ' << to_string(e.kappa) << '\n';
      return emit(r, o);
    }

    if (*walk_cmd) {
      auto r = base_report(g, o);
      const auto ns = steps_or(o.n, {1, 2, 4, 8, 16, 32});
      const auto stats = walk_stats_grid(g, ns);
      const Hypothesis h{is_nonneg_curved(g).nonneg};
      r.checks.push_back(CheckRecord::from("walk.varopoulos_carne", "heat-kernel", vc_check(g, stats)));
      r.checks.push_back(
          CheckRecord::from("walk.displacement_entropy", "heat-kernel", vc_entropy_check(g, stats)));
      r.checks.push_back(CheckRecord::from("walk.return_probability", "heat-kernel",
                                           return_prob_check(g, stats, h)));
      r.checks.push_back(CheckRecord::from("walk.displacement_lipschitz", "heat-kernel",
                                           dn_lipschitz_check(g, stats, h)));
      const auto s = tv_decay_check(g, ns, o.mem_cap, h);
      r.checks.push_back(CheckRecord::from("tv.decay", "mixing", s.check, {{"exact", s.exact ? 1.0 : 0.0}}));
      for (std::size_t i = 0; i < stats.size(); ++i) {
        r.plot.push_back({"walk.entropy", static_cast<double>(stats[i].n), stats[i].mean_entropy, 0});
        r.plot.push_back(
            {"walk.second_moment", static_cast<double>(stats[i].n), stats[i].mean_second_moment, 0});
        if (i < s.tv_max.size())
          r.plot.push_back({"tv.decay", static_cast<double>(stats[i].n), s.tv_max[i],
                            std::sqrt(20.0 * g.max_degree() / (stats[i].n + 1.0))});
      }
      return emit(r, o);
    }

    if (*cells_cmd) {
      auto r = base_report(g, o);
      const auto ns = steps_or(o.n, {16});
      const std::int64_t samples = o.samples > 0 ? o.samples : 2000;
      for (int n : ns) {
        const auto k = kernel_matrix(g, n, o.mem_cap);
        const auto s = cell_entropy_sandwich(g, k, samples, o.seed);
        CheckRecord c;
        c.id = "cells.entropy_sandwich.n" + std::to_string(n);
        c.topic = "poisson-cells";
        c.params = {{"n", static_cast<double>(n)}, {"lower", s.lower}, {"upper", s.upper}, {"sigma", s.sigma}};
        c.measured = s.middle;
        c.bound = s.upper;
        c.slack = std::min(s.upper - s.middle, s.middle - s.lower);
        c.evaluated = samples;
        c.pass = s.pass;
        r.checks.push_back(c);
        const auto bi = cell_boundary_identity(g, k, samples, o.seed + 1);
        CheckRecord b;
        b.id = "cells.boundary_identity.n" + std::to_string(n);
        b.topic = "poisson-cells";
        b.params = {{"n", static_cast<double>(n)}, {"sigma", bi.estimate.sigma}};
        b.measured = bi.estimate.empirical;
        b.bound = bi.estimate.exact;
        b.slack = 4 * bi.estimate.sigma - std::abs(b.measured - b.bound);
        b.evaluated = samples;
        b.violations = bi.mtp_failures;
        b.pass = bi.estimate.pass && bi.mtp_failures == 0;
        r.checks.push_back(b);
      }
      return emit(r, o);
    }

    if (*iso_cmd) {
      auto r = base_report(g, o);
      const int radius = o.r >= 0 ? o.r : 4;
      const auto dom = iso_domain(g, ball(g, root, radius).vertices);
      Rng rng(o.seed, 0);
      std::vector<std::vector<Vertex>> sets{dom.lambda.vertices};
      const std::int64_t samples = o.samples > 0 ? o.samples : 1000;
      for (std::int64_t i = 0; i < samples; ++i) sets.push_back(sample_connected_subset(g, dom, max_size, rng));
      auto c = CheckRecord::from("iso.sweep", "isoperimetry", iso_sweep(g, dom, sets),
                                 {{"radius", static_cast<double>(radius)}, {"diameter", static_cast<double>(dom.diam)}});
      if (!is_nonneg_curved(g).nonneg) c.warnings.emplace_back(kHypothesisWarning);
      r.checks.push_back(c);
      return emit(r, o);
    }

    if (*sep_cmd) {
      auto r = base_report(g, o);
      const auto core = core_list.empty() ? ball(g, root, 1).vertices : parse_vertices(core_list);
      const int radius = o.r >= 0 ? o.r : diameter(g);
      auto lam = ball(g, root, radius).vertices;
      {
        std::vector<char> in(g.vertex_count(), 0);
        for (auto v : lam) in[v] = 1;
        for (auto v : core) {
          g.require_vertex(v);
          if (!in[v]) lam.push_back(v);
        }
      }
      const auto mode = mode_name == "program" ? SeparationMode::Program : SeparationMode::FixedPoint;
      const auto p = iso_pipeline(g, lam, core, mode);
      CheckRecord c;
      c.id = "separation.pipeline";
      c.topic = "separation";
      c.params = {{"lambda", p.separation.lambda},
                  {"flat_residual", p.separation.flat_residual},
                  {"outside_residual", p.separation.outside_residual},
                  {"descent_residual", p.separation.descent_residual},
                  {"pairing", p.pairing},
                  {"dirichlet", p.dirichlet},
                  {"small_bound", p.small_bound},
                  {"lambda_star", p.lambda_star},
                  {"psi_star", p.psi_star}};
      c.measured = p.psi_star;
      c.bound = to_double(p.inequality.lhs);
      c.slack = c.bound - c.measured;
      c.evaluated = 1;
      c.pass = p.pass;
      c.warnings = p.separation.warnings;
      r.checks.push_back(c);
      r.checks.push_back(CheckRecord::from("separation.chain_rule", "separation", p.chain_rule));
      r.checks.push_back(CheckRecord::from("separation.phi_conclusion", "separation", p.conclusion));
      for (std::size_t v = 0; v < g.vertex_count(); ++v)
        r.plot.push_back({"separation.f", static_cast<double>(v), p.separation.f.values[v], 0});
      return emit(r, o);
    }

    if (*verify_cmd) {
      VerifyConfig cfg;
      cfg.seed = o.seed;
      cfg.A = o.A;
      cfg.mem_cap = o.mem_cap;
      cfg.ns = o.n;
      if (o.samples > 0) cfg.samples = o.samples;
      if (o.r >= 0) cfg.iso_radius = o.r;
      return emit(verify_all(g, cfg), o);
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
