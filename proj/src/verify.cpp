#include "curvlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "curvlab/bounds.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/isoperimetry.hpp"
#include "curvlab/poisson.hpp"
#include "curvlab/rng.hpp"
#include "curvlab/separation.hpp"
#include "curvlab/walk.hpp"

namespace curvlab {

namespace {

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) { return Rng(seed, stream)(); }

std::vector<int> default_ns(const VerifyConfig& c) {
  if (!c.ns.empty()) {
    auto ns = c.ns;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ns.front() < 1) throw InvalidInput("step counts must be at least 1");
    return ns;
  }
  return {1, 2, 4, 8, 16, 32, 64};
}

class Battery {
 public:
  explicit Battery(Report& r) : r_(r) {}

  // Runs `body`, which fills a record; exceptions become the record's error.
  void run(const std::string& id, const std::string& topic,
           const std::function<void(CheckRecord&)>& body) {
    CheckRecord rec;
    rec.id = id;
    rec.topic = topic;
    try {
      body(rec);
    } catch (const std::exception& e) {
      rec.pass = false;
      rec.error = e.what();
    }
    r_.checks.push_back(std::move(rec));
  }

  void skip(const std::string& id, const std::string& topic, const std::string& why) {
    CheckRecord rec;
    rec.id = id;
    rec.topic = topic;
    rec.skipped = true;
    rec.warnings.push_back(why);
    r_.checks.push_back(std::move(rec));
  }

  static void adopt(CheckRecord& rec, const CheckResult& c) {
    auto filled = CheckRecord::from(rec.id, rec.topic, c, std::move(rec.params));
    rec = std::move(filled);
  }

 private:
  Report& r_;
};

}  // namespace

Report verify_all(const Graph& g, const VerifyConfig& config) {
  Report r;
  r.describe(g);
  r.seed = config.seed;
  r.A = config.A;
  Battery b(r);

  if (!g.connected()) bfs_metric(g, 0);
  const auto params = BoundParams::of(g, config.A);
  const auto ns = default_ns(config);

  bool nonneg = false;
  b.run("curvature.decision", "curvature", [&](CheckRecord& rec) {
    const auto rep = curvature_report(g);
    CurvatureSummary cs;
    cs.nonneg = rep.nonneg;
    cs.min_kappa = to_string(rep.min_kappa);
    if (rep.witness) {
      cs.witness = std::make_pair(rep.witness->x, rep.witness->y);
      cs.witness_kappa = to_string(rep.witness->kappa);
    }
    r.curvature = cs;
    nonneg = rep.nonneg;
    rec.measured = to_double(rep.min_kappa);
    rec.bound = 0;
    rec.slack = rec.measured;
    rec.evaluated = static_cast<std::int64_t>(rep.edges.size());
    rec.pass = true;  // informational: the verdict gates the checks below
    if (!rep.nonneg) rec.warnings.emplace_back(kHypothesisWarning);
  });
  const Hypothesis hyp{nonneg};
  const std::string gated = std::string(kHypothesisWarning) + "; check skipped";

  std::vector<WalkStats> stats;
  b.run("walk.statistics", "walk", [&](CheckRecord& rec) {
    stats = walk_stats_grid(g, ns);
    double drift = 0;
    for (const auto& s : stats)
      for (double v : s.mass_drift) drift = std::max(drift, v);
    rec.measured = drift;
    rec.bound = 1e-9;
    rec.slack = rec.bound - drift;
    rec.evaluated = static_cast<std::int64_t>(stats.size() * g.vertex_count());
    rec.pass = drift <= 1e-9;
  });

  b.run("walk.varopoulos_carne", "heat-kernel", [&](CheckRecord& rec) {
    Battery::adopt(rec, vc_check(g, stats));
  });
  b.run("walk.displacement_entropy", "heat-kernel", [&](CheckRecord& rec) {
    Battery::adopt(rec, vc_entropy_check(g, stats));
  });

  if (!nonneg) {
    for (const char* id : {"tv.decay", "walk.return_probability", "walk.displacement_lipschitz",
                           "walk.concentration", "bounds.entropy", "bounds.displacement",
                           "bounds.growth", "bounds.functional", "bounds.bootstrap",
                           "cells.entropy_sandwich", "iso.sweep", "iso.pipeline",
                           "iso.solver_modes"})
      b.skip(id, "hypothesis", gated);
    for (int radius : config.conversion_radii)
      b.skip("growth.conversion.r" + std::to_string(radius), "hypothesis", gated);
    return r;
  }

  b.run("tv.decay", "mixing", [&](CheckRecord& rec) {
    const auto s = tv_decay_check(g, ns, config.mem_cap, hyp);
    Battery::adopt(rec, s.check);
    for (std::size_t i = 0; i < ns.size() && i < s.tv_max.size(); ++i)
      r.plot.push_back({"tv.decay", static_cast<double>(ns[i]), s.tv_max[i],
                        std::sqrt(20.0 * g.max_degree() / (ns[i] + 1.0))});
    rec.params.emplace_back("exact", s.exact ? 1 : 0);
  });
  b.run("walk.return_probability", "heat-kernel", [&](CheckRecord& rec) {
    Battery::adopt(rec, return_prob_check(g, stats, hyp));
  });
  b.run("walk.displacement_lipschitz", "heat-kernel", [&](CheckRecord& rec) {
    Battery::adopt(rec, dn_lipschitz_check(g, stats, hyp));
  });
  b.run("walk.concentration", "concentration", [&](CheckRecord& rec) {
    const int n = ns.back();
    const auto d0 = bfs_metric(g, 0);
    std::vector<double> f(d0.begin(), d0.end());
    const double lambdas[] = {0.5, 1, 1.5, 2, 3, 4};
    const auto res = concentration_check(g, 0, n, LipField::from_values(g, f), lambdas, hyp);
    rec.params.emplace_back("n", n);
    Battery::adopt(rec, res.check);
  });

  b.run("bounds.entropy", "entropy-growth", [&](CheckRecord& rec) {
    rec.params.emplace_back("A", config.A);
    CheckResult c;
    for (const auto& s : stats) {
      const double bound = entropy_bound(s.n, params);
      c.record(s.mean_entropy, bound);
      r.plot.push_back({"bounds.entropy", static_cast<double>(s.n), s.mean_entropy, bound});
    }
    Battery::adopt(rec, c);
  });
  b.run("bounds.displacement", "displacement", [&](CheckRecord& rec) {
    rec.params.emplace_back("A", config.A);
    CheckResult c;
    for (const auto& s : stats) {
      const double bound = displacement_bound(s.n, params);
      c.record(s.mean_second_moment, bound);
      r.plot.push_back({"bounds.displacement", static_cast<double>(s.n), s.mean_second_moment, bound});
    }
    Battery::adopt(rec, c);
  });
  b.run("bounds.growth", "volume-growth", [&](CheckRecord& rec) {
    rec.params.emplace_back("A", config.A);
    CheckResult c;
    for (const auto& s : stats) {
      double mean = 0;
      for (double v : s.log_ball) mean += v;
      mean /= static_cast<double>(g.vertex_count());
      const double bound = growth_bound(s.n, params);
      c.record(mean, bound);
      r.plot.push_back({"bounds.growth", static_cast<double>(s.n), mean, bound});
    }
    Battery::adopt(rec, c);
  });
  b.run("bounds.functional", "functional-inequality", [&](CheckRecord& rec) {
    rec.params.emplace_back("A", config.A);
    CheckResult c;
    for (const auto& sn : stats)
      for (const auto& sm : stats)
        c.record(sn.mean_entropy,
                 functional_rhs(sn.n, sm.n, sn.mean_entropy, sm.mean_entropy, params));
    Battery::adopt(rec, c);
  });
  b.run("bounds.bootstrap", "bootstrap", [&](CheckRecord& rec) {
    rec.params.emplace_back("A", config.A);
    std::vector<double> grid;
    for (const auto& s : stats) grid.push_back(s.n);
    const auto curve = bootstrap_run(params, grid);
    CheckResult c;
    for (std::size_t i = 0; i < stats.size(); ++i) {
      c.record(stats[i].mean_entropy, curve.bound[i]);
      r.plot.push_back({"bounds.bootstrap", grid[i], stats[i].mean_entropy, curve.bound[i]});
    }
    Battery::adopt(rec, c);
    rec.params.emplace_back("states", static_cast<double>(curve.states.size()));
    if (!curve.chain_ok || !curve.curve_ok) {
      rec.pass = false;
      rec.warnings.insert(rec.warnings.end(), curve.failures.begin(), curve.failures.end());
    }
  });

  b.run("cells.entropy_sandwich", "poisson-cells", [&](CheckRecord& rec) {
    rec.params.emplace_back("n", config.cell_n);
    rec.params.emplace_back("samples", static_cast<double>(config.samples));
    if (kernel_matrix_bytes(g) > config.mem_cap) {
      rec.skipped = true;
      rec.warnings.emplace_back("dense kernel exceeds the memory cap");
      return;
    }
    const auto s = cell_entropy_sandwich(g, config.cell_n, config.samples, sub_seed(config.seed, 1),
                                         config.mem_cap);
    rec.measured = s.middle;
    rec.bound = s.upper;
    rec.slack = std::min(s.upper - s.middle, s.middle - s.lower);
    rec.evaluated = config.samples;
    rec.pass = s.pass;
    rec.violations = s.pass ? 0 : 1;
    rec.params.emplace_back("lower", s.lower);
    rec.params.emplace_back("sigma", s.sigma);
  });

  const Vertex origin = 0;
  b.run("iso.sweep", "isoperimetry", [&](CheckRecord& rec) {
    const auto lam = ball(g, origin, config.iso_radius);
    const auto dom = iso_domain(g, lam.vertices);
    Rng rng(sub_seed(config.seed, 2), 0);
    std::vector<std::vector<Vertex>> sets;
    sets.push_back(dom.lambda.vertices);
    for (int i = 0; i < config.iso_samples; ++i)
      sets.push_back(sample_connected_subset(g, dom, config.iso_max_size, rng));
    rec.params.emplace_back("radius", config.iso_radius);
    Battery::adopt(rec, iso_sweep(g, dom, sets));
  });
  b.run("iso.pipeline", "separation", [&](CheckRecord& rec) {
    const auto lam = ball(g, origin, config.iso_radius);
    const auto w = ball(g, origin, 1);
    const auto p = iso_pipeline(g, lam.vertices, w.vertices, SeparationMode::Program, hyp);
    rec.params.emplace_back("lambda", p.separation.lambda);
    rec.params.emplace_back("lambda_star", p.lambda_star);
    rec.measured = p.psi_star;
    rec.bound = to_double(p.inequality.lhs);
    rec.slack = rec.bound - rec.measured;
    rec.evaluated = 1;
    rec.pass = p.pass;
    rec.violations = p.pass ? 0 : 1;
    auto flag = [&](bool ok, const char* what) {
      if (!ok) rec.warnings.emplace_back(std::string(what) + " failed");
    };
    flag(p.inequality.pass, "isoperimetric inequality");
    flag(p.separation.ok(), "separation residuals");
    flag(p.big_lambda, "large-lambda pairing");
    flag(p.small_lambda, "small-lambda Dirichlet bound");
    flag(p.phi_grid.pass, "phi grid");
    flag(p.chain_rule.pass, "chain rule");
    flag(p.conclusion.pass, "phi conclusion");
    flag(p.psi_ok, "psi minimization");
  });
  b.run("iso.solver_modes", "separation", [&](CheckRecord& rec) {
    const auto w = ball(g, origin, 1);
    const auto a = separation_solve(g, w.vertices, SeparationMode::Program, hyp);
    const auto fp = separation_solve(g, w.vertices, SeparationMode::FixedPoint, hyp);
    rec.measured = std::abs(a.lambda - fp.lambda);
    rec.bound = 1e-6;
    rec.slack = rec.bound - rec.measured;
    rec.evaluated = 1;
    rec.pass = rec.measured <= 1e-6 && a.ok() && fp.ok();
    rec.violations = rec.pass ? 0 : 1;
    rec.params.emplace_back("lambda", a.lambda);
    rec.params.emplace_back("iterations", static_cast<double>(fp.iterations));
  });

  for (int radius : config.conversion_radii) {
    const std::string id = "growth.conversion.r" + std::to_string(radius);
    if (g.vertex_count() > config.conversion_max_vertices) {
      b.skip(id, "volume-growth", "graph above the vertex limit for the dense n(r)-step kernel");
      continue;
    }
    b.run(id, "volume-growth", [&](CheckRecord& rec) {
      const auto gc = growth_conversion_check(g, radius, config.samples,
                                              sub_seed(config.seed, 100 + static_cast<std::uint64_t>(radius)),
                                              config.mem_cap);
      rec.params.emplace_back("r", radius);
      rec.params.emplace_back("n", static_cast<double>(gc.n));
      rec.measured = gc.avg_log_ball;
      rec.bound = gc.monte_carlo ? std::min(gc.entropy_bound, gc.cell_bound) : gc.entropy_bound;
      rec.slack = rec.bound - rec.measured;
      rec.evaluated = 1;
      rec.skipped = !gc.exact && radius > 0;
      rec.pass = gc.pass || rec.skipped;
      rec.warnings = gc.warnings;
      if (gc.monte_carlo) rec.params.emplace_back("sigma", gc.cell_sigma);
    });
  }
  return r;
}

}  // namespace curvlab
