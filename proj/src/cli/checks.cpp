#include "robin/cli/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "robin/error.hpp"
#include "robin/exact1d.hpp"
#include "robin/separable.hpp"

namespace robin::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ReportRow make_row(const std::string& check, std::optional<int> n, std::optional<int> i, std::optional<double> alpha,
                   double observed, double predicted) {
  ReportRow r;
  r.check = check;
  r.n = n;
  r.i = i;
  r.alpha = alpha;
  r.observed = observed;
  r.predicted = predicted;
  r.residual = observed - predicted;
  return r;
}

bool is_exact(const RunConfig& c) { return c.backend != Backend::fem; }

// ---- spectrum ----

std::vector<ReportRow> check_spectrum(Context& ctx) {
  std::vector<ReportRow> rows;
  const auto& dir = ctx.dirichlet_values();
  for (int n : ctx.config().clusters) {
    std::optional<double> previous;
    for (double alpha : ctx.config().alpha_grid) {
      const double robin = ctx.robin_values(alpha)[static_cast<std::size_t>(n) - 1];
      const double limit = dir[static_cast<std::size_t>(n) - 1];
      auto row = make_row("spectrum", n, 1, alpha, robin, limit);
      row.note = "lambda^alpha_n < lambda_n and increasing in alpha";
      if (!(robin < limit)) {
        row.status = Status::fail;
        row.note = "violated lambda^alpha_n < lambda_n: " + fmt(robin) + " >= " + fmt(limit);
      } else if (previous && !(robin > *previous)) {
        row.status = Status::fail;
        row.note = "violated monotonicity in alpha: " + fmt(robin) + " <= " + fmt(*previous) + " at the previous alpha";
      }
      previous = robin;
      rows.push_back(row);
    }
  }
  return rows;
}

// ---- torsion bounds ----

struct Sample {
  torsion::BoundReport rep;
  double identity_defect = 0.0;
  double T = 0.0;
  double energy = 0.0;
};

std::vector<ReportRow> check_torsion_bounds(Context& ctx) {
  constexpr std::size_t kSamples = 20;
  const auto& backend = ctx.torsion_backend();
  const double h = backend.mesh_size();
  const auto data = torsion::random_boundary_data(backend.boundary_size(), ctx.config().seed, kSamples);
  const std::string origin = "; worst of " + std::to_string(kSamples) + " samples (seed " +
                             std::to_string(ctx.config().seed) + ") is #";
  std::vector<ReportRow> rows;
  for (double alpha : ctx.config().alpha_grid) {
    std::vector<Sample> samples;
    for (const auto& f : data) {
      Sample s;
      s.rep = torsion::check_bounds(backend, alpha, f);
      const auto sol = torsion::torsion_solve(backend, alpha, f);
      s.identity_defect = sol.identity_defect();
      s.T = sol.T;
      s.energy = sol.grad_energy + sol.boundary_energy;
      samples.push_back(s);
    }
    // Each inequality: observed, predicted (the bound), signed slack (>= 0 when
    // satisfied), tolerance, description.
    struct Ineq {
      int id;
      const char* text;
      std::function<double(const Sample&)> observed;
      std::function<double(const Sample&)> bound;
      std::function<double(const Sample&)> slack;
      std::function<double(const Sample&)> tol;
    };
    const std::vector<Ineq> ineqs = {
        {1, "T = int|grad U|^2 + alpha int U^2 (relative 1e-9)", [](const Sample& s) { return s.T; },
         [](const Sample& s) { return s.energy; },
         [](const Sample& s) { return -s.identity_defect * std::max(std::abs(s.T), 1e-300); },
         [](const Sample& s) { return 1e-9 * std::max(std::abs(s.T), 1e-300); }},
        {2, "(int f)^2/|bd| <= alpha T", [](const Sample& s) { return s.rep.alphaT; },
         [](const Sample& s) { return s.rep.mean_lower; }, [](const Sample& s) { return s.rep.slack_mean_lower(); },
         [](const Sample& s) { return 1e-8 * std::max(1.0, s.rep.mean_lower); }},
        {3, "alpha T <= ||f||^2", [](const Sample& s) { return s.rep.alphaT; },
         [](const Sample& s) { return s.rep.f_norm2; }, [](const Sample& s) { return s.rep.slack_upper(); },
         [](const Sample& s) { return 1e-8 * std::max(1.0, s.rep.f_norm2); }},
        {4, "alpha ||f||^4/(||grad U_f||^2 + alpha ||f||^2) <= alpha T", [](const Sample& s) { return s.rep.alphaT; },
         [](const Sample& s) { return s.rep.extension_lower; },
         [](const Sample& s) { return s.rep.slack_extension_lower(); },
         [](const Sample& s) { return 1e-8 * std::max(1.0, s.rep.extension_lower); }},
        {5, "||alpha U - f||^2 <= 2 ||f|| ||grad U_f|| / sqrt(alpha)",
         [](const Sample& s) { return s.rep.trace_distance2; }, [](const Sample& s) { return s.rep.trace_bound; },
         [](const Sample& s) { return s.rep.slack_trace(); },
         [h](const Sample& s) { return (1e-8 + h) * std::max(1.0, s.rep.trace_bound); }},
    };
    for (const auto& q : ineqs) {
      std::size_t worst = 0;
      double worst_score = INFINITY;
      for (std::size_t k = 0; k < samples.size(); ++k) {
        const double score = q.slack(samples[k]) / q.tol(samples[k]);
        if (score < worst_score) {
          worst_score = score;
          worst = k;
        }
      }
      const auto& s = samples[worst];
      auto row = make_row("torsion_bounds", static_cast<int>(worst) + 1, q.id, alpha, q.observed(s), q.bound(s));
      const bool ok = q.slack(s) >= -q.tol(s);
      row.status = ok ? Status::pass : Status::fail;
      row.note = std::string(ok ? "" : "violated ") + q.text + origin + std::to_string(worst + 1);
      rows.push_back(row);
    }
    // Quantitative trace rate, when the harmonic flux is recoverable.
    std::size_t worst = 0;
    double worst_score = INFINITY;
    bool have_flux = true;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      if (!samples[k].rep.flux_rate_bound) {
        have_flux = false;
        break;
      }
      const double bound = *samples[k].rep.flux_rate_bound;
      const double score = (bound - std::sqrt(samples[k].rep.trace_distance2)) / std::max(bound, 1e-300);
      if (score < worst_score) {
        worst_score = score;
        worst = k;
      }
    }
    if (have_flux) {
      const auto& s = samples[worst];
      const double bound = *s.rep.flux_rate_bound;
      auto row = make_row("torsion_bounds", static_cast<int>(worst) + 1, 6, alpha, std::sqrt(s.rep.trace_distance2), bound);
      const bool ok = row.observed <= bound * (1.0 + 1e-8 + h);
      row.status = ok ? Status::pass : Status::fail;
      row.note = std::string(ok ? "" : "violated ") + "||alpha U - f|| <= ||d_nu U_f|| / alpha" + origin +
                 std::to_string(worst + 1);
      rows.push_back(row);
    }
  }
  return rows;
}

// ---- monotonicity ----

torsion::BoundaryField monotonicity_datum(Context& ctx) {
  if (ctx.config().backend == Backend::exact1d) return Eigen::Vector2d(1.0, -1.0);
  const auto sys = ctx.fem_system();
  return sys->trace(sys->interpolate([](double x, double) { return x; }));
}

std::vector<ReportRow> check_monotonicity(Context& ctx) {
  const auto& backend = ctx.torsion_backend();
  const auto f = monotonicity_datum(ctx);
  const std::string datum = ctx.config().backend == Backend::exact1d ? "f = (1, -1)" : "f = trace of x";
  std::vector<ReportRow> rows;
  std::optional<double> previous;
  for (double alpha : ctx.config().alpha_grid) {
    const auto m = torsion::monotonicity_check(backend, alpha, f, alpha / 100.0);
    const double aT = alpha * torsion::torsion_solve(backend, alpha, f).T;
    auto row = make_row("monotonicity", std::nullopt, 1, alpha, m.fd_derivative, m.grad_energy);
    const double rel = std::abs(row.residual) / std::max(std::abs(m.grad_energy), 1e-300);
    row.note = "d(alpha T)/d alpha (central difference, d alpha = alpha/100) vs int|grad U|^2, " + datum;
    if (!(rel <= 1e-2)) {
      row.status = Status::fail;
      row.note = "violated derivative identity: relative gap " + fmt(rel) + " > 1%, " + datum;
    } else if (previous && aT < *previous * (1.0 - 1e-12)) {
      row.status = Status::fail;
      row.note = "violated monotonicity of alpha T: " + fmt(aT) + " < " + fmt(*previous) + " at the previous alpha";
    }
    previous = aT;
    rows.push_back(row);
  }
  return rows;
}

// ---- expansion and rates ----

// Slope of |residual| per branch, on the config grid when it has at least 4
// attached alphas and otherwise (exact backends) on a 7-point geometric grid.
struct Slopes {
  std::vector<std::optional<asymptotics::RateFit>> fits;
  std::string note;
};

Slopes expansion_slopes(Context& ctx, int n) {
  const auto& grid = ctx.config().alpha_grid;
  const auto& data = ctx.cluster(n, grid);
  Slopes s;
  auto attached = [&](const ClusterData& d) {
    std::size_t count = 0;
    if (!d.cluster.attachment_threshold) return count;
    for (const auto& [a, v] : d.cluster.robin_by_alpha) count += a >= *d.cluster.attachment_threshold;
    return count;
  };
  if (attached(data) >= 4) {
    s.fits = asymptotics::predict_and_compare(data.cluster, data.gram).slopes;
    s.note = "slope fitted on the config grid";
    return s;
  }
  if (is_exact(ctx.config()) && grid.back() > grid.front()) {
    const auto dense = geometric_grid(grid.front(), grid.back(), 7);
    const auto& d2 = ctx.cluster(n, dense);
    if (attached(d2) >= 4) {
      s.fits = asymptotics::predict_and_compare(d2.cluster, d2.gram).slopes;
      s.note = "slope fitted on 7 geometric alphas in [" + fmt(grid.front()) + ", " + fmt(grid.back()) + "]";
      return s;
    }
  }
  s.fits.assign(static_cast<std::size_t>(data.cluster.m), std::nullopt);
  s.note = "fewer than 4 attached alphas: no slope";
  return s;
}

std::vector<ReportRow> check_expansion(Context& ctx) {
  std::vector<ReportRow> rows;
  const auto& grid = ctx.config().alpha_grid;
  for (int n : ctx.config().clusters) {
    const auto& data = ctx.cluster(n, grid);
    const auto& c = data.cluster;
    const auto slopes = expansion_slopes(ctx, n);
    for (int i = 1; i <= c.m; ++i) {
      std::optional<double> previous;
      for (double alpha : grid) {
        const double robin = c.robin_by_alpha.at(alpha)[static_cast<std::size_t>(i) - 1];
        auto row = make_row("expansion", n, i, alpha, c.lambda_n - robin, data.gram.mu[i - 1] / alpha);
        const auto& fit = slopes.fits[static_cast<std::size_t>(i) - 1];
        if (fit) row.slope = fit->slope;
        row.note = "lambda_n - lambda^alpha vs mu_i/alpha (m = " + std::to_string(c.m) + "); " + slopes.note;
        const bool attached = c.attachment_threshold && alpha >= *c.attachment_threshold;
        if (!(row.observed > 0.0)) {
          row.status = Status::fail;
          row.note = "violated lambda_n - lambda^alpha > 0: " + fmt(row.observed);
        } else if (previous && !(row.observed < *previous)) {
          row.status = Status::fail;
          row.note = "violated decreasing deficit: " + fmt(row.observed) + " >= " + fmt(*previous);
        } else if (!attached) {
          row.status = Status::warn;
          row.note = "Robin value not yet within gamma = " + fmt(c.gamma) + " of lambda_n";
        }
        previous = row.observed;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<ReportRow> check_rates(Context& ctx) {
  std::vector<ReportRow> rows;
  const bool exact = is_exact(ctx.config());
  const double target = exact ? -2.0 : -1.0;
  for (int n : ctx.config().clusters) {
    const auto slopes = expansion_slopes(ctx, n);
    for (std::size_t i = 0; i < slopes.fits.size(); ++i) {
      const auto& fit = slopes.fits[i];
      if (!fit) {
        auto row = make_row("rates", n, static_cast<int>(i) + 1, std::nullopt, 0.0, target);
        row.residual = 0.0;
        row.status = Status::warn;
        row.note = slopes.note;
        rows.push_back(row);
        continue;
      }
      auto row = make_row("rates", n, static_cast<int>(i) + 1, std::nullopt, fit->slope, target);
      row.slope = fit->slope;
      if (exact) {
        const bool ok = fit->slope <= -1.7;
        row.status = ok ? Status::pass : Status::fail;
        row.note = std::string(ok ? "" : "violated ") + "remainder slope <= -1.7 (second-order term); r2 = " +
                   fmt(fit->r2) + "; " + slopes.note;
      } else {
        const bool ok = fit->slope < -1.0;
        row.status = ok ? Status::pass : Status::warn;
        row.note = "remainder slope < -1 (o(1/alpha)); not asserted on meshes; r2 = " + fmt(fit->r2) + "; " + slopes.note;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

// ---- omega / rho ----

std::vector<ReportRow> check_omega_rho(Context& ctx) {
  std::vector<ReportRow> rows;
  const auto& grid = ctx.config().alpha_grid;
  const auto& backend = ctx.torsion_backend();
  const bool exact = ctx.config().backend == Backend::exact1d;
  for (int n : ctx.config().clusters) {
    const auto& data = ctx.cluster(n, grid);
    std::optional<double> prev_omega;
    std::optional<double> prev_rho;
    // a rise before the first decrease is pre-asymptotic (warn); a rise after it fails
    bool declining_omega = false;
    bool declining_rho = false;
    for (double alpha : grid) {
      const auto orr = asymptotics::omega_rho(data.fluxes, backend, alpha);
      const double aw = alpha * orr.omega;
      const double ar = alpha * orr.rho;
      for (int which = 1; which <= 2; ++which) {
        const double observed = which == 1 ? aw : ar;
        const char* name = which == 1 ? "alpha omega" : "alpha rho";
        auto& prev = which == 1 ? prev_omega : prev_rho;
        bool& declining = which == 1 ? declining_omega : declining_rho;
        ReportRow row;
        if (exact) {
          // phi_n = sqrt(2) sin(n pi x): odd n gives constant data, even n antisymmetric.
          const double c2 = 2.0 * n * n * kPi * kPi;
          double predicted = 0.0;
          if (n % 2 == 1) {
            predicted = which == 1 ? c2 / alpha : 0.0;
          } else {
            predicted = which == 1 ? c2 / (3.0 * (2.0 + alpha) * (2.0 + alpha)) * alpha : 4.0 * c2 / (alpha + 2.0);
          }
          row = make_row("omega_rho", n, which, alpha, observed, predicted);
          const bool ok = std::abs(row.residual) <= 1e-10 * std::max(1.0, std::abs(predicted));
          row.status = ok ? Status::pass : Status::fail;
          row.note = std::string(ok ? "" : "violated ") + name + " equals its closed form";
        } else {
          const double predicted = prev ? *prev : observed;
          row = make_row("omega_rho", n, which, alpha, observed, predicted);
          if (!prev) {
            row.note = std::string(name) + " at the first grid alpha (reference)";
          } else if (observed < *prev || observed == 0.0) {
            declining = true;
            row.note = std::string(name) + " decreasing along the alpha grid";
          } else if (!declining) {
            row.status = Status::warn;
            row.note = std::string(name) + " still rising (pre-asymptotic): " + fmt(observed) + " >= " + fmt(*prev);
          } else {
            row.status = Status::fail;
            row.note = std::string("violated ") + name + " decreasing: " + fmt(observed) + " >= " + fmt(*prev);
          }
        }
        prev = observed;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

// ---- eigenfunctions (fem) ----

std::vector<ReportRow> check_eigenfunctions(Context& ctx) {
  std::vector<ReportRow> rows;
  const auto& grid = ctx.config().alpha_grid;
  const auto& backend = dynamic_cast<const torsion::FemTorsion&>(ctx.torsion_backend());
  for (int n : ctx.config().clusters) {
    const auto& data = ctx.cluster(n, grid);
    std::vector<std::optional<double>> prev_r1(static_cast<std::size_t>(data.cluster.m));
    for (double alpha : grid) {
      const auto& pairs = ctx.fem_robin(alpha);
      std::vector<fem::DiscreteField> robin;
      for (int j = 0; j < data.cluster.m; ++j) robin.push_back(pairs[static_cast<std::size_t>(n + j - 1)].vector);
      std::vector<asymptotics::EigenfunctionResidual> res;
      try {
        res = asymptotics::eigenfunction_residuals(backend, data.basis, data.fluxes, robin, alpha);
      } catch (const AnalysisError& e) {
        auto row = make_row("eigenfunctions", n, std::nullopt, alpha, 0.0, 0.5);
        row.status = Status::fail;
        row.note = std::string("violated ") + e.what();
        rows.push_back(row);
        continue;
      }
      for (const auto& r : res) {
        const auto slot = static_cast<std::size_t>(r.i) - 1;
        auto a = make_row("eigenfunctions", n, r.i, alpha, alpha * r.r2, r.flux_norm2);
        const double rel_a = std::abs(a.residual) / r.flux_norm2;
        a.status = rel_a <= 0.1 ? Status::pass : Status::warn;
        a.note = "alpha ||phi - Pi phi/||Pi phi|| ||^2_H vs int (d_nu phi)^2, relative gap " + fmt(rel_a);
        rows.push_back(a);

        auto b = make_row("eigenfunctions", n, r.i, alpha, alpha * r.r1, prev_r1[slot] ? *prev_r1[slot] : alpha * r.r1);
        if (!prev_r1[slot]) {
          b.note = "alpha ||phi - Pi phi/||Pi phi|| - U^phi||_H at the first grid alpha (reference)";
        } else if (b.observed < *prev_r1[slot]) {
          b.note = "alpha ||phi - Pi phi/||Pi phi|| - U^phi||_H decreasing";
        } else {
          b.status = Status::warn;
          b.note = "alpha ||phi - Pi phi/||Pi phi|| - U^phi||_H not decreasing on this mesh";
        }
        prev_r1[slot] = b.observed;
        rows.push_back(b);

        auto c = make_row("eigenfunctions", n, r.i, alpha, alpha * alpha * r.boundary_mass, r.flux_norm2);
        const double rel_c = std::abs(c.residual) / r.flux_norm2;
        c.status = rel_c <= 0.1 ? Status::pass : Status::warn;
        c.note = "alpha^2 int_bd |phi^alpha|^2 vs int (d_nu phi)^2, relative gap " + fmt(rel_c);
        rows.push_back(c);
      }
    }
  }
  return rows;
}

// ---- splitting ----

std::vector<ReportRow> check_splitting(Context& ctx) {
  std::vector<ReportRow> rows;
  const auto& grid = ctx.config().alpha_grid;
  for (int n : ctx.config().clusters) {
    const auto& data = ctx.cluster(n, grid);
    const auto& c = data.cluster;
    if (c.m < 2) {
      auto row = make_row("splitting", n, std::nullopt, std::nullopt, 0.0, 0.0);
      row.status = Status::warn;
      row.note = "cluster is simple; nothing to split";
      rows.push_back(row);
      continue;
    }
    const double predicted = data.gram.mu[0] - data.gram.mu[c.m - 1];
    const bool equal_mu = predicted <= 1e-9 * data.gram.mu[0];
    std::optional<double> split_from;
    for (double alpha : grid) {
      const auto& v = c.robin_by_alpha.at(alpha);
      const double observed = alpha * (v.back() - v.front());
      auto row = make_row("splitting", n, c.m, alpha, observed, predicted);
      if (equal_mu) {
        // The first-order term does not separate the cluster.
        const bool exact_tie = observed <= 1e-9 * alpha * c.lambda_n;
        row.status = (exact_tie || !is_exact(ctx.config())) ? Status::pass : Status::fail;
        row.note = "equal mu: no first-order splitting";
      } else {
        const bool split = v.back() > v.front();
        if (split && !split_from) split_from = alpha;
        if (!split) split_from.reset();
        row.status = split ? Status::pass : Status::fail;
        row.note = std::string(split ? "" : "violated ") + "alpha (lambda^alpha_max - lambda^alpha_min) vs mu_1 - mu_m, relative gap " +
                   fmt(std::abs(row.residual) / predicted);
      }
      rows.push_back(row);
    }
    if (!equal_mu && split_from) rows.back().note += "; split on the grid from alpha = " + fmt(*split_from);
  }
  return rows;
}

}  // namespace

std::vector<double> geometric_grid(double lo, double hi, int points) {
  std::vector<double> g;
  for (int k = 0; k < points; ++k) g.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (points - 1)));
  g.front() = lo;
  g.back() = hi;
  return g;
}

// ---- context ----

Context::Context(RunConfig config) : config_(std::move(config)) {
  count_ = *std::max_element(config_.clusters.begin(), config_.clusters.end()) + 6;
}

std::shared_ptr<const fem::FemSystem> Context::fem_system() {
  return system_.get(0, [this] {
    if (config_.backend != Backend::fem) throw Error("fem system requested for a non-fem backend");
    return std::shared_ptr<const fem::FemSystem>(
        std::make_shared<fem::FemSystem>(fem::assemble(build_mesh(config_.domain, *config_.mesh_h))));
  });
}

const std::vector<fem::EigenPair>& Context::fem_dirichlet() {
  return fem_dirichlet_.get(0, [this] {
    const auto sys = fem_system();
    return fem::dirichlet_eigs(*sys, std::min<int>(count_, static_cast<int>(sys->interior_nodes.size())));
  });
}

const std::vector<fem::EigenPair>& Context::fem_robin(double alpha) {
  return fem_robin_.get(alpha, [this, alpha] {
    const auto sys = fem_system();
    return fem::robin_eigs(*sys, alpha, std::min<int>(count_, static_cast<int>(sys->node_count())));
  });
}

const torsion::TorsionBackend& Context::torsion_backend() {
  return *torsion_.get(0, [this]() -> std::shared_ptr<const torsion::TorsionBackend> {
    if (config_.backend == Backend::exact1d) return std::make_shared<torsion::IntervalTorsion>();
    if (config_.backend == Backend::fem) return std::make_shared<torsion::FemTorsion>(fem_system());
    throw Error("backend separable has no torsion solver");
  });
}

double Context::mult_tol() {
  if (config_.backend != Backend::fem) return 1e-9;
  const double h = fem_system()->mesh.h;
  return 10.0 * h * h;
}

const std::vector<double>& Context::dirichlet_values() {
  return dirichlet_.get(0, [this] {
    std::vector<double> out;
    if (config_.backend == Backend::exact1d) {
      for (int n = 1; n <= count_; ++n) out.push_back(exact1d::dirichlet_mode_1d(n).lambda);
    } else if (config_.backend == Backend::separable) {
      if (const auto* r = std::get_if<Rectangle>(&config_.domain)) {
        for (const auto& m : separable::rect_dirichlet_spectrum(r->l, r->L, count_)) out.push_back(m.lambda);
      } else {
        for (const auto& m : separable::disk_spectrum(std::get<Disk>(config_.domain).R, std::nullopt, count_)) {
          out.push_back(m.lambda);
        }
      }
    } else {
      for (const auto& p : fem_dirichlet()) out.push_back(p.lambda);
    }
    return out;
  });
}

const std::vector<double>& Context::robin_values(double alpha) {
  return robin_.get(alpha, [this, alpha] {
    std::vector<double> out;
    if (config_.backend == Backend::exact1d) {
      for (int n = 1; n <= count_; ++n) out.push_back(exact1d::robin_eigen_1d(n, alpha).lambda);
    } else if (config_.backend == Backend::separable) {
      if (const auto* r = std::get_if<Rectangle>(&config_.domain)) {
        for (const auto& m : separable::rect_robin_spectrum(r->l, r->L, alpha, count_)) out.push_back(m.lambda);
      } else {
        for (const auto& m : separable::disk_spectrum(std::get<Disk>(config_.domain).R, alpha, count_)) {
          out.push_back(m.lambda);
        }
      }
    } else {
      for (const auto& p : fem_robin(alpha)) out.push_back(p.lambda);
    }
    return out;
  });
}

const ClusterData& Context::cluster(int n, const std::vector<double>& alphas) {
  return clusters_.get({n, alphas}, [this, n, alphas] {
    std::map<double, std::vector<double>> robin;
    for (double a : alphas) robin.emplace(a, robin_values(a));
    ClusterData d;
    d.cluster = asymptotics::build_cluster(dirichlet_values(), robin, n, mult_tol());
    const int m = d.cluster.m;
    Eigen::MatrixXd gram(m, m);
    if (config_.backend == Backend::exact1d) {
      const auto mode = exact1d::dirichlet_mode_1d(n);
      d.fluxes.push_back(Eigen::Vector2d(mode.trace_derivative[0], mode.trace_derivative[1]));
      gram(0, 0) = d.fluxes[0].squaredNorm();
      d.gram = asymptotics::gram_diag(gram);
    } else if (config_.backend == Backend::separable) {
      if (const auto* r = std::get_if<Rectangle>(&config_.domain)) {
        const auto modes = separable::rect_dirichlet_spectrum(r->l, r->L, count_);
        for (int a = 0; a < m; ++a) {
          for (int b = 0; b < m; ++b) {
            gram(a, b) = separable::rect_boundary_gram(modes[static_cast<std::size_t>(n + a - 1)],
                                                       modes[static_cast<std::size_t>(n + b - 1)]);
          }
        }
      } else {
        const auto modes = separable::disk_spectrum(std::get<Disk>(config_.domain).R, std::nullopt, count_);
        gram.setZero();
        // cos/sin copies and distinct angular orders are boundary-orthogonal.
        for (int a = 0; a < m; ++a) gram(a, a) = separable::disk_boundary_flux_norm(modes[static_cast<std::size_t>(n + a - 1)]);
      }
      d.gram = asymptotics::gram_diag(gram);
    } else {
      const auto sys = fem_system();
      const auto& pairs = fem_dirichlet();
      std::vector<Eigen::VectorXd> basis;
      std::vector<Eigen::VectorXd> fluxes;
      for (int a = 0; a < m; ++a) {
        const auto& p = pairs[static_cast<std::size_t>(n + a - 1)];
        basis.push_back(p.vector);
        fluxes.push_back(fem::variational_flux(*sys, p.vector, p.lambda, fem::FluxMode::eigen));
      }
      d.gram = asymptotics::gram_diag(fluxes, [&](const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
        return fem::boundary_dot(*sys, f, g);
      });
      d.basis = asymptotics::rotate_basis(basis, d.gram.rotation);
      d.fluxes = asymptotics::rotate_basis(fluxes, d.gram.rotation);
    }
    return d;
  });
}

std::vector<ReportRow> run_check(const std::string& id, Context& ctx) {
  if (id == "spectrum") return check_spectrum(ctx);
  if (id == "torsion_bounds") return check_torsion_bounds(ctx);
  if (id == "monotonicity") return check_monotonicity(ctx);
  if (id == "expansion") return check_expansion(ctx);
  if (id == "eigenfunctions") return check_eigenfunctions(ctx);
  if (id == "omega_rho") return check_omega_rho(ctx);
  if (id == "splitting") return check_splitting(ctx);
  if (id == "rates") return check_rates(ctx);
  throw Error("unknown check '" + id + "'");
}

}  // namespace robin::cli
