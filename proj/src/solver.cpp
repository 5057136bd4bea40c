#include "cmcgraph/solver.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cmc {

void ContinuationConfig::validate() const {
  auto fail = [](const char* key, const char* why) {
    throw std::invalid_argument(std::string("continuation.") + key + ": " + why);
  };
  if (!std::isfinite(newton_tol)) fail("newton_tol", "must be finite");
  if (max_newton_iters < 1) fail("max_newton_iters", "must be >= 1");
  if (!(t_step_min > 0.0)) fail("t_step_min", "must be > 0");
  if (!(t_step_init >= t_step_min && t_step_init <= 1.0)) fail("t_step_init", "must satisfy t_step_min <= t_step_init <= 1");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) fail("backtrack_factor", "must lie in (0, 1)");
  if (max_backtracks < 0) fail("max_backtracks", "must be >= 0");
  if (!(spacelike_delta > 0.0 && spacelike_delta < 1.0)) fail("spacelike_delta", "must lie in (0, 1)");
}

double ContinuationConfig::tolerance_for(double H) const {
  return newton_tol > 0.0 ? newton_tol : 1e-10 * std::max(1.0, std::abs(H));
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Stalled: return "stalled";
    case SolveStatus::Diverged: return "diverged";
  }
  return "?";
}

namespace {

double max_gradient(const Grid& grid, const Field& field) {
  const auto g = gradients(grid, field);
  return 1.0 - spacelike_margin(g);
}

// Residual max-norm, or nullopt-like NaN when the field leaves the spacelike cone.
double residual_norm_or_nan(const Grid& grid, const Field& field, const McParams& params, double t) {
  try {
    return assemble(grid, field, params, t, false).residual.lpNorm<Eigen::Infinity>();
  } catch (const NotSpacelike&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

// Normwise backward error |J d - b| / (|J| |d| + |b|) in the max-norm.
double linear_backward_error(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& d,
                             const Eigen::VectorXd& b, const Eigen::VectorXd& res) {
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(J.rows());
  for (int k = 0; k < J.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(J, k); it; ++it) row_sums[it.row()] += std::abs(it.value());
  const double denom = row_sums.maxCoeff() * d.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>();
  return denom > 0.0 ? res.lpNorm<Eigen::Infinity>() / denom : 0.0;
}

}  // namespace

NewtonStepResult newton_step(const Grid& grid, const McParams& params, double t, const DiscreteSystem& system,
                             const Field& field, const ContinuationConfig& config) {
  NewtonStepResult out;
  out.field = field;
  const double r0 = system.residual.lpNorm<Eigen::Infinity>();
  out.residual_norm = r0;
  if (r0 == 0.0) {
    out.accepted = true;
    return out;
  }

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(system.jacobian);
  if (lu.info() != Eigen::Success) {
    out.failure = "singular linearization";
    return out;
  }
  const Eigen::VectorXd rhs = -system.residual;
  Eigen::VectorXd delta = lu.solve(rhs);
  // One round of iterative refinement, then require a small relative residual.
  Eigen::VectorXd lin_res = system.jacobian * delta - rhs;
  delta -= lu.solve(lin_res);
  lin_res = system.jacobian * delta - rhs;
  if (!delta.allFinite() || linear_backward_error(system.jacobian, delta, rhs, lin_res) > 1e-12) {
    out.failure = "singular linearization";
    return out;
  }
  out.step_norm = delta.lpNorm<Eigen::Infinity>();

  const bool lorentz = params.signature == Signature::Lorentzian;
  bool margin_rejected = false;
  double alpha = 1.0;
  for (int b = 0; b <= config.max_backtracks; ++b, alpha *= config.backtrack_factor) {
    Field trial = field;
    trial.values += alpha * delta;
    bool ok = true;
    if (lorentz && max_gradient(grid, trial) > 1.0 - config.spacelike_delta) {
      ok = false;
      margin_rejected = true;
    }
    if (ok) {
      const double r = residual_norm_or_nan(grid, trial, params, t);
      if (std::isfinite(r) && r < r0) {
        out.field = std::move(trial);
        out.residual_norm = r;
        out.damping = alpha;
        out.backtracks = b;
        out.accepted = true;
        return out;
      }
    }
  }
  out.backtracks = config.max_backtracks;
  out.failure = margin_rejected ? "spacelike collapse" : "no residual decrease";
  return out;
}

namespace {

struct NewtonRun {
  bool converged = false;
  bool blow_up = false;
  std::string failure;
  Field field;
  int iters = 0;
  double residual = 0.0;
};

NewtonRun run_newton(const Grid& grid, const McParams& params, double t, const Field& start,
                     const ContinuationConfig& config, double tol, SolveOutcome& log) {
  NewtonRun run;
  run.field = start;
  const bool lorentz = params.signature == Signature::Lorentzian;
  for (int it = 0;; ++it) {
    DiscreteSystem sys;
    try {
      sys = assemble(grid, run.field, params, t, true);
    } catch (const NotSpacelike&) {
      run.failure = "spacelike collapse";
      return run;
    }
    run.residual = sys.residual.lpNorm<Eigen::Infinity>();
    run.iters = it;
    if (run.residual <= tol) {
      run.converged = true;
      return run;
    }
    if (it == config.max_newton_iters) {
      run.failure = "newton iteration limit";
      return run;
    }
    NewtonStepResult step = newton_step(grid, params, t, sys, run.field, config);
    log.iterations.push_back(
        {t, it + 1, step.residual_norm, step.step_norm, step.damping, step.backtracks, step.accepted});
    if (!step.accepted) {
      run.failure = step.failure;
      return run;
    }
    run.field = std::move(step.field);
    const double du = max_gradient(grid, run.field);
    if (lorentz) log.min_accepted_margin = std::min(log.min_accepted_margin, 1.0 - du);
    if (!lorentz && du > 1.0 / grid.h) {
      run.blow_up = true;
      run.failure = "gradient blow-up";
      return run;
    }
  }
}

StepRecord record_for(const Grid& grid, const Field& field, Signature sig, double t, const NewtonRun& run) {
  const auto g = gradients(grid, field);
  const double margin = spacelike_margin(g);
  double min_lambda = 1.0;
  for (const auto& d : g) min_lambda = std::min(min_lambda, ellipticity_eigenvalues(d, sig).lambda);
  return {t, run.iters, run.residual, 1.0 - margin, margin, min_lambda};
}

}  // namespace

SolveOutcome solve_dirichlet(const Domain& domain, double H, Signature signature, const BoundaryData& boundary_data,
                             double h, const ContinuationConfig& config) {
  config.validate();
  if (!std::isfinite(H)) throw std::invalid_argument("solve_dirichlet: H must be finite");
  SolveOutcome out;
  out.grid = std::make_shared<const Grid>(build_grid(domain, h));
  out.H = H;
  out.signature = signature;
  const Grid& grid = *out.grid;
  const McParams params{H, signature};
  const double tol = config.tolerance_for(H);
  out.newton_tol = tol;

  // The boundary data extended by itself is the starting iterate; for zero
  // data this is u = 0, which solves the t = 0 problem exactly.
  Field field = sample_field(grid, boundary_data);
  NewtonRun run = run_newton(grid, params, 0.0, field, config, tol, out);
  if (!run.converged) {
    out.status = run.blow_up || run.failure == "spacelike collapse" ? SolveStatus::Diverged : SolveStatus::Stalled;
    out.reason = run.failure;
    out.field = std::move(field);
    out.final_residual = run.residual;
    return out;
  }
  field = run.field;
  out.diagnostics.push_back(record_for(grid, field, signature, 0.0, run));

  double t = 0.0;
  double dt = config.t_step_init;
  std::string last_failure;
  while (t < 1.0) {
    double t_try = t + dt;
    if (t_try > 1.0 - 1e-12) t_try = 1.0;  // absorb rounding drift of repeated increments
    run = run_newton(grid, params, t_try, field, config, tol, out);
    if (run.converged) {
      t = t_try;
      field = run.field;
      out.final_residual = run.residual;
      out.diagnostics.push_back(record_for(grid, field, signature, t, run));
      dt = std::min(config.t_step_init, 2.0 * dt);
      continue;
    }
    if (run.blow_up) {
      out.status = SolveStatus::Diverged;
      out.reason = "gradient blow-up";
      out.t_reached = t;
      out.field = std::move(field);
      return out;
    }
    last_failure = run.failure;
    dt *= 0.5;
    if (dt < config.t_step_min) {
      const bool collapse = signature == Signature::Lorentzian && last_failure == "spacelike collapse";
      out.status = collapse ? SolveStatus::Diverged : SolveStatus::Stalled;
      out.reason = collapse ? "spacelike collapse" : last_failure;
      out.t_reached = t;
      out.field = std::move(field);
      return out;
    }
  }
  out.status = SolveStatus::Converged;
  out.t_reached = 1.0;
  out.field = std::move(field);
  return out;
}

SolveOutcome solve_dirichlet(const Domain& domain, double H, Signature signature, double h,
                             const ContinuationConfig& config) {
  return solve_dirichlet(domain, H, signature, zero_boundary, h, config);
}

// ------------------------------------------------------------ predicates --

bool SolvabilityReport::predicts_nonexistence(Signature sig) const {
  return sig == Signature::Euclidean && H != 0.0 && (!necessary_ok || disk_obstruction);
}

bool SolvabilityReport::predicts_existence(Signature sig) const {
  if (sig == Signature::Lorentzian) return lorentz_convex_ok || lorentz_smooth_ok;
  return t5_ok;
}

SolvabilityReport solvability_predicates(const Domain& domain, double H, Signature signature) {
  (void)signature;  // every flag is reported; the signature selects which ones apply
  SolvabilityReport r;
  r.H = H;
  const double aH = std::abs(H);
  const CurvatureRange kr = curvature_range(domain);
  r.kappa_min = kr.kappa_min;
  r.kappa_max = kr.kappa_max;
  r.has_corners = kr.has_corners;
  const auto [area, perimeter] = area_perimeter(domain);
  r.area = area;
  r.perimeter = perimeter;
  r.diameter = diameter(domain);
  const StripStats strip = strip_stats(domain);
  r.strip_width = strip.min_width;
  r.max_min_width = strip.max_min_width_over_directions;
  const ExteriorCircle ext = exterior_circle_radius(domain);
  r.exterior_radius = ext.radius;
  r.convex = is_convex(domain);
  r.inradius_estimate = inradius(domain);

  // Curvature hypotheses are stated for smooth boundaries; corners fail them.
  auto at_least = [](double kappa, double bound) { return kappa >= bound * (1.0 - 1e-9) - 1e-12; };
  r.serrin_ok = !kr.has_corners && at_least(kr.kappa_min, 2.0 * aH);
  r.t5_ok = !kr.has_corners && at_least(kr.kappa_min, aH);
  r.necessary_ok = aH < perimeter / (2.0 * area);
  r.disk_obstruction = aH > 0.0 && r.inradius_estimate > 1.0 / aH;
  r.lorentz_convex_ok = r.convex;
  r.lorentz_smooth_ok = ext.ok && !kr.has_corners;
  r.strip_ok = r.convex && (aH == 0.0 || r.max_min_width < 1.0 / aH);
  return r;
}

}  // namespace cmc
