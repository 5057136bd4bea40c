// Continuation in t for Q_t[u] = 0 (mean curvature t*H), damped Newton at
// each t, and the geometric solvability predicates.
#pragma once

#include "cmcgraph/discretization.hpp"
#include "cmcgraph/domain.hpp"
#include "cmcgraph/mc_operator.hpp"

#include <memory>
#include <string>
#include <vector>

namespace cmc {

struct ContinuationConfig {
  double newton_tol = 0.0;  // <= 0 selects 1e-10 * max(1, |H|)
  int max_newton_iters = 50;
  double t_step_init = 0.1;
  double t_step_min = 1e-4;
  double backtrack_factor = 0.5;
  int max_backtracks = 30;
  double spacelike_delta = 1e-3;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  double tolerance_for(double H) const;
};

enum class SolveStatus { Converged, Stalled, Diverged };

const char* to_string(SolveStatus s);

/// One record per converged t.
struct StepRecord {
  double t;
  int newton_iters;
  double residual_norm;
  double max_du;
  double spacelike_margin;
  double min_lambda;
};

/// One record per Newton iteration (attempted t values included).
struct IterationRecord {
  double t;
  int iter;
  double residual_norm;
  double step_norm;
  double damping;
  int backtracks;
  bool accepted;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Stalled;
  double t_reached = 0.0;  // last converged t
  std::string reason;      // empty when converged
  std::shared_ptr<const Grid> grid;
  Field field;             // at t_reached
  double H = 0.0;
  Signature signature = Signature::Euclidean;
  double newton_tol = 0.0;
  double final_residual = 0.0;
  double min_accepted_margin = 1.0;  // over accepted Lorentzian iterates
  std::vector<StepRecord> diagnostics;
  std::vector<IterationRecord> iterations;

  bool converged() const { return status == SolveStatus::Converged; }
};

struct NewtonStepResult {
  Field field;
  double step_norm = 0.0;      // max-norm of the full Newton correction
  double residual_norm = 0.0;  // after the accepted (damped) step
  double damping = 1.0;
  int backtracks = 0;
  bool accepted = false;
  std::string failure;  // "singular linearization", "spacelike collapse", "no residual decrease"
};

/// Solves J delta = -r and backtracks until the residual max-norm decreases
/// and, for the Lorentzian signature, max|Du| <= 1 - delta.
NewtonStepResult newton_step(const Grid& grid, const McParams& params, double t, const DiscreteSystem& system,
                             const Field& field, const ContinuationConfig& config);

SolveOutcome solve_dirichlet(const Domain& domain, double H, Signature signature, const BoundaryData& boundary_data,
                             double h, const ContinuationConfig& config = {});
SolveOutcome solve_dirichlet(const Domain& domain, double H, Signature signature, double h,
                             const ContinuationConfig& config = {});

struct SolvabilityReport {
  double H = 0.0;
  bool serrin_ok = false;
  bool t5_ok = false;
  bool necessary_ok = false;
  bool disk_obstruction = false;
  bool lorentz_convex_ok = false;
  bool lorentz_smooth_ok = false;
  bool strip_ok = false;
  double inradius_estimate = 0.0;
  // Geometry the flags were computed from.
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  bool has_corners = false;
  double area = 0.0;
  double perimeter = 0.0;
  double diameter = 0.0;
  double strip_width = 0.0;
  double max_min_width = 0.0;
  double exterior_radius = 0.0;
  bool convex = false;

  /// Euclidean nonexistence is predicted by the necessary condition or the
  /// disk obstruction (H != 0).
  bool predicts_nonexistence(Signature sig) const;
  /// Some existence theorem's hypotheses hold.
  bool predicts_existence(Signature sig) const;
};

SolvabilityReport solvability_predicates(const Domain& domain, double H, Signature signature);

}  // namespace cmc
