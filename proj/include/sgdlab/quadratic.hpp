#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgdlab/linalg.hpp"

namespace sgdlab {

/// One component f_i(x) = 1/2 x'Ax + b'x + c. Hessians may be indefinite:
/// several constructions use concave components.
struct QuadraticComponent {
  Mat hessian;
  Vec linear;
  double offset = 0.0;

  int dim() const { return hessian.rows(); }

  /// Throws if the matrix is not square/symmetric or dimensions disagree.
  void validate() const;

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  void gradient_into(const Vec& x, Vec& out) const;
};

struct ProblemMeta {
  std::optional<double> mu;      // declared strong-convexity modulus of F
  std::optional<double> ell;     // declared component smoothness
  double grad_error_G = 0.0;     // constants of the bounded-gradient-error model
  double grad_error_P = 0.0;
  std::optional<double> gstar;   // bound on ||grad f_i(x*)||
  std::string construction_id;   // provenance tag for serialized problems
};

/// Finite-sum objective F = (1/n) sum f_i with cached spectrum data and the
/// exact minimizer. Immutable after construction; all member functions are
/// const and safe to call concurrently.
class FiniteSumProblem {
public:
  /// Empty problem; only meaningful as a placeholder before assignment.
  FiniteSumProblem() = default;

  /// Solves for the minimizer, computes the averaged Hessian spectrum, and
  /// enforces the declared-constant invariants (declared mu is clamped down
  /// to the measured lambda_min, declared L up to the measured max component
  /// spectral norm, G* up to the measured gradient norms at x*).
  static FiniteSumProblem build(std::vector<QuadraticComponent> components,
                                const ProblemMeta& meta = {});

  int dim() const { return d_; }
  int count() const { return n_; }
  const std::vector<QuadraticComponent>& components() const { return components_; }
  const QuadraticComponent& component(int i) const;

  double mu() const { return mu_; }
  double ell() const { return ell_; }
  double kappa() const { return ell_ / mu_; }
  double grad_error_G() const { return grad_error_G_; }
  double grad_error_P() const { return grad_error_P_; }
  double grad_at_opt_Gstar() const { return gstar_; }
  const std::string& construction_id() const { return construction_id_; }

  const Vec& minimizer() const { return minimizer_; }
  const Mat& averaged_hessian() const { return averaged_hessian_; }
  const Vec& averaged_linear() const { return averaged_linear_; }
  double min_value() const { return min_value_; }

  double value(const Vec& x) const;

private:
  int d_ = 0, n_ = 0;
  std::vector<QuadraticComponent> components_;
  double mu_ = 0.0, ell_ = 0.0;
  double grad_error_G_ = 0.0, grad_error_P_ = 0.0, gstar_ = 0.0;
  Vec minimizer_;
  Mat averaged_hessian_;
  Vec averaged_linear_;
  double min_value_ = 0.0;
  std::string construction_id_;
};

struct IterateState {
  Vec x;
  int epoch = 0;           // k, 0-based
  int within_epoch = 0;    // i in [0, n]
};

Vec component_gradient(const FiniteSumProblem& p, int i, const Vec& x);
Vec full_gradient(const FiniteSumProblem& p, const Vec& x);

/// Solves A_bar x = -b_bar by Cholesky; throws "not strongly convex" if the
/// averaged Hessian is singular or indefinite.
Vec solve_minimizer(const std::vector<QuadraticComponent>& components);

/// F(x) - F(x*), clamped so that values in [-1e-12, 0) round to 0.
double optimality_gap(const FiniteSumProblem& p, const Vec& x);

struct AuditOptions {
  std::optional<Vec> x0;   // probe ball radius = 10*||x* - x0|| when given
  int probe_count = 1000;
};

struct AuditReport {
  double mu_measured = 0.0;        // lambda_min of averaged Hessian
  double ell_measured = 0.0;       // max component spectral norm
  double gstar_measured = 0.0;     // max ||grad f_i(x*)||
  bool identical_hessians = false;

  // Bounded-gradient-error fit: smallest P supported along the eigen
  // directions of the averaged Hessian, and the smallest G that makes the
  // inequality hold on the probe set given the declared P.
  double p_required_eigen = 0.0;
  double g_required_probes = 0.0;

  bool pass_strong_convexity = false;
  bool pass_smoothness = false;
  bool pass_grad_errors = false;
  bool pass_grad_at_opt = false;
  bool pass_minimizer_residual = false;

  int worst_smoothness_component = -1;
  int worst_grad_error_component = -1;
  int worst_grad_at_opt_component = -1;

  int probe_count = 0;
  double probe_radius = 0.0;

  bool all_pass() const {
    return pass_strong_convexity && pass_smoothness && pass_grad_errors && pass_grad_at_opt &&
           pass_minimizer_residual;
  }
};

/// Checks the declared constants (mu, L, G, P, G*) against measured spectrum
/// data, a deterministic low-discrepancy probe set in a ball around x*, and
/// the analytic worst case along the eigen directions of the averaged
/// Hessian. Failures are reported, never thrown.
AuditReport audit_assumptions(const FiniteSumProblem& p, const AuditOptions& opts = {});

}  // namespace sgdlab
