#pragma once

#include <string>
#include <vector>

#include "sgdlab/quadratic.hpp"

namespace sgdlab {

enum class TheoremId {
  SmallLbIdHess,
  SmallLbSc,
  SmallLbConcave,
  LargeLbIdHess,
  LargeLbConcave,
};

std::string to_string(TheoremId id);
TheoremId theorem_id_from_string(const std::string& s);

/// Parameters of a lower-bound instance. L is always derived as kappa*mu;
/// D only matters for SmallLbConcave (first-coordinate initialization).
struct ConstructionSpec {
  TheoremId theorem = TheoremId::SmallLbIdHess;
  int n = 0;
  double kappa = 0.0;
  int K = 0;
  double G = 1.0;
  double mu = 1.0;
  double D = 1.0;

  double L() const { return kappa * mu; }

  /// Throws std::invalid_argument naming the violated inequality.
  void validate() const;
};

/// Half-open step-size interval [lo, hi); lo == 0 means open at zero and
/// hi == inf means unbounded above. Empty when lo >= hi.
struct EtaInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return !(lo < hi); }
  bool contains(double eta) const { return eta >= lo && eta < hi; }
};

struct BoundConstant {
  std::string name;     // formula text, e.g. "(1-1/e)*(1-exp(-1/2))/2"
  double value = 0.0;
};

/// One step-size regime: the sub-problem defeating every eta in `interval`,
/// its initialization, and the regime's gap lower bound with its constant.
struct SubConstruction {
  FiniteSumProblem problem;
  Vec x0;
  EtaInterval interval;
  double gap_bound = 0.0;
  std::vector<BoundConstant> constants;
};

struct ConstructionBundle {
  ConstructionSpec spec;
  FiniteSumProblem problem;  // dimension-aggregated instance
  Vec x0;
  std::vector<SubConstruction> per_dimension;
  double analytic_bound = 0.0;     // min of gap_bound over non-empty regimes
  double audited_g_required = 0.0; // measured G for the declared P (aggregate)
  double audited_p_required = 0.0;
};

ConstructionBundle build_construction(const ConstructionSpec& spec);
ConstructionBundle build_small_lb_idhess(const ConstructionSpec& spec);
ConstructionBundle build_small_lb_sc(const ConstructionSpec& spec);
ConstructionBundle build_small_lb_concave(const ConstructionSpec& spec);
ConstructionBundle build_large_lb_idhess(const ConstructionSpec& spec);
ConstructionBundle build_large_lb_concave(const ConstructionSpec& spec);

struct U0V0 {
  double u0 = 0.0;
  double v0 = 0.0;
  bool signs_guaranteed = false;  // u0>0 and v0<0 certified for this eta
};

/// Rotation-invariant initialization of the 2D polygon instance:
///   u0 = (eta L' - (1-cos d)) / ((1-cos d)(2-(mu+L')eta) + eta^2 mu L') * eta G
///   v0 = -sin d / (same denominator) * eta G,   d = 2pi/n, L' = L/2.
/// Outside the range where the numerator sign analysis applies the values are
/// still computed but flagged.
U0V0 compute_u0_v0(double eta, double mu, double L, int n, double G);

/// Direct sum of per-dimension problems sharing one n: block-diagonal
/// components, concatenated initialization.
std::pair<FiniteSumProblem, Vec> aggregate_dimensions(
    const std::vector<std::pair<FiniteSumProblem, Vec>>& subs, const ProblemMeta& meta = {});

// Component-list builders, exposed for tests and the upper-bound instances.
// All orders follow the cyclic processing order of the constructions.
std::vector<QuadraticComponent> make_identical_components(double curvature, int n);
/// Even n: n/2 of {a/2 x^2 + Gx} then n/2 of {a/2 x^2 - Gx}.
std::vector<QuadraticComponent> make_twotype_components(double a, double G, int n);
/// Odd n: {a/2 x^2}, then (n-1)/2 with +Gx, then (n-1)/2 with -Gx.
std::vector<QuadraticComponent> make_threetype_components(double a, double G, int n);
/// f_i = f_1 composed with the inverse rotation by (i-1) * 2pi/n, where
/// f_1(x, y) = mu/2 x^2 + L'/2 y^2 - Gx and L' = L/2. Every component has
/// eigenvalues {mu, L'}; their average is ((mu+L')/2) I with zero linear term.
std::vector<QuadraticComponent> make_rotated_components(double mu, double L, double G, int n);
/// Even n: n/2 of {L/2 x^2 + Gx} then n/2 of {-L/4 x^2 - Gx}; odd n appends a
/// zero component.
std::vector<QuadraticComponent> make_concave_pair_components(double L, double G, int n);
/// Multiples of 4: blocks {Gx}, {L/2 x^2}, {-Gx}, {-(L-4mu)/2 x^2}; other n
/// get zero components appended after 4*floor(n/4) structured ones.
std::vector<QuadraticComponent> make_fourblock_components(double mu, double L, double G, int n);

}  // namespace sgdlab
