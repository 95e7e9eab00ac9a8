#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sgdlab/constructions.hpp"
#include "sgdlab/shufflers.hpp"

namespace sgdlab {

/// Step-size sweep configuration. The grid realizes the "for any constant
/// step size" quantifier: it must put at least 20 points in every non-empty
/// regime interval of the construction under test.
struct SweepSpec {
  std::vector<double> eta_grid;  // strictly increasing
  std::vector<int> K_list;
  int repeats = 1;
  uint64_t seed = 0;
  void validate() const;
};

/// Log-spaced grid covering each non-empty interval with `points_per_interval`
/// points including the finite endpoints. Open-at-zero intervals are covered
/// down to hi*1e-6 and unbounded ones up to lo*1e3.
std::vector<double> eta_grid_for_intervals(const std::vector<EtaInterval>& intervals,
                                           int points_per_interval);

/// Superset refinement: inserts the geometric midpoint between neighbours.
std::vector<double> refine_grid(const std::vector<double>& grid);

struct PerEtaRow {
  double eta = 0.0;
  double gap = 0.0;
  bool diverged = false;
};

struct BoundCheckReport {
  std::string theorem_id;
  std::string direction;  // "lower": measured inf gap must beat the bound;
                          // "upper": measured value must stay below it
  std::vector<std::pair<std::string, double>> params;
  double measured = 0.0;
  double analytic_bound = 0.0;
  double margin = 0.0;  // ratio oriented so pass <=> margin >= 1
  bool pass = false;
  std::vector<PerEtaRow> per_eta_table;
  std::vector<BoundConstant> constants;
};

/// Builds the instance, runs IGD at every grid step size, and compares the
/// minimum final gap against the construction's analytic bound. Divergent
/// runs contribute their last finite gap. Throws if the grid leaves a
/// non-empty regime interval with fewer than 20 points.
BoundCheckReport lower_bound_check(const ConstructionSpec& spec, const SweepSpec& sweep);

/// Runs the theorem's step-size schedule on `problem` and asserts the
/// measured quantity stays below the bound assembled from the proof's
/// explicit constants. The problem is audited against the theorem's
/// assumptions first; violations throw std::invalid_argument.
///   small-ub-idhess     gap bound, needs d=1 and identical Hessians
///   small-ub-strongcvx  squared-distance bound, needs strongly convex f_i
///   herding-at-opt      squared-distance bound, strategy must be a fixed
///                       permutation (its prefix H at x* enters the bound)
///   large-ub-general    gap bound, needs declared (G, P) and large enough K
BoundCheckReport upper_bound_check(const std::string& theorem_id, const FiniteSumProblem& problem,
                                   const ShuffleStrategy& strategy, const Vec& x0, int K);

struct RateFit {
  std::vector<double> K_values;
  std::vector<double> gaps;
  double log_log_slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least squares of log(gap) on log(K); needs >= 3 positive gaps.
RateFit rate_fit(const std::vector<double>& K_values, const std::vector<double>& gaps);

struct TrajectoryResult {
  std::string csv;  // metadata comment, trace rows, summary comments
  double final_radius = 0.0;
  bool radius_nondecreasing_after_epoch2 = true;
  std::vector<double> epoch_radii;  // K+1 entries
};

/// IGD trace on the rotated 2-D block of the given SmallLbSc instance at
/// eta = 1/(mu n K). Starts at the origin by default; start_at_polygon uses
/// (u0, v0) instead (the closed orbit).
TrajectoryResult reproduce_fig_trajectory(const ConstructionSpec& spec,
                                          bool start_at_polygon = false);

struct GapComparisonRow {
  int K = 0;
  std::string strategy;
  double mean_gap = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

struct GapComparisonResult {
  std::vector<GapComparisonRow> rows;
  std::string csv;
  bool igd_blowup_at_smallest_K = false;   // igd mean >= 10x rr mean at min K
  bool rr_wr_within_band = false;          // either mean inside the other's [q1,q3], every K
  bool herding_below_rr = false;           // at every K
  bool rr_wr_bands_intersect = false;      // [q1,q3] bands overlap at every K (diagnostic)
};

struct GapComparisonConfig {
  std::vector<int> K_list;  // empty: log grid in [max(4, ceil(kappa/n)), floor(kappa/4)]
  int seeds = 20;
  uint64_t seed = 1;
};

/// Final gaps of IGD / RR / Herding-at-Optimum / with-replacement on the
/// blow-up dimension of the given SmallLbConcave instance at eta = 1/(mu n K)
/// for each K, with mean and quartiles over the randomized strategies.
GapComparisonResult reproduce_fig_gap_comparison(const ConstructionSpec& spec,
                                                 const GapComparisonConfig& cfg = {});

std::string report_to_json(const BoundCheckReport& r);

/// Cells are evaluated by a pure function and reduced in index order, so the
/// result is identical whether this runs on one thread or many. Thread count
/// is capped by the SHUFFLE_SGD_THREADS environment variable.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace sgdlab
