#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgdlab/quadratic.hpp"

namespace sgdlab {

enum class StrategyKind {
  Igd,
  RandomReshuffle,
  SingleShuffle,
  FixedPermutation,
  WithReplacement,
  HerdingAtOptimum,
};

std::string to_string(StrategyKind k);
StrategyKind strategy_kind_from_string(const std::string& s);

/// Index-schedule generator. Immutable; the same (kind, seed, n, k) always
/// produces the same order, so runs replay exactly.
struct ShuffleStrategy {
  StrategyKind kind = StrategyKind::Igd;
  uint64_t seed = 0;
  std::vector<int> sigma;  // FixedPermutation / HerdingAtOptimum only

  static ShuffleStrategy igd() { return {StrategyKind::Igd, 0, {}}; }
  static ShuffleStrategy random_reshuffle(uint64_t seed) {
    return {StrategyKind::RandomReshuffle, seed, {}};
  }
  static ShuffleStrategy single_shuffle(uint64_t seed) {
    return {StrategyKind::SingleShuffle, seed, {}};
  }
  static ShuffleStrategy fixed(std::vector<int> sigma);
  static ShuffleStrategy with_replacement(uint64_t seed) {
    return {StrategyKind::WithReplacement, seed, {}};
  }
  static ShuffleStrategy herding(std::vector<int> sigma);
};

struct RunConfig {
  double eta = 0.0;
  int epochs = 0;
  Vec x0;
  bool record_every_iterate = false;
};

struct RunRecord {
  std::vector<Vec> epoch_starts;  // K+1 entries, [0]=x0, [K]=final
  Vec final;
  std::vector<double> gaps;       // aligned with epoch_starts
  std::vector<IterateState> full_trace;  // nK+1 entries when requested
  bool diverged = false;
  int diverged_epoch = -1;        // epoch index (0-based) where a non-finite value appeared
};

/// Component order used in epoch k (1-based epoch index, k in [1, K]).
/// WithReplacement returns n i.i.d. uniform indices rather than a permutation.
std::vector<int> epoch_order(const ShuffleStrategy& s, int k, int n);

/// Runs permutation-based SGD: nK steps of x <- x - eta * grad f_sigma_k(i)(x).
/// A non-finite iterate flags the record as diverged and keeps the last
/// finite point (large-step regimes diverge on purpose).
RunRecord run(const FiniteSumProblem& p, const ShuffleStrategy& s, const RunConfig& cfg);

struct HerdingResult {
  std::vector<int> order;
  double h_achieved = 0.0;  // max_i || sum of the first i reordered vectors ||
};

/// Greedy prefix balancing: repeatedly appends the unused vector minimizing
/// the running prefix-sum norm; ties break toward the lowest index.
/// Inputs must sum to ~0 (1e-9) and have norm <= 1+1e-9.
HerdingResult herding_order(const std::vector<Vec>& vectors);

struct HerdingStrategyResult {
  ShuffleStrategy strategy;
  double h_achieved = 0.0;
};

/// Builds the fixed permutation that herds the scaled component gradients at
/// the minimizer (or, with use_initial_point, the gradient errors at x0 -
/// identical to the x* variant whenever all components share one Hessian).
/// If every gradient at the optimum vanishes the identity order is returned.
HerdingStrategyResult herding_at_opt_strategy(const FiniteSumProblem& p,
                                              bool use_initial_point = false,
                                              const Vec& x0 = {});

struct StepSizeParams {
  double mu = 0.0;
  double L = 0.0;
  int n = 0;
  int K = 0;
  double G_or_Gstar = 0.0;
  double x0_distance_or_gap = 0.0;  // ||x0-x*|| or F(x0)-F(x*) depending on theorem
  double H = 1.0;
};

/// Constant step size prescribed by each theorem's statement; lower-bound
/// theorems map to the canonical moderate-regime value 1/(mu n K).
double recommended_step_size(const std::string& theorem_id, const StepSizeParams& p);

}  // namespace sgdlab
