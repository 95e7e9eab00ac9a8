#include "sgdlab/shufflers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sgdlab/rng.hpp"

namespace sgdlab {

std::string to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::Igd: return "igd";
    case StrategyKind::RandomReshuffle: return "rr";
    case StrategyKind::SingleShuffle: return "ss";
    case StrategyKind::FixedPermutation: return "fixed";
    case StrategyKind::WithReplacement: return "with-replacement";
    case StrategyKind::HerdingAtOptimum: return "herding-at-opt";
  }
  return "?";
}

StrategyKind strategy_kind_from_string(const std::string& s) {
  if (s == "igd") return StrategyKind::Igd;
  if (s == "rr") return StrategyKind::RandomReshuffle;
  if (s == "ss") return StrategyKind::SingleShuffle;
  if (s == "fixed") return StrategyKind::FixedPermutation;
  if (s == "with-replacement" || s == "wr") return StrategyKind::WithReplacement;
  if (s == "herding-at-opt" || s == "herding") return StrategyKind::HerdingAtOptimum;
  throw std::invalid_argument("unknown strategy kind '" + s + "'");
}

namespace {

void check_permutation(const std::vector<int>& sigma) {
  std::vector<char> seen(sigma.size(), 0);
  for (int v : sigma) {
    if (v < 0 || v >= static_cast<int>(sigma.size()) || seen[v])
      throw std::invalid_argument("sigma is not a permutation of {0..n-1}");
    seen[v] = 1;
  }
}

}  // namespace

ShuffleStrategy ShuffleStrategy::fixed(std::vector<int> sigma) {
  check_permutation(sigma);
  return {StrategyKind::FixedPermutation, 0, std::move(sigma)};
}

ShuffleStrategy ShuffleStrategy::herding(std::vector<int> sigma) {
  check_permutation(sigma);
  return {StrategyKind::HerdingAtOptimum, 0, std::move(sigma)};
}

std::vector<int> epoch_order(const ShuffleStrategy& s, int k, int n) {
  if (k < 1) throw std::invalid_argument("epoch index is 1-based");
  switch (s.kind) {
    case StrategyKind::Igd: {
      std::vector<int> id(n);
      std::iota(id.begin(), id.end(), 0);
      return id;
    }
    case StrategyKind::RandomReshuffle: {
      SplitMix64 g = SplitMix64::stream(s.seed, static_cast<uint64_t>(k));
      return fisher_yates(n, g);
    }
    case StrategyKind::SingleShuffle: {
      SplitMix64 g = SplitMix64::stream(s.seed, 1);  // epoch-1 draw reused for all epochs
      return fisher_yates(n, g);
    }
    case StrategyKind::FixedPermutation:
    case StrategyKind::HerdingAtOptimum: {
      if (static_cast<int>(s.sigma.size()) != n)
        throw std::invalid_argument("fixed permutation length does not match n");
      return s.sigma;
    }
    case StrategyKind::WithReplacement: {
      SplitMix64 g = SplitMix64::stream(s.seed, static_cast<uint64_t>(k));
      std::vector<int> idx(n);
      for (int& v : idx) v = static_cast<int>(g.bounded(static_cast<uint64_t>(n)));
      return idx;
    }
  }
  throw std::logic_error("unreachable strategy kind");
}

RunRecord run(const FiniteSumProblem& p, const ShuffleStrategy& s, const RunConfig& cfg) {
  if (cfg.eta <= 0.0) throw std::invalid_argument("step size must be positive");
  if (cfg.epochs < 1) throw std::invalid_argument("epoch count must be >= 1");
  if (static_cast<int>(cfg.x0.size()) != p.dim())
    throw std::invalid_argument("x0 dimension does not match the problem");

  const int n = p.count();
  const int K = cfg.epochs;
  RunRecord rec;
  rec.epoch_starts.reserve(K + 1);
  rec.epoch_starts.push_back(cfg.x0);
  if (cfg.record_every_iterate) {
    rec.full_trace.reserve(static_cast<size_t>(n) * K + 1);
    rec.full_trace.push_back({cfg.x0, 0, 0});
  }

  Vec x = cfg.x0;
  Vec grad(p.dim());
  Vec last_finite = x;
  for (int k = 1; k <= K && !rec.diverged; ++k) {
    const std::vector<int> order = epoch_order(s, k, n);
    for (int i = 0; i < n; ++i) {
      p.component(order[i]).gradient_into(x, grad);
      for (int j = 0; j < p.dim(); ++j) x[j] -= cfg.eta * grad[j];
      if (!all_finite(x)) {
        rec.diverged = true;
        rec.diverged_epoch = k - 1;
        x = last_finite;
        break;
      }
      last_finite = x;
      if (cfg.record_every_iterate) rec.full_trace.push_back({x, k - 1, i + 1});
    }
    rec.epoch_starts.push_back(x);
  }
  // On divergence the remaining epoch starts repeat the last finite iterate
  // so the record shape is independent of where the overflow happened.
  while (static_cast<int>(rec.epoch_starts.size()) < K + 1) rec.epoch_starts.push_back(x);

  rec.final = x;
  rec.gaps.reserve(rec.epoch_starts.size());
  for (const Vec& v : rec.epoch_starts) {
    const double gap = optimality_gap(p, v);
    rec.gaps.push_back(std::isfinite(gap) ? gap : std::numeric_limits<double>::infinity());
  }
  return rec;
}

HerdingResult herding_order(const std::vector<Vec>& vectors) {
  const int n = static_cast<int>(vectors.size());
  if (n == 0) throw std::invalid_argument("herding_order needs at least one vector");
  const size_t d = vectors.front().size();
  Vec total(d, 0.0);
  for (int i = 0; i < n; ++i) {
    if (vectors[i].size() != d) throw std::invalid_argument("herding vectors disagree on dimension");
    const double nv = norm(vectors[i]);
    if (nv > 1.0 + 1e-9)
      throw std::invalid_argument("herding input " + std::to_string(i) + " has norm " +
                                  std::to_string(nv) + " > 1");
    for (size_t j = 0; j < d; ++j) total[j] += vectors[i][j];
  }
  if (norm(total) > 1e-9)
    throw std::invalid_argument("herding inputs sum to norm " + std::to_string(norm(total)) +
                                ", expected ~0");

  HerdingResult res;
  res.order.reserve(n);
  std::vector<char> used(n, 0);
  Vec prefix(d, 0.0);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    double best_norm = 0.0;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      double s = 0.0;
      for (size_t j = 0; j < d; ++j) {
        const double v = prefix[j] + vectors[i][j];
        s += v * v;
      }
      if (best < 0 || s < best_norm) {  // strict '<' keeps the lowest index on ties
        best = i;
        best_norm = s;
      }
    }
    used[best] = 1;
    res.order.push_back(best);
    for (size_t j = 0; j < d; ++j) prefix[j] += vectors[best][j];
    res.h_achieved = std::max(res.h_achieved, std::sqrt(best_norm));
  }
  return res;
}

HerdingStrategyResult herding_at_opt_strategy(const FiniteSumProblem& p, bool use_initial_point,
                                              const Vec& x0) {
  const double gstar = p.grad_at_opt_Gstar();
  const int n = p.count();
  if (gstar <= 0.0) {
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    return {ShuffleStrategy::herding(std::move(id)), 0.0};
  }

  std::vector<Vec> z(n);
  if (use_initial_point) {
    if (static_cast<int>(x0.size()) != p.dim())
      throw std::invalid_argument("herding_at_opt_strategy(use_initial_point) needs x0");
    const Vec gf = full_gradient(p, x0);
    for (int i = 0; i < n; ++i) z[i] = scaled(1.0 / gstar, component_gradient(p, i, x0) - gf);
  } else {
    for (int i = 0; i < n; ++i)
      z[i] = scaled(1.0 / gstar, component_gradient(p, i, p.minimizer()));
  }
  HerdingResult h = herding_order(z);
  return {ShuffleStrategy::herding(std::move(h.order)), h.h_achieved};
}

double recommended_step_size(const std::string& theorem_id, const StepSizeParams& p) {
  if (p.mu <= 0.0 || p.n <= 0 || p.K <= 0)
    throw std::invalid_argument("recommended_step_size needs positive mu, n, K");
  const double base = 1.0 / (p.mu * p.n * p.K);
  const auto log_max = [](double arg) { return std::max(std::log(arg), 1.0); };

  if (theorem_id == "small-lb-idhess" || theorem_id == "small-lb-sc" ||
      theorem_id == "small-lb-concave" || theorem_id == "large-lb-idhess" ||
      theorem_id == "large-lb-concave") {
    return base;  // canonical moderate-regime step size used by the sweeps
  }
  if (theorem_id == "small-ub-idhess") {
    if (p.G_or_Gstar <= 0.0 || p.L <= 0.0)
      throw std::invalid_argument("small-ub-idhess step size needs positive L and G*");
    return base * log_max(p.L * p.x0_distance_or_gap / p.G_or_Gstar);
  }
  if (theorem_id == "small-ub-strongcvx") {
    if (p.G_or_Gstar <= 0.0 || p.L <= 0.0)
      throw std::invalid_argument("small-ub-strongcvx step size needs positive L and G*");
    const double kappa = p.L / p.mu;
    return 2.0 * base *
           log_max(p.x0_distance_or_gap * p.mu * p.K / (std::sqrt(kappa) * p.G_or_Gstar));
  }
  if (theorem_id == "herding-at-opt") {
    if (p.G_or_Gstar <= 0.0 || p.L <= 0.0 || p.H <= 0.0)
      throw std::invalid_argument("herding-at-opt step size needs positive L, G*, H");
    const double kappa = p.L / p.mu;
    return 2.0 * base * log_max(p.x0_distance_or_gap * p.mu * p.n * p.K /
                                (std::sqrt(kappa) * p.H * p.G_or_Gstar));
  }
  if (theorem_id == "large-ub-convex") {
    if (p.G_or_Gstar <= 0.0 || p.L <= 0.0)
      throw std::invalid_argument("large-ub-convex step size needs positive L and G");
    const double d2 = p.x0_distance_or_gap * p.x0_distance_or_gap;
    return base * log_max(d2 * p.mu * p.mu * p.mu * p.K * p.K /
                          (p.L * p.G_or_Gstar * p.G_or_Gstar * (1.0 + std::log(p.K))));
  }
  if (theorem_id == "large-ub-general") {
    if (p.G_or_Gstar <= 0.0 || p.L <= 0.0)
      throw std::invalid_argument("large-ub-general step size needs positive L and G");
    return 2.0 * base *
           log_max(p.x0_distance_or_gap * p.mu * p.mu * p.mu * p.K * p.K /
                   (p.L * p.L * p.G_or_Gstar * p.G_or_Gstar));
  }
  throw std::invalid_argument("unknown theorem id '" + theorem_id + "'");
}

}  // namespace sgdlab
