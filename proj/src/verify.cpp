#include "sgdlab/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sgdlab {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

int env_thread_cap() {
  const char* v = std::getenv("SHUFFLE_SGD_THREADS");
  if (!v) return static_cast<int>(std::thread::hardware_concurrency());
  const int n = std::atoi(v);
  return n >= 1 ? n : 1;
}

std::string fmt(double v) { return format_g17(v); }

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
  const size_t lo = static_cast<size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double w = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - w) + sorted[lo + 1] * w;
}

}  // namespace

void parallel_for(int count, const std::function<void(int)>& fn) {
  const int threads = std::max(1, std::min({env_thread_cap(), count, 64}));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  for (std::thread& th : pool) th.join();
}

void SweepSpec::validate() const {
  if (repeats < 1) throw std::invalid_argument("sweep repeats must be >= 1");
  for (size_t i = 0; i + 1 < eta_grid.size(); ++i)
    if (!(eta_grid[i] < eta_grid[i + 1]))
      throw std::invalid_argument("eta grid must be strictly increasing");
  for (double e : eta_grid)
    if (!(e > 0.0)) throw std::invalid_argument("eta grid entries must be positive");
}

std::vector<double> eta_grid_for_intervals(const std::vector<EtaInterval>& intervals,
                                           int points_per_interval) {
  if (points_per_interval < 2) throw std::invalid_argument("need >= 2 points per interval");
  std::vector<double> grid;
  for (const EtaInterval& iv : intervals) {
    if (iv.empty()) continue;
    double lo = iv.lo, hi = iv.hi;
    if (lo <= 0.0) lo = hi * 1e-6;                  // open at zero
    if (std::isinf(hi)) hi = iv.lo * 1e3;           // unbounded above
    else hi = hi * (1.0 - 1e-9);                    // half-open right end
    if (!(lo < hi)) { grid.push_back(lo); continue; }
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < points_per_interval; ++i) {
      const double t = static_cast<double>(i) / (points_per_interval - 1);
      grid.push_back(std::exp(llo + t * (lhi - llo)));
    }
    // Keep the exact finite endpoints on the grid.
    if (iv.lo > 0.0) grid.push_back(iv.lo);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<double> refine_grid(const std::vector<double>& grid) {
  std::vector<double> out;
  out.reserve(grid.size() * 2);
  for (size_t i = 0; i < grid.size(); ++i) {
    out.push_back(grid[i]);
    if (i + 1 < grid.size()) {
      const double mid = std::sqrt(grid[i] * grid[i + 1]);
      if (mid > grid[i] && mid < grid[i + 1]) out.push_back(mid);
    }
  }
  return out;
}

BoundCheckReport lower_bound_check(const ConstructionSpec& spec, const SweepSpec& sweep) {
  sweep.validate();
  const ConstructionBundle bundle = build_construction(spec);

  for (const SubConstruction& sc : bundle.per_dimension) {
    if (sc.interval.empty()) continue;
    int inside = 0;
    for (double e : sweep.eta_grid)
      if (sc.interval.contains(e)) ++inside;
    if (inside < 20) {
      std::ostringstream os;
      os << "eta grid fails to cover regime interval [" << fmt(sc.interval.lo) << ", "
         << (std::isinf(sc.interval.hi) ? "inf" : fmt(sc.interval.hi)) << ") of "
         << sc.problem.construction_id() << ": " << inside << " points, need >= 20";
      throw std::invalid_argument(os.str());
    }
  }

  BoundCheckReport rep;
  rep.theorem_id = to_string(spec.theorem);
  rep.direction = "lower";
  rep.params = {{"n", static_cast<double>(spec.n)},
                {"kappa", spec.kappa},
                {"K", static_cast<double>(spec.K)},
                {"G", spec.G},
                {"mu", spec.mu}};
  if (spec.theorem == TheoremId::SmallLbConcave) rep.params.emplace_back("D", spec.D);
  for (const SubConstruction& sc : bundle.per_dimension)
    rep.constants.insert(rep.constants.end(), sc.constants.begin(), sc.constants.end());

  rep.per_eta_table.resize(sweep.eta_grid.size());
  parallel_for(static_cast<int>(sweep.eta_grid.size()), [&](int i) {
    RunConfig cfg;
    cfg.eta = sweep.eta_grid[i];
    cfg.epochs = spec.K;
    cfg.x0 = bundle.x0;
    const RunRecord rec = run(bundle.problem, ShuffleStrategy::igd(), cfg);
    rep.per_eta_table[i] = {sweep.eta_grid[i], rec.gaps.back(), rec.diverged};
  });

  rep.measured = kInf;
  for (const PerEtaRow& row : rep.per_eta_table) rep.measured = std::min(rep.measured, row.gap);
  rep.analytic_bound = bundle.analytic_bound;
  rep.margin = rep.measured / rep.analytic_bound;
  rep.pass = rep.margin >= 1.0;
  return rep;
}

namespace {

double max_log(double arg) { return std::max(std::log(arg), 1.0); }

[[noreturn]] void refuse(const std::string& theorem, const std::string& why) {
  throw std::invalid_argument("assumption audit refused for " + theorem + ": " + why);
}

}  // namespace

BoundCheckReport upper_bound_check(const std::string& theorem_id, const FiniteSumProblem& problem,
                                   const ShuffleStrategy& strategy, const Vec& x0, int K) {
  if (K < 1) throw std::invalid_argument("upper_bound_check needs K >= 1");
  if (static_cast<int>(x0.size()) != problem.dim())
    throw std::invalid_argument("x0 dimension mismatch");

  const double mu = problem.mu();
  const double L = problem.ell();
  const double kappa = L / mu;
  const double gstar = problem.grad_at_opt_Gstar();
  const int n = problem.count();
  const double dist0 = norm(x0 - problem.minimizer());
  const AuditReport audit = audit_assumptions(problem, AuditOptions{x0, 1000});

  BoundCheckReport rep;
  rep.theorem_id = theorem_id;
  rep.direction = "upper";
  rep.params = {{"n", static_cast<double>(n)},
                {"K", static_cast<double>(K)},
                {"mu", mu},
                {"L", L},
                {"Gstar", gstar},
                {"x0_distance", dist0}};

  StepSizeParams sp;
  sp.mu = mu;
  sp.L = L;
  sp.n = n;
  sp.K = K;
  sp.G_or_Gstar = gstar;
  sp.x0_distance_or_gap = dist0;

  double eta = 0.0;
  double bound = 0.0;
  std::string measured_kind;  // "gap" or "dist2"

  if (theorem_id == "small-ub-idhess") {
    if (problem.dim() != 1) refuse(theorem_id, "objective must be 1-dimensional");
    if (!audit.identical_hessians) refuse(theorem_id, "components must share one Hessian");
    if (gstar <= 0.0) refuse(theorem_id, "needs G* > 0");
    eta = recommended_step_size(theorem_id, sp);
    if (!(eta < 1.0 / L))
      refuse(theorem_id, "schedule eta=" + fmt(eta) + " is not below 1/L; K too small");
    const double m = max_log(L * dist0 / gstar);
    bound = 4.0 * m * gstar * gstar / (mu * K) + 2.5 * gstar * gstar / L;
    rep.constants = {{"4*max(log(L|x0-x*|/G*),1) * G*^2/(mu K)", 4.0 * m},
                     {"5/2 * G*^2/L", 2.5}};
    measured_kind = "gap";
  } else if (theorem_id == "small-ub-strongcvx") {
    for (int i = 0; i < n; ++i) {
      const EigenSym e = eigen_symmetric(problem.component(i).hessian);
      if (e.values.front() < mu * (1.0 - 1e-9))
        refuse(theorem_id, "component " + std::to_string(i) + " is not mu-strongly convex");
    }
    if (gstar <= 0.0) refuse(theorem_id, "needs G* > 0");
    const double m = max_log(dist0 * mu * K / (std::sqrt(kappa) * gstar));
    if (K < 2.0 * kappa / n * m)
      refuse(theorem_id, "epoch condition K >= (2 kappa/n) max(log(...),1) fails");
    eta = recommended_step_size(theorem_id, sp);
    bound = (1.0 + 4.0 * m * m) * L * gstar * gstar / (mu * mu * mu * static_cast<double>(K) * K);
    rep.constants = {{"(1+4*max(log(|x0-x*| mu K/(sqrt(kappa) G*)),1)^2) * L G*^2/(mu^3 K^2)",
                      1.0 + 4.0 * m * m}};
    measured_kind = "dist2";
  } else if (theorem_id == "herding-at-opt") {
    for (int i = 0; i < n; ++i) {
      const EigenSym e = eigen_symmetric(problem.component(i).hessian);
      if (e.values.front() < mu * (1.0 - 1e-9))
        refuse(theorem_id, "component " + std::to_string(i) + " is not mu-strongly convex");
    }
    if (gstar <= 0.0) refuse(theorem_id, "needs G* > 0");
    if (strategy.kind != StrategyKind::HerdingAtOptimum &&
        strategy.kind != StrategyKind::FixedPermutation)
      refuse(theorem_id, "strategy must be a fixed permutation");
    if (static_cast<int>(strategy.sigma.size()) != n)
      refuse(theorem_id, "fixed permutation length must equal n");
    // Achieved prefix bound of this permutation at the optimum.
    Vec prefix(problem.dim(), 0.0);
    double h = 0.0;
    for (int i = 0; i < n; ++i) {
      const Vec g = component_gradient(problem, strategy.sigma[i], problem.minimizer());
      for (int j = 0; j < problem.dim(); ++j) prefix[j] += g[j];
      h = std::max(h, norm(prefix));
    }
    h /= gstar;
    if (h <= 0.0) h = 1e-300;  // all gradients vanish at x*; any order is exact
    sp.H = h;
    rep.params.emplace_back("H_achieved", h);
    const double m = max_log(dist0 * mu * n * K / (std::sqrt(kappa) * h * gstar));
    if (K < 2.0 * kappa / n * m)
      refuse(theorem_id, "epoch condition K >= (2 kappa/n) max(log(...),1) fails");
    eta = recommended_step_size(theorem_id, sp);
    bound = (1.0 + 4.0 * m * m) * h * h * L * gstar * gstar /
            (mu * mu * mu * static_cast<double>(n) * n * static_cast<double>(K) * K);
    rep.constants = {
        {"(1+4*max(log(|x0-x*| mu n K/(sqrt(kappa) H G*)),1)^2) * H^2 L G*^2/(mu^3 n^2 K^2)",
         1.0 + 4.0 * m * m}};
    measured_kind = "dist2";
  } else if (theorem_id == "large-ub-general") {
    const double G = problem.grad_error_G();
    const double P = problem.grad_error_P();
    if (!(G > 0.0)) refuse(theorem_id, "needs a declared gradient-error constant G > 0");
    if (!audit.pass_grad_errors)
      refuse(theorem_id, "declared (G, P) fail the bounded-gradient-error audit");
    const double gap0 = optimality_gap(problem, x0);
    sp.x0_distance_or_gap = gap0;
    sp.G_or_Gstar = G;
    const double m = max_log(gap0 * mu * mu * mu * static_cast<double>(K) * K / (L * L * G * G));
    if (K < 8.0 * kappa * std::max(1.0, P) * m)
      refuse(theorem_id, "epoch condition K >= 8 kappa max(1,P) max(log(...),1) fails");
    eta = recommended_step_size(theorem_id, sp);
    bound = (1.0 + 16.0 * m * m) * L * L * G * G / (mu * mu * mu * static_cast<double>(K) * K);
    rep.constants = {
        {"(1+16*max(log((F(x0)-F*) mu^3 K^2/(L^2 G^2)),1)^2) * L^2 G^2/(mu^3 K^2)",
         1.0 + 16.0 * m * m}};
    rep.params.emplace_back("G", G);
    rep.params.emplace_back("P", P);
    rep.params.emplace_back("gap0", gap0);
    measured_kind = "gap";
  } else if (theorem_id == "large-ub-convex") {
    throw std::invalid_argument(
        "large-ub-convex is a restated external result without explicit proof constants; "
        "only its step-size schedule is supported");
  } else {
    throw std::invalid_argument("unknown upper-bound theorem id '" + theorem_id + "'");
  }

  RunConfig cfg;
  cfg.eta = eta;
  cfg.epochs = K;
  cfg.x0 = x0;
  const RunRecord rec = run(problem, strategy, cfg);
  if (rec.diverged) refuse(theorem_id, "run diverged under the theorem schedule");

  rep.params.emplace_back("eta", eta);
  rep.measured = measured_kind == "gap" ? rec.gaps.back()
                                        : std::pow(norm(rec.final - problem.minimizer()), 2);
  rep.analytic_bound = bound;
  rep.margin = rep.measured > 0.0 ? bound / rep.measured : kInf;
  rep.pass = rep.measured <= bound;
  rep.per_eta_table = {{eta, rec.gaps.back(), rec.diverged}};
  return rep;
}

RateFit rate_fit(const std::vector<double>& K_values, const std::vector<double>& gaps) {
  if (K_values.size() != gaps.size())
    throw std::invalid_argument("rate_fit needs matching K/gap lengths");
  if (K_values.size() < 3) throw std::invalid_argument("rate_fit needs >= 3 points");
  RateFit fit;
  fit.K_values = K_values;
  fit.gaps = gaps;
  std::vector<double> lx(K_values.size()), ly(K_values.size());
  for (size_t i = 0; i < K_values.size(); ++i) {
    if (!(K_values[i] > 0.0)) throw std::invalid_argument("rate_fit needs positive K values");
    if (!(gaps[i] > 0.0))
      throw std::invalid_argument("rate_fit needs positive gaps (gap[" + std::to_string(i) +
                                  "]=" + fmt(gaps[i]) + ")");
    lx[i] = std::log(K_values[i]);
    ly[i] = std::log(gaps[i]);
  }
  const double nn = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
    syy += ly[i] * ly[i];
  }
  const double denom = nn * sxx - sx * sx;
  if (std::fabs(denom) < 1e-30) throw std::invalid_argument("rate_fit K values are degenerate");
  fit.log_log_slope = (nn * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.log_log_slope * sx) / nn;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / nn;
  for (size_t i = 0; i < lx.size(); ++i) {
    const double pred = fit.intercept + fit.log_log_slope * lx[i];
    ss_res += (ly[i] - pred) * (ly[i] - pred);
    ss_tot += (ly[i] - mean_y) * (ly[i] - mean_y);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

TrajectoryResult reproduce_fig_trajectory(const ConstructionSpec& spec, bool start_at_polygon) {
  if (spec.theorem != TheoremId::SmallLbSc)
    throw std::invalid_argument("trajectory figure needs a small-lb-sc spec");
  const ConstructionBundle bundle = build_construction(spec);
  const FiniteSumProblem& rotated = bundle.per_dimension[1].problem;

  const double eta = 1.0 / (spec.mu * spec.n * spec.K);
  RunConfig cfg;
  cfg.eta = eta;
  cfg.epochs = spec.K;
  cfg.x0 = start_at_polygon ? bundle.per_dimension[1].x0 : Vec{0.0, 0.0};
  cfg.record_every_iterate = true;
  const RunRecord rec = run(rotated, ShuffleStrategy::igd(), cfg);

  TrajectoryResult res;
  for (const Vec& v : rec.epoch_starts) res.epoch_radii.push_back(norm(v));
  res.final_radius = norm(rec.final);
  for (size_t k = 2; k + 1 < res.epoch_radii.size(); ++k)
    if (res.epoch_radii[k + 1] < res.epoch_radii[k] * (1.0 - 1e-12))
      res.radius_nondecreasing_after_epoch2 = false;

  std::string csv = "# construction=" + to_string(spec.theorem) + " eta=" + fmt(eta) +
                    " start=" + (start_at_polygon ? std::string("polygon") : std::string("origin")) +
                    "\n";
  csv += "epoch,step,x_1,x_2\n";
  for (const IterateState& s : rec.full_trace) {
    csv += std::to_string(s.epoch) + ',' + std::to_string(s.within_epoch) + ',' + fmt(s.x[0]) +
           ',' + fmt(s.x[1]) + '\n';
  }
  csv += "# final_radius=" + fmt(res.final_radius) + "\n";
  csv += std::string("# radius_nondecreasing_after_epoch_2=") +
         (res.radius_nondecreasing_after_epoch2 ? "true" : "false") + "\n";
  res.csv = std::move(csv);
  return res;
}

GapComparisonResult reproduce_fig_gap_comparison(const ConstructionSpec& spec,
                                                 const GapComparisonConfig& cfg) {
  if (spec.theorem != TheoremId::SmallLbConcave)
    throw std::invalid_argument("gap-comparison figure needs a small-lb-concave spec");
  spec.validate();
  if (cfg.seeds < 1) throw std::invalid_argument("gap comparison needs >= 1 seeds");

  std::vector<int> K_list = cfg.K_list;
  if (K_list.empty()) {
    const int k_min = std::max(4, static_cast<int>(std::ceil(spec.kappa / spec.n)));
    const int k_max = static_cast<int>(std::floor(spec.kappa / 4.0));
    if (k_min > k_max) throw std::invalid_argument("no valid K range for gap comparison");
    const int points = 8;
    for (int i = 0; i < points; ++i) {
      const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
      const int k = static_cast<int>(std::lround(
          std::exp(std::log(static_cast<double>(k_min)) +
                   t * (std::log(static_cast<double>(k_max)) - std::log(static_cast<double>(k_min))))));
      if (K_list.empty() || K_list.back() != k) K_list.push_back(k);
    }
  }
  std::sort(K_list.begin(), K_list.end());
  K_list.erase(std::unique(K_list.begin(), K_list.end()), K_list.end());
  for (int k : K_list) {
    ConstructionSpec probe = spec;
    probe.K = k;
    probe.validate();
  }

  // The blow-up dimension alone carries the comparison; its components do
  // not depend on K, so one problem serves the whole K grid.
  const ConstructionBundle bundle = build_construction(spec);
  const FiniteSumProblem& blowup = bundle.per_dimension[1].problem;
  const Vec y0 = {0.0};

  const HerdingStrategyResult herd = herding_at_opt_strategy(blowup);

  GapComparisonResult res;
  struct Cell {
    double igd = 0.0, herd = 0.0;
    std::vector<double> rr, wr;
  };
  std::vector<Cell> cells(K_list.size());

  parallel_for(static_cast<int>(K_list.size()), [&](int idx) {
    const int K = K_list[idx];
    RunConfig rc;
    rc.eta = 1.0 / (spec.mu * spec.n * K);
    rc.epochs = K;
    rc.x0 = y0;
    Cell& cell = cells[idx];
    cell.igd = run(blowup, ShuffleStrategy::igd(), rc).gaps.back();
    cell.herd = run(blowup, herd.strategy, rc).gaps.back();
    cell.rr.resize(cfg.seeds);
    cell.wr.resize(cfg.seeds);
    for (int s = 0; s < cfg.seeds; ++s) {
      cell.rr[s] =
          run(blowup, ShuffleStrategy::random_reshuffle(cfg.seed + static_cast<uint64_t>(s)), rc)
              .gaps.back();
      cell.wr[s] =
          run(blowup, ShuffleStrategy::with_replacement(cfg.seed + static_cast<uint64_t>(s)), rc)
              .gaps.back();
    }
  });

  res.igd_blowup_at_smallest_K = true;
  res.rr_wr_within_band = true;
  res.herding_below_rr = true;
  res.rr_wr_bands_intersect = true;

  std::string csv = "# seed=" + std::to_string(cfg.seed) + " seeds=" + std::to_string(cfg.seeds) +
                    " construction=" + to_string(spec.theorem) + " eta=1/(mu n K)\n";
  csv += "K,strategy,mean_gap,q1,q3\n";
  for (size_t idx = 0; idx < K_list.size(); ++idx) {
    const int K = K_list[idx];
    Cell& cell = cells[idx];
    const auto mean = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    std::vector<double> rr_sorted = cell.rr, wr_sorted = cell.wr;
    std::sort(rr_sorted.begin(), rr_sorted.end());
    std::sort(wr_sorted.begin(), wr_sorted.end());
    const double rr_mean = mean(cell.rr), wr_mean = mean(cell.wr);
    const double rr_q1 = quantile_sorted(rr_sorted, 0.25), rr_q3 = quantile_sorted(rr_sorted, 0.75);
    const double wr_q1 = quantile_sorted(wr_sorted, 0.25), wr_q3 = quantile_sorted(wr_sorted, 0.75);

    res.rows.push_back({K, "igd", cell.igd, cell.igd, cell.igd});
    res.rows.push_back({K, "rr", rr_mean, rr_q1, rr_q3});
    res.rows.push_back({K, "herding-at-opt", cell.herd, cell.herd, cell.herd});
    res.rows.push_back({K, "with-replacement", wr_mean, wr_q1, wr_q3});

    if (idx == 0 && !(cell.igd >= 10.0 * rr_mean)) res.igd_blowup_at_smallest_K = false;
    const bool band = (wr_mean >= rr_q1 && wr_mean <= rr_q3) ||
                      (rr_mean >= wr_q1 && rr_mean <= wr_q3);
    if (!band) res.rr_wr_within_band = false;
    if (!(std::max(rr_q1, wr_q1) <= std::min(rr_q3, wr_q3))) res.rr_wr_bands_intersect = false;
    if (!(cell.herd <= rr_mean)) res.herding_below_rr = false;
  }
  for (const GapComparisonRow& r : res.rows)
    csv += std::to_string(r.K) + ',' + r.strategy + ',' + fmt(r.mean_gap) + ',' + fmt(r.q1) + ',' +
           fmt(r.q3) + '\n';
  res.csv = std::move(csv);
  return res;
}

std::string report_to_json(const BoundCheckReport& r) {
  std::string out = "{\"schema\":\"shuffle-sgd-lab/report/v1\"";
  out += ",\"theorem\":\"" + r.theorem_id + "\"";
  out += ",\"direction\":\"" + r.direction + "\"";
  out += ",\"params\":{";
  for (size_t i = 0; i < r.params.size(); ++i) {
    if (i) out += ',';
    out += "\"" + r.params[i].first + "\":" + fmt(r.params[i].second);
  }
  out += "},\"measured\":" + fmt(r.measured);
  out += ",\"analytic_bound\":" + fmt(r.analytic_bound);
  out += ",\"margin\":" + fmt(r.margin);
  out += ",\"pass\":";
  out += r.pass ? "true" : "false";
  out += ",\"constants\":[";
  for (size_t i = 0; i < r.constants.size(); ++i) {
    if (i) out += ',';
    out += "{\"formula\":\"" + r.constants[i].name + "\",\"value\":" + fmt(r.constants[i].value) +
           "}";
  }
  out += "],\"per_eta\":[";
  for (size_t i = 0; i < r.per_eta_table.size(); ++i) {
    if (i) out += ',';
    out += "{\"eta\":" + fmt(r.per_eta_table[i].eta) + ",\"gap\":" + fmt(r.per_eta_table[i].gap) +
           ",\"diverged\":" + (r.per_eta_table[i].diverged ? "true" : "false") + "}";
  }
  out += "]}";
  return out;
}

}  // namespace sgdlab
