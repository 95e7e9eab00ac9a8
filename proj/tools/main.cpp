// Command-line surface for building the lower-bound instances, running
// shuffling strategies on them, sweeping step sizes, verifying the rate
// bounds, and emitting the synthetic-experiment figures as CSV.
//
// Exit codes: 0 success / all checks passed, 1 a bound check failed,
// 2 usage or parameter error (details on stderr, prefixed "error:").

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "sgdlab/constructions.hpp"
#include "sgdlab/oracles.hpp"
#include "sgdlab/serialize.hpp"
#include "sgdlab/shufflers.hpp"
#include "sgdlab/verify.hpp"

using namespace sgdlab;

namespace {

struct CommonParams {
  std::string theorem;
  int n = 0;
  double kappa = 0.0;
  int K = 0;
  double G = 1.0;
  double mu = 1.0;
  double D = 1.0;
};

ConstructionSpec to_spec(const CommonParams& p) {
  ConstructionSpec spec;
  spec.theorem = theorem_id_from_string(p.theorem);
  spec.n = p.n;
  spec.kappa = p.kappa;
  spec.K = p.K;
  spec.G = p.G;
  spec.mu = p.mu;
  spec.D = p.D;
  return spec;
}

void add_construction_options(CLI::App* cmd, CommonParams& p, bool require_all = true) {
  auto* t = cmd->add_option("--theorem", p.theorem, "construction id (small-lb-idhess, small-lb-sc, small-lb-concave, large-lb-idhess, large-lb-concave)");
  auto* n = cmd->add_option("--n", p.n, "number of components");
  auto* k = cmd->add_option("--kappa", p.kappa, "condition number L/mu");
  auto* K = cmd->add_option("--K", p.K, "epoch count");
  cmd->add_option("--G", p.G, "gradient-error scale, default 1");
  cmd->add_option("--mu", p.mu, "strong-convexity modulus, default 1");
  cmd->add_option("--D", p.D, "first-coordinate initialization (small-lb-concave only)");
  if (require_all) {
    t->required();
    n->required();
    k->required();
    K->required();
  }
}

std::vector<double> parse_vec(const std::string& s) {
  std::vector<double> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(std::stod(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::stod(cur));
  return out;
}

std::vector<int> parse_perm(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_vec(s)) out.push_back(static_cast<int>(v));
  return out;
}

double resolve_eta(const std::string& eta_flag, const FiniteSumProblem& p, const Vec& x0, int K,
                   double H) {
  if (eta_flag.rfind("auto:", 0) == 0) {
    StepSizeParams sp;
    sp.mu = p.mu();
    sp.L = p.ell();
    sp.n = p.count();
    sp.K = K;
    sp.G_or_Gstar = p.grad_at_opt_Gstar();
    sp.H = H;
    const std::string id = eta_flag.substr(5);
    sp.x0_distance_or_gap =
        (id == "large-ub-general") ? optimality_gap(p, x0) : norm(x0 - p.minimizer());
    return recommended_step_size(id, sp);
  }
  return std::stod(eta_flag);
}

ShuffleStrategy resolve_strategy(const std::string& s, uint64_t seed, const FiniteSumProblem& p) {
  if (s.rfind("fixed:", 0) == 0) return ShuffleStrategy::fixed(parse_perm(s.substr(6)));
  const StrategyKind kind = strategy_kind_from_string(s);
  switch (kind) {
    case StrategyKind::Igd: return ShuffleStrategy::igd();
    case StrategyKind::RandomReshuffle: return ShuffleStrategy::random_reshuffle(seed);
    case StrategyKind::SingleShuffle: return ShuffleStrategy::single_shuffle(seed);
    case StrategyKind::WithReplacement: return ShuffleStrategy::with_replacement(seed);
    case StrategyKind::HerdingAtOptimum: return herding_at_opt_strategy(p).strategy;
    case StrategyKind::FixedPermutation:
      throw std::invalid_argument("use fixed:<comma-separated permutation>");
  }
  throw std::logic_error("unreachable");
}

SweepSpec default_sweep(const ConstructionBundle& bundle, int points, uint64_t seed) {
  std::vector<EtaInterval> ivs;
  for (const SubConstruction& sc : bundle.per_dimension) ivs.push_back(sc.interval);
  SweepSpec sweep;
  sweep.eta_grid = eta_grid_for_intervals(ivs, points);
  sweep.K_list = {bundle.spec.K};
  sweep.seed = seed;
  return sweep;
}

struct UpperInstance {
  FiniteSumProblem problem;
  Vec x0;
  ShuffleStrategy strategy = ShuffleStrategy::igd();
};

UpperInstance make_upper_instance(const std::string& theorem, const std::string& instance,
                                  const CommonParams& p, const std::string& x0_flag) {
  UpperInstance out;
  std::string inst = instance;
  if (inst.empty()) {
    if (theorem == "small-ub-idhess" || theorem == "herding-at-opt") inst = "twotype";
    else if (theorem == "small-ub-strongcvx") inst = "rotated";
    else inst = "large-lb-concave";
  }
  if (inst == "twotype") {
    const double a = p.mu * std::max(1.0, p.kappa);  // curvature of the common Hessian
    out.problem = FiniteSumProblem::build(make_twotype_components(a, p.G, p.n),
                                          ProblemMeta{a, a, p.G, 0.0, p.G, "twotype"});
    out.x0 = {x0_flag.empty() ? 10.0 : parse_vec(x0_flag)[0]};
  } else if (inst == "rotated") {
    out.problem = FiniteSumProblem::build(
        make_rotated_components(p.mu, p.mu * p.kappa, p.G, p.n),
        ProblemMeta{p.mu, p.mu * p.kappa, p.G, 1.0, std::nullopt, "rotated"});
    out.x0 = x0_flag.empty() ? Vec{1.0, 1.0} : parse_vec(x0_flag);
  } else {
    CommonParams q = p;
    q.theorem = inst;
    const ConstructionBundle b = build_construction(to_spec(q));
    out.problem = b.problem;
    out.x0 = x0_flag.empty() ? b.x0 : parse_vec(x0_flag);
  }
  if (theorem == "herding-at-opt") out.strategy = herding_at_opt_strategy(out.problem).strategy;
  return out;
}

bool is_lower_theorem(const std::string& id) {
  return id == "small-lb-idhess" || id == "small-lb-sc" || id == "small-lb-concave" ||
         id == "large-lb-idhess" || id == "large-lb-concave";
}

int run_verify_one(const std::string& theorem, const CommonParams& params,
                   const std::string& instance, const std::string& x0_flag, int points,
                   int run_K, const std::string& out_path, bool quiet) {
  BoundCheckReport rep;
  if (is_lower_theorem(theorem)) {
    const ConstructionBundle bundle = build_construction(to_spec(params));
    rep = lower_bound_check(bundle.spec, default_sweep(bundle, points, 0));
  } else {
    const UpperInstance inst = make_upper_instance(theorem, instance, params, x0_flag);
    rep = upper_bound_check(theorem, inst.problem, inst.strategy, inst.x0,
                            run_K > 0 ? run_K : params.K);
  }
  if (!out_path.empty()) write_text_file(out_path, report_to_json(rep) + "\n");
  if (!quiet)
    std::printf("[%s] %s: measured=%s bound=%s margin=%s\n", rep.pass ? "PASS" : "FAIL",
                rep.theorem_id.c_str(), format_g17(rep.measured).c_str(),
                format_g17(rep.analytic_bound).c_str(), format_g17(rep.margin).c_str());
  return rep.pass ? 0 : 1;
}

struct QuickCase {
  std::string theorem;
  CommonParams params;
  int run_K = 0;  // upper-bound checks: epochs for the schedule run
};

// One small in-range parameter point per theorem; the full sweep set stays
// under a ~30 s budget on a laptop-class core.
std::vector<QuickCase> quick_profile() {
  return {
      {"small-lb-idhess", {"small-lb-idhess", 8, 40.0, 10, 1.0, 1.0, 1.0}, 0},
      {"small-lb-sc", {"small-lb-sc", 100, 2000.0, 20, 1.0, 1.0, 1.0}, 0},
      {"small-lb-concave", {"small-lb-concave", 20, 400.0, 25, 1.0, 1.0, 1.0}, 0},
      {"large-lb-idhess", {"large-lb-idhess", 8, 10.0, 16, 1.0, 1.0, 1.0}, 0},
      {"large-lb-concave", {"large-lb-concave", 4, 8.0, 32, 1.0, 1.0, 1.0}, 0},
      {"small-ub-idhess", {"small-ub-idhess", 8, 2.0, 10, 1.0, 1.0, 1.0}, 10},
      {"small-ub-strongcvx", {"small-ub-strongcvx", 16, 20.0, 20, 1.0, 1.0, 1.0}, 20},
      {"herding-at-opt", {"herding-at-opt", 8, 2.0, 10, 1.0, 1.0, 1.0}, 10},
      {"large-ub-general", {"large-ub-general", 4, 8.0, 512, 1.0, 1.0, 1.0}, 512},
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shuffle-sgd-lab: permutation-based SGD on adversarial quadratics"};
  app.require_subcommand(1);

  // ---- build ----
  CommonParams build_params;
  std::string build_out = ".";
  auto* cmd_build = app.add_subcommand("build", "construct an instance, write problem/bundle JSON");
  add_construction_options(cmd_build, build_params);
  cmd_build->add_option("--out", build_out, "output directory (default .)");

  // ---- run ----
  CommonParams run_params;
  std::string run_eta = "auto:lb";
  std::string run_strategy = "igd";
  std::string run_x0;
  std::string run_out;
  uint64_t run_seed = 0;
  int run_epochs = 0;
  bool run_trace = false;
  auto* cmd_run = app.add_subcommand("run", "run one strategy on a constructed instance, emit CSV");
  add_construction_options(cmd_run, run_params);
  cmd_run->add_option("--strategy", run_strategy,
                      "igd | rr | ss | with-replacement | herding | fixed:<perm>");
  cmd_run->add_option("--seed", run_seed, "RNG seed for randomized strategies");
  cmd_run->add_option("--eta", run_eta, "step size, or auto:<theorem-id> (default 1/(mu n K))");
  cmd_run->add_option("--epochs", run_epochs, "override run epoch count (default: --K)");
  cmd_run->add_option("--x0", run_x0, "comma-separated start point (default: the bundle's)");
  cmd_run->add_flag("--trace", run_trace, "record every iterate");
  cmd_run->add_option("--out", run_out, "CSV output path (default stdout)");

  // ---- sweep ----
  CommonParams sweep_params;
  int sweep_points = 20;
  std::string sweep_out;
  std::string sweep_format = "csv";
  auto* cmd_sweep = app.add_subcommand("sweep", "step-size sweep, emit the per-eta gap table");
  add_construction_options(cmd_sweep, sweep_params);
  cmd_sweep->add_option("--points", sweep_points, "grid points per regime interval (>= 20)");
  cmd_sweep->add_option("--format", sweep_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd_sweep->add_option("--out", sweep_out, "output path (default stdout)");

  // ---- verify ----
  CommonParams verify_params;
  std::string verify_instance;
  std::string verify_x0;
  std::string verify_out;
  int verify_points = 20;
  int verify_run_K = 0;
  bool verify_all = false;
  bool verify_quick = false;
  auto* cmd_verify = app.add_subcommand("verify", "check a theorem's bound, exit 1 on failure");
  add_construction_options(cmd_verify, verify_params, false);
  cmd_verify->add_option("--instance", verify_instance,
                         "problem for upper-bound checks: twotype | rotated | <lb theorem id>");
  cmd_verify->add_option("--x0", verify_x0, "comma-separated start point override");
  cmd_verify->add_option("--points", verify_points, "grid points per regime interval");
  cmd_verify->add_option("--run-K", verify_run_K, "epochs for upper-bound schedule runs");
  cmd_verify->add_flag("--all", verify_all, "run every theorem");
  cmd_verify->add_flag("--quick", verify_quick, "use the small built-in parameter profile");
  cmd_verify->add_option("--out", verify_out, "report JSON path");

  // ---- figure ----
  auto* cmd_figure = app.add_subcommand("figure", "reproduce the synthetic-experiment CSVs");
  cmd_figure->require_subcommand(1);

  CommonParams traj_params{"small-lb-sc", 1000, 1e4, 20, 1.0, 1.0, 1.0};
  std::string traj_out = "trajectory.csv";
  bool traj_polygon = false;
  auto* cmd_traj = cmd_figure->add_subcommand("trajectory", "2-D IGD trajectory on the rotated block");
  add_construction_options(cmd_traj, traj_params, false);
  cmd_traj->add_flag("--polygon-start", traj_polygon, "start at (u0, v0) instead of the origin");
  cmd_traj->add_option("--out", traj_out, "CSV output path");

  CommonParams gap_params{"small-lb-concave", 100, 1e4, 2500, 1.0, 1.0, 1.0};
  std::string gap_out = "gap_comparison.csv";
  int gap_seeds = 20;
  uint64_t gap_seed = 1;
  std::string gap_K_list;
  auto* cmd_gap = cmd_figure->add_subcommand("gap-comparison",
                                             "final gaps of IGD/RR/herding/with-replacement vs K");
  add_construction_options(cmd_gap, gap_params, false);
  cmd_gap->add_option("--seeds", gap_seeds, "trials per randomized strategy (default 20)");
  cmd_gap->add_option("--seed", gap_seed, "base RNG seed");
  cmd_gap->add_option("--K-list", gap_K_list, "comma-separated epoch counts (default: log grid)");
  cmd_gap->add_option("--out", gap_out, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*cmd_build) {
      const ConstructionBundle b = build_construction(to_spec(build_params));
      namespace fs = std::filesystem;
      fs::create_directories(build_out);
      const std::string prob_path = (fs::path(build_out) / "problem.json").string();
      const std::string bundle_path = (fs::path(build_out) / "bundle.json").string();
      write_text_file(prob_path, problem_to_json(b.problem) + "\n");
      write_text_file(bundle_path, bundle_to_json(b) + "\n");
      std::printf("analytic_bound=%s\n", format_g17(b.analytic_bound).c_str());
      std::printf("wrote %s and %s\n", prob_path.c_str(), bundle_path.c_str());
      return 0;
    }

    if (*cmd_run) {
      const ConstructionBundle b = build_construction(to_spec(run_params));
      const int epochs = run_epochs > 0 ? run_epochs : run_params.K;
      RunConfig cfg;
      cfg.x0 = run_x0.empty() ? b.x0 : parse_vec(run_x0);
      cfg.epochs = epochs;
      cfg.record_every_iterate = run_trace;
      cfg.eta = (run_eta == "auto:lb")
                    ? 1.0 / (run_params.mu * run_params.n * epochs)
                    : resolve_eta(run_eta, b.problem, cfg.x0, epochs, 1.0);
      const ShuffleStrategy strat = resolve_strategy(run_strategy, run_seed, b.problem);
      const RunRecord rec = run(b.problem, strat, cfg);
      const std::string csv =
          run_trace ? trace_to_csv(rec, b.problem.dim()) : run_record_to_csv(rec);
      if (run_out.empty()) std::fputs(csv.c_str(), stdout);
      else write_text_file(run_out, csv);
      if (rec.diverged)
        std::fprintf(stderr, "note: run diverged at epoch %d; last finite iterate kept\n",
                     rec.diverged_epoch);
      return 0;
    }

    if (*cmd_sweep) {
      const ConstructionBundle b = build_construction(to_spec(sweep_params));
      const BoundCheckReport rep =
          lower_bound_check(b.spec, default_sweep(b, sweep_points, 0));
      std::string out;
      if (sweep_format == "json") {
        out = report_to_json(rep) + "\n";
      } else {
        out = "eta,gap,diverged\n";
        for (const PerEtaRow& r : rep.per_eta_table)
          out += format_g17(r.eta) + "," + format_g17(r.gap) + "," +
                 (r.diverged ? "1" : "0") + "\n";
      }
      if (sweep_out.empty()) std::fputs(out.c_str(), stdout);
      else write_text_file(sweep_out, out);
      return 0;
    }

    if (*cmd_verify) {
      if (verify_all) {
        // --all always uses the built-in per-theorem parameter profile.
        int rc = 0;
        for (const QuickCase& qc : quick_profile())
          rc |= run_verify_one(qc.theorem, qc.params, "", "", verify_points, qc.run_K, "", false);
        return rc;
      }
      if (verify_params.theorem.empty())
        throw std::invalid_argument("verify needs --theorem (or --all)");
      if (verify_quick) {
        for (const QuickCase& qc : quick_profile())
          if (qc.theorem == verify_params.theorem)
            return run_verify_one(qc.theorem, qc.params, verify_instance, verify_x0,
                                  verify_points, qc.run_K, verify_out, false);
        throw std::invalid_argument("no quick profile for theorem '" + verify_params.theorem +
                                    "'");
      }
      return run_verify_one(verify_params.theorem, verify_params, verify_instance, verify_x0,
                            verify_points, verify_run_K, verify_out, false);
    }

    if (*cmd_traj) {
      const TrajectoryResult res = reproduce_fig_trajectory(to_spec(traj_params), traj_polygon);
      write_text_file(traj_out, res.csv);
      std::printf("final_radius=%s nondecreasing_after_epoch_2=%s wrote %s\n",
                  format_g17(res.final_radius).c_str(),
                  res.radius_nondecreasing_after_epoch2 ? "true" : "false", traj_out.c_str());
      return 0;
    }

    if (*cmd_gap) {
      GapComparisonConfig cfg;
      cfg.seeds = gap_seeds;
      cfg.seed = gap_seed;
      if (!gap_K_list.empty())
        for (double v : parse_vec(gap_K_list)) cfg.K_list.push_back(static_cast<int>(v));
      const GapComparisonResult res = reproduce_fig_gap_comparison(to_spec(gap_params), cfg);
      write_text_file(gap_out, res.csv);
      std::printf("igd_blowup=%s rr_wr_band=%s herding_below_rr=%s wrote %s\n",
                  res.igd_blowup_at_smallest_K ? "true" : "false",
                  res.rr_wr_within_band ? "true" : "false",
                  res.herding_below_rr ? "true" : "false", gap_out.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
