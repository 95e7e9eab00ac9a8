#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sgdlab/constructions.hpp"
#include "sgdlab/oracles.hpp"
#include "sgdlab/shufflers.hpp"

using namespace sgdlab;
using sgdlab::test::rel_err;

namespace {

constexpr double kPi = 3.14159265358979323846;

RunRecord igd_run(const FiniteSumProblem& p, double eta, int K, Vec x0, bool trace = false) {
  RunConfig cfg;
  cfg.eta = eta;
  cfg.epochs = K;
  cfg.x0 = std::move(x0);
  cfg.record_every_iterate = trace;
  return run(p, ShuffleStrategy::igd(), cfg);
}

}  // namespace

TEST_CASE("small-lb-idhess: component layout and initialization") {
  ConstructionSpec spec{TheoremId::SmallLbIdHess, 2, 4.0, 2, 1.0, 1.0, 1.0};
  const ConstructionBundle b = build_small_lb_idhess(spec);
  REQUIRE(b.per_dimension.size() == 3);

  // Dimension 2 has curvature mu*K = 2 with +-G offsets.
  const FiniteSumProblem& f2 = b.per_dimension[1].problem;
  CHECK(f2.component(0).hessian(0, 0) == doctest::Approx(2.0));
  CHECK(f2.component(0).linear[0] == doctest::Approx(1.0));
  CHECK(f2.component(1).hessian(0, 0) == doctest::Approx(2.0));
  CHECK(f2.component(1).linear[0] == doctest::Approx(-1.0));

  // Aggregated components all share diag(mu, mu K, L).
  for (int i = 0; i < b.problem.count(); ++i) {
    CHECK(b.problem.component(i).hessian(0, 0) == doctest::Approx(1.0));
    CHECK(b.problem.component(i).hessian(1, 1) == doctest::Approx(2.0));
    CHECK(b.problem.component(i).hessian(2, 2) == doctest::Approx(4.0));
  }
  CHECK(b.x0[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(b.x0[1] == 0.0);
  CHECK(b.x0[2] == doctest::Approx(1.0 / std::sqrt(8.0)));
  CHECK(b.problem.grad_error_P() == 0.0);
  CHECK(b.analytic_bound > 0.0);
}

TEST_CASE("small-lb-idhess: odd n uses the three-type layout") {
  ConstructionSpec spec{TheoremId::SmallLbIdHess, 3, 6.0, 3, 1.0, 1.0, 1.0};
  const ConstructionBundle b = build_small_lb_idhess(spec);
  const FiniteSumProblem& f2 = b.per_dimension[1].problem;
  CHECK(f2.component(0).linear[0] == 0.0);
  CHECK(f2.component(1).linear[0] == doctest::Approx(1.0));
  CHECK(f2.component(2).linear[0] == doctest::Approx(-1.0));
  for (int i = 0; i < 3; ++i) CHECK(f2.component(i).hessian(0, 0) == doctest::Approx(3.0));
}

TEST_CASE("construction specs reject out-of-range parameters by inequality name") {
  ConstructionSpec s1{TheoremId::SmallLbIdHess, 2, 4.0, 3, 1.0, 1.0, 1.0};
  CHECK_THROWS_WITH_AS(s1.validate(), doctest::Contains("K <= kappa/2"), std::invalid_argument);

  ConstructionSpec s2{TheoremId::SmallLbSc, 100, 1e4, 1000, 1.0, 1.0, 1.0};
  CHECK_THROWS_WITH_AS(s2.validate(), doctest::Contains("K <= kappa/(16*pi)"),
                       std::invalid_argument);

  ConstructionSpec s3{TheoremId::SmallLbConcave, 3, 64.0, 4, 1.0, 1.0, 1.0};
  CHECK_THROWS_WITH_AS(s3.validate(), doctest::Contains("n >= 4"), std::invalid_argument);

  ConstructionSpec s4{TheoremId::LargeLbIdHess, 4, 8.0, 7, 1.0, 1.0, 1.0};
  CHECK_THROWS_WITH_AS(s4.validate(), doctest::Contains("K >= kappa"), std::invalid_argument);

  ConstructionSpec s5{TheoremId::LargeLbConcave, 4, 8.0, 20, 1.0, 1.0, 1.0};
  CHECK_THROWS_WITH_AS(s5.validate(), doctest::Contains("K >= max(kappa^3/n^2, kappa^(3/2))"),
                       std::invalid_argument);

  ConstructionSpec s6{TheoremId::LargeLbConcave, 12, 8.0, 64, 1.0, 1.0, 1.0};
  CHECK_THROWS_WITH_AS(s6.validate(), doctest::Contains("kappa >= n"), std::invalid_argument);
}

TEST_CASE("u0/v0: signs, monotonicity, and the v-to-u ratio on the moderate grid") {
  const double mu = 1.0, kappa = 2000.0, L = 2000.0, G = 1.0;
  const int n = 100, K = 20;  // K <= kappa/(16 pi) ~= 39.8
  const double lo = 1.0 / (mu * n * K), hi = 2.0 / L;
  REQUIRE(lo < hi);
  double prev_u = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double t = static_cast<double>(i) / 49.0;
    const double eta = std::exp(std::log(lo) + t * (std::log(hi * (1 - 1e-12)) - std::log(lo)));
    const U0V0 uv = compute_u0_v0(eta, mu, L, n, G);
    CHECK(uv.signs_guaranteed);
    CHECK(uv.u0 > 0.0);
    CHECK(uv.v0 < 0.0);
    CHECK(uv.u0 >= prev_u);  // increasing in eta
    CHECK(std::fabs(uv.v0) <= (8.0 * kPi * K / kappa) * uv.u0 * (1.0 + 1e-12));
    prev_u = uv.u0;
  }
  // Outside the certified range the values still come back, flagged.
  const U0V0 tiny = compute_u0_v0(1e-9, mu, L, n, G);
  CHECK(!tiny.signs_guaranteed);
}

TEST_CASE("rotated components: Hessians, averages, and linear-term cancellation") {
  // n=4, mu=1, L'=2 (L=4): f_2's Hessian is diag(2,1).
  const auto cs = make_rotated_components(1.0, 4.0, 1.0, 4);
  CHECK(cs[1].hessian(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cs[1].hessian(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cs[1].hessian(0, 1) == doctest::Approx(0.0).epsilon(1e-12));

  for (int n : {3, 5, 8, 37}) {
    const auto comps = make_rotated_components(1.0, 4.0, 1.0, n);
    Mat avg(2, 2);
    Vec bsum(2, 0.0);
    for (const auto& c : comps) {
      avg += c.hessian;
      bsum = bsum + c.linear;
    }
    avg *= 1.0 / n;
    CHECK(std::fabs(avg(0, 0) - 1.5) < 1e-12);
    CHECK(std::fabs(avg(1, 1) - 1.5) < 1e-12);
    CHECK(std::fabs(avg(0, 1)) < 1e-12);
    CHECK(norm(bsum) < 1e-12 * n);
  }
}

TEST_CASE("polygon closure and rotation relation on the moderate grid") {
  ConstructionSpec spec{TheoremId::SmallLbSc, 100, 2000.0, 20, 1.0, 1.0, 1.0};
  const ConstructionBundle b = build_small_lb_sc(spec);
  const FiniteSumProblem& rotated = b.per_dimension[1].problem;
  const int n = spec.n;
  const double delta = 2.0 * kPi / n;
  const double c = std::cos(delta), s = std::sin(delta);
  const double lo = 1.0 / (spec.mu * n * spec.K), hi = 2.0 / spec.L();
  REQUIRE(lo < hi);
  for (int i = 0; i < 20; ++i) {
    const double t = static_cast<double>(i) / 19.0;
    const double eta = std::exp(std::log(lo) + t * (std::log(hi * (1 - 1e-12)) - std::log(lo)));
    const U0V0 uv = compute_u0_v0(eta, spec.mu, spec.L(), n, spec.G);
    const RunRecord rec = igd_run(rotated, eta, 1, {uv.u0, uv.v0}, true);
    const double start_norm = norm(rec.epoch_starts.front());
    CHECK(norm(rec.final - rec.epoch_starts.front()) <= 1e-9 * start_norm);
    for (size_t j = 1; j < rec.full_trace.size(); ++j) {
      const Vec& prev = rec.full_trace[j - 1].x;
      const Vec rotated_prev = {c * prev[0] - s * prev[1], s * prev[0] + c * prev[1]};
      CHECK(norm(rec.full_trace[j].x - rotated_prev) <= 1e-9 * start_norm);
    }
  }
}

TEST_CASE("small-lb-concave: layout, averaged coefficient, blow-up bound") {
  ConstructionSpec spec{TheoremId::SmallLbConcave, 4, 400.0, 25, 1.0, 1.0, 1.0};
  const ConstructionBundle b = build_small_lb_concave(spec);
  const double L = spec.L();
  const FiniteSumProblem& f2 = b.per_dimension[1].problem;
  CHECK(f2.component(0).hessian(0, 0) == doctest::Approx(L));
  CHECK(f2.component(0).linear[0] == doctest::Approx(1.0));
  CHECK(f2.component(2).hessian(0, 0) == doctest::Approx(-L / 2.0));
  CHECK(f2.component(2).linear[0] == doctest::Approx(-1.0));
  // F2(1) = L/8 (averaged quadratic-form coefficient; the Hessian is L/4).
  CHECK(f2.value({1.0}) - f2.value({0.0}) == doctest::Approx(L / 8.0));
  CHECK(f2.averaged_hessian()(0, 0) == doctest::Approx(L / 4.0));

  // Blow-up invariant: nonnegative epoch starts and the exponential floor.
  const int n = spec.n, K = spec.K;
  for (double mul : {1.0, 2.0, 5.0}) {
    const double eta = mul / (spec.mu * n * K);
    const RunRecord rec = igd_run(f2, eta, K, {0.0});
    for (const Vec& xs : rec.epoch_starts) CHECK(xs[0] >= -1e-15);
    const double floor_bound =
        (spec.G / (9.0 * L)) * std::pow(1.0 + eta * L / 2.0, n / 2.0);
    CHECK(rec.final[0] >= floor_bound * (1.0 - 1e-12));
  }
}

TEST_CASE("small-lb-concave: odd n appends one zero component") {
  ConstructionSpec spec{TheoremId::SmallLbConcave, 5, 400.0, 25, 1.0, 1.0, 1.0};
  const ConstructionBundle b = build_small_lb_concave(spec);
  const FiniteSumProblem& f2 = b.per_dimension[1].problem;
  CHECK(f2.count() == 5);
  CHECK(f2.component(4).hessian(0, 0) == 0.0);
  CHECK(f2.component(4).linear[0] == 0.0);
  CHECK(b.analytic_bound > 0.0);
}

TEST_CASE("large-lb-idhess: curvatures and odd-n three-type branch") {
  ConstructionSpec even{TheoremId::LargeLbIdHess, 4, 10.0, 16, 1.0, 1.0, 1.0};
  const ConstructionBundle be = build_large_lb_idhess(even);
  CHECK(be.per_dimension[1].problem.component(0).hessian(0, 0) == doctest::Approx(5.0));
  const AuditReport ae = audit_assumptions(be.problem, AuditOptions{be.x0, 500});
  CHECK(ae.identical_hessians);
  CHECK(ae.all_pass());
  CHECK(be.problem.grad_error_P() == 0.0);

  ConstructionSpec odd{TheoremId::LargeLbIdHess, 3, 10.0, 16, 1.0, 1.0, 1.0};
  const ConstructionBundle bo = build_large_lb_idhess(odd);
  const FiniteSumProblem& f2 = bo.per_dimension[1].problem;
  CHECK(f2.component(0).linear[0] == 0.0);
  CHECK(f2.component(1).linear[0] == doctest::Approx(1.0));
  CHECK(f2.component(2).linear[0] == doctest::Approx(-1.0));
}

TEST_CASE("large-lb-concave: four blocks, a-range, and the pq product bound") {
  ConstructionSpec spec{TheoremId::LargeLbConcave, 8, 8.0, 23, 1.0, 1.0, 1.0};
  const ConstructionBundle b = build_large_lb_concave(spec);
  const FiniteSumProblem& f2 = b.per_dimension[1].problem;
  const double L = spec.L();
  const double a = L - 4.0 * spec.mu;
  CHECK(a >= 0.0);
  CHECK(a < L);
  CHECK(f2.component(0).linear[0] == doctest::Approx(1.0));   // +G block
  CHECK(f2.component(2).hessian(0, 0) == doctest::Approx(L)); // L block
  CHECK(f2.component(4).linear[0] == doctest::Approx(-1.0));  // -G block
  CHECK(f2.component(6).hessian(0, 0) == doctest::Approx(-a));
  CHECK(b.problem.grad_error_P() == doctest::Approx(spec.kappa));

  // pq <= e^(-1/K) for eta >= 1/(mu n K) within the moderate regime.
  const double lo = 1.0 / (spec.mu * spec.n * spec.K), hi = 1.0 / (spec.n * L);
  for (int i = 0; i < 25; ++i) {
    const double eta = lo + (hi * (1 - 1e-12) - lo) * i / 24.0;
    const PqPair pq = large_concave_pq(spec.mu, L, spec.n, eta);
    CHECK(pq.p * pq.q <= std::exp(-1.0 / spec.K) * (1.0 + 1e-12));
  }
}

TEST_CASE("large-lb-concave: n not divisible by four pads with zero components") {
  ConstructionSpec spec{TheoremId::LargeLbConcave, 6, 6.0, 16, 1.0, 1.0, 1.0};
  const ConstructionBundle b = build_large_lb_concave(spec);
  const FiniteSumProblem& f2 = b.per_dimension[1].problem;
  CHECK(f2.count() == 6);
  CHECK(f2.component(4).hessian(0, 0) == 0.0);
  CHECK(f2.component(5).hessian(0, 0) == 0.0);
  CHECK(b.analytic_bound > 0.0);
}

TEST_CASE("aggregate_dimensions: block structure, gap additivity, mismatched n") {
  auto p1 = FiniteSumProblem::build(make_twotype_components(2.0, 1.0, 4));
  auto p2 = FiniteSumProblem::build(make_identical_components(3.0, 4));
  auto [agg, x0] = aggregate_dimensions({{p1, {0.5}}, {p2, {-1.0}}});
  CHECK(agg.dim() == 2);
  CHECK(x0 == Vec{0.5, -1.0});
  CHECK(agg.component(0).hessian(0, 0) == doctest::Approx(2.0));
  CHECK(agg.component(0).hessian(1, 1) == doctest::Approx(3.0));
  CHECK(agg.component(0).hessian(0, 1) == 0.0);

  SplitMix64 g(17);
  for (int trial = 0; trial < 25; ++trial) {
    const Vec x = {4.0 * g.uniform01() - 2.0, 4.0 * g.uniform01() - 2.0};
    const double sum = optimality_gap(p1, {x[0]}) + optimality_gap(p2, {x[1]});
    CHECK(rel_err(optimality_gap(agg, x), sum) < 1e-12);
  }

  auto p3 = FiniteSumProblem::build(make_identical_components(1.0, 5));
  CHECK_THROWS_WITH_AS(aggregate_dimensions({{p1, {0.0}}, {p3, {0.0}}}),
                       doctest::Contains("mismatched n"), std::invalid_argument);
}

TEST_CASE("separability: IGD on the aggregate equals per-dimension runs") {
  for (TheoremId id : {TheoremId::SmallLbIdHess, TheoremId::LargeLbIdHess}) {
    ConstructionSpec spec;
    spec.theorem = id;
    spec.n = 6;
    spec.kappa = 20.0;
    spec.K = (id == TheoremId::LargeLbIdHess) ? 24 : 10;
    spec.G = 1.0;
    spec.mu = 1.0;
    const ConstructionBundle b = build_construction(spec);
    const double eta = 1.0 / (spec.mu * spec.n * spec.K);
    const RunRecord whole = igd_run(b.problem, eta, spec.K, b.x0);
    int off = 0;
    for (const SubConstruction& sc : b.per_dimension) {
      const RunRecord part = igd_run(sc.problem, eta, spec.K, sc.x0);
      for (int j = 0; j < sc.problem.dim(); ++j)
        CHECK(rel_err(whole.final[off + j], part.final[j]) < 1e-12);
      off += sc.problem.dim();
    }
  }
}

TEST_CASE("regime intervals cover (0, inf); disjoint when all non-empty") {
  const std::vector<ConstructionSpec> specs = {
      {TheoremId::SmallLbIdHess, 8, 40.0, 10, 1.0, 1.0, 1.0},
      {TheoremId::SmallLbSc, 100, 1e4, 20, 1.0, 1.0, 1.0},  // empty moderate regime
      {TheoremId::SmallLbSc, 100, 2000.0, 20, 1.0, 1.0, 1.0},
      {TheoremId::SmallLbConcave, 20, 400.0, 25, 1.0, 1.0, 1.0},
      {TheoremId::LargeLbIdHess, 8, 10.0, 16, 1.0, 1.0, 1.0},
      {TheoremId::LargeLbConcave, 4, 8.0, 32, 1.0, 1.0, 1.0},
  };
  for (const ConstructionSpec& spec : specs) {
    const ConstructionBundle b = build_construction(spec);
    CHECK(b.per_dimension.front().interval.lo == 0.0);
    CHECK(std::isinf(b.per_dimension.back().interval.hi));
    bool all_nonempty = true;
    for (const SubConstruction& sc : b.per_dimension) all_nonempty &= !sc.interval.empty();
    // Coverage: every eta is inside some regime interval.
    SplitMix64 g(3);
    for (int i = 0; i < 200; ++i) {
      const double eta = std::pow(10.0, 8.0 * g.uniform01() - 6.0);
      bool covered = false;
      for (const SubConstruction& sc : b.per_dimension)
        covered |= !sc.interval.empty() && sc.interval.contains(eta);
      CHECK(covered);
    }
    if (all_nonempty) {
      for (size_t i = 0; i + 1 < b.per_dimension.size(); ++i)
        CHECK(b.per_dimension[i].interval.hi == b.per_dimension[i + 1].interval.lo);
    }
  }
}

TEST_CASE("wrong-builder dispatch is rejected") {
  ConstructionSpec spec{TheoremId::SmallLbIdHess, 4, 8.0, 2, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(build_small_lb_sc(spec), std::invalid_argument);
}

TEST_CASE("every construction passes its own assumption audit") {
  const std::vector<ConstructionSpec> specs = {
      {TheoremId::SmallLbIdHess, 8, 40.0, 10, 1.0, 1.0, 1.0},
      {TheoremId::SmallLbSc, 100, 2000.0, 20, 1.0, 1.0, 1.0},
      {TheoremId::SmallLbConcave, 20, 400.0, 25, 1.0, 1.0, 1.0},
      {TheoremId::SmallLbConcave, 21, 400.0, 25, 1.0, 1.0, 1.0},  // padded odd n
      {TheoremId::LargeLbIdHess, 8, 10.0, 16, 1.0, 1.0, 1.0},
      {TheoremId::LargeLbIdHess, 9, 10.0, 16, 1.0, 1.0, 1.0},     // three-type branch
      {TheoremId::LargeLbConcave, 4, 8.0, 32, 1.0, 1.0, 1.0},
      {TheoremId::LargeLbConcave, 6, 6.0, 16, 1.0, 1.0, 1.0},     // zero-padded blocks
  };
  for (const ConstructionSpec& spec : specs) {
    const ConstructionBundle b = build_construction(spec);
    const AuditReport a = audit_assumptions(b.problem, AuditOptions{b.x0, 1000});
    INFO(to_string(spec.theorem), " n=", spec.n);
    CHECK(a.all_pass());
    CHECK(a.mu_measured >= b.problem.mu() * (1.0 - 1e-9));
    CHECK(a.ell_measured <= b.problem.ell() * (1.0 + 1e-9));
    CHECK(b.analytic_bound > 0.0);
    CHECK(b.audited_p_required <= b.problem.grad_error_P() * (1.0 + 1e-9) + 1e-12);
  }
}

TEST_CASE("u0/v0 solve the one-step rotation system (independent linear solve)") {
  const double mu = 1.0, L = 2000.0, G = 1.0;
  const double Lp = L / 2.0;
  for (int n : {5, 32, 100}) {
    const double delta = 2.0 * kPi / n;
    const double c = std::cos(delta), s = std::sin(delta);
    for (double eta : {1e-4, 4e-4, 9e-4}) {
      // (cos d - (1-eta mu)) u - sin d v = eta G ; sin d u + (cos d - (1-eta L')) v = 0
      Mat A(2, 2);
      A(0, 0) = c - (1.0 - eta * mu);
      A(0, 1) = -s;
      A(1, 0) = s;
      A(1, 1) = c - (1.0 - eta * Lp);
      // 2x2 inverse; the system is not symmetric so Cholesky does not apply.
      const double det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
      REQUIRE(std::fabs(det) > 1e-300);
      const double u_direct = (eta * G) * A(1, 1) / det;
      const double v_direct = -(eta * G) * A(1, 0) / det;
      const U0V0 uv = compute_u0_v0(eta, mu, L, n, G);
      CHECK(sgdlab::test::rel_err(uv.u0, u_direct) < 1e-10);
      CHECK(sgdlab::test::rel_err(uv.v0, v_direct) < 1e-10);
    }
  }
}

TEST_CASE("moderate-regime constant is sharp at eta = 1/(mu n K)") {
  // At the canonical step size, the exact final iterate of the two-block
  // dimension stays within a single order of magnitude of its regime bound.
  const double mu = 1.0, kappa = 40.0, G = 1.0;
  const int n = 8, K = 10;
  ConstructionSpec spec{TheoremId::SmallLbIdHess, n, kappa, K, G, mu, 1.0};
  const ConstructionBundle b = build_small_lb_idhess(spec);
  const double eta = 1.0 / (mu * n * K);
  const double x = closed_form_twotype({mu * K, G, n, eta, K, 0.0});
  const double gap = 0.5 * mu * K * x * x;
  const double bound = b.per_dimension[1].gap_bound;
  CHECK(gap >= bound);
  CHECK(gap < 10.0 * bound);
}
