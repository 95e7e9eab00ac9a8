#include "sgdlab/constructions.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sgdlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void spec_violation(const std::string& inequality, const std::string& detail) {
  throw std::invalid_argument("construction parameter violation: " + inequality +
                              " required (" + detail + ")");
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

QuadraticComponent comp1d(double curvature, double linear) {
  QuadraticComponent c;
  c.hessian = Mat(1, 1);
  c.hessian(0, 0) = curvature;
  c.linear = {linear};
  return c;
}

}  // namespace

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::SmallLbIdHess: return "small-lb-idhess";
    case TheoremId::SmallLbSc: return "small-lb-sc";
    case TheoremId::SmallLbConcave: return "small-lb-concave";
    case TheoremId::LargeLbIdHess: return "large-lb-idhess";
    case TheoremId::LargeLbConcave: return "large-lb-concave";
  }
  return "?";
}

TheoremId theorem_id_from_string(const std::string& s) {
  if (s == "small-lb-idhess") return TheoremId::SmallLbIdHess;
  if (s == "small-lb-sc") return TheoremId::SmallLbSc;
  if (s == "small-lb-concave") return TheoremId::SmallLbConcave;
  if (s == "large-lb-idhess") return TheoremId::LargeLbIdHess;
  if (s == "large-lb-concave") return TheoremId::LargeLbConcave;
  throw std::invalid_argument("unknown construction theorem id '" + s + "'");
}

void ConstructionSpec::validate() const {
  if (n < 1) spec_violation("n >= 1", "n=" + std::to_string(n));
  if (K < 1) spec_violation("K >= 1", "K=" + std::to_string(K));
  if (!(G > 0.0)) spec_violation("G > 0", "G=" + num(G));
  if (!(mu > 0.0)) spec_violation("mu > 0", "mu=" + num(mu));
  if (!(kappa > 0.0)) spec_violation("kappa > 0", "kappa=" + num(kappa));
  switch (theorem) {
    case TheoremId::SmallLbIdHess:
      if (n < 2) spec_violation("n >= 2", "n=" + std::to_string(n));
      if (kappa < 2.0) spec_violation("kappa >= 2", "kappa=" + num(kappa));
      if (K > kappa / 2.0)
        spec_violation("K <= kappa/2", "K=" + std::to_string(K) + ", kappa/2=" + num(kappa / 2.0));
      break;
    case TheoremId::SmallLbSc:
      if (n < 3) spec_violation("n >= 3", "n=" + std::to_string(n));
      if (kappa < 2.0) spec_violation("kappa >= 2", "kappa=" + num(kappa));
      if (K > kappa / (16.0 * kPi))
        spec_violation("K <= kappa/(16*pi)",
                       "K=" + std::to_string(K) + ", kappa/(16*pi)=" + num(kappa / (16.0 * kPi)));
      break;
    case TheoremId::SmallLbConcave:
      if (n < 4) spec_violation("n >= 4", "n=" + std::to_string(n));
      if (kappa < 4.0) spec_violation("kappa >= 4", "kappa=" + num(kappa));
      if (K > kappa / 4.0)
        spec_violation("K <= kappa/4", "K=" + std::to_string(K) + ", kappa/4=" + num(kappa / 4.0));
      break;
    case TheoremId::LargeLbIdHess:
      if (n < 2) spec_violation("n >= 2", "n=" + std::to_string(n));
      if (kappa < 2.0) spec_violation("kappa >= 2", "kappa=" + num(kappa));
      if (K < kappa)
        spec_violation("K >= kappa", "K=" + std::to_string(K) + ", kappa=" + num(kappa));
      break;
    case TheoremId::LargeLbConcave: {
      if (n < 4) spec_violation("n >= 4", "n=" + std::to_string(n));
      if (kappa < n)
        spec_violation("kappa >= n", "kappa=" + num(kappa) + ", n=" + std::to_string(n));
      const double lo = std::max(kappa * kappa * kappa / (static_cast<double>(n) * n),
                                 std::pow(kappa, 1.5));
      if (K < lo)
        spec_violation("K >= max(kappa^3/n^2, kappa^(3/2))",
                       "K=" + std::to_string(K) + ", max=" + num(lo));
      break;
    }
  }
}

std::vector<QuadraticComponent> make_identical_components(double curvature, int n) {
  std::vector<QuadraticComponent> cs;
  cs.reserve(n);
  for (int i = 0; i < n; ++i) cs.push_back(comp1d(curvature, 0.0));
  return cs;
}

std::vector<QuadraticComponent> make_twotype_components(double a, double G, int n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("two-type components need even n, got n=" + std::to_string(n));
  std::vector<QuadraticComponent> cs;
  cs.reserve(n);
  for (int i = 0; i < n / 2; ++i) cs.push_back(comp1d(a, G));
  for (int i = 0; i < n / 2; ++i) cs.push_back(comp1d(a, -G));
  return cs;
}

std::vector<QuadraticComponent> make_threetype_components(double a, double G, int n) {
  if (n < 3 || n % 2 != 1)
    throw std::invalid_argument("three-type components need odd n >= 3, got n=" + std::to_string(n));
  std::vector<QuadraticComponent> cs;
  cs.reserve(n);
  cs.push_back(comp1d(a, 0.0));
  for (int i = 0; i < (n - 1) / 2; ++i) cs.push_back(comp1d(a, G));
  for (int i = 0; i < (n - 1) / 2; ++i) cs.push_back(comp1d(a, -G));
  return cs;
}

std::vector<QuadraticComponent> make_rotated_components(double mu, double L, double G, int n) {
  if (n < 3) throw std::invalid_argument("rotated components need n >= 3");
  const double Lp = L / 2.0;
  const double delta = 2.0 * kPi / n;
  std::vector<QuadraticComponent> cs;
  cs.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double th = delta * i;
    const double c = std::cos(th), s = std::sin(th);
    QuadraticComponent q;
    q.hessian = Mat(2, 2);
    // R diag(mu, L') R^T for the rotation by th.
    q.hessian(0, 0) = mu * c * c + Lp * s * s;
    q.hessian(0, 1) = (mu - Lp) * s * c;
    q.hessian(1, 0) = q.hessian(0, 1);
    q.hessian(1, 1) = mu * s * s + Lp * c * c;
    q.linear = {-G * c, -G * s};  // R * (-G, 0)
    cs.push_back(std::move(q));
  }
  return cs;
}

std::vector<QuadraticComponent> make_concave_pair_components(double L, double G, int n) {
  if (n < 4) throw std::invalid_argument("concave pair components need n >= 4");
  const int m = (n % 2 == 0) ? n : n - 1;
  std::vector<QuadraticComponent> cs;
  cs.reserve(n);
  for (int i = 0; i < m / 2; ++i) cs.push_back(comp1d(L, G));
  for (int i = 0; i < m / 2; ++i) cs.push_back(comp1d(-L / 2.0, -G));
  if (m < n) cs.push_back(comp1d(0.0, 0.0));
  return cs;
}

std::vector<QuadraticComponent> make_fourblock_components(double mu, double L, double G, int n) {
  if (n < 4) throw std::invalid_argument("four-block components need n >= 4");
  const int m = 4 * (n / 4);
  const double a = L - 4.0 * mu;
  std::vector<QuadraticComponent> cs;
  cs.reserve(n);
  for (int i = 0; i < m / 4; ++i) cs.push_back(comp1d(0.0, G));
  for (int i = 0; i < m / 4; ++i) cs.push_back(comp1d(L, 0.0));
  for (int i = 0; i < m / 4; ++i) cs.push_back(comp1d(0.0, -G));
  for (int i = 0; i < m / 4; ++i) cs.push_back(comp1d(-a, 0.0));
  for (int i = m; i < n; ++i) cs.push_back(comp1d(0.0, 0.0));
  return cs;
}

U0V0 compute_u0_v0(double eta, double mu, double L, int n, double G) {
  if (n < 3) throw std::invalid_argument("compute_u0_v0 needs n >= 3");
  if (!(eta > 0.0)) throw std::invalid_argument("compute_u0_v0 needs eta > 0");
  const double Lp = L / 2.0;
  const double delta = 2.0 * kPi / n;
  const double one_minus_cos = 1.0 - std::cos(delta);
  const double denom =
      one_minus_cos * (2.0 - (mu + Lp) * eta) + eta * eta * mu * Lp;
  if (std::fabs(denom) < 1e-300)
    throw std::domain_error("compute_u0_v0 denominator vanished at eta=" + num(eta));
  U0V0 r;
  r.u0 = (eta * Lp - one_minus_cos) / denom * eta * G;
  r.v0 = -std::sin(delta) / denom * eta * G;
  r.signs_guaranteed = (eta * Lp > one_minus_cos) && (eta < 2.0 / L);
  return r;
}

std::pair<FiniteSumProblem, Vec> aggregate_dimensions(
    const std::vector<std::pair<FiniteSumProblem, Vec>>& subs, const ProblemMeta& meta) {
  if (subs.empty()) throw std::invalid_argument("aggregate_dimensions needs sub-problems");
  const int n = subs.front().first.count();
  for (const auto& [sp, x0] : subs) {
    if (sp.count() != n)
      throw std::invalid_argument("mismatched n across sub-problems: " + std::to_string(n) +
                                  " vs " + std::to_string(sp.count()));
    if (static_cast<int>(x0.size()) != sp.dim())
      throw std::invalid_argument("sub-problem x0 dimension mismatch");
  }

  std::vector<QuadraticComponent> agg(n);
  Vec x0;
  for (int i = 0; i < n; ++i) {
    std::vector<Mat> blocks;
    Vec lin;
    double off = 0.0;
    for (const auto& [sp, sx0] : subs) {
      const QuadraticComponent& c = sp.component(i);
      blocks.push_back(c.hessian);
      lin.insert(lin.end(), c.linear.begin(), c.linear.end());
      off += c.offset;
    }
    agg[i].hessian = block_diag(blocks);
    agg[i].linear = std::move(lin);
    agg[i].offset = off;
  }
  for (const auto& [sp, sx0] : subs) x0.insert(x0.end(), sx0.begin(), sx0.end());
  return {FiniteSumProblem::build(std::move(agg), meta), std::move(x0)};
}

namespace {

struct DimSpec {
  std::vector<QuadraticComponent> components;
  double x0 = 0.0;
  EtaInterval interval;
  double gap_bound = 0.0;
  std::vector<BoundConstant> constants;
  ProblemMeta meta;
};

ConstructionBundle assemble(const ConstructionSpec& spec, std::vector<DimSpec> dims,
                            const ProblemMeta& agg_meta) {
  ConstructionBundle b;
  b.spec = spec;

  std::vector<std::pair<FiniteSumProblem, Vec>> subs;
  for (DimSpec& d : dims)
    subs.emplace_back(FiniteSumProblem::build(d.components, d.meta), Vec{d.x0});
  // The rotated dimension is 2-D; it is passed in pre-built below, so this
  // helper only handles the all-1D theorems. SmallLbSc assembles by hand.
  auto [problem, x0] = aggregate_dimensions(subs, agg_meta);
  b.problem = std::move(problem);
  b.x0 = std::move(x0);
  for (size_t i = 0; i < dims.size(); ++i) {
    SubConstruction sc{subs[i].first, subs[i].second, dims[i].interval, dims[i].gap_bound,
                       dims[i].constants};
    b.per_dimension.push_back(std::move(sc));
  }

  b.analytic_bound = kInf;
  for (const SubConstruction& sc : b.per_dimension)
    if (!sc.interval.empty()) b.analytic_bound = std::min(b.analytic_bound, sc.gap_bound);
  if (!(b.analytic_bound > 0.0) || !std::isfinite(b.analytic_bound))
    throw std::runtime_error("analytic bound must be positive and finite");

  AuditReport audit = audit_assumptions(b.problem, AuditOptions{b.x0, 1000});
  b.audited_g_required = audit.g_required_probes;
  b.audited_p_required = audit.p_required_eigen;
  return b;
}

ProblemMeta dim_meta(const ConstructionSpec& spec, const std::string& tag, double G, double P) {
  ProblemMeta m;
  m.grad_error_G = G;
  m.grad_error_P = P;
  m.construction_id = to_string(spec.theorem) + "/" + tag;
  return m;
}

ProblemMeta bundle_meta(const ConstructionSpec& spec, double G, double P) {
  ProblemMeta m;
  m.mu = spec.mu;
  m.ell = spec.L();
  m.grad_error_G = G;
  m.grad_error_P = P;
  m.construction_id = to_string(spec.theorem);
  return m;
}

}  // namespace

ConstructionBundle build_construction(const ConstructionSpec& spec) {
  switch (spec.theorem) {
    case TheoremId::SmallLbIdHess: return build_small_lb_idhess(spec);
    case TheoremId::SmallLbSc: return build_small_lb_sc(spec);
    case TheoremId::SmallLbConcave: return build_small_lb_concave(spec);
    case TheoremId::LargeLbIdHess: return build_large_lb_idhess(spec);
    case TheoremId::LargeLbConcave: return build_large_lb_concave(spec);
  }
  throw std::logic_error("unreachable theorem id");
}

ConstructionBundle build_small_lb_idhess(const ConstructionSpec& spec) {
  if (spec.theorem != TheoremId::SmallLbIdHess)
    throw std::invalid_argument("wrong builder for theorem " + to_string(spec.theorem));
  spec.validate();
  const double mu = spec.mu, L = spec.L(), G = spec.G;
  const int n = spec.n, K = spec.K;
  const double eta_lo = 1.0 / (mu * n * K);
  const double rate = G * G / (mu * K);

  std::vector<DimSpec> dims(3);

  dims[0].components = make_identical_components(mu, n);
  dims[0].x0 = G / (mu * std::sqrt(static_cast<double>(K)));
  dims[0].interval = {0.0, eta_lo};
  dims[0].gap_bound = rate / 32.0;
  dims[0].constants = {{"1/32, from mu/2*(x0/4)^2 with x0=G/(mu sqrt(K))", 1.0 / 32.0}};
  dims[0].meta = dim_meta(spec, "small-step", 0.0, 0.0);

  const double c_even = 0.5 * std::pow((1.0 - std::exp(-1.0)) * (1.0 - std::exp(-0.5)) / 2.0, 2);
  const double c_odd = 0.5 * std::pow((1.0 - std::exp(-1.0)) * std::pow(1.0 - std::exp(-0.25), 2), 2);
  const bool even = (n % 2 == 0);
  dims[1].components = even ? make_twotype_components(mu * K, G, n)
                            : make_threetype_components(mu * K, G, n);
  dims[1].x0 = 0.0;
  dims[1].interval = {eta_lo, 2.0 / L};
  dims[1].gap_bound = (even ? c_even : c_odd) * rate;
  dims[1].constants = {
      even ? BoundConstant{"((1-1/e)*(1-exp(-1/2))/2)^2/2 * G^2/(mu K)", c_even}
           : BoundConstant{"((1-1/e)*(1-exp(-1/4))^2)^2/2 * G^2/(mu K)", c_odd}};
  dims[1].meta = dim_meta(spec, "moderate-step", G, 0.0);

  dims[2].components = make_identical_components(L, n);
  dims[2].x0 = G / std::sqrt(mu * L * K);
  dims[2].interval = {2.0 / L, kInf};
  dims[2].gap_bound = rate / 2.0;
  dims[2].constants = {{"1/2, from L/2*x0^2 with x0=G/sqrt(mu L K)", 0.5}};
  dims[2].meta = dim_meta(spec, "large-step", 0.0, 0.0);

  return assemble(spec, std::move(dims), bundle_meta(spec, G, 0.0));
}

ConstructionBundle build_small_lb_sc(const ConstructionSpec& spec) {
  if (spec.theorem != TheoremId::SmallLbSc)
    throw std::invalid_argument("wrong builder for theorem " + to_string(spec.theorem));
  spec.validate();
  const double mu = spec.mu, L = spec.L(), G = spec.G, kap = spec.kappa;
  const int n = spec.n, K = spec.K;
  const double eta_lo = 1.0 / (mu * n * K);
  const double m = std::min(1.0, kap / (static_cast<double>(K) * K));
  const double rate = (L * G * G / (mu * mu)) * m * m;

  ConstructionBundle b;
  b.spec = spec;

  std::vector<std::pair<FiniteSumProblem, Vec>> subs;

  {
    FiniteSumProblem p = FiniteSumProblem::build(make_identical_components(mu, n),
                                                 dim_meta(spec, "small-step", 0.0, 0.0));
    subs.emplace_back(std::move(p), Vec{std::sqrt(kap) * m * G / mu});
  }
  {
    FiniteSumProblem p = FiniteSumProblem::build(make_rotated_components(mu, L, G, n),
                                                 dim_meta(spec, "moderate-step", G, 1.0));
    const U0V0 uv = compute_u0_v0(eta_lo, mu, L, n, G);
    subs.emplace_back(std::move(p), Vec{uv.u0, uv.v0});
  }
  {
    FiniteSumProblem p = FiniteSumProblem::build(make_identical_components(L, n),
                                                 dim_meta(spec, "large-step", 0.0, 0.0));
    subs.emplace_back(std::move(p), Vec{(G / mu) * m});
  }

  auto [problem, x0] = aggregate_dimensions(subs, bundle_meta(spec, G, 1.0));
  b.problem = std::move(problem);
  b.x0 = std::move(x0);

  const double c_mod = std::pow((1.0 - 2.0 * std::exp(-1.0)) / (32.0 * kPi * kPi), 2) / 8.0;
  b.per_dimension.push_back({subs[0].first,
                             subs[0].second,
                             {0.0, eta_lo},
                             rate / 32.0,
                             {{"1/32 * (L G^2/mu^2) min(1,kappa/K^2)^2", 1.0 / 32.0}}});
  b.per_dimension.push_back(
      {subs[1].first,
       subs[1].second,
       {eta_lo, 2.0 / L},
       c_mod * rate,
       {{"L/8 * ((1-2/e)/(32 pi^2))^2 * (G/mu)^2 min(1,kappa/K^2)^2", c_mod}}});
  b.per_dimension.push_back({subs[2].first,
                             subs[2].second,
                             {2.0 / L, kInf},
                             rate / 2.0,
                             {{"1/2 * (L G^2/mu^2) min(1,kappa/K^2)^2", 0.5}}});

  b.analytic_bound = kInf;
  for (const SubConstruction& sc : b.per_dimension)
    if (!sc.interval.empty()) b.analytic_bound = std::min(b.analytic_bound, sc.gap_bound);
  if (!(b.analytic_bound > 0.0) || !std::isfinite(b.analytic_bound))
    throw std::runtime_error("analytic bound must be positive and finite");

  AuditReport audit = audit_assumptions(b.problem, AuditOptions{b.x0, 1000});
  b.audited_g_required = audit.g_required_probes;
  b.audited_p_required = audit.p_required_eigen;
  return b;
}

ConstructionBundle build_small_lb_concave(const ConstructionSpec& spec) {
  if (spec.theorem != TheoremId::SmallLbConcave)
    throw std::invalid_argument("wrong builder for theorem " + to_string(spec.theorem));
  spec.validate();
  const double mu = spec.mu, L = spec.L(), G = spec.G, D = spec.D;
  const int n = spec.n, K = spec.K;
  const double eta_lo = 1.0 / (mu * n * K);
  const int m = (n % 2 == 0) ? n : n - 1;  // active two-block components

  std::vector<DimSpec> dims(2);
  dims[0].components = make_identical_components(mu, n);
  dims[0].x0 = D;
  dims[0].interval = {0.0, eta_lo};
  dims[0].gap_bound = mu * D * D / 32.0;
  dims[0].constants = {{"1/32 * mu D^2", 1.0 / 32.0}};
  dims[0].meta = dim_meta(spec, "small-step", 0.0, 0.0);

  // Blow-up bound: final >= (G/9L)(1 + eta L/2)^(m/2) once the growth factor
  // clears 9/4 at the left regime endpoint; the exponent uses the active
  // component count m (equal to n except in the padded odd branch).
  const double grow_lo = std::pow(1.0 + eta_lo * L / 2.0, m / 2.0);
  double blow_bound;
  std::vector<BoundConstant> blow_constants;
  if (grow_lo >= 2.25) {
    blow_bound = (L / 8.0) * std::pow(G / (9.0 * L) * grow_lo, 2);
    blow_constants = {{"L/8 * (G/(9L))^2 * (1+L/(2 mu n K))^m, m=" + std::to_string(m),
                       1.0 / 648.0}};
  } else {
    // Padded odd-n edge where (1+eta L/2)^(m/2) < 9/4: keep the exact
    // epoch-map additive term at the regime endpoint instead.
    const double c_lo = (G / L) * (grow_lo - 2.0);
    if (!(c_lo > 0.0))
      spec_violation("(1+L/(2 mu n K))^(m/2) > 2 (padded odd-n blow-up)",
                     "value=" + num(grow_lo) + ", m=" + std::to_string(m));
    blow_bound = (L / 8.0) * c_lo * c_lo;
    blow_constants = {{"L/8 * (G/L)^2 * ((1+L/(2 mu n K))^(m/2) - 2)^2 (padded)", blow_bound}};
  }
  // Zero-padding the odd branch shrinks the averaged curvature to (L/4)(m/n),
  // so the gradient-error ratio of the convex block rises from 3 to 4n/m - 1.
  const double p_pad = 4.0 * n / m - 1.0;
  dims[1].components = make_concave_pair_components(L, G, n);
  dims[1].x0 = 0.0;
  dims[1].interval = {eta_lo, kInf};
  dims[1].gap_bound = blow_bound;
  dims[1].constants = std::move(blow_constants);
  dims[1].meta = dim_meta(spec, "moderate-large-step", G, p_pad);

  return assemble(spec, std::move(dims), bundle_meta(spec, G, p_pad));
}

ConstructionBundle build_large_lb_idhess(const ConstructionSpec& spec) {
  if (spec.theorem != TheoremId::LargeLbIdHess)
    throw std::invalid_argument("wrong builder for theorem " + to_string(spec.theorem));
  spec.validate();
  const double mu = spec.mu, L = spec.L(), G = spec.G, kap = spec.kappa;
  const int n = spec.n, K = spec.K;
  const double Lp = L / 2.0;
  const double eta_lo = 1.0 / (mu * n * K);
  const double rate = L * G * G / (mu * mu * static_cast<double>(K) * K);
  const double e1 = 1.0 - std::exp(-1.0);

  std::vector<DimSpec> dims(3);

  dims[0].components = make_identical_components(mu, n);
  dims[0].x0 = std::sqrt(kap) * G / (mu * K);
  dims[0].interval = {0.0, eta_lo};
  dims[0].gap_bound = rate / 32.0;
  dims[0].constants = {{"1/32 * L G^2/(mu^2 K^2)", 1.0 / 32.0}};
  dims[0].meta = dim_meta(spec, "small-step", 0.0, 0.0);

  const bool even = (n % 2 == 0);
  // Two sub-regimes split at 1/(n L'); each yields a constant multiple of
  // the L G^2/(mu^2 K^2) rate and the regime keeps the smaller one.
  double c_a, c_b;
  std::string f_a, f_b;
  if (even) {
    c_a = e1 * e1 / 256.0;
    f_a = "(1-1/e)^2/256 on [1/(mu n K), 1/(n L'))";
    c_b = std::pow(e1 * (1.0 - std::exp(-0.5)), 2) / 4.0;
    f_b = "((1-1/e)(1-exp(-1/2)))^2/4 on [1/(n L'), 2/L)";
  } else {
    c_a = e1 * e1 / 4096.0;
    f_a = "(1-1/e)^2/4096 on [1/(mu n K), 1/(n L'))";
    c_b = std::pow(e1 * (1.0 - std::exp(-0.25)), 2) / 16.0;
    f_b = "((1-1/e)(1-exp(-1/4)))^2/16 on [1/(n L'), 2/L)";
  }
  const double split = 1.0 / (n * Lp);
  double c_mod = kInf;
  std::vector<BoundConstant> mod_constants;
  if (eta_lo < split) {
    c_mod = std::min(c_mod, c_a);
    mod_constants.push_back({f_a, c_a});
  }
  if (split < 2.0 / L) {
    c_mod = std::min(c_mod, c_b);
    mod_constants.push_back({f_b, c_b});
  }
  dims[1].components =
      even ? make_twotype_components(Lp, G, n) : make_threetype_components(Lp, G, n);
  dims[1].x0 = 0.0;
  dims[1].interval = {eta_lo, 2.0 / L};
  dims[1].gap_bound = c_mod * rate;
  dims[1].constants = std::move(mod_constants);
  dims[1].meta = dim_meta(spec, "moderate-step", G, 0.0);

  dims[2].components = make_identical_components(L, n);
  dims[2].x0 = G / (mu * K);
  dims[2].interval = {2.0 / L, kInf};
  dims[2].gap_bound = rate / 2.0;
  dims[2].constants = {{"1/2 * L G^2/(mu^2 K^2)", 0.5}};
  dims[2].meta = dim_meta(spec, "large-step", 0.0, 0.0);

  return assemble(spec, std::move(dims), bundle_meta(spec, G, 0.0));
}

ConstructionBundle build_large_lb_concave(const ConstructionSpec& spec) {
  if (spec.theorem != TheoremId::LargeLbConcave)
    throw std::invalid_argument("wrong builder for theorem " + to_string(spec.theorem));
  spec.validate();
  const double mu = spec.mu, L = spec.L(), G = spec.G, kap = spec.kappa;
  const int n = spec.n, K = spec.K;
  const double Lp = L / 2.0;
  const double eta_lo = 1.0 / (mu * n * K);
  const double rate = L * L * G * G / (mu * mu * mu * static_cast<double>(K) * K);

  std::vector<DimSpec> dims(4);

  dims[0].components = make_identical_components(mu, n);
  dims[0].x0 = L * G / (mu * mu * K);
  dims[0].interval = {0.0, eta_lo};
  dims[0].gap_bound = rate / 32.0;
  dims[0].constants = {{"1/32 * L^2 G^2/(mu^3 K^2)", 1.0 / 32.0}};
  dims[0].meta = dim_meta(spec, "small-step", 0.0, 0.0);

  // Four-block dimension; padding scales the additive term by m4/n and the
  // epoch contraction bound by exp(-m4/n) instead of 1/e.
  const int m4 = 4 * (n / 4);
  const double frac = static_cast<double>(m4) / n;
  const double e_frac = 1.0 - std::exp(-frac);
  const double c_mod1 = std::pow(e_frac * frac, 2) / 3200.0;
  // Padding shrinks the averaged curvature to mu*m/n, raising the worst
  // gradient-error ratio of the L block from kappa-1 to kappa*n/m - 1.
  const double p_pad = kap * n / m4;
  dims[1].components = make_fourblock_components(mu, L, G, n);
  dims[1].x0 = 0.0;
  dims[1].interval = {eta_lo, 1.0 / (n * L)};
  dims[1].gap_bound = c_mod1 * rate;
  dims[1].constants = {
      {"mu/2 * ((1-exp(-m/n)) (m/n) L G/(40 mu^2 K))^2, m=" + std::to_string(m4), c_mod1}};
  dims[1].meta = dim_meta(spec, "moderate-step-1", G, p_pad);

  // Two-type dimension with L' = L/2, covering [1/(nL), 2/L). With an odd n
  // one zero component pads the pair structure and the exponent uses m2.
  const int m2 = (n % 2 == 0) ? n : n - 1;
  const double head = 1.0 - std::exp(-static_cast<double>(m2) / (4.0 * n));
  const double tail = 1.0 - std::exp(-static_cast<double>(K) * m2 / (4.0 * n));
  const double x3 = (G / Lp) * head * tail / 2.0;
  dims[2].components = (n % 2 == 0) ? make_twotype_components(Lp, G, n) : [&] {
    std::vector<QuadraticComponent> cs = make_twotype_components(Lp, G, m2);
    cs.push_back(comp1d(0.0, 0.0));
    return cs;
  }();
  dims[2].x0 = 0.0;
  dims[2].interval = {1.0 / (n * L), 2.0 / L};
  dims[2].gap_bound = (Lp / 2.0) * x3 * x3;
  dims[2].constants = {
      {"L'/2 * (G/(2L') (1-exp(-m/4n)) (1-exp(-K m/4n)))^2, m=" + std::to_string(m2),
       dims[2].gap_bound}};
  dims[2].meta = dim_meta(spec, "moderate-step-2", G, 0.0);

  dims[3].components = make_identical_components(L, n);
  dims[3].x0 = std::sqrt(kap) * G / (mu * K);
  dims[3].interval = {2.0 / L, kInf};
  dims[3].gap_bound = rate / 2.0;
  dims[3].constants = {{"1/2 * L^2 G^2/(mu^3 K^2)", 0.5}};
  dims[3].meta = dim_meta(spec, "large-step", 0.0, 0.0);

  return assemble(spec, std::move(dims), bundle_meta(spec, 2.0 * G, p_pad));
}

}  // namespace sgdlab
