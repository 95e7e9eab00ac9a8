#pragma once

#include <cmath>
#include <vector>

#include "sgdlab/constructions.hpp"
#include "sgdlab/quadratic.hpp"
#include "sgdlab/rng.hpp"

namespace sgdlab::test {

inline double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

inline QuadraticComponent scalar_component(double a, double b) {
  QuadraticComponent c;
  c.hessian = Mat(1, 1);
  c.hessian(0, 0) = a;
  c.linear = {b};
  return c;
}

/// Random well-conditioned problem: symmetric components with SPD average.
inline FiniteSumProblem random_problem(SplitMix64& g, int d, int n) {
  std::vector<QuadraticComponent> cs(n);
  for (int i = 0; i < n; ++i) {
    Mat m(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = r; c < d; ++c) {
        const double v = 2.0 * g.uniform01() - 1.0;
        m(r, c) = v;
        m(c, r) = v;
      }
    for (int r = 0; r < d; ++r) m(r, r) += d + 1.0;  // diagonally dominant, SPD
    cs[i].hessian = std::move(m);
    cs[i].linear.resize(d);
    for (double& v : cs[i].linear) v = 2.0 * g.uniform01() - 1.0;
  }
  return FiniteSumProblem::build(std::move(cs));
}

/// The 1-D identical-curvature two-block instance used by the upper-bound
/// checks: n/2 components a/2 x^2 + Gx and n/2 with -Gx.
inline FiniteSumProblem twotype_problem(double a, double G, int n) {
  return FiniteSumProblem::build(make_twotype_components(a, G, n),
                                 ProblemMeta{a, a, G, 0.0, G, "twotype"});
}

}  // namespace sgdlab::test
