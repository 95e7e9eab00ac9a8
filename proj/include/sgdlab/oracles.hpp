#pragma once

namespace sgdlab {

/// Parameters for the scalar closed-form iterate formulas. `a` is the common
/// component curvature, `G` the linear offset magnitude, and the parity of
/// `n` must match the variant (two-type: even, three-type: odd, concave pair:
/// even).
struct OracleParams {
  double a = 0.0;
  double G = 0.0;
  int n = 0;
  double eta = 0.0;
  int K = 0;
  double x0 = 0.0;
};

/// base^m for integer m >= 0 by squaring, with a log/exp fallback when the
/// base is extremely close to 1 and the exponent is huge.
double signed_pow(double base, long long m);

/// Final iterate of cyclic gradient descent on the even split
/// {a/2 x^2 + Gx (first n/2), a/2 x^2 - Gx (rest)}.
double closed_form_twotype(const OracleParams& p);

/// Final iterate for the odd split {a/2 x^2, then (n-1)/2 with +Gx, then
/// (n-1)/2 with -Gx}.
double closed_form_threetype(const OracleParams& p);

/// One-epoch affine map for the pair {a/2 x^2 + Gx, -a/4 x^2 - Gx} (n even):
/// returns the epoch-end iterate given the epoch-start iterate xk.
double closed_form_concave_epoch(double a, double G, int n, double eta, double xk);

/// One-epoch affine map for the four-block family
/// {Gx, L/2 x^2, -Gx, -(L-4mu)/2 x^2}, n divisible by 4.
double large_concave_epoch_map(double mu, double L, int n, double eta, double G, double xk);

/// The same map unrolled over K epochs in closed form.
double large_concave_final(double mu, double L, int n, double eta, double G, double x0, int K);

struct PqPair {
  double p;  // (1 - eta L)^(n/4)
  double q;  // (1 + eta (L - 4 mu))^(n/4)
};
PqPair large_concave_pq(double mu, double L, int n, double eta);

}  // namespace sgdlab
