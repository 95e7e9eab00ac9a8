#include "sgdlab/oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sgdlab {

namespace {

constexpr double kDenomGuard = 1e-14;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::domain_error(msg);
}

}  // namespace

double signed_pow(double base, long long m) {
  if (m < 0) throw std::invalid_argument("signed_pow expects a nonnegative exponent");
  if (m == 0) return 1.0;
  if (base == 0.0) return 0.0;
  // For bases within one part in 2^40 of 1 and astronomically many factors,
  // repeated squaring loses relative accuracy; exp(m log|base|) keeps it.
  if (m > 1000000 && std::fabs(std::fabs(base) - 1.0) < 1e-12) {
    const double mag = std::exp(static_cast<double>(m) * std::log(std::fabs(base)));
    const bool negative = base < 0.0 && (m & 1LL);
    return negative ? -mag : mag;
  }
  double result = 1.0, b = base;
  long long e = m;
  while (e > 0) {
    if (e & 1LL) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

double closed_form_twotype(const OracleParams& p) {
  require(p.n > 0 && p.n % 2 == 0, "two-type oracle needs even n, got n=" + std::to_string(p.n));
  require(p.a != 0.0, "two-type oracle needs a != 0 (formula divides by a)");
  require(p.K >= 1, "two-type oracle needs K >= 1");
  const double r = 1.0 - p.eta * p.a;
  const double r_half = signed_pow(r, p.n / 2);
  const double r_nk = signed_pow(r, static_cast<long long>(p.n) * p.K);
  const double denom = 1.0 + r_half;
  require(std::fabs(denom) > kDenomGuard,
          "two-type oracle denominator 1+(1-eta a)^(n/2) vanishes");
  return r_nk * p.x0 + (p.G / p.a) * ((1.0 - r_half) / denom) * (1.0 - r_nk);
}

double closed_form_threetype(const OracleParams& p) {
  require(p.n >= 3 && p.n % 2 == 1, "three-type oracle needs odd n >= 3, got n=" + std::to_string(p.n));
  require(p.a != 0.0, "three-type oracle needs a != 0");
  require(p.eta * p.a != 0.0, "three-type oracle needs eta*a != 0 (denominator vanishes)");
  require(p.K >= 1, "three-type oracle needs K >= 1");
  const double r = 1.0 - p.eta * p.a;
  const double r_n = signed_pow(r, p.n);
  require(std::fabs(1.0 - r_n) > kDenomGuard,
          "three-type oracle denominator 1-(1-eta a)^n vanishes at eta*a=" +
              std::to_string(p.eta * p.a));
  const double r_nk = signed_pow(r, static_cast<long long>(p.n) * p.K);
  const double r_head = signed_pow(r, (p.n - 1) / 2);
  return r_nk * p.x0 +
         (p.G / p.a) * ((1.0 - r_nk) / (1.0 - r_n)) * (1.0 - r_head) * (1.0 - r_head);
}

double closed_form_concave_epoch(double a, double G, int n, double eta, double xk) {
  require(n > 0 && n % 2 == 0, "concave epoch oracle needs even n, got n=" + std::to_string(n));
  require(a != 0.0, "concave epoch oracle needs a != 0");
  const double grow = signed_pow(1.0 + 0.5 * eta * a, n / 2);
  const double shrink = signed_pow(1.0 - eta * a, n / 2);
  return grow * shrink * xk + (G / a) * (grow * (1.0 + shrink) - 2.0);
}

PqPair large_concave_pq(double mu, double L, int n, double eta) {
  require(n > 0 && n % 4 == 0, "four-block oracle needs n divisible by 4, got n=" + std::to_string(n));
  const double a = L - 4.0 * mu;
  return {signed_pow(1.0 - eta * L, n / 4), signed_pow(1.0 + eta * a, n / 4)};
}

double large_concave_epoch_map(double mu, double L, int n, double eta, double G, double xk) {
  const PqPair pq = large_concave_pq(mu, L, n, eta);
  return pq.p * pq.q * xk + pq.q * (1.0 - pq.p) * (eta * n * G / 4.0);
}

double large_concave_final(double mu, double L, int n, double eta, double G, double x0, int K) {
  require(K >= 1, "four-block oracle needs K >= 1");
  const PqPair pq = large_concave_pq(mu, L, n, eta);
  const double m = pq.p * pq.q;
  const double c = pq.q * (1.0 - pq.p) * (eta * n * G / 4.0);
  const double m_k = signed_pow(m, K);
  if (std::fabs(1.0 - m) < kDenomGuard) return m_k * x0 + static_cast<double>(K) * c;
  return m_k * x0 + (1.0 - m_k) / (1.0 - m) * c;
}

}  // namespace sgdlab
