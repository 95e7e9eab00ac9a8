#include "sgdlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace sgdlab {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::diag(const Vec& d) {
  Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

Mat& Mat::operator+=(const Mat& o) {
  if (!same_shape(o)) throw std::invalid_argument("matrix shape mismatch in operator+=");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

Mat operator*(const Mat& l, const Mat& r) {
  if (l.cols() != r.rows()) throw std::invalid_argument("matrix shape mismatch in operator*");
  Mat out(l.rows(), r.cols());
  for (int i = 0; i < l.rows(); ++i)
    for (int k = 0; k < l.cols(); ++k) {
      const double lik = l(i, k);
      if (lik == 0.0) continue;
      for (int j = 0; j < r.cols(); ++j) out(i, j) += lik * r(k, j);
    }
  return out;
}

double Mat::asymmetry() const {
  double amax = 1.0, worst = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) amax = std::max(amax, std::fabs((*this)(i, j)));
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      worst = std::max(worst, std::fabs((*this)(i, j) - (*this)(j, i)));
  return worst / amax;
}

double Mat::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

double dot(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vector size mismatch in dot");
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

Vec operator-(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vector size mismatch in operator-");
  Vec z(x.size());
  for (size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
  return z;
}

Vec operator+(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vector size mismatch in operator+");
  Vec z(x.size());
  for (size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
  return z;
}

Vec scaled(double s, const Vec& x) {
  Vec z(x.size());
  for (size_t i = 0; i < x.size(); ++i) z[i] = s * x[i];
  return z;
}

bool all_finite(const Vec& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

Vec matvec(const Mat& m, const Vec& x) {
  Vec y(m.rows());
  matvec_into(m, x, y);
  return y;
}

void matvec_into(const Mat& m, const Vec& x, Vec& y) {
  if (m.cols() != static_cast<int>(x.size()) || m.rows() != static_cast<int>(y.size()))
    throw std::invalid_argument("matrix/vector size mismatch in matvec");
  for (int i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols(); ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
}

Mat block_diag(const std::vector<Mat>& blocks) {
  int n = 0;
  for (const Mat& b : blocks) {
    if (b.rows() != b.cols()) throw std::invalid_argument("block_diag expects square blocks");
    n += b.rows();
  }
  Mat out(n, n);
  int off = 0;
  for (const Mat& b : blocks) {
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) out(off + i, off + j) = b(i, j);
    off += b.rows();
  }
  return out;
}

namespace {

EigenSym eigen_1x1(const Mat& m) { return {{m(0, 0)}, Mat::identity(1)}; }

// Closed form for 2x2 symmetric matrices; avoids Jacobi entirely.
EigenSym eigen_2x2(const Mat& m) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 1);
  const double tr = a + c;
  const double disc = std::sqrt(std::max(0.0, (a - c) * (a - c) + 4.0 * b * b));
  double lo = 0.5 * (tr - disc), hi = 0.5 * (tr + disc);
  Mat vecs(2, 2);
  if (std::fabs(b) < 1e-300) {
    if (a <= c) {
      vecs(0, 0) = 1.0; vecs(1, 1) = 1.0;
    } else {
      std::swap(lo, hi);
      lo = std::min(a, c); hi = std::max(a, c);
      vecs(1, 0) = 1.0; vecs(0, 1) = 1.0;
    }
    return {{lo, hi}, vecs};
  }
  // Eigenvector for eigenvalue t solves (a-t)x + b y = 0.
  for (int k = 0; k < 2; ++k) {
    const double t = (k == 0) ? lo : hi;
    double vx = b, vy = t - a;
    if (std::fabs(vx) + std::fabs(vy) < 1e-300) { vx = t - c; vy = b; }
    const double nrm = std::sqrt(vx * vx + vy * vy);
    vecs(0, k) = vx / nrm;
    vecs(1, k) = vy / nrm;
  }
  return {{lo, hi}, vecs};
}

double offdiag_norm(const Mat& m) {
  double s = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j) s += 2.0 * m(i, j) * m(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenSym eigen_symmetric(const Mat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigen_symmetric expects a square matrix");
  const int n = m.rows();
  if (n == 0) return {{}, {}};
  if (n == 1) return eigen_1x1(m);
  if (n == 2) return eigen_2x2(m);

  Mat a = m;
  Mat v = Mat::identity(n);
  const double scale = std::max(1.0, a.frobenius_norm());
  const double stop = 1e-13 * scale;
  // Cyclic Jacobi: sweep all upper off-diagonal pivots until negligible.
  for (int sweep = 0; sweep < 100 && offdiag_norm(a) > stop; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-20 * scale) continue;
        const double theta = 0.5 * std::atan2(2.0 * apq, a(q, q) - a(p, p));
        const double c = std::cos(theta), s = std::sin(theta);
        for (int r = 0; r < n; ++r) {
          const double arp = a(r, p), arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (int r = 0; r < n; ++r) {
          const double apr = a(p, r), aqr = a(q, r);
          a(p, r) = c * apr - s * aqr;
          a(q, r) = s * apr + c * aqr;
        }
        for (int r = 0; r < n; ++r) {
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  EigenSym out;
  out.values.resize(n);
  out.vectors = Mat(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (int r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

double spectral_norm_symmetric(const Mat& m) {
  const EigenSym e = eigen_symmetric(m);
  double s = 0.0;
  for (double v : e.values) s = std::max(s, std::fabs(v));
  return s;
}

Vec solve_spd(const Mat& a, const Vec& b, const std::string& context) {
  if (a.rows() != a.cols() || a.rows() != static_cast<int>(b.size()))
    throw std::invalid_argument("solve_spd: shape mismatch (" + context + ")");
  const int n = a.rows();
  Mat l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d))
      throw std::domain_error(context + ": matrix is not positive definite (not strongly convex)");
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  Vec y(n), x(n);
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
    x[i] = s / l(i, i);
  }
  return x;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace sgdlab
