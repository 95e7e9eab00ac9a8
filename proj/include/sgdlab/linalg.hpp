#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sgdlab {

using Vec = std::vector<double>;

/// Dense row-major matrix. Everything in this project is tiny (d <= 8),
/// so no attempt is made at blocking or sparsity.
class Mat {
public:
  Mat() = default;
  Mat(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

  static Mat identity(int n);
  static Mat diag(const Vec& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  const std::vector<double>& data() const { return a_; }

  bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  Mat& operator+=(const Mat& o);
  Mat& operator*=(double s);
  friend Mat operator+(Mat l, const Mat& r) { return l += r; }
  friend Mat operator*(double s, Mat m) { return m *= s; }
  friend Mat operator*(const Mat& l, const Mat& r);

  /// Largest relative asymmetry |a_ij - a_ji| / max(1, max|a|).
  double asymmetry() const;

  double frobenius_norm() const;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

// Vector helpers.
double dot(const Vec& x, const Vec& y);
double norm(const Vec& x);
Vec operator-(const Vec& x, const Vec& y);
Vec operator+(const Vec& x, const Vec& y);
Vec scaled(double s, const Vec& x);
bool all_finite(const Vec& x);

Vec matvec(const Mat& m, const Vec& x);
/// y = m*x without allocating; y must have m.rows() entries already.
void matvec_into(const Mat& m, const Vec& x, Vec& y);

/// Direct sum: places each block on the diagonal, zeros elsewhere.
Mat block_diag(const std::vector<Mat>& blocks);

struct EigenSym {
  Vec values;    // ascending
  Mat vectors;   // column j is the eigenvector for values[j]
};

/// Eigendecomposition of a symmetric matrix: closed form for d <= 2,
/// cyclic Jacobi sweeps for larger d with a 1e-13-scaled off-diagonal stop.
EigenSym eigen_symmetric(const Mat& m);

/// Spectral norm (largest |eigenvalue|) of a symmetric matrix.
double spectral_norm_symmetric(const Mat& m);

/// Solves a*x = b for symmetric positive definite a via Cholesky.
/// Throws std::domain_error with `context` in the message if a is not SPD.
Vec solve_spd(const Mat& a, const Vec& b, const std::string& context);

/// Shortest-width %.17g rendering used for every float that leaves the process.
std::string format_g17(double v);

}  // namespace sgdlab
