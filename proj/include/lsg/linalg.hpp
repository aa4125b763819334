#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace lsg {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;

inline constexpr cplx I{0.0, 1.0};

inline MatC kron(const MatC& a, const MatC& b) {
  MatC out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// exp(A) by scaling-and-squaring on a truncated Taylor series. Matrices here
// are at most 16x16 and moderately scaled, so this is plenty.
inline MatC expm(const MatC& a) {
  const double nrm = a.cwiseAbs().maxCoeff() * static_cast<double>(a.rows());
  int squarings = 0;
  while (nrm / std::pow(2.0, squarings) > 0.5) ++squarings;
  MatC x = a / std::pow(2.0, squarings);
  MatC term = MatC::Identity(a.rows(), a.cols());
  MatC sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = (term * x) / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// Right null space of a complex matrix via SVD, keeping singular vectors
// whose singular value is below tol * (largest singular value).
inline std::vector<VecC> nullspace(const MatC& m, double tol = 1e-9) {
  Eigen::JacobiSVD<MatC> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = tol * (sv.size() > 0 ? sv(0) : 1.0);
  std::vector<VecC> out;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) <= cutoff) out.push_back(svd.matrixV().col(k));
  // columns beyond the rank of m (m may be wide)
  for (Eigen::Index k = sv.size(); k < svd.matrixV().cols(); ++k)
    out.push_back(svd.matrixV().col(k));
  return out;
}

inline double smallest_singular_value(const MatC& m) {
  Eigen::JacobiSVD<MatC> svd(m);
  return svd.singularValues().tail(1)(0);
}

// Dense rank-4 tensor of doubles with all dimensions equal; used for the
// curvature stack on charts (n <= 8).
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), d_(static_cast<size_t>(n) * n * n * n, 0.0) {}
  double& operator()(int a, int b, int c, int d) {
    return d_[((static_cast<size_t>(a) * n_ + b) * n_ + c) * n_ + d];
  }
  double operator()(int a, int b, int c, int d) const {
    return d_[((static_cast<size_t>(a) * n_ + b) * n_ + c) * n_ + d];
  }
  int dim() const { return n_; }
  double max_abs() const {
    double m = 0;
    for (double v : d_) m = std::max(m, std::abs(v));
    return m;
  }
  Tensor4& operator+=(const Tensor4& o) {
    for (size_t i = 0; i < d_.size(); ++i) d_[i] += o.d_[i];
    return *this;
  }
  Tensor4& operator-=(const Tensor4& o) {
    for (size_t i = 0; i < d_.size(); ++i) d_[i] -= o.d_[i];
    return *this;
  }

 private:
  int n_ = 0;
  std::vector<double> d_;
};

class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), d_(static_cast<size_t>(n) * n * n, 0.0) {}
  double& operator()(int a, int b, int c) {
    return d_[(static_cast<size_t>(a) * n_ + b) * n_ + c];
  }
  double operator()(int a, int b, int c) const {
    return d_[(static_cast<size_t>(a) * n_ + b) * n_ + c];
  }
  int dim() const { return n_; }
  double max_abs() const {
    double m = 0;
    for (double v : d_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int n_ = 0;
  std::vector<double> d_;
};

}  // namespace lsg
