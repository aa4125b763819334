#pragma once

#include <functional>
#include <optional>
#include <string>

#include "lsg/linalg.hpp"

namespace lsg {

// Scalar function with analytic first and second derivatives (conformal
// factors, warp profiles).
struct ScalarFn {
  std::function<double(const VecR&)> f;
  std::function<VecR(const VecR&)> grad;
  std::function<MatR(const VecR&)> hess;
};

// Coordinate chart with a metric component function. dg and d2g are optional
// analytic derivatives; when absent, central finite differences with one
// Richardson extrapolation level are used (step fd_base * (1 + |x|)).
struct MetricChart {
  std::string name;
  int dim = 0;
  std::vector<std::string> coords;
  VecR lo, hi;
  int timelike_count = 1;  // signature tag: number of minus signs
  std::function<MatR(const VecR&)> g;
  std::function<Tensor3(const VecR&)> dg;                 // dg(k,i,j) = d_k g_ij
  std::function<Tensor4(const VecR&)> d2g;                // d2g(k,l,i,j) = d_k d_l g_ij
  MatR frame_seed;                                        // columns seed the frame GS
  double fd_base = 1e-4;

  double fd_step(const VecR& x) const { return fd_base * (1.0 + x.norm()); }

  MatR metric(const VecR& x) const { return g(x); }

  MatR inv_metric(const VecR& x) const {
    MatR m = g(x);
    Eigen::FullPivLU<MatR> lu(m);
    if (!lu.isInvertible()) throw std::runtime_error("chart '" + name + "': singular metric");
    return lu.inverse();
  }

  Tensor3 dmetric(const VecR& x) const {
    if (dg) return dg(x);
    Tensor3 out(dim);
    const double h = fd_step(x);
    for (int k = 0; k < dim; ++k) {
      auto diff = [&](double s) {
        VecR xp = x, xm = x;
        xp(k) += s;
        xm(k) -= s;
        return MatR((g(xp) - g(xm)) / (2 * s));
      };
      MatR d = (4.0 * diff(h / 2) - diff(h)) / 3.0;
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out(k, i, j) = d(i, j);
    }
    return out;
  }

  bool in_domain(const VecR& x) const {
    for (int k = 0; k < dim; ++k)
      if (x(k) < lo(k) || x(k) > hi(k)) return false;
    return true;
  }

  VecR center() const { return 0.5 * (lo + hi); }
};

inline MetricChart make_chart(std::string name, std::vector<std::string> coords, VecR lo, VecR hi,
                              std::function<MatR(const VecR&)> g) {
  MetricChart c;
  c.name = std::move(name);
  c.dim = static_cast<int>(coords.size());
  c.coords = std::move(coords);
  c.lo = std::move(lo);
  c.hi = std::move(hi);
  c.g = std::move(g);
  c.frame_seed = MatR::Identity(c.dim, c.dim);
  return c;
}

// Lattice of sample points, shrunk away from the boundary so finite
// difference stencils stay inside the box.
inline std::vector<VecR> sample_grid(const MetricChart& chart, int per_dim, double margin = 0.07) {
  std::vector<VecR> pts;
  const int n = chart.dim;
  std::vector<int> idx(n, 0);
  const long total = static_cast<long>(std::pow(per_dim, n));
  pts.reserve(total);
  for (long t = 0; t < total; ++t) {
    VecR x(n);
    long rem = t;
    for (int k = 0; k < n; ++k) {
      const int i = rem % per_dim;
      rem /= per_dim;
      const double a = chart.lo(k) + margin * (chart.hi(k) - chart.lo(k));
      const double b = chart.hi(k) - margin * (chart.hi(k) - chart.lo(k));
      x(k) = per_dim == 1 ? 0.5 * (a + b) : a + (b - a) * i / (per_dim - 1.0);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

// e^{2 sigma} g with chain-ruled analytic derivatives when available.
inline MetricChart conformal_rescale(const MetricChart& chart, const ScalarFn& sigma) {
  MetricChart out = chart;
  out.name = chart.name + "_rescaled";
  const auto base_g = chart.g;
  const auto base_dg = chart.dg;
  out.g = [base_g, sigma](const VecR& x) {
    return MatR(std::exp(2.0 * sigma.f(x)) * base_g(x));
  };
  if (base_dg && sigma.grad) {
    const int n = chart.dim;
    out.dg = [base_g, base_dg, sigma, n](const VecR& x) {
      const double w = std::exp(2.0 * sigma.f(x));
      const VecR gr = sigma.grad(x);
      const MatR gm = base_g(x);
      const Tensor3 dgm = base_dg(x);
      Tensor3 o(n);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            o(k, i, j) = w * (2.0 * gr(k) * gm(i, j) + dgm(k, i, j));
      return o;
    };
  } else {
    out.dg = nullptr;
  }
  out.d2g = nullptr;
  return out;
}

// Vector field on a chart, coordinate components; jac(x) is the matrix of
// partials d_k V^i stored as jac(i,k), finite-differenced when absent.
struct VecField {
  std::function<VecR(const VecR&)> v;
  std::function<MatR(const VecR&)> jac;

  MatR jacobian(const MetricChart& chart, const VecR& x) const {
    if (jac) return jac(x);
    const double h = chart.fd_step(x);
    MatR out(chart.dim, chart.dim);
    for (int k = 0; k < chart.dim; ++k) {
      auto diff = [&](double s) {
        VecR xp = x, xm = x;
        xp(k) += s;
        xm(k) -= s;
        return VecR((v(xp) - v(xm)) / (2 * s));
      };
      out.col(k) = (4.0 * diff(h / 2) - diff(h)) / 3.0;
    }
    return out;
  }
};

inline VecField constant_field(const VecR& v0) {
  const int n = static_cast<int>(v0.size());
  VecField f;
  f.v = [v0](const VecR&) { return v0; };
  f.jac = [n](const VecR&) { return MatR::Zero(n, n); };
  return f;
}

}  // namespace lsg
