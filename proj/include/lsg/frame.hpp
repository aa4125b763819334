#pragma once

#include "lsg/curvature.hpp"

namespace lsg {

// Signature pattern eta_aa for a chart: minus signs first.
inline VecR eta_diag(const MetricChart& chart) {
  VecR e = VecR::Ones(chart.dim);
  for (int k = 0; k < chart.timelike_count; ++k) e(k) = -1;
  return e;
}

// Deterministic pseudo-orthonormal frame: Gram-Schmidt on the columns of the
// chart's constant seed matrix, in order, normalizing column a to sign
// eta_aa. The seed must lead with the timelike direction(s); the default
// identity seed works whenever the coordinate metric has that shape.
struct FrameField {
  const MetricChart* chart = nullptr;

  MatR frame(const VecR& x) const {
    const MetricChart& c = *chart;
    const int n = c.dim;
    const MatR g = c.metric(x);
    const VecR eta = eta_diag(c);
    MatR e(n, n);
    for (int a = 0; a < n; ++a) {
      VecR w = c.frame_seed.col(a);
      for (int b = 0; b < a; ++b) {
        const double proj = eta(b) * (w.transpose() * g * e.col(b))(0);
        w -= proj * e.col(b);
      }
      const double q = (w.transpose() * g * w)(0);
      if (std::abs(q) < 1e-12 || q * eta(a) < 0)
        throw std::runtime_error("orthonormal_frame: Gram-Schmidt breakdown on chart '" + c.name + "'");
      e.col(a) = w / std::sqrt(std::abs(q));
    }
    return e;
  }

  // d_k of the frame columns, one Richardson level
  MatR dframe(const VecR& x, int k) const {
    const double h = chart->fd_step(x);
    auto diff = [&](double s) {
      VecR xp = x, xm = x;
      xp(k) += s;
      xm(k) -= s;
      return MatR((frame(xp) - frame(xm)) / (2 * s));
    };
    return (4.0 * diff(h / 2) - diff(h)) / 3.0;
  }

  double orthonormality_residual(const VecR& x) const {
    const MatR e = frame(x);
    const MatR gram = e.transpose() * chart->metric(x) * e;
    return (gram - MatR(eta_diag(*chart).asDiagonal())).cwiseAbs().maxCoeff();
  }

  // frame components of a coordinate vector: v = sum_a vf(a) e_a
  VecR to_frame(const VecR& x, const VecR& v) const {
    const MatR e = frame(x);
    const MatR g = chart->metric(x);
    const VecR eta = eta_diag(*chart);
    VecR out(chart->dim);
    for (int a = 0; a < chart->dim; ++a) out(a) = eta(a) * (v.transpose() * g * e.col(a))(0);
    return out;
  }
};

inline FrameField orthonormal_frame(const MetricChart& chart) {
  FrameField f;
  f.chart = &chart;
  return f;
}

}  // namespace lsg
