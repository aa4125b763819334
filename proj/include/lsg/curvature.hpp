#pragma once

#include "lsg/chart.hpp"
#include "lsg/report.hpp"

namespace lsg {

// Levi-Civita connection coefficients Gamma^k_{ij}, symmetric in (i,j).
inline Tensor3 christoffel(const MetricChart& chart, const VecR& x) {
  const int n = chart.dim;
  const MatR gi = chart.inv_metric(x);
  const Tensor3 dg = chart.dmetric(x);
  Tensor3 gam(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0;
        for (int l = 0; l < n; ++l) s += gi(k, l) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
        gam(k, i, j) = 0.5 * s;
        gam(k, j, i) = gam(k, i, j);
      }
  return gam;
}

// Residual of nabla g = 0 reassembled from the computed coefficients.
inline double christoffel_compat_residual(const MetricChart& chart, const VecR& x) {
  const int n = chart.dim;
  const MatR g = chart.metric(x);
  const Tensor3 dg = chart.dmetric(x);
  const Tensor3 gam = christoffel(chart, x);
  double worst = 0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = dg(k, i, j);
        for (int e = 0; e < n; ++e) v -= gam(e, k, i) * g(e, j) + gam(e, k, j) * g(i, e);
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

// d_l Gamma^k_{ij}: analytic when d2g is supplied, else FD with Richardson.
inline std::vector<Tensor3> dchristoffel(const MetricChart& chart, const VecR& x) {
  const int n = chart.dim;
  std::vector<Tensor3> out(n, Tensor3(n));
  if (chart.d2g && chart.dg) {
    const MatR gi = chart.inv_metric(x);
    const Tensor3 dg = chart.dg(x);
    const Tensor4 d2g = chart.d2g(x);
    // d_l g^{km} = -g^{ka} (d_l g_{ab}) g^{bm}
    std::vector<MatR> dgi(n);
    for (int l = 0; l < n; ++l) {
      MatR dgl(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) dgl(a, b) = dg(l, a, b);
      dgi[l] = -gi * dgl * gi;
    }
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int m = 0; m < n; ++m) {
              s += dgi[l](k, m) * (dg(i, j, m) + dg(j, i, m) - dg(m, i, j));
              s += gi(k, m) * (d2g(l, i, j, m) + d2g(l, j, i, m) - d2g(l, m, i, j));
            }
            out[l](k, i, j) = 0.5 * s;
          }
    return out;
  }
  const double h = chart.fd_step(x);
  for (int l = 0; l < n; ++l) {
    auto diff = [&](double s) {
      VecR xp = x, xm = x;
      xp(l) += s;
      xm(l) -= s;
      Tensor3 a = christoffel(chart, xp), b = christoffel(chart, xm);
      Tensor3 d(n);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) d(k, i, j) = (a(k, i, j) - b(k, i, j)) / (2 * s);
      return d;
    };
    Tensor3 d1 = diff(h / 2), d2 = diff(h);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[l](k, i, j) = (4.0 * d1(k, i, j) - d2(k, i, j)) / 3.0;
  }
  return out;
}

// (R(e_a,e_b)e_c)^d with R(X,Y)Z = nab_X nab_Y Z - nab_Y nab_X Z - nab_[X,Y] Z.
inline Tensor4 riemann_up(const MetricChart& chart, const VecR& x) {
  const int n = chart.dim;
  const Tensor3 gam = christoffel(chart, x);
  const auto dgam = dchristoffel(chart, x);
  Tensor4 r(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = dgam[a](d, b, c) - dgam[b](d, a, c);
          for (int e = 0; e < n; ++e)
            v += gam(d, a, e) * gam(e, b, c) - gam(d, b, e) * gam(e, a, c);
          r(a, b, c, d) = v;
        }
  return r;
}

inline Tensor4 lower_riemann(const MatR& g, const Tensor4& up) {
  const int n = up.dim();
  Tensor4 r(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = 0;
          for (int e = 0; e < n; ++e) v += g(d, e) * up(a, b, c, e);
          r(a, b, c, d) = v;
        }
  return r;
}

// Kulkarni-Nomizu product of two symmetric 2-tensors:
// (h*k)(a,b,c,d) = -h(a,d)k(b,c) - h(b,c)k(a,d) + h(a,c)k(b,d) + h(b,d)k(a,c).
inline Tensor4 kulkarni_nomizu(const MatR& h, const MatR& k) {
  const int n = static_cast<int>(h.rows());
  Tensor4 out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          out(a, b, c, d) =
              -h(a, d) * k(b, c) - h(b, c) * k(a, d) + h(a, c) * k(b, d) + h(b, d) * k(a, c);
  return out;
}

struct CurvaturePack {
  int n = 0;
  MatR g, g_inv;
  Tensor3 gamma;
  Tensor4 riemann;  // lowered R_{abcd} = g(R(e_a,e_b)e_c, e_d)
  MatR ricci;
  double scalar = 0;
  MatR rho;        // K = (1/(n-2)) (R/(2(n-1)) g - Ric)
  Tensor4 weyl;    // W = Riem - g * K (Kulkarni-Nomizu), totally trace-free
  Tensor3 cotton;  // C(a,b,c) = (nab_a K)(b,c) - (nab_b K)(a,c)
};

inline MatR ricci_from_up(const Tensor4& up) {
  const int n = up.dim();
  MatR ric(n, n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) {
      double v = 0;
      for (int a = 0; a < n; ++a) v += up(a, b, c, a);
      ric(b, c) = v;
    }
  return ric;
}

inline MatR rho_tensor(const MatR& g, const MatR& ricci, double scalar) {
  const int n = static_cast<int>(g.rows());
  return MatR(((scalar / (2.0 * (n - 1))) * g - ricci) / (n - 2));
}

inline MatR rho_at(const MetricChart& chart, const VecR& x) {
  const Tensor4 up = riemann_up(chart, x);
  const MatR ric = ricci_from_up(up);
  const MatR gi = chart.inv_metric(x);
  const double scal = (gi * ric).trace();
  return rho_tensor(chart.metric(x), ric, scal);
}

inline CurvaturePack curvature_pack(const MetricChart& chart, const VecR& x) {
  CurvaturePack p;
  p.n = chart.dim;
  p.g = chart.metric(x);
  p.g_inv = chart.inv_metric(x);
  p.gamma = christoffel(chart, x);
  const Tensor4 up = riemann_up(chart, x);
  p.riemann = lower_riemann(p.g, up);
  p.ricci = ricci_from_up(up);
  p.scalar = (p.g_inv * p.ricci).trace();
  p.rho = rho_tensor(p.g, p.ricci, p.scalar);
  p.weyl = p.riemann;
  p.weyl -= kulkarni_nomizu(p.g, p.rho);

  // Cotton-York: dK by finite differences of the Rho tensor, then the
  // covariant corrections with the connection at x.
  const int n = p.n;
  const double h = chart.fd_step(x);
  std::vector<MatR> dK(n);
  for (int a = 0; a < n; ++a) {
    auto diff = [&](double s) {
      VecR xp = x, xm = x;
      xp(a) += s;
      xm(a) -= s;
      return MatR((rho_at(chart, xp) - rho_at(chart, xm)) / (2 * s));
    };
    dK[a] = (4.0 * diff(h / 2) - diff(h)) / 3.0;
  }
  Tensor3 nabK(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double v = dK[a](b, c);
        for (int e = 0; e < n; ++e) v -= p.gamma(e, a, b) * p.rho(e, c) + p.gamma(e, a, c) * p.rho(b, e);
        nabK(a, b, c) = v;
      }
  p.cotton = Tensor3(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) p.cotton(a, b, c) = nabK(a, b, c) - nabK(b, a, c);
  return p;
}

// --- invariant residuals -----------------------------------------------------

inline double riemann_symmetry_residual(const Tensor4& r) {
  const int n = r.dim();
  double worst = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          worst = std::max(worst, std::abs(r(a, b, c, d) + r(b, a, c, d)));
          worst = std::max(worst, std::abs(r(a, b, c, d) + r(a, b, d, c)));
          worst = std::max(worst, std::abs(r(a, b, c, d) - r(c, d, a, b)));
          worst = std::max(worst,
                           std::abs(r(a, b, c, d) + r(b, c, a, d) + r(c, a, b, d)));
        }
  return worst;
}

// max over single contractions of W with the inverse metric
inline double weyl_trace_residual(const MatR& g_inv, const Tensor4& w) {
  const int n = w.dim();
  double worst = 0;
  // contract slots (1,4), (1,3), (1,2); others follow by symmetry
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) {
      double t14 = 0, t13 = 0, t12 = 0;
      for (int a = 0; a < n; ++a)
        for (int d = 0; d < n; ++d) {
          t14 += g_inv(a, d) * w(a, b, c, d);
          t13 += g_inv(a, d) * w(a, b, d, c);
          t12 += g_inv(a, d) * w(a, d, b, c);
        }
      worst = std::max({worst, std::abs(t14), std::abs(t13), std::abs(t12)});
    }
  return worst;
}

inline double cotton_antisymmetry_residual(const Tensor3& c) {
  const int n = c.dim();
  double worst = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(c(a, b, k) + c(b, a, k)));
  return worst;
}

// Second Bianchi identity, cyclic sum of nabla R in the first two slots.
inline double second_bianchi_residual(const MetricChart& chart, const VecR& x) {
  const int n = chart.dim;
  const double h = chart.fd_step(x);
  const Tensor3 gam = christoffel(chart, x);
  auto riem = [&](const VecR& y) { return lower_riemann(chart.metric(y), riemann_up(chart, y)); };
  std::vector<Tensor4> dR(n, Tensor4(n));
  for (int e = 0; e < n; ++e) {
    VecR xp = x, xm = x;
    xp(e) += h;
    xm(e) -= h;
    Tensor4 a = riem(xp), b = riem(xm);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) dR[e](i, j, k, l) = (a(i, j, k, l) - b(i, j, k, l)) / (2 * h);
  }
  const Tensor4 r = riem(x);
  auto covd = [&](int e, int i, int j, int k, int l) {
    double v = dR[e](i, j, k, l);
    for (int m = 0; m < n; ++m) {
      v -= gam(m, e, i) * r(m, j, k, l) + gam(m, e, j) * r(i, m, k, l) +
           gam(m, e, k) * r(i, j, m, l) + gam(m, e, l) * r(i, j, k, m);
    }
    return v;
  };
  double worst = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int e = 0; e < n; ++e) {
            const double s = covd(e, a, b, c, d) + covd(a, b, e, c, d) + covd(b, e, a, c, d);
            worst = std::max(worst, std::abs(s));
          }
  return worst;
}

// Trace over slots (3,5) and (4,6) of R (x) R with the inverse metric;
// vanishes exactly on pp-manifolds.
inline double pp_trace_residual(const MetricChart& chart, const VecR& x) {
  const int n = chart.dim;
  const MatR gi = chart.inv_metric(x);
  const Tensor4 r = lower_riemann(chart.metric(x), riemann_up(chart, x));
  double worst = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int gg = 0; gg < n; ++gg)
        for (int hh = 0; hh < n; ++hh) {
          double s = 0;
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d)
              for (int e = 0; e < n; ++e)
                for (int f = 0; f < n; ++f)
                  s += gi(c, e) * gi(d, f) * r(a, b, c, d) * r(e, f, gg, hh);
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

// |d theta ^ theta| at x for theta the metric dual of V (euclidean norm of
// coordinate components; only zero vs nonzero matters).
inline double twist_measure(const MetricChart& chart, const VecField& vf, const VecR& x) {
  const int n = chart.dim;
  auto theta = [&](const VecR& y) { return VecR(chart.metric(y) * vf.v(y)); };
  const double h = chart.fd_step(x);
  MatR dth(n, n);
  std::vector<VecR> dtheta(n);
  for (int k = 0; k < n; ++k) {
    auto diff = [&](double s) {
      VecR xp = x, xm = x;
      xp(k) += s;
      xm(k) -= s;
      return VecR((theta(xp) - theta(xm)) / (2 * s));
    };
    dtheta[k] = (4.0 * diff(h / 2) - diff(h)) / 3.0;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) dth(a, b) = dtheta[a](b) - dtheta[b](a);
  const VecR th = theta(x);
  double sum = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        const double v = dth(a, b) * th(c) + dth(b, c) * th(a) + dth(c, a) * th(b);
        sum += v * v;
      }
  return std::sqrt(sum);
}

// (L_V g)_{ij} = V^k d_k g_ij + g_kj d_i V^k + g_ik d_j V^k
inline MatR lie_derivative_metric(const MetricChart& chart, const VecField& vf, const VecR& x) {
  const int n = chart.dim;
  const MatR g = chart.metric(x);
  const Tensor3 dg = chart.dmetric(x);
  const VecR v = vf.v(x);
  const MatR jac = vf.jacobian(chart, x);  // jac(i,k) = d_k V^i
  MatR out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k)
        s += v(k) * dg(k, i, j) + g(k, j) * jac(k, i) + g(i, k) * jac(k, j);
      out(i, j) = s;
    }
  return out;
}

inline double killing_residual(const MetricChart& chart, const VecField& vf, const VecR& x) {
  return lie_derivative_metric(chart, vf, x).cwiseAbs().maxCoeff();
}

inline double conformal_killing_residual(const MetricChart& chart, const VecField& vf, const VecR& x) {
  const MatR l = lie_derivative_metric(chart, vf, x);
  const MatR g = chart.metric(x);
  const MatR gi = chart.inv_metric(x);
  const double tr = (gi * l).trace();
  return (l - (tr / chart.dim) * g).cwiseAbs().maxCoeff();
}

// (nabla_a V)^k as a matrix N(k,a)
inline MatR covariant_derivative_field(const MetricChart& chart, const VecField& vf, const VecR& x) {
  const int n = chart.dim;
  const Tensor3 gam = christoffel(chart, x);
  const MatR jac = vf.jacobian(chart, x);
  const VecR v = vf.v(x);
  MatR out(n, n);
  for (int a = 0; a < n; ++a)
    for (int k = 0; k < n; ++k) {
      double s = jac(k, a);
      for (int e = 0; e < n; ++e) s += gam(k, a, e) * v(e);
      out(k, a) = s;
    }
  return out;
}

}  // namespace lsg
