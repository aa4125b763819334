#pragma once

#include "lsg/clifford.hpp"
#include "lsg/frame.hpp"
#include "lsg/invariants.hpp"

namespace lsg {

// Spinor field in the chart's deterministic frame gauge. jac (columns are
// coordinate partials of the coefficients) is finite-differenced when absent.
struct SpinorField {
  const CliffordRep* rep = nullptr;
  std::function<VecC(const VecR&)> value;
  std::function<MatC(const VecR&)> jac;
  std::string gauge;  // chart name this field's frame gauge refers to

  MatC jacobian(const MetricChart& chart, const VecR& x) const {
    if (jac) return jac(x);
    const double h = chart.fd_step(x);
    MatC out(rep->dim, chart.dim);
    for (int k = 0; k < chart.dim; ++k) {
      auto diff = [&](double s) {
        VecR xp = x, xm = x;
        xp(k) += s;
        xm(k) -= s;
        return VecC((value(xp) - value(xm)) / (2 * s));
      };
      out.col(k) = (4.0 * diff(h / 2) - diff(h)) / 3.0;
    }
    return out;
  }
};

inline void check_gauge(const SpinorField& f, const MetricChart& chart) {
  if (!f.gauge.empty() && f.gauge != chart.name)
    throw std::invalid_argument("spinor field gauge '" + f.gauge + "' does not match chart '" +
                                chart.name + "'");
}

inline SpinorField constant_spinor_field(const CliffordRep& rep, const Spinor& v, int chart_dim,
                                         std::string gauge = "") {
  SpinorField f;
  f.rep = &rep;
  f.value = [v](const VecR&) { return v; };
  f.jac = [rows = v.size(), chart_dim](const VecR&) { return MatC::Zero(rows, chart_dim); };
  f.gauge = std::move(gauge);
  return f;
}

// scale a field by exp(c * sigma(x)), chain-ruling the jacobian
inline SpinorField scale_by_exp(const SpinorField& f, double c, const ScalarFn& sigma,
                                const MetricChart& chart) {
  SpinorField out = f;
  auto base_val = f.value;
  out.value = [base_val, c, sigma](const VecR& x) {
    return VecC(std::exp(c * sigma.f(x)) * base_val(x));
  };
  if (f.jac && sigma.grad) {
    auto base_jac = f.jac;
    out.jac = [base_val, base_jac, c, sigma](const VecR& x) {
      const double w = std::exp(c * sigma.f(x));
      const VecR gr = sigma.grad(x);
      MatC j = w * base_jac(x);
      const VecC v = base_val(x);
      for (int k = 0; k < gr.size(); ++k) j.col(k) += w * c * gr(k) * v;
      return j;
    };
  } else {
    out.jac = nullptr;
  }
  (void)chart;
  return out;
}

// ---------------------------------------------------------------------------
// Spin connection

// omega_{ab}(d_k) = g(nabla_{d_k} e_a, e_b) for the chart frame; returned as
// omega[k](a,b).
inline std::vector<MatR> spin_connection_coordinate(const MetricChart& chart,
                                                    const FrameField& frame, const VecR& x) {
  const int n = chart.dim;
  const MatR e = frame.frame(x);
  const MatR g = chart.metric(x);
  const Tensor3 gam = christoffel(chart, x);
  std::vector<MatR> om(n, MatR(n, n));
  std::vector<MatR> de(n);
  for (int k = 0; k < n; ++k) de[k] = frame.dframe(x, k);
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a) {
      VecR nab = de[k].col(a);
      for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += gam(i, k, j) * e(j, a);
        nab(i) += s;
      }
      for (int b = 0; b < n; ++b) om[k](a, b) = nab.dot(g * e.col(b));
    }
  return om;
}

// omega_{ab}(e_c), the frame-direction components
inline Tensor3 spin_connection(const MetricChart& chart, const FrameField& frame, const VecR& x) {
  const int n = chart.dim;
  const auto om = spin_connection_coordinate(chart, frame, x);
  const MatR e = frame.frame(x);
  Tensor3 out(n);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0;
        for (int k = 0; k < n; ++k) s += e(k, c) * om[k](a, b);
        out(a, b, c) = s;
      }
  return out;
}

// coefficient matrices A_k with nabla^S_{d_k} phi = d_k phi + A_k phi:
// A_k = 1/4 sum_{a,b} eta^aa eta^bb omega_{ab}(d_k) gamma_a gamma_b
inline std::vector<MatC> spinor_connection_matrices(const CliffordRep& rep,
                                                    const MetricChart& chart,
                                                    const FrameField& frame, const VecR& x) {
  const int n = chart.dim;
  const auto om = spin_connection_coordinate(chart, frame, x);
  std::vector<MatC> a(n, MatC::Zero(rep.dim, rep.dim));
  for (int k = 0; k < n; ++k)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const double c = 0.25 * rep.eta_inv(p) * rep.eta_inv(q) * om[k](p, q);
        if (c != 0.0) a[k] += c * (rep.gamma[p] * rep.gamma[q]);
      }
  return a;
}

// nabla^S along the frame direction e_a
inline Spinor spinor_derivative(const CliffordRep& rep, const MetricChart& chart,
                                const FrameField& frame, const SpinorField& field, int a,
                                const VecR& x) {
  check_gauge(field, chart);
  const MatR e = frame.frame(x);
  const MatC j = field.jacobian(chart, x);
  const auto am = spinor_connection_matrices(rep, chart, frame, x);
  const VecC phi = field.value(x);
  VecC out = VecC::Zero(rep.dim);
  for (int k = 0; k < chart.dim; ++k) out += e(k, a) * (j.col(k) + am[k] * phi);
  return out;
}

// all frame-direction derivatives at once (one jacobian evaluation)
inline std::vector<Spinor> spinor_derivatives(const CliffordRep& rep, const MetricChart& chart,
                                              const FrameField& frame, const SpinorField& field,
                                              const VecR& x) {
  check_gauge(field, chart);
  const MatR e = frame.frame(x);
  const MatC j = field.jacobian(chart, x);
  const auto am = spinor_connection_matrices(rep, chart, frame, x);
  const VecC phi = field.value(x);
  std::vector<Spinor> out(chart.dim, VecC::Zero(rep.dim));
  for (int a = 0; a < chart.dim; ++a)
    for (int k = 0; k < chart.dim; ++k) out[a] += e(k, a) * (j.col(k) + am[k] * phi);
  return out;
}

// D = sum_a eta^aa gamma_a nabla^S_{e_a}
inline Spinor dirac_operator(const CliffordRep& rep, const MetricChart& chart,
                             const FrameField& frame, const SpinorField& field, const VecR& x) {
  const auto ders = spinor_derivatives(rep, chart, frame, field, x);
  VecC out = VecC::Zero(rep.dim);
  for (int a = 0; a < chart.dim; ++a) out += rep.eta_inv(a) * (rep.gamma[a] * ders[a]);
  return out;
}

// max_a |nabla^S_{e_a} phi + (1/n) e_a . D phi|
inline double twistor_residual(const CliffordRep& rep, const MetricChart& chart,
                               const FrameField& frame, const SpinorField& field, const VecR& x) {
  const auto ders = spinor_derivatives(rep, chart, frame, field, x);
  VecC dphi = VecC::Zero(rep.dim);
  for (int a = 0; a < chart.dim; ++a) dphi += rep.eta_inv(a) * (rep.gamma[a] * ders[a]);
  double worst = 0;
  for (int a = 0; a < chart.dim; ++a) {
    VecC r = ders[a] + (1.0 / chart.dim) * (rep.gamma[a] * dphi);
    worst = std::max(worst, r.norm());
  }
  return worst;
}

enum class SpecialKind { parallel, killing, twistor };

struct SpecialSpinorVerdict {
  SpecialKind kind;
  cplx lambda{0, 0};
  double max_residual = 0;
  bool pass = false;
  bool degenerate = false;  // zero field passes everything trivially
};

inline SpecialSpinorVerdict special_spinor_check(const CliffordRep& rep, const MetricChart& chart,
                                                 const FrameField& frame, const SpinorField& field,
                                                 SpecialKind kind, cplx lambda,
                                                 const std::vector<VecR>& pts, double tol) {
  SpecialSpinorVerdict v;
  v.kind = kind;
  v.lambda = lambda;
  double field_scale = 0;
  for (const auto& x : pts) {
    field_scale = std::max(field_scale, field.value(x).norm());
    if (kind == SpecialKind::twistor) {
      v.max_residual = std::max(v.max_residual, twistor_residual(rep, chart, frame, field, x));
    } else {
      const auto ders = spinor_derivatives(rep, chart, frame, field, x);
      const VecC phi = field.value(x);
      for (int a = 0; a < chart.dim; ++a) {
        VecC r = ders[a];
        if (kind == SpecialKind::killing) r -= lambda * (rep.gamma[a] * phi);
        v.max_residual = std::max(v.max_residual, r.norm());
      }
    }
  }
  v.degenerate = field_scale < 1e-12;
  v.pass = v.max_residual <= tol;
  return v;
}

// ---------------------------------------------------------------------------
// Integrability conditions for twistor spinors

// W(eta).phi = 0, W(X^Y).D phi = n C(X,Y).phi, V_phi _| C = 0, V_phi _| W = 0,
// evaluated in the frame gauge at x.
inline IdentityReport integrability_check(const CliffordRep& rep, const MetricChart& chart,
                                          const FrameField& frame, const SpinorField& field,
                                          const VecR& x, double tol = 1e-6,
                                          bool check_precondition = true) {
  IdentityReport out;
  if (check_precondition) {
    const double tw = twistor_residual(rep, chart, frame, field, x);
    if (tw > 200 * tol)
      throw std::invalid_argument("integrability_check: field fails the twistor precondition");
  }
  const int n = chart.dim;
  const CurvaturePack pack = curvature_pack(chart, x);
  const MatR e = frame.frame(x);

  // frame components of W and C
  Tensor4 wf(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                  s += pack.weyl(i, j, k, l) * e(i, a) * e(j, b) * e(k, c) * e(l, d);
          wf(a, b, c, d) = s;
        }
  Tensor3 cf(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) s += pack.cotton(i, j, k) * e(i, a) * e(j, b) * e(k, c);
        cf(a, b, c) = s;
      }

  const VecC phi = field.value(x);
  VecC dphi = VecC::Zero(rep.dim);
  {
    const auto ders = spinor_derivatives(rep, chart, frame, field, x);
    for (int a = 0; a < n; ++a) dphi += rep.eta_inv(a) * (rep.gamma[a] * ders[a]);
  }
  const double wscale = 1 + pack.weyl.max_abs();
  const double cscale = 1 + pack.cotton.max_abs();
  const double pscale = 1 + phi.norm();
  const double dscale = 1 + dphi.norm();

  double eq2 = 0, eq3 = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      // W applied to e_a ^ e_b, as a 2-vector in the frame (indices raised)
      MatR w2 = MatR::Zero(n, n);
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          w2(c, d) = rep.eta_inv(c) * rep.eta_inv(d) * wf(a, b, c, d);
      eq2 = std::max(eq2, form_action(rep, w2, phi).norm() / (wscale * pscale));
      VecR cvec(n);
      for (int c = 0; c < n; ++c) cvec(c) = rep.eta_inv(c) * cf(a, b, c);
      VecC lhs = form_action(rep, w2, dphi);
      VecC rhs = static_cast<double>(n) * vector_action(rep, cvec, phi);
      eq3 = std::max(eq3, (lhs - rhs).norm() / (wscale * dscale + cscale * pscale));
    }
  out.add(make_check("spin_geometry", "integrability_check", "W(eta).phi=0", eq2, tol));
  out.add(make_check("spin_geometry", "integrability_check", "W(X^Y).Dphi=nC(X,Y).phi", eq3, tol));

  const VecR vphi = dirac_current(rep, phi).components;  // frame components
  double vc = 0, vw = 0;
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) {
      double s = 0;
      for (int a = 0; a < n; ++a) s += vphi(a) * cf(a, b, c);
      vc = std::max(vc, std::abs(s) / (cscale * (1 + vphi.norm())));
      for (int d = 0; d < n; ++d) {
        double t = 0;
        for (int a = 0; a < n; ++a) t += vphi(a) * wf(a, b, c, d);
        vw = std::max(vw, std::abs(t) / (wscale * (1 + vphi.norm())));
      }
    }
  out.add(make_check("spin_geometry", "integrability_check", "V_phi_|C=0", vc, tol));
  out.add(make_check("spin_geometry", "integrability_check", "V_phi_|W=0", vw, tol));
  return out;
}

// ---------------------------------------------------------------------------
// Conformal covariance of D and P

// Checks D_{g~} = e^{-(n+1)s/2} D_g e^{(n-1)s/2} and
// P_{g~} = e^{-s/2} P_g e^{-s/2} on the given field at the given points,
// identifying spinor bundles through the rescaled deterministic frame.
inline IdentityReport conformal_covariance_check(const CliffordRep& rep, const MetricChart& chart,
                                                 const ScalarFn& sigma, const SpinorField& field,
                                                 const std::vector<VecR>& pts, double tol = 1e-6) {
  IdentityReport out;
  const int n = chart.dim;
  const MetricChart resc = conformal_rescale(chart, sigma);
  const FrameField frame = orthonormal_frame(chart);
  const FrameField frame2 = orthonormal_frame(resc);

  SpinorField f_plus = scale_by_exp(field, 0.5 * (n - 1), sigma, chart);    // e^{(n-1)s/2} psi
  SpinorField f_half = scale_by_exp(field, -0.5, sigma, chart);             // e^{-s/2} psi
  SpinorField field2 = field;
  field2.gauge = resc.name;
  f_half.gauge = chart.name;

  double resD = 0, resP = 0;
  for (const auto& x : pts) {
    const double s = sigma.f(x);
    // Dirac law
    VecC lhs = dirac_operator(rep, resc, frame2, field2, x);
    VecC rhs = std::exp(-0.5 * (n + 1) * s) * dirac_operator(rep, chart, frame, f_plus, x);
    resD = std::max(resD, (lhs - rhs).norm() / (1 + rhs.norm()));

    // twistor operator law, per frame direction
    const auto d2 = spinor_derivatives(rep, resc, frame2, field2, x);
    VecC dphi2 = VecC::Zero(rep.dim);
    for (int a = 0; a < n; ++a) dphi2 += rep.eta_inv(a) * (rep.gamma[a] * d2[a]);
    const auto d1 = spinor_derivatives(rep, chart, frame, f_half, x);
    VecC dphi1 = VecC::Zero(rep.dim);
    for (int a = 0; a < n; ++a) dphi1 += rep.eta_inv(a) * (rep.gamma[a] * d1[a]);
    for (int a = 0; a < n; ++a) {
      VecC p2 = d2[a] + (1.0 / n) * (rep.gamma[a] * dphi2);
      VecC p1 = d1[a] + (1.0 / n) * (rep.gamma[a] * dphi1);
      VecC want = std::exp(-0.5 * s) * p1;
      resP = std::max(resP, (p2 - want).norm() / (1 + want.norm()));
    }
  }
  out.add(make_check("spin_geometry", "conformal_covariance_check", "dirac_law", resD, tol));
  out.add(make_check("spin_geometry", "conformal_covariance_check", "twistor_law", resP, tol));
  return out;
}

// ---------------------------------------------------------------------------
// Lightlike Killing analysis (the epsilon classification)

enum class KillingVerdict { fefferman_type, brinkmann_type, invalid };

inline const char* to_string(KillingVerdict v) {
  switch (v) {
    case KillingVerdict::fefferman_type: return "fefferman_type";
    case KillingVerdict::brinkmann_type: return "brinkmann_type";
    case KillingVerdict::invalid: return "invalid";
  }
  return "?";
}

struct LightlikeKillingAnalysis {
  MatR j;           // J(X) = nabla_X V, as j(k,a) X^a
  VecR theta;       // g(V, .)
  VecR eta;         // K(V, .)
  VecR t_vec;       // eta^sharp
  double eta_v = 0;    // K(V,V); the J^2 identity holds with this constant
  double ric_vv = 0;   // Ric(V,V); the classification sign
  int eps = 0;         // sign(Ric(V,V)) after normalization
  double twist = 0;
  KillingVerdict verdict = KillingVerdict::invalid;
  IdentityReport report;
};

inline LightlikeKillingAnalysis lightlike_killing_analysis(const MetricChart& chart,
                                                           const VecField& vf, const VecR& x,
                                                           const std::vector<VecR>& region,
                                                           double tol = 1e-6) {
  const int n = chart.dim;
  LightlikeKillingAnalysis out;

  // preconditions: lightlike and Killing on the region
  double kill = 0, light = 0;
  for (const auto& p : region) {
    kill = std::max(kill, killing_residual(chart, vf, p));
    const VecR v = vf.v(p);
    light = std::max(light, std::abs((v.transpose() * chart.metric(p) * v)(0)));
  }
  kill = std::max(kill, killing_residual(chart, vf, x));
  if (kill > 100 * tol || light > 100 * tol)
    throw std::invalid_argument("lightlike_killing_analysis: V is not lightlike Killing");
  out.report.add(make_check("spin_geometry", "lightlike_killing_analysis", "killing", kill, tol));
  out.report.add(make_check("spin_geometry", "lightlike_killing_analysis", "lightlike", light, tol));

  const MatR g = chart.metric(x);
  const MatR gi = chart.inv_metric(x);
  const VecR v = vf.v(x);
  out.j = covariant_derivative_field(chart, vf, x);
  out.theta = g * v;
  const CurvaturePack pack = curvature_pack(chart, x);
  out.eta = pack.rho * v;
  out.t_vec = gi * out.eta;
  out.eta_v = out.eta.dot(v);
  out.ric_vv = (v.transpose() * pack.ricci * v)(0);

  const double vscale = 1 + v.squaredNorm();
  // (J1) J^2 X = eta(V) X - theta(X) T - eta(X) V
  MatR j2 = out.j * out.j;
  MatR rhs = out.eta_v * MatR::Identity(n, n) - out.t_vec * out.theta.transpose() -
             v * out.eta.transpose();
  out.report.add(make_check("spin_geometry", "lightlike_killing_analysis", "J1",
                            (j2 - rhs).cwiseAbs().maxCoeff() / vscale, tol));
  // (J2) g(T,V) = eta(V), g(T,T) = 0, g(V,V) = 0
  const double j2a = std::abs(out.t_vec.dot(g * v) - out.eta_v);
  const double j2b = std::abs(out.t_vec.dot(g * out.t_vec));
  out.report.add(make_check("spin_geometry", "lightlike_killing_analysis", "J2",
                            std::max({j2a, j2b, light}) / vscale, tol));
  // (J3) dtheta(X,Y) = 2 g(JX,Y)
  auto theta_fn = [&](const VecR& y) { return VecR(chart.metric(y) * vf.v(y)); };
  const double h = chart.fd_step(x);
  MatR dth(n, n);
  std::vector<VecR> d(n);
  for (int k = 0; k < n; ++k) {
    auto diff = [&](double s) {
      VecR xp = x, xm = x;
      xp(k) += s;
      xm(k) -= s;
      return VecR((theta_fn(xp) - theta_fn(xm)) / (2 * s));
    };
    d[k] = (4.0 * diff(h / 2) - diff(h)) / 3.0;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) dth(a, b) = d[a](b) - d[b](a);
  const MatR gj = g * out.j;
  double j3 = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) j3 = std::max(j3, std::abs(dth(a, b) - 2 * gj(b, a)));
  out.report.add(make_check("spin_geometry", "lightlike_killing_analysis", "J3", j3 / vscale, tol));
  // J skew-adjoint, J V = J T = 0
  out.report.add(make_check("spin_geometry", "lightlike_killing_analysis", "J_skew",
                            (gj + gj.transpose()).cwiseAbs().maxCoeff() / vscale, tol));
  out.report.add(make_check("spin_geometry", "lightlike_killing_analysis", "JV=0",
                            (out.j * v).norm() / vscale, tol));
  out.report.add(make_check("spin_geometry", "lightlike_killing_analysis", "JT=0",
                            (out.j * out.t_vec).norm() / (1 + out.t_vec.norm() * v.norm()), tol));

  // Ric(V,V) constant over the region
  double rmin = out.ric_vv, rmax = out.ric_vv;
  for (const auto& p : region) {
    const VecR vp = vf.v(p);
    const Tensor4 up = riemann_up(chart, p);
    const double r = (vp.transpose() * ricci_from_up(up) * vp)(0);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  out.report.add(make_check("spin_geometry", "lightlike_killing_analysis", "Ric(V,V)_constant",
                            (rmax - rmin) / (1 + std::abs(out.ric_vv)), tol));

  out.twist = twist_measure(chart, vf, x);
  const double band = 1e-8 * vscale * vscale;
  out.eps = std::abs(out.ric_vv) <= band ? 0 : (out.ric_vv > 0 ? 1 : -1);
  out.verdict = out.eps == 1 ? KillingVerdict::fefferman_type
                             : (out.eps == 0 ? KillingVerdict::brinkmann_type : KillingVerdict::invalid);
  return out;
}

// ---------------------------------------------------------------------------
// Parallel transport along polylines (4th order fixed-step RK)

inline VecR transport_vector(const MetricChart& chart, const std::vector<VecR>& path,
                             const VecR& v0, int steps_per_segment = 48) {
  VecR v = v0;
  for (size_t s = 0; s + 1 < path.size(); ++s) {
    const VecR a = path[s], b = path[s + 1];
    const VecR dir = b - a;
    const double h = 1.0 / steps_per_segment;
    auto rhs = [&](double t, const VecR& w) {
      const Tensor3 gam = christoffel(chart, a + t * dir);
      VecR out = VecR::Zero(chart.dim);
      for (int k = 0; k < chart.dim; ++k) {
        double sum = 0;
        for (int i = 0; i < chart.dim; ++i)
          for (int j = 0; j < chart.dim; ++j) sum += gam(k, i, j) * dir(i) * w(j);
        out(k) = -sum;
      }
      return out;
    };
    double t = 0;
    for (int it = 0; it < steps_per_segment; ++it) {
      const VecR k1 = rhs(t, v);
      const VecR k2 = rhs(t + h / 2, v + 0.5 * h * k1);
      const VecR k3 = rhs(t + h / 2, v + 0.5 * h * k2);
      const VecR k4 = rhs(t + h, v + h * k3);
      v += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
      t += h;
    }
  }
  return v;
}

// spinor transport for nabla^S - lambda gamma(.) (lambda = 0: parallel)
inline VecC transport_spinor(const CliffordRep& rep, const MetricChart& chart,
                             const FrameField& frame, const std::vector<VecR>& path,
                             const VecC& psi0, cplx lambda = cplx(0, 0),
                             int steps_per_segment = 48) {
  VecC psi = psi0;
  for (size_t s = 0; s + 1 < path.size(); ++s) {
    const VecR a = path[s], b = path[s + 1];
    const VecR dir = b - a;
    const double h = 1.0 / steps_per_segment;
    auto rhs = [&](double t, const VecC& w) {
      const VecR x = a + t * dir;
      const auto am = spinor_connection_matrices(rep, chart, frame, x);
      MatC m = MatC::Zero(rep.dim, rep.dim);
      for (int k = 0; k < chart.dim; ++k) m += dir(k) * am[k];
      if (lambda != cplx(0, 0)) {
        const VecR dirf = frame.to_frame(x, dir);
        m -= lambda * gamma_of_vector(rep, dirf);
      }
      return VecC(-m * w);
    };
    double t = 0;
    for (int it = 0; it < steps_per_segment; ++it) {
      const VecC k1 = rhs(t, psi);
      const VecC k2 = rhs(t + h / 2, psi + 0.5 * h * k1);
      const VecC k3 = rhs(t + h / 2, psi + 0.5 * h * k2);
      const VecC k4 = rhs(t + h, psi + h * k3);
      psi += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
      t += h;
    }
  }
  return psi;
}

// Field defined by transporting an initial value from the chart center along
// axis-ordered polylines; exact for flat modified connections, residual-tested
// otherwise.
inline SpinorField transported_spinor_field(const CliffordRep& rep, const MetricChart& chart,
                                            const FrameField& frame, const VecR& x0,
                                            const VecC& psi0, cplx lambda,
                                            int steps_per_segment = 32) {
  SpinorField f;
  f.rep = &rep;
  f.gauge = chart.name;
  const CliffordRep* rp = &rep;
  const MetricChart* cp = &chart;
  f.value = [rp, cp, frame, x0, psi0, lambda, steps_per_segment](const VecR& x) {
    std::vector<VecR> path{x0};
    VecR cur = x0;
    for (int k = 0; k < cp->dim; ++k) {
      if (std::abs(x(k) - cur(k)) < 1e-15) continue;
      cur(k) = x(k);
      path.push_back(cur);
    }
    if (path.size() == 1) return psi0;
    return transport_spinor(*rp, *cp, frame, path, psi0, lambda, steps_per_segment);
  };
  return f;
}

// ---------------------------------------------------------------------------
// Killing decomposition of a normalized twistor spinor

struct KillingDecomposition {
  SpinorField psi_plus, psi_minus;
  cplx lambda_plus{0, 0}, lambda_minus{0, 0};
  double scalar_curvature = 0;
  IdentityReport report;
};

// psi_pm = 1/2 phi +- sqrt((n-1)/(n R)) D phi for a twistor spinor of
// constant length +-1 on an Einstein chart with constant R != 0.
inline KillingDecomposition killing_decompose(const CliffordRep& rep, const MetricChart& chart,
                                              const FrameField& frame, const SpinorField& field,
                                              const std::vector<VecR>& pts, double tol = 1e-6) {
  if (pts.empty()) throw std::invalid_argument("killing_decompose: empty sample set");
  const int n = chart.dim;
  KillingDecomposition out;

  // preconditions: twistor, constant length +-1, constant nonzero scalar curvature
  double tw = 0, len_dev = 0;
  const double len0 = indefinite_inner(rep, field.value(pts[0]), field.value(pts[0])).real();
  for (const auto& x : pts) {
    tw = std::max(tw, twistor_residual(rep, chart, frame, field, x));
    len_dev = std::max(len_dev, std::abs(indefinite_inner(rep, field.value(x), field.value(x)).real() - len0));
  }
  if (tw > 100 * tol) throw std::invalid_argument("killing_decompose: field is not a twistor spinor");
  if (std::abs(std::abs(len0) - 1.0) > 1e-4 || len_dev > 100 * tol)
    throw std::invalid_argument("killing_decompose: <phi,phi> is not constant +-1");
  out.report.add(make_check("spin_geometry", "killing_decompose", "twistor_pre", tw, tol));
  out.report.add(make_check("spin_geometry", "killing_decompose", "length_constant", len_dev, tol));

  double rmin = 0, rmax = 0;
  {
    bool first = true;
    for (const auto& x : pts) {
      const CurvaturePack p = curvature_pack(chart, x);
      if (first) {
        rmin = rmax = p.scalar;
        first = false;
      }
      rmin = std::min(rmin, p.scalar);
      rmax = std::max(rmax, p.scalar);
    }
  }
  const double r = 0.5 * (rmin + rmax);
  out.scalar_curvature = r;
  out.report.add(make_check("spin_geometry", "killing_decompose", "R_constant",
                            (rmax - rmin) / (1 + std::abs(r)), tol));
  if (std::abs(r) < 1e-6)
    throw std::invalid_argument("killing_decompose: R = 0, use the parallel-spinor branch");

  // Einstein scalar relation R = -4(n-1)/n <Dphi,Dphi>/<phi,phi> at the sample points
  double einstein_res = 0;
  for (const auto& x : pts) {
    const VecC dphi = dirac_operator(rep, chart, frame, field, x);
    const VecC phi = field.value(x);
    const cplx num = indefinite_inner(rep, dphi, dphi);
    const cplx den = indefinite_inner(rep, phi, phi);
    const cplx rhs = -4.0 * (n - 1) / static_cast<double>(n) * num / den;
    einstein_res = std::max(einstein_res, std::abs(rhs - r) / (1 + std::abs(r)));
  }
  out.report.add(make_check("spin_geometry", "killing_decompose", "einstein_scalar", einstein_res, 100 * tol));

  // the decomposition; sqrt taken on the principal branch (imaginary for R<0)
  const cplx s = std::sqrt(cplx(static_cast<double>(n - 1) / (n * r), 0.0));
  const double mu = 0.5 * std::sqrt(-r / (n * (n - 1.0)));  // |Killing number|
  out.lambda_plus = cplx(0, mu);
  out.lambda_minus = cplx(0, -mu);

  // A Killing spinor is fixed by its value at one point. Each half is built
  // by extending the decomposition value at the chart center with its own
  // Killing connection; pointwise agreement with 1/2 phi +- s D phi is then
  // checked separately, so no quantity is differentiated twice.
  const VecR xc = chart.center();
  const VecC dphi_c = dirac_operator(rep, chart, frame, field, xc);
  const VecC phi_c = field.value(xc);
  out.psi_plus = transported_spinor_field(rep, chart, frame, xc,
                                          VecC(0.5 * phi_c + s * dphi_c), out.lambda_plus, 64);
  out.psi_minus = transported_spinor_field(rep, chart, frame, xc,
                                           VecC(0.5 * phi_c - s * dphi_c), out.lambda_minus, 64);

  for (int half = 0; half < 2; ++half) {
    const SpinorField& f = half == 0 ? out.psi_plus : out.psi_minus;
    const cplx lam = half == 0 ? out.lambda_plus : out.lambda_minus;
    const double sgn = half == 0 ? 1.0 : -1.0;
    auto verdict = special_spinor_check(rep, chart, frame, f, SpecialKind::killing, lam, pts, tol);
    out.report.add(make_check("spin_geometry", "killing_decompose",
                              half == 0 ? "psi_plus_killing" : "psi_minus_killing",
                              verdict.degenerate ? 0.0 : verdict.max_residual, tol));
    double agree = 0;
    for (const auto& x : pts) {
      const VecC want = 0.5 * field.value(x) + sgn * s * dirac_operator(rep, chart, frame, field, x);
      agree = std::max(agree, (f.value(x) - want).norm() / (1 + phi_c.norm()));
    }
    out.report.add(make_check("spin_geometry", "killing_decompose",
                              half == 0 ? "psi_plus_formula" : "psi_minus_formula", agree, tol));
  }

  // Q_phi = <phi,phi>^2 + g(V_phi,V_phi) constant over the sample set
  double qmin = 0, qmax = 0;
  bool first = true;
  for (const auto& x : pts) {
    const VecC phi = field.value(x);
    const double q = std::pow(indefinite_inner(rep, phi, phi).real(), 2) +
                     minkowski_norm2(dirac_current(rep, phi).components);
    if (first) {
      qmin = qmax = q;
      first = false;
    }
    qmin = std::min(qmin, q);
    qmax = std::max(qmax, q);
  }
  out.report.add(make_check("spin_geometry", "killing_decompose", "Q_phi_constant", qmax - qmin, tol));
  return out;
}

// ---------------------------------------------------------------------------
// Special Kaehler flag check on a Brinkmann chart

// E = V^perp / RV realized as the span of the chart's transverse coordinate
// directions; j_e is a constant complex structure on those coordinates.
inline IdentityReport kaehler_flag_check(const MetricChart& chart, const VecField& vf,
                                         const std::vector<int>& transverse, const MatR& j_e,
                                         const std::vector<VecR>& pts, double tol = 1e-6) {
  IdentityReport out;
  const int n = chart.dim;
  const int t = static_cast<int>(transverse.size());

  double par = 0;
  for (const auto& x : pts) par = std::max(par, covariant_derivative_field(chart, vf, x).cwiseAbs().maxCoeff());
  if (par > 100 * tol) throw std::invalid_argument("kaehler_flag_check: V is not parallel");
  out.add(make_check("spin_geometry", "kaehler_flag_check", "V_parallel", par, tol));

  // induced connection coefficient matrices on E, per coordinate direction
  auto conn = [&](const VecR& x) {
    const Tensor3 gam = christoffel(chart, x);
    std::vector<MatR> c(n, MatR(t, t));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) c[k](i, j) = gam(transverse[i], k, transverse[j]);
    return c;
  };

  double orth = 0, parJ = 0, trace_cond = 0;
  for (const auto& x : pts) {
    const MatR g = chart.metric(x);
    MatR ge(t, t);
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < t; ++j) ge(i, j) = g(transverse[i], transverse[j]);
    orth = std::max(orth, (j_e.transpose() * ge * j_e - ge).cwiseAbs().maxCoeff());

    const auto c = conn(x);
    for (int k = 0; k < n; ++k)
      parJ = std::max(parJ, (c[k] * j_e - j_e * c[k]).cwiseAbs().maxCoeff());

    // curvature of the induced connection by finite differences
    const double h = chart.fd_step(x);
    std::vector<std::vector<MatR>> dc(n);
    for (int l = 0; l < n; ++l) {
      VecR xp = x, xm = x;
      xp(l) += h;
      xm(l) -= h;
      const auto cp = conn(xp), cm = conn(xm);
      dc[l].resize(n);
      for (int k = 0; k < n; ++k) dc[l][k] = (cp[k] - cm[k]) / (2 * h);
    }
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l) {
        const MatR rkl = dc[k][l] - dc[l][k] + c[k] * c[l] - c[l] * c[k];
        trace_cond = std::max(trace_cond, std::abs((j_e * rkl).trace()));
      }
  }
  out.add(make_check("spin_geometry", "kaehler_flag_check", "J_orthogonal", orth, tol));
  out.add(make_check("spin_geometry", "kaehler_flag_check", "J_parallel", parJ, tol));
  out.add(make_check("spin_geometry", "kaehler_flag_check", "trace(J.R)=0", trace_cond, tol));
  return out;
}

}  // namespace lsg

