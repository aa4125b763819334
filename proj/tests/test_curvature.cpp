#include <doctest.h>

#include "lsg/frame.hpp"
#include "lsg/geometries.hpp"
#include "lsg/random.hpp"
#include "lsg/suites.hpp"

using namespace lsg;

namespace {

// Poincare disk of Gauss curvature -1 (scalar curvature -2), test-local
MetricChart hyperbolic_disk() {
  MetricChart c = make_chart("hyperbolic", {"x", "y"}, VecR::Constant(2, -0.6),
                             VecR::Constant(2, 0.6), [](const VecR& p) {
                               const double w = 4.0 / std::pow(1.0 - p.squaredNorm(), 2);
                               return MatR(w * MatR::Identity(2, 2));
                             });
  c.timelike_count = 0;
  return c;
}

// product (-dt^2 + hyperbolic disk + dz^2): curved, not a pp-manifold
MetricChart hyperbolic_product() {
  MetricChart c = make_chart("hyp_product", {"t", "x", "y", "z"}, VecR::Constant(4, -0.5),
                             VecR::Constant(4, 0.5), [](const VecR& p) {
                               MatR g = MatR::Identity(4, 4);
                               g(0, 0) = -1;
                               const double w =
                                   4.0 / std::pow(1.0 - p(1) * p(1) - p(2) * p(2), 2);
                               g(1, 1) = g(2, 2) = w;
                               return g;
                             });
  return c;
}

}  // namespace

TEST_CASE("Minkowski chart: vanishing connection and curvature stack") {
  auto spec = minkowski(4);
  VecR x(4);
  x << 0.3, -0.2, 0.1, 0.4;
  CHECK(christoffel(*spec.chart, x).max_abs() == 0.0);
  auto p = curvature_pack(*spec.chart, x);
  CHECK(p.riemann.max_abs() < 1e-12);
  CHECK(p.ricci.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(p.scalar) < 1e-12);
  CHECK(p.weyl.max_abs() < 1e-12);
  CHECK(p.cotton.max_abs() < 1e-10);
}

TEST_CASE("pp-wave: hand-derived Christoffel symbols and Ricci") {
  const int n = 4;
  auto spec = pp_wave(n, default_pp_profile(n));
  const MetricChart& chart = *spec.chart;
  VecR x(4);
  x << 0.1, 0.25, 0.3, -0.35;

  Poly f = default_pp_profile(n);
  const double fs = f.derivative(1).eval(x);
  const double fx1 = f.derivative(2).eval(x);
  const double fx2 = f.derivative(3).eval(x);

  auto gam = christoffel(chart, x);
  CHECK(std::abs(gam(0, 1, 1) - 0.5 * fs) < 1e-11);   // Gamma^t_ss
  CHECK(std::abs(gam(0, 1, 2) - 0.5 * fx1) < 1e-11);  // Gamma^t_{s x1}
  CHECK(std::abs(gam(0, 1, 3) - 0.5 * fx2) < 1e-11);
  CHECK(std::abs(gam(2, 1, 1) + 0.5 * fx1) < 1e-11);  // Gamma^{x1}_ss
  CHECK(std::abs(gam(3, 1, 1) + 0.5 * fx2) < 1e-11);
  // everything else vanishes
  double rest = 0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        if ((k == 0 && i == 1) || (k == 0 && j == 1) || (k >= 2 && i == 1 && j == 1)) continue;
        rest = std::max(rest, std::abs(gam(k, i, j)));
      }
  CHECK(rest < 1e-11);
  CHECK(christoffel_compat_residual(chart, x) < 1e-10);

  auto p = curvature_pack(chart, x);
  const double lap = f.derivative(2).derivative(2).eval(x) + f.derivative(3).derivative(3).eval(x);
  CHECK(std::abs(p.ricci(1, 1) + 0.5 * lap) < 1e-9);
  double offric = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(i == 1 && j == 1)) offric = std::max(offric, std::abs(p.ricci(i, j)));
  CHECK(offric < 1e-9);
  CHECK(std::abs(p.scalar) < 1e-9);
  CHECK(p.weyl.max_abs() > 1e-3);  // f is generic enough for Weyl != 0
  CHECK(weyl_trace_residual(p.g_inv, p.weyl) < 1e-7);
  CHECK(riemann_symmetry_residual(p.riemann) < 1e-9);
  CHECK(cotton_antisymmetry_residual(p.cotton) == 0.0);
}

TEST_CASE("hyperbolic disk: scalar curvature -2") {
  auto chart = hyperbolic_disk();
  VecR x(2);
  x << 0.2, -0.3;
  auto p = curvature_pack(chart, x);
  CHECK(std::abs(p.scalar + 2.0) < 1e-7);
}

TEST_CASE("Kulkarni-Nomizu product: symmetry and constant-curvature pattern") {
  Rng rng(3);
  const int n = 4;
  MatR h(n, n), k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      h(i, j) = h(j, i) = rng.normal();
      k(i, j) = k(j, i) = rng.normal();
    }
  auto hk = kulkarni_nomizu(h, k);
  auto kh = kulkarni_nomizu(k, h);
  double sym = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) sym = std::max(sym, std::abs(hk(a, b, c, d) - kh(a, b, c, d)));
  CHECK(sym < 1e-13);
  CHECK(riemann_symmetry_residual(hk) < 1e-12);
  CHECK(kulkarni_nomizu(MatR::Zero(n, n), k).max_abs() == 0.0);

  MatR eta = MatR::Identity(n, n);
  eta(0, 0) = -1;
  auto gg = kulkarni_nomizu(eta, eta);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      CHECK(std::abs(gg(a, b, a, b) - (2.0 * eta(a, a) * eta(b, b))) < 1e-14);
      CHECK(std::abs(gg(a, b, b, a) - (-2.0 * eta(a, a) * eta(b, b))) < 1e-14);
    }
}

TEST_CASE("finite-difference and analytic derivative pipelines agree") {
  auto spec = pp_wave(4, default_pp_profile(4));
  MetricChart fd_chart = *spec.chart;
  fd_chart.dg = nullptr;  // force finite differences
  fd_chart.d2g = nullptr;
  VecR x(4);
  x << -0.2, 0.15, 0.2, 0.1;
  auto ga = christoffel(*spec.chart, x);
  auto gf = christoffel(fd_chart, x);
  double worst = 0;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(ga(k, i, j) - gf(k, i, j)));
  CHECK(worst < 1e-6);
  auto ra = lower_riemann(spec.chart->metric(x), riemann_up(*spec.chart, x));
  auto rf = lower_riemann(fd_chart.metric(x), riemann_up(fd_chart, x));
  double worstr = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          worstr = std::max(worstr, std::abs(ra(a, b, c, d) - rf(a, b, c, d)));
  CHECK(worstr < 1e-6);
}

TEST_CASE("conformal rescale: Christoffel closed form and Weyl behavior") {
  Rng rng(5);
  auto spec = minkowski(4);
  const Poly sigp = random_quadratic(rng, 4, 0.2);
  ScalarFn sig = sigp.scalar_fn();
  MetricChart resc = conformal_rescale(*spec.chart, sig);
  VecR x(4);
  x << 0.1, 0.2, -0.3, 0.05;

  // conformal Christoffel: ds_i d^k_j + ds_j d^k_i - g_ij grad^k s
  const VecR gr = sig.grad(x);
  const MatR g = spec.chart->metric(x);
  const MatR gi = spec.chart->inv_metric(x);
  const VecR grad_up = gi * gr;
  auto gam = christoffel(resc, x);
  double worst = 0;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double want = (i == k ? gr(j) : 0.0) + (j == k ? gr(i) : 0.0) - g(i, j) * grad_up(k);
        worst = std::max(worst, std::abs(gam(k, i, j) - want));
      }
  CHECK(worst < 1e-9);

  // Weyl of a conformally flat chart vanishes
  auto p = curvature_pack(resc, x);
  CHECK(p.weyl.max_abs() < 1e-6 * (1 + p.riemann.max_abs()));

  // sigma = 0 keeps the chart
  Poly zero;
  zero.dim = 4;
  auto same = conformal_rescale(*spec.chart, zero.scalar_fn());
  CHECK((same.g(x) - g).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Weyl tensor is conformally invariant with weight e^{2 sigma}") {
  Rng rng(7);
  auto spec = pp_wave(4, default_pp_profile(4));
  const Poly sigp = random_quadratic(rng, 4, 0.1);
  ScalarFn sig = sigp.scalar_fn();
  MetricChart resc = conformal_rescale(*spec.chart, sig);
  VecR x(4);
  x << 0.12, 0.2, -0.25, 0.3;
  auto p1 = curvature_pack(*spec.chart, x);
  auto p2 = curvature_pack(resc, x);
  const double w = std::exp(2.0 * sig.f(x));
  double worst = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          worst = std::max(worst, std::abs(p2.weyl(a, b, c, d) - w * p1.weyl(a, b, c, d)));
  CHECK(worst < 1e-6 * (1 + p1.weyl.max_abs()));
}

TEST_CASE("second Bianchi identity holds to finite-difference accuracy") {
  auto spec = pp_wave(4, default_pp_profile(4));
  Rng rng(9);
  auto pts = random_interior_points(*spec.chart, rng, 3);
  for (const auto& x : pts) CHECK(second_bianchi_residual(*spec.chart, x) < 1e-5);
  auto es = einstein_sasaki_h2();
  auto pts2 = random_interior_points(*es.chart, rng, 2);
  for (const auto& x : pts2) CHECK(second_bianchi_residual(*es.chart, x) < 1e-5);
}

TEST_CASE("pp trace condition separates pp-manifolds from generic curvature") {
  auto spec = pp_wave(5, default_pp_profile(5));
  Rng rng(11);
  for (const auto& x : random_interior_points(*spec.chart, rng, 3))
    CHECK(pp_trace_residual(*spec.chart, x) < 1e-6);

  auto hp = hyperbolic_product();
  VecR y(4);
  y << 0.1, 0.25, -0.2, 0.3;
  CHECK(pp_trace_residual(hp, y) > 1.0);

  auto flat = minkowski(4);
  VecR z(4);
  z << 0.3, 0.1, 0.0, -0.2;
  CHECK(pp_trace_residual(*flat.chart, z) < 1e-14);
}

TEST_CASE("twist measure: exact duals and parallel null directions do not twist") {
  auto spec = pp_wave(4, default_pp_profile(4));
  VecR x(4);
  x << 0.1, 0.2, 0.1, -0.1;
  CHECK(twist_measure(*spec.chart, spec.vectors.at("parallel_null"), x) < 1e-9);

  auto flat = minkowski(4);
  VecField grad_field;  // gradient of a quadratic: theta exact, d theta = 0
  grad_field.v = [](const VecR& p) {
    VecR v(4);
    v << -(2 * p(0) + p(1)), 2 * p(1) + p(0), 4 * p(2), -2 * p(3);
    return v;
  };
  CHECK(twist_measure(*flat.chart, grad_field, x) < 1e-10);
}

TEST_CASE("Lie derivative of the metric: isometries, dilations, pp time translation") {
  auto flat = minkowski(3);
  VecR x(3);
  x << 0.2, 0.3, -0.1;
  VecField rot;  // spatial rotation
  rot.v = [](const VecR& p) {
    VecR v(3);
    v << 0, -p(2), p(1);
    return v;
  };
  CHECK(killing_residual(*flat.chart, rot, x) < 1e-10);

  VecField dil;
  dil.v = [](const VecR& p) { return VecR(p); };
  const MatR l = lie_derivative_metric(*flat.chart, dil, x);
  CHECK((l - 2.0 * flat.chart->metric(x)).cwiseAbs().maxCoeff() < 1e-10);  // pure trace
  CHECK(killing_residual(*flat.chart, dil, x) > 1.0);
  CHECK(conformal_killing_residual(*flat.chart, dil, x) < 1e-10);

  auto pp = pp_wave(4, default_pp_profile(4));
  VecR y(4);
  y << 0.0, 0.1, 0.2, 0.3;
  CHECK(killing_residual(*pp.chart, pp.vectors.at("parallel_null"), y) < 1e-10);
}

TEST_CASE("deterministic frames: coordinate frame on flat space, scaling under rescale") {
  auto flat = minkowski(4);
  FrameField fr = orthonormal_frame(*flat.chart);
  VecR x(4);
  x << 0.1, -0.2, 0.3, 0.0;
  CHECK((fr.frame(x) - MatR::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);

  auto pp = pp_wave(4, default_pp_profile(4));
  FrameField frpp = orthonormal_frame(*pp.chart);
  Rng rng(13);
  for (const auto& p : random_interior_points(*pp.chart, rng, 5))
    CHECK(frpp.orthonormality_residual(p) < 1e-9);

  const Poly sigp = random_quadratic(rng, 4, 0.2);
  ScalarFn sig = sigp.scalar_fn();
  MetricChart resc = conformal_rescale(*pp.chart, sig);
  FrameField fr2 = orthonormal_frame(resc);
  const VecR y = pp.chart->center();
  const double w = std::exp(-sig.f(y));
  CHECK((fr2.frame(y) - w * frpp.frame(y)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("degenerate metrics are rejected") {
  MetricChart bad = make_chart("bad", {"a", "b"}, VecR::Constant(2, -1), VecR::Constant(2, 1),
                               [](const VecR&) { return MatR::Zero(2, 2); });
  VecR x = VecR::Zero(2);
  CHECK_THROWS_AS(bad.inv_metric(x), std::runtime_error);
  CHECK_THROWS_AS(christoffel(bad, x), std::runtime_error);
}
