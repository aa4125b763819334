#pragma once

#include <map>
#include <memory>

#include "lsg/poly.hpp"
#include "lsg/spin_geometry.hpp"

namespace lsg {

// A model geometry: chart, Clifford data, bundled reference fields, and the
// list of expected verdicts the suite runner checks.
struct GeometrySpec {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  std::shared_ptr<MetricChart> chart;
  std::shared_ptr<CliffordRep> rep;  // null for non-Lorentzian charts
  std::map<std::string, VecField> vectors;
  std::map<std::string, SpinorField> spinors;
  std::vector<int> transverse;                          // E coordinates for Kaehler-flag checks
  MatR transverse_J;                                    // constant J on E (may be empty)
  std::function<MatR(const VecR&)> complex_structure;   // J^a_b field (cone)
  std::vector<std::string> expectations;

  FrameField frame() const { return orthonormal_frame(*chart); }
  bool expects(const std::string& tag) const {
    for (const auto& e : expectations)
      if (e == tag) return true;
    return false;
  }
};

// phi(x) = u + x.v on a flat chart (frame = coordinate frame)
inline SpinorField minkowski_twistor_field(std::shared_ptr<CliffordRep> rep,
                                           std::shared_ptr<MetricChart> chart, const Spinor& u,
                                           const Spinor& v) {
  SpinorField f;
  f.rep = rep.get();
  f.gauge = chart->name;
  f.value = [rep, u, v](const VecR& x) { return VecC(u + gamma_of_vector(*rep, x) * v); };
  f.jac = [rep, v](const VecR& x) {
    MatC j(rep->dim, x.size());
    for (int k = 0; k < x.size(); ++k) j.col(k) = rep->gamma[k] * v;
    return j;
  };
  return f;
}

inline GeometrySpec minkowski(int n) {
  GeometrySpec spec;
  spec.name = "minkowski";
  spec.params = {{"n", n}};
  auto chart = std::make_shared<MetricChart>();
  std::vector<std::string> coords(n);
  coords[0] = "t";
  for (int k = 1; k < n; ++k) coords[k] = "x" + std::to_string(k);
  MatR eta = MatR::Identity(n, n);
  eta(0, 0) = -1;
  *chart = make_chart("minkowski" + std::to_string(n), coords, VecR::Constant(n, -1.0),
                      VecR::Constant(n, 1.0), [eta](const VecR&) { return eta; });
  chart->dg = [n](const VecR&) { return Tensor3(n); };
  chart->d2g = [n](const VecR&) { return Tensor4(n); };
  spec.chart = chart;
  spec.rep = std::make_shared<CliffordRep>(build_rep(n));
  VecR time = VecR::Zero(n);
  time(0) = 1;
  spec.vectors.emplace("time", constant_field(time));
  // one representative of each kind; the full d_n family is generated on demand
  Spinor u0 = Spinor::Zero(spec.rep->dim);
  u0(0) = 1;
  spec.spinors.emplace("twistor_u0", minkowski_twistor_field(spec.rep, chart, u0, Spinor::Zero(spec.rep->dim)));
  spec.spinors.emplace("twistor_v0", minkowski_twistor_field(spec.rep, chart, Spinor::Zero(spec.rep->dim), u0));
  spec.expectations = {"flat", "twistor_family_full", "integrability"};
  return spec;
}

// full flat twistor family, d_n = 2 * 2^m fields
inline std::vector<SpinorField> minkowski_twistor_family(const GeometrySpec& spec) {
  std::vector<SpinorField> out;
  const int d = spec.rep->dim;
  for (int k = 0; k < d; ++k) {
    Spinor b = Spinor::Zero(d);
    b(k) = 1;
    out.push_back(minkowski_twistor_field(spec.rep, spec.chart, b, Spinor::Zero(d)));
    out.push_back(minkowski_twistor_field(spec.rep, spec.chart, Spinor::Zero(d), b));
  }
  return out;
}

// standard block complex structure on an even number of transverse coordinates
inline MatR standard_transverse_J(int t) {
  MatR j = MatR::Zero(t, t);
  for (int k = 0; k + 1 < t; k += 2) {
    j(k, k + 1) = -1;
    j(k + 1, k) = 1;
  }
  return j;
}

// pp-wave normal form dt ds + f(s,x) ds^2 + sum dx_i^2 on coords (t,s,x...).
// profile is a polynomial in the chart coordinates (t unused).
inline GeometrySpec pp_wave(int n, const Poly& profile) {
  if (n < 3 || n > 8) throw std::invalid_argument("pp_wave: n must be 3..8");
  GeometrySpec spec;
  spec.name = "pp-wave";
  spec.params = {{"n", n}};
  auto chart = std::make_shared<MetricChart>();
  std::vector<std::string> coords(n);
  coords[0] = "t";
  coords[1] = "s";
  for (int k = 2; k < n; ++k) coords[k] = "x" + std::to_string(k - 1);

  const Poly f = profile;
  std::vector<Poly> df, d2f;
  for (int k = 0; k < n; ++k) df.push_back(f.derivative(k));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) d2f.push_back(df[k].derivative(l));

  *chart = make_chart("pp-wave" + std::to_string(n), coords, VecR::Constant(n, -0.6),
                      VecR::Constant(n, 0.6), [f, n](const VecR& x) {
                        MatR g = MatR::Identity(n, n);
                        g(0, 0) = 0;
                        g(0, 1) = g(1, 0) = 1;
                        g(1, 1) = f.eval(x);
                        return g;
                      });
  chart->dg = [df, n](const VecR& x) {
    Tensor3 d(n);
    for (int k = 0; k < n; ++k) d(k, 1, 1) = df[k].eval(x);
    return d;
  };
  chart->d2g = [d2f, n](const VecR& x) {
    Tensor4 d(n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) d(k, l, 1, 1) = d2f[static_cast<size_t>(k) * n + l].eval(x);
    return d;
  };
  MatR seed = MatR::Identity(n, n);
  seed(1, 0) = -0.5;  // first frame vector from d_t - 1/2 d_s
  chart->frame_seed = seed;
  spec.chart = chart;
  spec.rep = std::make_shared<CliffordRep>(build_rep(n));

  VecR vnull = VecR::Zero(n);
  vnull(0) = 1;
  spec.vectors.emplace("parallel_null", constant_field(vnull));

  // parallel spinor: (1 - f/4)^{-1/4} phi0 with (gamma_1+gamma_2) phi0 = 0 in
  // the deterministic frame gauge; the scalar factor compensates the frame's
  // normalization of the null pair.
  Spinor phi0 = standard_basis_spinor(*spec.rep, std::vector<int>(spec.rep->m, 1));
  {
    SpinorField pf;
    pf.rep = spec.rep.get();
    pf.gauge = chart->name;
    auto repp = spec.rep;
    pf.value = [f, phi0](const VecR& x) {
      return VecC(std::pow(1.0 - f.eval(x) / 4.0, -0.25) * phi0);
    };
    pf.jac = [f, df, phi0, n](const VecR& x) {
      const double c = 1.0 - f.eval(x) / 4.0;
      MatC j(phi0.size(), n);
      for (int k = 0; k < n; ++k)
        j.col(k) = (df[k].eval(x) / 16.0) * std::pow(c, -1.25) * phi0;
      return j;
    };
    spec.spinors.emplace("parallel", pf);
  }
  if ((n - 2) % 2 == 0) {
    spec.transverse.resize(n - 2);
    for (int k = 0; k < n - 2; ++k) spec.transverse[k] = k + 2;
    spec.transverse_J = standard_transverse_J(n - 2);
    spec.expectations = {"pp_trace_zero", "parallel_null_vector", "parallel_spinor",
                         "non_twisting", "eps_zero_brinkmann", "integrability", "kaehler_flag"};
  } else {
    spec.expectations = {"pp_trace_zero", "parallel_null_vector", "parallel_spinor",
                         "non_twisting", "eps_zero_brinkmann", "integrability"};
  }
  return spec;
}

inline Poly default_pp_profile(int n) {
  // mildly generic: curved, s-dependent, Weyl nonzero, |f| < 1 on the box
  std::vector<int> zero(n, 0);
  Poly f;
  f.dim = n;
  auto e = zero;
  e[2] = 2;
  f.terms.emplace_back(0.3, e);
  if (n > 3) {
    e = zero;
    e[3] = 2;
    f.terms.emplace_back(0.15, e);
    e = zero;
    e[2] = 1;
    e[3] = 1;
    e[1] = 1;
    f.terms.emplace_back(0.1, e);
  } else {
    e = zero;
    e[2] = 2;
    e[1] = 1;
    f.terms.emplace_back(0.1, e);
  }
  return f;
}

inline GeometrySpec cahen_wallach(const std::vector<double>& lambda, int n_override = 0) {
  const int n = n_override > 0 ? n_override : static_cast<int>(lambda.size()) + 2;
  if (static_cast<int>(lambda.size()) != n - 2)
    throw std::invalid_argument("cahen_wallach: need n-2 profile coefficients");
  Poly f;
  f.dim = n;
  bool degenerate = true;
  for (int i = 0; i < n - 2; ++i) {
    std::vector<int> e(n, 0);
    e[2 + i] = 2;
    f.terms.emplace_back(lambda[i], e);
    if (lambda[i] != 0) degenerate = false;
  }
  GeometrySpec spec = pp_wave(n, f);
  spec.name = "cahen-wallach";
  spec.params = {{"n", n}, {"lambda", lambda}, {"degenerate", degenerate}};
  spec.expectations.push_back("symmetric_space");
  return spec;
}

// Lorentzian Einstein-Sasaki S^1-bundle chart over the hyperbolic disk of
// curvature -4: g = pi^* h - theta (x) theta with theta = ds + (x dy - y dx)/(1-r^2),
// h = (dx^2 + dy^2)/(1-r^2)^2. Einstein with Ric = -2g, R = -6.
inline GeometrySpec einstein_sasaki_h2() {
  GeometrySpec spec;
  spec.name = "einstein-sasaki-h2";
  auto chart = std::make_shared<MetricChart>();
  VecR lo(3), hi(3);
  lo << -0.45, -0.45, -0.5;
  hi << 0.45, 0.45, 0.5;
  *chart = make_chart("einstein-sasaki-h2", {"x", "y", "s"}, lo, hi, [](const VecR& p) {
    const double x = p(0), y = p(1);
    const double u = 1.0 / (1.0 - x * x - y * y);
    MatR g(3, 3);
    g(0, 0) = u * u * (1 - y * y);
    g(0, 1) = g(1, 0) = u * u * x * y;
    g(1, 1) = u * u * (1 - x * x);
    g(0, 2) = g(2, 0) = y * u;
    g(1, 2) = g(2, 1) = -x * u;
    g(2, 2) = -1.0;
    return g;
  });
  chart->dg = [](const VecR& p) {
    const double x = p(0), y = p(1);
    const double u = 1.0 / (1.0 - x * x - y * y);
    const double u2 = u * u, u3 = u2 * u;
    Tensor3 d(3);
    // d/dx
    d(0, 0, 0) = 4 * x * u3 * (1 - y * y);
    d(0, 0, 1) = d(0, 1, 0) = y * u2 + 4 * x * x * y * u3;
    d(0, 1, 1) = -2 * x * u2 + 4 * x * u3 * (1 - x * x);
    d(0, 0, 2) = d(0, 2, 0) = 2 * x * y * u2;
    d(0, 1, 2) = d(0, 2, 1) = -u - 2 * x * x * u2;
    // d/dy
    d(1, 0, 0) = -2 * y * u2 + 4 * y * u3 * (1 - y * y);
    d(1, 0, 1) = d(1, 1, 0) = x * u2 + 4 * x * y * y * u3;
    d(1, 1, 1) = 4 * y * u3 * (1 - x * x);
    d(1, 0, 2) = d(1, 2, 0) = u + 2 * y * y * u2;
    d(1, 1, 2) = d(1, 2, 1) = -2 * x * y * u2;
    return d;
  };
  MatR seed = MatR::Zero(3, 3);
  seed(2, 0) = 1;  // timelike fiber first
  seed(0, 1) = 1;
  seed(1, 2) = 1;
  chart->frame_seed = seed;
  spec.chart = chart;
  spec.rep = std::make_shared<CliffordRep>(build_rep(3));

  VecR xi = VecR::Zero(3);
  xi(2) = 1;
  spec.vectors.emplace("reeb", constant_field(xi));

  const FrameField fr = orthonormal_frame(*chart);
  const VecR x0 = chart->center();
  Spinor up(2), dn(2);
  up << 1, 0;  // gamma_1 eigenvector with eigenvalue -1
  dn << 0, 1;
  auto cpt = chart;
  auto rpt = spec.rep;
  auto make_killing = [cpt, rpt, fr, x0](const Spinor& init, cplx lam) {
    SpinorField base = transported_spinor_field(*rpt, *cpt, fr, x0, init, lam, 64);
    // capture the shared chart and rep so the closure owns its data
    SpinorField f;
    f.rep = rpt.get();
    f.gauge = base.gauge;
    auto val = base.value;
    f.value = [cpt, rpt, val](const VecR& x) { return val(x); };
    return f;
  };
  spec.spinors.emplace("killing_plus", make_killing(up, cplx(0, 0.5)));
  spec.spinors.emplace("killing_minus", make_killing(dn, cplx(0, -0.5)));
  {
    // mixed twistor spinor (sum of the two Killing halves)
    SpinorField plus = spec.spinors.at("killing_plus");
    SpinorField minus = spec.spinors.at("killing_minus");
    SpinorField mix;
    mix.rep = spec.rep.get();
    mix.gauge = chart->name;
    mix.value = [plus, minus](const VecR& x) { return VecC(plus.value(x) + minus.value(x)); };
    spec.spinors.emplace("twistor_mixed", mix);
  }
  spec.expectations = {"einstein_negative", "sasaki", "sasaki_prop_spinor", "killing_pair",
                       "integrability"};
  return spec;
}

// timelike cone -dt^2 + t^2 g over a bundled base; for a Sasaki base the cone
// complex structure from omega = t dt ^ theta + (t^2/2) d theta is bundled.
// require_kaehler insists on that structure and rejects bases without it.
inline GeometrySpec cone_over(const GeometrySpec& base, bool require_kaehler = false) {
  GeometrySpec spec;
  spec.name = "cone-" + base.name;
  spec.params = {{"base", base.name}};
  const int nb = base.chart->dim;
  const int n = nb + 1;
  auto bc = base.chart;
  auto chart = std::make_shared<MetricChart>();
  std::vector<std::string> coords = {"t"};
  for (const auto& c : bc->coords) coords.push_back(c);
  VecR lo(n), hi(n);
  lo(0) = 0.8;
  hi(0) = 1.6;
  lo.tail(nb) = bc->lo;
  hi.tail(nb) = bc->hi;
  *chart = make_chart(spec.name, coords, lo, hi, [bc, n, nb](const VecR& z) {
    MatR g = MatR::Zero(n, n);
    g(0, 0) = -1.0;
    g.block(1, 1, nb, nb) = z(0) * z(0) * bc->g(z.tail(nb));
    return g;
  });
  if (bc->dg) {
    chart->dg = [bc, n, nb](const VecR& z) {
      Tensor3 d(n);
      const MatR gb = bc->g(z.tail(nb));
      const Tensor3 db = bc->dg(z.tail(nb));
      for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j) {
          d(0, i + 1, j + 1) = 2 * z(0) * gb(i, j);
          for (int k = 0; k < nb; ++k) d(k + 1, i + 1, j + 1) = z(0) * z(0) * db(k, i, j);
        }
      return d;
    };
  }
  chart->timelike_count = 1 + bc->timelike_count;
  MatR seed = MatR::Zero(n, n);
  seed(0, 0) = 1;
  // timelike directions first: cone axis, then the base seed order
  for (int a = 0; a < nb; ++a) seed.block(1, 1 + a, nb, 1) = bc->frame_seed.col(a);
  chart->frame_seed = seed;
  spec.chart = chart;

  if (base.vectors.count("reeb")) {
    const VecField reeb = base.vectors.at("reeb");
    spec.complex_structure = [bc, reeb, n, nb, chart](const VecR& z) {
      const double t = z(0);
      const VecR y = z.tail(nb);
      const VecR xi = reeb.v(y);
      const VecR theta = VecR(-bc->g(y) * xi);  // contact form: g_b(xi,.) = -theta
      // d theta by finite differences on the base chart
      const double h = bc->fd_step(y);
      MatR dth(nb, nb);
      std::vector<VecR> dt(nb);
      for (int k = 0; k < nb; ++k) {
        auto diff = [&](double s) {
          VecR yp = y, ym = y;
          yp(k) += s;
          ym(k) -= s;
          return VecR((VecR(-bc->g(yp) * reeb.v(yp)) - VecR(-bc->g(ym) * reeb.v(ym))) / (2 * s));
        };
        dt[k] = (4.0 * diff(h / 2) - diff(h)) / 3.0;
      }
      for (int a = 0; a < nb; ++a)
        for (int b = 0; b < nb; ++b) dth(a, b) = dt[a](b) - dt[b](a);
      MatR omega = MatR::Zero(n, n);
      for (int b = 0; b < nb; ++b) {
        omega(0, b + 1) = t * theta(b);
        omega(b + 1, 0) = -t * theta(b);
      }
      for (int a = 0; a < nb; ++a)
        for (int b = 0; b < nb; ++b) omega(a + 1, b + 1) = 0.5 * t * t * dth(a, b);
      return MatR(chart->inv_metric(z) * omega);
    };
    spec.expectations = {"cone_ricci_flat", "cone_kaehler_parallel", "cone_signature"};
  } else {
    if (require_kaehler)
      throw std::invalid_argument("cone_over: base lacks Sasaki data for Kaehler expectations");
    spec.expectations = {"cone_signature"};
  }
  return spec;
}

// flat product R^{1,k-1} x N with N = flat Kaehler R^4 or R^6
inline GeometrySpec product_geometry(int k, const std::string& kaehler_base) {
  int nbase;
  if (kaehler_base == "flat_R4")
    nbase = 4;
  else if (kaehler_base == "flat_R6")
    nbase = 6;
  else
    throw std::invalid_argument("product_geometry: base must be flat_R4 or flat_R6");
  const int n = k + nbase;
  if (k < 1 || n > 8) throw std::invalid_argument("product_geometry: dimension out of range");

  GeometrySpec spec = minkowski(n);
  spec.name = "product";
  spec.params = {{"k", k}, {"base", kaehler_base}};
  spec.chart->name = "product" + std::to_string(n);
  for (auto& [nm, f] : spec.spinors) f.gauge = spec.chart->name;

  // parallel spinor with timelike current: u(1,...,1) - u(1,...,1,-1)
  auto rep = spec.rep;
  std::vector<int> nu(rep->m, 1);
  Spinor a = standard_basis_spinor(*rep, nu);
  nu[rep->m - 1] = -1;
  Spinor b = standard_basis_spinor(*rep, nu);
  Spinor timelike_par = (a - b) / std::sqrt(2.0);
  spec.spinors.emplace("parallel_timelike",
                       constant_spinor_field(*rep, timelike_par, n, spec.chart->name));
  spec.spinors.emplace("parallel_null",
                       constant_spinor_field(*rep, a, n, spec.chart->name));

  spec.expectations = {"flat", "ricci_flat", "parallel_spinor_timelike", "integrability"};
  if (k == 2) {
    // R^{1,1} x N: parallel lightlike direction and the Kaehler flag on N
    VecR vnull = VecR::Zero(n);
    vnull(0) = 1;
    vnull(1) = 1;
    spec.vectors.emplace("parallel_null", constant_field(vnull));
    spec.transverse.resize(nbase);
    for (int i = 0; i < nbase; ++i) spec.transverse[i] = k + i;
    spec.transverse_J = standard_transverse_J(nbase);
    spec.expectations.push_back("kaehler_flag");
  }
  return spec;
}

// Fefferman chart of the flat Heisenberg CR structure, m = 1:
// h = pi^* L_theta + (8/3) theta . ds on coords (x,y,u,s),
// theta = du + x dy - y dx, L_theta = 2(dx^2 + dy^2). Components are linear
// in the coordinates, so dg is constant and d2g = 0.
inline GeometrySpec fefferman_heisenberg() {
  GeometrySpec spec;
  spec.name = "fefferman-heisenberg";
  auto chart = std::make_shared<MetricChart>();
  VecR lo = VecR::Constant(4, -0.6), hi = VecR::Constant(4, 0.6);
  *chart = make_chart("fefferman-heisenberg", {"x", "y", "u", "s"}, lo, hi, [](const VecR& p) {
    const double x = p(0), y = p(1);
    const double c = 4.0 / 3.0;  // (8/3) theta . ds with . the symmetric product
    MatR g = MatR::Zero(4, 4);
    g(0, 0) = 2;
    g(1, 1) = 2;
    g(0, 3) = g(3, 0) = -c * y;
    g(1, 3) = g(3, 1) = c * x;
    g(2, 3) = g(3, 2) = c;
    return g;
  });
  chart->dg = [](const VecR&) {
    const double c = 4.0 / 3.0;
    Tensor3 d(4);
    d(0, 1, 3) = d(0, 3, 1) = c;   // d/dx g_ys
    d(1, 0, 3) = d(1, 3, 0) = -c;  // d/dy g_xs
    return d;
  };
  chart->d2g = [](const VecR&) { return Tensor4(4); };
  MatR seed = MatR::Zero(4, 4);
  seed(2, 0) = 1.0;
  seed(3, 0) = -3.0 / 8.0;  // d_u - (3/8) d_s is unit timelike
  seed(0, 1) = 1;
  seed(1, 2) = 1;
  seed(3, 3) = 1;
  chart->frame_seed = seed;
  spec.chart = chart;
  spec.rep = std::make_shared<CliffordRep>(build_rep(4));

  VecR fiber = VecR::Zero(4);
  fiber(3) = 1;
  spec.vectors.emplace("fiber", constant_field(fiber));
  spec.expectations = {"lightlike_fiber", "fiber_killing", "twisting",
                       "ric_kk_positive_constant", "eps_plus_fefferman", "cr_heisenberg"};
  return spec;
}

// warped product -dt^2 + f(t)^2 (dx^2 + ...) with f = c exp(eps t) or
// f = d cosh(t + c); exp profile over a flat base carries a twistor spinor.
inline GeometrySpec warped_product(const std::string& profile, int n, double c0 = 1.0,
                                   double c1 = 1.0) {
  if (n < 3 || n > 8) throw std::invalid_argument("warped_product: n must be 3..8");
  GeometrySpec spec;
  spec.name = "warped-" + profile;
  spec.params = {{"profile", profile}, {"n", n}, {"c0", c0}, {"c1", c1}};

  std::function<double(double)> w, dw;
  if (profile == "exp") {
    w = [c0, c1](double t) { return c0 * std::exp(c1 * t); };
    dw = [c0, c1](double t) { return c0 * c1 * std::exp(c1 * t); };
  } else if (profile == "cosh") {
    w = [c0, c1](double t) { return c0 * std::cosh(t + c1); };
    dw = [c0, c1](double t) { return c0 * std::sinh(t + c1); };
  } else {
    throw std::invalid_argument("warped_product: profile must be exp or cosh");
  }

  auto chart = std::make_shared<MetricChart>();
  std::vector<std::string> coords(n);
  coords[0] = "t";
  for (int k = 1; k < n; ++k) coords[k] = "x" + std::to_string(k);
  *chart = make_chart(spec.name + std::to_string(n), coords, VecR::Constant(n, -0.5),
                      VecR::Constant(n, 0.5), [w, n](const VecR& p) {
                        MatR g = MatR::Identity(n, n) * (w(p(0)) * w(p(0)));
                        g(0, 0) = -1.0;
                        return g;
                      });
  chart->dg = [w, dw, n](const VecR& p) {
    Tensor3 d(n);
    for (int i = 1; i < n; ++i) d(0, i, i) = 2.0 * w(p(0)) * dw(p(0));
    return d;
  };
  spec.chart = chart;
  spec.rep = std::make_shared<CliffordRep>(build_rep(n));
  spec.expectations = {"chart_ok"};

  if (profile == "exp" && c0 == 1.0 && c1 == 1.0) {
    // conformally flat presentation: g = (1/tau^2) eta with tau = -e^{-t};
    // twistor spinors are e^{t/2} (u + pos.v), pos = (tau, x) in the frame gauge
    auto rep = spec.rep;
    auto mk = [rep, chart, n](const Spinor& u, const Spinor& v) {
      SpinorField f;
      f.rep = rep.get();
      f.gauge = chart->name;
      f.value = [rep, u, v, n](const VecR& p) {
        const double t = p(0);
        VecR pos(n);
        pos(0) = -std::exp(-t);
        pos.tail(n - 1) = p.tail(n - 1);
        return VecC(std::exp(0.5 * t) * (u + gamma_of_vector(*rep, pos) * v));
      };
      return f;
    };
    Spinor u0 = Spinor::Zero(spec.rep->dim), v0 = Spinor::Zero(spec.rep->dim);
    u0(0) = 1;
    v0(spec.rep->dim - 1) = 1;
    spec.spinors.emplace("twistor", mk(u0, v0));
    spec.expectations = {"chart_ok", "warped_twistor", "integrability"};
  }
  return spec;
}

// ---------------------------------------------------------------------------
// registry

inline GeometrySpec make_geometry(const std::string& name, const nlohmann::json& params) {
  auto geti = [&](const std::string& key, int dflt) {
    return params.contains(key) ? params.at(key).get<int>() : dflt;
  };
  if (name == "minkowski") return minkowski(geti("n", 4));
  if (name == "pp-wave") {
    const int n = geti("n", 4);
    if (params.contains("profile")) {
      Poly f;
      f.dim = n;
      for (const auto& term : params.at("profile"))
        f.terms.emplace_back(term.at("c").get<double>(),
                             term.at("e").get<std::vector<int>>());
      return pp_wave(n, f);
    }
    return pp_wave(n, default_pp_profile(n));
  }
  if (name == "cahen-wallach") {
    std::vector<double> lam = params.contains("lambda")
                                  ? params.at("lambda").get<std::vector<double>>()
                                  : std::vector<double>{1.0, 0.5};
    return cahen_wallach(lam);
  }
  if (name == "einstein-sasaki-h2") return einstein_sasaki_h2();
  if (name == "cone-einstein-sasaki") return cone_over(einstein_sasaki_h2());
  if (name == "product")
    return product_geometry(geti("k", 1), params.contains("base")
                                              ? params.at("base").get<std::string>()
                                              : "flat_R4");
  if (name == "fefferman-heisenberg") return fefferman_heisenberg();
  if (name == "warped-exp") return warped_product("exp", geti("n", 7));
  if (name == "warped-cosh") return warped_product("cosh", geti("n", 7));
  throw std::invalid_argument("unknown geometry '" + name + "'");
}

inline std::vector<std::string> geometry_registry() {
  return {"minkowski",          "pp-wave", "cahen-wallach",        "einstein-sasaki-h2",
          "cone-einstein-sasaki", "product", "fefferman-heisenberg", "warped-exp",
          "warped-cosh"};
}

}  // namespace lsg
