#pragma once

#include "lsg/chart.hpp"

namespace lsg {

// Small multivariate polynomials: profile functions and conformal factors
// with exact derivatives.
struct Poly {
  int dim = 0;
  // term = coefficient * prod_k x_k^{exps[k]}
  std::vector<std::pair<double, std::vector<int>>> terms;

  double eval(const VecR& x) const {
    double s = 0;
    for (const auto& [c, e] : terms) {
      double t = c;
      for (int k = 0; k < dim; ++k)
        for (int p = 0; p < e[k]; ++p) t *= x(k);
      s += t;
    }
    return s;
  }

  Poly derivative(int k) const {
    Poly d;
    d.dim = dim;
    for (const auto& [c, e] : terms) {
      if (e[k] == 0) continue;
      auto e2 = e;
      e2[k] -= 1;
      d.terms.emplace_back(c * e[k], e2);
    }
    return d;
  }

  ScalarFn scalar_fn() const {
    std::vector<Poly> grads;
    for (int k = 0; k < dim; ++k) grads.push_back(derivative(k));
    std::vector<std::vector<Poly>> hesses(dim);
    for (int k = 0; k < dim; ++k)
      for (int l = 0; l < dim; ++l) hesses[k].push_back(grads[k].derivative(l));
    ScalarFn fn;
    const Poly self = *this;
    const int n = dim;
    fn.f = [self](const VecR& x) { return self.eval(x); };
    fn.grad = [grads, n](const VecR& x) {
      VecR g(n);
      for (int k = 0; k < n; ++k) g(k) = grads[k].eval(x);
      return g;
    };
    fn.hess = [hesses, n](const VecR& x) {
      MatR h(n, n);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) h(k, l) = hesses[k][l].eval(x);
      return h;
    };
    return fn;
  }
};

inline Poly poly_from(int dim, std::vector<std::pair<double, std::vector<int>>> terms) {
  Poly p;
  p.dim = dim;
  p.terms = std::move(terms);
  return p;
}

// random polynomial of degree <= 2 in n variables, coefficients ~ amp
template <typename RngT>
inline Poly random_quadratic(RngT& rng, int dim, double amp) {
  Poly p;
  p.dim = dim;
  std::vector<int> zero(dim, 0);
  p.terms.emplace_back(amp * rng.normal(), zero);
  for (int k = 0; k < dim; ++k) {
    auto e = zero;
    e[k] = 1;
    p.terms.emplace_back(amp * rng.normal(), e);
  }
  for (int k = 0; k < dim; ++k)
    for (int l = k; l < dim; ++l) {
      auto e = zero;
      e[k] += 1;
      e[l] += 1;
      p.terms.emplace_back(amp * rng.normal(), e);
    }
  return p;
}

}  // namespace lsg
