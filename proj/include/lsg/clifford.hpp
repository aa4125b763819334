#pragma once

#include <string>
#include <vector>

#include "lsg/linalg.hpp"

namespace lsg {

using Spinor = VecC;

// Complexified Clifford algebra of R^{1,n-1} in the Kronecker-product matrix
// realization. Convention: x.y + y.x = -2 g(x,y) with g = diag(-1,+1,...,+1),
// so gamma(e_1)^2 = +Id (timelike) and gamma(e_j)^2 = -Id for j >= 2.
struct CliffordRep {
  int n = 0;                    // vector-space dimension, 2..8
  int m = 0;                    // floor(n/2)
  int dim = 0;                  // spinor module dimension 2^m
  std::vector<MatC> gamma;      // generator matrices, gamma[j] represents e_{j+1}
  std::vector<double> eps;      // signature (-1,+1,...,+1)

  double eta(int a) const { return eps[a]; }       // eta_aa
  double eta_inv(int a) const { return eps[a]; }   // eta^aa (same entries)
};

namespace detail {
inline MatC mat2(cplx a, cplx b, cplx c, cplx d) {
  MatC m(2, 2);
  m << a, b, c, d;
  return m;
}
inline const MatC& pauli_E() {
  static const MatC m = MatC::Identity(2, 2);
  return m;
}
inline const MatC& pauli_T() {
  static const MatC m = mat2(0, -I, I, 0);
  return m;
}
inline const MatC& pauli_g1() {
  static const MatC m = mat2(I, 0, 0, -I);
  return m;
}
inline const MatC& pauli_g2() {
  static const MatC m = mat2(0, I, I, 0);
  return m;
}
inline MatC kron_chain(int m, int slot_g, const MatC& g, int trailing_T) {
  // E x ... x E x g x T x ... x T with `trailing_T` copies of T at the end;
  // slot_g counted so the total number of factors is m.
  MatC out = MatC::Identity(1, 1);
  for (int k = 0; k < m - 1 - trailing_T; ++k) out = kron(out, pauli_E());
  out = kron(out, g);
  for (int k = 0; k < trailing_T; ++k) out = kron(out, pauli_T());
  (void)slot_g;
  return out;
}
}  // namespace detail

inline CliffordRep build_rep(int n) {
  if (n < 2 || n > 8) throw std::invalid_argument("build_rep: n must be in 2..8");
  CliffordRep rep;
  rep.n = n;
  rep.m = n / 2;
  rep.dim = 1 << rep.m;
  rep.eps.assign(n, 1.0);
  rep.eps[0] = -1.0;
  for (int j = 1; j <= rep.m; ++j) {
    const cplx tau = (2 * j - 1 == 1) ? I : cplx(1.0);
    rep.gamma.push_back(tau * detail::kron_chain(rep.m, j, detail::pauli_g1(), j - 1));
    if (static_cast<int>(rep.gamma.size()) < n)
      rep.gamma.push_back(detail::kron_chain(rep.m, j, detail::pauli_g2(), j - 1));
  }
  if (n % 2 == 1) {
    MatC odd = MatC::Identity(1, 1);
    for (int k = 0; k < rep.m; ++k) odd = kron(odd, detail::pauli_T());
    rep.gamma.push_back(I * odd);
  }
  rep.gamma.resize(n);
  return rep;
}

// Second n=3 realization on C^2 used for cross tests.
inline CliffordRep build_rep_alt3() {
  CliffordRep rep;
  rep.n = 3;
  rep.m = 1;
  rep.dim = 2;
  rep.eps = {-1.0, 1.0, 1.0};
  rep.gamma = {detail::mat2(0, I, -I, 0), detail::mat2(0, -I, -I, 0),
               detail::mat2(I, 0, 0, -I)};
  return rep;
}

// u(nu) = (1, -i nu)/sqrt(2); u(nu_1,...,nu_m) = u(nu_1) x ... x u(nu_m).
inline Spinor standard_basis_spinor(const CliffordRep& rep, const std::vector<int>& nu) {
  if (static_cast<int>(nu.size()) != rep.m)
    throw std::invalid_argument("standard_basis_spinor: need m signs");
  VecC out = VecC::Ones(1);
  for (int v : nu) {
    if (v != 1 && v != -1) throw std::invalid_argument("standard_basis_spinor: signs must be +-1");
    VecC u(2);
    u << cplx(1.0 / std::sqrt(2.0)), -I * (v / std::sqrt(2.0));
    VecC next(out.size() * 2);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      next(2 * i) = out(i) * u(0);
      next(2 * i + 1) = out(i) * u(1);
    }
    out = next;
  }
  return out;
}

// Half-spinor parity prod(nu_i) of a basis index (even n).
inline int basis_parity(const CliffordRep& rep, int index) {
  int parity = 1;
  for (int k = 0; k < rep.m; ++k)
    if (index & (1 << k)) parity = -parity;  // bit set = nu = -1
  return parity;
}

inline MatC gamma_of_vector(const CliffordRep& rep, const VecR& v) {
  if (v.size() != rep.n) throw std::invalid_argument("gamma_of_vector: dimension mismatch");
  MatC out = MatC::Zero(rep.dim, rep.dim);
  for (int j = 0; j < rep.n; ++j) out += v(j) * rep.gamma[j];
  return out;
}

inline Spinor vector_action(const CliffordRep& rep, const VecR& v, const Spinor& phi) {
  if (phi.size() != rep.dim) throw std::invalid_argument("vector_action: spinor dimension mismatch");
  return gamma_of_vector(rep, v) * phi;
}

// Standard Hermitian product on the module, antilinear in the first slot.
inline cplx hermitian_inner(const Spinor& a, const Spinor& b) { return a.dot(b); }

// Indefinite spin-invariant product <v,w> = (gamma_1 v, w). Satisfies
// <X.v,w> = <v,X.w> for every real vector X.
inline cplx indefinite_inner(const CliffordRep& rep, const Spinor& a, const Spinor& b) {
  return (rep.gamma[0] * a).dot(b);
}

// Clifford image of an alternating k-tensor expressed in the e_j basis:
// each wedge monomial e_{i1}^...^e_{ik} (i1<...<ik) maps to
// gamma_{i1}...gamma_{ik}. Contractions against vectors then go through the
// metric, matching X.eta = -X_|eta + X^flat^eta.
inline MatC form_matrix1(const CliffordRep& rep, const VecR& w) {
  MatC out = MatC::Zero(rep.dim, rep.dim);
  for (int a = 0; a < rep.n; ++a) out += w(a) * rep.gamma[a];
  return out;
}

inline MatC form_matrix2(const CliffordRep& rep, const MatR& w) {
  MatC out = MatC::Zero(rep.dim, rep.dim);
  for (int a = 0; a < rep.n; ++a)
    for (int b = a + 1; b < rep.n; ++b)
      out += w(a, b) * (rep.gamma[a] * rep.gamma[b]);
  return out;
}

inline MatC form_matrix3(const CliffordRep& rep, const Tensor3& w) {
  MatC out = MatC::Zero(rep.dim, rep.dim);
  for (int a = 0; a < rep.n; ++a)
    for (int b = a + 1; b < rep.n; ++b)
      for (int c = b + 1; c < rep.n; ++c)
        out += w(a, b, c) * (rep.gamma[a] * rep.gamma[b] * rep.gamma[c]);
  return out;
}

inline Spinor form_action(const CliffordRep& rep, const MatR& two_form, const Spinor& phi) {
  return form_matrix2(rep, two_form) * phi;
}

inline Spinor form_action(const CliffordRep& rep, const Tensor3& three_form, const Spinor& phi) {
  return form_matrix3(rep, three_form) * phi;
}

// ---------------------------------------------------------------------------
// Real / quaternionic structure maps phi -> A.conj(phi)

enum class StructureKind { real3, quaternionic5, quaternionic7 };

struct StructureMap {
  StructureKind kind;
  MatC a;  // the antilinear map is phi -> a * conj(phi)
  Spinor apply(const Spinor& phi) const { return a * phi.conjugate(); }
};

// Sign s in  J(X.phi) = s X.J(phi):  n=3 -> -1, n=5 -> +1, n=7 -> -1.
inline int structure_commutation_sign(int n) {
  switch (n) {
    case 3: return -1;
    case 5: return +1;
    case 7: return -1;
    default: throw std::invalid_argument("structure map defined for n in {3,5,7}");
  }
}

// Solve A conj(G_j) = s G_j A over the matrix space; the solution line is
// one-complex-dimensional by irreducibility. Normalized so A conj(A) = +Id
// (n=3) or -Id (n=5,7); remaining phase fixed by making the first entry of
// largest modulus positive real. The phase is a gauge choice.
inline StructureMap build_structure_map(const CliffordRep& rep) {
  const int s = structure_commutation_sign(rep.n);
  const int d = rep.dim;
  MatC sys(rep.n * d * d, d * d);
  for (int j = 0; j < rep.n; ++j) {
    // row block for: A conj(G) - s G A = 0, vec() column-major
    const MatC cg = rep.gamma[j].conjugate();
    MatC block = kron(cg.transpose(), MatC::Identity(d, d)) -
                 static_cast<double>(s) * kron(MatC::Identity(d, d), rep.gamma[j]);
    sys.block(j * d * d, 0, d * d, d * d) = block;
  }
  auto ns = nullspace(sys, 1e-9);
  if (ns.empty()) throw std::runtime_error("build_structure_map: no solution (generator conventions broken)");
  MatC a(d, d);
  for (int c = 0; c < d; ++c) a.col(c) = ns.back().segment(c * d, d);

  // tau^2 = A conj(A) must be a scalar; normalize its modulus to 1
  MatC k = a * a.conjugate();
  const cplx kappa = k(0, 0);
  if ((k - kappa * MatC::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-8 * std::abs(kappa))
    throw std::runtime_error("build_structure_map: A conj(A) not scalar");
  a /= std::sqrt(std::abs(kappa));
  const double kap = (a * a.conjugate())(0, 0).real();
  const bool want_real = (rep.n == 3);
  if (want_real && kap < 0) throw std::runtime_error("build_structure_map: expected real structure");
  if (!want_real && kap > 0) throw std::runtime_error("build_structure_map: expected quaternionic structure");

  // deterministic phase gauge
  const double big = a.cwiseAbs().maxCoeff();
  for (int c = 0; c < d && big > 0; ++c) {
    bool done = false;
    for (int r = 0; r < d; ++r) {
      if (std::abs(a(r, c)) > 0.5 * big) {
        a *= std::abs(a(r, c)) / a(r, c);
        done = true;
        break;
      }
    }
    if (done) break;
  }
  StructureMap out;
  out.kind = rep.n == 3 ? StructureKind::real3
                        : (rep.n == 5 ? StructureKind::quaternionic5 : StructureKind::quaternionic7);
  out.a = a;
  return out;
}

// ---------------------------------------------------------------------------
// Spin group elements and the induced vector representation

// Element of spin(1,n-1) from an antisymmetric parameter matrix t:
// 1/2 sum_{a<b} t_ab gamma_a gamma_b.
inline MatC spin_algebra_element(const CliffordRep& rep, const MatR& t) {
  MatC out = MatC::Zero(rep.dim, rep.dim);
  for (int a = 0; a < rep.n; ++a)
    for (int b = a + 1; b < rep.n; ++b)
      out += 0.5 * t(a, b) * (rep.gamma[a] * rep.gamma[b]);
  return out;
}

inline MatC spin_group_element(const CliffordRep& rep, const MatR& t) {
  return expm(spin_algebra_element(rep, t));
}

// Vector representation Lambda with gamma(Lambda v) = S gamma(v) S^{-1},
// extracted with tr(gamma_a gamma_b) = -eta_ab dim.
inline MatR vector_rep(const CliffordRep& rep, const MatC& s) {
  const MatC sinv = s.inverse();
  MatR lam(rep.n, rep.n);
  for (int b = 0; b < rep.n; ++b) {
    const MatC m = s * rep.gamma[b] * sinv;
    for (int a = 0; a < rep.n; ++a)
      lam(a, b) = (-rep.eta_inv(a) * (rep.gamma[a] * m).trace() / static_cast<double>(rep.dim)).real();
  }
  return lam;
}

// Debug dump: n plus generators as [re,im] pairs (JSON-ready nested vectors).
inline std::vector<std::vector<std::vector<std::pair<double, double>>>> rep_dump(const CliffordRep& rep) {
  std::vector<std::vector<std::vector<std::pair<double, double>>>> out;
  for (const auto& g : rep.gamma) {
    std::vector<std::vector<std::pair<double, double>>> mat;
    for (int r = 0; r < rep.dim; ++r) {
      std::vector<std::pair<double, double>> row;
      for (int c = 0; c < rep.dim; ++c) row.emplace_back(g(r, c).real(), g(r, c).imag());
      mat.push_back(std::move(row));
    }
    out.push_back(std::move(mat));
  }
  return out;
}

}  // namespace lsg
