#pragma once

#include <optional>

#include "lsg/clifford.hpp"
#include "lsg/report.hpp"

namespace lsg {

enum class CausalType { zero, lightlike, timelike, spacelike };

inline const char* to_string(CausalType t) {
  switch (t) {
    case CausalType::zero: return "zero";
    case CausalType::lightlike: return "lightlike";
    case CausalType::timelike: return "timelike";
    case CausalType::spacelike: return "spacelike";
  }
  return "?";
}

struct DiracCurrent {
  VecR components;  // in the orthonormal e_j basis
  CausalType type = CausalType::zero;
  bool future_directed = false;
};

inline double minkowski_norm2(const VecR& v) {
  double s = -v(0) * v(0);
  for (int i = 1; i < v.size(); ++i) s += v(i) * v(i);
  return s;
}

// Classification with a scale-aware band: |g(v,v)| <= band*(1+|v|^2) counts
// as lightlike.
inline CausalType causal_type(const VecR& v, double band = 1e-9) {
  const double n2 = v.squaredNorm();
  if (n2 <= band * band) return CausalType::zero;
  const double q = minkowski_norm2(v);
  if (std::abs(q) <= band * (1.0 + n2)) return CausalType::lightlike;
  return q < 0 ? CausalType::timelike : CausalType::spacelike;
}

inline bool is_future(const VecR& v) { return v(0) > 0; }

// Dirac current l(v) = <v,e_1 v> e_1 - sum_{i>=2} <v,e_i v> e_i. Components
// are real up to roundoff; a large imaginary part signals a convention bug.
inline DiracCurrent dirac_current(const CliffordRep& rep, const Spinor& phi,
                                  double imag_tol = 1e-10) {
  DiracCurrent out;
  out.components = VecR::Zero(rep.n);
  const double scale = 1.0 + phi.squaredNorm();
  for (int j = 0; j < rep.n; ++j) {
    const cplx c = indefinite_inner(rep, phi, rep.gamma[j] * phi);
    if (std::abs(c.imag()) > imag_tol * scale)
      throw std::runtime_error("dirac_current: non-real component (inner-product convention bug)");
    out.components(j) = (j == 0) ? c.real() : -c.real();
  }
  out.type = causal_type(out.components);
  out.future_directed = is_future(out.components);
  return out;
}

// |V_phi . phi| and |<phi,phi>| for spinors whose current is lightlike.
inline IdentityReport lightlike_identity_check(const CliffordRep& rep, const Spinor& phi,
                                               double tol = 1e-9) {
  const DiracCurrent cur = dirac_current(rep, phi);
  if (cur.type != CausalType::lightlike && cur.type != CausalType::zero)
    throw std::invalid_argument("lightlike_identity_check: current is not lightlike");
  IdentityReport rep_out;
  const double s = 1.0 + phi.squaredNorm();
  const double r1 = vector_action(rep, cur.components, phi).norm() / s;
  const double r2 = std::abs(indefinite_inner(rep, phi, phi)) / s;
  rep_out.add(make_check("spinor_invariants", "lightlike_identity_check", "V_phi.phi", r1, tol));
  rep_out.add(make_check("spinor_invariants", "lightlike_identity_check", "<phi,phi>", r2, tol));
  return rep_out;
}

// Dimension-dependent pointwise identity for arbitrary spinors:
//   n=3,5 : V.phi = <phi,phi> phi             and g(V,V) = -<phi,phi>^2
//   n=7   : V.phi = <phi,phi> phi + <Jphi,phi> Jphi
//           and |<phi,phi>|^2 + |<phi,Jphi>|^2 = -g(V,V)
//   n=2,4,6 (half spinors) : V.phi = 0, <phi,phi> = 0, g(V,V) = 0
inline IdentityReport orbit_identity_check(const CliffordRep& rep, const Spinor& phi,
                                           const StructureMap* structure = nullptr,
                                           double tol = 1e-9) {
  IdentityReport out;
  const DiracCurrent cur = dirac_current(rep, phi);
  const Spinor vphi = vector_action(rep, cur.components, phi);
  const cplx len = indefinite_inner(rep, phi, phi);
  const double s3 = 1.0 + std::pow(phi.norm(), 3);  // cubic-degree identity scale
  const double s4 = 1.0 + std::pow(phi.norm(), 4);
  if (rep.n == 3 || rep.n == 5) {
    out.add(make_check("spinor_invariants", "orbit_identity_check", "V.phi=<phi,phi>phi",
                       (vphi - len * phi).norm() / s3, tol));
    out.add(make_check("spinor_invariants", "orbit_identity_check", "g(V,V)=-<phi,phi>^2",
                       std::abs(minkowski_norm2(cur.components) + len.real() * len.real()) / s4, tol));
  } else if (rep.n == 7) {
    if (!structure) throw std::invalid_argument("orbit_identity_check: n=7 needs the structure map");
    const Spinor jphi = structure->apply(phi);
    const cplx cj = indefinite_inner(rep, jphi, phi);
    out.add(make_check("spinor_invariants", "orbit_identity_check",
                       "V.phi=<phi,phi>phi+<Jphi,phi>Jphi",
                       (vphi - len * phi - cj * jphi).norm() / s3, tol));
    const cplx cjf = indefinite_inner(rep, phi, jphi);
    const double q = std::norm(len) + std::norm(cjf);
    out.add(make_check("spinor_invariants", "orbit_identity_check",
                       "|<phi,phi>|^2+|<phi,Jphi>|^2=-g(V,V)",
                       std::abs(q + minkowski_norm2(cur.components)) / s4, tol));
  } else if (rep.n == 2 || rep.n == 4 || rep.n == 6) {
    // caller is expected to pass a half spinor
    out.add(make_check("spinor_invariants", "orbit_identity_check", "V.phi=0",
                       vphi.norm() / s3, tol));
    out.add(make_check("spinor_invariants", "orbit_identity_check", "<phi,phi>=0",
                       std::abs(len) / (1.0 + phi.squaredNorm()), tol));
    out.add(make_check("spinor_invariants", "orbit_identity_check", "g(V,V)=0",
                       std::abs(minkowski_norm2(cur.components)) / s4, tol));
  } else {
    throw std::invalid_argument("orbit_identity_check: n must be 2..7");
  }
  return out;
}

// Unitary whose columns are the u(nu) basis vectors; column index bits encode
// the signs (bit 0 of the k-th factor = nu_k = +1).
inline MatC ubasis_matrix(const CliffordRep& rep) {
  MatC u(rep.dim, rep.dim);
  for (int c = 0; c < rep.dim; ++c) {
    std::vector<int> nu(rep.m);
    for (int k = 0; k < rep.m; ++k) nu[k] = (c & (1 << (rep.m - 1 - k))) ? -1 : 1;
    u.col(c) = standard_basis_spinor(rep, nu);
  }
  return u;
}

// Projection of an even-n spinor onto the parity = +-1 half-spinor subspace;
// membership is decided in the u(nu) basis by prod(nu_i).
inline Spinor half_spinor_project(const CliffordRep& rep, const Spinor& phi, int parity) {
  const MatC u = ubasis_matrix(rep);
  VecC coef = u.adjoint() * phi;
  for (int i = 0; i < rep.dim; ++i)
    if (basis_parity(rep, i) != parity) coef(i) = 0;
  return u * coef;
}

}  // namespace lsg
