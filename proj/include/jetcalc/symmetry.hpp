#pragma once

#include "jetcalc/vcalc.hpp"

#include <map>
#include <vector>

namespace jetcalc {

/// A vector field coefficient depends on something other than x, y and
/// parameters, so the field is not a point field.
struct InvalidFieldError : Error {
  using Error::Error;
};

/// The variational symmetry test is only defined for even-order equations.
struct OddOrderError : Error {
  using Error::Error;
};

/// Point vector field xi(x,y) d/dx + psi(x,y) d/dy. Coefficients may carry
/// parameters linearly, which keeps generic symmetry combinations first class.
class VectorField {
 public:
  VectorField() = default;
  VectorField(DiffPoly xi, DiffPoly psi) : xi_(std::move(xi)), psi_(std::move(psi)) {
    validate(xi_);
    validate(psi_);
  }

  const DiffPoly& xi() const { return xi_; }
  const DiffPoly& psi() const { return psi_; }
  bool is_zero() const { return xi_.is_zero() && psi_.is_zero(); }

  friend VectorField operator+(const VectorField& a, const VectorField& b) {
    return {a.xi_ + b.xi_, a.psi_ + b.psi_};
  }
  friend VectorField operator-(const VectorField& a, const VectorField& b) {
    return {a.xi_ - b.xi_, a.psi_ - b.psi_};
  }
  VectorField operator-() const { return {-xi_, -psi_}; }

  VectorField scaled(const DiffPoly& c) const { return {c * xi_, c * psi_}; }
  VectorField scaled(const Rational& c) const { return {c * xi_, c * psi_}; }

  friend bool operator==(const VectorField& a, const VectorField& b) {
    return a.xi_ == b.xi_ && a.psi_ == b.psi_;
  }
  friend bool operator!=(const VectorField& a, const VectorField& b) { return !(a == b); }

 private:
  static void validate(const DiffPoly& p) {
    if (p.max_jet_order() > 0 || p.max_q_order() >= 0)
      throw InvalidFieldError("point field coefficients may depend on x, y and parameters only");
  }
  DiffPoly xi_, psi_;
};

/// Characteristic Q = psi - xi * y1, the evolutionary representative.
inline DiffPoly characteristic(const VectorField& v) {
  return v.psi() - v.xi() * DiffPoly::y(1);
}

/// Action of the point field on a function of (x, y).
inline DiffPoly apply_point(const VectorField& v, const DiffPoly& f) {
  return v.xi() * f.partial(VarId::x()) + v.psi() * f.partial(VarId::jet_y(0));
}

/// Commutator of two point fields.
inline VectorField lie_bracket(const VectorField& a, const VectorField& b) {
  return {apply_point(a, b.xi()) - apply_point(b, a.xi()),
          apply_point(a, b.psi()) - apply_point(b, a.psi())};
}

/// Prolongation of a point field to jet space: phi_0 = psi and
/// phi_{j+1} = D(phi_j) - y_{j+1} D(xi), acting as
/// xi d/dx + sum(phi_j d/dy_j).
class ProlongedField {
 public:
  ProlongedField(DiffPoly xi, std::vector<DiffPoly> phi)
      : xi_(std::move(xi)), phi_(std::move(phi)) {}

  const DiffPoly& xi() const { return xi_; }
  const std::vector<DiffPoly>& phi() const { return phi_; }
  int order() const { return static_cast<int>(phi_.size()) - 1; }

  DiffPoly apply(const DiffPoly& f) const {
    if (f.max_jet_order() > order())
      throw Error("prolongation order too low for the given expression");
    DiffPoly out = xi_ * f.partial(VarId::x());
    for (int j = 0; j <= order(); ++j) out = out + phi_[j] * f.partial(VarId::jet_y(j));
    return out;
  }

 private:
  DiffPoly xi_;
  std::vector<DiffPoly> phi_;
};

inline ProlongedField prolong(const VectorField& v, int m) {
  if (m < 0) throw Error("negative prolongation order");
  std::vector<DiffPoly> phi;
  phi.reserve(m + 1);
  phi.push_back(v.psi());
  const DiffPoly dxi = v.xi().total_derivative();
  for (int j = 0; j < m; ++j)
    phi.push_back(phi.back().total_derivative() - DiffPoly::y(j + 1) * dxi);
  return {v.xi(), std::move(phi)};
}

/// Variational symmetry defect pr(v)(L) + L * D(xi); identically zero iff v
/// is a variational symmetry of the Lagrangian L. Defined for even order n.
inline DiffPoly variational_defect(const VectorField& v, const DiffPoly& lagrangian, int n) {
  if (n < 2 || n % 2 != 0)
    throw OddOrderError("variational symmetry test requires an even equation order");
  const int m = std::max(0, lagrangian.max_jet_order());
  return prolong(v, m).apply(lagrangian) + lagrangian * v.xi().total_derivative();
}

/// Divergence symmetry defect D_Delta^*(Q) + D_Q^*(Delta) with Q the
/// characteristic of v; identically zero iff Q is the characteristic of a
/// conservation law of Delta = 0. Defined for any order, Lagrangian or not.
inline DiffPoly divergence_defect(const VectorField& v, const DiffPoly& delta) {
  const DiffPoly q = characteristic(v);
  return adjoint_apply(delta, q) + adjoint_apply(q, delta);
}

/// Lie point symmetry test against the canonical equation y_n = 0: the
/// prolonged action on y_n must vanish once y_m with m >= n are set to zero.
inline bool is_point_symmetry(const VectorField& v, int n) {
  if (n < 1) throw Error("equation order must be positive");
  DiffPoly defect = prolong(v, n).apply(DiffPoly::y(n));
  std::map<VarId, DiffPoly> on_solutions;
  for (int m = n; m <= defect.max_jet_order(); ++m)
    on_solutions.emplace(VarId::jet_y(m), DiffPoly::zero());
  return defect.substitute(on_solutions).is_zero();
}

}  // namespace jetcalc
