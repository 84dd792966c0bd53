#pragma once

#include "jetcalc/diffpoly.hpp"

#include <utility>
#include <vector>

namespace jetcalc {

/// Inversion of the total derivative was requested for an expression that
/// is not a total derivative.
struct NotExactError : Error {
  using Error::Error;
};

/// Order reduction hit a stage whose top jet enters nonlinearly.
struct TopJetNonlinearError : Error {
  using Error::Error;
};

/// An operation that requires an expression linear in the y-jets received a
/// nonlinear one.
struct NonlinearInputError : Error {
  using Error::Error;
};

/// Linear ordinary differential operator sum(c_k * D^k) with polynomial
/// coefficients, stored sparsely by derivative order.
class LinDiffOp {
 public:
  LinDiffOp() = default;

  void add(int order, const DiffPoly& coeff) {
    if (order < 0) throw Error("negative operator order");
    if (coeff.is_zero()) return;
    auto it = terms_.begin();
    while (it != terms_.end() && it->first < order) ++it;
    if (it != terms_.end() && it->first == order) {
      it->second = it->second + coeff;
      if (it->second.is_zero()) terms_.erase(it);
    } else {
      terms_.emplace(it, order, coeff);
    }
  }

  const std::vector<std::pair<int, DiffPoly>>& terms() const { return terms_; }
  int order() const { return terms_.empty() ? -1 : terms_.back().first; }

  DiffPoly coefficient(int order) const {
    for (const auto& [k, c] : terms_)
      if (k == order) return c;
    return {};
  }

  DiffPoly apply(const DiffPoly& f) const {
    DiffPoly out, df = f;
    int cur = 0;
    for (const auto& [k, c] : terms_) {
      while (cur < k) {
        df = df.total_derivative();
        ++cur;
      }
      out = out + c * df;
    }
    return out;
  }

  /// Formal adjoint: the operator L* with L*(g) = sum((-D)^j (a_j * g)).
  /// Coefficient of D^k in L* is sum over j >= k of (-1)^j C(j,k) D^(j-k)(a_j).
  LinDiffOp adjoint() const {
    LinDiffOp out;
    for (int k = 0; k <= order(); ++k) {
      DiffPoly ck;
      for (const auto& [j, aj] : terms_) {
        if (j < k) continue;
        DiffPoly d = aj;
        for (int i = 0; i < j - k; ++i) d = d.total_derivative();
        Rational w = binomial(static_cast<unsigned>(j), static_cast<unsigned>(k));
        if (j % 2 != 0) w = -w;
        ck = ck + w * d;
      }
      out.add(k, ck);
    }
    return out;
  }

  LinDiffOp negated() const {
    LinDiffOp out;
    for (const auto& [k, c] : terms_) out.terms_.emplace_back(k, -c);
    return out;
  }

  friend bool operator==(const LinDiffOp& a, const LinDiffOp& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const LinDiffOp& a, const LinDiffOp& b) { return !(a == b); }

 private:
  std::vector<std::pair<int, DiffPoly>> terms_;  // ascending order, nonzero coeffs
};

/// Euler operator (variational derivative) with respect to y:
/// E(L) = sum((-D)^j dL/dy_j). Jets of q and parameters are spectators.
inline DiffPoly euler(const DiffPoly& density) {
  DiffPoly acc;
  const int m = density.max_jet_order();
  for (int j = 0; j <= m; ++j) {
    DiffPoly p = density.partial(VarId::jet_y(j));
    if (p.is_zero()) continue;
    for (int i = 0; i < j; ++i) p = p.total_derivative();
    acc = j % 2 == 0 ? acc + p : acc - p;
  }
  return acc;
}

/// Frechet derivative of F as a linear differential operator: coefficient
/// dF/dy_j at order j.
inline LinDiffOp frechet(const DiffPoly& f) {
  LinDiffOp op;
  const int m = f.max_jet_order();
  for (int j = 0; j <= m; ++j) op.add(j, f.partial(VarId::jet_y(j)));
  return op;
}

/// Adjoint Frechet derivative applied to g: sum((-D)^j (dF/dy_j * g)).
inline DiffPoly adjoint_apply(const DiffPoly& f, const DiffPoly& g) {
  DiffPoly acc;
  const int m = f.max_jet_order();
  for (int j = 0; j <= m; ++j) {
    DiffPoly p = f.partial(VarId::jet_y(j));
    if (p.is_zero()) continue;
    p = p * g;
    for (int i = 0; i < j; ++i) p = p.total_derivative();
    acc = j % 2 == 0 ? acc + p : acc - p;
  }
  return acc;
}

enum class AdjointParity { SelfAdjoint, SkewAdjoint, Neither };

/// Compares the Frechet derivative of a y-linear expression with its formal
/// adjoint, coefficient by coefficient.
inline AdjointParity adjoint_parity(const DiffPoly& delta) {
  for (const auto& [m, c] : delta.terms()) {
    int ydeg = 0;
    for (const auto& [v, e] : m.factors())
      if (v.kind() == VarKind::JetY) ydeg += e;
    if (ydeg != 1)
      throw NonlinearInputError("adjoint parity requires an expression linear in the y-jets");
  }
  const LinDiffOp op = frechet(delta);
  const LinDiffOp adj = op.adjoint();
  if (adj == op) return AdjointParity::SelfAdjoint;
  if (adj == op.negated()) return AdjointParity::SkewAdjoint;
  return AdjointParity::Neither;
}

/// True iff the expression lies in the kernel of the Euler operator, which
/// characterizes total derivatives of differential functions of y.
inline bool is_exact(const DiffPoly& e) { return euler(e).is_zero(); }

namespace detail {

// Repeated integration by parts in the top jet of the given kind. Each pass
// removes the top jet; the remainder's top order strictly decreases.
inline void eliminate_jets(DiffPoly& e, DiffPoly& acc, VarKind kind) {
  const char* what = kind == VarKind::JetY ? "y" : "q";
  while (true) {
    const int m = e.max_order(kind);
    if (m < 0) return;
    if (m == 0)
      throw NotExactError(std::string("not a total derivative: residual depends on ") + what +
                          " with no higher jet");
    const VarId top = kind == VarKind::JetY ? VarId::jet_y(m) : VarId::jet_q(m);
    if (e.degree_in(top) > 1)
      throw NotExactError("not a total derivative: top jet enters nonlinearly");
    const DiffPoly a = e.coefficient_of(top, 1);
    const VarId below = kind == VarKind::JetY ? VarId::jet_y(m - 1) : VarId::jet_q(m - 1);
    const DiffPoly piece = antiderivative(a, below);
    acc = acc + piece;
    e = e - piece.total_derivative();
  }
}

}  // namespace detail

/// Returns F with D(F) = e, integration constant dropped. Works by
/// integration by parts on the top y-jet, then the top q-jet, then termwise
/// integration of the pure-x remainder.
inline DiffPoly invert_total_derivative(DiffPoly e) {
  DiffPoly acc;
  detail::eliminate_jets(e, acc, VarKind::JetY);
  detail::eliminate_jets(e, acc, VarKind::JetQ);
  if (!e.is_zero()) acc = acc + antiderivative(e, VarId::x());
  return acc.without_constant_term();
}

/// Strips total derivatives from a Lagrangian until its jet order is at
/// most target, preserving the Euler image. Requires the top jet to enter
/// linearly at every stage above target.
inline DiffPoly reduce_order(DiffPoly density, int target) {
  if (target < 0) throw Error("negative target order");
  while (true) {
    const int m = density.max_jet_order();
    if (m <= target) return density;
    const VarId top = VarId::jet_y(m);
    if (density.degree_in(top) > 1)
      throw TopJetNonlinearError("cannot reduce below order " + std::to_string(m) +
                                 ": top jet enters nonlinearly");
    const DiffPoly a = density.coefficient_of(top, 1);
    const DiffPoly piece = antiderivative(a, VarId::jet_y(m - 1));
    density = density - piece.total_derivative();
  }
}

}  // namespace jetcalc
