#pragma once

#include "jetcalc/diffpoly.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace jetcalc {

/// A defect handed to extract_system was not linear-homogeneous in the
/// listed parameters.
struct NonlinearInParamsError : Error {
  using Error::Error;
};

/// One linear equation sum(coeffs[tag] * tag) + constant = 0.
struct LinearForm {
  std::map<std::string, Rational> coeffs;
  Rational constant;
};

/// Homogeneous constraint system on named parameters.
struct ParamSystem {
  std::vector<std::string> unknowns;
  std::vector<LinearForm> rows;
};

/// Null space basis in reduced echelon form with unit pivots; vectors are
/// aligned with the unknown order of the source system.
struct SolutionSpace {
  std::vector<std::string> unknowns;
  std::vector<std::vector<Rational>> basis;
  int rank = 0;
  int nullity = 0;
};

namespace detail {

// In-place Gauss-Jordan. Pivot choice is deterministic: first nonzero entry
// per column, columns in fixed order. Returns pivot columns paired with
// their row.
inline std::vector<std::pair<int, int>> rref(std::vector<std::vector<Rational>>& a) {
  std::vector<std::pair<int, int>> pivots;
  if (a.empty()) return pivots;
  const int rows = static_cast<int>(a.size());
  const int cols = static_cast<int>(a.front().size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i)
      if (!a[i][c].is_zero()) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(a[sel], a[r]);
    const Rational inv = Rational(1) / a[r][c];
    for (int j = c; j < cols; ++j) a[r][j] = a[r][j] * inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      const Rational f = a[i][c];
      for (int j = c; j < cols; ++j) a[i][j] = a[i][j] - f * a[r][j];
    }
    pivots.emplace_back(c, r);
    ++r;
  }
  return pivots;
}

}  // namespace detail

inline int rank(std::vector<std::vector<Rational>> a) {
  return static_cast<int>(detail::rref(a).size());
}

/// Groups the terms of a parameter-linear defect by their non-parameter
/// monomial; each group contributes one homogeneous row.
inline ParamSystem extract_system(const DiffPoly& defect,
                                  const std::vector<std::string>& unknowns) {
  const std::set<std::string> known(unknowns.begin(), unknowns.end());
  std::map<Monomial, LinearForm> grouped;
  for (const auto& [m, c] : defect.terms()) {
    std::string tag;
    int count = 0;
    for (const auto& [v, e] : m.factors()) {
      if (v.kind() != VarKind::Param || known.find(v.tag()) == known.end()) continue;
      count += e;
      tag = v.tag();
    }
    if (count != 1)
      throw NonlinearInParamsError("defect is not linear-homogeneous in the parameters");
    const Monomial key = m.with_exponent(VarId::param(tag), 0);
    auto& row = grouped[key];
    auto [it, inserted] = row.coeffs.try_emplace(tag, c);
    if (!inserted) it->second = it->second + c;
  }
  ParamSystem sys;
  sys.unknowns = unknowns;
  for (auto& [key, row] : grouped) sys.rows.push_back(std::move(row));
  return sys;
}

/// Exact null space of a homogeneous system. rank + nullity equals the
/// number of unknowns; basis vectors carry a unit at their free column.
inline SolutionSpace null_space(const ParamSystem& sys) {
  const int n = static_cast<int>(sys.unknowns.size());
  std::map<std::string, int> index;
  for (int i = 0; i < n; ++i) index.emplace(sys.unknowns[i], i);

  std::vector<std::vector<Rational>> a;
  for (const auto& row : sys.rows) {
    if (!row.constant.is_zero())
      throw Error("null space requested for a non-homogeneous system");
    std::vector<Rational> r(n, Rational(0));
    for (const auto& [tag, c] : row.coeffs) {
      auto it = index.find(tag);
      if (it == index.end()) throw Error("row references unknown parameter " + tag);
      r[it->second] = c;
    }
    a.push_back(std::move(r));
  }

  const auto pivots = detail::rref(a);
  std::vector<int> pivot_row(n, -1);
  for (const auto& [col, row] : pivots) pivot_row[col] = row;

  SolutionSpace out;
  out.unknowns = sys.unknowns;
  out.rank = static_cast<int>(pivots.size());
  out.nullity = n - out.rank;
  for (int f = 0; f < n; ++f) {
    if (pivot_row[f] >= 0) continue;
    std::vector<Rational> v(n, Rational(0));
    v[f] = Rational(1);
    for (const auto& [col, row] : pivots) v[col] = -a[row][f];
    out.basis.push_back(std::move(v));
  }
  return out;
}

/// Particular solution of A x = b with free variables set to zero, or
/// nullopt when the system is inconsistent.
inline std::optional<std::vector<Rational>> solve_linear(
    std::vector<std::vector<Rational>> a, const std::vector<Rational>& b) {
  if (a.size() != b.size()) throw Error("solve_linear: shape mismatch");
  if (a.empty()) return std::vector<Rational>{};
  const int n = static_cast<int>(a.front().size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i].push_back(b[i]);
  const auto pivots = detail::rref(a);
  for (std::size_t i = 0; i < a.size(); ++i) {
    bool zero_row = true;
    for (int j = 0; j < n; ++j)
      if (!a[i][j].is_zero()) {
        zero_row = false;
        break;
      }
    if (zero_row && !a[i][n].is_zero()) return std::nullopt;
  }
  std::vector<Rational> x(n, Rational(0));
  for (const auto& [col, row] : pivots) {
    if (col == n) return std::nullopt;  // pivot in the augmented column
    x[col] = a[row][n];
  }
  return x;
}

}  // namespace jetcalc
