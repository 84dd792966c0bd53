#pragma once

#include "jetcalc/rational.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace jetcalc {

/// Thrown when a jet variable beyond the configured order limit is requested.
struct JetLimitError : Error {
  using Error::Error;
};

namespace detail {
inline std::atomic<int>& jet_limit_slot() {
  static std::atomic<int> limit{64};
  return limit;
}
}  // namespace detail

inline int jet_limit() { return detail::jet_limit_slot().load(std::memory_order_relaxed); }

inline void set_jet_limit(int m) {
  if (m < 1) throw Error("jet limit must be positive");
  detail::jet_limit_slot().store(m, std::memory_order_relaxed);
}

enum class VarKind : unsigned char { Indep = 0, JetY = 1, JetQ = 2, Param = 3 };

/// Identifier of a polynomial variable: the independent variable x, a jet
/// y_j of the dependent variable, a jet q_j of the coefficient function, or
/// a named constant parameter. Total order: x < y_0 < y_1 < ... < q_0 < ...
/// < parameters by tag.
class VarId {
 public:
  static VarId x() { return VarId(VarKind::Indep, 0, {}); }
  static VarId jet_y(int order) { return jet(VarKind::JetY, order); }
  static VarId jet_q(int order) { return jet(VarKind::JetQ, order); }
  static VarId param(std::string tag) {
    if (tag.empty()) throw Error("parameter with empty tag");
    return VarId(VarKind::Param, 0, std::move(tag));
  }

  VarKind kind() const { return kind_; }
  int order() const { return order_; }
  const std::string& tag() const { return tag_; }

  int cmp(const VarId& o) const {
    if (kind_ != o.kind_) return kind_ < o.kind_ ? -1 : 1;
    if (order_ != o.order_) return order_ < o.order_ ? -1 : 1;
    return tag_.compare(o.tag_) < 0 ? -1 : (tag_ == o.tag_ ? 0 : 1);
  }
  friend bool operator<(const VarId& a, const VarId& b) { return a.cmp(b) < 0; }
  friend bool operator==(const VarId& a, const VarId& b) { return a.cmp(b) == 0; }
  friend bool operator!=(const VarId& a, const VarId& b) { return a.cmp(b) != 0; }

 private:
  VarId(VarKind kind, int order, std::string tag)
      : kind_(kind), order_(order), tag_(std::move(tag)) {}

  static VarId jet(VarKind kind, int order) {
    if (order < 0) throw Error("negative jet order");
    if (order > jet_limit())
      throw JetLimitError("jet order " + std::to_string(order) + " exceeds limit " +
                          std::to_string(jet_limit()));
    return VarId(kind, order, {});
  }

  VarKind kind_;
  int order_;
  std::string tag_;
};

/// Power product of variables. Exponents are strictly positive; the empty
/// factor list is the unit monomial. Ordered by graded lexicographic order
/// over the VarId order above.
class Monomial {
 public:
  Monomial() = default;

  static Monomial var(const VarId& v, int exp = 1) {
    Monomial m;
    if (exp < 0) throw Error("negative exponent");
    if (exp > 0) {
      m.factors_.emplace_back(v, exp);
      m.degree_ = exp;
    }
    return m;
  }

  const std::vector<std::pair<VarId, int>>& factors() const { return factors_; }
  int degree() const { return degree_; }
  bool is_unit() const { return factors_.empty(); }

  int exponent(const VarId& v) const {
    for (const auto& [var, e] : factors_)
      if (var == v) return e;
    return 0;
  }

  Monomial times(const Monomial& o) const {
    Monomial out;
    out.factors_.reserve(factors_.size() + o.factors_.size());
    auto a = factors_.begin(), b = o.factors_.begin();
    while (a != factors_.end() && b != o.factors_.end()) {
      int c = a->first.cmp(b->first);
      if (c < 0)
        out.factors_.push_back(*a++);
      else if (c > 0)
        out.factors_.push_back(*b++);
      else {
        out.factors_.emplace_back(a->first, a->second + b->second);
        ++a, ++b;
      }
    }
    out.factors_.insert(out.factors_.end(), a, factors_.end());
    out.factors_.insert(out.factors_.end(), b, o.factors_.end());
    out.degree_ = degree_ + o.degree_;
    return out;
  }

  /// Copy with the exponent of v replaced by exp (removed when exp is 0).
  Monomial with_exponent(const VarId& v, int exp) const {
    if (exp < 0) throw Error("negative exponent");
    Monomial out;
    out.factors_.reserve(factors_.size() + 1);
    bool placed = false;
    for (const auto& f : factors_) {
      int c = f.first.cmp(v);
      if (c < 0) {
        out.factors_.push_back(f);
      } else if (c == 0) {
        if (exp > 0) out.factors_.emplace_back(v, exp);
        placed = true;
      } else {
        if (!placed && exp > 0) out.factors_.emplace_back(v, exp);
        placed = true;
        out.factors_.push_back(f);
      }
    }
    if (!placed && exp > 0) out.factors_.emplace_back(v, exp);
    out.degree_ = 0;
    for (const auto& [var, e] : out.factors_) out.degree_ += e;
    return out;
  }

  // Graded lex: degree first; ties broken at the smallest variable where the
  // exponents differ, larger exponent winning. Total order, so structural
  // equality of sorted term maps is semantic equality.
  int cmp(const Monomial& o) const {
    if (degree_ != o.degree_) return degree_ < o.degree_ ? -1 : 1;
    auto a = factors_.begin(), b = o.factors_.begin();
    while (a != factors_.end() && b != o.factors_.end()) {
      int c = a->first.cmp(b->first);
      if (c < 0) return 1;   // this has the smaller variable
      if (c > 0) return -1;  // other has the smaller variable
      if (a->second != b->second) return a->second > b->second ? 1 : -1;
      ++a, ++b;
    }
    if (a != factors_.end()) return 1;
    if (b != o.factors_.end()) return -1;
    return 0;
  }
  friend bool operator<(const Monomial& a, const Monomial& b) { return a.cmp(b) < 0; }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.cmp(b) == 0; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return a.cmp(b) != 0; }

 private:
  std::vector<std::pair<VarId, int>> factors_;  // ascending by VarId, exps > 0
  int degree_ = 0;
};

/// Sparse multivariate polynomial over exact rationals in jet variables,
/// the independent variable and constant parameters: the universal
/// expression type of the engine. Always canonical: no zero coefficients,
/// term map ordered by the monomial order, so operator== is semantic
/// equality. Immutable in use; all operations return fresh values.
class DiffPoly {
 public:
  using TermMap = std::map<Monomial, Rational>;

  DiffPoly() = default;

  static DiffPoly zero() { return {}; }
  static DiffPoly constant(const Rational& c) {
    DiffPoly p;
    p.add_term(Monomial(), c);
    return p;
  }
  static DiffPoly one() { return constant(1); }
  static DiffPoly variable(const VarId& v) { return monomial(Monomial::var(v)); }
  static DiffPoly monomial(const Monomial& m, const Rational& c = 1) {
    DiffPoly p;
    p.add_term(m, c);
    return p;
  }
  static DiffPoly x() { return variable(VarId::x()); }
  static DiffPoly y(int order) { return variable(VarId::jet_y(order)); }
  static DiffPoly q(int order) { return variable(VarId::jet_q(order)); }
  static DiffPoly param(const std::string& tag) { return variable(VarId::param(tag)); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit());
  }
  Rational constant_term() const {
    auto it = terms_.find(Monomial());
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend DiffPoly operator+(const DiffPoly& a, const DiffPoly& b) {
    DiffPoly out = a;
    for (const auto& [m, c] : b.terms_) out.add_term(m, c);
    return out;
  }
  friend DiffPoly operator-(const DiffPoly& a, const DiffPoly& b) {
    DiffPoly out = a;
    for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
    return out;
  }
  DiffPoly operator-() const {
    DiffPoly out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
  }
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
    DiffPoly out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(ma.times(mb), ca * cb);
    return out;
  }
  friend DiffPoly operator*(const Rational& c, const DiffPoly& p) { return p.scaled(c); }
  friend DiffPoly operator*(const DiffPoly& p, const Rational& c) { return p.scaled(c); }

  DiffPoly scaled(const Rational& c) const {
    DiffPoly out;
    if (c.is_zero()) return out;
    for (const auto& [m, k] : terms_) out.terms_.emplace(m, k * c);
    return out;
  }

  friend bool operator==(const DiffPoly& a, const DiffPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const DiffPoly& a, const DiffPoly& b) { return !(a == b); }

  /// Formal partial derivative, treating every other variable as constant.
  DiffPoly partial(const VarId& v) const {
    DiffPoly out;
    for (const auto& [m, c] : terms_) {
      int e = m.exponent(v);
      if (e == 0) continue;
      out.add_term(m.with_exponent(v, e - 1), c * Rational(e));
    }
    return out;
  }

  /// Total derivative: x -> 1, y_j -> y_{j+1}, q_j -> q_{j+1}, parameters -> 0.
  DiffPoly total_derivative() const {
    DiffPoly out;
    for (const VarId& v : variables()) {
      switch (v.kind()) {
        case VarKind::Indep:
          out = out + partial(v);
          break;
        case VarKind::JetY:
          out = out + partial(v) * DiffPoly::y(v.order() + 1);
          break;
        case VarKind::JetQ:
          out = out + partial(v) * DiffPoly::q(v.order() + 1);
          break;
        case VarKind::Param:
          break;
      }
    }
    return out;
  }

  /// Simultaneous substitution followed by normalization. Unbound variables
  /// stay as themselves.
  DiffPoly substitute(const std::map<VarId, DiffPoly>& bindings) const {
    DiffPoly out;
    for (const auto& [m, c] : terms_) {
      DiffPoly term = DiffPoly::constant(c);
      for (const auto& [v, e] : m.factors()) {
        auto it = bindings.find(v);
        const DiffPoly base = it != bindings.end() ? it->second : DiffPoly::variable(v);
        term = term * pow(base, static_cast<unsigned>(e));
      }
      out = out + term;
    }
    return out;
  }

  friend DiffPoly pow(const DiffPoly& p, unsigned e) {
    DiffPoly out = DiffPoly::one();
    for (unsigned i = 0; i < e; ++i) out = out * p;
    return out;
  }

  std::set<VarId> variables() const {
    std::set<VarId> vars;
    for (const auto& [m, c] : terms_)
      for (const auto& [v, e] : m.factors()) vars.insert(v);
    return vars;
  }

  bool depends_on(const VarId& v) const {
    for (const auto& [m, c] : terms_)
      if (m.exponent(v) > 0) return true;
    return false;
  }

  /// Largest jet order of the given kind present, or -1 if none.
  int max_order(VarKind kind) const {
    int best = -1;
    for (const auto& [m, c] : terms_)
      for (const auto& [v, e] : m.factors())
        if (v.kind() == kind && v.order() > best) best = v.order();
    return best;
  }
  int max_jet_order() const { return max_order(VarKind::JetY); }
  int max_q_order() const { return max_order(VarKind::JetQ); }

  int degree_in(const VarId& v) const {
    int best = 0;
    for (const auto& [m, c] : terms_) best = std::max(best, m.exponent(v));
    return best;
  }

  /// Total degree in all variables of the given kind, maximized over terms.
  int degree_in_kind(VarKind kind) const {
    int best = 0;
    for (const auto& [m, c] : terms_) {
      int d = 0;
      for (const auto& [v, e] : m.factors())
        if (v.kind() == kind) d += e;
      best = std::max(best, d);
    }
    return best;
  }

  /// Sum of (term / v^k) over terms where v appears with exponent exactly k.
  DiffPoly coefficient_of(const VarId& v, int k) const {
    DiffPoly out;
    for (const auto& [m, c] : terms_)
      if (m.exponent(v) == k) out.add_term(m.with_exponent(v, 0), c);
    return out;
  }

  DiffPoly without_constant_term() const {
    DiffPoly out = *this;
    out.terms_.erase(Monomial());
    return out;
  }

 private:
  TermMap terms_;
};

inline DiffPoly operator*(long c, const DiffPoly& p) { return p.scaled(Rational(c)); }
inline DiffPoly operator*(const DiffPoly& p, long c) { return p.scaled(Rational(c)); }

/// Formal antiderivative with respect to one variable: c*v^e -> c*v^(e+1)/(e+1).
inline DiffPoly antiderivative(const DiffPoly& p, const VarId& v) {
  DiffPoly out;
  for (const auto& [m, c] : p.terms()) {
    int e = m.exponent(v);
    out.add_term(m.with_exponent(v, e + 1), c / Rational(e + 1));
  }
  return out;
}

}  // namespace jetcalc
