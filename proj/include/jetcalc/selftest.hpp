#pragma once

#include "jetcalc/vcalc.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace jetcalc::selftest {

/// splitmix64; deterministic across platforms for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [lo, hi], inclusive.
  int range(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

struct PolyShape {
  int max_terms = 4;
  int max_jet = 3;
  bool use_q = true;
  bool use_params = false;
  int max_factors = 3;
  int max_exp = 2;
  int coeff_mag = 9;
};

inline DiffPoly random_poly(Rng& rng, const PolyShape& shape) {
  DiffPoly out;
  const int terms = rng.range(1, shape.max_terms);
  for (int t = 0; t < terms; ++t) {
    int num = rng.range(-shape.coeff_mag, shape.coeff_mag);
    if (num == 0) num = 1;
    DiffPoly term = DiffPoly::constant(Rational(num, rng.range(1, 3)));
    const int factors = rng.range(0, shape.max_factors);
    for (int f = 0; f < factors; ++f) {
      const int exp = rng.range(1, shape.max_exp);
      DiffPoly base;
      switch (rng.range(0, 9)) {
        case 0:
        case 1:
        case 2:
          base = DiffPoly::x();
          break;
        case 3:
        case 4:
        case 5:
        case 6:
          base = DiffPoly::y(rng.range(0, shape.max_jet));
          break;
        case 7:
        case 8:
          base = shape.use_q ? DiffPoly::q(rng.range(0, 2)) : DiffPoly::x();
          break;
        default:
          base = shape.use_params ? DiffPoly::param(rng.range(0, 1) ? "a" : "b")
                                  : DiffPoly::y(rng.range(0, shape.max_jet));
          break;
      }
      term = term * pow(base, static_cast<unsigned>(exp));
    }
    out = out + term;
  }
  return out;
}

struct PropertyResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string note;
  bool ok() const { return failures == 0; }
};

/// D(a*b) = D(a)*b + a*D(b).
inline PropertyResult derivation_law(std::uint64_t seed, int cases) {
  Rng rng(seed);
  PropertyResult res{"derivation_law", cases};
  PolyShape shape;
  shape.use_params = true;
  for (int i = 0; i < cases; ++i) {
    const DiffPoly a = random_poly(rng, shape);
    const DiffPoly b = random_poly(rng, shape);
    if ((a * b).total_derivative() != a.total_derivative() * b + a * b.total_derivative()) {
      ++res.failures;
      if (res.note.empty()) res.note = "case " + std::to_string(i);
    }
  }
  return res;
}

/// Total derivatives lie in the kernel of the Euler operator.
inline PropertyResult euler_kernel(std::uint64_t seed, int cases) {
  Rng rng(seed);
  PropertyResult res{"euler_kernel", cases};
  PolyShape shape;
  shape.max_jet = 4;
  for (int i = 0; i < cases; ++i) {
    if (!euler(random_poly(rng, shape).total_derivative()).is_zero()) {
      ++res.failures;
      if (res.note.empty()) res.note = "case " + std::to_string(i);
    }
  }
  return res;
}

/// E(F*Q) = D_F^*(Q) + D_Q^*(F).
inline PropertyResult multiplier_identity(std::uint64_t seed, int cases) {
  Rng rng(seed);
  PropertyResult res{"multiplier_identity", cases};
  PolyShape shape;
  shape.max_jet = 2;
  shape.max_terms = 3;
  for (int i = 0; i < cases; ++i) {
    const DiffPoly f = random_poly(rng, shape);
    const DiffPoly g = random_poly(rng, shape);
    if (euler(f * g) != adjoint_apply(f, g) + adjoint_apply(g, f)) {
      ++res.failures;
      if (res.note.empty()) res.note = "case " + std::to_string(i);
    }
  }
  return res;
}

/// D and its inverse are mutually inverse on constructed total derivatives.
inline PropertyResult inversion_round_trip(std::uint64_t seed, int cases) {
  Rng rng(seed);
  PropertyResult res{"inversion_round_trip", cases};
  PolyShape shape;
  shape.use_params = true;
  for (int i = 0; i < cases; ++i) {
    const DiffPoly e = random_poly(rng, shape).total_derivative();
    bool ok = is_exact(e);
    if (ok) ok = invert_total_derivative(e).total_derivative() == e;
    if (!ok) {
      ++res.failures;
      if (res.note.empty()) res.note = "case " + std::to_string(i);
    }
  }
  return res;
}

/// Order reduction of y times a random linear expression preserves the
/// Euler image and subtracts an exact term.
inline PropertyResult reduction_preserves_euler(std::uint64_t seed, int cases) {
  Rng rng(seed);
  PropertyResult res{"reduction_preserves_euler", cases};
  for (int i = 0; i < cases; ++i) {
    DiffPoly linear;
    const int pieces = rng.range(1, 3);
    for (int p = 0; p < pieces; ++p) {
      int num = rng.range(-6, 6);
      if (num == 0) num = 2;
      DiffPoly coeff = DiffPoly::constant(Rational(num));
      for (int d = rng.range(0, 2); d > 0; --d) coeff = coeff * DiffPoly::x();
      if (rng.range(0, 3) == 0) coeff = coeff * DiffPoly::q(rng.range(0, 1));
      linear = linear + coeff * DiffPoly::y(rng.range(1, 6));
    }
    const DiffPoly density = Rational(1, 2) * DiffPoly::y(0) * linear;
    const int m = density.max_jet_order();
    const int target = (m + 1) / 2;
    bool ok = true;
    try {
      const DiffPoly reduced = reduce_order(density, target);
      ok = reduced.max_jet_order() <= target && euler(reduced) == euler(density) &&
           is_exact(density - reduced);
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) {
      ++res.failures;
      if (res.note.empty()) res.note = "case " + std::to_string(i);
    }
  }
  return res;
}

inline std::vector<PropertyResult> run_all(std::uint64_t seed, int cases) {
  return {derivation_law(seed, cases), euler_kernel(seed + 1, cases),
          multiplier_identity(seed + 2, cases), inversion_round_trip(seed + 3, cases),
          reduction_preserves_euler(seed + 4, cases)};
}

}  // namespace jetcalc::selftest
