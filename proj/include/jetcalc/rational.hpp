#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace jetcalc {

/// Base class of every error thrown by the engine.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact rational number. Thin value wrapper around GMP's mpq_class that
/// keeps the representation canonical (reduced, positive denominator) at
/// all times, so equality of values is equality of representations.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den) {
    if (den == 0) throw Error("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }

  /// Builds from base-10 numerator/denominator strings (as found in JSON).
  static Rational from_strings(const std::string& num, const std::string& den) {
    mpz_class n, d;
    try {
      n = mpz_class(num);
      d = mpz_class(den);
    } catch (const std::invalid_argument&) {
      throw Error("malformed rational: " + num + "/" + den);
    }
    if (d == 0) throw Error("rational with zero denominator");
    Rational r;
    r.v_ = mpq_class(n, d);
    r.v_.canonicalize();
    return r;
  }

  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }
  int sign() const { return sgn(v_); }

  Rational operator-() const {
    Rational r;
    r.v_ = -v_;
    return r;
  }
  friend Rational operator+(const Rational& a, const Rational& b) { return wrap(a.v_ + b.v_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return wrap(a.v_ - b.v_); }
  friend Rational operator*(const Rational& a, const Rational& b) { return wrap(a.v_ * b.v_); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw Error("division of rational by zero");
    return wrap(a.v_ / b.v_);
  }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }

  Rational pow(unsigned e) const {
    Rational r;
    mpz_pow_ui(r.v_.get_num_mpz_t(), v_.get_num_mpz_t(), e);
    mpz_pow_ui(r.v_.get_den_mpz_t(), v_.get_den_mpz_t(), e);
    return r;  // powers of a canonical fraction are canonical
  }

  std::string num_str() const { return v_.get_num().get_str(); }
  std::string den_str() const { return v_.get_den().get_str(); }

  /// "3", "-1/2", ...
  std::string str() const {
    std::string s = num_str();
    if (v_.get_den() != 1) s += "/" + den_str();
    return s;
  }

 private:
  static Rational wrap(mpq_class q) {
    Rational r;
    r.v_ = std::move(q);
    return r;
  }
  mpq_class v_;
};

inline Rational factorial(unsigned n) {
  Rational r;
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational::from_strings(f.get_str(), "1");
}

inline Rational binomial(unsigned n, unsigned k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return Rational::from_strings(b.get_str(), "1");
}

}  // namespace jetcalc
