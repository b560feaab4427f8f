#pragma once
// Exact arithmetic in cyclotomic fields Q(zeta_N).

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace ats {

int euler_phi(int n);

/// Integer coefficients of the n-th cyclotomic polynomial, constant term first.
const std::vector<long>& cyclotomic_poly(int n);

class Scalar {
 public:
  Scalar() : n_(1), c_(1) {}
  Scalar(long v) : n_(1), c_{mpq_class(v)} {}
  Scalar(const mpq_class& q) : n_(1), c_{q} { c_[0].canonicalize(); }
  static Scalar rational(long num, long den);

  /// zeta_conductor^(conductor*power/order); requires order | conductor.
  static Scalar root_of_unity(int conductor, int order, long power);
  /// Element of Q(zeta_conductor) from a polynomial in zeta (any degree).
  static Scalar from_poly(int conductor, const std::vector<mpq_class>& poly);

  int conductor() const { return n_; }
  const std::vector<mpq_class>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;
  mpq_class to_rational() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }
  Scalar inverse() const;
  Scalar pow(long k) const;

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// Same value viewed in Q(zeta_m); requires conductor() | m.
  Scalar embed(int m) const;

  std::string str() const;
  static Scalar parse(const std::string& text);

 private:
  Scalar(int n, std::vector<mpq_class> c) : n_(n), c_(std::move(c)) {}
  int n_;
  std::vector<mpq_class> c_;  // length euler_phi(n_)
};

class ScalarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ats
