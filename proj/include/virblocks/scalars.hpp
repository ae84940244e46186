#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <vector>

#include "virblocks/errors.hpp"

namespace vb {

using BigInt = mpz_class;
using BigRational = mpq_class;
using Cplx = std::complex<double>;

std::string to_string(const BigRational& r);  // "a" or "a/b"
BigRational parse_rational(const std::string& s);

// Formal symbol a polynomial is written in. Only used for printing and for
// catching accidental mixing of the q and kappa towers.
enum class Var : unsigned char { q, kappa, h, mu };
const char* var_name(Var v);

// Dense univariate polynomial over Q, lowest degree first.
class Poly {
 public:
  explicit Poly(Var v = Var::kappa) : v_(v) {}
  Poly(std::vector<BigRational> coeffs, Var v);

  static Poly constant(const BigRational& c, Var v);
  static Poly monomial(const BigRational& c, int deg, Var v);
  static Poly x(Var v) { return monomial(1, 1, v); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  Var var() const { return v_; }
  void set_var(Var v) { v_ = v; }
  const std::vector<BigRational>& coeffs() const { return c_; }
  BigRational coeff(int i) const { return i >= 0 && i <= degree() ? c_[i] : BigRational(0); }
  const BigRational& lead() const { return c_.back(); }

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly& operator*=(const BigRational& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const BigRational& s) { return a *= s; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  // a = q*b + r with deg r < deg b; b must be nonzero.
  static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
  // Exact quotient; the caller guarantees b | a.
  static Poly exact_div(const Poly& a, const Poly& b);
  Poly monic() const;
  Poly derivative() const;
  Poly compose_affine(const BigRational& a, const BigRational& b) const;  // p(a t + b)

  Cplx eval(Cplx t) const;
  BigRational eval(const BigRational& t) const;
  // sum |c_i| |t|^i, used as the scale for pole detection
  double abs_scale(Cplx t) const;

  std::string str() const;

 private:
  std::vector<BigRational> c_;
  Var v_;
  void trim();
};

// Inverse of Poly::str().
Poly parse_poly(const std::string& s, Var v);

// Monic gcd over Q (zero if both are zero).
Poly gcd(const Poly& a, const Poly& b);

// Element of Q(t): reduced fraction with monic denominator.
class RatFunc {
 public:
  RatFunc() : num_(Var::kappa), den_(Poly::constant(1, Var::kappa)) {}
  RatFunc(long n, Var v = Var::kappa);  // NOLINT: integers convert implicitly
  RatFunc(const BigRational& c, Var v = Var::kappa);
  explicit RatFunc(Poly p);
  RatFunc(const Poly& num, const Poly& den);  // reduces; throws DivisionByZero

  static RatFunc variable(Var v) { return RatFunc(Poly::x(v)); }
  static RatFunc kappa() { return variable(Var::kappa); }
  static RatFunc q() { return variable(Var::q); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  Var var() const { return num_.var(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_constant(); }
  BigRational constant_value() const;  // requires is_constant()

  RatFunc operator-() const;
  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc& operator*=(const RatFunc& o);
  RatFunc& operator/=(const RatFunc& o);
  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

  RatFunc pow(int e) const;
  RatFunc inverse() const;

  // Horner evaluation; throws PoleAtEvaluationPoint.
  Cplx eval(Cplx t0) const;
  // Exact evaluation at a rational point; throws PoleAtEvaluationPoint.
  BigRational eval(const BigRational& t0) const;

  std::string str() const;  // "(num)/(den)" or "num"

 private:
  Poly num_, den_;
  void normalize();
  void adopt_var(const RatFunc& o);
};

// Element type traits used by the scalar-templated engines: exact RatFunc
// or plain double/complex with kappa already substituted.
inline bool is_zero(const RatFunc& r) { return r.is_zero(); }
inline bool is_zero(double d) { return d == 0.0; }
inline bool is_zero(const Cplx& c) { return c == Cplx(0.0, 0.0); }

// Quantum integers and factorials in Q(q).
RatFunc q_integer(int n);
RatFunc q_factorial(int n);
// q^e for any integer e
RatFunc q_power(int e);

// Generalized binomial coefficient C(n, k) for integer n, k >= 0.
BigRational binomial(long n, long k);
BigInt factorial(long n);

// Complex Gamma (Lanczos, reflection for Re z < 1/2); throws GammaPole.
Cplx complex_gamma(Cplx z);

}  // namespace vb
