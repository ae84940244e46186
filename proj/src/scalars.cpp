#include "virblocks/scalars.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "virblocks/config.hpp"

namespace vb {

std::string to_string(const BigRational& r) { return r.get_str(); }

BigRational parse_rational(const std::string& s) {
  BigRational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("not a rational: " + s);
  r.canonicalize();
  return r;
}

const char* var_name(Var v) {
  switch (v) {
    case Var::q: return "q";
    case Var::kappa: return "kappa";
    case Var::h: return "h";
    case Var::mu: return "mu";
  }
  return "?";
}

// ---------------------------------------------------------------- Poly

Poly::Poly(std::vector<BigRational> coeffs, Var v) : c_(std::move(coeffs)), v_(v) {
  for (auto& c : c_) c.canonicalize();
  trim();
}

Poly Poly::constant(const BigRational& c, Var v) { return Poly(std::vector<BigRational>{c}, v); }

Poly Poly::monomial(const BigRational& c, int deg, Var v) {
  std::vector<BigRational> cs(deg + 1);
  cs[deg] = c;
  return Poly(std::move(cs), v);
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator*=(const BigRational& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& c : c_) c *= s;
  return *this;
}

namespace {

// p = content * A / den with A a primitive integer vector.
struct IntPoly {
  std::vector<BigInt> a;
  BigRational scale;  // p = scale * a
};

IntPoly to_int(const Poly& p) {
  IntPoly r;
  BigInt den = 1;
  for (const auto& c : p.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  r.a.resize(p.coeffs().size());
  BigInt g = 0;
  for (std::size_t i = 0; i < r.a.size(); ++i) {
    const auto& c = p.coeffs()[i];
    r.a[i] = c.get_num() * (den / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r.a[i].get_mpz_t());
  }
  if (g == 0) g = 1;
  if (!r.a.empty() && r.a.back() < 0) g = -g;
  for (auto& x : r.a) x /= g;
  r.scale = BigRational(g, den);
  r.scale.canonicalize();
  return r;
}

Poly from_int(const std::vector<BigInt>& a, const BigRational& scale, Var v) {
  std::vector<BigRational> cs(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    cs[i] = BigRational(a[i]) * scale;
  }
  return Poly(std::move(cs), v);
}

std::vector<BigInt> int_mul(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<BigInt> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  return r;
}

// Exact division test in Z[t]; g primitive with nonzero lead. Fills quotient.
bool int_divides(std::vector<BigInt> a, const std::vector<BigInt>& g, std::vector<BigInt>* quot) {
  int da = static_cast<int>(a.size()) - 1, dg = static_cast<int>(g.size()) - 1;
  if (da < dg) return false;
  std::vector<BigInt> q(da - dg + 1);
  BigInt t, rem;
  for (int i = da; i >= dg; --i) {
    if (a[i] == 0) continue;
    mpz_tdiv_qr(t.get_mpz_t(), rem.get_mpz_t(), a[i].get_mpz_t(), g[dg].get_mpz_t());
    if (rem != 0) return false;
    q[i - dg] = t;
    for (int j = 0; j <= dg; ++j) mpz_submul(a[i - dg + j].get_mpz_t(), t.get_mpz_t(), g[j].get_mpz_t());
  }
  for (int i = 0; i < dg; ++i)
    if (a[i] != 0) return false;
  if (quot) *quot = std::move(q);
  return true;
}

BigInt max_norm(const std::vector<BigInt>& a) {
  BigInt m = 0;
  for (const auto& x : a) {
    BigInt ax = abs(x);
    if (ax > m) m = ax;
  }
  return m;
}

// Heuristic gcd of primitive integer polynomials (Char-Geddes-Gonnet).
// A returned candidate that divides both inputs is the true gcd.
bool heu_gcd(const std::vector<BigInt>& A, const std::vector<BigInt>& B, std::vector<BigInt>& G) {
  BigInt na = max_norm(A), nb = max_norm(B);
  BigInt xi = 2 * std::min(na, nb) + 29;
  std::size_t maxdeg = std::max(A.size(), B.size());
  for (int iter = 0; iter < 6; ++iter) {
    if (mpz_sizeinbase(xi.get_mpz_t(), 2) * maxdeg > 200000) return false;
    BigInt a = 0, b = 0;
    for (std::size_t i = A.size(); i-- > 0;) a = a * xi + A[i];
    for (std::size_t i = B.size(); i-- > 0;) b = b * xi + B[i];
    BigInt gam;
    mpz_gcd(gam.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    std::vector<BigInt> cand;
    BigInt half = xi / 2;
    while (gam != 0) {
      BigInt d;
      mpz_fdiv_r(d.get_mpz_t(), gam.get_mpz_t(), xi.get_mpz_t());
      if (d > half) d -= xi;
      cand.push_back(d);
      gam = (gam - d) / xi;
    }
    if (!cand.empty()) {
      BigInt cont = 0;
      for (auto& x : cand) mpz_gcd(cont.get_mpz_t(), cont.get_mpz_t(), x.get_mpz_t());
      if (cand.back() < 0) cont = -cont;
      for (auto& x : cand) x /= cont;
      if (int_divides(A, cand, nullptr) && int_divides(B, cand, nullptr)) {
        G = std::move(cand);
        return true;
      }
    }
    xi = xi * 73794 / 27011;
  }
  return false;
}

Poly euclid_gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly q(a.var()), r(a.var());
    Poly::divmod(a, b, q, r);
    a = std::move(b);
    b = r.is_zero() ? r : r.monic();
  }
  return a.monic();
}

}  // namespace

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly(a.var());
  if (a.degree() == 0) return b * a.c_[0];
  if (b.degree() == 0) {
    Poly r = a;
    r *= b.c_[0];
    return r;
  }
  IntPoly ia = to_int(a), ib = to_int(b);
  return from_int(int_mul(ia.a, ib.a), ia.scale * ib.scale, a.var());
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
  r = a;
  q = Poly(a.var());
  if (a.degree() < b.degree()) return;
  std::vector<BigRational> qc(a.degree() - b.degree() + 1);
  BigRational inv_lead = 1 / b.lead();
  BigRational t;
  for (int i = a.degree(); i >= b.degree(); --i) {
    if (r.c_[i] == 0) continue;
    t = r.c_[i] * inv_lead;
    qc[i - b.degree()] = t;
    for (int j = 0; j <= b.degree(); ++j) r.c_[i - b.degree() + j] -= t * b.c_[j];
  }
  r.trim();
  q = Poly(std::move(qc), a.var());
}

Poly Poly::exact_div(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
  if (a.is_zero()) return Poly(a.var());
  if (b.degree() == 0) return a * (1 / b.c_[0]);
  IntPoly ia = to_int(a), ib = to_int(b);
  std::vector<BigInt> q;
  if (!int_divides(ia.a, ib.a, &q)) throw std::logic_error("Poly::exact_div: not divisible");
  return from_int(q, ia.scale / ib.scale, a.var());
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return *this * (1 / lead());
}

Poly Poly::derivative() const {
  std::vector<BigRational> cs;
  for (int i = 1; i <= degree(); ++i) cs.push_back(c_[i] * i);
  return Poly(std::move(cs), v_);
}

Poly Poly::compose_affine(const BigRational& a, const BigRational& b) const {
  Poly lin(std::vector<BigRational>{b, a}, v_);
  Poly r(v_);
  for (int i = degree(); i >= 0; --i) {
    r = r * lin;
    r += constant(c_[i], v_);
  }
  return r;
}

Cplx Poly::eval(Cplx t) const {
  Cplx r = 0;
  for (int i = degree(); i >= 0; --i) r = r * t + c_[i].get_d();
  return r;
}

BigRational Poly::eval(const BigRational& t) const {
  BigRational r = 0;
  for (int i = degree(); i >= 0; --i) r = r * t + c_[i];
  return r;
}

double Poly::abs_scale(Cplx t) const {
  double s = 0, p = 1, at = std::abs(t);
  for (int i = 0; i <= degree(); ++i, p *= at) s += std::abs(c_[i].get_d()) * p;
  return s;
}

std::string Poly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i <= degree(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << to_string(c_[i]);
    if (i >= 1) os << '*' << var_name(v_);
    if (i >= 2) os << '^' << i;
  }
  return os.str();
}

Poly parse_poly(const std::string& s, Var v) {
  Poly r(v);
  if (s == "0") return r;
  std::string name = var_name(v);
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t end = s.find(" + ", pos);
    std::string term = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    std::size_t star = term.find('*');
    int deg = 0;
    std::string coeff = term;
    if (star != std::string::npos) {
      coeff = term.substr(0, star);
      std::string rest = term.substr(star + 1);
      std::size_t caret = rest.find('^');
      if (rest.substr(0, caret) != name) throw std::invalid_argument("bad variable in polynomial: " + s);
      deg = caret == std::string::npos ? 1 : std::stoi(rest.substr(caret + 1));
    }
    r += Poly::monomial(parse_rational(coeff), deg, v);
    if (end == std::string::npos) break;
    pos = end + 3;
  }
  return r;
}

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.degree() == 0 || b.degree() == 0) return Poly::constant(1, a.var());
  IntPoly ia = to_int(a), ib = to_int(b);
  std::vector<BigInt> g;
  if (heu_gcd(ia.a, ib.a, g)) return from_int(g, 1, a.var()).monic();
  return euclid_gcd(a, b);
}

// ---------------------------------------------------------------- RatFunc

RatFunc::RatFunc(long n, Var v) : num_(Poly::constant(n, v)), den_(Poly::constant(1, v)) {}

RatFunc::RatFunc(const BigRational& c, Var v) : num_(Poly::constant(c, v)), den_(Poly::constant(1, v)) {}

RatFunc::RatFunc(Poly p) : num_(std::move(p)), den_(Poly::constant(1, num_.var())) {}

RatFunc::RatFunc(const Poly& num, const Poly& den) : num_(num), den_(den) {
  if (den_.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  den_.set_var(num_.var());
  normalize();
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = Poly::constant(1, num_.var());
    return;
  }
  if (den_.degree() > 0 && num_.degree() > 0) {
    Poly g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = Poly::exact_div(num_, g);
      den_ = Poly::exact_div(den_, g);
    }
  }
  if (den_.lead() != 1) {
    BigRational s = 1 / den_.lead();
    num_ *= s;
    den_ *= s;
  }
}

void RatFunc::adopt_var(const RatFunc& o) {
  if (var() == o.var()) return;
  if (is_constant()) {
    num_.set_var(o.var());
    den_.set_var(o.var());
  } else if (!o.is_constant()) {
    throw std::logic_error(std::string("mixing rational functions in ") + var_name(var()) + " and " +
                           var_name(o.var()));
  }
}

BigRational RatFunc::constant_value() const {
  if (!is_constant()) throw std::logic_error("RatFunc::constant_value on non-constant");
  return num_.coeff(0) / den_.coeff(0);
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  adopt_var(o);
  if (o.is_zero()) return *this;
  if (is_zero()) {
    Var v = var();
    *this = o;
    if (o.is_constant()) {
      num_.set_var(v);
      den_.set_var(v);
    }
    return *this;
  }
  if (den_.is_one() && o.den_.is_one()) {
    num_ += o.num_;
    return *this;
  }
  if (o.den_.is_one()) {
    num_ += o.num_ * den_;
    return *this;
  }
  if (den_.is_one()) {
    num_ = num_ * o.den_ + o.num_;
    den_ = o.den_;
    return *this;
  }
  if (den_ == o.den_) {
    num_ += o.num_;
    normalize();
    return *this;
  }
  Poly g = gcd(den_, o.den_);
  if (g.degree() == 0) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
    return *this;
  }
  Poly d1g = Poly::exact_div(den_, g), d2g = Poly::exact_div(o.den_, g);
  Poly t = num_ * d2g + o.num_ * d1g;
  if (t.is_zero()) {
    *this = RatFunc(0L, var());
    return *this;
  }
  Poly g2 = gcd(t, g);
  if (g2.degree() > 0) {
    t = Poly::exact_div(t, g2);
    d2g = d1g * Poly::exact_div(o.den_, g2);
  } else {
    d2g = d1g * o.den_;
  }
  num_ = std::move(t);
  den_ = std::move(d2g);
  if (den_.lead() != 1) {
    BigRational s = 1 / den_.lead();
    num_ *= s;
    den_ *= s;
  }
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
  adopt_var(o);
  if (is_zero()) return *this;
  if (o.is_zero()) {
    *this = RatFunc(0L, var());
    return *this;
  }
  if (o.is_constant()) {
    num_ *= o.constant_value();
    return *this;
  }
  if (is_constant()) {
    BigRational c = constant_value();
    Var v = o.var();
    *this = o;
    num_ *= c;
    (void)v;
    return *this;
  }
  Poly n1 = num_, d1 = den_, n2 = o.num_, d2 = o.den_;
  if (!d2.is_one()) {
    Poly g = gcd(n1, d2);
    if (g.degree() > 0) {
      n1 = Poly::exact_div(n1, g);
      d2 = Poly::exact_div(d2, g);
    }
  }
  if (!d1.is_one()) {
    Poly g = gcd(n2, d1);
    if (g.degree() > 0) {
      n2 = Poly::exact_div(n2, g);
      d1 = Poly::exact_div(d1, g);
    }
  }
  num_ = n1 * n2;
  den_ = d1 * d2;
  if (den_.lead() != 1) {
    BigRational s = 1 / den_.lead();
    num_ *= s;
    den_ *= s;
  }
  return *this;
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero rational function");
  RatFunc r;
  r.num_ = den_;
  r.den_ = num_;
  if (r.den_.lead() != 1) {
    BigRational s = 1 / r.den_.lead();
    r.num_ *= s;
    r.den_ *= s;
  }
  return r;
}

RatFunc& RatFunc::operator/=(const RatFunc& o) {
  if (o.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero rational function");
  return *this *= o.inverse();
}

RatFunc RatFunc::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  RatFunc r(1L, var()), b = *this;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

Cplx RatFunc::eval(Cplx t0) const {
  Cplx d = den_.eval(t0);
  if (std::abs(d) <= Tolerances::pole * den_.abs_scale(t0))
    throw Error(ErrorCode::PoleAtEvaluationPoint, "denominator vanishes at evaluation point");
  return num_.eval(t0) / d;
}

BigRational RatFunc::eval(const BigRational& t0) const {
  BigRational d = den_.eval(t0);
  if (d == 0) throw Error(ErrorCode::PoleAtEvaluationPoint, "denominator vanishes at evaluation point");
  return num_.eval(t0) / d;
}

std::string RatFunc::str() const {
  if (den_.is_one()) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

// ---------------------------------------------------------------- q-numbers

RatFunc q_power(int e) {
  if (e >= 0) return RatFunc(Poly::monomial(1, e, Var::q));
  return RatFunc(Poly::constant(1, Var::q), Poly::monomial(1, -e, Var::q));
}

RatFunc q_integer(int n) {
  if (n == 0) return RatFunc(0L, Var::q);
  if (n < 0) return -q_integer(-n);
  // [n] = (q^{2n-2} + q^{2n-4} + ... + 1) / q^{n-1}
  std::vector<BigRational> cs(2 * n - 1);
  for (int i = 0; i < n; ++i) cs[2 * i] = 1;
  return RatFunc(Poly(std::move(cs), Var::q), Poly::monomial(1, n - 1, Var::q));
}

RatFunc q_factorial(int n) {
  RatFunc r(1L, Var::q);
  for (int m = 2; m <= n; ++m) r *= q_integer(m);
  return r;
}

BigRational binomial(long n, long k) {
  if (k < 0) return 0;
  BigRational r = 1;
  for (long i = 0; i < k; ++i) r = r * BigRational(n - i) / BigRational(i + 1);
  return r;
}

BigInt factorial(long n) {
  BigInt r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

// ---------------------------------------------------------------- Gamma

namespace {

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

Cplx lanczos(Cplx z) {
  z -= 1.0;
  Cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + double(i));
  Cplx t = z + kLanczosG + 0.5;
  return std::sqrt(2 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace

Cplx complex_gamma(Cplx z) {
  double nearest = std::round(z.real());
  if (nearest <= 0 && std::abs(z - Cplx(nearest, 0.0)) < Tolerances::gamma_pole)
    throw Error(ErrorCode::GammaPole, "Gamma evaluated at a nonpositive integer");
  if (z.real() < 0.5) {
    using std::numbers::pi;
    return pi / (std::sin(pi * z) * lanczos(1.0 - z));
  }
  return lanczos(z);
}

}  // namespace vb
