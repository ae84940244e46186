#include "virblocks/virasoro.hpp"

#include <mutex>
#include <numeric>

#include "virblocks/linalg.hpp"
#include "virblocks/qgroup.hpp"

namespace vb {

// ---------------------------------------------------------------- partitions

int degree(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0); }

std::vector<Partition> partitions_of(int d) {
  std::vector<Partition> out;
  if (d < 0) return out;
  Partition cur;
  auto rec = [&](auto&& self, int left, int maxpart) -> void {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int m = 1; m <= std::min(left, maxpart); ++m) {
      cur.push_back(m);
      self(self, left - m, m);
      cur.pop_back();
    }
  };
  rec(rec, d, d);
  std::sort(out.begin(), out.end());
  return out;
}

long partition_count(int d) { return d < 0 ? 0 : static_cast<long>(partitions_of(d).size()); }

// ---------------------------------------------------------------- weights

RatFunc central_charge() {
  RatFunc k = RatFunc::kappa();
  return RatFunc(13) - RatFunc(6) * (k / 4 + RatFunc(4) / k);
}

RatFunc h_weight(const RatFunc& mu) {
  RatFunc k = RatFunc::kappa();
  return mu * (RatFunc(2) * (mu + 2) - k) / (RatFunc(2) * k);
}

RatFunc h_weight(int lambda) { return h_weight(RatFunc(lambda)); }

// ---------------------------------------------------------------- Verma vectors

VermaVector VermaVector::highest(const RatFunc& h, int first_row) { return basis(h, {}, first_row); }

VermaVector VermaVector::basis(const RatFunc& h, const Partition& p, int first_row) {
  VermaVector v{h, first_row, {}};
  v.add(p, RatFunc(1));
  return v;
}

VermaVector VermaVector::zero_like() const { return VermaVector{h, first_row, {}}; }

void VermaVector::add(const Partition& p, const RatFunc& c) {
  if (c.is_zero()) return;
  auto it = entries.find(p);
  if (it == entries.end()) {
    entries.emplace(p, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) entries.erase(it);
}

RatFunc VermaVector::coeff(const Partition& p) const {
  auto it = entries.find(p);
  return it == entries.end() ? RatFunc(0) : it->second;
}

int VermaVector::max_length() const {
  int m = 0;
  for (const auto& [p, c] : entries) m = std::max(m, static_cast<int>(p.size()));
  return m;
}

VermaVector& VermaVector::operator+=(const VermaVector& o) {
  for (const auto& [p, c] : o.entries) add(p, c);
  return *this;
}

VermaVector& VermaVector::operator-=(const VermaVector& o) {
  for (const auto& [p, c] : o.entries) add(p, -c);
  return *this;
}

VermaVector& VermaVector::operator*=(const RatFunc& s) {
  if (s.is_zero()) {
    entries.clear();
    return *this;
  }
  for (auto& [p, c] : entries) c *= s;
  return *this;
}

namespace {

using Terms = std::map<Partition, RatFunc>;

void add_term(Terms& t, const Partition& p, const RatFunc& c) {
  if (c.is_zero()) return;
  auto it = t.find(p);
  if (it == t.end()) {
    t.emplace(p, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) t.erase(it);
}

// PBW straightening of L_n acting on one basis vector, memoized per call.
class Straightener {
 public:
  explicit Straightener(const RatFunc& h) : h_(h), c_(central_charge()) {}

  const Terms& act(int n, const Partition& p) {
    auto key = std::make_pair(n, p);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Terms out = compute(n, p);
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

  Terms act(int n, const Terms& v) {
    Terms out;
    for (const auto& [p, c] : v)
      for (const auto& [q, d] : act(n, p)) add_term(out, q, c * d);
    return out;
  }

 private:
  RatFunc h_, c_;
  std::map<std::pair<int, Partition>, Terms> memo_;

  Terms compute(int n, const Partition& p) {
    Terms out;
    if (n == 0) {
      add_term(out, p, h_ + degree(p));
      return out;
    }
    if (p.empty()) {
      if (n < 0) add_term(out, {-n}, RatFunc(1));
      return out;
    }
    const int m = p.front();
    if (n < 0 && -n >= m) {
      Partition q{-n};
      q.insert(q.end(), p.begin(), p.end());
      add_term(out, q, RatFunc(1));
      return out;
    }
    // L_n L_{−m} r = L_{−m} L_n r + (n+m) L_{n−m} r + δ_{n,m} (c/12)(n³−n) r
    Partition rest(p.begin() + 1, p.end());
    Terms inner = act(n, rest);
    for (const auto& [q, d] : act(-m, inner)) add_term(out, q, d);
    if (n + m != 0)
      for (const auto& [q, d] : act(n - m, rest)) add_term(out, q, RatFunc(n + m) * d);
    if (n == m) add_term(out, rest, c_ * RatFunc(BigRational(long(n) * n * n - n, 12)));
    return out;
  }
};

}  // namespace

VermaVector act_L(int n, const VermaVector& v) {
  Straightener s(v.h);
  VermaVector out = v.zero_like();
  out.entries = s.act(n, v.entries);
  if (v.first_row >= 0) out = quotient_reduce(out);
  return out;
}

// ---------------------------------------------------------------- BSA singular vectors

std::vector<BsaTerm> bsa_terms(int lambda) {
  std::vector<BsaTerm> out;
  const int total = lambda + 1;
  RatFunc lf = RatFunc(BigRational(factorial(lambda)));
  RatFunc base = RatFunc(-4) / RatFunc::kappa();
  std::vector<int> cur;
  auto rec = [&](auto&& self, int left) -> void {
    if (left == 0) {
      const int k = static_cast<int>(cur.size());
      BigInt denom = 1;
      int prefix = 0;
      for (int u = 0; u + 1 < k; ++u) {
        prefix += cur[u];
        denom *= BigInt(prefix) * BigInt(total - prefix);
      }
      RatFunc coef = base.pow(total - k) * lf * lf / RatFunc(BigRational(denom));
      out.push_back({cur, coef});
      return;
    }
    for (int p = 1; p <= left; ++p) {
      cur.push_back(p);
      self(self, left - p);
      cur.pop_back();
    }
  };
  rec(rec, total);
  return out;
}

VermaVector singular_vector(int lambda) {
  RatFunc h = h_weight(lambda);
  Straightener s(h);
  VermaVector out = VermaVector::highest(h);
  out.entries.clear();
  for (const auto& t : bsa_terms(lambda)) {
    Terms v{{Partition{}, RatFunc(1)}};
    for (auto it = t.parts.rbegin(); it != t.parts.rend(); ++it) v = s.act(-*it, v);
    for (const auto& [p, c] : v) out.add(p, t.coef * c);
  }
  return out;
}

// ---------------------------------------------------------------- quotient

namespace {

struct EchelonSlice {
  std::vector<Partition> cols;
  std::vector<int> pivots;
  Matrix<RatFunc> rows;
};

std::mutex slice_mutex;
std::map<std::pair<int, int>, EchelonSlice> slice_cache;

EchelonSlice build_slice(int lambda, int d) {
  EchelonSlice s;
  s.cols = partitions_of(d);
  std::vector<Partition> gens = partitions_of(d - lambda - 1);
  RatFunc h = h_weight(lambda);
  VermaVector sv = singular_vector(lambda);
  Straightener st(h);
  s.rows = Matrix<RatFunc>(static_cast<int>(gens.size()), static_cast<int>(s.cols.size()));
  for (std::size_t r = 0; r < gens.size(); ++r) {
    Terms v = sv.entries;
    for (auto it = gens[r].rbegin(); it != gens[r].rend(); ++it) v = st.act(-*it, v);
    for (std::size_t c = 0; c < s.cols.size(); ++c) {
      auto f = v.find(s.cols[c]);
      if (f != v.end()) s.rows(static_cast<int>(r), static_cast<int>(c)) = f->second;
    }
  }
  s.pivots = rref(s.rows);
  return s;
}

const EchelonSlice& slice(int lambda, int d) {
  auto key = std::make_pair(lambda, d);
  {
    std::lock_guard<std::mutex> lock(slice_mutex);
    auto it = slice_cache.find(key);
    if (it != slice_cache.end()) return it->second;
  }
  EchelonSlice s = build_slice(lambda, d);
  std::lock_guard<std::mutex> lock(slice_mutex);
  return slice_cache.emplace(key, std::move(s)).first->second;
}

}  // namespace

VermaVector quotient_reduce(const VermaVector& v) {
  if (v.first_row < 0) throw std::invalid_argument("quotient_reduce needs a first-row module vector");
  const int lambda = v.first_row;
  std::map<int, Terms> by_degree;
  for (const auto& [p, c] : v.entries) by_degree[degree(p)].emplace(p, c);
  VermaVector out = v.zero_like();
  for (auto& [d, terms] : by_degree) {
    if (d >= lambda + 1) {
      const EchelonSlice& s = slice(lambda, d);
      for (std::size_t r = 0; r < s.pivots.size(); ++r) {
        auto it = terms.find(s.cols[s.pivots[r]]);
        if (it == terms.end()) continue;
        RatFunc f = it->second;
        for (std::size_t c = 0; c < s.cols.size(); ++c) {
          const RatFunc& e = s.rows(static_cast<int>(r), static_cast<int>(c));
          if (!e.is_zero()) add_term(terms, s.cols[c], -f * e);
        }
      }
    }
    for (const auto& [p, c] : terms) out.add(p, c);
  }
  return out;
}

int first_row_dimension(int lambda, int d) {
  if (d < lambda + 1) return static_cast<int>(partition_count(d));
  const EchelonSlice& s = slice(lambda, d);
  return static_cast<int>(s.cols.size() - s.pivots.size());
}

RatFunc hw_pairing(const Partition& wprime, const VermaVector& X) {
  Straightener s(X.h);
  Terms v = X.entries;
  for (int n : wprime) v = s.act(n, v);
  auto it = v.find(Partition{});
  return it == v.end() ? RatFunc(0) : it->second;
}

// ---------------------------------------------------------------- bivariate polynomials

BiPoly BiPoly::constant(const RatFunc& r) {
  BiPoly p;
  p.add(0, 0, r);
  return p;
}
BiPoly BiPoly::var_a() {
  BiPoly p;
  p.add(1, 0, RatFunc(1));
  return p;
}
BiPoly BiPoly::var_b() {
  BiPoly p;
  p.add(0, 1, RatFunc(1));
  return p;
}

int BiPoly::degree_a() const {
  int d = -1;
  for (const auto& [k, v] : c) d = std::max(d, k.first);
  return d;
}
int BiPoly::degree_b() const {
  int d = -1;
  for (const auto& [k, v] : c) d = std::max(d, k.second);
  return d;
}

RatFunc BiPoly::coeff(int i, int j) const {
  auto it = c.find({i, j});
  return it == c.end() ? RatFunc(0) : it->second;
}

void BiPoly::add(int i, int j, const RatFunc& v) {
  if (v.is_zero()) return;
  auto it = c.find({i, j});
  if (it == c.end()) {
    c.emplace(std::make_pair(i, j), v);
    return;
  }
  it->second += v;
  if (it->second.is_zero()) c.erase(it);
}

BiPoly& BiPoly::operator+=(const BiPoly& o) {
  for (const auto& [k, v] : o.c) add(k.first, k.second, v);
  return *this;
}
BiPoly& BiPoly::operator-=(const BiPoly& o) {
  for (const auto& [k, v] : o.c) add(k.first, k.second, -v);
  return *this;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  BiPoly out;
  for (const auto& [ka, va] : a.c)
    for (const auto& [kb, vb] : b.c) out.add(ka.first + kb.first, ka.second + kb.second, va * vb);
  return out;
}

BiPoly operator*(const RatFunc& s, const BiPoly& b) {
  BiPoly out;
  for (const auto& [k, v] : b.c) out.add(k.first, k.second, s * v);
  return out;
}

RatFunc BiPoly::eval(const RatFunc& a, const RatFunc& b) const {
  RatFunc out(0);
  for (const auto& [k, v] : c) out += v * a.pow(k.first) * b.pow(k.second);
  return out;
}

BiPoly BiPoly::substitute_a(const BiPoly& f) const {
  BiPoly out;
  std::vector<BiPoly> fpow{BiPoly::constant(RatFunc(1))};
  for (const auto& [k, v] : c) {
    while (static_cast<int>(fpow.size()) <= k.first) fpow.push_back(fpow.back() * f);
    BiPoly term;
    term.add(0, k.second, v);
    out += fpow[k.first] * term;
  }
  return out;
}

SelectionPoly selection_polynomial(int lambda) {
  BiPoly total;
  RatFunc hl = h_weight(lambda);
  for (const auto& t : bsa_terms(lambda)) {
    BiPoly prod = BiPoly::constant(t.coef);
    const int k = static_cast<int>(t.parts.size());
    for (int j = 0; j < k; ++j) {
      int tail = 0;
      for (int i = j + 1; i < k; ++i) tail += t.parts[i];
      RatFunc sign(t.parts[j] % 2 ? -1 : 1);
      BiPoly f = BiPoly::constant(sign * (hl + tail));
      f.add(0, 1, -sign);
      f.add(1, 0, sign * t.parts[j]);
      prod = prod * f;
    }
    total += prod;
  }
  return {lambda, total};
}

BiPoly h_weight_poly() {
  RatFunc k = RatFunc::kappa();
  BiPoly p;
  p.add(2, 0, RatFunc(1) / k);
  p.add(1, 0, RatFunc(2) / k - RatFunc(BigRational(1, 2)));
  return p;
}

BiPoly selection_product(int lambda) {
  BiPoly hmu = h_weight_poly();
  BiPoly out = BiPoly::constant(RatFunc(1));
  for (int l = 0; l <= lambda; ++l) {
    BiPoly shifted;  // a ↦ a + (λ − 2ℓ)
    shifted.add(1, 0, RatFunc(1));
    shifted.add(0, 0, RatFunc(lambda - 2 * l));
    out = out * (BiPoly::var_b() - hmu.substitute_a(shifted));
  }
  return out;
}

bool fusion_allowed(int lambda, int mu, int nu) { return in_selection_set(nu, lambda, mu); }

std::vector<int> fusion_channels(int lambda, int mu) { return selection_set(lambda, mu); }

// ---------------------------------------------------------------- β coefficients

Cplx GammaArg::eval(double kappa0) const { return complex_gamma(Cplx(a.get_d() + b.get_d() / kappa0, 0.0)); }

std::string GammaArg::str() const {
  std::string s = "Gamma(" + to_string(a);
  if (b != 0) s += (b > 0 ? " + " : " - ") + to_string(abs(b)) + "/kappa";
  return s + ")";
}

Cplx BetaCoef::eval(double kappa0) const {
  Cplx v(rational_factor.get_d(), 0.0);
  for (const auto& g : num) v *= g.eval(kappa0);
  for (const auto& g : den) v /= g.eval(kappa0);
  return v;
}

std::vector<std::string> BetaCoef::factor_strings() const {
  std::vector<std::string> out{to_string(rational_factor)};
  for (const auto& g : num) out.push_back(g.str());
  for (const auto& g : den) out.push_back("1/" + g.str());
  return out;
}

BetaCoef beta_coef(int l_mid, int l_in, int l_out) {
  if (!in_selection_set(l_out, l_mid, l_in))
    throw Error(ErrorCode::SelectionRuleViolation, "beta: output label outside the selection set");
  const int L = (l_mid + l_in - l_out) / 2;
  BetaCoef b;
  b.rational_factor = BigRational(1) / BigRational(factorial(L));
  for (int p = 1; p <= L; ++p) {
    b.num.push_back({1, 4 * p});
    b.num.push_back({1, -4 * (1 + l_in - p)});
    b.num.push_back({1, -4 * (1 + l_mid - p)});
    b.den.push_back({1, 4});
    b.den.push_back({2, -2 * (4 - 2 * p + l_in + l_mid + l_out)});
  }
  return b;
}

}  // namespace vb
