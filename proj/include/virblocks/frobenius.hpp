#pragma once

#include <climits>
#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

#include "virblocks/scalars.hpp"
#include "virblocks/virasoro.hpp"

namespace vb {

// ---------------------------------------------------------------- scalar lifting
//
// Engines are templated on the coefficient field S: RatFunc (exact Q(κ)) or
// double (κ already substituted by κ₀). Exact inputs are lifted through these.

template <class S>
S lift(const RatFunc& r, double kappa0);
template <>
inline RatFunc lift<RatFunc>(const RatFunc& r, double) { return r; }
template <>
inline double lift<double>(const RatFunc& r, double kappa0) { return r.eval(Cplx(kappa0, 0.0)).real(); }

template <class S>
S lift_q(const BigRational& r);
template <>
inline RatFunc lift_q<RatFunc>(const BigRational& r) { return RatFunc(r); }
template <>
inline double lift_q<double>(const BigRational& r) { return r.get_d(); }

inline Cplx to_cplx(const RatFunc& r, double kappa0) { return r.eval(Cplx(kappa0, 0.0)); }
inline Cplx to_cplx(double d, double) { return Cplx(d, 0.0); }

// ---------------------------------------------------------------- series

// Exponent shift e ∈ Z^N: the monomial ∏ x_i^{Δ_i + e_i}, variables ordered
// x_1 < … < x_N (index 0 is x_1).
using Shift = std::vector<int>;

// T(e) = Σ_i (N − i) e_i: the total ratio order of a homogeneous monomial.
inline int order_of(const Shift& e) {
  const int n = static_cast<int>(e.size());
  int t = 0;
  for (int i = 0; i < n; ++i) t += (n - 1 - i) * e[i];
  return t;
}

// Offsets a_m = Σ_{i≤m} e_i, m = 1..N−1.
inline std::vector<int> offsets_of(const Shift& e) {
  std::vector<int> a;
  int s = 0;
  for (std::size_t i = 0; i + 1 < e.size(); ++i) a.push_back(s += e[i]);
  return a;
}
inline Shift shift_of(const std::vector<int>& a) {
  Shift e(a.size() + 1, 0);
  int prev = 0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    e[m] = a[m] - prev;
    prev = a[m];
  }
  e[a.size()] = -prev;
  return e;
}

template <class S>
struct FrobeniusSeries {
  int nvars = 0;
  std::vector<S> delta;  // Δ_i
  int trunc = 0;         // coefficients complete for T(e) ≤ trunc
  std::map<Shift, S> coeffs;
  std::vector<BetaCoef> prefactor;  // numeric-only normalization

  FrobeniusSeries() = default;
  FrobeniusSeries(std::vector<S> d, int k) : nvars(static_cast<int>(d.size())), delta(std::move(d)), trunc(k) {}

  void add(const Shift& e, const S& c) {
    if (is_zero(c)) return;
    auto it = coeffs.find(e);
    if (it == coeffs.end()) {
      coeffs.emplace(e, c);
      return;
    }
    it->second += c;
    if (is_zero(it->second)) coeffs.erase(it);
  }
  S coeff(const Shift& e) const {
    auto it = coeffs.find(e);
    return it == coeffs.end() ? S(0L) : it->second;
  }
  void prune() {
    for (auto it = coeffs.begin(); it != coeffs.end();)
      it = order_of(it->first) > trunc ? coeffs.erase(it) : std::next(it);
  }
  FrobeniusSeries zero_like() const {
    FrobeniusSeries s(delta, trunc);
    s.prefactor = prefactor;
    return s;
  }
};

// ---------------------------------------------------------------- operators

// Primitive operators on series.
struct Prim {
  enum Kind { Deriv, Mono, Binom } kind;
  int var = 0;         // Deriv / Mono variable (0-based)
  int power = 0;       // Mono exponent, Binom exponent
  int lead = 0, small = 0;  // Binom: (s_l x_lead + s_s x_small)^power expanded in x_small/x_lead
  int sign_lead = 1, sign_small = 1;
};

template <class S>
struct OpNode {
  enum Kind { Identity, Primitive, Sum, Compose } kind = Identity;
  Prim prim{};
  std::vector<std::pair<S, std::shared_ptr<const OpNode>>> terms;  // Sum
  std::vector<std::shared_ptr<const OpNode>> factors;               // Compose, leftmost first
};

// Structured differential operator: sums and compositions of x-derivatives,
// monomial multiplications and binomial multiplications (x_i − x_j)^n with a
// recorded expansion direction.
template <class S>
class SeriesOperator {
 public:
  using Node = OpNode<S>;
  using Ptr = std::shared_ptr<const Node>;

  SeriesOperator() : root_(std::make_shared<Node>()) {}
  explicit SeriesOperator(Ptr p) : root_(std::move(p)) {}

  static SeriesOperator identity() { return SeriesOperator(); }
  static SeriesOperator zero() {
    auto n = std::make_shared<Node>();
    n->kind = Node::Sum;
    return SeriesOperator(n);
  }
  static SeriesOperator prim(const Prim& p) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Primitive;
    n->prim = p;
    return SeriesOperator(n);
  }
  static SeriesOperator deriv(int var) { return prim({Prim::Deriv, var, 0, 0, 0, 1, 1}); }
  static SeriesOperator mono(int var, int power) {
    if (power == 0) return identity();
    return prim({Prim::Mono, var, power, 0, 0, 1, 1});
  }
  // (sign_lead·x_lead + sign_small·x_small)^power, expanded in powers of x_small/x_lead.
  static SeriesOperator binom(int lead, int small, int sign_lead, int sign_small, int power) {
    return prim({Prim::Binom, 0, power, lead, small, sign_lead, sign_small});
  }
  static SeriesOperator scalar(const S& s) { return SeriesOperator().scaled(s); }

  SeriesOperator scaled(const S& s) const {
    auto n = std::make_shared<Node>();
    n->kind = Node::Sum;
    if (!is_zero(s)) n->terms.emplace_back(s, root_);
    return SeriesOperator(n);
  }

  bool is_zero_op() const { return root_->kind == Node::Sum && root_->terms.empty(); }

  friend SeriesOperator operator+(const SeriesOperator& a, const SeriesOperator& b) {
    if (a.is_zero_op()) return b;
    if (b.is_zero_op()) return a;
    auto n = std::make_shared<Node>();
    n->kind = Node::Sum;
    for (const auto* op : {&a, &b}) {
      if (op->root_->kind == Node::Sum)
        n->terms.insert(n->terms.end(), op->root_->terms.begin(), op->root_->terms.end());
      else
        n->terms.emplace_back(S(1L), op->root_);
    }
    return SeriesOperator(n);
  }
  friend SeriesOperator operator-(const SeriesOperator& a, const SeriesOperator& b) {
    return a + b.scaled(S(-1L));
  }
  // Composition a∘b.
  friend SeriesOperator operator*(const SeriesOperator& a, const SeriesOperator& b) {
    if (a.is_zero_op() || b.is_zero_op()) return zero();
    if (a.root_->kind == Node::Identity) return b;
    if (b.root_->kind == Node::Identity) return a;
    auto n = std::make_shared<Node>();
    n->kind = Node::Compose;
    for (const auto* op : {&a, &b}) {
      if (op->root_->kind == Node::Compose)
        n->factors.insert(n->factors.end(), op->root_->factors.begin(), op->root_->factors.end());
      else
        n->factors.push_back(op->root_);
    }
    return SeriesOperator(n);
  }
  friend SeriesOperator operator*(const S& s, const SeriesOperator& a) { return a.scaled(s); }

  const Ptr& root() const { return root_; }

  // Same tree with every scalar mapped through f (e.g. exact → numeric).
  template <class T, class F>
  SeriesOperator<T> map_scalars(F f) const {
    std::unordered_map<const Node*, typename SeriesOperator<T>::Ptr> memo;
    return SeriesOperator<T>(map_node<T>(root_, f, memo));
  }

 private:
  Ptr root_;

  template <class T, class F>
  static typename SeriesOperator<T>::Ptr map_node(const Ptr& p, F& f,
                                                  std::unordered_map<const Node*, typename SeriesOperator<T>::Ptr>& memo) {
    auto it = memo.find(p.get());
    if (it != memo.end()) return it->second;
    auto n = std::make_shared<OpNode<T>>();
    n->kind = static_cast<typename OpNode<T>::Kind>(p->kind);
    n->prim = p->prim;
    for (const auto& [s, c] : p->terms) n->terms.emplace_back(f(s), map_node<T>(c, f, memo));
    for (const auto& c : p->factors) n->factors.push_back(map_node<T>(c, f, memo));
    typename SeriesOperator<T>::Ptr out = n;
    memo.emplace(p.get(), out);
    return out;
  }
};

// ---------------------------------------------------------------- application

namespace detail {

inline int weight_of_var(int nvars, int var) { return nvars - 1 - var; }

template <class S>
FrobeniusSeries<S> apply_prim(const Prim& p, const FrobeniusSeries<S>& s) {
  const int n = s.nvars;
  FrobeniusSeries<S> out = s.zero_like();
  switch (p.kind) {
    case Prim::Deriv: {
      out.trunc = s.trunc - weight_of_var(n, p.var);
      for (const auto& [e, c] : s.coeffs) {
        Shift t = e;
        S f = s.delta[p.var] + S(static_cast<long>(e[p.var]));
        --t[p.var];
        if (order_of(t) <= out.trunc) out.add(t, c * f);
      }
      break;
    }
    case Prim::Mono: {
      out.trunc = s.trunc + p.power * weight_of_var(n, p.var);
      for (const auto& [e, c] : s.coeffs) {
        Shift t = e;
        t[p.var] += p.power;
        if (order_of(t) <= out.trunc) out.add(t, c);
      }
      break;
    }
    case Prim::Binom: {
      const int wl = weight_of_var(n, p.lead), ws = weight_of_var(n, p.small);
      if (ws <= wl) throw std::logic_error("binomial expansion must be in a ratio of smaller over larger variable");
      out.trunc = s.trunc + p.power * wl;
      // coefficients s_l^power · C(power, k) · (s_s/s_l)^k
      std::vector<S> bc;
      const BigRational lead_pow = (p.sign_lead < 0 && (p.power % 2 != 0)) ? BigRational(-1) : BigRational(1);
      const int ratio = p.sign_lead * p.sign_small;
      for (const auto& [e, c] : s.coeffs) {
        Shift t = e;
        t[p.lead] += p.power;
        int base = order_of(t);
        for (int k = 0; base + k * (ws - wl) <= out.trunc; ++k) {
          if (static_cast<int>(bc.size()) <= k) {
            BigRational b = lead_pow * binomial(p.power, k);
            if (ratio < 0 && k % 2) b = -b;
            bc.push_back(lift_q<S>(b));
          }
          if (!is_zero(bc[k])) out.add(t, c * bc[k]);
          --t[p.lead];
          ++t[p.small];
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace detail

namespace detail {

// DAG-memoized application: a (node, input) pair is evaluated once, where
// inputs are identified by the address of their shared result object.
template <class S>
class Applier {
 public:
  using SP = std::shared_ptr<const FrobeniusSeries<S>>;

  SP run(const std::shared_ptr<const OpNode<S>>& node, const SP& s) {
    auto key = std::make_pair(static_cast<const void*>(node.get()), static_cast<const void*>(s.get()));
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    SP out = compute(node, s);
    memo_.emplace(key, out);
    return out;
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<const void*, const void*>& k) const {
      return std::hash<const void*>()(k.first) * 31u ^ std::hash<const void*>()(k.second);
    }
  };
  std::unordered_map<std::pair<const void*, const void*>, SP, KeyHash> memo_;

  SP compute(const std::shared_ptr<const OpNode<S>>& node, const SP& s) {
    switch (node->kind) {
      case OpNode<S>::Identity:
        return s;
      case OpNode<S>::Primitive:
        return std::make_shared<FrobeniusSeries<S>>(apply_prim(node->prim, *s));
      case OpNode<S>::Sum: {
        auto out = std::make_shared<FrobeniusSeries<S>>(s->zero_like());
        if (node->terms.empty()) return out;
        out->trunc = INT_MAX;
        std::vector<SP> parts;
        parts.reserve(node->terms.size());
        for (const auto& term : node->terms) {
          parts.push_back(run(term.second, s));
          out->trunc = std::min(out->trunc, parts.back()->trunc);
        }
        for (std::size_t i = 0; i < parts.size(); ++i) {
          const S& c = node->terms[i].first;
          for (const auto& [e, v] : parts[i]->coeffs)
            if (order_of(e) <= out->trunc) out->add(e, c * v);
        }
        return out;
      }
      case OpNode<S>::Compose: {
        SP cur = s;
        for (auto f = node->factors.rbegin(); f != node->factors.rend(); ++f) cur = run(*f, cur);
        return cur;
      }
    }
    return s;
  }
};

}  // namespace detail

// Exact truncated action; the result is complete for T ≤ result.trunc.
// Throws TruncationUnderflow when that bound falls below `required`.
template <class S>
FrobeniusSeries<S> apply_operator(const SeriesOperator<S>& op, const FrobeniusSeries<S>& s, int required = INT_MIN) {
  detail::Applier<S> app;
  FrobeniusSeries<S> out = *app.run(op.root(), std::make_shared<const FrobeniusSeries<S>>(s));
  if (out.trunc < required)
    throw Error(ErrorCode::TruncationUnderflow,
                "operator output is only complete through order " + std::to_string(out.trunc));
  return out;
}

// ---------------------------------------------------------------- evaluation

struct SeriesValue {
  Cplx value;       // prefactor · Σ coefficients · monomials
  Cplx raw;         // without prefactor
  double tail = 0;  // heuristic: largest |term| among the highest included order
  int last_order = 0;
  std::map<int, Cplx> by_order;  // raw contribution of each order T
};

template <class S>
SeriesValue eval_series(const FrobeniusSeries<S>& s, double kappa0, const std::vector<double>& points) {
  if (static_cast<int>(points.size()) != s.nvars) throw Error(ErrorCode::DomainViolation, "point dimension mismatch");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] <= 0 || (i > 0 && points[i] <= points[i - 1]))
      throw Error(ErrorCode::DomainViolation, "evaluation points must satisfy 0 < x_1 < … < x_N");
  }
  std::vector<Cplx> d;
  for (const auto& x : s.delta) d.push_back(to_cplx(x, kappa0));
  std::vector<double> logs;
  for (double x : points) logs.push_back(std::log(x));
  SeriesValue r;
  r.last_order = INT_MIN;
  for (const auto& [e, c] : s.coeffs) r.last_order = std::max(r.last_order, order_of(e));
  // sum in increasing order for determinism and accuracy
  std::map<int, Cplx>& by_order = r.by_order;
  for (const auto& [e, c] : s.coeffs) {
    Cplx expo(0, 0);
    for (int i = 0; i < s.nvars; ++i) expo += (d[i] + double(e[i])) * logs[i];
    Cplx term = to_cplx(c, kappa0) * std::exp(expo);
    by_order[order_of(e)] += term;
    if (order_of(e) == r.last_order) r.tail = std::max(r.tail, std::abs(term));
  }
  r.raw = Cplx(0, 0);
  for (const auto& [t, v] : by_order) r.raw += v;
  Cplx pre(1, 0);
  for (const auto& b : s.prefactor) pre *= b.eval(kappa0);
  r.value = pre * r.raw;
  r.tail *= std::abs(pre);
  return r;
}

// Exact → numeric.
inline FrobeniusSeries<double> to_numeric(const FrobeniusSeries<RatFunc>& s, double kappa0) {
  std::vector<double> d;
  for (const auto& x : s.delta) d.push_back(lift<double>(x, kappa0));
  FrobeniusSeries<double> out(d, s.trunc);
  out.prefactor = s.prefactor;
  for (const auto& [e, c] : s.coeffs) out.add(e, lift<double>(c, kappa0));
  return out;
}

inline SeriesOperator<double> to_numeric(const SeriesOperator<RatFunc>& op, double kappa0) {
  return op.map_scalars<double>([kappa0](const RatFunc& r) { return lift<double>(r, kappa0); });
}

}  // namespace vb
