#include "virblocks/reduce.hpp"

#include <map>
#include <mutex>

namespace vb {

MatrixElementSpec make_spec(const std::vector<RatFunc>& weights, const Partition& bra,
                            const std::vector<Partition>& mids, const Partition& ket) {
  const std::size_t N = mids.size();
  if (weights.size() != N + 2) throw std::invalid_argument("make_spec: expected weights (h_0, …, h_N, h_∞)");
  MatrixElementSpec s;
  s.ket = VermaVector::basis(weights[0], ket);
  for (std::size_t i = 0; i < N; ++i) s.mids.push_back(VermaVector::basis(weights[i + 1], mids[i]));
  s.bra = VermaVector::basis(weights[N + 1], bra);
  return s;
}

namespace {

template <class S>
SeriesOperator<S> signed_power(int var, int m) {
  SeriesOperator<S> op = SeriesOperator<S>::mono(var, m);
  return (m % 2 != 0) ? op.scaled(S(-1L)) : op;
}

// Memoizes operators by (i, j, m) so equal factors share one node.
template <class S>
std::function<SeriesOperator<S>(int, int, int)> cached(std::function<SeriesOperator<S>(int, int, int)> f) {
  auto memo = std::make_shared<std::map<std::tuple<int, int, int>, SeriesOperator<S>>>();
  auto mu = std::make_shared<std::mutex>();
  return [f, memo, mu](int i, int j, int m) {
    std::lock_guard<std::mutex> lock(*mu);
    auto key = std::make_tuple(i, j, m);
    auto it = memo->find(key);
    if (it == memo->end()) it = memo->emplace(key, f(i, j, m)).first;
    return it->second;
  };
}

}  // namespace

template <class S>
ReductionGeometry<S> chain_geometry(int npoints) {
  using Op = SeriesOperator<S>;
  ReductionGeometry<S> g;
  g.npoints = npoints;
  g.power = cached<S>([](int i, int j, int m) -> Op {
    if (m == 0) return Op::identity();
    if (j == 0) return Op::mono(i - 1, m);
    if (i == 0) return signed_power<S>(j - 1, m);
    if (i > j) return Op::binom(i - 1, j - 1, +1, -1, m);
    return Op::binom(j - 1, i - 1, -1, +1, m);
  });
  g.deriv = [](int i) { return Op::deriv(i - 1); };
  return g;
}

template <class S>
ReductionGeometry<S> fused_geometry() {
  using Op = SeriesOperator<S>;
  const int y = 0, x = 1;
  ReductionGeometry<S> g;
  g.npoints = 2;
  g.power = cached<S>([](int i, int j, int m) -> Op {
    if (m == 0) return Op::identity();
    if (i == 1 && j == 0) return Op::mono(x, m);              // x
    if (i == 2 && j == 0) return Op::binom(x, y, +1, +1, m);  // x + y
    if (i == 0 && j == 1) return signed_power<S>(x, m);       // −x
    if (i == 0 && j == 2) return Op::binom(x, y, -1, -1, m);  // −x − y
    if (i == 2 && j == 1) return Op::mono(y, m);              // y
    if (i == 1 && j == 2) return signed_power<S>(y, m);       // −y
    throw std::invalid_argument("fused_geometry: bad point pair");
  });
  const Op dy = Op::deriv(y), dx_minus_dy = Op::deriv(x) - Op::deriv(y);
  g.deriv = [=](int i) { return i == 1 ? dx_minus_dy : dy; };
  return g;
}

namespace {

// Slots: 0 = ket (point 0), 1..N = inserted fields, N+1 = bra.
template <class S>
class Reducer {
 public:
  using Op = SeriesOperator<S>;
  using Key = std::vector<Partition>;

  Reducer(const ReductionGeometry<S>& g, std::vector<RatFunc> weights, double kappa0)
      : g_(g), N_(g.npoints), h_(std::move(weights)), kappa0_(kappa0) {}

  Op reduce(const std::vector<VermaVector>& slots) {
    Key key(slots.size());
    return expand(slots, 0, key, S(1L));
  }

 private:
  const ReductionGeometry<S>& g_;
  int N_;
  std::vector<RatFunc> h_;
  double kappa0_;
  std::map<Key, Op> memo_;

  S lift_r(const RatFunc& r) const { return lift<S>(r, kappa0_); }
  static S binom_s(long a, long b) { return lift_q<S>(binomial(a, b)); }

  Op expand(const std::vector<VermaVector>& slots, std::size_t pos, Key& key, const S& coef) {
    if (pos == slots.size()) return reduce_basis(key).scaled(coef);
    Op out = Op::zero();
    for (const auto& [p, c] : slots[pos].entries) {
      key[pos] = p;
      out = out + expand(slots, pos + 1, key, coef * lift_r(c));
    }
    return out;
  }

  VermaVector vec(int slot, const Partition& p) const { return VermaVector::basis(h_[slot], p); }

  // F(key with `slot` replaced by the vector v).
  Op with(Key key, int slot, const VermaVector& v) {
    Op out = Op::zero();
    for (const auto& [p, c] : v.entries) {
      key[slot] = p;
      out = out + reduce_basis(key).scaled(lift_r(c));
    }
    return out;
  }

  Op reduce_basis(const Key& key) {
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Op out = compute(key);
    memo_.emplace(key, out);
    return out;
  }

  Op compute(const Key& key) {
    const int bra = N_ + 1;
    int slot = -1;
    if (!key[bra].empty()) {
      slot = bra;
    } else {
      for (int s = N_; s >= 0; --s)
        if (!key[s].empty()) {
          slot = s;
          break;
        }
    }
    if (slot < 0) return Op::identity();
    const int n = key[slot][0];
    Key rest = key;
    rest[slot].erase(rest[slot].begin());
    if (slot == bra) return bra_rule(rest, n);
    if (slot == 0) return ket_rule(rest, n);
    return mid_rule(rest, slot, n);
  }

  // ⟨L'_{−n} u', Φ w_0⟩ = ⟨u', L_n Φ w_0⟩, L_n commuted to the right.
  Op bra_rule(const Key& rest, int n) {
    Op out = with(rest, 0, act_L(n, vec(0, rest[0])));
    for (int i = 1; i <= N_; ++i) {
      out = out + g_.power(i, 0, n + 1) * g_.deriv(i) * reduce_basis(rest);
      for (int k = 1; k <= n + 1; ++k) {
        VermaVector lw = act_L(k - 1, vec(i, rest[i]));
        if (lw.is_zero()) continue;
        out = out + (g_.power(i, 0, n + 1 - k) * with(rest, i, lw)).scaled(binom_s(n + 1, k));
      }
    }
    return out;
  }

  // Σ_{k ≥ 1} C(1−n, k)(p_i − p_j)^{1−n−k} F(w_i → L_{k−1} w_i), including k = 0 as ∂_i.
  Op field_terms(const Key& rest, int i, int j, int n) {
    Op out = g_.power(i, j, 1 - n) * g_.deriv(i) * reduce_basis(rest);
    const int top = degree(rest[i]) + 1;
    for (int k = 1; k <= top; ++k) {
      VermaVector lw = act_L(k - 1, vec(i, rest[i]));
      if (lw.is_zero()) continue;
      out = out + (g_.power(i, j, 1 - n - k) * with(rest, i, lw)).scaled(binom_s(1 - n, k));
    }
    return out;
  }

  // ⟨w', Φ L_{−n} u_0⟩ = ⟨L'_n w', Φ u_0⟩ − Σ_i ⟨w', [L_{−n}, Y_i] u_0⟩.
  Op ket_rule(const Key& rest, int n) {
    Op out = with(rest, N_ + 1, act_L(n, vec(N_ + 1, rest[N_ + 1])));
    for (int i = 1; i <= N_; ++i) out = out - field_terms(rest, i, 0, n);
    return out;
  }

  // Contour around p_j = contour at infinity − contours around every other point.
  Op mid_rule(const Key& rest, int j, int n) {
    const int bra = N_ + 1;
    Op out = Op::zero();
    const int dbra = degree(rest[bra]);
    for (int k = 0; n + k <= dbra; ++k) {
      VermaVector lw = act_L(n + k, vec(bra, rest[bra]));
      if (lw.is_zero()) continue;
      out = out + (g_.power(0, j, k) * with(rest, bra, lw)).scaled(binom_s(1 - n, k));
    }
    for (int i = 1; i <= N_; ++i)
      if (i != j) out = out - field_terms(rest, i, j, n);
    // point 0: L_{−1} w_0 traded for the bra action and total translation
    Op translation = with(rest, bra, act_L(1, vec(bra, rest[bra])));
    for (int i = 1; i <= N_; ++i) translation = translation - g_.deriv(i) * reduce_basis(rest);
    out = out - g_.power(0, j, 1 - n) * translation;
    const int top = degree(rest[0]) + 1;
    for (int k = 1; k <= top; ++k) {
      VermaVector lw = act_L(k - 1, vec(0, rest[0]));
      if (lw.is_zero()) continue;
      out = out - (g_.power(0, j, 1 - n - k) * with(rest, 0, lw)).scaled(binom_s(1 - n, k));
    }
    return out;
  }
};

}  // namespace

template <class S>
SeriesOperator<S> matrix_element_reduce(const MatrixElementSpec& spec, const ReductionGeometry<S>& geom,
                                        double kappa0) {
  const int N = geom.npoints;
  if (static_cast<int>(spec.mids.size()) != N)
    throw std::invalid_argument("matrix_element_reduce: slot count does not match the geometry");
  std::vector<VermaVector> slots;
  std::vector<RatFunc> weights;
  slots.push_back(spec.ket);
  for (const auto& m : spec.mids) slots.push_back(m);
  slots.push_back(spec.bra);
  for (auto& s : slots) {
    s.first_row = -1;  // reductions use the universal action
    weights.push_back(s.h);
  }
  Reducer<S> r(geom, weights, kappa0);
  return r.reduce(slots);
}

template ReductionGeometry<RatFunc> chain_geometry<RatFunc>(int);
template ReductionGeometry<double> chain_geometry<double>(int);
template ReductionGeometry<RatFunc> fused_geometry<RatFunc>();
template ReductionGeometry<double> fused_geometry<double>();
template SeriesOperator<RatFunc> matrix_element_reduce<RatFunc>(const MatrixElementSpec&,
                                                                const ReductionGeometry<RatFunc>&, double);
template SeriesOperator<double> matrix_element_reduce<double>(const MatrixElementSpec&,
                                                              const ReductionGeometry<double>&, double);

}  // namespace vb
