#include "virblocks/series.hpp"

#include <cmath>

#include "virblocks/qgroup.hpp"

namespace vb {

std::vector<RatFunc> weights_of(const std::vector<int>& labels) {
  std::vector<RatFunc> h;
  for (int l : labels) h.push_back(h_weight(l));
  return h;
}

namespace {

template <class S>
SeriesOperator<S> signed_mono(int var, int power) {
  SeriesOperator<S> m = SeriesOperator<S>::mono(var, power);
  return (power % 2 != 0) ? m.scaled(S(-1L)) : m;
}

// (x_i − x_j)^m with the expansion direction fixed by the variable order.
template <class S>
SeriesOperator<S> difference_power(int i, int j, int m) {
  if (i > j) return SeriesOperator<S>::binom(i, j, +1, -1, m);
  return SeriesOperator<S>::binom(j, i, -1, +1, m);
}

template <class S>
S lift_int_times(long c, const RatFunc& r, double kappa0) {
  return lift<S>(RatFunc(c) * r, kappa0);
}

}  // namespace

template <class S>
SeriesOperator<S> witt_reduced(int j, int n, const std::vector<RatFunc>& h, double kappa0) {
  const int N = static_cast<int>(h.size()) - 1;
  if (j < 1 || j > N) throw std::invalid_argument("witt_reduced: slot out of range");
  const int vj = j - 1;
  using Op = SeriesOperator<S>;
  Op sum_d = Op::zero();
  for (int v = 0; v < N; ++v) sum_d = sum_d + Op::deriv(v);
  Op out = signed_mono<S>(vj, n + 1) * sum_d;
  out = out - signed_mono<S>(vj, n).scaled(lift_int_times<S>(1 + n, h[0], kappa0));
  for (int i = 1; i <= N; ++i) {
    if (i == j) continue;
    const int vi = i - 1;
    out = out - difference_power<S>(vi, vj, n + 1) * Op::deriv(vi);
    out = out - difference_power<S>(vi, vj, n).scaled(lift_int_times<S>(1 + n, h[i], kappa0));
  }
  return out;
}

template <class S>
SeriesOperator<S> bsa_reduced(int j, const std::vector<int>& labels, double kappa0) {
  const std::vector<RatFunc> h = weights_of(labels);
  return bsa_operator<S>(labels.at(j), [&](int p) { return witt_reduced<S>(j, -p, h, kappa0); }, kappa0);
}

template <class S>
SeriesOperator<S> bsa_infinity_operator(const std::vector<int>& labels, int lambda_inf, double kappa0) {
  const std::vector<RatFunc> h = weights_of(labels);
  const int N = static_cast<int>(labels.size()) - 1;
  using Op = SeriesOperator<S>;
  auto L_plus = [&](int p) {
    Op out = Op::zero();
    for (int i = 1; i <= N; ++i) {
      out = out + Op::mono(i - 1, p + 1) * Op::deriv(i - 1);
      out = out + Op::mono(i - 1, p).scaled(lift_int_times<S>(p + 1, h[i], kappa0));
    }
    return out;
  };
  return bsa_operator<S>(lambda_inf, L_plus, kappa0);
}

template <class S>
SeriesOperator<S> witt_hatted(int n, const RatFunc& h0, const RatFunc& h1, double kappa0) {
  using Op = SeriesOperator<S>;
  const int y = 0, x = 1;
  Op out = Op::binom(x, y, -1, -1, n + 1) * Op::deriv(x);
  out = out - Op::binom(x, y, -1, -1, n).scaled(lift_int_times<S>(1 + n, h0, kappa0));
  out = out - signed_mono<S>(y, n + 1) * (Op::deriv(x) - Op::deriv(y));
  out = out - signed_mono<S>(y, n).scaled(lift_int_times<S>(1 + n, h1, kappa0));
  return out;
}

template <class S>
SeriesOperator<S> bsa_hatted(const std::vector<int>& labels, double kappa0) {
  const RatFunc h0 = h_weight(labels.at(0)), h1 = h_weight(labels.at(1));
  return bsa_operator<S>(labels.at(2), [&](int p) { return witt_hatted<S>(-p, h0, h1, kappa0); }, kappa0);
}

namespace {

template <class S>
S indicial_denominator(int lambda, const RatFunc& h_in, const RatFunc& h_out_base, int k, double kappa0) {
  static thread_local std::map<int, SelectionPoly> polys;
  auto it = polys.find(lambda);
  if (it == polys.end()) it = polys.emplace(lambda, selection_polynomial(lambda)).first;
  RatFunc d = it->second.poly.eval(h_in, h_out_base + RatFunc(k));
  if (d.is_zero())
    throw Error(ErrorCode::IndicialDenominatorZero, "indicial denominator vanishes at offset " + std::to_string(k));
  S v = lift<S>(d, kappa0);
  if (is_zero(v))
    throw Error(ErrorCode::IndicialDenominatorZero, "indicial denominator vanishes numerically at offset " +
                                                        std::to_string(k));
  return v;
}

template <class S>
FrobeniusSeries<S> compose_rec(const std::vector<int>& lambdas, const std::vector<int>& sigmas, int K,
                               double kappa0) {
  const int N = static_cast<int>(lambdas.size()) - 2;
  std::vector<S> delta;
  for (int i = 1; i <= N; ++i)
    delta.push_back(lift<S>(h_weight(sigmas[i]) - h_weight(lambdas[i]) - h_weight(sigmas[i - 1]), kappa0));
  FrobeniusSeries<S> slice0(delta, K);
  if (N == 1) {
    slice0.add(Shift{0}, S(1L));
    return slice0;
  }
  std::vector<int> sub_l{sigmas[1]};
  sub_l.insert(sub_l.end(), lambdas.begin() + 2, lambdas.end());
  std::vector<int> sub_s(sigmas.begin() + 1, sigmas.end());
  FrobeniusSeries<S> sub = compose_rec<S>(sub_l, sub_s, K, kappa0);
  for (const auto& [e, c] : sub.coeffs) {
    Shift full{0};
    full.insert(full.end(), e.begin(), e.end());
    slice0.add(full, c);
  }
  std::vector<int> labels(lambdas.begin(), lambdas.end() - 1);
  SeriesOperator<S> op = bsa_reduced<S>(1, labels, kappa0);
  const RatFunc h_in = h_weight(lambdas[0]), h_out = h_weight(sigmas[1]);
  return peel_solve(op, slice0, lambdas[1] + 1,
                    [&](int k) { return indicial_denominator<S>(lambdas[1], h_in, h_out, k, kappa0); });
}

}  // namespace

template <class S>
FrobeniusSeries<S> compose_blocks(const std::vector<int>& lambdas, const std::vector<int>& sigmas, int K,
                                  double kappa0) {
  if (lambdas.size() < 3 || sigmas.size() + 1 != lambdas.size())
    throw Error(ErrorCode::NotAdmissible, "expected lambdas (λ_0..λ_N, λ_∞) and sigmas (ς_0..ς_N)");
  if (!is_admissible(lambdas, sigmas)) throw Error(ErrorCode::NotAdmissible, "sequence is not admissible");
  if (K < 0) throw std::invalid_argument("truncation must be nonnegative");
  FrobeniusSeries<S> s = compose_rec<S>(lambdas, sigmas, K, kappa0);
  const int N = static_cast<int>(lambdas.size()) - 2;
  for (int j = 1; j <= N; ++j) s.prefactor.push_back(beta_coef(lambdas[j], sigmas[j - 1], sigmas[j]));
  return s;
}

template <class S>
FrobeniusSeries<S> expand_regime_B(const std::vector<int>& labels, int mu, int K, double kappa0) {
  if (labels.size() != 4) throw std::invalid_argument("regime B expects labels (λ_0, λ_1, λ_2, λ_∞)");
  const int l0 = labels[0], l1 = labels[1], l2 = labels[2], linf = labels[3];
  if (!fusion_allowed(l1, l2, mu) || !fusion_allowed(l0, linf, mu))
    throw Error(ErrorCode::SelectionRuleViolation, "μ is not in both selection sets");
  if (K < 0) throw std::invalid_argument("truncation must be nonnegative");
  const RatFunc hmu = h_weight(mu);
  std::vector<S> delta{lift<S>(hmu - h_weight(l2) - h_weight(l1), kappa0),
                       lift<S>(h_weight(linf) - hmu - h_weight(l0), kappa0)};
  FrobeniusSeries<S> slice0(delta, K);
  slice0.add(Shift{0, 0}, S(1L));
  SeriesOperator<S> op = bsa_hatted<S>({l0, l1, l2}, kappa0);
  const RatFunc h_in = h_weight(l1);
  FrobeniusSeries<S> s = peel_solve(op, slice0, l2 + 1,
                                    [&](int k) { return indicial_denominator<S>(l2, h_in, hmu, k, kappa0); });
  s.prefactor = {beta_coef(l2, l1, mu), beta_coef(mu, l0, linf)};
  return s;
}

template <class S>
bool annihilates(const SeriesOperator<S>& op, const FrobeniusSeries<S>& s) {
  return apply_operator(op, s).coeffs.empty();
}

template <class S>
double residual_norm(const SeriesOperator<S>& op, const FrobeniusSeries<S>& s, double kappa0) {
  double m = 0;
  for (const auto& [e, c] : apply_operator(op, s).coeffs) m = std::max(m, std::abs(to_cplx(c, kappa0)));
  return m;
}

#define VB_INSTANTIATE(S)                                                                                    \
  template SeriesOperator<S> witt_reduced<S>(int, int, const std::vector<RatFunc>&, double);                 \
  template SeriesOperator<S> bsa_reduced<S>(int, const std::vector<int>&, double);                           \
  template SeriesOperator<S> bsa_infinity_operator<S>(const std::vector<int>&, int, double);                 \
  template SeriesOperator<S> witt_hatted<S>(int, const RatFunc&, const RatFunc&, double);                    \
  template SeriesOperator<S> bsa_hatted<S>(const std::vector<int>&, double);                                 \
  template FrobeniusSeries<S> compose_blocks<S>(const std::vector<int>&, const std::vector<int>&, int, double); \
  template FrobeniusSeries<S> expand_regime_B<S>(const std::vector<int>&, int, int, double);                 \
  template bool annihilates<S>(const SeriesOperator<S>&, const FrobeniusSeries<S>&);                         \
  template double residual_norm<S>(const SeriesOperator<S>&, const FrobeniusSeries<S>&, double);

VB_INSTANTIATE(RatFunc)
VB_INSTANTIATE(double)

}  // namespace vb
