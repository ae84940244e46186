#include "virblocks/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "virblocks/qgroup.hpp"
#include "virblocks/reduce.hpp"
#include "virblocks/series.hpp"

namespace vb {

template <class S>
FrobeniusSeries<S> expand_regime_A(const std::vector<int>& labels, int sigma, int K, double kappa0) {
  if (labels.size() != 4) throw std::invalid_argument("regime A expects labels (λ_0, λ_1, λ_2, λ_∞)");
  if (!fusion_allowed(labels[0], labels[1], sigma) || !fusion_allowed(sigma, labels[2], labels[3]))
    throw Error(ErrorCode::SelectionRuleViolation, "ς is not an admissible intermediate label");
  return compose_blocks<S>(labels, {labels[0], sigma, labels[3]}, K, kappa0);
}

template FrobeniusSeries<RatFunc> expand_regime_A<RatFunc>(const std::vector<int>&, int, int, double);
template FrobeniusSeries<double> expand_regime_A<double>(const std::vector<int>&, int, int, double);

namespace {

struct Evaluated {
  Cplx value;
  double tail = 0;
  int K = 0;
};

// Magnitude of the contributions of the last `width` supported orders.
double tail_of(const SeriesValue& v, int trunc, const Cplx& prefactor, int width = 4) {
  double t = 0;
  for (const auto& [order, c] : v.by_order)
    if (order > trunc - width) t += std::abs(c);
  return t * std::abs(prefactor);
}

Evaluated evaluate_adaptive(const std::function<FrobeniusSeries<double>(int)>& build, const std::vector<double>& pt,
                            double kappa0, int K, const AssocOptions& opt) {
  Evaluated out;
  for (int k = K;; k = std::min(opt.max_trunc, k + std::max(8, k / 2))) {
    FrobeniusSeries<double> s = build(k);
    SeriesValue v = eval_series(s, kappa0, pt);
    Cplx pre = v.raw == Cplx(0, 0) ? Cplx(1, 0) : v.value / v.raw;
    out = {v.value, tail_of(v, s.trunc, pre), k};
    if (!opt.adaptive || k >= opt.max_trunc || out.tail <= opt.tol / 10 * std::abs(out.value)) break;
  }
  return out;
}

MatrixElementSpec spec_for(const std::vector<int>& labels, const std::vector<Insertion>& ins) {
  std::vector<RatFunc> w = weights_of(labels);
  std::vector<Partition> words(4);
  int total = 0;
  for (const auto& i : ins) {
    if (i.slot < 0 || i.slot > 3) throw std::invalid_argument("insertion slot must be 0..3");
    if (!words[i.slot].empty()) throw std::invalid_argument("one insertion per slot");
    Partition p = i.word;
    std::sort(p.rbegin(), p.rend());
    for (int n : p)
      if (n < 1) throw std::invalid_argument("insertion modes must be positive");
    words[i.slot] = p;
    total += static_cast<int>(p.size());
  }
  if (total > 2) throw std::invalid_argument("descendant insertions are limited to total PBW length 2");
  return make_spec(w, words[3], {words[1], words[2]}, words[0]);
}

AssocReport run_check(const std::vector<int>& labels, int sigma, const std::vector<Insertion>& ins, double x1,
                      double x2, double kappa0, int K, const AssocOptions& opt) {
  if (labels.size() != 4) throw std::invalid_argument("labels must be (λ_0, λ_1, λ_2, λ_∞)");
  if (!(0 < x2 - x1 && x2 - x1 < x1 && x1 < x2))
    throw Error(ErrorCode::DomainViolation, "point must satisfy 0 < x_2 − x_1 < x_1 < x_2");
  if (!(opt.tol > 0)) throw std::invalid_argument("tolerance must be positive");
  if (!fusion_allowed(labels[0], labels[1], sigma) || !fusion_allowed(sigma, labels[2], labels[3]))
    throw Error(ErrorCode::SelectionRuleViolation, "ς is not an admissible intermediate label");

  AssocReport r;
  r.labels = labels;
  r.sigma = sigma;
  r.insertions = ins;
  r.x1 = x1;
  r.x2 = x2;
  r.kappa0 = kappa0;
  r.K_requested = K;
  r.tol = opt.tol;

  const MatrixElementSpec spec = spec_for(labels, ins);
  const bool plain = ins.empty();
  const auto chain = chain_geometry<double>(2);
  const auto fused = fused_geometry<double>();
  const SeriesOperator<double> opA = plain ? SeriesOperator<double>() : matrix_element_reduce(spec, chain, kappa0);
  const SeriesOperator<double> opB = plain ? SeriesOperator<double>() : matrix_element_reduce(spec, fused, kappa0);

  Evaluated A = evaluate_adaptive(
      [&](int k) {
        auto s = expand_regime_A<double>(labels, sigma, k, kappa0);
        return plain ? s : apply_operator(opA, s);
      },
      {x1, x2}, kappa0, K, opt);
  r.K_A = A.K;
  r.value_A = A.value;
  r.tail_A = A.tail;

  const Cplx q0 = std::exp(Cplx(0, 4 * M_PI / kappa0));
  std::vector<Cplx> terms;
  for (int mu : fusion_channels(labels[1], labels[2])) {
    if (!fusion_allowed(labels[0], labels[3], mu)) continue;
    Evaluated B = evaluate_adaptive(
        [&](int k) {
          auto s = expand_regime_B<double>(labels, mu, k, kappa0);
          return plain ? s : apply_operator(opB, s);
        },
        {x2 - x1, x1}, kappa0, K, opt);
    Cplx six = sixj(labels[3], labels[2], labels[1], labels[0], sigma, mu).eval(q0);
    auto ov = opt.sixj_override.find(mu);
    if (ov != opt.sixj_override.end()) six = ov->second;
    r.sixj_values[mu] = six;
    r.branch_values[mu] = B.value;
    r.K_B = std::max(r.K_B, B.K);
    r.tail_B += std::abs(six) * B.tail;
    terms.push_back(six * B.value);
  }
  std::sort(terms.begin(), terms.end(), [](const Cplx& a, const Cplx& b) { return std::abs(a) < std::abs(b); });
  r.value_B = Cplx(0, 0);
  for (const Cplx& t : terms) r.value_B += t;

  r.abs_diff = std::abs(r.value_A - r.value_B);
  r.rel_diff = r.abs_diff / std::max({std::abs(r.value_A), std::abs(r.value_B), 1e-300});
  r.verdict = r.rel_diff <= opt.tol;
  return r;
}

}  // namespace

AssocReport assoc_check(const std::vector<int>& labels, int sigma, double x1, double x2, double kappa0, int K,
                        const AssocOptions& opt) {
  return run_check(labels, sigma, {}, x1, x2, kappa0, K, opt);
}

AssocReport descendant_assoc_check(const std::vector<int>& labels, int sigma, const std::vector<Insertion>& insertions,
                                   double x1, double x2, double kappa0, int K, const AssocOptions& opt) {
  return run_check(labels, sigma, insertions, x1, x2, kappa0, K, opt);
}

std::vector<std::pair<std::vector<int>, int>> assoc_cases(int max_label) {
  std::vector<std::pair<std::vector<int>, int>> out;
  for (int l0 = 0; l0 <= max_label; ++l0)
    for (int l1 = 0; l1 <= max_label; ++l1)
      for (int l2 = 0; l2 <= max_label; ++l2)
        for (int li = 0; li <= max_label; ++li)
          for (int s : fusion_channels(l0, l1))
            if (fusion_allowed(s, l2, li)) out.push_back({{l0, l1, l2, li}, s});
  return out;
}

}  // namespace vb
