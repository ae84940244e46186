#include "virblocks/qgroup.hpp"

#include <algorithm>
#include <mutex>
#include <tuple>

#include "virblocks/linalg.hpp"

namespace vb {

namespace {

RatFunc qone() { return RatFunc(1L, Var::q); }
RatFunc qzero() { return RatFunc(0L, Var::q); }

// All multi-indices of a shape, lexicographic.
std::vector<MultiIndex> all_indices(const TensorShape& shape) {
  std::vector<MultiIndex> out;
  MultiIndex idx(shape.size(), 0);
  while (true) {
    out.push_back(idx);
    int p = static_cast<int>(shape.size()) - 1;
    while (p >= 0 && idx[p] == shape[p]) idx[p--] = 0;
    if (p < 0) break;
    ++idx[p];
  }
  return out;
}

void check_selection(int sigma, int lambda, int mu) {
  if (sigma < 0 || lambda < 0 || mu < 0 || !in_selection_set(sigma, mu, lambda))
    throw Error(ErrorCode::SelectionRuleViolation,
                std::to_string(sigma) + " is not in E(" + std::to_string(mu) + "," + std::to_string(lambda) + ")");
}

}  // namespace

// ---------------------------------------------------------------- QGVector

QGVector QGVector::basis(TensorShape s, MultiIndex idx) {
  QGVector v(std::move(s));
  v.add(idx, qone());
  return v;
}

void QGVector::add(const MultiIndex& idx, const RatFunc& c) {
  if (c.is_zero()) return;
  auto it = entries.find(idx);
  if (it == entries.end()) {
    entries.emplace(idx, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) entries.erase(it);
}

RatFunc QGVector::coeff(const MultiIndex& idx) const {
  auto it = entries.find(idx);
  return it == entries.end() ? qzero() : it->second;
}

QGVector& QGVector::operator+=(const QGVector& o) {
  if (shape.empty()) shape = o.shape;
  for (const auto& [k, c] : o.entries) add(k, c);
  return *this;
}

QGVector& QGVector::operator-=(const QGVector& o) {
  if (shape.empty()) shape = o.shape;
  for (const auto& [k, c] : o.entries) add(k, -c);
  return *this;
}

QGVector& QGVector::operator*=(const RatFunc& s) {
  if (s.is_zero()) {
    entries.clear();
    return *this;
  }
  for (auto& [k, c] : entries) c *= s;
  return *this;
}

int weight_of(const TensorShape& shape, const MultiIndex& idx) {
  int w = 0;
  for (std::size_t i = 0; i < shape.size(); ++i) w += shape[i] - 2 * idx[i];
  return w;
}

std::vector<MultiIndex> weight_basis(const TensorShape& shape, int weight) {
  std::vector<MultiIndex> out;
  int total = 0;
  for (int l : shape) total += l;
  if ((total - weight) % 2 != 0 || weight > total || weight < -total) return out;
  int budget = (total - weight) / 2;  // Σ j_i
  MultiIndex idx(shape.size(), 0);
  // depth-first in lexicographic order
  std::vector<int> suffix_cap(shape.size() + 1, 0);
  for (int i = static_cast<int>(shape.size()) - 1; i >= 0; --i) suffix_cap[i] = suffix_cap[i + 1] + shape[i];
  auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
    if (pos == shape.size()) {
      if (left == 0) out.push_back(idx);
      return;
    }
    int lo = std::max(0, left - suffix_cap[pos + 1]);
    int hi = std::min(shape[pos], left);
    for (int j = lo; j <= hi; ++j) {
      idx[pos] = j;
      self(self, pos + 1, left - j);
    }
  };
  rec(rec, 0, budget);
  return out;
}

QGVector act_generator(Gen g, const QGVector& v) {
  QGVector out(v.shape);
  const std::size_t n = v.shape.size();
  for (const auto& [idx, c] : v.entries) {
    switch (g) {
      case Gen::K:
      case Gen::Kinv: {
        int w = weight_of(v.shape, idx);
        out.add(idx, c * q_power(g == Gen::K ? w : -w));
        break;
      }
      case Gen::E: {
        // Δ(E) = E⊗K + 1⊗E: E on factor p, K on every factor to its right.
        int right_weight = 0;
        for (std::size_t p = n; p-- > 0;) {
          int j = idx[p], lam = v.shape[p];
          if (j > 0) {
            MultiIndex t = idx;
            --t[p];
            out.add(t, c * q_integer(j) * q_integer(lam + 1 - j) * q_power(right_weight));
          }
          right_weight += lam - 2 * j;
        }
        break;
      }
      case Gen::F: {
        // Δ(F) = F⊗1 + K⁻¹⊗F: F on factor p, K⁻¹ on every factor to its left.
        int left_weight = 0;
        for (std::size_t p = 0; p < n; ++p) {
          int j = idx[p], lam = v.shape[p];
          if (j < lam) {
            MultiIndex t = idx;
            ++t[p];
            out.add(t, c * q_power(-left_weight));
          }
          left_weight += lam - 2 * j;
        }
        break;
      }
    }
  }
  return out;
}

std::vector<int> selection_set(int mu, int lambda) {
  std::vector<int> out;
  for (int s = std::abs(mu - lambda); s <= mu + lambda; s += 2) out.push_back(s);
  return out;
}

bool in_selection_set(int sigma, int mu, int lambda) {
  return sigma >= std::abs(mu - lambda) && sigma <= mu + lambda && (sigma + mu + lambda) % 2 == 0;
}

// ---------------------------------------------------------------- linear maps

QGVector LinearMap::apply(const QGVector& v) const {
  QGVector out(dst);
  for (const auto& [idx, c] : v.entries) {
    auto it = columns.find(idx);
    if (it == columns.end()) continue;
    for (const auto& [k, d] : it->second.entries) out.add(k, c * d);
  }
  return out;
}

LinearMap compose(const LinearMap& outer, const LinearMap& inner) {
  LinearMap m{inner.src, outer.dst, {}};
  for (const auto& [idx, col] : inner.columns) m.columns.emplace(idx, outer.apply(col));
  return m;
}

LinearMap identity_map(const TensorShape& shape) {
  LinearMap m{shape, shape, {}};
  for (const auto& idx : all_indices(shape)) m.columns.emplace(idx, QGVector::basis(shape, idx));
  return m;
}

QGVector apply_on_factors(const LinearMap& f, std::size_t pos, const QGVector& v) {
  const std::size_t k = f.src.size();
  if (pos + k > v.shape.size() || !std::equal(f.src.begin(), f.src.end(), v.shape.begin() + pos))
    throw std::invalid_argument("apply_on_factors: shape mismatch");
  TensorShape out_shape(v.shape.begin(), v.shape.begin() + pos);
  out_shape.insert(out_shape.end(), f.dst.begin(), f.dst.end());
  out_shape.insert(out_shape.end(), v.shape.begin() + pos + k, v.shape.end());
  QGVector out(out_shape);
  for (const auto& [idx, c] : v.entries) {
    MultiIndex mid(idx.begin() + pos, idx.begin() + pos + k);
    auto it = f.columns.find(mid);
    if (it == f.columns.end()) continue;
    for (const auto& [fk, d] : it->second.entries) {
      MultiIndex t(idx.begin(), idx.begin() + pos);
      t.insert(t.end(), fk.begin(), fk.end());
      t.insert(t.end(), idx.begin() + pos + k, idx.end());
      out.add(t, c * d);
    }
  }
  return out;
}

// ---------------------------------------------------------------- Clebsch–Gordan

namespace {

std::mutex cache_mutex;
std::map<std::tuple<int, int, int>, LinearMap> embed_cache, project_cache;
std::map<std::tuple<int, int, int, int>, std::vector<SixJEntry>> sixj_cache;

LinearMap build_embed(int sigma, int lambda, int mu) {
  const int L = (lambda + mu - sigma) / 2;
  const TensorShape shape{lambda, mu};
  RatFunc q = RatFunc::q();
  RatFunc qd_pow = (q - q.inverse()).pow(-L);
  RatFunc denom_fixed = q_factorial(mu) * q_factorial(lambda);
  QGVector col(shape);
  for (int j = 0; j <= L; ++j) {
    int i = L - j;
    if (i > lambda || j > mu) continue;
    RatFunc c = q_factorial(mu - j) * q_factorial(lambda - i) / (denom_fixed * q_factorial(i) * q_factorial(j));
    c *= q_power(j * (mu + 1 - j)) * qd_pow;
    if (j % 2) c = -c;
    col.add({i, j}, c);
  }
  LinearMap m{{sigma}, shape, {}};
  for (int j = 0; j <= sigma; ++j) {
    m.columns.emplace(MultiIndex{j}, col);
    col = act_generator(Gen::F, col);
  }
  return m;
}

LinearMap build_project(int lambda, int mu, int sigma) {
  const TensorShape shape{lambda, mu};
  LinearMap m{shape, {sigma}, {}};
  std::vector<int> sel = selection_set(mu, lambda);
  for (int w = lambda + mu; w >= -(lambda + mu); w -= 2) {
    std::vector<MultiIndex> rows = weight_basis(shape, w);
    std::vector<std::pair<int, int>> cols;  // (σ', k)
    for (int s : sel) {
      if ((s - w) % 2 != 0) continue;
      int k = (s - w) / 2;
      if (k >= 0 && k <= s) cols.emplace_back(s, k);
    }
    const int n = static_cast<int>(rows.size());
    if (static_cast<int>(cols.size()) != n) throw Error(ErrorCode::SingularBasis, "weight space count mismatch");
    Matrix<RatFunc> A(n, n, qzero());
    for (int c = 0; c < n; ++c) {
      const LinearMap& e = cg_embed(cols[c].first, lambda, mu);
      const QGVector& v = e.columns.at({cols[c].second});
      for (int r = 0; r < n; ++r) A(r, c) = v.coeff(rows[r]);
    }
    Matrix<RatFunc> Ainv = inverse(A);
    for (int c = 0; c < n; ++c) {
      if (cols[c].first != sigma) continue;
      for (int r = 0; r < n; ++r) {
        QGVector img({sigma});
        img.add({cols[c].second}, Ainv(c, r));
        m.columns[rows[r]] = img;
      }
    }
    for (int r = 0; r < n; ++r) m.columns.try_emplace(rows[r], QGVector({sigma}));
  }
  return m;
}

}  // namespace

const LinearMap& cg_embed(int sigma, int lambda, int mu) {
  check_selection(sigma, lambda, mu);
  auto key = std::make_tuple(sigma, lambda, mu);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = embed_cache.find(key);
    if (it != embed_cache.end()) return it->second;
  }
  LinearMap m = build_embed(sigma, lambda, mu);
  std::lock_guard<std::mutex> lock(cache_mutex);
  return embed_cache.emplace(key, std::move(m)).first->second;
}

const LinearMap& cg_project(int lambda, int mu, int sigma) {
  check_selection(sigma, lambda, mu);
  auto key = std::make_tuple(lambda, mu, sigma);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = project_cache.find(key);
    if (it != project_cache.end()) return it->second;
  }
  LinearMap m = build_project(lambda, mu, sigma);
  std::lock_guard<std::mutex> lock(cache_mutex);
  return project_cache.emplace(key, std::move(m)).first->second;
}

LinearMap cg_projector(int lambda, int mu, int sigma) {
  return compose(cg_embed(sigma, lambda, mu), cg_project(lambda, mu, sigma));
}

// ---------------------------------------------------------------- highest weight spaces

namespace {

template <class F, class Conv>
Matrix<F> e_matrix(const TensorShape& shape, int sigma, const std::vector<MultiIndex>& src, Conv conv) {
  std::vector<MultiIndex> dst = weight_basis(shape, sigma + 2);
  std::map<MultiIndex, int> row_of;
  for (std::size_t r = 0; r < dst.size(); ++r) row_of[dst[r]] = static_cast<int>(r);
  Matrix<F> A(static_cast<int>(dst.size()), static_cast<int>(src.size()), conv(qzero()));
  for (std::size_t c = 0; c < src.size(); ++c) {
    QGVector img = act_generator(Gen::E, QGVector::basis(shape, src[c]));
    for (const auto& [k, v] : img.entries) A(row_of.at(k), static_cast<int>(c)) = conv(v);
  }
  return A;
}

}  // namespace

std::vector<QGVector> highest_weight_space(const TensorShape& shape, int sigma) {
  std::vector<QGVector> out;
  std::vector<MultiIndex> src = weight_basis(shape, sigma);
  if (src.empty() || sigma < 0) return out;
  Matrix<RatFunc> A = e_matrix<RatFunc>(shape, sigma, src, [](const RatFunc& r) { return r; });
  for (const auto& vec : nullspace(std::move(A))) {
    QGVector v(shape);
    for (std::size_t i = 0; i < src.size(); ++i) v.add(src[i], vec[i]);
    out.push_back(std::move(v));
  }
  return out;
}

int highest_weight_dim_at(const TensorShape& shape, int sigma, const BigRational& q0) {
  std::vector<MultiIndex> src = weight_basis(shape, sigma);
  if (src.empty() || sigma < 0) return 0;
  Matrix<BigRational> A =
      e_matrix<BigRational>(shape, sigma, src, [&](const RatFunc& r) { return r.eval(q0); });
  return static_cast<int>(src.size()) - rank(std::move(A));
}

// ---------------------------------------------------------------- conformal block vectors

bool is_admissible(const std::vector<int>& lambdas, const std::vector<int>& sigmas) {
  if (lambdas.size() < 2 || sigmas.size() + 1 != lambdas.size()) return false;
  const std::size_t N = sigmas.size() - 1;
  if (sigmas.front() != lambdas.front() || sigmas.back() != lambdas.back()) return false;
  for (std::size_t j = 1; j <= N; ++j)
    if (!in_selection_set(lambdas[j], sigmas[j], sigmas[j - 1])) return false;
  return true;
}

std::vector<std::vector<int>> admissible_sequences(const std::vector<int>& lambdas) {
  std::vector<std::vector<int>> out;
  if (lambdas.size() < 2) return out;
  const std::size_t N = lambdas.size() - 2;
  std::vector<int> seq{lambdas[0]};
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j > N) {
      if (seq.back() == lambdas.back()) out.push_back(seq);
      return;
    }
    for (int s : selection_set(lambdas[j], seq.back())) {
      seq.push_back(s);
      self(self, j + 1);
      seq.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

QGVector conformal_block_vector(const std::vector<int>& lambdas, const std::vector<int>& sigmas) {
  if (!is_admissible(lambdas, sigmas)) throw Error(ErrorCode::NotAdmissible, "sequence is not admissible");
  const std::size_t N = sigmas.size() - 1;
  QGVector u = QGVector::basis({sigmas[N]}, {0});
  for (std::size_t j = N; j >= 1; --j) {
    const LinearMap& e = cg_embed(sigmas[j], lambdas[j], sigmas[j - 1]);
    u = apply_on_factors(e, u.shape.size() - 1, u);
  }
  return u;
}

bool check_projection_conditions(const std::vector<int>& lambdas, const std::vector<int>& sigmas,
                                 const QGVector& u) {
  const std::size_t N = sigmas.size() - 1;
  QGVector v = u;
  for (std::size_t j = 1; j <= N; ++j) {
    const std::size_t pos = v.shape.size() - 2;
    LinearMap p = cg_projector(lambdas[j], sigmas[j - 1], sigmas[j]);
    if (!(apply_on_factors(p, pos, v) == v)) return false;
    v = apply_on_factors(cg_project(lambdas[j], sigmas[j - 1], sigmas[j]), pos, v);
  }
  return true;
}

// ---------------------------------------------------------------- 6j symbols

namespace {

// (id⊗ι_{κ,λ2,λ1})∘ι_{σ,λ3,κ} applied to e_j
QGVector lhs_vector(int sigma, int l3, int l2, int l1, int kidx, int j) {
  QGVector v = cg_embed(sigma, l3, kidx).apply(QGVector::basis({sigma}, {j}));
  return apply_on_factors(cg_embed(kidx, l2, l1), 1, v);
}

// (ι_{ν,λ3,λ2}⊗id)∘ι_{σ,ν,λ1} applied to e_j
QGVector rhs_vector(int sigma, int l3, int l2, int l1, int nu, int j) {
  QGVector v = cg_embed(sigma, nu, l1).apply(QGVector::basis({sigma}, {j}));
  return apply_on_factors(cg_embed(nu, l3, l2), 0, v);
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<SixJEntry> build_sixj(int sigma, int l3, int l2, int l1) {
  std::vector<int> kappas = intersect(selection_set(sigma, l3), selection_set(l2, l1));
  std::vector<int> nus = intersect(selection_set(sigma, l1), selection_set(l3, l2));
  if (kappas.size() != nus.size()) throw Error(ErrorCode::SingularBasis, "6j index sets differ in size");
  const TensorShape shape{l3, l2, l1};
  std::vector<MultiIndex> rows = weight_basis(shape, sigma);
  const int n = static_cast<int>(rows.size()), m = static_cast<int>(nus.size());
  Matrix<RatFunc> A(n, m, qzero());
  for (int c = 0; c < m; ++c) {
    QGVector r = rhs_vector(sigma, l3, l2, l1, nus[c], 0);
    for (int i = 0; i < n; ++i) A(i, c) = r.coeff(rows[i]);
  }
  std::vector<SixJEntry> out;
  for (int k : kappas) {
    QGVector lv = lhs_vector(sigma, l3, l2, l1, k, 0);
    std::vector<RatFunc> b(n, qzero());
    for (int i = 0; i < n; ++i) b[i] = lv.coeff(rows[i]);
    auto x = solve(A, b);
    if (!x) throw Error(ErrorCode::SingularBasis, "6j expansion is inconsistent");
    for (int c = 0; c < m; ++c) out.push_back({k, nus[c], (*x)[c]});
  }
  return out;
}

}  // namespace

std::vector<SixJEntry> sixj_table(int sigma, int l3, int l2, int l1) {
  if (sigma < 0 || l3 < 0 || l2 < 0 || l1 < 0) throw Error(ErrorCode::SelectionRuleViolation, "negative label");
  auto key = std::make_tuple(sigma, l3, l2, l1);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = sixj_cache.find(key);
    if (it != sixj_cache.end()) return it->second;
  }
  std::vector<SixJEntry> t = build_sixj(sigma, l3, l2, l1);
  std::lock_guard<std::mutex> lock(cache_mutex);
  return sixj_cache.emplace(key, std::move(t)).first->second;
}

RatFunc sixj(int sigma, int l3, int l2, int l1, int kidx, int nu) {
  if (!in_selection_set(kidx, sigma, l3) || !in_selection_set(kidx, l2, l1))
    throw Error(ErrorCode::SelectionRuleViolation, "kappa index outside E(σ,λ3)∩E(λ2,λ1)");
  if (!in_selection_set(nu, sigma, l1) || !in_selection_set(nu, l3, l2))
    throw Error(ErrorCode::SelectionRuleViolation, "nu outside E(σ,λ1)∩E(λ3,λ2)");
  for (const auto& e : sixj_table(sigma, l3, l2, l1))
    if (e.kidx == kidx && e.nu == nu) return e.value;
  throw Error(ErrorCode::SelectionRuleViolation, "no such 6j entry");
}

bool verify_sixj_identity(int sigma, int l3, int l2, int l1) {
  std::vector<SixJEntry> t = sixj_table(sigma, l3, l2, l1);
  std::vector<int> kappas = intersect(selection_set(sigma, l3), selection_set(l2, l1));
  for (int j = 0; j <= sigma; ++j) {
    for (int k : kappas) {
      QGVector diff = lhs_vector(sigma, l3, l2, l1, k, j);
      for (const auto& e : t)
        if (e.kidx == k) diff -= e.value * rhs_vector(sigma, l3, l2, l1, e.nu, j);
      if (!diff.is_zero()) return false;
    }
  }
  return true;
}

}  // namespace vb
