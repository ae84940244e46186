#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <fstream>

#include "virblocks/qgroup.hpp"

using namespace vb;

namespace {

RatFunc q() { return RatFunc::q(); }

nlohmann::json fixture() {
  std::ifstream in(std::string(VB_TEST_DATA_DIR) + "/qgroup_values.json");
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

QGVector all_ones(const TensorShape& shape, int weight) {
  QGVector v(shape);
  long c = 1;
  for (const auto& idx : weight_basis(shape, weight)) v.add(idx, RatFunc(c++, Var::q));
  return v;
}

}  // namespace

TEST_CASE("generator action examples") {
  CHECK(act_generator(Gen::E, QGVector::basis({3}, {0})).is_zero());
  QGVector e = act_generator(Gen::E, QGVector::basis({2}, {1}));
  CHECK(e == (q() + q().inverse()) * QGVector::basis({2}, {0}));
  QGVector t = act_generator(Gen::E, QGVector::basis({1, 1}, {1, 0}));
  CHECK(t == q() * QGVector::basis({1, 1}, {0, 0}));
  CHECK(act_generator(Gen::F, QGVector::basis({2}, {2})).is_zero());
  QGVector k = act_generator(Gen::K, QGVector::basis({2, 1}, {0, 1}));
  CHECK(k == q() * QGVector::basis({2, 1}, {0, 1}));
}

TEST_CASE("quantum group relations on tensor products") {
  // KEK⁻¹ = q²E and [E,F] = (K−K⁻¹)/(q−q⁻¹) on a triple tensor product
  TensorShape shape{1, 2, 1};
  for (int w = -4; w <= 4; w += 2) {
    QGVector v = all_ones(shape, w);
    QGVector kek = act_generator(Gen::K, act_generator(Gen::E, act_generator(Gen::Kinv, v)));
    CHECK(kek == q().pow(2) * act_generator(Gen::E, v));
    QGVector ef = act_generator(Gen::E, act_generator(Gen::F, v)) - act_generator(Gen::F, act_generator(Gen::E, v));
    QGVector kk = (act_generator(Gen::K, v) - act_generator(Gen::Kinv, v));
    kk *= (q() - q().inverse()).inverse();
    CHECK(ef == kk);
  }
}

TEST_CASE("selection sets") {
  CHECK(selection_set(1, 1) == std::vector<int>{0, 2});
  CHECK(selection_set(0, 4) == std::vector<int>{4});
  CHECK(selection_set(2, 3) == std::vector<int>{1, 3, 5});
  CHECK(selection_set(3, 2) == selection_set(2, 3));
}

TEST_CASE("cg_embed examples") {
  const LinearMap& top = cg_embed(5, 2, 3);
  CHECK(top.columns.at({0}) == QGVector::basis({2, 3}, {0, 0}));
  const LinearMap& singlet = cg_embed(0, 1, 1);
  QGVector expect = QGVector::basis({1, 1}, {1, 0}) - q() * QGVector::basis({1, 1}, {0, 1});
  expect *= (q() - q().inverse()).inverse();
  CHECK(singlet.columns.at({0}) == expect);
  CHECK_THROWS_AS(cg_embed(5, 1, 3), Error);
  CHECK_THROWS_AS(cg_project(1, 1, 1), Error);
}

TEST_CASE("Clebsch–Gordan identities for labels up to 3") {
  for (int lam = 0; lam <= 3; ++lam)
    for (int mu = 0; mu <= 3; ++mu) {
      LinearMap sum{{lam, mu}, {lam, mu}, {}};
      for (int s : selection_set(mu, lam)) {
        const LinearMap& i = cg_embed(s, lam, mu);
        const LinearMap& p = cg_project(lam, mu, s);
        CHECK(compose(p, i).columns == identity_map({s}).columns);
        LinearMap proj = compose(i, p);
        for (auto& [idx, col] : proj.columns) sum.columns[idx] += col;
        for (int j = 0; j <= s; ++j) {
          QGVector e = QGVector::basis({s}, {j});
          for (Gen g : {Gen::E, Gen::F, Gen::K})
            CHECK(i.apply(act_generator(g, e)) == act_generator(g, i.apply(e)));
        }
      }
      CHECK(sum.columns == identity_map({lam, mu}).columns);
    }
}

TEST_CASE("cg_project separates isotypic components and projectors are idempotent") {
  CHECK(cg_project(1, 1, 2).apply(cg_embed(0, 1, 1).columns.at({0})).is_zero());
  LinearMap p = cg_projector(1, 1, 2);
  CHECK(compose(p, p).columns == p.columns);
}

TEST_CASE("embeddings and projections agree with the dense oracle") {
  auto data = fixture();
  for (const auto& row : data["embed"]) {
    BigRational q0 = parse_rational(row["q"].get<std::string>());
    int s = row["sigma"], lam = row["lambda"], mu = row["mu"];
    const LinearMap& m = cg_embed(s, lam, mu);
    for (int c = 0; c <= s; ++c)
      for (int i = 0; i <= lam; ++i)
        for (int j = 0; j <= mu; ++j) {
          BigRational ref = parse_rational(row["matrix"][i * (mu + 1) + j][c].get<std::string>());
          REQUIRE(m.columns.at({c}).coeff({i, j}).eval(q0) == ref);
        }
  }
  for (const auto& row : data["project"]) {
    BigRational q0 = parse_rational(row["q"].get<std::string>());
    int s = row["sigma"], lam = row["lambda"], mu = row["mu"];
    const LinearMap& m = cg_project(lam, mu, s);
    for (int k = 0; k <= s; ++k)
      for (int i = 0; i <= lam; ++i)
        for (int j = 0; j <= mu; ++j) {
          BigRational ref = parse_rational(row["matrix"][k][i * (mu + 1) + j].get<std::string>());
          REQUIRE(m.columns.at({i, j}).coeff({k}).eval(q0) == ref);
        }
  }
}

TEST_CASE("6j symbols agree with the dense oracle") {
  auto data = fixture();
  for (const auto& row : data["sixj"]) {
    BigRational q0 = parse_rational(row["q"].get<std::string>());
    RatFunc v = sixj(row["sigma"], row["l3"], row["l2"], row["l1"], row["kappa"], row["nu"]);
    REQUIRE(v.eval(q0) == parse_rational(row["value"].get<std::string>()));
  }
}

TEST_CASE("6j unit cases and defining identity") {
  for (int s = 0; s <= 3; ++s)
    for (int l = 0; l <= 3; ++l)
      for (int m = 0; m <= 3; ++m) {
        if (in_selection_set(l, s, m)) CHECK(sixj(s, m, l, 0, l, s) == RatFunc(1L, Var::q));
        if (in_selection_set(m, s, l)) CHECK(sixj(s, 0, l, m, s, l) == RatFunc(1L, Var::q));
      }
  CHECK(verify_sixj_identity(1, 1, 1, 1));
  CHECK(verify_sixj_identity(2, 2, 1, 1));
  CHECK(sixj_table(1, 1, 1, 1).size() == 4);
  CHECK_THROWS_AS(sixj(1, 1, 1, 1, 1, 0), Error);
}

TEST_CASE("highest weight spaces") {
  CHECK(highest_weight_space({1, 1}, 2).size() == 1);
  CHECK(highest_weight_space({1, 1, 1}, 1).size() == 2);
  CHECK(highest_weight_space({1, 1}, 1).empty());
  for (const auto& v : highest_weight_space({2, 1, 1}, 2)) {
    CHECK(act_generator(Gen::E, v).is_zero());
    CHECK(act_generator(Gen::K, v) == q().pow(2) * v);
  }
  auto data = fixture();
  for (const auto& row : data["hw_dim"]) {
    TensorShape shape = row["shape"].get<TensorShape>();
    int s = row["sigma"], d = row["dim"];
    CHECK(static_cast<int>(highest_weight_space(shape, s).size()) == d);
    CHECK(highest_weight_dim_at(shape, s, BigRational(3, 2)) == d);
  }
}

TEST_CASE("admissibility") {
  CHECK(is_admissible({1, 1, 1, 1}, {1, 0, 1}));
  CHECK_FALSE(is_admissible({1, 1, 1, 1}, {1, 1, 1}));
  CHECK(is_admissible({0, 2, 2, 0}, {0, 2, 0}));
  CHECK(admissible_sequences({1, 1, 1, 1}).size() == 2);
  CHECK_THROWS_AS(conformal_block_vector({1, 1, 1, 1}, {1, 1, 1}), Error);
}

TEST_CASE("conformal block vectors") {
  // single embedding
  QGVector u = conformal_block_vector({1, 2, 1}, {1, 1});
  CHECK(u == cg_embed(1, 2, 1).columns.at({0}));
  // trivial last step gives the singlet
  QGVector s = conformal_block_vector({1, 1, 0}, {1, 0});
  CHECK(s == cg_embed(0, 1, 1).columns.at({0}));
  for (int l0 = 0; l0 <= 2; ++l0)
    for (int l1 = 0; l1 <= 2; ++l1)
      for (int l2 = 0; l2 <= 2; ++l2)
        for (int linf = 0; linf <= 2; ++linf) {
          std::vector<int> lams{l0, l1, l2, linf};
          for (const auto& seq : admissible_sequences(lams)) {
            QGVector v = conformal_block_vector(lams, seq);
            CHECK(act_generator(Gen::E, v).is_zero());
            CHECK(act_generator(Gen::K, v) == q().pow(linf) * v);
            CHECK(check_projection_conditions(lams, seq, v));
          }
        }
}

TEST_CASE("projection conditions fail for a mixed vector") {
  std::vector<int> lams{1, 1, 1, 1};
  auto seqs = admissible_sequences(lams);
  REQUIRE(seqs.size() == 2);
  QGVector mix = conformal_block_vector(lams, seqs[0]) + conformal_block_vector(lams, seqs[1]);
  CHECK_FALSE(check_projection_conditions(lams, seqs[0], mix));
}
