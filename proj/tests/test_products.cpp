#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isolab/errors.hpp"
#include "isolab/invariantmap.hpp"
#include "isolab/products.hpp"

using namespace isolab;

namespace {

// First curve over F_17 with trace 3 (D = -59, h = 3).
Curve curve17() {
  for (u64 a = 0; a < 17; ++a)
    for (u64 b = 0; b < 17; ++b) {
      try {
        Curve E = make_curve(17, a, b);
        if (count_points(E) == 15) return E;
      } catch (const Error&) {
      }
    }
  fail(Err::SearchExhausted, "no trace-3 curve over F_17");
}

SubgroupDescriptor desc(std::initializer_list<IdealEntry> entries) {
  SubgroupDescriptor K;
  for (const auto& e : entries) K.word.entries.push_back(e);
  return K;
}

}  // namespace

TEST_CASE("coprime representatives dodge used norms") {
  QuadForm c{2, 0, 5};  // D = -40
  auto words = coprime_representatives({c, c}, -2, 11);
  REQUIRE(words.size() == 2);
  REQUIRE(words[0].entries.size() == 1);
  REQUIRE(words[1].entries.size() == 1);
  CHECK(words[0].entries[0].ell == 2);  // ramified 2-form
  CHECK(words[1].entries[0].ell == 7);  // split 7-form, 5 skipped as ramified

  auto single = coprime_representatives({c}, -2, 11);
  CHECK(single[0].entries.size() == 1);
  CHECK(single[0].entries[0].ell == 2);

  auto ident = coprime_representatives({identity_form(-40), c}, -2, 11);
  CHECK(ident[0].entries.empty());

  CHECK_THROWS_AS(coprime_representatives({c, identity_form(-59)}, -2, 11), Error);
}

TEST_CASE("representative words land in the right classes") {
  ClassGroupTable cg = enumerate_reduced(-59);
  std::vector<QuadForm> classes(cg.reduced_forms.begin(), cg.reduced_forms.end());
  auto words = coprime_representatives(classes, 3, 17);
  REQUIRE(words.size() == classes.size());
  std::set<u64> norms;
  for (size_t i = 0; i < words.size(); ++i) {
    QuadForm prod = identity_form(-59);
    for (const auto& e : words[i].entries) {
      CHECK(!norms.count(e.ell));
      norms.insert(e.ell);
      prod = compose(prod, form_pow(prime_form(-59, e.ell, e.sign, 3, 17), e.exp));
    }
    CHECK(prod == classes[i]);
  }
}

TEST_CASE("two and seven kernels over F_11 give the documented Bezout pair") {
  Curve E = make_curve(11, 1, 1);
  SubgroupDescriptor K1 = desc({{2, +1, 1}});
  SubgroupDescriptor K2 = desc({{7, -1, 1}});  // the pi - 4 eigenspace
  IsogenyMatrixPair pair = build_product_isomorphism(E, K1, K2);
  CHECK(pair.m1 == 2);
  CHECK(pair.m2 == 7);
  CHECK(pair.a == 4);
  CHECK(pair.b == -1);

  std::mt19937_64 rng(11);
  VerifyResult res = verify_matrix_identity(pair, 20, rng);
  CHECK(res.ok);
  CHECK_FALSE(res.vacuous);

  VerifyResult vac = verify_matrix_identity(pair, 0, rng);
  CHECK(vac.ok);
  CHECK(vac.vacuous);

  IsogenyMatrixPair bad = pair;
  bad.f[1][0].mult = -bad.f[1][0].mult;
  CHECK_FALSE(verify_matrix_identity(bad, 20, rng).ok);
}

TEST_CASE("trivial and overlapping kernels") {
  Curve E = make_curve(11, 1, 1);
  SubgroupDescriptor trivial;
  SubgroupDescriptor K2 = desc({{7, +1, 1}});
  IsogenyMatrixPair pair = build_product_isomorphism(E, trivial, K2);
  CHECK(pair.m1 == 1);
  std::mt19937_64 rng(13);
  CHECK(verify_matrix_identity(pair, 20, rng).ok);

  CHECK_THROWS_AS(build_product_isomorphism(E, K2, K2), Error);
  try {
    build_product_isomorphism(E, K2, K2);
  } catch (const Error& e) {
    CHECK(e.code() == Err::NotCoprime);
  }
}

TEST_CASE("matrix identities across many coprime kernel pairs") {
  std::mt19937_64 rng(17);
  Curve E11 = make_curve(11, 1, 1);
  Curve E17 = curve17();
  struct Case {
    Curve E;
    SubgroupDescriptor K1, K2;
  };
  std::vector<Case> cases{
      {E11, desc({{2, +1, 1}}), desc({{7, +1, 1}})},
      {E11, desc({{2, +1, 1}}), desc({{7, -1, 1}})},
      {E11, desc({{7, +1, 1}}), desc({{13, +1, 1}})},
      {E11, desc({{2, +1, 1}}), desc({{7, +1, 1}, {13, -1, 1}})},
      {E11, desc({{5, +1, 1}}), desc({{7, -1, 1}})},
      {E17, desc({{3, +1, 1}}), desc({{5, +1, 1}})},
      {E17, desc({{3, -1, 1}}), desc({{7, +1, 1}})},
      {E17, desc({{5, +1, 1}}), desc({{7, -1, 1}})},
      {E17, desc({{3, +1, 1}}), desc({{5, -1, 1}, {7, +1, 1}})},
      {E17, desc({{3, +1, 2}}), desc({{5, +1, 1}})},
  };
  for (const auto& c : cases) {
    IsogenyMatrixPair pair = build_product_isomorphism(c.E, c.K1, c.K2);
    CHECK(verify_matrix_identity(pair, 20, rng).ok);
  }
}

TEST_CASE("dual of an odd step multiplies by ell") {
  std::mt19937_64 rng(23);
  for (Curve E : {make_curve(11, 1, 1), curve17()}) {
    i64 t = (i64)(E.p + 1) - (i64)count_points(E);
    for (u64 ell : {3ull, 5ull, 7ull}) {
      SplitType s = frobenius_roots_mod_ell(t, (i64)E.p, ell);
      if (s.kind == SplitType::Inert) continue;
      IsogenyStep phi = velu_step(E, eigen_kernel(E, ell, s.mu));
      IsogenyStep phi_hat = dual_isogeny(phi);
      CHECK(phi_hat.domain == phi.codomain);
      CHECK(phi_hat.codomain == phi.domain);
      CHECK(phi_hat.kernel.ell == ell);
      for (int i = 0; i < 20; ++i) {
        Point P = random_point(E, rng);
        CHECK(apply_step(phi_hat, apply_step(phi, P)) == point_mul(E, ell, P));
      }

      // the bidual agrees with phi up to a sign
      IsogenyStep bidual = dual_isogeny(phi_hat);
      bool plus = true, minus = true;
      for (int i = 0; i < 20; ++i) {
        Point P = random_point(E, rng);
        Point lhs = apply_step(bidual, P), rhs = apply_step(phi, P);
        if (!(lhs == rhs)) plus = false;
        if (!(lhs == point_neg(phi.codomain, rhs))) minus = false;
      }
      CHECK((plus || minus));
    }
  }
}

TEST_CASE("class condition is the reduced product test") {
  ClassGroupTable cg = enumerate_reduced(-59);
  QuadForm id = identity_form(-59);
  QuadForm a = cg.reduced_forms[1], b = cg.reduced_forms[2];

  CHECK(check_class_condition({a, b}, {compose(a, b), id}));
  CHECK_FALSE(check_class_condition({a, id}, {id, id}));
  CHECK(check_class_condition({a, b, id}, {id, b, a}));

  CHECK_THROWS_AS(check_class_condition({a}, {a, b}), Error);
  CHECK_THROWS_AS(check_class_condition({a}, {identity_form(-40)}), Error);
}

TEST_CASE("class condition matches the invariant on realized curves") {
  IsogenyTable T = build_orbit_table(curve17(), 10);
  std::vector<std::pair<QuadForm, Curve>> reps;
  for (const auto& [j, E] : T.curve_for_j) reps.push_back({T.entries.at(j), E});

  for (const auto& [c1, E1] : reps)
    for (const auto& [c2, E2] : reps)
      for (const auto& [d1, F1] : reps)
        for (const auto& [d2, F2] : reps) {
          bool via_classes = check_class_condition({c1, c2}, {d1, d2});
          bool via_map = invariant_e_n(T, {E1, E2}) == invariant_e_n(T, {F1, F2});
          CHECK(via_classes == via_map);
        }
}
