#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isolab/errors.hpp"
#include "isolab/invariantmap.hpp"
#include "isolab/isogeny.hpp"

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

std::vector<Curve> all_classes(const IsogenyTable& T) {
  std::vector<Curve> out;
  for (const auto& [j, E] : T.curve_for_j) out.push_back(E);
  return out;
}

}  // namespace

TEST_CASE("orbit table over F_11 saturates at h(-40) = 2") {
  Curve E = make_curve(11, 1, 1);
  IsogenyTable T = build_orbit_table(E, 10);
  CHECK(T.D == -40);
  CHECK(T.size() == 2);
  CHECK(T.entries.at(j_invariant(E)) == identity_form(-40));
  CHECK(T.entries.at(9) == QuadForm{1, 0, 10});
  u64 other = 0;
  for (const auto& [j, f] : T.entries)
    if (j != 9) other = j;
  CHECK(T.entries.at(other) == QuadForm{2, 0, 5});
  CHECK(T.size() == enumerate_reduced(T.D).h());
}

TEST_CASE("orbit table matches enumerate_reduced across fixtures") {
  for (Curve E : {make_curve(11, 1, 1), curve17()}) {
    IsogenyTable T = build_orbit_table(E, 13);
    ClassGroupTable cg = enumerate_reduced(T.D);
    CHECK(T.size() == cg.h());
    // the labels are exactly the reduced forms, each hit once
    std::set<QuadForm> seen;
    for (const auto& [j, f] : T.entries) {
      CHECK(is_reduced(f));
      seen.insert(f);
    }
    CHECK(seen.size() == cg.h());
  }
}

TEST_CASE("empty basis or too-small bound raises NotGenerated") {
  Curve E = curve17();  // h(-59) = 3, smallest split prime is 3
  try {
    build_orbit_table(E, 2);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::NotGenerated);
  }
}

TEST_CASE("solve_isogeny inverts the action") {
  Curve E0 = curve17();
  IsogenyTable T = build_orbit_table(E0, 10);
  CHECK(solve_isogeny(T, E0) == identity_form(-59));

  std::mt19937_64 rng(12);
  WalkParams params;
  params.prime_cap = 13;  // keep ell = p = 17 out of the basis
  for (int i = 0; i < 20; ++i) {
    IdealVector v = sample_walk(-59, params, rng);
    QuadForm prod = identity_form(-59);
    for (const auto& e : v.entries)
      prod = compose(prod, form_pow(prime_form(-59, e.ell, e.sign, 3, 17), e.exp));
    CHECK(solve_isogeny(T, apply_ideal_vector(E0, v)) == prod);
  }
}

TEST_CASE("solve_isogeny rejects outsiders") {
  IsogenyTable T = build_orbit_table(curve17(), 10);
  try {
    solve_isogeny(T, make_curve(11, 1, 1));  // wrong field
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::NotInIsogenyClass);
  }
  // same field, different trace
  for (u64 b = 1; b < 17; ++b) {
    Curve C = make_curve(17, 1, b);
    if (count_points(C) == 15) continue;
    try {
      solve_isogeny(T, C);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == Err::NotInIsogenyClass);
    }
    break;
  }
}

TEST_CASE("invariance and non-degeneracy, exhaustive over D = -59") {
  IsogenyTable T = build_orbit_table(curve17(), 10);
  std::vector<Curve> reps = all_classes(T);
  REQUIRE(reps.size() == 3);

  for (const Curve& A : reps)
    for (const Curve& B : reps) {
      QuadForm prod = compose(solve_isogeny(T, A), solve_isogeny(T, B));
      // e_2(A, B) = e_2(AB * E0, E0)
      Curve AB = T.curve_for_j.at([&] {
        for (const auto& [j, f] : T.entries)
          if (f == prod) return j;
        return (u64)-1;
      }());
      CHECK(invariant_e_n(T, {A, B}) == invariant_e_n(T, {AB, T.base}));
    }

  // fixing one coordinate, the map is injective in the other
  for (const Curve& A : reps) {
    std::set<QuadForm> vals;
    for (const Curve& B : reps) vals.insert(invariant_e_n(T, {A, B}).form);
    CHECK(vals.size() == reps.size());
  }
}

TEST_CASE("e_2(E0, E0) is the identity and encodings round-trip") {
  IsogenyTable T = build_orbit_table(make_curve(11, 1, 1), 10);
  InvariantValue v = invariant_e_n(T, {T.base, T.base});
  CHECK(v.form == identity_form(-40));
  CHECK(v.encoding == form_encode(v.form));
  CHECK(make_invariant(QuadForm{2, 4, 7}).form == reduce(QuadForm{2, 4, 7}));
}

TEST_CASE("oracle agrees with the pure class-group computation") {
  Curve E0 = curve17();
  IsogenyTable T = build_orbit_table(E0, 10);
  std::mt19937_64 rng(47);
  WalkParams params;
  params.prime_cap = 13;  // keep ell = p = 17 out of the basis
  for (int i = 0; i < 15; ++i) {
    std::vector<Curve> tuple;
    QuadForm prod = identity_form(-59);
    for (int k = 0; k < 3; ++k) {
      IdealVector v = sample_walk(-59, params, rng);
      tuple.push_back(apply_ideal_vector(E0, v));
      for (const auto& e : v.entries)
        prod = compose(prod, form_pow(prime_form(-59, e.ell, e.sign, 3, 17), e.exp));
    }
    // recover each class by decompose() and recompose entirely within forms
    QuadForm recovered = identity_form(-59);
    for (const Curve& E : tuple) {
      IdealVector w = decompose(solve_isogeny(T, E), {3, 5, 7}, 3, 17);
      for (const auto& e : w.entries)
        recovered = compose(recovered, form_pow(prime_form(-59, e.ell, e.sign, 3, 17), e.exp));
    }
    CHECK(invariant_e_n(T, tuple).form == prod);
    CHECK(recovered == prod);
  }
}

TEST_CASE("ddh_distinguish accepts honest instances and rejects shifts") {
  Curve E0 = curve17();
  IsogenyTable T = build_orbit_table(E0, 10);
  std::vector<Curve> reps = all_classes(T);
  std::mt19937_64 rng(88);
  WalkParams params;
  params.prime_cap = 13;  // keep ell = p = 17 out of the basis

  for (int i = 0; i < 50; ++i) {
    IdealVector a = sample_walk(-59, params, rng);
    IdealVector b = sample_walk(-59, params, rng);
    Curve xa = apply_ideal_vector(E0, a);
    Curve xb = apply_ideal_vector(E0, b);
    Curve y = apply_ideal_vector(xa, b);  // honest: class(a) * class(b)
    CHECK(ddh_distinguish(T, E0, {xa, xb}, y));

    QuadForm honest = solve_isogeny(T, y);
    for (const Curve& wrong : reps)
      if (!(solve_isogeny(T, wrong) == honest))
        CHECK_FALSE(ddh_distinguish(T, E0, {xa, xb}, wrong));
  }

  // n = 1 degenerate case
  CHECK(ddh_distinguish(T, E0, {reps[1]}, reps[1]));
}

TEST_CASE("isogeny_ddh_decide is the class product test") {
  Curve E0 = curve17();
  IsogenyTable T = build_orbit_table(E0, 10);
  std::vector<Curve> reps = all_classes(T);
  for (const Curve& A : reps)
    for (const Curve& B : reps) {
      QuadForm prod = compose(solve_isogeny(T, A), solve_isogeny(T, B));
      for (const Curve& C : reps) {
        bool expect = solve_isogeny(T, C) == prod;
        CHECK(isogeny_ddh_decide(T, A, B, C) == expect);
        CHECK(isogeny_ddh_decide(T, B, A, C) == expect);  // symmetric
      }
    }
}
