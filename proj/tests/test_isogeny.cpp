#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "isolab/classgroup.hpp"
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
  FAIL("no trace-3 curve over F_17");
  return Curve{};
}

// A point of exact order ell: project into the ell-Sylow part, then walk
// down (multiplying by N/ell alone fails when the full ell-torsion is
// rational).
Point order_point(const Curve& E, u64 ell, std::mt19937_64& rng) {
  u64 N = count_points(E);
  REQUIRE(N % ell == 0);
  u64 cof = N;
  while (cof % ell == 0) cof /= ell;
  for (;;) {
    Point Q = point_mul(E, cof, random_point(E, rng));
    if (Q.inf) continue;
    Point R = point_mul(E, ell, Q);
    while (!R.inf) {
      Q = R;
      R = point_mul(E, ell, Q);
    }
    return Q;
  }
}

// --- arithmetic in K = F_p[T]/(g) for the eigenvalue soundness oracle ---

FpPoly poly_extinv(const FpPoly& a, const FpPoly& g) {
  // extended Euclid: find u with u*a = 1 mod g
  FpPoly r0 = g, r1 = poly_mod(a, g);
  FpPoly s0 = poly_zero(g.p), s1 = poly_const(g.p, 1);
  while (!r1.is_zero()) {
    auto [q, r2] = poly_divmod(r0, r1);
    FpPoly s2 = poly_sub(s0, poly_mul(q, s1));
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
  }
  REQUIRE(r0.degree() == 0);  // g irreducible and a nonzero mod g
  return poly_mod(poly_scale(s0, invmod(r0.lead(), g.p)), g);
}

struct ExtField {
  FpPoly g;
  u64 p;
  FpPoly red(const FpPoly& x) const { return poly_mod(x, g); }
  FpPoly mul(const FpPoly& x, const FpPoly& y) const { return poly_mulmod(x, y, g); }
  FpPoly inv(const FpPoly& x) const { return poly_extinv(x, g); }
  FpPoly cst(u64 v) const { return poly_const(p, v % p); }
};

// Points in E(K(y)) of the shape (x, lam * y) where y^2 = f(theta) is the
// base point's ordinate; closed under the group law.
struct ExtPt {
  bool inf = true;
  FpPoly x, lam;
};

struct ExtCurve {
  ExtField K;
  u64 a;       // curve coefficient
  FpPoly fval;  // f(theta) in K

  ExtPt add(const ExtPt& P, const ExtPt& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    FpPoly sigma;
    if (poly_sub(P.x, Q.x).is_zero()) {
      if (poly_add(P.lam, Q.lam).is_zero()) return ExtPt{};
      // doubling: slope = (3x^2 + a) / (2 lam f(theta)) * y
      FpPoly num = poly_add(K.mul(K.cst(3), K.mul(P.x, P.x)), K.cst(a));
      sigma = K.mul(num, K.inv(K.mul(K.cst(2), K.mul(P.lam, fval))));
    } else {
      sigma = K.mul(poly_sub(Q.lam, P.lam), K.inv(poly_sub(Q.x, P.x)));
    }
    FpPoly x3 = poly_sub(K.mul(K.mul(sigma, sigma), fval), poly_add(P.x, Q.x));
    FpPoly l3 = poly_sub(K.mul(sigma, poly_sub(P.x, x3)), P.lam);
    return ExtPt{false, x3, l3};
  }
  ExtPt mul_scalar(u64 k, ExtPt P) const {
    ExtPt acc;
    while (k) {
      if (k & 1) acc = add(acc, P);
      P = add(P, P);
      k >>= 1;
    }
    return acc;
  }
};

// pi(P) = [mu]P for P with x a root of the kernel polynomial, verified over
// the field where one irreducible factor of h splits off a point.
void check_eigenvalue(const Curve& E, const KernelPoly& k) {
  std::mt19937_64 rng(2);
  auto factors = poly_factor(k.h, rng);
  for (auto& [g, m] : factors) {
    ExtField K{g, E.p};
    FpPoly theta = K.red(poly_x(E.p));
    FpPoly f = poly_from(E.p, {(i64)E.b, (i64)E.a, 0, 1});
    ExtCurve C{K, E.a, K.red(f)};
    ExtPt P{false, theta, K.cst(1)};
    // pi(P) = (theta^p, f(theta)^((p-1)/2) * y)
    ExtPt piP{false, poly_powmod(theta, E.p, g), poly_powmod(C.fval, (E.p - 1) / 2, g)};
    ExtPt muP = C.mul_scalar(k.mu, P);
    REQUIRE(!muP.inf);
    CHECK(poly_sub(piP.x, muP.x).is_zero());
    CHECK(poly_sub(piP.lam, muP.lam).is_zero());
  }
}

}  // namespace

TEST_CASE("division_poly fixtures") {
  Curve E = make_curve(11, 1, 1);
  FpPoly w3 = division_poly(E, 3);
  CHECK(w3 == poly_from(11, {10, 1, 6, 0, 3}));  // 3x^4 + 6x^2 + x + 10
  CHECK(division_poly(E, 5).degree() == 12);
  CHECK(division_poly(E, 7).degree() == 24);
  CHECK_THROWS_AS(division_poly(make_curve(11, 1, 1), 11), Error);

  // generic psi_3 shape: 3x^4 + 6a x^2 + 12b x - a^2
  Curve E2 = make_curve(13, 5, 7);
  FpPoly expect(13);
  expect.c = {negmod(mulmod(5, 5, 13), 13), mulmod(12, 7, 13), mulmod(6, 5, 13), 0, 3};
  CHECK(division_poly(E2, 3) == expect);
}

TEST_CASE("division_poly roots are torsion x-coordinates") {
  std::mt19937_64 rng(14);
  int checked = 0;
  while (checked < 25) {
    u64 p = 5 + rand_below(rng, 500);
    if (!is_prime(p)) continue;
    Curve E;
    try {
      E = make_curve(p, rand_below(rng, p), rand_below(rng, p));
    } catch (const Error&) {
      continue;
    }
    u64 N = count_points(E);
    for (u64 ell : {3ull, 5ull, 7ull}) {
      if (ell == p || N % ell != 0) continue;
      FpPoly psi = division_poly(E, ell);
      Point P = order_point(E, ell, rng);
      CHECK(poly_eval(psi, P.x) == 0);
      // conversely rational roots with square ordinate give ell-torsion
      for (u64 x : poly_roots(psi)) {
        u64 rhs = addmod(mulmod(x, addmod(mulmod(x, x, p), E.a, p), p), E.b, p);
        auto r = sqrt_mod_prime(rhs, p);
        if (!r) continue;
        Point Q = Point::at(x, r->first);
        REQUIRE(on_curve(E, Q));
        CHECK(point_mul(E, ell, Q).inf);
      }
      ++checked;
    }
  }
}

TEST_CASE("eigen_kernel fixtures") {
  Curve E = make_curve(11, 1, 1);
  KernelPoly k7 = eigen_kernel(E, 7, 4);
  CHECK(k7.h.degree() == 3);
  CHECK(k7.h.lead() == 1);
  CHECK(poly_mod(division_poly(E, 7), k7.h).is_zero());

  CHECK_THROWS_AS(eigen_kernel(E, 3, 1), Error);  // inert
  KernelPoly k5 = eigen_kernel(E, 5, 4);
  CHECK(k5.h.degree() == 2);
  CHECK_THROWS_AS(eigen_kernel(E, 7, 2), Error);  // 2 is not an eigenvalue
  CHECK_THROWS_AS(eigen_kernel(E, 11, 1), Error);
}

TEST_CASE("eigenvalue soundness over the splitting field") {
  Curve E11 = make_curve(11, 1, 1);
  check_eigenvalue(E11, eigen_kernel(E11, 7, 4));
  check_eigenvalue(E11, eigen_kernel(E11, 7, 1));
  check_eigenvalue(E11, eigen_kernel(E11, 5, 4));

  Curve E17 = curve17();
  for (u64 ell : {3ull, 5ull, 7ull}) {
    SplitType s = frobenius_roots_mod_ell(3, 17, ell);
    if (s.kind == SplitType::Inert) continue;
    check_eigenvalue(E17, eigen_kernel(E17, ell, s.mu));
    if (s.kind == SplitType::Split) check_eigenvalue(E17, eigen_kernel(E17, ell, s.mu_bar));
  }
}

TEST_CASE("velu_step preserves point counts and maps the kernel to infinity") {
  Curve E = make_curve(11, 1, 1);
  for (u64 ell : {5ull, 7ull}) {
    SplitType s = frobenius_roots_mod_ell(-2, 11, ell);
    IsogenyStep step = velu_step(E, eigen_kernel(E, ell, s.mu));
    CHECK(count_points(step.codomain) == count_points(E));
    // rational kernel points (if any) go to infinity
    for (u64 x : poly_roots(step.kernel.h)) {
      auto r = sqrt_mod_prime(addmod(mulmod(x, addmod(mulmod(x, x, 11), E.a, 11), 11), E.b, 11), 11);
      if (r) CHECK(apply_step(step, Point::at(x, r->first)).inf);
    }
  }
  // invalid kernels are rejected
  KernelPoly bogus{poly_from(11, {1, 2, 0, 1}), 7, 4};
  CHECK_THROWS_AS(velu_step(E, bogus), Error);
}

TEST_CASE("velu_step is a group homomorphism on points") {
  std::mt19937_64 rng(77);
  Curve E17 = curve17();
  for (u64 ell : {3ull, 5ull}) {
    SplitType s = frobenius_roots_mod_ell(3, 17, ell);
    IsogenyStep step = velu_step(E17, eigen_kernel(E17, ell, s.mu));
    for (int i = 0; i < 100; ++i) {
      Point P = random_point(E17, rng), Q = random_point(E17, rng);
      Point lhs = apply_step(step, point_add(E17, P, Q));
      Point rhs = point_add(step.codomain, apply_step(step, P), apply_step(step, Q));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("velu_step matches pointwise Velu on a rational kernel") {
  std::mt19937_64 rng(5);
  Curve E = curve17();
  u64 p = 17;
  for (u64 ell : {3ull, 5ull}) {
    // eigenvalue 1 has rational kernel points (15 = 3 * 5 rational torsion)
    KernelPoly k = eigen_kernel(E, ell, 1);
    IsogenyStep step = velu_step(E, k);

    Point G = order_point(E, ell, rng);
    while (poly_eval(k.h, G.x) != 0) G = order_point(E, ell, rng);
    std::vector<Point> kernel;
    for (Point Q = G; !Q.inf; Q = point_add(E, Q, G)) kernel.push_back(Q);
    REQUIRE(kernel.size() == ell - 1);

    u64 st = 0, sw = 0;
    for (auto& Q : kernel) {
      u64 tq = addmod(mulmod(3, mulmod(Q.x, Q.x, p), p), E.a, p);
      u64 uq = mulmod(2, mulmod(Q.y, Q.y, p), p);
      st = addmod(st, tq, p);
      sw = addmod(sw, addmod(uq, mulmod(Q.x, tq, p), p), p);
    }
    CHECK(step.codomain.a == submod(E.a, mulmod(5, st, p), p));
    CHECK(step.codomain.b == submod(E.b, mulmod(7, sw, p), p));

    for (int i = 0; i < 40; ++i) {
      Point P = random_point(E, rng);
      if (poly_eval(k.h, P.x) == 0) continue;
      u64 X = P.x;
      for (auto& Q : kernel) {
        u64 tq = addmod(mulmod(3, mulmod(Q.x, Q.x, p), p), E.a, p);
        u64 uq = mulmod(2, mulmod(Q.y, Q.y, p), p);
        u64 inv1 = invmod(submod(P.x, Q.x, p), p);
        u64 inv2 = mulmod(inv1, inv1, p);
        X = addmod(X, addmod(mulmod(tq, inv1, p), mulmod(uq, inv2, p), p), p);
      }
      Point img = apply_step(step, P);
      CHECK(img.x == X);
      CHECK(on_curve(step.codomain, img));
    }
  }
}

TEST_CASE("conjugate steps compose to multiplication by ell up to isomorphism") {
  std::mt19937_64 rng(6);
  for (Curve E : {make_curve(11, 1, 1), curve17()}) {
    i64 t = (i64)(E.p + 1) - (i64)count_points(E);
    for (u64 ell : {3ull, 5ull, 7ull}) {
      SplitType s = frobenius_roots_mod_ell(t, (i64)E.p, ell);
      if (s.kind != SplitType::Split) continue;
      IsogenyStep phi = velu_step(E, eigen_kernel(E, ell, s.mu));
      IsogenyStep psi = velu_step(phi.codomain, eigen_kernel(phi.codomain, ell, s.mu_bar));
      auto u = find_isomorphism(psi.codomain, E);
      REQUIRE(u.has_value());
      u64 u2 = mulmod(*u, *u, E.p), u3 = mulmod(u2, *u, E.p);
      for (int i = 0; i < 20; ++i) {
        Point P = random_point(E, rng);
        Point lhs = apply_step(psi, apply_step(phi, P));
        if (!lhs.inf) lhs = Point::at(mulmod(u2, lhs.x, E.p), mulmod(u3, lhs.y, E.p));
        CHECK(lhs == point_mul(E, ell, P));
      }
    }
  }
}

TEST_CASE("apply_prime fixtures") {
  Curve E = make_curve(11, 1, 1);
  Curve E2 = apply_prime(E, 7, +1);
  CHECK(j_invariant(E2) != 9);
  CHECK(count_points(E2) == 14);
  CHECK(j_invariant(apply_prime(E2, 7, +1)) == 9);  // class (2,0,5) has order 2
  CHECK_THROWS_AS(apply_prime(E, 3, +1), Error);
}

TEST_CASE("apply_ideal_vector identities") {
  Curve E = curve17();
  CHECK(apply_ideal_vector(E, IdealVector{}) == E);

  std::mt19937_64 rng(31);
  WalkParams params;
  params.prime_cap = 13;  // keep ell = p = 17 out of the basis
  for (int i = 0; i < 10; ++i) {
    IdealVector v = sample_walk(-59, params, rng);
    IdealVector inv = v;
    for (auto& e : inv.entries) e.sign = -e.sign;
    Curve there = apply_ideal_vector(E, v);
    CHECK(j_invariant(apply_ideal_vector(there, inv)) == j_invariant(E));
    // permutation invariance
    IdealVector perm = v;
    std::reverse(perm.entries.begin(), perm.entries.end());
    CHECK(j_invariant(apply_ideal_vector(E, perm)) == j_invariant(there));
  }
}

TEST_CASE("action is well defined on ideal classes") {
  Curve E = curve17();
  std::mt19937_64 rng(91);
  WalkParams params;
  params.prime_cap = 13;  // keep ell = p = 17 out of the basis
  for (int i = 0; i < 100; ++i) {
    IdealVector v = sample_walk(-59, params, rng);
    IdealVector w = sample_walk(-59, params, rng);
    Curve step2 = apply_ideal_vector(apply_ideal_vector(E, v), w);
    IdealVector concat = v;
    concat.entries.insert(concat.entries.end(), w.entries.begin(), w.entries.end());
    Curve joined = apply_ideal_vector(E, concat);
    CHECK(j_invariant(step2) == j_invariant(joined));

    // the product class, recomputed independently in the class group
    QuadForm prod = identity_form(-59);
    for (auto& e : concat.entries)
      prod = compose(prod, form_pow(prime_form(-59, e.ell, e.sign, 3, 17), e.exp));
    IdealVector word = decompose(prod, {3, 5, 7}, 3, 17);
    CHECK(j_invariant(apply_ideal_vector(E, word)) == j_invariant(step2));
  }
}

TEST_CASE("orbit closure equals the class number") {
  Curve E = curve17();
  std::set<u64> js{j_invariant(E)};
  std::vector<Curve> frontier{E};
  while (!frontier.empty()) {
    Curve cur = frontier.back();
    frontier.pop_back();
    for (u64 ell : {3ull, 5ull, 7ull, 11ull, 13ull, 19ull}) {
      SplitType s = frobenius_roots_mod_ell(3, 17, ell);
      if (s.kind != SplitType::Split) continue;
      for (int sign : {+1, -1}) {
        Curve nxt = apply_prime(cur, ell, sign);
        if (js.insert(j_invariant(nxt)).second) frontier.push_back(nxt);
      }
    }
  }
  CHECK(js.size() == 3);
}

TEST_CASE("sample_walk basis and determinism") {
  WalkParams params;
  auto basis = walk_prime_basis(-40, params);
  CHECK(std::count(basis.begin(), basis.end(), 7) == 1);
  CHECK(std::count(basis.begin(), basis.end(), 3) == 0);

  std::mt19937_64 r1(5), r2(5);
  IdealVector v1 = sample_walk(-40, params, r1);
  IdealVector v2 = sample_walk(-40, params, r2);
  REQUIRE(v1.entries.size() == v2.entries.size());
  for (size_t i = 0; i < v1.entries.size(); ++i) {
    CHECK(v1.entries[i].ell == v2.entries[i].ell);
    CHECK(v1.entries[i].sign == v2.entries[i].sign);
    CHECK(v1.entries[i].exp == v2.entries[i].exp);
  }

  // walk length monotone in delta
  auto len = [&](double delta) {
    WalkParams q;
    q.delta = delta;
    std::mt19937_64 r(1);
    return sample_walk(-59, q, r).length();
  };
  CHECK(len(2.0) <= len(5.0));
  CHECK(len(5.0) <= len(9.0));
}
