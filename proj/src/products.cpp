#include "isolab/products.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "isolab/errors.hpp"

namespace isolab {

namespace {

FpPoly cubic_of(const Curve& E) {
  return poly_from(E.p, {(i64)E.b, (i64)E.a, 0, 1});
}

i64 egcd(i64 a, i64 b, i64& x, i64& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  i64 x1, y1;
  i64 g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

MorphismStep make_two_step(const Curve& E, u64 x0) {
  if (poly_eval(cubic_of(E), x0) != 0)
    fail(Err::InvalidKernel, "x0 is not a two-torsion abscissa");
  u64 p = E.p;
  u64 t = addmod(mulmod(3, mulmod(x0, x0, p), p), E.a, p);
  u64 w = mulmod(x0, t, p);
  Curve E2 = make_curve(p, submod(E.a, mulmod(5, t, p), p), submod(E.b, mulmod(7, w, p), p));
  MorphismStep s;
  s.kind = MorphismStep::TwoStep;
  s.domain = E;
  s.codomain = E2;
  s.x0 = x0;
  return s;
}

MorphismStep make_odd_step(const Curve& E, u64 ell, u64 mu) {
  MorphismStep s;
  s.kind = MorphismStep::OddStep;
  s.odd = velu_step(E, eigen_kernel(E, ell, mu));
  s.domain = s.odd.domain;
  s.codomain = s.odd.codomain;
  return s;
}

Point step_apply(const MorphismStep& s, const Point& P) {
  if (P.inf) return Point::infinity();
  switch (s.kind) {
    case MorphismStep::OddStep:
      return apply_step(s.odd, P);
    case MorphismStep::TwoStep: {
      u64 p = s.domain.p;
      if (P.x == s.x0) return Point::infinity();
      u64 t = addmod(mulmod(3, mulmod(s.x0, s.x0, p), p), s.domain.a, p);
      u64 inv = invmod(submod(P.x, s.x0, p), p);
      u64 X = addmod(P.x, mulmod(t, inv, p), p);
      u64 Y = mulmod(P.y, submod(1, mulmod(t, mulmod(inv, inv, p), p), p), p);
      return Point::at(X, Y);
    }
    case MorphismStep::IsoStep: {
      u64 p = s.domain.p;
      u64 u2 = mulmod(s.u, s.u, p);
      return Point::at(mulmod(u2, P.x, p), mulmod(mulmod(u2, s.u, p), P.y, p));
    }
  }
  fail(Err::InternalError, "unreachable");
}

Point chain_apply(const std::vector<MorphismStep>& chain, Point P) {
  for (const auto& s : chain) P = step_apply(s, P);
  return P;
}

/// All u with u^4 a1 = a2 and u^6 b1 = b2 (so (x,y) -> (u^2 x, u^3 y) maps
/// C1 onto C2); at most 6 candidates.
std::vector<u64> iso_candidates(const Curve& C1, const Curve& C2) {
  u64 p = C1.p;
  std::vector<u64> out;
  if (C1.a != 0) {
    if (C2.a == 0) return out;
    FpPoly f = poly_from(p, {0, 0, 0, 0, 1});
    f.c[0] = negmod(mulmod(C2.a, invmod(C1.a, p), p), p);
    for (u64 u : poly_roots(f))
      if (mulmod(powmod(u, 6, p), C1.b, p) == C2.b) out.push_back(u);
  } else {
    if (C2.a != 0) return out;
    FpPoly f = poly_from(p, {0, 0, 0, 0, 0, 0, 1});
    f.c[0] = negmod(mulmod(C2.b, invmod(C1.b, p), p), p);
    for (u64 u : poly_roots(f)) out.push_back(u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Affine points for exhaustive checks on small fields.
std::vector<Point> sample_points(const Curve& E, std::mt19937_64& rng, size_t want) {
  std::vector<Point> pts;
  if (E.p < 2048) {
    for (u64 x = 0; x < E.p; ++x) {
      u64 rhs = poly_eval(cubic_of(E), x);
      if (rhs == 0) {
        pts.push_back(Point::at(x, 0));
      } else if (legendre((i64)rhs, E.p) == 1) {
        u64 y = sqrt_mod_prime((i64)rhs, E.p)->first;
        pts.push_back(Point::at(x, y));
        pts.push_back(Point::at(x, E.p - y));
      }
    }
  } else {
    for (size_t i = 0; i < want; ++i) pts.push_back(random_point(E, rng));
  }
  return pts;
}

}  // namespace

u64 SubgroupDescriptor::order() const {
  u64 m = 1;
  for (const auto& e : word.entries)
    for (u64 i = 0; i < e.exp; ++i) m *= e.ell;
  return m;
}

Point morph_apply(const Morphism& m, const Point& P) {
  if (m.mult == 0) return Point::infinity();
  Point Q = chain_apply(m.chain, P);
  u64 k = (u64)(m.mult < 0 ? -m.mult : m.mult);
  Q = point_mul(m.codomain, k, Q);
  return m.mult < 0 ? point_neg(m.codomain, Q) : Q;
}

Morphism quotient_chain(const Curve& E, const SubgroupDescriptor& K) {
  Morphism m;
  m.domain = E;
  Curve cur = E;
  for (const auto& e : K.word.entries) {
    for (u64 i = 0; i < e.exp; ++i) {
      if (e.ell == 2) {
        std::vector<u64> roots = poly_roots(cubic_of(cur));
        if (roots.empty()) fail(Err::InertPrime, "no rational two-torsion");
        std::sort(roots.begin(), roots.end());
        m.chain.push_back(make_two_step(cur, e.sign >= 0 ? roots.front() : roots.back()));
      } else {
        i64 t = (i64)(cur.p + 1) - (i64)count_points(cur);
        u64 mu = oriented_eigenvalue(t, (i64)cur.p, e.ell, e.sign);
        m.chain.push_back(make_odd_step(cur, e.ell, mu));
      }
      cur = m.chain.back().codomain;
      m.degree *= e.ell;
    }
  }
  m.codomain = cur;
  return m;
}

namespace {

/// Dual chains up to the final normalizing isomorphism; branches over
/// two-torsion choices.
void dual_chain_candidates(const std::vector<MorphismStep>& chain, size_t idx, Curve cur,
                           std::vector<MorphismStep> acc,
                           std::vector<std::pair<std::vector<MorphismStep>, Curve>>& out) {
  if (idx == chain.size()) {
    out.push_back({acc, cur});
    return;
  }
  const MorphismStep& s = chain[chain.size() - 1 - idx];
  switch (s.kind) {
    case MorphismStep::IsoStep:
      dual_chain_candidates(chain, idx + 1, cur, acc, out);
      return;
    case MorphismStep::OddStep: {
      u64 ell = s.odd.kernel.ell;
      i64 t = (i64)(cur.p + 1) - (i64)count_points(cur);
      SplitType split = frobenius_roots_mod_ell(t, (i64)cur.p, ell);
      u64 mu_bar = (split.kind == SplitType::Ramified)
                       ? split.mu
                       : (s.odd.kernel.mu == split.mu ? split.mu_bar : split.mu);
      MorphismStep d = make_odd_step(cur, ell, mu_bar);
      acc.push_back(d);
      dual_chain_candidates(chain, idx + 1, d.codomain, acc, out);
      return;
    }
    case MorphismStep::TwoStep: {
      std::vector<u64> roots = poly_roots(poly_from(cur.p, {(i64)cur.b, (i64)cur.a, 0, 1}));
      std::sort(roots.begin(), roots.end());
      for (u64 r : roots) {
        auto branch = acc;
        MorphismStep d = make_two_step(cur, r);
        branch.push_back(d);
        dual_chain_candidates(chain, idx + 1, d.codomain, branch, out);
      }
      return;
    }
  }
}

}  // namespace

Morphism dual_morphism(const Morphism& phi) {
  if (phi.mult != 1 && phi.mult != -1)
    fail(Err::InternalError, "duals are taken of plain chains");

  std::vector<std::pair<std::vector<MorphismStep>, Curve>> candidates;
  dual_chain_candidates(phi.chain, 0, phi.codomain, {}, candidates);

  std::mt19937_64 rng(0xD0A1ull ^ phi.domain.p ^ (phi.domain.a << 20) ^ (phi.domain.b << 40));
  std::vector<Point> pts = sample_points(phi.domain, rng, 16);

  for (auto& [chain, cur] : candidates) {
    for (u64 u : iso_candidates(cur, phi.domain)) {
      auto full = chain;
      MorphismStep iso;
      iso.kind = MorphismStep::IsoStep;
      iso.domain = cur;
      iso.codomain = phi.domain;
      iso.u = u;
      full.push_back(iso);
      bool ok = true;
      for (const Point& P : pts) {
        Point lhs = chain_apply(full, chain_apply(phi.chain, P));
        if (!(lhs == point_mul(phi.domain, phi.degree, P))) {
          ok = false;
          break;
        }
      }
      if (ok) {
        Morphism d;
        d.domain = phi.codomain;
        d.codomain = phi.domain;
        d.mult = phi.mult;
        d.degree = phi.degree;
        d.chain = full;
        return d;
      }
    }
  }
  fail(Err::DualAmbiguous, "no normalization satisfies dual o phi = [deg]");
}

IsogenyStep dual_isogeny(const IsogenyStep& step) {
  Morphism phi;
  phi.domain = step.domain;
  phi.codomain = step.codomain;
  phi.degree = step.kernel.ell;
  MorphismStep s;
  s.kind = MorphismStep::OddStep;
  s.odd = step;
  s.domain = step.domain;
  s.codomain = step.codomain;
  phi.chain.push_back(s);

  Morphism d = dual_morphism(phi);
  // chain is [odd step, normalizing iso]; fold the iso into the map
  const IsogenyStep& core = d.chain[0].odd;
  u64 u = d.chain.size() > 1 ? d.chain[1].u : 1;
  u64 p = step.domain.p;
  IsogenyStep out = core;
  out.codomain = step.domain;
  out.map.num_x = poly_scale(core.map.num_x, mulmod(u, u, p));
  out.map.num_y = poly_scale(core.map.num_y, mulmod(mulmod(u, u, p), u, p));
  return out;
}

IsogenyMatrixPair build_product_isomorphism(const Curve& E, const SubgroupDescriptor& K1,
                                            const SubgroupDescriptor& K2) {
  u64 m1 = K1.order(), m2 = K2.order();
  if (std::gcd(m1, m2) != 1) fail(Err::NotCoprime, "kernel orders share a factor");
  if (m1 % E.p == 0 || m2 % E.p == 0) fail(Err::NotCoprime, "kernel order divisible by p");

  Morphism phi1 = quotient_chain(E, K1);
  Morphism phi2 = quotient_chain(E, K2);
  Morphism psi1 = quotient_chain(phi1.codomain, K2);
  Morphism psi2 = quotient_chain(phi2.codomain, K1);

  // pin psi2's codomain to psi1's so the square commutes on the nose
  std::mt19937_64 rng(0x5142ull ^ E.p ^ (E.a << 16) ^ (E.b << 32));
  std::vector<Point> pts = sample_points(E, rng, 16);
  bool pinned = false;
  for (u64 u : iso_candidates(psi2.codomain, psi1.codomain)) {
    MorphismStep iso;
    iso.kind = MorphismStep::IsoStep;
    iso.domain = psi2.codomain;
    iso.codomain = psi1.codomain;
    iso.u = u;
    auto trial = psi2.chain;
    trial.push_back(iso);
    bool ok = true;
    for (const Point& P : pts) {
      Point lhs = chain_apply(trial, chain_apply(phi2.chain, P));
      Point rhs = chain_apply(psi1.chain, chain_apply(phi1.chain, P));
      if (!(lhs == rhs)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      psi2.chain = trial;
      psi2.codomain = psi1.codomain;
      pinned = true;
      break;
    }
  }
  if (!pinned) fail(Err::DualAmbiguous, "cannot pin the quotient square");

  i64 a, b;
  if (egcd((i64)m1, (i64)m2, a, b) != 1) fail(Err::NotCoprime, "no Bezout pair");
  a = ((a % (i64)m2) + (i64)m2) % (i64)m2;  // canonical pair: a in [0, m2)
  b = (1 - a * (i64)m1) / (i64)m2;

  IsogenyMatrixPair pair;
  pair.E = E;
  pair.EK1 = phi1.codomain;
  pair.EK2 = phi2.codomain;
  pair.EK = psi1.codomain;
  pair.m1 = m1;
  pair.m2 = m2;
  pair.a = a;
  pair.b = b;

  Morphism phi1_hat = dual_morphism(phi1);
  Morphism phi2_hat = dual_morphism(phi2);
  Morphism psi1_hat = dual_morphism(psi1);
  Morphism psi2_hat = dual_morphism(psi2);

  auto with_mult = [](Morphism m, i64 k) {
    m.mult = k;
    return m;
  };
  pair.f[0][0] = phi1;
  pair.f[0][1] = psi1_hat;
  pair.f[1][0] = with_mult(phi2, -b);
  pair.f[1][1] = with_mult(psi2_hat, a);
  pair.g[0][0] = with_mult(phi1_hat, a);
  pair.g[0][1] = with_mult(phi2_hat, -1);
  pair.g[1][0] = with_mult(psi1, b);
  pair.g[1][1] = psi2;
  return pair;
}

namespace {

std::pair<Point, Point> matrix_apply(const Morphism m[2][2], const Point& P, const Point& Q) {
  Point r0 = point_add(m[0][0].codomain, morph_apply(m[0][0], P), morph_apply(m[0][1], Q));
  Point r1 = point_add(m[1][0].codomain, morph_apply(m[1][0], P), morph_apply(m[1][1], Q));
  return {r0, r1};
}

}  // namespace

VerifyResult verify_matrix_identity(const IsogenyMatrixPair& pair, int samples,
                                    std::mt19937_64& rng) {
  if (samples <= 0) return {true, true};
  for (int i = 0; i < samples; ++i) {
    Point P = random_point(pair.E, rng);
    Point Q = random_point(pair.EK, rng);
    auto [R, S] = matrix_apply(pair.f, P, Q);
    auto [P2, Q2] = matrix_apply(pair.g, R, S);
    if (!(P2 == P) || !(Q2 == Q)) return {false, false};

    Point R1 = random_point(pair.EK1, rng);
    Point S1 = random_point(pair.EK2, rng);
    auto [P3, Q3] = matrix_apply(pair.g, R1, S1);
    auto [R2, S2] = matrix_apply(pair.f, P3, Q3);
    if (!(R2 == R1) || !(S2 == S1)) return {false, false};
  }
  return {true, false};
}

std::vector<IdealVector> coprime_representatives(const std::vector<QuadForm>& classes,
                                                 i64 t, i64 q) {
  if (classes.empty()) return {};
  i64 D = classes.front().disc();
  for (const auto& c : classes)
    if (c.disc() != D) fail(Err::Mismatch, "classes must share a discriminant");

  const u64 pool_cap = 1000;
  std::set<u64> used;
  std::vector<IdealVector> out;
  for (size_t i = 0; i < classes.size(); ++i) {
    QuadForm target = reduce(classes[i]);
    if (target == identity_form(D)) {
      out.push_back(IdealVector{});
      continue;
    }
    // ramified primes only serve the first word; later words use split primes
    auto eligible = [&](u64 ell) {
      if (ell == (u64)q || used.count(ell)) return false;
      bool ramified = (-D) % (i64)ell == 0;
      if (ramified && i > 0) return false;
      if (!ramified && ell == 2) return (D % 8 + 8) % 8 == 1;  // 2 split
      if (!ramified && ell > 2 && legendre(D, ell) != 1) return false;
      return true;
    };
    std::vector<u64> basis;
    IdealVector word;
    bool found = false;
    for (u64 ell = 2; ell <= pool_cap && !found; ++ell) {
      if (!is_prime(ell) || !eligible(ell)) continue;
      basis.push_back(ell);
      try {
        word = decompose(target, basis, t, q);
        found = true;
      } catch (const Error& e) {
        if (e.code() != Err::NotGenerated) throw;
      }
    }
    if (!found) fail(Err::PoolExhausted, "prime pool exhausted");
    for (const auto& e : word.entries) used.insert(e.ell);
    out.push_back(word);
  }
  return out;
}

bool check_class_condition(const std::vector<QuadForm>& classes1,
                           const std::vector<QuadForm>& classes2) {
  if (classes1.size() != classes2.size() || classes1.empty())
    fail(Err::Mismatch, "lists must be nonempty and of equal length");
  i64 D = classes1.front().disc();
  QuadForm p1 = identity_form(D), p2 = identity_form(D);
  for (const auto& c : classes1) {
    if (c.disc() != D) fail(Err::Mismatch, "discriminant mismatch");
    p1 = compose(p1, c);
  }
  for (const auto& c : classes2) {
    if (c.disc() != D) fail(Err::Mismatch, "discriminant mismatch");
    p2 = compose(p2, c);
  }
  return reduce(p1) == reduce(p2);
}

}  // namespace isolab
