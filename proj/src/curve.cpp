#include "isolab/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "isolab/classgroup.hpp"  // int_cap

namespace isolab {

Curve make_curve(u64 p, u64 a, u64 b) {
  if (p >= (1ull << 32) || !is_prime(p) || p < 5)
    fail(Err::InvalidModulus, "field characteristic must be a prime in [5, 2^32)");
  a %= p;
  b %= p;
  u64 disc = addmod(mulmod(4, mulmod(a, mulmod(a, a, p), p), p),
                    mulmod(27, mulmod(b, b, p), p), p);
  if (disc == 0) fail(Err::DegenerateModulus, "singular curve: 4a^3 + 27b^2 = 0");
  return Curve{p, a, b};
}

bool on_curve(const Curve& E, const Point& P) {
  if (P.inf) return true;
  u64 p = E.p;
  u64 rhs = addmod(mulmod(P.x, addmod(mulmod(P.x, P.x, p), E.a, p), p), E.b, p);
  return mulmod(P.y, P.y, p) == rhs;
}

Point point_neg(const Curve& E, const Point& P) {
  if (P.inf) return P;
  return Point::at(P.x, negmod(P.y, E.p));
}

Point point_add(const Curve& E, const Point& P, const Point& Q) {
  u64 p = E.p;
  if (P.inf) return Q;
  if (Q.inf) return P;
  if (P.x == Q.x) {
    if (addmod(P.y, Q.y, p) == 0) return Point::infinity();
    // doubling
    u64 num = addmod(mulmod(3, mulmod(P.x, P.x, p), p), E.a, p);
    u64 lam = mulmod(num, invmod(addmod(P.y, P.y, p), p), p);
    u64 x3 = submod(mulmod(lam, lam, p), addmod(P.x, Q.x, p), p);
    u64 y3 = submod(mulmod(lam, submod(P.x, x3, p), p), P.y, p);
    return Point::at(x3, y3);
  }
  u64 lam = mulmod(submod(Q.y, P.y, p), invmod(submod(Q.x, P.x, p), p), p);
  u64 x3 = submod(mulmod(lam, lam, p), addmod(P.x, Q.x, p), p);
  u64 y3 = submod(mulmod(lam, submod(P.x, x3, p), p), P.y, p);
  return Point::at(x3, y3);
}

Point point_mul(const Curve& E, u64 k, const Point& P) {
  Point Q = P;
  Point acc = Point::infinity();
  u64 e = k;
  while (e) {
    if (e & 1) acc = point_add(E, acc, Q);
    Q = point_add(E, Q, Q);
    e >>= 1;
  }
  return acc;
}

Point random_point(const Curve& E, std::mt19937_64& rng) {
  u64 p = E.p;
  for (;;) {
    u64 x = rand_below(rng, p);
    u64 rhs = addmod(mulmod(x, addmod(mulmod(x, x, p), E.a, p), p), E.b, p);
    auto r = sqrt_mod_prime(rhs, p);
    if (!r) continue;
    u64 y = rand_below(rng, 2) ? r->first : r->second;
    if (rhs == 0) y = 0;
    return Point::at(x, y);
  }
}

u64 j_invariant(const Curve& E) {
  u64 p = E.p;
  u64 a3 = mulmod(4, mulmod(E.a, mulmod(E.a, E.a, p), p), p);
  u64 den = addmod(a3, mulmod(27, mulmod(E.b, E.b, p), p), p);
  return mulmod(mulmod(1728 % p, a3, p), invmod(den, p), p);
}

namespace {

u64 count_naive(const Curve& E) {
  u64 p = E.p;
  std::vector<bool> sq(p, false);
  for (u64 x = 0; x < p; ++x) sq[mulmod(x, x, p)] = true;
  u64 n = 1;  // infinity
  for (u64 x = 0; x < p; ++x) {
    u64 rhs = addmod(mulmod(x, addmod(mulmod(x, x, p), E.a, p), p), E.b, p);
    if (rhs == 0) n += 1;
    else if (sq[rhs]) n += 2;
  }
  return n;
}

// All m in [lo, hi] with [m]P = infinity, via baby-step giant-step.
std::vector<u64> kill_multiples(const Curve& E, const Point& P, u64 lo, u64 hi) {
  u64 width = hi - lo + 1;
  u64 s = (u64)std::ceil(std::sqrt((double)width));
  auto key = [&](const Point& Q) -> u64 {
    return Q.inf ? ~0ull : Q.x * E.p + Q.y;  // injective: x, y < p < 2^32
  };
  std::unordered_map<u64, std::vector<u64>> baby;
  Point base = point_mul(E, lo, P);
  Point cur = base;
  for (u64 j = 0; j < s; ++j) {
    baby[key(cur)].push_back(j);
    cur = point_add(E, cur, P);
  }
  Point stride = point_neg(E, point_mul(E, s, P));
  Point giant = Point::infinity();
  std::vector<u64> out;
  for (u64 k = 0; k * s < width + s; ++k) {
    auto it = baby.find(key(giant));
    if (it != baby.end())
      for (u64 j : it->second) {
        u64 m = lo + j + k * s;
        if (m >= lo && m <= hi) out.push_back(m);
      }
    giant = point_add(E, giant, stride);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Exact order of P given [g]P = infinity: strip primes while the quotient
// still annihilates P.
u64 point_order_from(const Curve& E, const Point& P, u64 g) {
  std::vector<u64> primes;
  u64 n = g;
  for (u64 q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      primes.push_back(q);
      while (n % q == 0) n /= q;
    }
  if (n > 1) primes.push_back(n);
  for (u64 q : primes)
    while (g % q == 0 && point_mul(E, g / q, P).inf) g /= q;
  return g;
}

// Multiples of L in [lo, hi].
std::vector<u64> multiples_in(u64 L, u64 lo, u64 hi) {
  std::vector<u64> out;
  for (u64 m = (lo + L - 1) / L * L; m <= hi; m += L) out.push_back(m);
  return out;
}

// Candidate orders of E by accumulating point orders; empty if ambiguous.
std::vector<u64> bsgs_candidates(const Curve& E, std::mt19937_64& rng, int budget) {
  u64 p = E.p;
  u64 w = (u64)(2.0 * std::sqrt((double)p)) + 2;
  u64 lo = p + 1 - w, hi = p + 1 + w;
  u64 L = 1;
  for (int i = 0; i < budget; ++i) {
    Point P = random_point(E, rng);
    auto ms = kill_multiples(E, P, lo, hi);
    if (ms.empty()) fail(Err::InternalError, "no annihilator in the Hasse interval");
    u64 g = 0;
    for (u64 m : ms) g = std::gcd(g, m);
    L = std::lcm(L, point_order_from(E, P, g));
    auto cand = multiples_in(L, lo, hi);
    if (cand.size() == 1) return cand;
  }
  return multiples_in(L, lo, hi);
}

}  // namespace

u64 count_points(const Curve& E) {
  return E.p < (1ull << 20) ? count_naive(E) : count_points_bsgs(E);
}

u64 count_points_bsgs(const Curve& E) {
  u64 p = E.p;
  std::mt19937_64 rng(0x5EED5EEDull ^ p ^ (E.a << 20) ^ (E.b << 40));
  auto cand = bsgs_candidates(E, rng, 24);
  if (cand.size() == 1) return cand[0];

  // Group exponent too small to pin the order; intersect with the twist via
  // N + N_twist = 2p + 2.
  u64 d = 2;
  while (legendre((i64)d, p) != -1) ++d;
  u64 d2 = mulmod(d, d, p);
  Curve T = make_curve(p, mulmod(E.a, d2, p), mulmod(E.b, mulmod(d2, d, p), p));
  auto tcand = bsgs_candidates(T, rng, 24);
  std::vector<u64> joint;
  for (u64 n : cand)
    for (u64 m : tcand)
      if (n + m == 2 * p + 2) joint.push_back(n);
  std::sort(joint.begin(), joint.end());
  joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
  if (joint.size() != 1)
    fail(Err::CountAmbiguous, "order not determined after twist intersection");
  return joint[0];
}

FrobeniusData frobenius_data(const Curve& E) {
  u64 N = count_points(E);
  i64 t = (i64)(E.p + 1) - (i64)N;
  if (t % (i64)E.p == 0) fail(Err::SupersingularCurve, "trace is divisible by p");

  FrobeniusData fd;
  fd.t = t;
  fd.N = N;
  fd.D_pi = t * t - 4 * (i64)E.p;

  u64 n = (u64)(-fd.D_pi);
  if (n > int_cap(1ull << 48)) fail(Err::FactorCapExceeded, "discriminant above factor cap");
  u64 rest = n;
  for (u64 q = 2; q * q <= rest; ++q) {
    if (rest % q) continue;
    int e = 0;
    while (rest % q == 0) { rest /= q; ++e; }
    fd.factorization.push_back({q, e});
  }
  if (rest > 1) fd.factorization.push_back({rest, 1});

  u64 square = 1, sfree = 1;
  for (auto [q, e] : fd.factorization) {
    for (int i = 0; i + 1 < e; i += 2) square *= q;
    if (e % 2) sfree *= q;
  }
  i64 s = -(i64)sfree;  // squarefree part, with sign
  if (((s % 4) + 4) % 4 == 1) {
    fd.D_fund = s;
    fd.conductor_m = square;
  } else {
    fd.D_fund = 4 * s;
    if (square % 2) fail(Err::InternalError, "discriminant not 0 or 1 mod 4");
    fd.conductor_m = square / 2;
  }
  return fd;
}

std::optional<u64> find_isomorphism(const Curve& E1, const Curve& E2) {
  if (E1.p != E2.p) return std::nullopt;
  u64 p = E1.p;
  auto valid = [&](u64 u) {
    return u != 0 && mulmod(powmod(u, 4, p), E1.a, p) == E2.a &&
           mulmod(powmod(u, 6, p), E1.b, p) == E2.b;
  };
  std::vector<u64> roots;
  if (E1.a == 0 && E1.b != 0) {
    if (E2.a != 0 || E2.b == 0) return std::nullopt;
    roots = poly_roots(poly_sub(poly_shift(poly_const(p, 1), 6),
                                poly_const(p, mulmod(E2.b, invmod(E1.b, p), p))));
  } else if (E1.b == 0 && E1.a != 0) {
    if (E2.b != 0 || E2.a == 0) return std::nullopt;
    roots = poly_roots(poly_sub(poly_shift(poly_const(p, 1), 4),
                                poly_const(p, mulmod(E2.a, invmod(E1.a, p), p))));
  } else {
    if (E2.a == 0 || E2.b == 0) return std::nullopt;
    u64 u2 = mulmod(mulmod(E2.b, E1.a, p), invmod(mulmod(E1.b, E2.a, p), p), p);
    auto r = sqrt_mod_prime(u2, p);
    if (!r) return std::nullopt;
    roots = {r->first, r->second};
  }
  std::sort(roots.begin(), roots.end());
  for (u64 u : roots)
    if (valid(u)) return u;
  return std::nullopt;
}

std::pair<Curve, FrobeniusData> mapgen(int bits, DiscriminantPolicy policy,
                                       std::mt19937_64& rng) {
  if (bits < 8 || bits > 24) fail(Err::InvalidModulus, "bits must lie in [8, 24]");
  u64 lo = 1ull << (bits - 1), span = 1ull << (bits - 1);
  const int budget = 2000000;
  for (int iter = 0; iter < budget; ++iter) {
    u64 p = lo + rand_below(rng, span);
    if (!is_prime(p) || p < 5) continue;
    u64 a = rand_below(rng, p), b = rand_below(rng, p);
    u64 disc = addmod(mulmod(4, mulmod(a, mulmod(a, a, p), p), p),
                      mulmod(27, mulmod(b, b, p), p), p);
    if (disc == 0) continue;
    Curve E{p, a, b};
    FrobeniusData fd;
    try {
      fd = frobenius_data(E);
    } catch (const Error& e) {
      if (e.code() == Err::SupersingularCurve || e.code() == Err::CountAmbiguous) continue;
      throw;
    }
    if (fd.conductor_m != 1) continue;
    u64 absd = (u64)(-fd.D_fund);
    bool ok = false;
    switch (policy) {
      case DiscriminantPolicy::AnyFundamental: ok = true; break;
      case DiscriminantPolicy::PrimeDiscriminant: ok = is_prime(absd); break;
      case DiscriminantPolicy::SmallSquarefreeTimesPrime: {
        u64 rest = absd;
        for (u64 q = 2; q * q <= rest && q <= 32; ++q)
          while (rest % q == 0) rest /= q;
        ok = is_prime(rest) && absd / rest <= 32;
        break;
      }
    }
    if (ok) return {E, fd};
  }
  fail(Err::SearchExhausted, "mapgen iteration budget exhausted");
}

}  // namespace isolab
