#include "isolab/algebra.hpp"

#include <algorithm>
#include <array>
#include <cassert>

namespace isolab {

u64 powmod(u64 base, u64 exp, u64 p) {
  u64 r = 1 % p;
  base %= p;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, p);
    base = mulmod(base, base, p);
    exp >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) {
  // extended Euclid; p need not be prime but gcd(a, p) must be 1
  i64 t = 0, newt = 1;
  i64 r = static_cast<i64>(p), newr = static_cast<i64>(a % p);
  while (newr != 0) {
    i64 q = r / newr;
    std::swap(t -= q * newt, newt);
    std::swap(r -= q * newr, newr);
  }
  if (r != 1) fail(Err::InvalidModulus, "not invertible");
  return to_mod(t, p);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a % n, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i < s - 1; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

static void require_odd_prime(u64 p) {
  if (p < 3 || (p & 1) == 0 || !is_prime(p)) fail(Err::InvalidModulus, "modulus must be an odd prime");
}

int legendre(i64 a, u64 p) {
  require_odd_prime(p);
  u64 r = to_mod(a, p);
  if (r == 0) return 0;
  u64 e = powmod(r, (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

std::optional<std::pair<u64, u64>> sqrt_mod_prime(u64 a, u64 p) {
  require_odd_prime(p);
  a %= p;
  if (a == 0) return std::make_pair(0ull, 0ull);
  if (powmod(a, (p - 1) / 2, p) != 1) return std::nullopt;
  u64 r;
  if (p % 4 == 3) {
    r = powmod(a, (p + 1) / 4, p);
  } else {
    // Tonelli-Shanks
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) { q >>= 1; ++s; }
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 m = static_cast<u64>(s);
    u64 cc = powmod(z, q, p);
    u64 t = powmod(a, q, p);
    r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
      u64 i = 0, tt = t;
      while (tt != 1) { tt = mulmod(tt, tt, p); ++i; }
      u64 b = cc;
      for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
      m = i;
      cc = mulmod(b, b, p);
      t = mulmod(t, cc, p);
      r = mulmod(r, b, p);
    }
  }
  u64 other = p - r;
  if (r > other) std::swap(r, other);
  return std::make_pair(r, other);
}

SplitType frobenius_roots_mod_ell(i64 t, i64 q, u64 ell) {
  if (ell < 3 || !is_prime(ell)) fail(Err::InvalidModulus, "ell must be an odd prime");
  if (to_mod(q, ell) == 0) fail(Err::EllEqualsP, "ell divides q");
  u64 tm = to_mod(t, ell), qm = to_mod(q, ell);
  std::vector<u64> roots;
  for (u64 x = 0; x < ell; ++x) {
    // x^2 - t x + q
    u64 v = addmod(submod(mulmod(x, x, ell), mulmod(tm, x, ell), ell), qm, ell);
    if (v == 0) roots.push_back(x);
  }
  if (roots.size() == 2) return SplitType{SplitType::Split, roots[0], roots[1]};
  if (roots.size() == 1) return SplitType{SplitType::Ramified, roots[0], roots[0]};
  return SplitType{SplitType::Inert};
}

// ---------------------------------------------------------------------------
// FpPoly
// ---------------------------------------------------------------------------

FpPoly::FpPoly(u64 modulus, std::vector<u64> coeffs) : p(modulus), c(std::move(coeffs)) {
  for (auto& v : c) v %= p;
  trim();
}

void FpPoly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

FpPoly poly_zero(u64 p) { return FpPoly(p); }

FpPoly poly_const(u64 p, u64 v) { return FpPoly(p, {v % p}); }

FpPoly poly_x(u64 p) { return FpPoly(p, {0, 1}); }

FpPoly poly_from(u64 p, std::initializer_list<i64> coeffs) {
  FpPoly r(p);
  for (i64 v : coeffs) r.c.push_back(to_mod(v, p));
  r.trim();
  return r;
}

FpPoly poly_add(const FpPoly& a, const FpPoly& b) {
  FpPoly r(a.p);
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = addmod(a.coeff(i), b.coeff(i), a.p);
  r.trim();
  return r;
}

FpPoly poly_sub(const FpPoly& a, const FpPoly& b) {
  FpPoly r(a.p);
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = submod(a.coeff(i), b.coeff(i), a.p);
  r.trim();
  return r;
}

FpPoly poly_mul(const FpPoly& a, const FpPoly& b) {
  if (a.is_zero() || b.is_zero()) return poly_zero(a.p);
  const u64 p = a.p;
  std::vector<u128> acc(a.c.size() + b.c.size() - 1, 0);
  // lazy reduction: accumulate up to ~2^64 words of headroom
  const u128 cap = ~(u128)0 - (u128)(p - 1) * (p - 1);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j) {
      u128 add = (u128)a.c[i] * b.c[j];
      if (acc[i + j] > cap) acc[i + j] %= p;
      acc[i + j] += add;
    }
  }
  FpPoly r(p);
  r.c.resize(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) r.c[i] = static_cast<u64>(acc[i] % p);
  r.trim();
  return r;
}

FpPoly poly_scale(const FpPoly& a, u64 k) {
  FpPoly r(a.p);
  k %= a.p;
  if (k == 0) return r;
  r.c.resize(a.c.size());
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = mulmod(a.c[i], k, a.p);
  r.trim();
  return r;
}

FpPoly poly_shift(const FpPoly& a, int k) {
  if (a.is_zero()) return a;
  FpPoly r(a.p);
  r.c.assign(static_cast<size_t>(k), 0);
  r.c.insert(r.c.end(), a.c.begin(), a.c.end());
  return r;
}

std::pair<FpPoly, FpPoly> poly_divmod(const FpPoly& a, const FpPoly& b) {
  if (b.is_zero()) fail(Err::ZeroPolynomial, "division by zero polynomial");
  const u64 p = a.p;
  if (a.degree() < b.degree()) return {poly_zero(p), a};
  FpPoly rem = a;
  FpPoly quot(p);
  quot.c.assign(static_cast<size_t>(a.degree() - b.degree() + 1), 0);
  const u64 inv_lead = invmod(b.lead(), p);
  for (int d = rem.degree(); d >= b.degree() && !rem.is_zero(); d = rem.degree()) {
    u64 q = mulmod(rem.lead(), inv_lead, p);
    int shift = d - b.degree();
    quot.c[static_cast<size_t>(shift)] = q;
    for (size_t i = 0; i < b.c.size(); ++i) {
      size_t k = i + static_cast<size_t>(shift);
      rem.c[k] = submod(rem.c[k], mulmod(q, b.c[i], p), p);
    }
    rem.trim();
  }
  quot.trim();
  return {quot, rem};
}

FpPoly poly_mod(const FpPoly& a, const FpPoly& b) { return poly_divmod(a, b).second; }

FpPoly poly_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m) {
  return poly_mod(poly_mul(a, b), m);
}

FpPoly poly_gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    FpPoly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return poly_monic(a);
}

FpPoly poly_derivative(const FpPoly& a) {
  FpPoly r(a.p);
  if (a.degree() < 1) return r;
  r.c.resize(a.c.size() - 1);
  for (size_t i = 1; i < a.c.size(); ++i) r.c[i - 1] = mulmod(a.c[i], i % a.p, a.p);
  r.trim();
  return r;
}

FpPoly poly_monic(const FpPoly& a) {
  if (a.is_zero() || a.lead() == 1) return a;
  return poly_scale(a, invmod(a.lead(), a.p));
}

u64 poly_eval(const FpPoly& a, u64 x) {
  u64 r = 0;
  x %= a.p;
  for (size_t i = a.c.size(); i-- > 0;) r = addmod(mulmod(r, x, a.p), a.c[i], a.p);
  return r;
}

FpPoly poly_compose_mod(const FpPoly& a, const FpPoly& g, const FpPoly& m) {
  FpPoly r = poly_zero(a.p);
  for (size_t i = a.c.size(); i-- > 0;) {
    r = poly_mulmod(r, g, m);
    if (a.c[i]) r = poly_add(r, poly_const(a.p, a.c[i]));
  }
  return r;
}

FpPoly poly_powmod(const FpPoly& base, u64 exponent, const FpPoly& modulus_poly) {
  if (modulus_poly.degree() < 1) fail(Err::DegenerateModulus, "constant modulus polynomial");
  FpPoly r = poly_const(base.p, 1);
  FpPoly b = poly_mod(base, modulus_poly);
  while (exponent) {
    if (exponent & 1) r = poly_mulmod(r, b, modulus_poly);
    b = poly_mulmod(b, b, modulus_poly);
    exponent >>= 1;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Factorization: squarefree split, distinct-degree, Cantor-Zassenhaus.
// ---------------------------------------------------------------------------

namespace {

// In F_p[x], f with f' = 0 is g(x^p); the p-th root of each coefficient is
// the coefficient itself.
FpPoly pth_root(const FpPoly& f) {
  FpPoly g(f.p);
  for (size_t i = 0; i < f.c.size(); i += static_cast<size_t>(f.p)) g.c.push_back(f.c[i]);
  g.trim();
  return g;
}

void squarefree_parts(const FpPoly& f, int mult_scale,
                      std::vector<std::pair<FpPoly, int>>& out) {
  FpPoly d = poly_derivative(f);
  if (d.is_zero()) {
    squarefree_parts(pth_root(f), mult_scale * static_cast<int>(f.p), out);
    return;
  }
  FpPoly c = poly_gcd(f, d);
  FpPoly w = poly_divmod(f, c).first;
  int i = 1;
  while (w.degree() > 0) {
    FpPoly y = poly_gcd(w, c);
    FpPoly z = poly_divmod(w, y).first;
    if (z.degree() > 0) out.emplace_back(poly_monic(z), i * mult_scale);
    w = std::move(y);
    c = poly_divmod(c, w).first;
    ++i;
  }
  if (c.degree() > 0) squarefree_parts(pth_root(c), mult_scale * static_cast<int>(f.p), out);
}

// r^((p^d - 1)/2) mod f via the Frobenius norm trick.
FpPoly half_norm_power(const FpPoly& r, int d, const FpPoly& f, const FpPoly& xp) {
  FpPoly s = poly_powmod(r, (r.p - 1) / 2, f);
  FpPoly acc = s;
  FpPoly cur = s;
  for (int i = 1; i < d; ++i) {
    cur = poly_compose_mod(cur, xp, f);  // applies Frobenius once more
    acc = poly_mulmod(acc, cur, f);
  }
  return acc;
}

void equal_degree_split(const FpPoly& f, int d, std::mt19937_64& rng,
                        std::vector<FpPoly>& out) {
  if (f.degree() == d) {
    out.push_back(poly_monic(f));
    return;
  }
  const u64 p = f.p;
  const FpPoly xp = poly_powmod(poly_x(p), p, f);
  for (;;) {
    FpPoly r(p);
    r.c.resize(static_cast<size_t>(f.degree()));
    for (auto& v : r.c) v = rand_below(rng, p);
    r.trim();
    if (r.degree() < 1) continue;
    FpPoly s = half_norm_power(r, d, f, xp);
    FpPoly g = poly_gcd(poly_sub(s, poly_const(p, 1)), f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      FpPoly h = poly_divmod(f, g).first;
      equal_degree_split(g, d, rng, out);
      equal_degree_split(h, d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<FpPoly, int>> poly_factor(const FpPoly& f, std::mt19937_64& rng) {
  if (f.is_zero()) fail(Err::ZeroPolynomial, "cannot factor the zero polynomial");
  std::vector<std::pair<FpPoly, int>> result;
  if (f.degree() == 0) return result;

  std::vector<std::pair<FpPoly, int>> parts;
  squarefree_parts(poly_monic(f), 1, parts);

  for (auto& [part, mult] : parts) {
    // distinct-degree split of the squarefree part
    FpPoly rem = part;
    FpPoly h = poly_mod(poly_x(f.p), rem);
    for (int d = 1; rem.degree() > 0; ++d) {
      if (rem.degree() < 2 * d) {
        result.emplace_back(poly_monic(rem), mult);
        break;
      }
      h = poly_powmod(h, f.p, rem);
      FpPoly g = poly_gcd(poly_sub(h, poly_x(f.p)), rem);
      if (g.degree() > 0) {
        std::vector<FpPoly> irr;
        equal_degree_split(g, d, rng, irr);
        for (auto& q : irr) result.emplace_back(std::move(q), mult);
        rem = poly_divmod(rem, g).first;
        h = poly_mod(h, rem);
      }
    }
  }
  std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
    if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
    if (a.first.c != b.first.c) return a.first.c < b.first.c;
    return a.second < b.second;
  });
  return result;
}

std::vector<u64> poly_roots(const FpPoly& f) {
  if (f.is_zero()) fail(Err::ZeroPolynomial, "roots of the zero polynomial");
  std::vector<u64> roots;
  if (f.degree() < 1) return roots;
  FpPoly xp = poly_powmod(poly_x(f.p), f.p, f);
  FpPoly root_part = poly_gcd(poly_sub(xp, poly_x(f.p)), f);
  if (root_part.degree() < 1) return roots;
  std::mt19937_64 rng(0x15F01ABull);  // fixed seed: output is a sorted set
  std::vector<FpPoly> linear;
  equal_degree_split(root_part, 1, rng, linear);
  for (const auto& l : linear) roots.push_back(negmod(l.c[0], f.p));
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace isolab
