#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "isolab/errors.hpp"

namespace isolab {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// ---------------------------------------------------------------------------
// Modular arithmetic on 64-bit words.  Field moduli are capped at 2^32 so
// every product fits in a 128-bit intermediate.
// ---------------------------------------------------------------------------

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((u128)a * b % p); }
inline u64 addmod(u64 a, u64 b, u64 p) { u64 s = a + b; return s >= p ? s - p : s; }
inline u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }
inline u64 negmod(u64 a, u64 p) { return a == 0 ? 0 : p - a; }

u64 powmod(u64 base, u64 exp, u64 p);
u64 invmod(u64 a, u64 p);

/// Reduce a signed integer into [0, p).
inline u64 to_mod(i64 a, u64 p) {
  i64 r = a % static_cast<i64>(p);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(p) : r);
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(u64 n);

/// Legendre symbol via Euler's criterion.  Requires p an odd prime.
int legendre(i64 a, u64 p);

/// Square roots of a modulo an odd prime, smaller root first.
/// Returns {0,0} for a = 0 and nullopt for non-residues.
std::optional<std::pair<u64, u64>> sqrt_mod_prime(u64 a, u64 p);

// ---------------------------------------------------------------------------
// Splitting of the Frobenius characteristic polynomial x^2 - t x + q mod ell.
// ---------------------------------------------------------------------------

struct SplitType {
  enum Kind { Split, Ramified, Inert } kind;
  u64 mu = 0;      // valid for Split and Ramified
  u64 mu_bar = 0;  // valid for Split
};

/// Roots of x^2 - t x + q modulo an odd prime ell != p, found by exhaustion
/// (ell is always small here).
SplitType frobenius_roots_mod_ell(i64 t, i64 q, u64 ell);

// ---------------------------------------------------------------------------
// Dense univariate polynomials over F_p.
// ---------------------------------------------------------------------------

/// Coefficients in ascending degree order; no trailing zeros; the zero
/// polynomial has an empty coefficient vector.
struct FpPoly {
  u64 p = 0;
  std::vector<u64> c;

  FpPoly() = default;
  explicit FpPoly(u64 modulus) : p(modulus) {}
  FpPoly(u64 modulus, std::vector<u64> coeffs);

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
  u64 lead() const { return c.back(); }
  u64 coeff(size_t i) const { return i < c.size() ? c[i] : 0; }
  void trim();

  bool operator==(const FpPoly& o) const { return p == o.p && c == o.c; }
};

FpPoly poly_zero(u64 p);
FpPoly poly_const(u64 p, u64 v);
FpPoly poly_x(u64 p);
/// Builds a polynomial from signed coefficients (ascending degree).
FpPoly poly_from(u64 p, std::initializer_list<i64> coeffs);

FpPoly poly_add(const FpPoly& a, const FpPoly& b);
FpPoly poly_sub(const FpPoly& a, const FpPoly& b);
FpPoly poly_mul(const FpPoly& a, const FpPoly& b);
FpPoly poly_scale(const FpPoly& a, u64 k);
FpPoly poly_shift(const FpPoly& a, int k);  // multiply by x^k
std::pair<FpPoly, FpPoly> poly_divmod(const FpPoly& a, const FpPoly& b);
FpPoly poly_mod(const FpPoly& a, const FpPoly& b);
FpPoly poly_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m);
FpPoly poly_gcd(FpPoly a, FpPoly b);  // monic gcd
FpPoly poly_derivative(const FpPoly& a);
FpPoly poly_monic(const FpPoly& a);
u64 poly_eval(const FpPoly& a, u64 x);
/// a(g) mod m by Horner's rule.
FpPoly poly_compose_mod(const FpPoly& a, const FpPoly& g, const FpPoly& m);

/// base^exponent mod modulus_poly by square-and-multiply.
FpPoly poly_powmod(const FpPoly& base, u64 exponent, const FpPoly& modulus_poly);

/// Full factorization into monic irreducibles with multiplicities,
/// sorted canonically (degree, then coefficients).  Equal-degree splitting
/// draws from the supplied generator, so results are seed-deterministic.
std::vector<std::pair<FpPoly, int>> poly_factor(const FpPoly& f, std::mt19937_64& rng);

/// All roots of f in F_p, sorted ascending.
std::vector<u64> poly_roots(const FpPoly& f);

// Seed-stable uniform draw from [0, n); std::uniform_int_distribution is not
// portable across standard libraries.
inline u64 rand_below(std::mt19937_64& rng, u64 n) { return rng() % n; }

}  // namespace isolab
