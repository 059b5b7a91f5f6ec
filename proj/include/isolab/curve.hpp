#pragma once

#include <optional>
#include <vector>

#include "isolab/algebra.hpp"

namespace isolab {

// ---------------------------------------------------------------------------
// Short Weierstrass curves y^2 = x^3 + a x + b over F_p with affine points
// plus the point at infinity.
// ---------------------------------------------------------------------------

struct Curve {
  u64 p, a, b;

  bool operator==(const Curve& o) const { return p == o.p && a == o.a && b == o.b; }
};

/// Validates p prime (below the 2^32 field cap) and 4a^3 + 27b^2 != 0.
Curve make_curve(u64 p, u64 a, u64 b);

struct Point {
  bool inf = true;
  u64 x = 0, y = 0;

  static Point infinity() { return Point{}; }
  static Point at(u64 x, u64 y) { return Point{false, x, y}; }
  bool operator==(const Point& o) const {
    return inf == o.inf && (inf || (x == o.x && y == o.y));
  }
};

bool on_curve(const Curve& E, const Point& P);
Point point_neg(const Curve& E, const Point& P);
Point point_add(const Curve& E, const Point& P, const Point& Q);
Point point_mul(const Curve& E, u64 k, const Point& P);
/// Uniform random affine point (never infinity).
Point random_point(const Curve& E, std::mt19937_64& rng);

u64 j_invariant(const Curve& E);

/// Exact group order: Legendre sweep for p < 2^20, baby-step/giant-step over
/// the Hasse interval (with the quadratic twist as tie-breaker) above that.
u64 count_points(const Curve& E);

/// The baby-step/giant-step path regardless of field size; used to
/// cross-check the naive sweep on their overlap range.
u64 count_points_bsgs(const Curve& E);

struct FrobeniusData {
  i64 t;
  u64 N;
  i64 D_pi;          // t^2 - 4p
  u64 conductor_m;   // D_pi = m^2 * D_fund
  i64 D_fund;
  std::vector<std::pair<u64, int>> factorization;  // of |D_pi|
};

/// Trace, discriminant and conductor of an ordinary curve.
FrobeniusData frobenius_data(const Curve& E);

/// u with a2 = u^4 a1, b2 = u^6 b1 (point map (x,y) -> (u^2 x, u^3 y)),
/// smallest such u, or absent when the curves are not F_p-isomorphic.
std::optional<u64> find_isomorphism(const Curve& E1, const Curve& E2);

enum class DiscriminantPolicy { AnyFundamental, PrimeDiscriminant, SmallSquarefreeTimesPrime };

/// Random ordinary curve with conductor 1 whose fundamental discriminant
/// passes the policy; p has exactly `bits` bits.  Deterministic per seed.
std::pair<Curve, FrobeniusData> mapgen(int bits, DiscriminantPolicy policy, std::mt19937_64& rng);

}  // namespace isolab
