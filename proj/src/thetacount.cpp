#include "isolab/thetacount.hpp"

#include "isolab/errors.hpp"

namespace isolab {

namespace {

const u128 kU64Max = (u128)~(u64)0;

u128 mul_checked(u128 a, u128 b) {
  if (a != 0 && b > (u128)-1 / a) fail(Err::CapExceeded, "symplectic order overflow");
  return a * b;
}

u64 narrow(u128 v) {
  if (v > kU64Max) fail(Err::CapExceeded, "count exceeds 64 bits");
  return (u64)v;
}

u128 pow_checked(u128 base, u64 e) {
  u128 r = 1;
  for (u64 i = 0; i < e; ++i) r = mul_checked(r, base);
  return r;
}

u128 sp_order_prime_power(u64 n, u64 p, u64 k) {
  u128 r = pow_checked(p, (k - 1) * (2 * n * n + n));
  r = mul_checked(r, pow_checked(p, n * n));
  for (u64 i = 1; i <= n; ++i) r = mul_checked(r, pow_checked(p, 2 * i) - 1);
  return r;
}

}  // namespace

u64 sp_order(u64 n, u64 m) {
  if (n < 1 || n > 4) fail(Err::InternalError, "rank must be in [1, 4]");
  if (m < 2 || m > 10000) fail(Err::InternalError, "modulus must be in [2, 10^4]");
  u128 total = 1;
  u64 rest = m;
  for (u64 p = 2; p * p <= rest; ++p) {
    if (rest % p) continue;
    u64 k = 0;
    while (rest % p == 0) {
      rest /= p;
      ++k;
    }
    total = mul_checked(total, sp_order_prime_power(n, p, k));
  }
  if (rest > 1) total = mul_checked(total, sp_order_prime_power(n, rest, 1));
  return narrow(total);
}

u64 theta_null_bound(u64 n, u64 m) {
  return narrow(mul_checked(pow_checked(m, 2 * n), sp_order(n, m)));
}

u64 prop_b6_threshold(u64 m) {
  if (m % 4 != 0) fail(Err::BadLevel, "level must be divisible by 4");
  return narrow(mul_checked(pow_checked(m, 4), sp_order(2, m)));
}

bool prop_b6_feasible(u64 h, u64 m) { return h > prop_b6_threshold(m); }

u128 prop_b6_min_q_estimate(u64 m) {
  u128 thr = prop_b6_threshold(m);
  return mul_checked(thr, thr);
}

}  // namespace isolab
