#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isolab/errors.hpp"
#include "isolab/thetacount.hpp"

using namespace isolab;

namespace {

// Sp_2 = SL_2: count 2x2 matrices over Z/m with determinant 1.
u64 brute_sp2(u64 m) {
  u64 count = 0;
  for (u64 a = 0; a < m; ++a)
    for (u64 b = 0; b < m; ++b)
      for (u64 c = 0; c < m; ++c)
        for (u64 d = 0; d < m; ++d)
          if (((a * d) % m + m - (b * c) % m) % m == 1) ++count;
  return count;
}

// 4x4 matrices over Z/2 preserving the standard symplectic form.
u64 brute_sp4_mod2() {
  // J in block form [[0, I], [I, 0]] (signs vanish mod 2)
  int J[4][4] = {{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}};
  u64 count = 0;
  for (u64 bits = 0; bits < (1u << 16); ++bits) {
    int M[4][4];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) M[i][j] = (bits >> (4 * i + j)) & 1;
    bool ok = true;
    for (int i = 0; i < 4 && ok; ++i)
      for (int j = 0; j < 4 && ok; ++j) {
        int s = 0;
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) s += M[k][i] * J[k][l] * M[l][j];
        if ((s & 1) != J[i][j]) ok = false;
      }
    if (ok) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("symplectic orders match brute force") {
  CHECK(sp_order(1, 2) == 6);
  CHECK(sp_order(1, 3) == 24);
  CHECK(sp_order(1, 4) == 48);
  CHECK(sp_order(1, 5) == 120);
  for (u64 m : {2ull, 3ull, 4ull, 5ull}) CHECK(sp_order(1, m) == brute_sp2(m));
  CHECK(sp_order(2, 2) == 720);
  CHECK(sp_order(2, 2) == brute_sp4_mod2());
}

TEST_CASE("orders are multiplicative over coprime moduli") {
  for (auto [m1, m2] : std::vector<std::pair<u64, u64>>{{2, 3}, {4, 9}, {5, 8}, {3, 25}})
    for (u64 n : {1ull, 2ull})
      CHECK(sp_order(n, m1 * m2) == sp_order(n, m1) * sp_order(n, m2));
}

TEST_CASE("theta-null bounds") {
  CHECK(theta_null_bound(1, 2) == 24);
  CHECK(theta_null_bound(2, 2) == 11520);
  for (u64 n : {1ull, 2ull}) {
    u64 prev = 0;
    for (u64 m = 2; m <= 10; ++m) {
      u64 cur = theta_null_bound(n, m);
      CHECK(cur >= prev);
      prev = cur;
    }
  }
}

TEST_CASE("feasibility threshold for level four") {
  CHECK(prop_b6_threshold(4) == 188743680);
  CHECK_FALSE(prop_b6_feasible(2, 4));
  CHECK_FALSE(prop_b6_feasible(188743680, 4));
  CHECK(prop_b6_feasible(188743681, 4));
  CHECK(prop_b6_feasible(1000000000, 4));
  CHECK_THROWS_AS(prop_b6_feasible(5, 3), Error);
  try {
    prop_b6_feasible(5, 3);
  } catch (const Error& e) {
    CHECK(e.code() == Err::BadLevel);
  }

  // heuristic h ~ sqrt(q) bridge: threshold^2 ~ 3.6e16
  u128 q = prop_b6_min_q_estimate(4);
  CHECK(q / 1000000000000000ull == 35);  // 3.56e16
}

TEST_CASE("overflow raises rather than wrapping") {
  CHECK_THROWS_AS(sp_order(4, 9973), Error);
  try {
    sp_order(4, 9973);
  } catch (const Error& e) {
    CHECK(e.code() == Err::CapExceeded);
  }
}
