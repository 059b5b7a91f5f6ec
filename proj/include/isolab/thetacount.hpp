#pragma once

#include "isolab/algebra.hpp"

namespace isolab {

// ---------------------------------------------------------------------------
// Counting bounds for theta structures: symplectic group orders over Z/m and
// the feasibility threshold for distinguishing product surfaces by theta
// nulls.
// ---------------------------------------------------------------------------

/// |Sp_{2n}(Z/mZ)|, multiplicative over prime powers; per p^k the order is
/// p^{(k-1)(2n^2+n)} * p^{n^2} * prod_{i=1}^{n} (p^{2i} - 1).
/// Requires 1 <= n <= 4, 2 <= m <= 10^4; values beyond 64 bits raise
/// CapExceeded.
u64 sp_order(u64 n, u64 m);

/// m^{2n} * sp_order(n, m): upper bound on the number of theta-null points
/// lying above one abelian surface.
u64 theta_null_bound(u64 n, u64 m);

/// true iff h > m^4 * sp_order(2, m), the regime where theta nulls provably
/// cannot separate all unpolarized product surfaces.  Requires 4 | m.
bool prop_b6_feasible(u64 h, u64 m);

/// The class-number threshold m^4 * sp_order(2, m) itself.
u64 prop_b6_threshold(u64 m);

/// Heuristic minimal field size at which the threshold is met, using
/// h ~ sqrt(q): the square of the threshold.
u128 prop_b6_min_q_estimate(u64 m);

}  // namespace isolab
