#pragma once

#include <optional>

#include "isolab/curve.hpp"
#include "isolab/idealvector.hpp"

namespace isolab {

// ---------------------------------------------------------------------------
// The class-group action: Frobenius-eigenspace kernels inside division
// polynomials, Velu-style quotient steps, and expander-walk sampling.
// ---------------------------------------------------------------------------

struct KernelPoly {
  FpPoly h;  // monic, degree (ell-1)/2, divides the ell-division polynomial
  u64 ell;
  u64 mu;  // Frobenius eigenvalue on the subgroup cut out by h, in [0, ell)
};

/// x -> num_x/den_x, y -> y * num_y/den_y; den_x = h^2, den_y = h^3 for a
/// normalized odd-degree isogeny.
struct RationalMap {
  FpPoly num_x, den_x, num_y, den_y;
};

struct IsogenyStep {
  Curve domain, codomain;
  KernelPoly kernel;
  RationalMap map;
};

/// Univariate ell-division polynomial psi_ell(x), degree (ell^2 - 1)/2, for
/// odd ell != p.  Roots are the x-coordinates of nonzero ell-torsion.
FpPoly division_poly(const Curve& E, u64 ell);

/// The univariate division polynomials w_0 .. w_n of E (w_k = psi_k for odd
/// k; psi_k = w_k * y for even k).
std::vector<FpPoly> division_poly_table(const Curve& E, u64 n);

/// Monic degree-(ell-1)/2 divisor h of psi_ell cutting out the eigenspace
/// C[ell] cap Ker(pi - mu); both coordinates of the eigenvalue identity are
/// verified modulo (h(x), y^2 - f(x)) before returning.
KernelPoly eigen_kernel(const Curve& E, u64 ell, u64 mu);

/// Quotient isogeny with the given kernel: codomain coefficients from power
/// sums of the kernel roots, point map as a normalized rational map.
IsogenyStep velu_step(const Curve& E, const KernelPoly& k);

/// Evaluate the step's rational map; kernel points go to infinity.
Point apply_step(const IsogenyStep& s, const Point& P);

/// Eigenvalue of Frobenius mod ell selected by the orientation convention:
/// sign = +1 takes the root whose prime-form middle coefficient
/// (2 mu - t) mod 2 ell, normalized into (0, 2 ell], is smaller.
u64 oriented_eigenvalue(i64 t, i64 q, u64 ell, int sign);

/// One prime step: eigenvalue selected by the orientation convention
/// (sign = +1 takes the mu whose prime form has the smaller normalized
/// middle coefficient), then eigen_kernel + velu_step.  Results are
/// memoized process-wide.
Curve apply_prime(const Curve& E, u64 ell, int sign);

/// Left-to-right fold of apply_prime.
Curve apply_ideal_vector(const Curve& E, const IdealVector& v);

struct WalkParams {
  double B = 2.5;    // split-prime bound exponent: ell <= (ln|D|)^B
  double eps = 0.5;  // statistical closeness target
  double delta = 5.0;
  double C = 3.0;            // absolute constant in the walk-length bound
  u64 floor_min = 20;        // lower clamp on the prime bound
  std::optional<u64> prime_cap;  // upper clamp, for step-cost control
};

/// Split odd primes up to the walk bound (ramified primes excluded).
std::vector<u64> walk_prime_basis(i64 D, const WalkParams& params);

/// Random walk word of length r = ceil(C (delta + ln sqrt|D|) /
/// (eps * max(1, ln ln |D|))), steps uniform over basis x {+1, -1}.
IdealVector sample_walk(i64 D, const WalkParams& params, std::mt19937_64& rng);

}  // namespace isolab
