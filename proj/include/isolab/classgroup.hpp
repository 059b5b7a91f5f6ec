#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "isolab/algebra.hpp"
#include "isolab/idealvector.hpp"

namespace isolab {

// ---------------------------------------------------------------------------
// Primitive positive-definite binary quadratic forms a x^2 + b xy + c y^2,
// discriminant b^2 - 4ac < 0.  Reduced forms are the canonical class
// representatives; composition intermediates use 128-bit arithmetic.
// ---------------------------------------------------------------------------

struct QuadForm {
  i64 a, b, c;

  i64 disc() const;
  bool operator==(const QuadForm& o) const { return a == o.a && b == o.b && c == o.c; }
  bool operator<(const QuadForm& o) const;
};

bool is_valid_form(const QuadForm& f);  // primitive, positive definite
bool is_reduced(const QuadForm& f);

/// Gauss reduction; idempotent, preserves the class.
QuadForm reduce(QuadForm f);

/// Principal form (1,0,|D|/4) or (1,1,(1+|D|)/4).
QuadForm identity_form(i64 D);

/// Gauss composition, returned reduced.  Both forms must share a
/// discriminant.
QuadForm compose(const QuadForm& f, const QuadForm& g);

/// Class inverse: reduce((a,-b,c)).
QuadForm invert(const QuadForm& f);

/// compose iterated by square-and-multiply.
QuadForm form_pow(const QuadForm& f, u64 e);

struct ClassGroupTable {
  i64 D;
  std::vector<QuadForm> reduced_forms;  // sorted; size = h(D)

  u64 h() const { return reduced_forms.size(); }
};

/// All reduced forms of discriminant D (D < 0, D = 0 or 1 mod 4) by the
/// bound sweep a <= sqrt(|D|/3).
ClassGroupTable enumerate_reduced(i64 D);

/// The form of the prime ideal above ell chosen by sign: middle coefficient
/// b = 2 mu - t mod 2 ell normalized into (0, 2 ell], sign = +1 taking the
/// smaller of the two candidates.  Returned reduced.
QuadForm prime_form(i64 D, u64 ell, int sign, i64 t, i64 q);

/// Shortest word in the prime forms over `basis` whose product is `target`,
/// by BFS from the identity; ties broken by (ell, sign) with +1 first.
IdealVector decompose(const QuadForm& target, const std::vector<u64>& basis, i64 t, i64 q);

// ---------------------------------------------------------------------------
// Frobenius acting on a rank-2 module, and the reduction between module
// matrices and ideal classes.
// ---------------------------------------------------------------------------

struct FrobeniusMatrix {
  i64 m11, m12, m21, m22;
  i64 t, q;
};

/// Companion matrix of x^2 - t x + q on the basis {1, pi}.
FrobeniusMatrix companion_matrix(i64 t, i64 q);

/// Class of the module M1 relative to M2: read each first column (a_i, b_i)
/// as the ideal (b_i, pi - a_i') and output class(M1) * class(M2)^-1 reduced.
QuadForm deligne_to_class(const FrobeniusMatrix& M1, const FrobeniusMatrix& M2);

/// Matrix of multiplication-by-pi on the ideal basis {a, pi - (b+t)/2} of
/// the class f; the identity class returns the companion matrix.
FrobeniusMatrix class_to_module(const QuadForm& f, i64 t, i64 q);

/// Canonical 48-byte encoding: big-endian two's-complement 16-byte lanes for
/// a, b, c.  Bit-exact serialization for hashing.
std::array<unsigned char, 48> form_encode(const QuadForm& f);

/// Integer cap override from the ISOLAB_INT_CAP environment variable.
u64 int_cap(u64 dflt);

}  // namespace isolab
