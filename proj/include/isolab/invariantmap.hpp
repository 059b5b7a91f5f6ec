#pragma once

#include <map>

#include "isolab/classgroup.hpp"
#include "isolab/curve.hpp"

namespace isolab {

// ---------------------------------------------------------------------------
// The invariant map as an oracle: label the whole isogeny orbit by BFS, then
// answer tuple queries with the reduced product class.
// ---------------------------------------------------------------------------

struct IsogenyTable {
  Curve base;
  i64 D;  // discriminant of Z[pi]
  i64 t;
  u64 N;
  std::map<u64, QuadForm> entries;    // j-invariant -> ideal class
  std::map<u64, Curve> curve_for_j;   // representative curve per class
  std::vector<u64> prime_basis;

  u64 size() const { return entries.size(); }
};

struct InvariantValue {
  QuadForm form;  // reduced
  std::array<unsigned char, 48> encoding;

  bool operator==(const InvariantValue& o) const { return form == o.form; }
};

InvariantValue make_invariant(const QuadForm& f);

/// BFS from E0 over split primes <= prime_bound, labeling each j with the
/// product of edge prime forms; saturates to h(D) entries or raises
/// NotGenerated.
IsogenyTable build_orbit_table(const Curve& E0, u64 prime_bound);

/// The class a with a * base isomorphic to E.
QuadForm solve_isogeny(const IsogenyTable& T, const Curve& E);

/// e_n: the reduced product of the curves' classes, canonically encoded.
InvariantValue invariant_e_n(const IsogenyTable& T, const std::vector<Curve>& curves);

/// true iff e_n(y, x, ..., x) = e_n(shares), i.e. y lies in the class of the
/// shares' product relative to x.
bool ddh_distinguish(const IsogenyTable& T, const Curve& x,
                     const std::vector<Curve>& shares, const Curve& y);

/// true iff class(aE) * class(bE) = class(cE): the product-variety
/// isomorphism test.
bool isogeny_ddh_decide(const IsogenyTable& T, const Curve& aE, const Curve& bE,
                        const Curve& cE);

}  // namespace isolab
