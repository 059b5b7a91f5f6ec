#include "isolab/invariantmap.hpp"

#include <deque>

#include "isolab/errors.hpp"
#include "isolab/isogeny.hpp"

namespace isolab {

InvariantValue make_invariant(const QuadForm& f) {
  QuadForm r = reduce(f);
  return InvariantValue{r, form_encode(r)};
}

IsogenyTable build_orbit_table(const Curve& E0, u64 prime_bound) {
  FrobeniusData fd = frobenius_data(E0);
  if (fd.conductor_m != 1) fail(Err::NonMaximalOrder, "endomorphism ring is not maximal");
  i64 D = fd.D_pi;

  ClassGroupTable cg = enumerate_reduced(D);
  u64 cap = int_cap(100000);
  if (cg.h() > cap) fail(Err::CapExceeded, "class number exceeds table cap");

  IsogenyTable T;
  T.base = E0;
  T.D = D;
  T.t = fd.t;
  T.N = fd.N;
  for (u64 ell = 3; ell <= prime_bound; ell += 2) {
    if (!is_prime(ell) || ell == E0.p) continue;
    if (legendre(D, ell) == 1) T.prime_basis.push_back(ell);
  }

  u64 j0 = j_invariant(E0);
  T.entries[j0] = identity_form(D);
  T.curve_for_j[j0] = E0;

  std::deque<u64> queue{j0};
  while (!queue.empty() && T.entries.size() < cg.h()) {
    u64 j = queue.front();
    queue.pop_front();
    Curve E = T.curve_for_j.at(j);
    QuadForm cls = T.entries.at(j);
    for (u64 ell : T.prime_basis) {
      for (int sign : {+1, -1}) {
        Curve E2 = apply_prime(E, ell, sign);
        QuadForm cls2 = compose(cls, prime_form(D, ell, sign, fd.t, (i64)E0.p));
        u64 j2 = j_invariant(E2);
        auto it = T.entries.find(j2);
        if (it == T.entries.end()) {
          T.entries[j2] = cls2;
          T.curve_for_j[j2] = E2;
          queue.push_back(j2);
        } else if (!(it->second == cls2)) {
          fail(Err::InternalError, "inconsistent orbit labels at one j-invariant");
        }
      }
    }
  }
  if (T.entries.size() < cg.h())
    fail(Err::NotGenerated, "orbit not saturated; enlarge the prime bound");
  return T;
}

QuadForm solve_isogeny(const IsogenyTable& T, const Curve& E) {
  if (E.p != T.base.p || count_points(E) != T.N)
    fail(Err::NotInIsogenyClass, "curve outside the table's isogeny class");
  auto it = T.entries.find(j_invariant(E));
  if (it == T.entries.end())
    fail(Err::NotInIsogenyClass, "j-invariant not in the orbit table");
  return it->second;
}

InvariantValue invariant_e_n(const IsogenyTable& T, const std::vector<Curve>& curves) {
  if (curves.empty()) fail(Err::InternalError, "empty curve tuple");
  QuadForm acc = identity_form(T.D);
  for (const Curve& E : curves) acc = compose(acc, solve_isogeny(T, E));
  return make_invariant(acc);
}

bool ddh_distinguish(const IsogenyTable& T, const Curve& x,
                     const std::vector<Curve>& shares, const Curve& y) {
  std::vector<Curve> lhs{y};
  for (size_t i = 1; i < shares.size(); ++i) lhs.push_back(x);
  return invariant_e_n(T, lhs) == invariant_e_n(T, shares);
}

bool isogeny_ddh_decide(const IsogenyTable& T, const Curve& aE, const Curve& bE,
                        const Curve& cE) {
  QuadForm ab = compose(solve_isogeny(T, aE), solve_isogeny(T, bE));
  return ab == solve_isogeny(T, cE);
}

}  // namespace isolab
