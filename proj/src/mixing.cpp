#include "isolab/mixing.hpp"

#include <cmath>

#include "isolab/errors.hpp"

namespace isolab {

MixingReport mixing_distances(i64 D, const WalkParams& params, i64 t, i64 q) {
  if ((i128)t * t - 4 * (i128)q != D) fail(Err::DiscriminantMismatch, "t, q do not match D");
  ClassGroupTable cg = enumerate_reduced(D);
  u64 h = cg.h();
  auto index_of = [&](const QuadForm& f) {
    auto it = std::lower_bound(cg.reduced_forms.begin(), cg.reduced_forms.end(), f);
    if (it == cg.reduced_forms.end() || !(*it == f)) fail(Err::InternalError, "form not reduced");
    return (size_t)(it - cg.reduced_forms.begin());
  };

  MixingReport rep;
  rep.D = D;
  rep.h = h;
  rep.basis = walk_prime_basis(D, params);

  // column-stochastic step matrix of the uniform generator walk
  std::vector<std::vector<double>> M(h, std::vector<double>(h, 0.0));
  double w = 1.0 / (2.0 * rep.basis.size());
  for (u64 ell : rep.basis)
    for (int sign : {+1, -1}) {
      QuadForm g = prime_form(D, ell, sign, t, q);
      for (size_t i = 0; i < h; ++i) M[index_of(compose(cg.reduced_forms[i], g))][i] += w;
    }

  double logd = std::log((double)(-D));
  double loglog = std::max(1.0, std::log(logd));
  rep.r = (u64)std::ceil(params.C * (params.delta + 0.5 * logd) / (params.eps * loglog));

  std::vector<double> v(h, 0.0);
  v[index_of(identity_form(D))] = 1.0;
  for (u64 step = 0; step <= rep.r; ++step) {
    double dist = 0.0;
    for (double x : v) dist += std::fabs(x - 1.0 / h);
    rep.distances.push_back(dist / 2.0);
    std::vector<double> next(h, 0.0);
    for (size_t j = 0; j < h; ++j)
      for (size_t i = 0; i < h; ++i) next[j] += M[j][i] * v[i];
    v = next;
  }
  return rep;
}

}  // namespace isolab
