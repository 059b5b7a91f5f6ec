#pragma once

#include "isolab/classgroup.hpp"
#include "isolab/isogeny.hpp"

namespace isolab {

/// Exact endpoint distribution of the generator walk on Cl(D), computed by
/// powering the transition matrix.
struct MixingReport {
  i64 D;
  std::vector<u64> basis;
  u64 h;
  u64 r;                          // walk length from the sampling defaults
  std::vector<double> distances;  // statistical distance to uniform at 0..r steps
};

MixingReport mixing_distances(i64 D, const WalkParams& params, i64 t, i64 q);

}  // namespace isolab
