#pragma once

#include <vector>

#include "isolab/algebra.hpp"

namespace isolab {

// One prime step in the isogeny graph: the ideal (ell, pi - mu) or its
// conjugate, taken `exp` times.  sign = +1 selects the orientation whose
// prime form has the smaller normalized middle coefficient.
struct IdealEntry {
  u64 ell;
  int sign;  // +1 or -1
  u64 exp;
};

struct IdealVector {
  std::vector<IdealEntry> entries;

  bool empty() const { return entries.empty(); }
  u64 length() const {
    u64 n = 0;
    for (auto& e : entries) n += e.exp;
    return n;
  }
};

}  // namespace isolab
