#pragma once

#include "isolab/classgroup.hpp"
#include "isolab/isogeny.hpp"

namespace isolab {

// ---------------------------------------------------------------------------
// Explicit isomorphisms between products of isogenous curves, and the class
// criterion deciding when two such products are isomorphic.
// ---------------------------------------------------------------------------

/// A finite subgroup given as a word of prime steps: odd primes as Frobenius
/// eigenspaces, ell = 2 as a rational two-torsion point.
struct SubgroupDescriptor {
  IdealVector word;

  u64 order() const;
};

/// One atomic point map in a composition chain.
struct MorphismStep {
  enum Kind { OddStep, TwoStep, IsoStep } kind;
  Curve domain, codomain;
  IsogenyStep odd;  // OddStep
  u64 x0 = 0;       // TwoStep: kernel x-coordinate; t = 3 x0^2 + a
  u64 u = 1;        // IsoStep: (x, y) -> (u^2 x, u^3 y)
};

/// Composition chain followed by multiplication by `mult`.
struct Morphism {
  Curve domain, codomain;
  i64 mult = 1;  // 0 is the zero morphism
  std::vector<MorphismStep> chain;
  u64 degree = 1;  // of the chain part
};

Point morph_apply(const Morphism& m, const Point& P);

/// Quotient isogeny E -> E/K as a chain of prime steps.
Morphism quotient_chain(const Curve& E, const SubgroupDescriptor& K);

/// Dual of the chain, normalized so dual(phi(P)) = [deg] P; codomain is
/// exactly phi.domain.
Morphism dual_morphism(const Morphism& phi);

/// Dual of a single odd-prime step as a step again: the complementary
/// eigenvalue quotient with the normalizing isomorphism folded into the
/// rational map.
IsogenyStep dual_isogeny(const IsogenyStep& step);

/// The two mutually inverse 2x2 morphism matrices between E x (E/K) and
/// (E/K1) x (E/K2), K = K1 + K2 with coprime orders m1, m2 and
/// a m1 + b m2 = 1.
struct IsogenyMatrixPair {
  Curve E, EK1, EK2, EK;
  u64 m1, m2;
  i64 a, b;
  Morphism f[2][2];  // E x (E/K) -> (E/K1) x (E/K2)
  Morphism g[2][2];  // inverse direction
};

IsogenyMatrixPair build_product_isomorphism(const Curve& E, const SubgroupDescriptor& K1,
                                            const SubgroupDescriptor& K2);

struct VerifyResult {
  bool ok;
  bool vacuous;  // zero samples requested
};

/// Evaluates g o f and f o g on random product points; true iff every sample
/// returns its input.
VerifyResult verify_matrix_identity(const IsogenyMatrixPair& pair, int samples,
                                    std::mt19937_64& rng);

/// Ideal words with pairwise coprime norms, each representing its input
/// class.  Ramified primes are admitted only for the first word; later words
/// are reassigned to split primes.
std::vector<IdealVector> coprime_representatives(const std::vector<QuadForm>& classes,
                                                 i64 t, i64 q);

/// true iff the reduced class products agree; decides isomorphism of the two
/// product varieties.
bool check_class_condition(const std::vector<QuadForm>& classes1,
                           const std::vector<QuadForm>& classes2);

}  // namespace isolab
