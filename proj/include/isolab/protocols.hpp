#pragma once

#include <map>
#include <optional>

#include "isolab/invariantmap.hpp"
#include "isolab/isogeny.hpp"

namespace isolab {

// ---------------------------------------------------------------------------
// Protocols over the invariant map: n-party key exchange, unique signatures,
// and bit-fixing constrained PRFs.  Honest parties carry group elements as
// walk words; only the oracle table collapses anything to classes.
// ---------------------------------------------------------------------------

struct PublicParams {
  int bits;           // field size of the instance
  Curve x;            // base point
  IsogenyTable table; // invariant-map handle
  WalkParams walk;    // prime_cap always set below p
};

/// lambda in {"toy", "small"} -> 12 / 20 bit fields; builds the instance via
/// mapgen and saturates the orbit table (enlarging the prime bound as
/// needed).  Deterministic per rng state.
PublicParams nike_setup(const std::string& lambda, std::mt19937_64& rng);

/// Parameters pinned to a given base curve; used for fixtures and by the
/// other constructions.
PublicParams params_from_curve(const Curve& E0, WalkParams walk);

struct PartySecret {
  IdealVector g;
};

/// Secret walk g_i and public share g_i * x.
std::pair<PartySecret, Curve> nike_publish(const PublicParams& pp, std::mt19937_64& rng);

struct DerivedKey {
  InvariantValue value;
  std::array<unsigned char, 32> key;  // SHA-256 of the canonical encoding
};

/// Party i's key from the full share list: picks the smallest index j != i
/// and evaluates the invariant on the shares with x_i omitted and x_j
/// replaced by g_i * x_j.
DerivedKey nike_derive(const PublicParams& pp, size_t i, const PartySecret& secret,
                       const std::vector<Curve>& shares);

std::array<unsigned char, 32> hash_invariant(const InvariantValue& v);

// -- unique signatures -------------------------------------------------------

struct SigKeys {
  std::vector<std::array<IdealVector, 2>> secrets;  // g_{i,b}
  Curve x;
  std::vector<std::array<Curve, 2>> publics;  // y_{i,b} = g_{i,b} * x
};

SigKeys sig_keygen(const PublicParams& pp, size_t n, std::mt19937_64& rng);

/// sigma = (prod_i g_{i,m_i}) * x.
Curve sig_sign(const PublicParams& pp, const SigKeys& keys, const std::vector<int>& m);

/// e_n(sigma, x, ..., x) = e_n(y_{1,m_1}, ..., y_{n,m_n}).
bool sig_verify(const PublicParams& pp, const std::vector<std::array<Curve, 2>>& publics,
                const std::vector<int>& m, const Curve& sigma);

// -- bit-fixing constrained PRF ----------------------------------------------

struct PRFKey {
  IdealVector alpha;
  std::vector<std::array<IdealVector, 2>> d;  // d_{i,b}
  size_t n;
};

PRFKey prf_setup(const PublicParams& pp, size_t n, std::mt19937_64& rng);

/// F(k,a) = e_n((alpha * prod_i d_{i,a_i}) * x, x, ..., x).
InvariantValue prf_eval(const PublicParams& pp, const PRFKey& k, const std::vector<int>& a);

struct ConstrainedKey {
  std::vector<size_t> V;  // sorted, nonempty; indices 0-based
  std::map<size_t, int> v;
  std::map<size_t, std::array<Curve, 2>> D_curves;  // i not in V
  std::map<size_t, Curve> h;                        // i in V
  size_t n;
};

/// The smallest element of V absorbs the correction class
/// alpha * prod_{i in V} d_{i,v_i} * (prod of the other g_i)^-1, re-expressed
/// as a walk word by decompose.
ConstrainedKey prf_constrain(const PublicParams& pp, const PRFKey& k,
                             const std::vector<size_t>& V, const std::map<size_t, int>& v,
                             std::mt19937_64& rng);

/// e_n(C_1, ..., C_n) when a agrees with v on V; empty optional otherwise.
std::optional<InvariantValue> prf_eval_constrained(const PublicParams& pp,
                                                   const ConstrainedKey& ck,
                                                   const std::vector<int>& a);

}  // namespace isolab
