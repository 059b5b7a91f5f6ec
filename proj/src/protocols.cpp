#include "isolab/protocols.hpp"

#include <openssl/sha.h>

#include <algorithm>

#include "isolab/errors.hpp"

namespace isolab {

namespace {

IsogenyTable saturated_table(const Curve& E0, u64 start_bound) {
  for (u64 bound = std::max<u64>(start_bound, 3); bound <= 4096; bound *= 2) {
    try {
      return build_orbit_table(E0, bound);
    } catch (const Error& e) {
      if (e.code() != Err::NotGenerated) throw;
    }
  }
  fail(Err::NotGenerated, "orbit not generated by primes up to 4096");
}

void check_message(const std::vector<int>& m, size_t n) {
  if (m.size() != n) fail(Err::MessageLength, "message length mismatch");
  for (int b : m)
    if (b != 0 && b != 1) fail(Err::MessageLength, "message bits must be 0/1");
}

QuadForm vector_class(const IdealVector& v, i64 D, i64 t, i64 q) {
  QuadForm acc = identity_form(D);
  for (const auto& e : v.entries)
    acc = compose(acc, form_pow(prime_form(D, e.ell, e.sign, t, q), e.exp));
  return acc;
}

IdealVector concat(const IdealVector& a, const IdealVector& b) {
  IdealVector out = a;
  out.entries.insert(out.entries.end(), b.entries.begin(), b.entries.end());
  return out;
}

}  // namespace

PublicParams params_from_curve(const Curve& E0, WalkParams walk) {
  // keep ell = p out of the walk basis; at toy sizes p itself can be split
  u64 cap = walk.prime_cap.value_or(E0.p - 1);
  walk.prime_cap = std::min<u64>(cap, E0.p - 1);

  PublicParams pp;
  pp.bits = 0;
  for (u64 v = E0.p; v; v >>= 1) ++pp.bits;
  pp.x = E0;
  pp.walk = walk;
  walk_prime_basis(frobenius_data(E0).D_pi, walk);  // reject empty walk bases early
  pp.table = saturated_table(E0, 20);
  return pp;
}

PublicParams nike_setup(const std::string& lambda, std::mt19937_64& rng) {
  int bits;
  if (lambda == "toy")
    bits = 12;
  else if (lambda == "small")
    bits = 20;
  else
    fail(Err::SearchExhausted, "unknown security level: " + lambda);
  auto [E, fd] = mapgen(bits, DiscriminantPolicy::AnyFundamental, rng);
  return params_from_curve(E, WalkParams{});
}

std::pair<PartySecret, Curve> nike_publish(const PublicParams& pp, std::mt19937_64& rng) {
  PartySecret s{sample_walk(pp.table.D, pp.walk, rng)};
  Curve share = apply_ideal_vector(pp.x, s.g);
  return {s, share};
}

std::array<unsigned char, 32> hash_invariant(const InvariantValue& v) {
  std::array<unsigned char, 32> out;
  SHA256(v.encoding.data(), v.encoding.size(), out.data());
  return out;
}

DerivedKey nike_derive(const PublicParams& pp, size_t i, const PartySecret& secret,
                       const std::vector<Curve>& shares) {
  size_t n = shares.size();
  if (n < 2 || i >= n) fail(Err::Mismatch, "need n >= 2 shares and i < n");
  size_t j = (i == 0) ? 1 : 0;
  std::vector<Curve> tuple;
  for (size_t k = 0; k < n; ++k) {
    if (k == i) continue;
    tuple.push_back(k == j ? apply_ideal_vector(shares[j], secret.g) : shares[k]);
  }
  InvariantValue v = invariant_e_n(pp.table, tuple);
  return DerivedKey{v, hash_invariant(v)};
}

SigKeys sig_keygen(const PublicParams& pp, size_t n, std::mt19937_64& rng) {
  SigKeys keys;
  keys.x = pp.x;
  for (size_t i = 0; i < n; ++i) {
    std::array<IdealVector, 2> g{sample_walk(pp.table.D, pp.walk, rng),
                                 sample_walk(pp.table.D, pp.walk, rng)};
    std::array<Curve, 2> y{apply_ideal_vector(pp.x, g[0]), apply_ideal_vector(pp.x, g[1])};
    for (int b : {0, 1})  // published halves must sit in the oracle's orbit
      solve_isogeny(pp.table, y[b]);
    keys.secrets.push_back(g);
    keys.publics.push_back(y);
  }
  return keys;
}

Curve sig_sign(const PublicParams& pp, const SigKeys& keys, const std::vector<int>& m) {
  check_message(m, keys.secrets.size());
  IdealVector word;
  for (size_t i = 0; i < m.size(); ++i) word = concat(word, keys.secrets[i][m[i]]);
  return apply_ideal_vector(pp.x, word);
}

bool sig_verify(const PublicParams& pp, const std::vector<std::array<Curve, 2>>& publics,
                const std::vector<int>& m, const Curve& sigma) {
  check_message(m, publics.size());
  std::vector<Curve> lhs{sigma};
  lhs.resize(m.size(), pp.x);
  std::vector<Curve> rhs;
  for (size_t i = 0; i < m.size(); ++i) rhs.push_back(publics[i][m[i]]);
  return invariant_e_n(pp.table, lhs) == invariant_e_n(pp.table, rhs);
}

PRFKey prf_setup(const PublicParams& pp, size_t n, std::mt19937_64& rng) {
  PRFKey k;
  k.n = n;
  k.alpha = sample_walk(pp.table.D, pp.walk, rng);
  for (size_t i = 0; i < n; ++i)
    k.d.push_back({sample_walk(pp.table.D, pp.walk, rng),
                   sample_walk(pp.table.D, pp.walk, rng)});
  return k;
}

InvariantValue prf_eval(const PublicParams& pp, const PRFKey& k, const std::vector<int>& a) {
  check_message(a, k.n);
  IdealVector word = k.alpha;
  for (size_t i = 0; i < k.n; ++i) word = concat(word, k.d[i][a[i]]);
  std::vector<Curve> tuple{apply_ideal_vector(pp.x, word)};
  tuple.resize(k.n, pp.x);
  return invariant_e_n(pp.table, tuple);
}

ConstrainedKey prf_constrain(const PublicParams& pp, const PRFKey& k,
                             const std::vector<size_t>& V, const std::map<size_t, int>& v,
                             std::mt19937_64& rng) {
  if (V.empty()) fail(Err::EmptyConstraint, "constraint support is empty");
  ConstrainedKey ck;
  ck.n = k.n;
  ck.V = V;
  std::sort(ck.V.begin(), ck.V.end());
  for (size_t i : ck.V) {
    if (i >= k.n) fail(Err::Mismatch, "constraint index out of range");
    auto it = v.find(i);
    if (it == v.end() || (it->second != 0 && it->second != 1))
      fail(Err::EmptyConstraint, "constraint bits must cover V with 0/1");
    ck.v[i] = it->second;
  }

  i64 D = pp.table.D, t = pp.table.t, q = (i64)pp.x.p;
  for (size_t i = 0; i < k.n; ++i)
    if (!ck.v.count(i))
      ck.D_curves[i] = {apply_ideal_vector(pp.x, k.d[i][0]),
                        apply_ideal_vector(pp.x, k.d[i][1])};

  size_t i0 = ck.V.front();
  QuadForm correction = vector_class(k.alpha, D, t, q);
  for (size_t i : ck.V) correction = compose(correction, vector_class(k.d[i][ck.v[i]], D, t, q));
  for (size_t i : ck.V) {
    if (i == i0) continue;
    IdealVector g = sample_walk(D, pp.walk, rng);
    ck.h[i] = apply_ideal_vector(pp.x, g);
    correction = compose(correction, invert(vector_class(g, D, t, q)));
  }
  IdealVector g0 = decompose(correction, walk_prime_basis(D, pp.walk), t, q);
  ck.h[i0] = apply_ideal_vector(pp.x, g0);
  return ck;
}

std::optional<InvariantValue> prf_eval_constrained(const PublicParams& pp,
                                                   const ConstrainedKey& ck,
                                                   const std::vector<int>& a) {
  check_message(a, ck.n);
  for (auto [i, bit] : ck.v)
    if (a[i] != bit) return std::nullopt;
  std::vector<Curve> tuple;
  for (size_t i = 0; i < ck.n; ++i)
    tuple.push_back(ck.v.count(i) ? ck.h.at(i) : ck.D_curves.at(i)[a[i]]);
  return invariant_e_n(pp.table, tuple);
}

}  // namespace isolab
