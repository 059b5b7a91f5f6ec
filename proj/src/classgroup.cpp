#include "isolab/classgroup.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <numeric>
#include <string>

namespace isolab {

namespace {

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) { i128 r = a % b; a = b; b = r; }
  return a;
}

// g = ax + by with g = gcd(a,b) >= 0.
i128 extgcd(i128 a, i128 b, i128& x, i128& y) {
  if (b == 0) {
    x = a < 0 ? -1 : 1;
    y = 0;
    return a < 0 ? -a : a;
  }
  i128 x1, y1;
  i128 g = extgcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

i128 mod128(i128 a, i128 m) {
  i128 r = a % m;
  return r < 0 ? r + m : r;
}

i64 narrow(i128 v, const char* what) {
  if (v > (i128)INT64_MAX || v < (i128)INT64_MIN)
    fail(Err::CapExceeded, std::string(what) + " exceeds 64 bits");
  return (i64)v;
}

QuadForm reduce128(i128 a, i128 b, i128 c) {
  if (a <= 0) fail(Err::InternalError, "non positive definite form");
  for (;;) {
    // normalize b into (-a, a]
    if (b > a || b <= -a) {
      i128 twoa = 2 * a;
      i128 r = mod128(b + a - 1, twoa);  // b - r' with r' in (-a, a]
      i128 bn = r - a + 1;
      // recompute via shift count to keep c consistent
      i128 k = (b - bn) / twoa;
      c = c - k * b + k * k * a;
      b = bn;
    }
    if (a > c) {
      std::swap(a, c);
      b = -b;
      continue;
    }
    break;
  }
  // b already lies in (-a, a]; only the a = c boundary needs b >= 0
  if (b < 0 && a == c) b = -b;
  return QuadForm{narrow(a, "form a"), narrow(b, "form b"), narrow(c, "form c")};
}

}  // namespace

i64 QuadForm::disc() const {
  return narrow((i128)b * b - 4 * (i128)a * c, "discriminant");
}

bool QuadForm::operator<(const QuadForm& o) const {
  if (a != o.a) return a < o.a;
  if (b != o.b) return b < o.b;
  return c < o.c;
}

bool is_valid_form(const QuadForm& f) {
  if (f.a <= 0) return false;
  i128 d = (i128)f.b * f.b - 4 * (i128)f.a * f.c;
  if (d >= 0) return false;
  return std::gcd(std::gcd(f.a, f.b), f.c) == 1;
}

bool is_reduced(const QuadForm& f) {
  i64 ab = f.b < 0 ? -f.b : f.b;
  if (!(ab <= f.a && f.a <= f.c)) return false;
  if (f.b < 0 && (ab == f.a || f.a == f.c)) return false;
  return true;
}

QuadForm reduce(QuadForm f) {
  if (!is_valid_form(f)) fail(Err::InternalError, "invalid quadratic form");
  return reduce128(f.a, f.b, f.c);
}

QuadForm identity_form(i64 D) {
  if (D >= 0) fail(Err::InternalError, "discriminant must be negative");
  i64 m4 = ((D % 4) + 4) % 4;
  if (m4 == 0) return QuadForm{1, 0, -D / 4};
  if (m4 == 1) return QuadForm{1, 1, (1 - D) / 4};
  fail(Err::DiscriminantMismatch, "discriminant must be 0 or 1 mod 4");
}

QuadForm invert(const QuadForm& f) { return reduce(QuadForm{f.a, -f.b, f.c}); }

QuadForm compose(const QuadForm& f, const QuadForm& g) {
  i64 D = f.disc();
  if (g.disc() != D) fail(Err::DiscriminantMismatch, "compose across discriminants");
  QuadForm f1 = reduce(f), f2 = reduce(g);
  QuadForm id = identity_form(D);
  if (f1 == id) return f2;
  if (f2 == id) return f1;

  // Slide f2 to an equivalent form whose leading coefficient is coprime to
  // a1: f2 primitively represents integers prime to a1 at small arguments.
  // Among candidates in a small window take the least value.
  i64 x0 = 0, y0 = 0;
  i128 a2p = 0;
  for (int n = 1; n <= 64 && a2p == 0; ++n) {
    for (i64 x = -n; x <= n; ++x) {
      for (i64 y = -n; y <= n; ++y) {
        if (std::max(x < 0 ? -x : x, y < 0 ? -y : y) != n) continue;
        if (std::gcd(x, y) != 1) continue;
        i128 v = (i128)f2.a * x * x + (i128)f2.b * x * y + (i128)f2.c * y * y;
        if (gcd128(v, f1.a) != 1) continue;
        if (a2p == 0 || v < a2p) { a2p = v; x0 = x; y0 = y; }
      }
    }
  }
  if (a2p == 0) fail(Err::InternalError, "no coprime representation found");

  // Extend (x0, y0) to a determinant-1 matrix [[x0, r], [y0, s]].
  i128 u, v;
  extgcd(x0, y0, u, v);  // x0 u + y0 v = 1
  i128 s = u, r = -v;
  i128 b2p = 2 * (i128)f2.a * x0 * r + (i128)f2.b * (x0 * s + (i128)y0 * r) +
             2 * (i128)f2.c * y0 * s;

  // Concordant middle coefficient: B = b1 mod 2a1 and B = b2p mod 2a2p.
  // gcd(a1, a2p) = 1 and b1, b2p share parity with D, so CRT applies.
  i128 a1 = f1.a;
  i128 inv, tmp;
  extgcd(mod128(a1, a2p), a2p, inv, tmp);
  i128 k = mod128(((b2p - f1.b) / 2) % a2p * inv, a2p);
  i128 A = a1 * a2p;
  i128 B = mod128(f1.b + 2 * a1 * k, 2 * A);
  i128 C = (B * B - D) / (4 * A);
  return reduce128(A, B, C);
}

QuadForm form_pow(const QuadForm& f, u64 e) {
  QuadForm acc = identity_form(f.disc());
  QuadForm base = reduce(f);
  while (e) {
    if (e & 1) acc = compose(acc, base);
    base = compose(base, base);
    e >>= 1;
  }
  return acc;
}

u64 int_cap(u64 dflt) {
  if (const char* s = std::getenv("ISOLAB_INT_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return dflt;
}

ClassGroupTable enumerate_reduced(i64 D) {
  if (D >= 0) fail(Err::InternalError, "discriminant must be negative");
  i64 m4 = ((D % 4) + 4) % 4;
  if (m4 != 0 && m4 != 1) fail(Err::DiscriminantMismatch, "discriminant must be 0 or 1 mod 4");
  u64 cap = int_cap(1ull << 48);
  if ((u64)(-D) > cap) fail(Err::CapExceeded, "discriminant above enumeration cap");

  ClassGroupTable tab;
  tab.D = D;
  for (i64 a = 1; 3 * (i128)a * a <= -(i128)D; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      i128 num = (i128)b * b - D;
      if (num % (4 * (i128)a) != 0) continue;
      i64 c = narrow(num / (4 * a), "form c");
      if (c < a) continue;
      QuadForm f{a, b, c};
      if (!is_reduced(f)) continue;
      if (std::gcd(std::gcd(a, b), c) != 1) continue;
      tab.reduced_forms.push_back(f);
    }
  }
  std::sort(tab.reduced_forms.begin(), tab.reduced_forms.end());
  return tab;
}

QuadForm prime_form(i64 D, u64 ell, int sign, i64 t, i64 q) {
  if ((i128)t * t - 4 * (i128)q != D) fail(Err::DiscriminantMismatch, "t, q do not match D");
  // Solutions b in (0, 2 ell] of b^2 = D mod 4 ell correspond to the two
  // Frobenius eigenvalues; sign = +1 takes the smaller.
  std::vector<i64> sols;
  i64 L = (i64)ell;
  for (i64 b = 1; b <= 2 * L; ++b) {
    if (((i128)b * b - D) % (4 * (i128)L) != 0) continue;
    i64 c = narrow(((i128)b * b - D) / (4 * L), "form c");
    if (std::gcd(std::gcd(L, b), c) != 1) continue;  // ell divides the conductor
    sols.push_back(b);
  }
  if (sols.empty()) fail(Err::InertPrime, "prime " + std::to_string(ell) + " is inert");
  i64 b = sign >= 0 ? sols.front() : sols.back();
  return reduce(QuadForm{L, b, narrow(((i128)b * b - D) / (4 * L), "form c")});
}

IdealVector decompose(const QuadForm& target, const std::vector<u64>& basis, i64 t, i64 q) {
  i64 D = narrow((i128)t * t - 4 * (i128)q, "discriminant");
  QuadForm goal = reduce(target);
  if (goal.disc() != D) fail(Err::DiscriminantMismatch, "target discriminant mismatch");

  std::vector<u64> sorted = basis;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  struct Gen { u64 ell; int sign; QuadForm form; };
  std::vector<Gen> gens;
  for (u64 ell : sorted) {
    for (int sign : {+1, -1}) {
      try {
        gens.push_back(Gen{ell, sign, prime_form(D, ell, sign, t, q)});
      } catch (const Error& e) {
        if (e.code() != Err::InertPrime) throw;
      }
    }
  }
  if (gens.empty()) fail(Err::EmptyPrimeBasis, "no split or ramified primes in basis");

  QuadForm id = identity_form(D);
  std::map<QuadForm, std::pair<QuadForm, size_t>> parent;  // form -> (prev, gen idx)
  parent.emplace(id, std::make_pair(id, gens.size()));
  std::deque<QuadForm> queue{id};
  while (!queue.empty()) {
    QuadForm cur = queue.front();
    queue.pop_front();
    for (size_t i = 0; i < gens.size(); ++i) {
      QuadForm nxt = compose(cur, gens[i].form);
      if (parent.emplace(nxt, std::make_pair(cur, i)).second) queue.push_back(nxt);
    }
  }
  u64 h = enumerate_reduced(D).h();
  if (parent.size() != h || !parent.count(goal))
    fail(Err::NotGenerated, "basis does not generate the class group");

  std::map<std::pair<u64, int>, u64> counts;
  for (QuadForm cur = goal; !(cur == id);) {
    auto& [prev, gi] = parent.at(cur);
    counts[{gens[gi].ell, gens[gi].sign}]++;
    cur = prev;
  }
  IdealVector out;
  for (auto& [key, exp] : counts) {
    u64 e = exp;
    // A ramified prime has class order at most 2.
    if (prime_form(D, key.first, +1, t, q) == prime_form(D, key.first, -1, t, q)) e %= 2;
    if (e) out.entries.push_back(IdealEntry{key.first, key.second, e});
  }
  std::sort(out.entries.begin(), out.entries.end(), [](const IdealEntry& x, const IdealEntry& y) {
    return x.ell != y.ell ? x.ell < y.ell : x.sign > y.sign;
  });
  return out;
}

FrobeniusMatrix companion_matrix(i64 t, i64 q) { return FrobeniusMatrix{0, -q, 1, t, t, q}; }

namespace {

// Read the module column (a, b) with F(u) = a u + b v as the ideal class of
// (b, pi - a), i.e. the form (|b|, 2a - t mod 2|b|, *).
QuadForm column_class(i64 a, i64 b, i64 t, i64 q, i64 D) {
  if (b == 0) fail(Err::DegenerateBasis, "module basis column has b = 0");
  i128 fa = (i128)a * a - (i128)t * a + q;
  i64 A = b < 0 ? -b : b;
  if (fa % A != 0) fail(Err::NotAModuleMatrix, "column does not span a module");
  i128 twoA = 2 * (i128)A;
  i128 B = mod128(2 * (i128)a - t, twoA);
  if (B == 0) B = twoA;  // normalize into (0, 2|b|]
  i128 C = (B * B - D) / (4 * (i128)A);
  return reduce128(A, B, C);
}

}  // namespace

QuadForm deligne_to_class(const FrobeniusMatrix& M1, const FrobeniusMatrix& M2) {
  if (M1.t != M2.t || M1.q != M2.q)
    fail(Err::DiscriminantMismatch, "matrices have different (t, q)");
  i64 t = M1.t, q = M1.q;
  i64 D = narrow((i128)t * t - 4 * (i128)q, "discriminant");
  for (const FrobeniusMatrix* M : {&M1, &M2}) {
    if (M->m11 + M->m22 != t ||
        (i128)M->m11 * M->m22 - (i128)M->m12 * M->m21 != (i128)q)
      fail(Err::NotAModuleMatrix, "matrix trace or determinant off");
  }
  QuadForm c1 = column_class(M1.m11, M1.m21, t, q, D);
  QuadForm c2 = column_class(M2.m11, M2.m21, t, q, D);
  return reduce(compose(c1, invert(c2)));
}

FrobeniusMatrix class_to_module(const QuadForm& f, i64 t, i64 q) {
  i64 D = narrow((i128)t * t - 4 * (i128)q, "discriminant");
  QuadForm r = reduce(f);
  if (r.disc() != D) fail(Err::DiscriminantMismatch, "form discriminant is not t^2 - 4q");
  if (r == identity_form(D)) return companion_matrix(t, q);
  i64 s = (r.b + t) / 2;  // b and t share parity
  return FrobeniusMatrix{s, -r.c, r.a, t - s, t, q};
}

std::array<unsigned char, 48> form_encode(const QuadForm& f) {
  std::array<unsigned char, 48> out{};
  const i64 vals[3] = {f.a, f.b, f.c};
  for (int i = 0; i < 3; ++i) {
    u64 v = (u64)vals[i];
    unsigned char pad = vals[i] < 0 ? 0xFF : 0x00;
    for (int j = 0; j < 8; ++j) out[16 * i + j] = pad;
    for (int j = 0; j < 8; ++j) out[16 * i + 8 + j] = (unsigned char)(v >> (8 * (7 - j)));
  }
  return out;
}

}  // namespace isolab
