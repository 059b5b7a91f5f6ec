#include "isolab/isogeny.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "isolab/classgroup.hpp"

namespace isolab {

namespace {

FpPoly curve_cubic(const Curve& E) {
  return poly_from(E.p, {(i64)E.b, (i64)E.a, 0, 1});  // x^3 + a x + b
}

}  // namespace

std::vector<FpPoly> division_poly_table(const Curve& E, u64 n) {
  u64 p = E.p;
  u64 a = E.a, b = E.b;
  std::vector<FpPoly> w(std::max<u64>(n + 1, 5), poly_zero(p));
  w[0] = poly_zero(p);
  w[1] = poly_const(p, 1);
  w[2] = poly_const(p, 2);
  // w3 = 3x^4 + 6a x^2 + 12b x - a^2
  w[3] = poly_from(p, {0, 0, 0, 0, 3});
  w[3].c[2] = mulmod(6, a, p);
  w[3].c[1] = mulmod(12, b, p);
  w[3].c[0] = negmod(mulmod(a, a, p), p);
  w[3].trim();
  // w4 = 4(x^6 + 5a x^4 + 20b x^3 - 5a^2 x^2 - 4ab x - 8b^2 - a^3)
  {
    FpPoly v(p);
    v.c.assign(7, 0);
    v.c[6] = 1;
    v.c[4] = mulmod(5, a, p);
    v.c[3] = mulmod(20, b, p);
    v.c[2] = negmod(mulmod(5, mulmod(a, a, p), p), p);
    v.c[1] = negmod(mulmod(4, mulmod(a, b, p), p), p);
    v.c[0] = submod(negmod(mulmod(8, mulmod(b, b, p), p), p), mulmod(a, mulmod(a, a, p), p), p);
    w[4] = poly_scale(v, 4);
  }
  FpPoly f = curve_cubic(E);
  FpPoly f2 = poly_mul(f, f);
  u64 inv2 = invmod(2, p);
  for (u64 k = 5; k <= n; ++k) {
    if (k & 1) {
      u64 m = (k - 1) / 2;
      FpPoly lhs = poly_mul(w[m + 2], poly_mul(w[m], poly_mul(w[m], w[m])));
      FpPoly rhs = poly_mul(w[m - 1], poly_mul(w[m + 1], poly_mul(w[m + 1], w[m + 1])));
      w[k] = (m % 2 == 0) ? poly_sub(poly_mul(f2, lhs), rhs)
                          : poly_sub(lhs, poly_mul(f2, rhs));
    } else {
      u64 m = k / 2;
      FpPoly s = poly_sub(poly_mul(w[m + 2], poly_mul(w[m - 1], w[m - 1])),
                          poly_mul(w[m - 2], poly_mul(w[m + 1], w[m + 1])));
      w[k] = poly_scale(poly_mul(w[m], s), inv2);
    }
  }
  return w;
}

FpPoly division_poly(const Curve& E, u64 ell) {
  if (ell == E.p) fail(Err::EllEqualsP, "ell equals the field characteristic");
  if (ell < 3 || ell % 2 == 0 || !is_prime(ell))
    fail(Err::InternalError, "division_poly expects an odd prime");
  return division_poly_table(E, ell)[ell];
}

namespace {

// Division polynomials reduced modulo a fixed modulus polynomial, up to
// index n.  Same recurrences as the table, all products reduced.
std::vector<FpPoly> division_table_mod(const Curve& E, u64 n, const FpPoly& mod) {
  auto base = division_poly_table(E, std::min<u64>(n, 4));
  std::vector<FpPoly> w(n + 1, poly_zero(E.p));
  for (u64 k = 0; k <= std::min<u64>(n, 4); ++k) w[k] = poly_mod(base[k], mod);
  FpPoly f = poly_mod(curve_cubic(E), mod);
  FpPoly f2 = poly_mulmod(f, f, mod);
  u64 inv2 = invmod(2, E.p);
  auto mm = [&](const FpPoly& x, const FpPoly& y) { return poly_mulmod(x, y, mod); };
  for (u64 k = 5; k <= n; ++k) {
    if (k & 1) {
      u64 m = (k - 1) / 2;
      FpPoly lhs = mm(w[m + 2], mm(w[m], mm(w[m], w[m])));
      FpPoly rhs = mm(w[m - 1], mm(w[m + 1], mm(w[m + 1], w[m + 1])));
      w[k] = (m % 2 == 0) ? poly_sub(mm(f2, lhs), rhs) : poly_sub(lhs, mm(f2, rhs));
    } else {
      u64 m = k / 2;
      FpPoly s = poly_sub(mm(w[m + 2], mm(w[m - 1], w[m - 1])),
                          mm(w[m - 2], mm(w[m + 1], w[m + 1])));
      w[k] = poly_scale(mm(w[m], s), inv2);
    }
  }
  return w;
}

}  // namespace

KernelPoly eigen_kernel(const Curve& E, u64 ell, u64 mu) {
  u64 p = E.p;
  if (ell == p) fail(Err::EllEqualsP, "ell equals the field characteristic");
  if (ell < 3 || ell % 2 == 0 || !is_prime(ell))
    fail(Err::InternalError, "eigen_kernel expects an odd prime");

  i64 t = (i64)(p + 1) - (i64)count_points(E);
  SplitType split = frobenius_roots_mod_ell(t, (i64)p, ell);
  if (split.kind == SplitType::Inert)
    fail(Err::InertPrime, "prime " + std::to_string(ell) + " is inert");
  mu %= ell;
  if (mu != split.mu && !(split.kind == SplitType::Split && mu == split.mu_bar))
    fail(Err::BadEigenvalue, "mu is not a Frobenius eigenvalue mod ell");
  if (mu == 0) fail(Err::BadEigenvalue, "zero eigenvalue");

  FpPoly psi = division_poly(E, ell);
  FpPoly psi_monic = poly_monic(psi);

  auto w = division_table_mod(E, 2 * mu + 2, psi_monic);
  FpPoly f = poly_mod(curve_cubic(E), psi_monic);
  FpPoly xp = poly_powmod(poly_x(p), p, psi_monic);

  // x-coordinate test: roots of gcd are x-coords with pi(P) = [+-mu]P
  FpPoly wmu2 = poly_mulmod(w[mu], w[mu], psi_monic);
  FpPoly cross = poly_mulmod(w[mu - 1], w[mu + 1], psi_monic);
  FpPoly diff = poly_sub(xp, poly_mod(poly_x(p), psi_monic));
  FpPoly nx;
  if (mu % 2 == 1)
    nx = poly_add(poly_mulmod(diff, wmu2, psi_monic), poly_mulmod(f, cross, psi_monic));
  else
    nx = poly_add(poly_mulmod(diff, poly_mulmod(f, wmu2, psi_monic), psi_monic), cross);
  FpPoly g = poly_gcd(psi_monic, nx);

  u64 d = (ell - 1) / 2;
  // y-coordinate test polynomial: 2 w_mu^4 f^{(p-1)/2} (f^2 if mu even) - w_{2mu}
  auto ytest = [&](const FpPoly& h) {
    auto wh = division_table_mod(E, 2 * mu, h);
    FpPoly fh = poly_mod(curve_cubic(E), h);
    FpPoly fp = poly_powmod(fh, (p - 1) / 2, h);
    FpPoly w4 = poly_mulmod(poly_mulmod(wh[mu], wh[mu], h), poly_mulmod(wh[mu], wh[mu], h), h);
    FpPoly lhs = poly_scale(poly_mulmod(w4, fp, h), 2);
    if (mu % 2 == 0) lhs = poly_mulmod(lhs, poly_mulmod(fh, fh, h), h);
    return poly_sub(lhs, wh[2 * mu]);
  };

  FpPoly h = g;
  if ((u64)g.degree() == 2 * d) {
    // t = 0 mod ell: the x-test catches both eigenvalues; split with the
    // y-test inside the quotient by g.
    h = poly_gcd(g, ytest(g));
  }
  if ((u64)h.degree() != d)
    fail(Err::InternalError, "eigenspace kernel has unexpected degree");
  h = poly_monic(h);

  // verify both coordinates modulo (h, y^2 - f)
  FpPoly xph = poly_powmod(poly_x(p), p, h);
  auto wv = division_table_mod(E, mu + 2, h);
  FpPoly fv = poly_mod(curve_cubic(E), h);
  FpPoly wmu2v = poly_mulmod(wv[mu], wv[mu], h);
  FpPoly crossv = poly_mulmod(wv[mu - 1], wv[mu + 1], h);
  FpPoly lhsx, rhsx;
  if (mu % 2 == 1) {
    lhsx = poly_mulmod(xph, wmu2v, h);
    rhsx = poly_sub(poly_mulmod(poly_x(p), wmu2v, h), poly_mulmod(fv, crossv, h));
  } else {
    FpPoly fw = poly_mulmod(fv, wmu2v, h);
    lhsx = poly_mulmod(xph, fw, h);
    rhsx = poly_sub(poly_mulmod(poly_x(p), fw, h), crossv);
  }
  if (!(poly_sub(lhsx, rhsx).is_zero() && ytest(h).is_zero()))
    fail(Err::InternalError, "eigenvalue verification failed");

  return KernelPoly{h, ell, mu};
}

IsogenyStep velu_step(const Curve& E, const KernelPoly& k) {
  u64 p = E.p;
  u64 d = (k.ell - 1) / 2;
  if (k.h.p != p || (u64)k.h.degree() != d || k.h.lead() != 1)
    fail(Err::InvalidKernel, "kernel polynomial is not monic of degree (ell-1)/2");
  if (!poly_mod(division_poly(E, k.ell), k.h).is_zero())
    fail(Err::InvalidKernel, "kernel polynomial does not divide psi_ell");

  // power sums p_0..p_3 of the kernel roots via Newton's identities
  std::vector<u64> e(d + 1, 0);  // elementary symmetric, e[i] with sign folded in
  for (u64 i = 1; i <= d; ++i) {
    u64 c = k.h.coeff(d - i);
    e[i] = (i % 2) ? negmod(c, p) : c;  // e_i = (-1)^i h_{d-i}
  }
  std::vector<u64> ps(4, 0);
  ps[0] = d % p;
  for (u64 n = 1; n <= 3; ++n) {
    u64 acc = 0;
    for (u64 i = 1; i < n && i <= d; ++i) {
      u64 term = mulmod(e[i], ps[n - i], p);
      acc = (i % 2) ? addmod(acc, term, p) : submod(acc, term, p);
    }
    if (n <= d) {
      u64 term = mulmod(n % p, e[n], p);
      acc = (n % 2) ? addmod(acc, term, p) : submod(acc, term, p);
    }
    ps[n] = acc;
  }

  u64 A = E.a, B = E.b;
  u64 tv = addmod(mulmod(6, ps[2], p), mulmod(2, mulmod(ps[0], A, p), p), p);
  u64 wv = addmod(addmod(mulmod(10, ps[3], p), mulmod(6, mulmod(A, ps[1], p), p), p),
                  mulmod(4, mulmod(ps[0], B, p), p), p);
  Curve E2 = make_curve(p, submod(A, mulmod(5, tv, p), p), submod(B, mulmod(7, wv, p), p));

  // X = x + sum_i a(x_i)/(x - x_i) + b(x_i)/(x - x_i)^2 with a(X) = 6X^2+2A,
  // b(X) = 4f(X); numerators over powers of h via power sums:
  //   sum g(x_i)/(x - x_i) = (g h' - h G_g)/h,  G_g = sum_i (g(x)-g(x_i))/(x-x_i)
  FpPoly hp = poly_derivative(k.h);
  auto G_of = [&](const FpPoly& g) {
    // G_g = sum_k g_k sum_{j<k} x^j p_{k-1-j}
    FpPoly G(p);
    G.c.assign(std::max(g.degree(), 1), 0);
    for (size_t kk = 1; kk < g.c.size(); ++kk)
      for (size_t j = 0; j < kk; ++j)
        G.c[j] = addmod(G.c[j], mulmod(g.c[kk], ps[kk - 1 - j], p), p);
    G.trim();
    return G;
  };
  FpPoly apoly = poly_from(p, {0, 0, 6});
  apoly.c[0] = mulmod(2, A, p);
  apoly.trim();
  FpPoly bpoly = poly_scale(curve_cubic(E), 4);

  FpPoly Ua = poly_sub(poly_mul(apoly, hp), poly_mul(k.h, G_of(apoly)));
  FpPoly Ub = poly_sub(poly_mul(bpoly, hp), poly_mul(k.h, G_of(bpoly)));
  // sum b(x_i)/(x-x_i)^2 = (Ub h' - Ub' h)/h^2
  FpPoly h2 = poly_mul(k.h, k.h);
  FpPoly N = poly_add(poly_mul(poly_x(p), h2), poly_mul(Ua, k.h));
  N = poly_add(N, poly_sub(poly_mul(Ub, hp), poly_mul(poly_derivative(Ub), k.h)));

  RationalMap map;
  map.num_x = N;
  map.den_x = h2;
  map.num_y = poly_sub(poly_mul(poly_derivative(N), k.h), poly_scale(poly_mul(N, hp), 2));
  map.den_y = poly_mul(h2, k.h);

  IsogenyStep step{E, E2, k, map};
  // spot check: the map must land on the codomain
  std::mt19937_64 rng(0xA11CEull ^ p ^ E.a ^ (E.b << 16) ^ (k.ell << 32));
  for (int i = 0; i < 4; ++i) {
    Point P = random_point(E, rng);
    Point Q = apply_step(step, P);
    if (!on_curve(E2, Q)) fail(Err::InternalError, "isogeny image off the codomain");
  }
  return step;
}

Point apply_step(const IsogenyStep& s, const Point& P) {
  if (P.inf) return Point::infinity();
  u64 p = s.domain.p;
  if (poly_eval(s.kernel.h, P.x) == 0) return Point::infinity();
  u64 dx = poly_eval(s.map.den_x, P.x);
  u64 X = mulmod(poly_eval(s.map.num_x, P.x), invmod(dx, p), p);
  u64 dy = poly_eval(s.map.den_y, P.x);
  u64 Y = mulmod(P.y, mulmod(poly_eval(s.map.num_y, P.x), invmod(dy, p), p), p);
  return Point::at(X, Y);
}

u64 oriented_eigenvalue(i64 t, i64 q, u64 ell, int sign) {
  SplitType split = frobenius_roots_mod_ell(t, q, ell);
  if (split.kind == SplitType::Inert)
    fail(Err::InertPrime, "prime " + std::to_string(ell) + " is inert");
  auto bval = [&](u64 mu) {
    i64 twol = 2 * (i64)ell;
    i64 b = ((2 * (i64)mu - t) % twol + twol) % twol;
    return b == 0 ? twol : b;
  };
  if (split.kind == SplitType::Ramified) return split.mu;
  u64 b1 = bval(split.mu), b2 = bval(split.mu_bar);
  if (b1 == b2) return split.mu;
  bool take_first = (b1 < b2) == (sign >= 0);
  return take_first ? split.mu : split.mu_bar;
}

namespace {

std::mutex g_step_mutex;
std::map<std::tuple<u64, u64, u64, u64, int>, Curve> g_step_cache;

}  // namespace

Curve apply_prime(const Curve& E, u64 ell, int sign) {
  {
    std::lock_guard<std::mutex> lk(g_step_mutex);
    auto it = g_step_cache.find({E.p, E.a, E.b, ell, sign});
    if (it != g_step_cache.end()) return it->second;
  }
  i64 t = (i64)(E.p + 1) - (i64)count_points(E);
  u64 mu = oriented_eigenvalue(t, (i64)E.p, ell, sign);
  Curve out = velu_step(E, eigen_kernel(E, ell, mu)).codomain;
  std::lock_guard<std::mutex> lk(g_step_mutex);
  g_step_cache.emplace(std::make_tuple(E.p, E.a, E.b, ell, sign), out);
  return out;
}

Curve apply_ideal_vector(const Curve& E, const IdealVector& v) {
  Curve cur = E;
  for (const auto& e : v.entries)
    for (u64 i = 0; i < e.exp; ++i) cur = apply_prime(cur, e.ell, e.sign);
  return cur;
}

std::vector<u64> walk_prime_basis(i64 D, const WalkParams& params) {
  if (D >= 0) fail(Err::InternalError, "discriminant must be negative");
  double logd = std::log((double)(-D));
  u64 bound = (u64)std::max(std::pow(logd, params.B), (double)params.floor_min);
  if (params.prime_cap) bound = std::min(bound, *params.prime_cap);
  std::vector<u64> basis;
  for (u64 ell = 3; ell <= bound; ++ell)
    if (is_prime(ell) && legendre(D, ell) == 1) basis.push_back(ell);
  if (basis.empty()) fail(Err::EmptyPrimeBasis, "no split primes below the walk bound");
  return basis;
}

IdealVector sample_walk(i64 D, const WalkParams& params, std::mt19937_64& rng) {
  if (params.eps <= 0) fail(Err::InternalError, "eps must be positive");
  auto basis = walk_prime_basis(D, params);
  double logd = std::log((double)(-D));
  double loglog = std::max(1.0, std::log(logd));
  u64 r = (u64)std::ceil(params.C * (params.delta + 0.5 * logd) / (params.eps * loglog));

  std::map<std::pair<u64, int>, u64> counts;
  for (u64 i = 0; i < r; ++i) {
    u64 pick = rand_below(rng, 2 * basis.size());
    counts[{basis[pick / 2], pick % 2 == 0 ? +1 : -1}]++;
  }
  IdealVector out;
  for (auto& [key, exp] : counts) out.entries.push_back(IdealEntry{key.first, key.second, exp});
  std::sort(out.entries.begin(), out.entries.end(), [](const IdealEntry& x, const IdealEntry& y) {
    return x.ell != y.ell ? x.ell < y.ell : x.sign > y.sign;
  });
  return out;
}

}  // namespace isolab
