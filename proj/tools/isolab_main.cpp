// isolab: batch front end. JSON in, JSON out, explicit seeds everywhere.
#include <sys/stat.h>

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>

#include "isolab/errors.hpp"
#include "isolab/json_io.hpp"
#include "isolab/mixing.hpp"
#include "isolab/products.hpp"
#include "isolab/protocols.hpp"
#include "isolab/thetacount.hpp"

using namespace isolab;

namespace {

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::InternalError, "cannot read " + path);
  json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const json& j, bool restrict_perms = false) {
  {
    std::ofstream out(path);
    if (!out) fail(Err::InternalError, "cannot write " + path);
    out << j.dump(2) << "\n";
  }
  if (restrict_perms) ::chmod(path.c_str(), 0600);
}

std::vector<int> parse_bits(const std::string& s) {
  std::vector<int> bits;
  for (char c : s) {
    if (c != '0' && c != '1') fail(Err::MessageLength, "message must be a 0/1 string");
    bits.push_back(c - '0');
  }
  return bits;
}

DiscriminantPolicy parse_policy(const std::string& s) {
  if (s == "any") return DiscriminantPolicy::AnyFundamental;
  if (s == "prime") return DiscriminantPolicy::PrimeDiscriminant;
  if (s == "near-prime") return DiscriminantPolicy::SmallSquarefreeTimesPrime;
  fail(Err::SearchExhausted, "unknown policy: " + s);
}

WalkParams walk_flags(CLI::App* cmd, std::shared_ptr<WalkParams> w,
                      std::shared_ptr<i64> cap) {
  cmd->add_option("--walk-B", w->B, "split-prime bound exponent");
  cmd->add_option("--walk-eps", w->eps, "closeness target");
  cmd->add_option("--walk-delta", w->delta, "slack term");
  cmd->add_option("--walk-C", w->C, "walk-length constant");
  cmd->add_option("--prime-cap", *cap, "upper clamp on walk primes");
  return *w;
}

WalkParams resolve_walk(const WalkParams& w, i64 cap) {
  WalkParams out = w;
  if (cap > 0) out.prime_cap = (u64)cap;
  return out;
}

PublicParams load_params(const json& base_json, const WalkParams& w, i64 cap) {
  return params_from_curve(curve_from_json(base_json), resolve_walk(w, cap));
}

std::vector<QuadForm> forms_from_json(const json& j) {
  std::vector<QuadForm> out;
  for (const auto& e : j) out.push_back(form_from_json(e));
  return out;
}

SubgroupDescriptor desc_from_json(const json& j) {
  return SubgroupDescriptor{ideal_from_json(j)};
}

FrobeniusMatrix matrix_from_json(const json& j, i64 t, i64 q) {
  return FrobeniusMatrix{j.at(0).at(0).get<i64>(), j.at(0).at(1).get<i64>(),
                         j.at(1).at(0).get<i64>(), j.at(1).at(1).get<i64>(), t, q};
}

json to_json(const FrobeniusMatrix& M) {
  return json::array({json::array({M.m11, M.m12}), json::array({M.m21, M.m22})});
}

json sigkeys_to_json(const SigKeys& keys) {
  json secrets = json::array(), publics = json::array();
  for (const auto& g : keys.secrets)
    secrets.push_back(json::array({to_json(g[0]), to_json(g[1])}));
  for (const auto& y : keys.publics)
    publics.push_back(json::array({to_json(y[0]), to_json(y[1])}));
  return json{{"x", to_json(keys.x)}, {"secrets", secrets}, {"publics", publics}};
}

SigKeys sigkeys_from_json(const json& j) {
  SigKeys keys;
  keys.x = curve_from_json(j.at("x"));
  for (const auto& g : j.at("secrets"))
    keys.secrets.push_back({ideal_from_json(g.at(0)), ideal_from_json(g.at(1))});
  for (const auto& y : j.at("publics"))
    keys.publics.push_back({curve_from_json(y.at(0)), curve_from_json(y.at(1))});
  return keys;
}

std::vector<std::array<Curve, 2>> publics_from_json(const json& j) {
  std::vector<std::array<Curve, 2>> out;
  for (const auto& y : j) out.push_back({curve_from_json(y.at(0)), curve_from_json(y.at(1))});
  return out;
}

json prfkey_to_json(const PRFKey& k) {
  json d = json::array();
  for (const auto& pair : k.d) d.push_back(json::array({to_json(pair[0]), to_json(pair[1])}));
  return json{{"alpha", to_json(k.alpha)}, {"d", d}, {"n", k.n}};
}

PRFKey prfkey_from_json(const json& j) {
  PRFKey k;
  k.alpha = ideal_from_json(j.at("alpha"));
  for (const auto& pair : j.at("d"))
    k.d.push_back({ideal_from_json(pair.at(0)), ideal_from_json(pair.at(1))});
  k.n = j.at("n").get<size_t>();
  return k;
}

json ck_to_json(const ConstrainedKey& ck) {
  json v = json::array(), D = json::array(), h = json::array();
  for (size_t i : ck.V) v.push_back(json::array({i, ck.v.at(i)}));
  for (const auto& [i, pair] : ck.D_curves)
    D.push_back(json::array({i, to_json(pair[0]), to_json(pair[1])}));
  for (const auto& [i, c] : ck.h) h.push_back(json::array({i, to_json(c)}));
  return json{{"v", v}, {"D", D}, {"h", h}, {"n", ck.n}};
}

ConstrainedKey ck_from_json(const json& j) {
  ConstrainedKey ck;
  ck.n = j.at("n").get<size_t>();
  for (const auto& e : j.at("v")) {
    size_t i = e.at(0).get<size_t>();
    ck.V.push_back(i);
    ck.v[i] = e.at(1).get<int>();
  }
  for (const auto& e : j.at("D"))
    ck.D_curves[e.at(0).get<size_t>()] = {curve_from_json(e.at(1)), curve_from_json(e.at(2))};
  for (const auto& e : j.at("h")) ck.h[e.at(0).get<size_t>()] = curve_from_json(e.at(1));
  return ck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale class-group action laboratory"};
  app.require_subcommand(1);

  // shared option storage; each pointer lives as long as the app
  auto seed = std::make_shared<u64>(0);
  auto bits = std::make_shared<int>(12);
  auto policy = std::make_shared<std::string>("any");
  auto curve_str = std::make_shared<std::string>();
  auto base_str = std::make_shared<std::string>();
  auto aux_str = std::make_shared<std::string>();
  auto aux2_str = std::make_shared<std::string>();
  auto D = std::make_shared<i64>(0);
  auto tt = std::make_shared<i64>(0);
  auto qq = std::make_shared<i64>(0);
  auto walk = std::make_shared<WalkParams>();
  auto cap = std::make_shared<i64>(0);
  auto bound = std::make_shared<u64>(50);
  auto nn = std::make_shared<u64>(0);
  auto mm = std::make_shared<u64>(0);
  auto hh = std::make_shared<i64>(-1);
  auto idx = std::make_shared<u64>(0);
  auto path1 = std::make_shared<std::string>();
  auto path2 = std::make_shared<std::string>();
  auto msg = std::make_shared<std::string>();
  auto lambda = std::make_shared<std::string>("toy");
  auto samples = std::make_shared<int>(20);
  int rc = 0;
  auto run = [&](std::function<void()> f) {
    return [&, f]() {
      try {
        f();
      } catch (const Error& e) {
        emit(json{{"error", {{"code", err_name(e.code())}, {"message", e.what()}}}});
        rc = 1;
      }
    };
  };

  // gen: random instance
  auto* gen = app.add_subcommand("gen", "sample an ordinary curve; JSON {curve, frobenius, seed}");
  gen->add_option("--bits", *bits, "field size in bits (8..24)")->required();
  gen->add_option("--seed", *seed, "rng seed")->required();
  gen->add_option("--policy", *policy, "any | prime | near-prime");
  gen->callback(run([&] {
    std::mt19937_64 rng(*seed);
    auto [E, fd] = mapgen(*bits, parse_policy(*policy), rng);
    emit(json{{"seed", *seed}, {"curve", to_json(E)}, {"frobenius", to_json(fd)}});
  }));

  // count
  auto* count = app.add_subcommand("count", "exact point count; JSON {N, frobenius}");
  count->add_option("--curve", *curve_str, "curve JSON")->required();
  count->callback(run([&] {
    Curve E = curve_from_json(json::parse(*curve_str));
    emit(json{{"N", count_points(E)}, {"frobenius", to_json(frobenius_data(E))}});
  }));

  // class: enumerate / compose / reduce
  auto* cls = app.add_subcommand("class", "class-group arithmetic on reduced forms");
  auto* cls_enum = cls->add_subcommand("enumerate", "all reduced forms; JSON {D, h, forms}");
  cls_enum->add_option("--D", *D, "negative discriminant")->required();
  cls_enum->callback(run([&] {
    ClassGroupTable cg = enumerate_reduced(*D);
    json forms = json::array();
    for (const auto& f : cg.reduced_forms) forms.push_back(to_json(f));
    emit(json{{"D", *D}, {"h", cg.h()}, {"forms", forms}});
  }));
  auto* cls_comp = cls->add_subcommand("compose", "Gauss composition; JSON {form}");
  cls_comp->add_option("--f", *aux_str, "form JSON")->required();
  cls_comp->add_option("--g", *aux2_str, "form JSON")->required();
  cls_comp->callback(run([&] {
    emit(json{{"form", to_json(compose(form_from_json(json::parse(*aux_str)),
                                       form_from_json(json::parse(*aux2_str))))}});
  }));
  auto* cls_red = cls->add_subcommand("reduce", "Gauss reduction; JSON {form}");
  cls_red->add_option("--f", *aux_str, "form JSON")->required();
  cls_red->callback(run([&] {
    emit(json{{"form", to_json(reduce(form_from_json(json::parse(*aux_str))))}});
  }));

  // walk
  auto* walk_cmd = app.add_subcommand("walk", "sample a walk word; JSON {seed, basis, walk}");
  walk_cmd->add_option("--D", *D, "negative discriminant")->required();
  walk_cmd->add_option("--seed", *seed, "rng seed")->required();
  walk_flags(walk_cmd, walk, cap);
  walk_cmd->callback(run([&] {
    std::mt19937_64 rng(*seed);
    WalkParams w = resolve_walk(*walk, *cap);
    emit(json{{"seed", *seed},
              {"basis", walk_prime_basis(*D, w)},
              {"walk", to_json(sample_walk(*D, w, rng))}});
  }));

  // act
  auto* act = app.add_subcommand("act", "apply an ideal word to a curve; JSON {curve}");
  act->add_option("--curve", *curve_str, "curve JSON")->required();
  act->add_option("--ideal", *aux_str, "ideal word JSON [[ell,sign,exp],...]")->required();
  act->callback(run([&] {
    Curve E = curve_from_json(json::parse(*curve_str));
    emit(json{{"curve", to_json(apply_ideal_vector(E, ideal_from_json(json::parse(*aux_str))))}});
  }));

  // table
  auto* table = app.add_subcommand("table", "orbit table; JSON {base, D, entries}");
  table->add_option("--curve", *curve_str, "base curve JSON")->required();
  table->add_option("--bound", *bound, "prime bound for the BFS");
  table->callback(run([&] {
    emit(to_json(build_orbit_table(curve_from_json(json::parse(*curve_str)), *bound)));
  }));

  // nike
  auto* nike = app.add_subcommand("nike", "n-party key exchange");
  auto* nsetup = nike->add_subcommand("setup", "JSON {seed, lambda, base, D, h}");
  nsetup->add_option("--lambda", *lambda, "toy (12 bits) | small (20 bits)");
  nsetup->add_option("--seed", *seed, "rng seed")->required();
  nsetup->callback(run([&] {
    std::mt19937_64 rng(*seed);
    PublicParams pp = nike_setup(*lambda, rng);
    emit(json{{"seed", *seed},
              {"lambda", *lambda},
              {"base", to_json(pp.x)},
              {"D", pp.table.D},
              {"h", pp.table.size()}});
  }));
  auto* npub = nike->add_subcommand("publish", "JSON {party, share}; secret to --secret-out");
  npub->add_option("--base", *base_str, "base curve JSON")->required();
  npub->add_option("--seed", *seed, "rng seed")->required();
  npub->add_option("--party", *idx, "party index");
  npub->add_option("--secret-out", *path1, "secret key file (mode 0600)")->required();
  walk_flags(npub, walk, cap);
  npub->callback(run([&] {
    PublicParams pp = load_params(json::parse(*base_str), *walk, *cap);
    std::mt19937_64 rng(*seed);
    auto [secret, share] = nike_publish(pp, rng);
    write_json_file(*path1, json{{"secret", to_json(secret.g)}}, true);
    emit(json{{"seed", *seed}, {"party", *idx}, {"share", to_json(share)}});
  }));
  auto* nder = nike->add_subcommand("derive", "JSON {invariant, key}");
  nder->add_option("--base", *base_str, "base curve JSON")->required();
  nder->add_option("--index", *idx, "this party's index in the board")->required();
  nder->add_option("--secret", *path1, "secret key file")->required();
  nder->add_option("--board", *path2, "bulletin board file")->required();
  walk_flags(nder, walk, cap);
  nder->callback(run([&] {
    PublicParams pp = load_params(json::parse(*base_str), *walk, *cap);
    PartySecret secret{ideal_from_json(read_json_file(*path1).at("secret"))};
    json board = read_json_file(*path2);
    std::vector<Curve> shares(board.size(), Curve{});
    for (const auto& e : board) shares.at(e.at("party").get<size_t>()) = curve_from_json(e.at("share"));
    DerivedKey k = nike_derive(pp, *idx, secret, shares);
    emit(json{{"invariant", to_json(k.value)}, {"key", hex_encode(k.key.data(), k.key.size())}});
  }));

  // sign
  auto* sign = app.add_subcommand("sign", "unique signatures");
  auto* skeygen = sign->add_subcommand("keygen", "JSON {publics}; full keys to --keys-out");
  skeygen->add_option("--base", *base_str, "base curve JSON")->required();
  skeygen->add_option("--n", *nn, "message length")->required();
  skeygen->add_option("--seed", *seed, "rng seed")->required();
  skeygen->add_option("--keys-out", *path1, "key file (mode 0600)")->required();
  walk_flags(skeygen, walk, cap);
  skeygen->callback(run([&] {
    PublicParams pp = load_params(json::parse(*base_str), *walk, *cap);
    std::mt19937_64 rng(*seed);
    SigKeys keys = sig_keygen(pp, *nn, rng);
    json full = sigkeys_to_json(keys);
    write_json_file(*path1, full, true);
    emit(json{{"seed", *seed}, {"x", full.at("x")}, {"publics", full.at("publics")}});
  }));
  auto* ssign = sign->add_subcommand("sign", "JSON {sigma}");
  ssign->add_option("--base", *base_str, "base curve JSON")->required();
  ssign->add_option("--keys", *path1, "key file from keygen")->required();
  ssign->add_option("--message", *msg, "bit string")->required();
  walk_flags(ssign, walk, cap);
  ssign->callback(run([&] {
    PublicParams pp = load_params(json::parse(*base_str), *walk, *cap);
    SigKeys keys = sigkeys_from_json(read_json_file(*path1));
    emit(json{{"sigma", to_json(sig_sign(pp, keys, parse_bits(*msg)))}});
  }));
  auto* sver = sign->add_subcommand("verify", "JSON {valid}");
  sver->add_option("--base", *base_str, "base curve JSON")->required();
  sver->add_option("--publics", *aux_str, "publics JSON from keygen")->required();
  sver->add_option("--message", *msg, "bit string")->required();
  sver->add_option("--sigma", *curve_str, "signature curve JSON")->required();
  walk_flags(sver, walk, cap);
  sver->callback(run([&] {
    PublicParams pp = load_params(json::parse(*base_str), *walk, *cap);
    bool ok = sig_verify(pp, publics_from_json(json::parse(*aux_str)), parse_bits(*msg),
                         curve_from_json(json::parse(*curve_str)));
    emit(json{{"valid", ok}});
  }));

  // prf
  auto* prf = app.add_subcommand("prf", "bit-fixing constrained PRF");
  auto* psetup = prf->add_subcommand("setup", "key to --key-out; JSON {n}");
  psetup->add_option("--base", *base_str, "base curve JSON")->required();
  psetup->add_option("--n", *nn, "input length")->required();
  psetup->add_option("--seed", *seed, "rng seed")->required();
  psetup->add_option("--key-out", *path1, "key file (mode 0600)")->required();
  walk_flags(psetup, walk, cap);
  psetup->callback(run([&] {
    PublicParams pp = load_params(json::parse(*base_str), *walk, *cap);
    std::mt19937_64 rng(*seed);
    write_json_file(*path1, prfkey_to_json(prf_setup(pp, *nn, rng)), true);
    emit(json{{"seed", *seed}, {"n", *nn}});
  }));
  auto* peval = prf->add_subcommand("eval", "JSON {value}");
  peval->add_option("--base", *base_str, "base curve JSON")->required();
  peval->add_option("--key", *path1, "key file")->required();
  peval->add_option("--input", *msg, "bit string")->required();
  walk_flags(peval, walk, cap);
  peval->callback(run([&] {
    PublicParams pp = load_params(json::parse(*base_str), *walk, *cap);
    PRFKey k = prfkey_from_json(read_json_file(*path1));
    emit(json{{"value", to_json(prf_eval(pp, k, parse_bits(*msg)))}});
  }));
  auto* pcon = prf->add_subcommand("constrain", "constrained key to --ck-out");
  pcon->add_option("--base", *base_str, "base curve JSON")->required();
  pcon->add_option("--key", *path1, "key file")->required();
  pcon->add_option("--fix", *aux_str, "JSON [[index, bit], ...]")->required();
  pcon->add_option("--seed", *seed, "rng seed")->required();
  pcon->add_option("--ck-out", *path2, "constrained key file")->required();
  walk_flags(pcon, walk, cap);
  pcon->callback(run([&] {
    PublicParams pp = load_params(json::parse(*base_str), *walk, *cap);
    PRFKey k = prfkey_from_json(read_json_file(*path1));
    std::vector<size_t> V;
    std::map<size_t, int> v;
    for (const auto& e : json::parse(*aux_str)) {
      V.push_back(e.at(0).get<size_t>());
      v[e.at(0).get<size_t>()] = e.at(1).get<int>();
    }
    std::mt19937_64 rng(*seed);
    write_json_file(*path2, ck_to_json(prf_constrain(pp, k, V, v, rng)));
    emit(json{{"seed", *seed}, {"fixed", json::parse(*aux_str)}});
  }));
  auto* pceval = prf->add_subcommand("ceval", "JSON {value} or {value: null} off-slice");
  pceval->add_option("--base", *base_str, "base curve JSON")->required();
  pceval->add_option("--ck", *path2, "constrained key file")->required();
  pceval->add_option("--input", *msg, "bit string")->required();
  walk_flags(pceval, walk, cap);
  pceval->callback(run([&] {
    PublicParams pp = load_params(json::parse(*base_str), *walk, *cap);
    ConstrainedKey ck = ck_from_json(read_json_file(*path2));
    auto v = prf_eval_constrained(pp, ck, parse_bits(*msg));
    emit(json{{"value", v ? to_json(*v) : json(nullptr)}});
  }));

  // products
  auto* prod = app.add_subcommand("products", "product-variety isomorphisms");
  auto* pbuild = prod->add_subcommand("verify", "JSON {a, b, ok, vacuous}");
  pbuild->add_option("--curve", *curve_str, "curve JSON")->required();
  pbuild->add_option("--k1", *aux_str, "kernel word JSON")->required();
  pbuild->add_option("--k2", *aux2_str, "kernel word JSON")->required();
  pbuild->add_option("--samples", *samples, "sample points per direction");
  pbuild->add_option("--seed", *seed, "rng seed")->required();
  pbuild->callback(run([&] {
    Curve E = curve_from_json(json::parse(*curve_str));
    IsogenyMatrixPair pair = build_product_isomorphism(
        E, desc_from_json(json::parse(*aux_str)), desc_from_json(json::parse(*aux2_str)));
    std::mt19937_64 rng(*seed);
    VerifyResult res = verify_matrix_identity(pair, *samples, rng);
    emit(json{{"seed", *seed},
              {"m1", pair.m1},
              {"m2", pair.m2},
              {"a", pair.a},
              {"b", pair.b},
              {"ok", res.ok},
              {"vacuous", res.vacuous}});
  }));
  auto* pclass = prod->add_subcommand("classcheck", "JSON {isomorphic}");
  pclass->add_option("--classes1", *aux_str, "form list JSON")->required();
  pclass->add_option("--classes2", *aux2_str, "form list JSON")->required();
  pclass->callback(run([&] {
    bool eq = check_class_condition(forms_from_json(json::parse(*aux_str)),
                                    forms_from_json(json::parse(*aux2_str)));
    emit(json{{"isomorphic", eq}});
  }));
  auto* pcop = prod->add_subcommand("coprime", "JSON {words}");
  pcop->add_option("--classes", *aux_str, "form list JSON")->required();
  pcop->add_option("--t", *tt, "Frobenius trace")->required();
  pcop->add_option("--q", *qq, "field size")->required();
  pcop->callback(run([&] {
    json words = json::array();
    for (const auto& w : coprime_representatives(forms_from_json(json::parse(*aux_str)), *tt, *qq))
      words.push_back(to_json(w));
    emit(json{{"words", words}});
  }));

  // deligne
  auto* del = app.add_subcommand("deligne", "Frobenius-module reduction");
  auto* dclass = del->add_subcommand("to-class", "JSON {form}");
  dclass->add_option("--matrix", *aux_str, "2x2 integer matrix JSON")->required();
  dclass->add_option("--t", *tt, "Frobenius trace")->required();
  dclass->add_option("--q", *qq, "field size")->required();
  dclass->callback(run([&] {
    FrobeniusMatrix M = matrix_from_json(json::parse(*aux_str), *tt, *qq);
    emit(json{{"form", to_json(deligne_to_class(M, companion_matrix(*tt, *qq)))}});
  }));
  auto* dmod = del->add_subcommand("to-module", "JSON {matrix}");
  dmod->add_option("--form", *aux_str, "form JSON")->required();
  dmod->add_option("--t", *tt, "Frobenius trace")->required();
  dmod->add_option("--q", *qq, "field size")->required();
  dmod->callback(run([&] {
    FrobeniusMatrix M = class_to_module(form_from_json(json::parse(*aux_str)), *tt, *qq);
    emit(json{{"matrix", to_json(M)}});
  }));

  // theta-bounds
  auto* theta = app.add_subcommand("theta-bounds", "JSON {sp_order, bound[, feasible]}");
  theta->set_help_flag("--help", "print help");  // frees -h so --h can be the class number
  theta->add_option("--n", *nn, "rank")->required();
  theta->add_option("--m", *mm, "level")->required();
  theta->add_option("--h", *hh, "class number for the feasibility test");
  theta->callback(run([&] {
    json out{{"n", *nn}, {"m", *mm}, {"sp_order", sp_order(*nn, *mm)},
             {"bound", theta_null_bound(*nn, *mm)}};
    if (*hh >= 0) {
      out["threshold"] = prop_b6_threshold(*mm);
      out["feasible"] = prop_b6_feasible((u64)*hh, *mm);
    }
    emit(out);
  }));

  // experiment-mixing
  auto* mix = app.add_subcommand("experiment-mixing", "exact walk distribution vs uniform");
  mix->add_option("--D", *D, "negative discriminant")->required();
  mix->add_option("--t", *tt, "Frobenius trace (default: parity of D)");
  mix->add_option("--q", *qq, "norm with t^2 - 4q = D (default from t)");
  walk_flags(mix, walk, cap);
  mix->callback(run([&] {
    i64 t = *tt, q = *qq;
    if (q == 0) {
      t = ((*D % 2) + 2) % 2;  // match parity
      q = (t * t - *D) / 4;
    }
    MixingReport rep = mixing_distances(*D, resolve_walk(*walk, *cap), t, q);
    emit(json{{"D", rep.D},
              {"h", rep.h},
              {"basis", rep.basis},
              {"r", rep.r},
              {"distances", rep.distances},
              {"final_distance", rep.distances.back()}});
  }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  return rc;
}
