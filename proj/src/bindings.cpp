#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "isolab/errors.hpp"
#include "isolab/invariantmap.hpp"
#include "isolab/json_io.hpp"
#include "isolab/mixing.hpp"
#include "isolab/products.hpp"
#include "isolab/protocols.hpp"
#include "isolab/thetacount.hpp"

namespace py = pybind11;
using namespace isolab;

namespace {

IdealVector ideal_from_tuples(const std::vector<std::tuple<u64, int, u64>>& word) {
  IdealVector v;
  for (const auto& [ell, sign, exp] : word) v.entries.push_back(IdealEntry{ell, sign, exp});
  return v;
}

std::vector<std::tuple<u64, int, u64>> ideal_to_tuples(const IdealVector& v) {
  std::vector<std::tuple<u64, int, u64>> out;
  for (const auto& e : v.entries) out.push_back({e.ell, e.sign, e.exp});
  return out;
}

WalkParams walk_from_kwargs(double B, double eps, double delta, double C,
                            std::optional<u64> prime_cap) {
  WalkParams w;
  w.B = B;
  w.eps = eps;
  w.delta = delta;
  w.C = C;
  w.prime_cap = prime_cap;
  return w;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "class-group action laboratory: curves, forms, walks, protocols";

  py::register_exception<Error>(m, "IsolabError");

  py::class_<Curve>(m, "Curve")
      .def(py::init(&make_curve), py::arg("p"), py::arg("a"), py::arg("b"))
      .def_readonly("p", &Curve::p)
      .def_readonly("a", &Curve::a)
      .def_readonly("b", &Curve::b)
      .def("__eq__", [](const Curve& x, const Curve& y) { return x == y; })
      .def("__repr__", [](const Curve& E) { return to_json(E).dump(); });

  py::class_<QuadForm>(m, "QuadForm")
      .def(py::init([](i64 a, i64 b, i64 c) { return QuadForm{a, b, c}; }), py::arg("a"),
           py::arg("b"), py::arg("c"))
      .def_readonly("a", &QuadForm::a)
      .def_readonly("b", &QuadForm::b)
      .def_readonly("c", &QuadForm::c)
      .def("disc", &QuadForm::disc)
      .def("__eq__", [](const QuadForm& x, const QuadForm& y) { return x == y; })
      .def("__hash__", [](const QuadForm& f) { return std::hash<i64>()(f.a * 1000003 + f.b * 1009 + f.c); })
      .def("__repr__", [](const QuadForm& f) { return to_json(f).dump(); });

  py::class_<FrobeniusData>(m, "FrobeniusData")
      .def_readonly("t", &FrobeniusData::t)
      .def_readonly("N", &FrobeniusData::N)
      .def_readonly("D_pi", &FrobeniusData::D_pi)
      .def_readonly("conductor_m", &FrobeniusData::conductor_m)
      .def_readonly("D_fund", &FrobeniusData::D_fund);

  py::class_<InvariantValue>(m, "InvariantValue")
      .def_readonly("form", &InvariantValue::form)
      .def_property_readonly("encoding",
                             [](const InvariantValue& v) {
                               return py::bytes((const char*)v.encoding.data(), v.encoding.size());
                             })
      .def("__eq__", [](const InvariantValue& x, const InvariantValue& y) { return x == y; });

  py::class_<IsogenyTable>(m, "IsogenyTable")
      .def_readonly("base", &IsogenyTable::base)
      .def_readonly("D", &IsogenyTable::D)
      .def_property_readonly("entries", [](const IsogenyTable& T) { return T.entries; })
      .def_property_readonly("size", [](const IsogenyTable& T) { return T.size(); })
      .def("to_json", [](const IsogenyTable& T) { return to_json(T).dump(); });

  // curves and counting
  m.def("j_invariant", &j_invariant);
  m.def("count_points", &count_points);
  m.def("frobenius_data", &frobenius_data);
  m.def(
      "mapgen",
      [](int bits, const std::string& policy, u64 seed) {
        DiscriminantPolicy p = policy == "prime" ? DiscriminantPolicy::PrimeDiscriminant
                               : policy == "near-prime"
                                   ? DiscriminantPolicy::SmallSquarefreeTimesPrime
                                   : DiscriminantPolicy::AnyFundamental;
        std::mt19937_64 rng(seed);
        return mapgen(bits, p, rng);
      },
      py::arg("bits"), py::arg("policy") = "any", py::arg("seed") = 0);

  // class group
  m.def("reduce_form", [](const QuadForm& f) { return reduce(f); });
  m.def("compose", [](const QuadForm& f, const QuadForm& g) { return compose(f, g); });
  m.def("invert_form", [](const QuadForm& f) { return invert(f); });
  m.def("identity_form", &identity_form);
  m.def("class_number", [](i64 D) { return enumerate_reduced(D).h(); });
  m.def("reduced_forms", [](i64 D) { return enumerate_reduced(D).reduced_forms; });
  m.def("prime_form", &prime_form, py::arg("D"), py::arg("ell"), py::arg("sign"), py::arg("t"),
        py::arg("q"));
  m.def("decompose",
        [](const QuadForm& target, const std::vector<u64>& basis, i64 t, i64 q) {
          return ideal_to_tuples(decompose(target, basis, t, q));
        });

  // the action
  m.def("apply_prime", &apply_prime, py::arg("E"), py::arg("ell"), py::arg("sign") = +1);
  m.def("apply_ideal", [](const Curve& E, const std::vector<std::tuple<u64, int, u64>>& word) {
    return apply_ideal_vector(E, ideal_from_tuples(word));
  });
  m.def(
      "sample_walk",
      [](i64 D, u64 seed, double B, double eps, double delta, double C,
         std::optional<u64> prime_cap) {
        std::mt19937_64 rng(seed);
        return ideal_to_tuples(sample_walk(D, walk_from_kwargs(B, eps, delta, C, prime_cap), rng));
      },
      py::arg("D"), py::arg("seed"), py::arg("B") = 2.5, py::arg("eps") = 0.5,
      py::arg("delta") = 5.0, py::arg("C") = 3.0, py::arg("prime_cap") = py::none());

  // invariant map oracle
  m.def("build_orbit_table", &build_orbit_table, py::arg("E0"), py::arg("prime_bound") = 50);
  m.def("solve_isogeny", &solve_isogeny);
  m.def("invariant_e_n", &invariant_e_n);
  m.def("ddh_distinguish", &ddh_distinguish);
  m.def("isogeny_ddh_decide", &isogeny_ddh_decide);

  // protocols (seeded wrappers; secrets returned as ideal words)
  m.def(
      "nike_publish",
      [](const Curve& base, u64 seed, std::optional<u64> prime_cap) {
        PublicParams pp = params_from_curve(base, walk_from_kwargs(2.5, 0.5, 5.0, 3.0, prime_cap));
        std::mt19937_64 rng(seed);
        auto [secret, share] = nike_publish(pp, rng);
        return std::make_pair(ideal_to_tuples(secret.g), share);
      },
      py::arg("base"), py::arg("seed"), py::arg("prime_cap") = py::none());
  m.def(
      "nike_derive",
      [](const Curve& base, size_t index, const std::vector<std::tuple<u64, int, u64>>& secret,
         const std::vector<Curve>& shares, std::optional<u64> prime_cap) {
        PublicParams pp = params_from_curve(base, walk_from_kwargs(2.5, 0.5, 5.0, 3.0, prime_cap));
        DerivedKey k = nike_derive(pp, index, PartySecret{ideal_from_tuples(secret)}, shares);
        return std::make_pair(k.value, py::bytes((const char*)k.key.data(), k.key.size()));
      },
      py::arg("base"), py::arg("index"), py::arg("secret"), py::arg("shares"),
      py::arg("prime_cap") = py::none());

  // products
  m.def("check_class_condition", &check_class_condition);
  m.def("coprime_representatives",
        [](const std::vector<QuadForm>& classes, i64 t, i64 q) {
          std::vector<std::vector<std::tuple<u64, int, u64>>> out;
          for (const auto& w : coprime_representatives(classes, t, q))
            out.push_back(ideal_to_tuples(w));
          return out;
        });
  m.def(
      "verify_product_isomorphism",
      [](const Curve& E, const std::vector<std::tuple<u64, int, u64>>& k1,
         const std::vector<std::tuple<u64, int, u64>>& k2, int samples, u64 seed) {
        IsogenyMatrixPair pair = build_product_isomorphism(
            E, SubgroupDescriptor{ideal_from_tuples(k1)}, SubgroupDescriptor{ideal_from_tuples(k2)});
        std::mt19937_64 rng(seed);
        VerifyResult res = verify_matrix_identity(pair, samples, rng);
        return py::dict(py::arg("m1") = pair.m1, py::arg("m2") = pair.m2, py::arg("a") = pair.a,
                        py::arg("b") = pair.b, py::arg("ok") = res.ok,
                        py::arg("vacuous") = res.vacuous);
      },
      py::arg("E"), py::arg("k1"), py::arg("k2"), py::arg("samples") = 20, py::arg("seed") = 0);

  // module matrices
  m.def("deligne_to_class", [](const std::array<std::array<i64, 2>, 2>& M, i64 t, i64 q) {
    FrobeniusMatrix F{M[0][0], M[0][1], M[1][0], M[1][1], t, q};
    return deligne_to_class(F, companion_matrix(t, q));
  });
  m.def("class_to_module", [](const QuadForm& f, i64 t, i64 q) {
    FrobeniusMatrix M = class_to_module(f, t, q);
    return std::array<std::array<i64, 2>, 2>{{{M.m11, M.m12}, {M.m21, M.m22}}};
  });

  // counting bounds
  m.def("sp_order", &sp_order);
  m.def("theta_null_bound", &theta_null_bound);
  m.def("prop_b6_feasible", &prop_b6_feasible);
  m.def("prop_b6_threshold", &prop_b6_threshold);

  // mixing
  m.def(
      "mixing_distances",
      [](i64 D, i64 t, i64 q, double B, double eps, double delta, double C,
         std::optional<u64> prime_cap) {
        MixingReport rep = mixing_distances(D, walk_from_kwargs(B, eps, delta, C, prime_cap), t, q);
        return py::dict(py::arg("D") = rep.D, py::arg("h") = rep.h, py::arg("basis") = rep.basis,
                        py::arg("r") = rep.r, py::arg("distances") = rep.distances);
      },
      py::arg("D"), py::arg("t"), py::arg("q"), py::arg("B") = 2.5, py::arg("eps") = 0.5,
      py::arg("delta") = 5.0, py::arg("C") = 3.0, py::arg("prime_cap") = py::none());
}
