#pragma once

#include <json.hpp>

#include "isolab/curve.hpp"
#include "isolab/idealvector.hpp"
#include "isolab/invariantmap.hpp"

namespace isolab {

using nlohmann::json;

inline json to_json(const Curve& E) { return json{{"p", E.p}, {"a", E.a}, {"b", E.b}}; }

inline Curve curve_from_json(const json& j) {
  return make_curve(j.at("p").get<u64>(), j.at("a").get<u64>(), j.at("b").get<u64>());
}

inline json to_json(const QuadForm& f) { return json{{"a", f.a}, {"b", f.b}, {"c", f.c}}; }

inline QuadForm form_from_json(const json& j) {
  return QuadForm{j.at("a").get<i64>(), j.at("b").get<i64>(), j.at("c").get<i64>()};
}

/// [[ell, sign, exp], ...]
inline json to_json(const IdealVector& v) {
  json out = json::array();
  for (const auto& e : v.entries) out.push_back(json::array({e.ell, e.sign, e.exp}));
  return out;
}

inline IdealVector ideal_from_json(const json& j) {
  IdealVector v;
  for (const auto& e : j)
    v.entries.push_back(IdealEntry{e.at(0).get<u64>(), e.at(1).get<int>(), e.at(2).get<u64>()});
  return v;
}

inline json to_json(const FrobeniusData& fd) {
  return json{{"t", fd.t},
              {"N", fd.N},
              {"D_pi", fd.D_pi},
              {"conductor_m", fd.conductor_m},
              {"D_fund", fd.D_fund}};
}

inline json to_json(const IsogenyTable& T) {
  json entries = json::array();
  for (const auto& [j, f] : T.entries) entries.push_back(json{{"j", j}, {"form", to_json(f)}});
  return json{{"base", to_json(T.base)}, {"D", T.D}, {"entries", entries}};
}

inline std::string hex_encode(const unsigned char* data, size_t len) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (size_t i = 0; i < len; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0xF]);
  }
  return out;
}

inline json to_json(const InvariantValue& v) {
  return json{{"form", to_json(v.form)},
              {"encoding", hex_encode(v.encoding.data(), v.encoding.size())}};
}

}  // namespace isolab
