#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "quadpart/cfrac.hpp"
#include "quadpart/detail/bigint.hpp"
#include "quadpart/error.hpp"
#include "quadpart/indec.hpp"
#include "quadpart/partcount.hpp"
#include "quadpart/qfield.hpp"
#include "quadpart/theorems.hpp"

namespace quadpart {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) raise(Errc::ParseError, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline BigInt big_of(const Json& j) {
  if (j.is_string()) return parse_bigint(j.get<std::string>());
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  raise(Errc::ParseError, "expected an integer or a decimal string");
}

inline std::int64_t int_of(const Json& j) {
  if (!j.is_number_integer()) raise(Errc::ParseError, "expected an integer");
  return j.get<std::int64_t>();
}

inline std::string rational_str(const Rational& q) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  BigInt den = denominator(q);
  return den == 1 ? numerator(q).str() : numerator(q).str() + "/" + den.str();
}

inline Rational rational_of(const Json& j) {
  if (!j.is_string()) raise(Errc::ParseError, "expected a rational string");
  std::string s = j.get<std::string>();
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_bigint(s));
  BigInt den = parse_bigint(s.substr(slash + 1));
  if (den.is_zero()) raise(Errc::ParseError, "zero denominator");
  return Rational(parse_bigint(s.substr(0, slash)), den);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// qfield

inline Json to_json(const QuadInt& x) {
  return Json{{"a", x.a().str()}, {"b", x.b().str()}, {"D", x.field().D()}};
}

inline QuadInt quadint_from_json(const Json& j) {
  const Field& k = make_field(detail::int_of(detail::member(j, "D")));
  return QuadInt(k, detail::big_of(detail::member(j, "a")), detail::big_of(detail::member(j, "b")));
}

inline Json to_json(const Field& k) {
  return Json{{"D", k.D()},
              {"disc", k.disc()},
              {"basis_case", k.basis_case() == BasisCase::Sqrt ? "sqrt" : "half_integral"},
              {"tr_omega", k.tr_omega()},
              {"nm_omega", k.nm_omega()},
              {"floor_xi", k.floor_xi()},
              {"c_D", k.c_D()}};
}

inline Json to_json(const SurdExpr& e) {
  return Json{{"x", detail::rational_str(e.x)}, {"y", detail::rational_str(e.y)}, {"D", e.field->D()}};
}

inline SurdExpr surd_from_json(const Json& j) {
  const Field& k = make_field(detail::int_of(detail::member(j, "D")));
  return {detail::rational_of(detail::member(j, "x")), detail::rational_of(detail::member(j, "y")), &k};
}

// ---------------------------------------------------------------------------
// cfrac

inline Json to_json(const CFData& cf, const Units& un) {
  return Json{{"D", cf.field().D()},
              {"u0", cf.u0()},
              {"period", cf.period()},
              {"s", cf.s()},
              {"epsilon", to_json(un.eps)},
              {"epsilon_plus", to_json(un.eps_plus)}};
}

/// Rebuilds (and re-verifies) a continued fraction from its JSON form.
inline CFData cf_from_json(const Json& j) {
  const Field& k = make_field(detail::int_of(detail::member(j, "D")));
  const Json& period = detail::member(j, "period");
  if (!period.is_array()) raise(Errc::ParseError, "period must be an array");
  std::vector<std::int64_t> p;
  for (const Json& x : period) p.push_back(detail::int_of(x));
  return cf_from_parts(k, detail::int_of(detail::member(j, "u0")), std::move(p));
}

inline Json to_json(const ConvergentRow& row, std::int64_t i) {
  return Json{{"i", i}, {"p", row.p.str()}, {"q", row.q.str()}, {"alpha", to_json(row.alpha)}, {"N", row.N.str()}};
}

// ---------------------------------------------------------------------------
// indec

inline Json beta_row_json(const BetaIndexMap& map, std::int64_t j) {
  BetaIndex idx = map.index_of(j < 0 ? -j : j);
  QuadInt b = map.beta(j);
  return Json{{"j", j}, {"i", idx.i}, {"r", idx.r}, {"alpha", to_json(b)}, {"v", map.v(j)}, {"norm", norm(b).str()}};
}

inline Json to_json(const CanonicalDecomp& d) {
  return Json{{"j", d.j}, {"e", d.e.str()}, {"f", d.f.str()}};
}

// ---------------------------------------------------------------------------
// partcount

inline Json to_json(const CountResult& c) {
  return Json{{"kind", c.is_exact() ? "exact" : "at_least"}, {"value", c.value.str()}};
}

inline CountResult count_from_json(const Json& j) {
  std::string kind = detail::member(j, "kind").get<std::string>();
  BigInt v = detail::big_of(detail::member(j, "value"));
  if (kind == "exact") return CountResult::exact(v);
  if (kind == "at_least") return CountResult::at_least(v);
  raise(Errc::ParseError, "unknown count kind \"" + kind + "\"");
}

inline Json to_json(const Partition& p) {
  Json arr = Json::array();
  for (const QuadInt& x : p.parts) arr.push_back(to_json(x));
  return arr;
}

// ---------------------------------------------------------------------------
// theorems

inline Json to_json(const BoundReport& r) {
  Json viol = Json::array();
  for (const QuadInt& x : r.violations) viol.push_back(to_json(x));
  return Json{{"D", r.D},
              {"bound", bound_name(r.kind)},
              {"m", r.m},
              {"candidates_checked", r.candidates_checked},
              {"max_norm_seen", r.max_norm_seen.str()},
              {"bound_value", to_json(r.bound)},
              {"violations", viol},
              {"ok", r.ok()}};
}

inline BoundKind bound_kind_of(const std::string& name) {
  if (name == "ds") return BoundKind::DS;
  if (name == "hk10") return BoundKind::HK10;
  if (name == "n") return BoundKind::N;
  if (name == "n2") return BoundKind::N2;
  raise(Errc::ParseError, "unknown bound \"" + name + "\"");
}

inline BoundReport bound_report_from_json(const Json& j) {
  BoundReport r;
  r.D = detail::int_of(detail::member(j, "D"));
  r.kind = bound_kind_of(detail::member(j, "bound").get<std::string>());
  r.m = detail::int_of(detail::member(j, "m"));
  r.candidates_checked = detail::int_of(detail::member(j, "candidates_checked"));
  r.max_norm_seen = detail::big_of(detail::member(j, "max_norm_seen"));
  r.bound = surd_from_json(detail::member(j, "bound_value"));
  for (const Json& x : detail::member(j, "violations")) r.violations.push_back(quadint_from_json(x));
  return r;
}

inline Json to_json(const ScanRow& row) {
  Json j{{"D", row.D}, {"m", row.m}, {"in_range", row.in_range}};
  j["witness"] = row.witness ? to_json(*row.witness) : Json(nullptr);
  j["pk"] = row.in_range ? Json(row.m) : Json(nullptr);
  return j;
}

inline ScanRow scan_row_from_json(const Json& j) {
  ScanRow row;
  row.D = detail::int_of(detail::member(j, "D"));
  row.m = detail::int_of(detail::member(j, "m"));
  const Json& ir = detail::member(j, "in_range");
  if (!ir.is_boolean()) raise(Errc::ParseError, "in_range must be a boolean");
  row.in_range = ir.get<bool>();
  const Json& w = detail::member(j, "witness");
  if (!w.is_null()) row.witness = quadint_from_json(w);
  return row;
}

inline Json to_json(const DensityReport& r) {
  Json exc = Json::array();
  for (const auto& [D, ks] : r.exceptional) exc.push_back(Json{{"D", D}, {"missing", ks}});
  return Json{{"m", r.m},
              {"xmax", r.X},
              {"squarefree_count", r.squarefree_count},
              {"exceptional", exc},
              {"count", static_cast<std::int64_t>(r.exceptional.size())},
              {"formula_rhs", r.formula_rhs},
              {"hypothesis_holds", r.hypothesis_holds}};
}

// ---------------------------------------------------------------------------
// CSV

namespace detail {
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}
}  // namespace detail

inline void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "D,m,in_range,witness_a,witness_b,pk\r\n";
  for (const ScanRow& r : rows) {
    os << r.D << ',' << r.m << ',' << (r.in_range ? "true" : "false") << ',';
    os << detail::csv_field(r.witness ? r.witness->a().str() : "") << ',';
    os << detail::csv_field(r.witness ? r.witness->b().str() : "") << ',';
    os << (r.in_range ? std::to_string(r.m) : "") << "\r\n";
  }
}

}  // namespace quadpart
