#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "quadpart/cache.hpp"
#include "quadpart/cfrac.hpp"
#include "quadpart/error.hpp"
#include "quadpart/indec.hpp"
#include "quadpart/partcount.hpp"
#include "quadpart/qfield.hpp"
#include "quadpart/serialize.hpp"
#include "quadpart/theorems.hpp"

namespace quadpart::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2 };

namespace detail {

inline Json document(const Json& body) {
  Json out{{"schema", kSchemaVersion}};
  for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
  return out;
}

inline void emit(std::ostream& out, const Json& body) { out << document(body).dump(2) << '\n'; }

/// Continued fraction data for D, taken from the cache when a verified entry exists.
inline const BetaIndexMap& field_map(const Cache& cache, std::int64_t D) {
  const Field& k = make_field(D);
  if (auto cf = cache.load_cf(k.D())) return BetaIndexMap::of(*cf);
  const BetaIndexMap& map = BetaIndexMap::of(k.D());
  cache.store_cf(map.cf());
  return map;
}

inline QuadInt element(const Field& k, const std::string& a, const std::string& b) {
  return QuadInt(k, quadpart::detail::parse_bigint(a), quadpart::detail::parse_bigint(b));
}

inline int exit_code_for(Errc code) {
  switch (code) {
    case Errc::InternalError: return kViolation;
    default: return kUsage;
  }
}

}  // namespace detail

struct Options {
  bool no_cache = false;
  unsigned threads = 0;

  std::int64_t D = 0;
  std::string a;
  std::string b;
  std::int64_t rows = 0;
  std::int64_t window = 0;
  bool indec = false;
  std::optional<std::int64_t> cap;
  bool list = false;
  std::optional<std::int64_t> gen_pk;
  std::optional<std::int64_t> gen_pki;
  std::int64_t imax = 5;
  std::string bound;
  std::int64_t m = 0;
  std::int64_t xmax = 0;
  bool fast6 = false;
  std::string format = "json";
};

inline int cmd_field(const Options& o, std::ostream& out) {
  detail::emit(out, to_json(make_field(o.D)));
  return kOk;
}

inline int cmd_cf(const Options& o, const Cache& cache, std::ostream& out) {
  const BetaIndexMap& map = detail::field_map(cache, o.D);
  std::int64_t n = o.rows > 0 ? o.rows : 2 * map.unit_period() + 1;
  Json conv = Json::array();
  for (std::int64_t i = -1; i < n - 1; ++i) conv.push_back(to_json(map.table().row(i), i));
  Json body = to_json(map.cf(), map.unit_data());
  body["convergents"] = conv;
  detail::emit(out, body);
  return kOk;
}

inline int cmd_indec(const Options& o, const Cache& cache, std::ostream& out) {
  if (o.window < 0) raise(Errc::OutOfRange, "--window must be >= 0");
  const BetaIndexMap& map = detail::field_map(cache, o.D);
  Json rows = Json::array();
  for (std::int64_t j = -o.window; j <= o.window; ++j) rows.push_back(beta_row_json(map, j));
  detail::emit(out, Json{{"D", map.field().D()}, {"s_prime", map.s_prime()}, {"betas", rows}});
  return kOk;
}

inline int cmd_decomp(const Options& o, const Cache& cache, std::ostream& out) {
  const BetaIndexMap& map = detail::field_map(cache, o.D);
  QuadInt alpha = detail::element(map.field(), o.a, o.b);
  Json body{{"alpha", to_json(alpha)}};
  Json d = to_json(canonical_decomp(map, alpha));
  for (auto it = d.begin(); it != d.end(); ++it) body[it.key()] = it.value();
  detail::emit(out, body);
  return kOk;
}

inline int cmd_pk(const Options& o, const Cache& cache, std::ostream& out) {
  const BetaIndexMap& map = detail::field_map(cache, o.D);
  QuadInt alpha = detail::element(map.field(), o.a, o.b);
  if (o.cap && *o.cap < 0) raise(Errc::OutOfRange, "--cap must be >= 0");
  Json body{{"alpha", to_json(alpha)}};
  bool exact = true;
  if (o.indec) {
    body["pk"] = nullptr;
  } else {
    CountResult c = pk(map, alpha, o.cap);
    exact = exact && c.is_exact();
    body["pk"] = c.value.str();
  }
  CountResult ci = pk_indec(map, alpha, o.cap);
  exact = exact && ci.is_exact();
  body["pk_indec"] = ci.value.str();
  body["exact"] = exact;
  if (o.list) {
    Json parts = Json::array();
    for (const Partition& p : list_partitions(map, alpha, o.indec)) parts.push_back(to_json(p));
    body["partitions"] = parts;
  }
  detail::emit(out, body);
  return kOk;
}

inline int cmd_gen(const Options& o, const Cache& cache, std::ostream& out) {
  if (o.gen_pk.has_value() == o.gen_pki.has_value()) raise(Errc::ParseError, "gen needs exactly one of --pk 6 or --pki 2");
  if (o.gen_pk && *o.gen_pk != 6) raise(Errc::OutOfRange, "only --pk 6 has a generator");
  if (o.gen_pki && *o.gen_pki != 2) raise(Errc::OutOfRange, "only --pki 2 has a generator");
  const BetaIndexMap& map = detail::field_map(cache, o.D);
  std::vector<QuadInt> xs = o.gen_pk ? gen_pk6(map, o.imax) : gen_pkI2(map, o.imax);
  Json arr = Json::array();
  for (const QuadInt& x : xs) arr.push_back(to_json(x));
  detail::emit(out, Json{{"D", map.field().D()},
                         {"generator", o.gen_pk ? "pk6" : "pki2"},
                         {"imax", o.imax},
                         {"elements", arr}});
  return kOk;
}

inline int cmd_verify(const Options& o, const Cache& cache, std::ostream& out) {
  BoundKind kind = bound_kind_of(o.bound);
  if (kind == BoundKind::N && o.m < 1) raise(Errc::ParseError, "--bound n needs --m M with M >= 1");
  if (kind != BoundKind::N && o.m != 0) raise(Errc::ParseError, "--m only applies to --bound n");
  const BetaIndexMap& map = detail::field_map(cache, o.D);
  BoundReport rep = verify_bound(map, kind, kind == BoundKind::N ? o.m : 1);
  detail::emit(out, to_json(rep));
  return rep.ok() ? kOk : kViolation;
}

inline int cmd_scan(const Options& o, const Cache& cache, std::ostream& out) {
  if (o.format != "json" && o.format != "csv") raise(Errc::ParseError, "--format must be json or csv");
  if (o.xmax < 2) raise(Errc::OutOfRange, "--xmax must be >= 2");
  std::vector<ScanRow> rows;
  if (o.fast6) {
    if (o.m != 0 && o.m != 6) raise(Errc::ParseError, "--fast6 scans m = 6 only");
    for (std::int64_t D : squarefree_upto(o.xmax))
      rows.push_back(ScanRow{D, 6, has_pk6(detail::field_map(cache, D).cf()), std::nullopt});
  } else {
    if (o.m < 1) raise(Errc::OutOfRange, "--m must be >= 1");
    if (auto hit = cache.load_scan(o.m, o.xmax)) {
      rows = std::move(*hit);
    } else {
      for (std::int64_t D : squarefree_upto(o.xmax)) detail::field_map(cache, D);
      rows = scan_rows(o.m, o.xmax, o.threads);
      cache.store_scan(o.m, o.xmax, rows);
    }
  }
  if (o.format == "csv") {
    write_scan_csv(out, rows);
    return kOk;
  }
  std::vector<std::int64_t> missing;
  Json arr = Json::array();
  for (const ScanRow& r : rows) {
    if (!r.in_range) missing.push_back(r.D);
    arr.push_back(to_json(r));
  }
  detail::emit(out, Json{{"m", rows.empty() ? o.m : rows.front().m},
                         {"xmax", o.xmax},
                         {"method", o.fast6 ? "fast6" : "decide"},
                         {"D_m", missing},
                         {"rows", arr}});
  return kOk;
}

inline int cmd_witness(const Options& o, const Cache& cache, std::ostream& out) {
  const BetaIndexMap& map = detail::field_map(cache, o.D);
  RangeWitnesses rw = range_witnesses(map);
  Json arr = Json::array();
  bool ok = true;
  for (const auto& [m, alpha] : rw.witnesses) {
    CountResult c = pk(map, alpha, m + 1);
    ok = ok && c.is_exactly(m);
    arr.push_back(Json{{"m", m}, {"alpha", to_json(alpha)}, {"pk", to_json(c)}});
  }
  detail::emit(out, Json{{"D", map.field().D()}, {"B", rw.B}, {"i", rw.i}, {"witnesses", arr}, {"ok", ok}});
  return ok ? kOk : kViolation;
}

inline int cmd_density(const Options& o, const Cache& cache, std::ostream& out) {
  if (o.xmax >= 2)
    for (std::int64_t D : squarefree_upto(o.xmax)) detail::field_map(cache, D);
  detail::emit(out, to_json(density_report(o.m, o.xmax, o.threads)));
  return kOk;
}

/// Runs one command line (without the program name) and returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Partitions and indecomposables in real quadratic fields", "quadpart"};
  app.require_subcommand(1);
  app.add_flag("--no-cache", o.no_cache, "Ignore and do not write the on-disk cache");
  app.add_option("--threads", o.threads, "Worker threads for scans (0 = hardware)");

  auto add_D = [&](CLI::App* sub) { sub->add_option("D", o.D, "Squarefree D >= 2")->required(); };
  auto add_ab = [&](CLI::App* sub) {
    sub->add_option("a", o.a, "Coordinate of 1")->required();
    sub->add_option("b", o.b, "Coordinate of w")->required();
  };

  auto* field = app.add_subcommand("field", "Field constants");
  add_D(field);
  auto* cf = app.add_subcommand("cf", "Continued fraction, units and convergents");
  add_D(cf);
  cf->add_option("--rows", o.rows, "Number of convergent rows from i = -1");
  auto* indec = app.add_subcommand("indec", "Indecomposables beta_j with |j| <= W");
  add_D(indec);
  indec->add_option("--window", o.window, "W")->required();
  auto* decomp = app.add_subcommand("decomp", "Canonical decomposition of a + bw");
  add_D(decomp);
  add_ab(decomp);
  auto* pkc = app.add_subcommand("pk", "Partition counts of a + bw");
  add_D(pkc);
  add_ab(pkc);
  pkc->add_flag("--indec", o.indec, "Count partitions into indecomposables only");
  pkc->add_option("--cap", o.cap, "Stop counting above M");
  pkc->add_flag("--list", o.list, "List the partitions");
  auto* gen = app.add_subcommand("gen", "Generate elements with pk = 6 or pk_indec = 2");
  add_D(gen);
  gen->add_option("--pk", o.gen_pk, "6");
  gen->add_option("--pki", o.gen_pki, "2");
  gen->add_option("--imax", o.imax, "Largest odd convergent index");
  auto* verify = app.add_subcommand("verify", "Check a norm bound");
  add_D(verify);
  verify->add_option("--bound", o.bound, "ds | hk10 | n2 | n")->required();
  verify->add_option("--m", o.m, "m for --bound n");
  auto* scan = app.add_subcommand("scan", "Squarefree D <= X with m outside the range of p_K");
  scan->add_option("--m", o.m, "m");
  scan->add_option("--xmax", o.xmax, "X")->required();
  scan->add_flag("--fast6", o.fast6, "Use the continued fraction criterion for m = 6");
  scan->add_option("--format", o.format, "json | csv");
  auto* witness = app.add_subcommand("witness", "Elements realising 1, ..., floor(B/2) + 2");
  add_D(witness);
  auto* density = app.add_subcommand("density", "Exceptional set E(m, X) report");
  density->add_option("--m", o.m, "m >= 4")->required();
  density->add_option("--xmax", o.xmax, "X")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  Cache cache = Cache::from_env(!o.no_cache);
  try {
    if (field->parsed()) return cmd_field(o, out);
    if (cf->parsed()) return cmd_cf(o, cache, out);
    if (indec->parsed()) return cmd_indec(o, cache, out);
    if (decomp->parsed()) return cmd_decomp(o, cache, out);
    if (pkc->parsed()) return cmd_pk(o, cache, out);
    if (gen->parsed()) return cmd_gen(o, cache, out);
    if (verify->parsed()) return cmd_verify(o, cache, out);
    if (scan->parsed()) return cmd_scan(o, cache, out);
    if (witness->parsed()) return cmd_witness(o, cache, out);
    if (density->parsed()) return cmd_density(o, cache, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return detail::exit_code_for(e.code());
  }
  err << "usage error: no subcommand\n";
  return kUsage;
}

}  // namespace quadpart::cli
