#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "quadpart/cfrac.hpp"
#include "quadpart/error.hpp"
#include "quadpart/serialize.hpp"
#include "quadpart/theorems.hpp"

namespace quadpart {

/// On-disk store for continued fraction expansions and scan results.
///
/// Layout: <root>/v<schema>/cf/<D>.json and <root>/v<schema>/scan/m<m>_x<X>.json. Entries
/// are written atomically (temp file plus rename). Unreadable or stale entries count as
/// misses, and write failures are ignored, so a cache never changes any output.
class Cache {
 public:
  static constexpr const char* kEnvVar = "QUADPART_CACHE_DIR";
  static constexpr const char* kDefaultDir = ".quadpart-cache";

  explicit Cache(std::optional<std::filesystem::path> root) : root_(std::move(root)) {}

  /// The cache selected by QUADPART_CACHE_DIR (default ./.quadpart-cache), or a disabled one.
  static Cache from_env(bool enabled) {
    if (!enabled) return Cache(std::nullopt);
    const char* env = std::getenv(kEnvVar);
    return Cache(std::filesystem::path(env && *env ? env : kDefaultDir));
  }

  bool enabled() const noexcept { return root_.has_value(); }

  std::optional<CFData> load_cf(std::int64_t D) const {
    if (!root_) return std::nullopt;
    auto j = read(cf_path(D));
    if (!j) return std::nullopt;
    try {
      if (detail::int_of(detail::member(*j, "D")) != D) return std::nullopt;
      return cf_from_json(*j);
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  void store_cf(const CFData& cf) const {
    if (!root_) return;
    Json j{{"schema", kSchemaVersion},
           {"D", cf.field().D()},
           {"u0", cf.u0()},
           {"period", cf.period()}};
    write(cf_path(cf.field().D()), j);
  }

  std::optional<std::vector<ScanRow>> load_scan(std::int64_t m, std::int64_t X) const {
    if (!root_) return std::nullopt;
    auto j = read(scan_path(m, X));
    if (!j) return std::nullopt;
    try {
      if (detail::int_of(detail::member(*j, "m")) != m || detail::int_of(detail::member(*j, "xmax")) != X)
        return std::nullopt;
      std::vector<ScanRow> rows;
      for (const Json& r : detail::member(*j, "rows")) rows.push_back(scan_row_from_json(r));
      return rows;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  void store_scan(std::int64_t m, std::int64_t X, const std::vector<ScanRow>& rows) const {
    if (!root_) return;
    Json arr = Json::array();
    for (const ScanRow& r : rows) arr.push_back(to_json(r));
    write(scan_path(m, X), Json{{"schema", kSchemaVersion}, {"m", m}, {"xmax", X}, {"rows", arr}});
  }

 private:
  std::filesystem::path base() const { return *root_ / ("v" + std::to_string(kSchemaVersion)); }
  std::filesystem::path cf_path(std::int64_t D) const { return base() / "cf" / (std::to_string(D) + ".json"); }
  std::filesystem::path scan_path(std::int64_t m, std::int64_t X) const {
    return base() / "scan" / ("m" + std::to_string(m) + "_x" + std::to_string(X) + ".json");
  }

  std::optional<Json> read(const std::filesystem::path& p) const {
    std::ifstream in(p);
    if (!in) return std::nullopt;
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("schema") || j["schema"] != kSchemaVersion)
      return std::nullopt;
    return j;
  }

  void write(const std::filesystem::path& p, const Json& j) const {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) return;
    std::random_device rd;
    std::filesystem::path tmp = p;
    tmp += ".tmp" + std::to_string(rd());
    {
      std::ofstream out(tmp);
      if (!out) return;
      out << j.dump() << '\n';
      if (!out) {
        out.close();
        std::filesystem::remove(tmp, ec);
        return;
      }
    }
    std::filesystem::rename(tmp, p, ec);
    if (ec) std::filesystem::remove(tmp, ec);
  }

  std::optional<std::filesystem::path> root_;
};

}  // namespace quadpart
