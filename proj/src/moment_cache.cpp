#include "fivenum/moment_cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <system_error>
#include <thread>

#include <unistd.h>

#include "json.hpp"

namespace fivenum {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "fivenum-moments";

json to_json(const OrderStatMoments& m, double tolerance) {
  json j;
  j["format"] = kFormat;
  j["version"] = MomentCache::kFormatVersion;
  j["n"] = m.n;
  j["q"] = m.q;
  j["tolerance"] = tolerance;
  j["ranks"] = m.ranks;
  j["means"] = m.means;
  j["cov"] = m.cov;
  j["precision"] = m.precision;
  return j;
}

std::optional<OrderStatMoments> from_json(const json& j, std::int64_t n, double tolerance) {
  if (j.value("format", "") != kFormat || j.value("version", 0) != MomentCache::kFormatVersion)
    return std::nullopt;
  if (j.at("n").get<std::int64_t>() != n || j.at("tolerance").get<double>() != tolerance)
    return std::nullopt;
  OrderStatMoments m;
  m.n = n;
  m.q = j.at("q").get<std::int64_t>();
  m.ranks = j.at("ranks").get<std::array<std::int64_t, 5>>();
  m.means = j.at("means").get<std::array<double, 5>>();
  m.cov = j.at("cov").get<std::array<std::array<double, 5>, 5>>();
  m.precision = j.at("precision").get<double>();
  m.method = MomentMethod::quadrature;
  return m;
}

}  // namespace

MomentCache::MomentCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

MomentCache MomentCache::from_environment() {
  const char* env = std::getenv("FIVENUM_CACHE_DIR");
  return env && *env ? MomentCache(env) : MomentCache();
}

std::filesystem::path MomentCache::file_for(std::int64_t n, double tolerance) const {
  char tol[32];
  std::snprintf(tol, sizeof tol, "%.3g", tolerance);
  return dir_ / ("moments-n" + std::to_string(n) + "-tol" + tol + ".json");
}

std::optional<OrderStatMoments> MomentCache::load(std::int64_t n, double tolerance) const {
  if (dir_.empty()) return std::nullopt;
  std::ifstream in(file_for(n, tolerance));
  if (!in) return std::nullopt;
  try {
    return from_json(json::parse(in), n, tolerance);
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable record: recompute
  }
}

std::optional<OrderStatMoments> MomentCache::find(std::int64_t n, double tolerance) const {
  {
    std::shared_lock lock(mutex_);
    if (auto it = memo_.find({n, tolerance}); it != memo_.end()) return it->second;
  }
  auto loaded = load(n, tolerance);
  if (loaded) {
    std::unique_lock lock(mutex_);
    memo_.emplace(Key{n, tolerance}, *loaded);
  }
  return loaded;
}

void MomentCache::store(const OrderStatMoments& m, double tolerance) {
  std::unique_lock lock(mutex_);
  memo_.insert_or_assign(Key{m.n, tolerance}, m);
  if (dir_.empty()) return;

  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  const auto target = file_for(m.n, tolerance);
  std::ostringstream suffix;
  suffix << ".tmp." << ::getpid() << "." << std::this_thread::get_id();
  auto tmp = target;
  tmp += suffix.str();
  {
    std::ofstream out(tmp);
    if (!out) return;  // read-only location: memo still serves this process
    out << to_json(m, tolerance).dump(1) << '\n';
  }
  // Atomic replace, so concurrent processes never observe a partial record.
  std::filesystem::rename(tmp, target, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

}  // namespace fivenum
