#pragma once

// Memo of quadrature moment blocks keyed by (n, tolerance), optionally
// persisted to a directory. Deleting the directory only costs time.
//
// On-disk record: one JSON file per key, `moments-n<n>-tol<tol>.json`:
//   {"format": "fivenum-moments", "version": 1, "n": 85, "q": 21,
//    "tolerance": 1e-10, "ranks": [...5], "means": [...5],
//    "cov": [[...5] x5], "precision": 1e-10}
// Records with another format/version or a mismatched key are ignored.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <utility>

#include "fivenum/order_stats.hpp"

namespace fivenum {

class MomentCache {
 public:
  static constexpr int kFormatVersion = 1;

  /// Memory-only cache.
  MomentCache() = default;
  /// Cache backed by `dir` (created on first store).
  explicit MomentCache(std::filesystem::path dir);

  /// Directory from FIVENUM_CACHE_DIR, memory-only when unset.
  static MomentCache from_environment();

  std::optional<OrderStatMoments> find(std::int64_t n, double tolerance) const;
  void store(const OrderStatMoments& m, double tolerance);

  std::filesystem::path file_for(std::int64_t n, double tolerance) const;
  const std::filesystem::path& directory() const noexcept { return dir_; }

 private:
  using Key = std::pair<std::int64_t, double>;

  std::optional<OrderStatMoments> load(std::int64_t n, double tolerance) const;

  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
  mutable std::map<Key, OrderStatMoments> memo_;
};

}  // namespace fivenum
