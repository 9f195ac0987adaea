#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace twocat {

// Struct: Settings
// Process-wide bounds. The CLI overrides them from flags.
struct Settings {
  std::size_t size_cap = 100000;    // max objects, morphisms or cells of a derived 2-category
  std::size_t probe_bound = 256;    // max probes per probe family
  std::size_t search_cap = 2000000; // max backtracking steps per enumeration
  std::uint64_t seed = 1;
};

inline Settings& settings() {
  static Settings s;
  return s;
}

struct Error : std::runtime_error {
  std::string code;
  Error(std::string c, const std::string& what) : std::runtime_error(what), code(std::move(c)) {}
};

// Malformed input: dangling ids, mismatched boundaries, wrong kinds.
struct StructuralError : Error {
  explicit StructuralError(const std::string& what) : Error("structural", what) {}
};

struct CapError : Error {
  explicit CapError(const std::string& what) : Error("size_cap", what) {}
};

// A result that should be guaranteed by a theorem failed to materialize.
struct InconsistencyError : Error {
  explicit InconsistencyError(const std::string& what) : Error("inconsistency", what) {}
};

inline std::uint64_t key2(int a, int b) {
  return (std::uint64_t(std::uint32_t(a)) << 32) | std::uint32_t(b);
}
inline int key_hi(std::uint64_t k) { return int(std::uint32_t(k >> 32)); }
inline int key_lo(std::uint64_t k) { return int(std::uint32_t(k)); }

using PairTable = std::unordered_map<std::uint64_t, int>;

inline int lookup(const PairTable& t, int a, int b) {
  auto it = t.find(key2(a, b));
  return it == t.end() ? -1 : it->second;
}

// Entries of a pair table in ascending key order.
inline std::vector<std::pair<std::uint64_t, int>> sorted_entries(const PairTable& t) {
  std::vector<std::pair<std::uint64_t, int>> v(t.begin(), t.end());
  std::sort(v.begin(), v.end());
  return v;
}

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= std::uint64_t(std::uint32_t(x)) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return std::size_t(h);
  }
};

using TupleIndex = std::unordered_map<std::vector<int>, int, VecHash>;

inline int lookup(const TupleIndex& t, const std::vector<int>& k) {
  auto it = t.find(k);
  return it == t.end() ? -1 : it->second;
}

// Permutation that sorts ids bytewise; perm[new] = old.
inline std::vector<int> sort_perm(const std::vector<std::string>& ids) {
  std::vector<int> p(ids.size());
  std::iota(p.begin(), p.end(), 0);
  std::sort(p.begin(), p.end(), [&](int a, int b) { return ids[a] < ids[b]; });
  return p;
}

inline std::vector<int> invert_perm(const std::vector<int>& p) {
  std::vector<int> inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = int(i);
  return inv;
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline void check_cap(std::size_t n, const char* what) {
  if (n > settings().size_cap) {
    throw CapError(std::string("derived ") + what + " count " + std::to_string(n) +
                   " exceeds size cap " + std::to_string(settings().size_cap));
  }
}

}  // namespace twocat
