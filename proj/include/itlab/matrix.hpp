#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace itlab {

/// Dense row-major integer matrix. Ordering is lexicographic over the
/// row-major entry list, which is the tie-break order used everywhere a
/// canonical "least consistent matrix" is needed.
struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::int64_t> a;

  IntMatrix() = default;
  IntMatrix(int r, int c, std::int64_t fill = 0)
      : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

  std::int64_t& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  std::int64_t at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
  friend auto operator<=>(const IntMatrix& x, const IntMatrix& y) {
    if (auto c = x.rows <=> y.rows; c != 0) return c;
    if (auto c = x.cols <=> y.cols; c != 0) return c;
    return x.a <=> y.a;
  }

  std::string to_string() const {
    std::string s;
    for (int i = 0; i < rows; ++i) {
      s += '[';
      for (int j = 0; j < cols; ++j) {
        if (j) s += ' ';
        s += std::to_string(at(i, j));
      }
      s += "]\n";
    }
    return s;
  }
};

/// FNV-style hash over the entry list, for unordered tallies.
struct IntMatrixHash {
  std::size_t operator()(const IntMatrix& m) const {
    std::uint64_t h = 1469598103934665603ULL;
    h = (h ^ static_cast<std::uint64_t>(m.rows)) * 1099511628211ULL;
    h = (h ^ static_cast<std::uint64_t>(m.cols)) * 1099511628211ULL;
    for (std::int64_t v : m.a) h = (h ^ static_cast<std::uint64_t>(v)) * 1099511628211ULL;
    return static_cast<std::size_t>(h);
  }
};

struct Int64VecHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::int64_t x : v) h = (h ^ static_cast<std::uint64_t>(x)) * 1099511628211ULL;
    return static_cast<std::size_t>(h);
  }
};

}  // namespace itlab
