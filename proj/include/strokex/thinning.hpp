#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include "strokex/image.hpp"

namespace strokex {

enum class ThinningVariant {
  // Two-subiteration scheme gated by the Yokoi 8-connectivity number and a
  // neighbor count, with per-pass re-validation. Preserves the component
  // count of every input and keeps diagonal strokes.
  kModified,
  // Textbook Zhang-Suen (crossing number A(p) = 1), fully parallel.
  kZhangSuen,
};

namespace detail {

// Neighbor bit order: E, NE, N, NW, W, SW, S, SE (counterclockwise from east,
// y growing down means NE is (x+1, y-1)).
inline constexpr int kNbrDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
inline constexpr int kNbrDy[8] = {0, -1, -1, -1, 0, 1, 1, 1};

inline int neighbor_code(const BinaryImage& img, int x, int y) {
  int code = 0;
  for (int i = 0; i < 8; ++i)
    if (img.at_or(x + kNbrDx[i], y + kNbrDy[i], 0)) code |= 1 << i;
  return code;
}

// Yokoi connectivity number for 8-connected foreground. 1 means deleting the
// pixel keeps local topology intact.
inline constexpr int yokoi8(int code) {
  int n = 0;
  for (int k = 0; k < 8; k += 2) {
    const int xk = (code >> k) & 1;
    const int xk1 = (code >> ((k + 1) % 8)) & 1;
    const int xk2 = (code >> ((k + 2) % 8)) & 1;
    n += (1 - xk) - (1 - xk) * (1 - xk1) * (1 - xk2);
  }
  return n;
}

// Rutovitz crossing number: 0->1 transitions around the cyclic neighborhood.
inline constexpr int crossings(int code) {
  int n = 0;
  for (int k = 0; k < 8; ++k) {
    const int a = (code >> k) & 1;
    const int b = (code >> ((k + 1) % 8)) & 1;
    n += (a == 0 && b == 1);
  }
  return n;
}

struct ThinTables {
  std::array<std::uint8_t, 256> candidate[2];  // per subiteration
  std::array<std::uint8_t, 256> revalidate;
};

inline const ThinTables& thin_tables(ThinningVariant variant) {
  auto build = [](ThinningVariant v) {
    ThinTables t{};
    for (int code = 0; code < 256; ++code) {
      const int b = std::popcount(static_cast<unsigned>(code));
      const bool east = code & (1 << 0), north = code & (1 << 2);
      const bool west = code & (1 << 4), south = code & (1 << 6);
      const bool mask0 = !(north && east && south) && !(east && south && west);
      const bool mask1 = !(north && east && west) && !(north && south && west);
      const bool count_ok = b >= 2 && b <= 6;
      const bool conn_ok =
          v == ThinningVariant::kModified ? yokoi8(code) == 1 : crossings(code) == 1;
      t.candidate[0][code] = count_ok && conn_ok && mask0;
      t.candidate[1][code] = count_ok && conn_ok && mask1;
      t.revalidate[code] = count_ok && yokoi8(code) == 1;
    }
    return t;
  };
  static const ThinTables modified = build(ThinningVariant::kModified);
  static const ThinTables zhang_suen = build(ThinningVariant::kZhangSuen);
  return variant == ThinningVariant::kModified ? modified : zhang_suen;
}

}  // namespace detail

// Iterative thinning to a unit-width 8-connected skeleton. The foreground of
// the result is a subset of the input's and has the same number of
// 8-connected components (kModified); running thin on its own output is a
// no-op.
inline SkeletonImage thin(const BinaryImage& binary,
                          ThinningVariant variant = ThinningVariant::kModified) {
  const auto& tables = detail::thin_tables(variant);
  SkeletonImage img = binary;
  for (auto& v : img.pixels()) v = v ? 1 : 0;

  const int w = img.width(), h = img.height();
  std::vector<Point> candidates;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int sub = 0; sub < 2; ++sub) {
      candidates.clear();
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if (img.at(x, y) && tables.candidate[sub][detail::neighbor_code(img, x, y)])
            candidates.push_back({x, y});

      if (variant == ThinningVariant::kZhangSuen) {
        for (const Point& p : candidates) img.at(p) = 0;
        changed |= !candidates.empty();
      } else {
        // Candidates were picked in parallel; deletions re-check the
        // connectivity and neighbor-count conditions against the live image.
        for (const Point& p : candidates) {
          if (tables.revalidate[detail::neighbor_code(img, p.x, p.y)]) {
            img.at(p) = 0;
            changed = true;
          }
        }
      }
    }
  }
  return img;
}

}  // namespace strokex
