#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace fairnav {

/// Grid coordinate; x is the column, y the row. Ordered lexicographically
/// by (x, y), which is the tie-break order used for deterministic output.
struct Coord {
  int x = 0;
  int y = 0;

  auto operator<=>(const Coord&) const = default;
};

inline int manhattan(Coord a, Coord b) {
  return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

inline bool adjacent4(Coord a, Coord b) { return manhattan(a, b) == 1; }

std::string to_string(Coord c);

/// A closed tour on the grid: starts and ends at the base, moves between
/// 4-adjacent traversable cells.
struct Path {
  std::vector<Coord> steps;

  std::size_t moves() const { return steps.empty() ? 0 : steps.size() - 1; }

  auto operator<=>(const Path&) const = default;
  bool operator==(const Path&) const = default;
};

}  // namespace fairnav
