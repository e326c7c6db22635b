#pragma once

// Test-only reference implementations. They deliberately share no code with
// the library so that a bug there cannot hide itself here.

#include <cmath>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairnav/citymap.hpp"
#include "fairnav/grid.hpp"

namespace fairnav::testing {

/// Path invariants: non-empty, starts and ends at base, 4-adjacent moves,
/// every step in bounds and traversable, at most `budget` moves.
inline std::optional<std::string> check_tour(const CityMap& city, const Path& path, int budget) {
  const auto& steps = path.steps;
  if (steps.empty()) return "empty path";
  if (steps.front() != city.base()) return "does not start at base";
  if (steps.back() != city.base()) return "does not end at base";
  if (static_cast<long>(steps.size()) - 1 > budget) {
    return "uses " + std::to_string(steps.size() - 1) + " moves, budget " + std::to_string(budget);
  }
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Coord c = steps[i];
    if (c.x < 0 || c.y < 0 || c.x >= city.width() || c.y >= city.height()) {
      return "step " + std::to_string(i) + " out of bounds";
    }
    if (!city.cells()[static_cast<std::size_t>(c.y * city.width() + c.x)].traversable) {
      return "step " + std::to_string(i) + " on a blocked cell";
    }
    if (i > 0 && std::abs(c.x - steps[i - 1].x) + std::abs(c.y - steps[i - 1].y) != 1) {
      return "step " + std::to_string(i) + " is not a unit move";
    }
  }
  return std::nullopt;
}

/// Jensen-Shannon distance through the entropy identity
/// JSD = H(M) - (H(P) + H(Q)) / 2, in bits, long double throughout.
inline double jsd_entropy_form(std::span<const double> p, std::span<const double> q) {
  auto entropy = [](const std::vector<long double>& v) {
    long double h = 0.0L;
    for (long double x : v) {
      if (x > 0.0L) h -= x * std::log2(x);
    }
    return h;
  };
  std::vector<long double> lp(p.begin(), p.end());
  std::vector<long double> lq(q.begin(), q.end());
  std::vector<long double> m(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m[i] = (lp[i] + lq[i]) / 2.0L;
  const long double jsd = entropy(m) - (entropy(lp) + entropy(lq)) / 2.0L;
  return static_cast<double>(std::sqrt(std::max(0.0L, jsd)));
}

/// People of attribute `a` on the visited cells, each cell once (radius 0).
inline std::vector<std::int64_t> found_by_category(const CityMap& city, const Path& path,
                                                   std::size_t a) {
  std::vector<char> seen(city.cell_count(), 0);
  std::vector<std::int64_t> found(city.attributes()[a].categories.size(), 0);
  for (Coord c : path.steps) {
    const auto i = static_cast<std::size_t>(c.y * city.width() + c.x);
    if (seen[i]) continue;
    seen[i] = 1;
    for (std::size_t k = 0; k < found.size(); ++k) found[k] += city.cells()[i].counts[a][k];
  }
  return found;
}

}  // namespace fairnav::testing
