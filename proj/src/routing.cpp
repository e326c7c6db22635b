#include <algorithm>
#include <deque>
#include <limits>

#include "fairnav/error.hpp"
#include "fairnav/planner.hpp"

namespace fairnav {

namespace {

constexpr int kUnreached = std::numeric_limits<int>::max() / 4;
// Cached distance entries kept before the field cache is flushed.
constexpr std::size_t kFieldCacheEntries = std::size_t{1} << 26;

// Neighbours in ascending coordinate order, so ties resolve the same way
// everywhere.
constexpr Coord kNeighbourOffsets[4] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};

std::optional<std::size_t> shorter_tour_order(Router& router, std::vector<Coord>& pins);

}  // namespace

Router::Router(const CityMap& city, int budget) : city_(&city), budget_(budget) {
  if (budget < 0) throw ValidationError("budget must be non-negative");
  const int reach = budget / 2;
  std::vector<int> full(city.cell_count(), kUnreached);
  std::deque<Coord> queue{city.base()};
  full[city.index(city.base())] = 0;
  while (!queue.empty()) {
    const Coord c = queue.front();
    queue.pop_front();
    const int d = full[city.index(c)];
    if (d == reach) continue;
    for (Coord off : kNeighbourOffsets) {
      const Coord n{c.x + off.x, c.y + off.y};
      if (!city.traversable(n) || full[city.index(n)] != kUnreached) continue;
      full[city.index(n)] = d + 1;
      queue.push_back(n);
    }
  }
  arena_index_.assign(city.cell_count(), -1);
  for (std::size_t i = 0; i < city.cell_count(); ++i) {
    if (full[i] != kUnreached) arena_.push_back(city.coord(i));
  }
  std::sort(arena_.begin(), arena_.end());
  for (std::size_t k = 0; k < arena_.size(); ++k) {
    arena_index_[city.index(arena_[k])] = static_cast<int>(k);
  }
  base_field_ = bfs(arena_index_[city.index(city.base())]);
}

bool Router::in_arena(Coord c) const {
  return city_->in_bounds(c) && arena_index_[city_->index(c)] >= 0;
}

std::vector<int> Router::bfs(int source) const {
  std::vector<int> dist(arena_.size(), kUnreached);
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const int k = queue.front();
    queue.pop_front();
    const Coord c = arena_[k];
    for (Coord off : kNeighbourOffsets) {
      const Coord n{c.x + off.x, c.y + off.y};
      if (!city_->in_bounds(n)) continue;
      const int m = arena_index_[city_->index(n)];
      if (m < 0 || dist[m] != kUnreached) continue;
      dist[m] = dist[k] + 1;
      queue.push_back(m);
    }
  }
  return dist;
}

const std::vector<int>& Router::field(int target) {
  auto it = fields_.find(target);
  if (it != fields_.end()) return it->second;
  if ((fields_.size() + 1) * arena_.size() > kFieldCacheEntries) fields_.clear();
  return fields_.emplace(target, bfs(target)).first->second;
}

int Router::distance_to_base(Coord c) const {
  if (!in_arena(c)) return kUnreached;
  return base_field_[arena_index_[city_->index(c)]];
}

int Router::distance(Coord from, Coord to) {
  if (!in_arena(from) || !in_arena(to)) return kUnreached;
  if (to == city_->base()) return distance_to_base(from);
  return field(arena_index_[city_->index(to)])[arena_index_[city_->index(from)]];
}

Coord Router::step_toward(Coord from, Coord to) {
  if (from == to || !in_arena(from) || !in_arena(to)) return from;
  const std::vector<int>& dist =
      to == city_->base() ? base_field_ : field(arena_index_[city_->index(to)]);
  const int here = dist[arena_index_[city_->index(from)]];
  for (Coord off : kNeighbourOffsets) {
    const Coord n{from.x + off.x, from.y + off.y};
    if (!city_->in_bounds(n)) continue;
    const int m = arena_index_[city_->index(n)];
    if (m >= 0 && dist[m] == here - 1) return n;
  }
  return from;
}

// TourDecoder ----------------------------------------------------------------

TourDecoder::TourDecoder(const CityMap& city, int budget, std::vector<Coord> pinned)
    : router_(city, budget) {
  std::vector<Coord> unique;
  for (Coord c : pinned) {
    if (!city.in_bounds(c)) throw ValidationError("waypoint " + to_string(c) + " is out of bounds");
    if (!city.cell(c).traversable) {
      throw ValidationError("waypoint " + to_string(c) + " is not traversable");
    }
    if (c == city.base() || std::find(unique.begin(), unique.end(), c) != unique.end()) continue;
    unique.push_back(c);
  }

  std::string offenders;
  for (Coord c : unique) {
    if (!router_.in_arena(c)) offenders += (offenders.empty() ? "" : ", ") + to_string(c);
  }
  if (!offenders.empty()) {
    throw InfeasibleError("waypoints unreachable within budget " + std::to_string(budget) + ": " +
                          offenders);
  }

  std::sort(unique.begin(), unique.end());
  const auto length = shorter_tour_order(router_, unique);
  if (!length || static_cast<int>(*length) > budget) {
    std::string all;
    for (Coord c : unique) all += (all.empty() ? "" : ", ") + to_string(c);
    throw InfeasibleError("waypoints " + all + " need a tour of " +
                          std::to_string(length.value_or(0)) + " moves, budget is " +
                          std::to_string(budget));
  }
  pinned_ = std::move(unique);
  pinned_length_ = static_cast<int>(*length);

  pinned_tail_.assign(pinned_.size(), 0);
  for (std::size_t j = pinned_.size(); j-- > 0;) {
    pinned_tail_[j] = j + 1 < pinned_.size()
                          ? router_.distance(pinned_[j], pinned_[j + 1]) + pinned_tail_[j + 1]
                          : router_.distance_to_base(pinned_[j]);
  }
}

int TourDecoder::reserve(Coord c, std::size_t next_pin) {
  if (next_pin < pinned_.size()) {
    return router_.distance(c, pinned_[next_pin]) + pinned_tail_[next_pin];
  }
  return router_.distance_to_base(c);
}

Path TourDecoder::decode(std::span<const Coord> waypoints) {
  const int budget = router_.budget();
  const Coord base = router_.city().base();
  Path path{{base}};
  Coord cur = base;
  int used = 0;
  std::size_t next_pin = 0;

  auto walk_to = [&](Coord target) {
    while (cur != target) {
      cur = router_.step_toward(cur, target);
      path.steps.push_back(cur);
      ++used;
    }
  };
  // Walks toward `target` while the reserve allows; true when it arrived.
  auto advance_to = [&](Coord target) {
    while (cur != target) {
      const Coord next = router_.step_toward(cur, target);
      if (used + 1 + reserve(next, next_pin) > budget) return false;
      cur = next;
      path.steps.push_back(cur);
      ++used;
    }
    return true;
  };

  bool truncated = false;
  for (Coord w : waypoints) {
    if (!router_.in_arena(w)) continue;
    while (!advance_to(w)) {
      if (next_pin == pinned_.size()) {
        truncated = true;
        break;
      }
      walk_to(pinned_[next_pin++]);
    }
    if (truncated) break;
  }
  while (next_pin < pinned_.size()) walk_to(pinned_[next_pin++]);
  walk_to(base);
  return path;
}

std::vector<Coord> genome_of(const Path& path) {
  if (path.steps.size() <= 2) return {};
  return {path.steps.begin() + 1, path.steps.end() - 1};
}

namespace {

std::size_t tour_length(Router& router, const std::vector<Coord>& order) {
  if (order.empty()) return 0;
  std::size_t length = router.distance_to_base(order.front()) + router.distance_to_base(order.back());
  for (std::size_t i = 1; i < order.size(); ++i) length += router.distance(order[i - 1], order[i]);
  return length;
}

// Reorders `pins` (sorted on entry) into a short closed tour from the base
// and returns its length. Exact for up to eight pins.
std::optional<std::size_t> shorter_tour_order(Router& router, std::vector<Coord>& pins) {
  if (pins.empty()) return 0;
  if (pins.size() <= 8) {
    std::vector<Coord> order = pins;
    std::vector<Coord> best = order;
    std::size_t best_length = tour_length(router, order);
    while (std::next_permutation(order.begin(), order.end())) {
      const std::size_t length = tour_length(router, order);
      if (length < best_length) {
        best_length = length;
        best = order;
      }
    }
    pins = std::move(best);
    return best_length;
  }

  std::vector<Coord> order;
  std::vector<Coord> left = pins;
  Coord cur = router.city().base();
  while (!left.empty()) {
    auto nearest = std::min_element(left.begin(), left.end(), [&](Coord a, Coord b) {
      return router.distance(cur, a) < router.distance(cur, b);
    });
    cur = *nearest;
    order.push_back(cur);
    left.erase(nearest);
  }
  std::size_t length = tour_length(router, order);
  for (bool improved = true; improved;) {
    improved = false;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        std::reverse(order.begin() + i, order.begin() + j + 1);
        const std::size_t candidate = tour_length(router, order);
        if (candidate < length) {
          length = candidate;
          improved = true;
        } else {
          std::reverse(order.begin() + i, order.begin() + j + 1);
        }
      }
    }
  }
  pins = std::move(order);
  return length;
}

}  // namespace

}  // namespace fairnav
