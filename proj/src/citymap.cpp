#include "fairnav/citymap.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "fairnav/error.hpp"

namespace fairnav {

std::string to_string(Coord c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

bool GroupDistribution::is_empty() const {
  return std::all_of(mass.begin(), mass.end(), [](double m) { return m == 0.0; });
}

CityMap::CityMap(int width, int height, Coord base, std::vector<Attribute> attributes,
                 std::vector<Cell> cells, std::vector<Region> regions)
    : width_(width),
      height_(height),
      base_(base),
      attributes_(std::move(attributes)),
      cells_(std::move(cells)),
      regions_(std::move(regions)) {
  if (width_ < 1 || height_ < 1) {
    throw ValidationError("city dimensions must be positive, got " + std::to_string(width_) +
                          "x" + std::to_string(height_));
  }
  if (cells_.size() != static_cast<std::size_t>(width_) * height_) {
    throw ValidationError("cells: expected " + std::to_string(width_ * height_) +
                          " cells, got " + std::to_string(cells_.size()));
  }
  if (!in_bounds(base_)) throw ValidationError("base " + to_string(base_) + " is out of bounds");
  if (!cell(base_).traversable) {
    throw ValidationError("base " + to_string(base_) + " is not traversable");
  }

  std::set<std::string> attribute_names;
  for (const auto& attribute : attributes_) {
    if (attribute.name.empty()) throw ValidationError("attribute name must not be empty");
    if (!attribute_names.insert(attribute.name).second) {
      throw ValidationError("duplicate attribute '" + attribute.name + "'");
    }
    if (attribute.categories.size() < 2) {
      throw ValidationError("attribute '" + attribute.name + "' needs at least two categories");
    }
    std::set<std::string> seen(attribute.categories.begin(), attribute.categories.end());
    if (seen.size() != attribute.categories.size()) {
      throw ValidationError("attribute '" + attribute.name + "' has duplicate categories");
    }
  }

  totals_.resize(attributes_.size());
  cell_population_.assign(attributes_.size(), std::vector<std::int64_t>(cells_.size(), 0));
  for (std::size_t a = 0; a < attributes_.size(); ++a) {
    totals_[a].assign(attributes_[a].categories.size(), 0);
  }
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const Cell& c = cells_[i];
    if (c.counts.size() != attributes_.size()) {
      throw ValidationError("cell " + to_string(coord(i)) + ": expected counts for " +
                            std::to_string(attributes_.size()) + " attributes");
    }
    for (std::size_t a = 0; a < attributes_.size(); ++a) {
      if (c.counts[a].size() != attributes_[a].categories.size()) {
        throw ValidationError("cell " + to_string(coord(i)) + ": counts for '" +
                              attributes_[a].name + "' must have " +
                              std::to_string(attributes_[a].categories.size()) + " entries");
      }
      for (std::size_t k = 0; k < c.counts[a].size(); ++k) {
        const std::int64_t n = c.counts[a][k];
        if (n < 0) {
          throw ValidationError("cell " + to_string(coord(i)) + ": negative count for '" +
                                attributes_[a].name + "'");
        }
        totals_[a][k] += n;
        cell_population_[a][i] += n;
      }
    }
  }

  region_of_.assign(cells_.size(), -1);
  std::set<std::string> region_names;
  for (std::size_t r = 0; r < regions_.size(); ++r) {
    const Region& region = regions_[r];
    if (!region_names.insert(region.name).second) {
      throw ValidationError("duplicate region '" + region.name + "'");
    }
    for (Coord c : region.cells) {
      if (!in_bounds(c)) {
        throw ValidationError("region '" + region.name + "': cell " + to_string(c) +
                              " is out of bounds");
      }
      int& owner = region_of_[index(c)];
      if (owner != -1) {
        throw ValidationError("region '" + region.name + "': cell " + to_string(c) +
                              " already belongs to region '" + regions_[owner].name + "'");
      }
      owner = static_cast<int>(r);
    }
  }
}

std::optional<std::size_t> CityMap::find_attribute(std::string_view name) const {
  for (std::size_t a = 0; a < attributes_.size(); ++a) {
    if (attributes_[a].name == name) return a;
  }
  return std::nullopt;
}

std::size_t CityMap::attribute_index(std::string_view name) const {
  if (auto found = find_attribute(name)) return *found;
  throw MismatchError("unknown attribute '" + std::string(name) + "'");
}

std::int64_t CityMap::population(std::size_t attribute) const {
  const auto& totals = totals_[attribute];
  return std::accumulate(totals.begin(), totals.end(), std::int64_t{0});
}

bool CityMap::operator==(const CityMap& other) const {
  return width_ == other.width_ && height_ == other.height_ && base_ == other.base_ &&
         attributes_ == other.attributes_ && cells_ == other.cells_ &&
         regions_ == other.regions_;
}

GroupDistribution city_distribution(const CityMap& city, std::string_view attribute) {
  const std::size_t a = city.attribute_index(attribute);
  const auto& totals = city.category_totals(a);
  const std::int64_t population = city.population(a);
  GroupDistribution dist{std::string(attribute), std::vector<double>(totals.size(), 0.0)};
  if (population == 0) return dist;
  for (std::size_t k = 0; k < totals.size(); ++k) {
    dist.mass[k] = static_cast<double>(totals[k]) / static_cast<double>(population);
  }
  return dist;
}

}  // namespace fairnav
