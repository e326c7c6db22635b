#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairnav/grid.hpp"

namespace fairnav {

inline constexpr std::string_view kCityFormat = "fairnav-city/1";

/// A protected characteristic and its ordered categories.
struct Attribute {
  std::string name;
  std::vector<std::string> categories;

  bool operator==(const Attribute&) const = default;
};

struct Cell {
  bool traversable = true;
  /// counts[a][k]: people of category k of attribute a living in the cell.
  std::vector<std::vector<std::int64_t>> counts;

  bool operator==(const Cell&) const = default;
};

/// Named set of cells; the unit of location fairness.
struct Region {
  std::string name;
  std::vector<Coord> cells;

  bool operator==(const Region&) const = default;
};

/// Distribution of one attribute's categories. All-zero mass denotes an
/// empty population.
struct GroupDistribution {
  std::string attribute;
  std::vector<double> mass;

  bool is_empty() const;
  bool operator==(const GroupDistribution&) const = default;
};

/// Demographic grid map. Immutable once constructed; the constructor
/// enforces every invariant and throws ValidationError otherwise.
class CityMap {
 public:
  CityMap(int width, int height, Coord base, std::vector<Attribute> attributes,
          std::vector<Cell> cells, std::vector<Region> regions = {});

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t cell_count() const { return cells_.size(); }
  Coord base() const { return base_; }
  const std::vector<Attribute>& attributes() const { return attributes_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Region>& regions() const { return regions_; }

  bool in_bounds(Coord c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  std::size_t index(Coord c) const { return static_cast<std::size_t>(c.y) * width_ + c.x; }
  Coord coord(std::size_t index) const {
    return {static_cast<int>(index % width_), static_cast<int>(index / width_)};
  }
  const Cell& cell(Coord c) const { return cells_[index(c)]; }
  bool traversable(Coord c) const { return in_bounds(c) && cells_[index(c)].traversable; }

  std::optional<std::size_t> find_attribute(std::string_view name) const;
  /// Throws MismatchError when the attribute is not declared.
  std::size_t attribute_index(std::string_view name) const;

  /// Per-category totals over the whole map.
  const std::vector<std::int64_t>& category_totals(std::size_t attribute) const {
    return totals_[attribute];
  }
  std::int64_t population(std::size_t attribute) const;
  /// People of any category of `attribute` in the cell at `index`.
  std::int64_t cell_population(std::size_t attribute, std::size_t index) const {
    return cell_population_[attribute][index];
  }
  /// Region index of a cell, or -1 when the cell belongs to no region.
  int region_of(std::size_t index) const { return region_of_[index]; }

  bool operator==(const CityMap& other) const;

 private:
  int width_;
  int height_;
  Coord base_;
  std::vector<Attribute> attributes_;
  std::vector<Cell> cells_;
  std::vector<Region> regions_;

  std::vector<std::vector<std::int64_t>> totals_;
  std::vector<std::vector<std::int64_t>> cell_population_;
  std::vector<int> region_of_;
};

/// Parses a city file. Schema problems raise ParseError naming the field;
/// invariant violations raise ValidationError.
CityMap load_city(std::istream& in);
CityMap parse_city(std::string_view text);
/// Canonical serialization; load_city(save_city(c)) == c.
std::string save_city(const CityMap& city);

GroupDistribution city_distribution(const CityMap& city, std::string_view attribute);

// Synthetic cities -----------------------------------------------------------

/// Isotropic Gaussian population blob. A non-positive spread spreads the
/// people uniformly over all traversable cells instead.
struct Blob {
  Coord center;
  double spread = 1.0;
  std::int64_t total = 0;
};

struct AttributeLayout {
  Attribute attribute;
  /// blobs[k] are the blobs of category k.
  std::vector<std::vector<Blob>> blobs;
};

struct SyntheticCityParams {
  int width = 16;
  int height = 16;
  Coord base;
  std::vector<AttributeLayout> attributes;
  std::vector<Coord> obstacles;
  std::vector<Region> regions;
};

/// Names accepted by synthetic_preset.
std::vector<std::string> preset_names();
/// Built-in layouts: "biased-age", "biased-ethnicity", "uniform".
/// Throws ValidationError for unknown names.
SyntheticCityParams synthetic_preset(std::string_view name, int width, int height);

/// Places every person independently according to the blob weights, so
/// per-category totals are exact and the result depends only on `seed`.
CityMap generate_city(const SyntheticCityParams& params, std::uint64_t seed);

}  // namespace fairnav
