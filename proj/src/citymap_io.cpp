#include <istream>
#include <iterator>

#include "fairnav/citymap.hpp"
#include "json_util.hpp"

namespace fairnav {

using detail::Json;

namespace {

Attribute parse_attribute(const Json& j, const std::string& path) {
  Attribute attribute;
  attribute.name = detail::as_string(detail::field(j, "name", path), detail::child(path, "name"));
  const std::string cats_path = detail::child(path, "categories");
  const Json& cats = detail::as_array(detail::field(j, "categories", path), cats_path);
  for (std::size_t k = 0; k < cats.size(); ++k) {
    attribute.categories.push_back(detail::as_string(cats[k], detail::item(cats_path, k)));
  }
  return attribute;
}

Cell parse_cell(const Json& j, const std::string& path, const std::vector<Attribute>& attributes) {
  Cell cell;
  cell.traversable =
      detail::as_bool(detail::field(j, "traversable", path), detail::child(path, "traversable"));
  const std::string counts_path = detail::child(path, "counts");
  const Json& counts = detail::field(j, "counts", path);
  if (!counts.is_object()) throw ParseError(counts_path + ": expected an object");
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    bool known = false;
    for (const auto& a : attributes) known = known || a.name == it.key();
    if (!known) throw ParseError(detail::child(counts_path, it.key()) + ": undeclared attribute");
  }
  cell.counts.reserve(attributes.size());
  for (const auto& attribute : attributes) {
    const std::string attr_path = detail::child(counts_path, attribute.name);
    std::vector<std::int64_t> values;
    if (const Json* v = detail::optional_field(counts, attribute.name)) {
      detail::as_array(*v, attr_path);
      for (std::size_t k = 0; k < v->size(); ++k) {
        values.push_back(detail::as_int((*v)[k], detail::item(attr_path, k)));
      }
    } else {
      // An attribute absent from a cell means nobody of it was counted there.
      values.assign(attribute.categories.size(), 0);
    }
    cell.counts.push_back(std::move(values));
  }
  return cell;
}

}  // namespace

CityMap parse_city(std::string_view text) {
  const Json doc = detail::parse_document(text);
  if (!doc.is_object()) throw ParseError("document: expected an object");
  if (const Json* format = detail::optional_field(doc, "format")) {
    if (detail::as_string(*format, "format") != kCityFormat) {
      throw ParseError("format: expected \"" + std::string(kCityFormat) + "\"");
    }
  } else {
    throw ParseError("format: missing field");
  }

  const int width = static_cast<int>(detail::as_int(detail::field(doc, "width", ""), "width"));
  const int height = static_cast<int>(detail::as_int(detail::field(doc, "height", ""), "height"));
  if (width < 1 || height < 1) throw ValidationError("width/height must be positive");
  const Coord base = detail::as_coord(detail::field(doc, "base", ""), "base");

  std::vector<Attribute> attributes;
  const Json& attrs = detail::as_array(detail::field(doc, "attributes", ""), "attributes");
  for (std::size_t a = 0; a < attrs.size(); ++a) {
    attributes.push_back(parse_attribute(attrs[a], detail::item("attributes", a)));
  }

  const Json& cells_json = detail::as_array(detail::field(doc, "cells", ""), "cells");
  const std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (cells_json.size() != expected) {
    throw ParseError("cells: expected " + std::to_string(expected) + " entries (width*height), got " +
                     std::to_string(cells_json.size()));
  }
  std::vector<Cell> cells;
  cells.reserve(expected);
  for (std::size_t i = 0; i < cells_json.size(); ++i) {
    cells.push_back(parse_cell(cells_json[i], detail::item("cells", i), attributes));
  }

  std::vector<Region> regions;
  if (const Json* regions_json = detail::optional_field(doc, "regions")) {
    if (!regions_json->is_object()) throw ParseError("regions: expected an object");
    for (auto it = regions_json->begin(); it != regions_json->end(); ++it) {
      const std::string path = detail::child("regions", it.key());
      Region region{it.key(), {}};
      detail::as_array(it.value(), path);
      for (std::size_t i = 0; i < it.value().size(); ++i) {
        region.cells.push_back(detail::as_coord(it.value()[i], detail::item(path, i)));
      }
      regions.push_back(std::move(region));
    }
  }

  return CityMap(width, height, base, std::move(attributes), std::move(cells), std::move(regions));
}

CityMap load_city(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_city(text);
}

std::string save_city(const CityMap& city) {
  Json doc;
  doc["format"] = kCityFormat;
  doc["width"] = city.width();
  doc["height"] = city.height();
  doc["base"] = detail::coord_json(city.base());
  Json attrs = Json::array();
  for (const auto& a : city.attributes()) {
    attrs.push_back(Json{{"name", a.name}, {"categories", a.categories}});
  }
  doc["attributes"] = std::move(attrs);
  Json cells = Json::array();
  for (const auto& c : city.cells()) {
    Json counts = Json::object();
    for (std::size_t a = 0; a < city.attributes().size(); ++a) {
      counts[city.attributes()[a].name] = c.counts[a];
    }
    cells.push_back(Json{{"traversable", c.traversable}, {"counts", std::move(counts)}});
  }
  doc["cells"] = std::move(cells);
  if (!city.regions().empty()) {
    Json regions = Json::object();
    for (const auto& r : city.regions()) {
      Json list = Json::array();
      for (Coord c : r.cells) list.push_back(detail::coord_json(c));
      regions[r.name] = std::move(list);
    }
    doc["regions"] = std::move(regions);
  }
  return doc.dump();
}

}  // namespace fairnav
