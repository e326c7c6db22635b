#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairnav/citymap.hpp"
#include "fairnav/error.hpp"
#include "rng.hpp"

namespace fairnav {

namespace {

std::vector<double> blob_weights(const Blob& blob, int width, int height,
                                 const std::vector<bool>& blocked) {
  std::vector<double> weights(static_cast<std::size_t>(width) * height, 0.0);
  const bool uniform = !(blob.spread > 0.0);
  const double denom = 2.0 * blob.spread * blob.spread;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      if (blocked[i]) continue;
      if (uniform) {
        weights[i] = 1.0;
      } else {
        const double dx = x - blob.center.x;
        const double dy = y - blob.center.y;
        weights[i] = std::exp(-(dx * dx + dy * dy) / denom);
      }
    }
  }
  return weights;
}

void scatter(const std::vector<double>& weights, std::int64_t people, detail::Rng& rng,
             std::vector<std::int64_t>& into) {
  std::vector<double> cumulative(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cumulative.begin());
  const double mass = cumulative.back();
  for (std::int64_t n = 0; n < people; ++n) {
    const double u = rng.unit() * mass;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t i = static_cast<std::size_t>(it - cumulative.begin());
    // Guard against landing on a trailing zero-weight cell through rounding.
    while (i >= weights.size() || weights[i] == 0.0) i = (i == 0 ? weights.size() : i) - 1;
    ++into[i];
  }
}

int scaled(int extent, int divisor) { return std::max(1, extent / divisor); }

}  // namespace

std::vector<std::string> preset_names() {
  return {"biased-age", "biased-ethnicity", "uniform"};
}

SyntheticCityParams synthetic_preset(std::string_view name, int width, int height) {
  SyntheticCityParams p;
  p.width = width;
  p.height = height;
  p.base = {width / 3, height / 3};
  const int extent = std::min(width, height);
  const Coord far_corner{width - 1, height - 1};

  if (name == "biased-age") {
    // Young people crowd around the base, old people live further out and
    // more scattered. The totals are distinct primes, so exact parity would
    // require covering the whole city.
    AttributeLayout age{{"age", {"young", "old"}}, {}};
    age.blobs.push_back({Blob{p.base, static_cast<double>(scaled(extent, 8)), 4000},
                         Blob{p.base, 0.0, 397}});
    age.blobs.push_back({Blob{far_corner, static_cast<double>(scaled(extent, 4)), 2000},
                         Blob{p.base, 0.0, 609}});
    p.attributes.push_back(std::move(age));
  } else if (name == "biased-ethnicity") {
    AttributeLayout eth{{"ethnicity", {"white_british", "white_other", "asian", "black"}}, {}};
    eth.blobs.push_back({Blob{p.base, static_cast<double>(scaled(extent, 3)), 3001}});
    eth.blobs.push_back({Blob{p.base, static_cast<double>(scaled(extent, 8)), 701}});
    eth.blobs.push_back({Blob{{width - 1, 0}, static_cast<double>(scaled(extent, 6)), 599}});
    eth.blobs.push_back({Blob{{width / 2, height - 1}, static_cast<double>(scaled(extent, 6)), 433}});
    p.attributes.push_back(std::move(eth));
  } else if (name == "uniform") {
    AttributeLayout age{{"age", {"young", "old"}}, {}};
    age.blobs.push_back({Blob{p.base, 0.0, 20011}});
    age.blobs.push_back({Blob{p.base, 0.0, 11987}});
    p.attributes.push_back(std::move(age));
  } else {
    throw ValidationError("unknown preset '" + std::string(name) + "'");
  }
  return p;
}

CityMap generate_city(const SyntheticCityParams& params, std::uint64_t seed) {
  const int width = params.width;
  const int height = params.height;
  if (width < 2 || height < 2) {
    throw ValidationError("synthetic city must be at least 2x2, got " + std::to_string(width) +
                          "x" + std::to_string(height));
  }
  auto in_bounds = [&](Coord c) { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; };
  if (!in_bounds(params.base)) {
    throw ValidationError("base " + to_string(params.base) + " is out of bounds");
  }

  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<bool> blocked(n, false);
  for (Coord c : params.obstacles) {
    if (!in_bounds(c)) throw ValidationError("obstacle " + to_string(c) + " is out of bounds");
    blocked[static_cast<std::size_t>(c.y) * width + c.x] = true;
  }

  std::vector<Attribute> attributes;
  std::vector<Cell> cells(n);
  for (std::size_t i = 0; i < n; ++i) {
    cells[i].traversable = !blocked[i];
    cells[i].counts.resize(params.attributes.size());
  }

  detail::Rng rng(seed);
  for (std::size_t a = 0; a < params.attributes.size(); ++a) {
    const AttributeLayout& layout = params.attributes[a];
    const std::size_t categories = layout.attribute.categories.size();
    if (layout.blobs.size() != categories) {
      throw ValidationError("attribute '" + layout.attribute.name + "': expected blobs for " +
                            std::to_string(categories) + " categories");
    }
    attributes.push_back(layout.attribute);
    for (auto& cell : cells) cell.counts[a].assign(categories, 0);

    for (std::size_t k = 0; k < categories; ++k) {
      std::vector<std::int64_t> placed(n, 0);
      for (const Blob& blob : layout.blobs[k]) {
        if (!in_bounds(blob.center)) {
          throw ValidationError("blob center " + to_string(blob.center) + " of '" +
                                layout.attribute.categories[k] + "' is out of bounds");
        }
        if (blob.total < 0) throw ValidationError("blob total must be non-negative");
        if (!std::isfinite(blob.spread)) throw ValidationError("blob spread must be finite");
        if (blob.total == 0) continue;
        const auto weights = blob_weights(blob, width, height, blocked);
        if (std::all_of(weights.begin(), weights.end(), [](double w) { return w == 0.0; })) {
          throw ValidationError("blob at " + to_string(blob.center) + " covers no traversable cell");
        }
        scatter(weights, blob.total, rng, placed);
      }
      for (std::size_t i = 0; i < n; ++i) cells[i].counts[a][k] = placed[i];
    }
  }

  return CityMap(width, height, params.base, std::move(attributes), std::move(cells), params.regions);
}

}  // namespace fairnav
