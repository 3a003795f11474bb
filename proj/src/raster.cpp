#include "objloc/raster.hpp"

#include <algorithm>
#include <numeric>

namespace objloc {

namespace {

void check_dimensions(int width, int height, std::size_t expected, std::size_t actual,
                      const char* what) {
  if (width <= 0 || height <= 0)
    throw Error(std::string(what) + ": dimensions must be positive");
  if (expected != actual)
    throw Error(std::string(what) + ": buffer size does not match dimensions");
}

}  // namespace

RgbImage::RgbImage(int width, int height, Rgb fill) : width_(width), height_(height) {
  check_dimensions(width, height, 0, 0, "RgbImage");
  data_.resize(3 * static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> interleaved)
    : width_(width), height_(height), data_(std::move(interleaved)) {
  check_dimensions(width, height, 3 * static_cast<std::size_t>(std::max(width, 0)) *
                                      std::max(height, 0),
                   data_.size(), "RgbImage");
}

SaliencyMap::SaliencyMap(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  check_dimensions(width, height, 0, 0, "SaliencyMap");
  values_.assign(static_cast<std::size_t>(width) * height, fill);
}

SaliencyMap::SaliencyMap(int width, int height, std::vector<std::uint8_t> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dimensions(width, height,
                   static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0),
                   values_.size(), "SaliencyMap");
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
  check_dimensions(width, height, 0, 0, "BinaryMask");
  bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryMask binarize(const SaliencyMap& map, int t_ps) {
  BinaryMask mask(map.width(), map.height());
  for (int y = 0; y < map.height(); ++y)
    for (int x = 0; x < map.width(); ++x)
      if (map.at(x, y) > t_ps) mask.set(x, y, true);
  return mask;
}

ComponentLabeling label_components(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  const auto bits = mask.bits();

  ComponentLabeling out;
  out.width = w;
  out.height = h;
  out.labels.assign(bits.size(), -1);

  struct Accum {
    SalientRegion region;
    std::size_t seed = 0;
  };
  std::vector<Accum> found;
  std::vector<std::size_t> stack;

  for (std::size_t seed = 0; seed < bits.size(); ++seed) {
    if (!bits[seed] || out.labels[seed] != -1) continue;
    const auto label = static_cast<std::int32_t>(found.size());
    const int sx = static_cast<int>(seed % w);
    const int sy = static_cast<int>(seed / w);
    BoundingBox bbox{sx, sy, sx, sy};
    std::int64_t count = 0;
    std::int64_t sum_x = 0;
    std::int64_t sum_y = 0;

    out.labels[seed] = label;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t idx = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(idx % w);
      const int y = static_cast<int>(idx / w);
      ++count;
      sum_x += x;
      sum_y += y;
      bbox.x1 = std::min(bbox.x1, x);
      bbox.x2 = std::max(bbox.x2, x);
      bbox.y1 = std::min(bbox.y1, y);
      bbox.y2 = std::max(bbox.y2, y);
      for (int dy = -1; dy <= 1; ++dy) {
        const int ny = y + dy;
        if (ny < 0 || ny >= h) continue;
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx;
          if (nx < 0 || nx >= w || (dx == 0 && dy == 0)) continue;
          const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
          if (bits[n] && out.labels[n] == -1) {
            out.labels[n] = label;
            stack.push_back(n);
          }
        }
      }
    }
    SalientRegion r;
    r.pixel_count = count;
    r.centroid_x = static_cast<double>(sum_x) / static_cast<double>(count);
    r.centroid_y = static_cast<double>(sum_y) / static_cast<double>(count);
    r.bbox = bbox;
    found.push_back({r, seed});
  }

  std::vector<std::int32_t> order(found.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    const auto& ra = found[a];
    const auto& rb = found[b];
    if (ra.region.pixel_count != rb.region.pixel_count)
      return ra.region.pixel_count > rb.region.pixel_count;
    if (ra.region.bbox != rb.region.bbox) return ra.region.bbox < rb.region.bbox;
    return ra.seed < rb.seed;
  });

  std::vector<std::int32_t> remap(found.size());
  out.regions.reserve(found.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    remap[order[rank]] = static_cast<std::int32_t>(rank);
    out.regions.push_back(found[order[rank]].region);
  }
  for (auto& l : out.labels)
    if (l >= 0) l = remap[l];
  return out;
}

std::vector<SalientRegion> connected_components(const BinaryMask& mask) {
  return label_components(mask).regions;
}

std::vector<SalientRegion> area_filter(std::span<const SalientRegion> regions,
                                       std::int64_t t_a) {
  std::vector<SalientRegion> kept;
  std::copy_if(regions.begin(), regions.end(), std::back_inserter(kept),
               [t_a](const SalientRegion& r) { return r.pixel_count >= t_a; });
  return kept;
}

void ColorHistogram::merge(const ColorHistogram& other) {
  for (int i = 0; i < kBins; ++i) bins[i] += other.bins[i];
  total += other.total;
}

ColorHistogram region_histogram(const RgbImage& image, const BoundingBox& box) {
  if (!box.within(image.width(), image.height()))
    throw Error("region_histogram: box " + to_string(box) + " outside " +
                std::to_string(image.width()) + "x" + std::to_string(image.height()) +
                " image");
  ColorHistogram hist;
  const auto bytes = image.bytes();
  for (int y = box.y1; y <= box.y2; ++y) {
    const std::uint8_t* p = &bytes[3 * (static_cast<std::size_t>(y) * image.width() + box.x1)];
    for (int x = box.x1; x <= box.x2; ++x, p += 3)
      ++hist.bins[(p[0] >> 5) * 64 + (p[1] >> 5) * 8 + (p[2] >> 5)];
  }
  hist.total = static_cast<std::uint64_t>(box.area());
  return hist;
}

double histogram_similarity(const ColorHistogram& h1, const ColorHistogram& h2) {
  if (h1.total == 0 || h2.total == 0)
    throw Error("histogram_similarity: empty histogram");
  // sum_b min(h1_b * t2, h2_b * t1) / (t1 * t2)
  std::uint64_t numer = 0;
  for (int i = 0; i < ColorHistogram::kBins; ++i)
    numer += std::min(static_cast<std::uint64_t>(h1.bins[i]) * h2.total,
                      static_cast<std::uint64_t>(h2.bins[i]) * h1.total);
  const std::uint64_t denom = h1.total * h2.total;
  if (numer == denom) return 1.0;
  return static_cast<double>(numer) / static_cast<double>(denom);
}

}  // namespace objloc
