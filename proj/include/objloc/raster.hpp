#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "objloc/geometry.hpp"

namespace objloc {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 24-bit interleaved color raster.
class RgbImage {
public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = {});
  RgbImage(int width, int height, std::vector<std::uint8_t> interleaved);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  Rgb at(int x, int y) const {
    const auto* p = &data_[3 * (static_cast<std::size_t>(y) * width_ + x)];
    return {p[0], p[1], p[2]};
  }
  void set(int x, int y, Rgb c) {
    auto* p = &data_[3 * (static_cast<std::size_t>(y) * width_ + x)];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }
  std::span<const std::uint8_t> bytes() const { return data_; }

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Per-pixel saliency stored as 8-bit intensity; probability = intensity / 255.
class SaliencyMap {
public:
  SaliencyMap() = default;
  SaliencyMap(int width, int height, std::uint8_t fill = 0);
  SaliencyMap(int width, int height, std::vector<std::uint8_t> values);

  int width() const { return width_; }
  int height() const { return height_; }

  std::uint8_t at(int x, int y) const {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  void set(int x, int y, std::uint8_t v) {
    values_[static_cast<std::size_t>(y) * width_ + x] = v;
  }
  double probability(int x, int y) const { return at(x, y) / 255.0; }
  std::span<const std::uint8_t> values() const { return values_; }

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> values_;
};

class BinaryMask {
public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }

  bool at(int x, int y) const {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool v) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0;
  }
  std::size_t count() const;
  std::span<const std::uint8_t> bits() const { return bits_; }

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// One 8-connected salient component.
struct SalientRegion {
  std::int64_t pixel_count = 0;
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  BoundingBox bbox;

  Point2d centroid() const { return {centroid_x, centroid_y}; }
  friend bool operator==(const SalientRegion&, const SalientRegion&) = default;
};

/// Label image plus regions; labels[i] is the index into `regions` of the
/// component owning pixel i, or -1 for background.
struct ComponentLabeling {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;
  std::vector<SalientRegion> regions;
};

/// Pixel salient iff intensity > t_ps.
BinaryMask binarize(const SaliencyMap& map, int t_ps);

/// 8-connected labeling. Regions ordered by descending pixel_count, then bbox,
/// then raster position of the first pixel.
ComponentLabeling label_components(const BinaryMask& mask);
std::vector<SalientRegion> connected_components(const BinaryMask& mask);

/// Keeps regions with pixel_count >= t_a, preserving order.
std::vector<SalientRegion> area_filter(std::span<const SalientRegion> regions, std::int64_t t_a);

/// 512-bin RGB histogram; each channel quantized to 8 levels (value / 32).
struct ColorHistogram {
  static constexpr int kLevels = 8;
  static constexpr int kBins = kLevels * kLevels * kLevels;

  std::array<std::uint32_t, kBins> bins{};
  std::uint64_t total = 0;

  static int bin_of(Rgb c) { return (c.r / 32) * 64 + (c.g / 32) * 8 + c.b / 32; }
  void add(Rgb c) {
    ++bins[bin_of(c)];
    ++total;
  }
  void merge(const ColorHistogram& other);

  friend bool operator==(const ColorHistogram&, const ColorHistogram&) = default;
};

/// Histogram of every pixel in the inclusive box. Throws objloc::Error when the
/// box is invalid or leaves the image.
ColorHistogram region_histogram(const RgbImage& image, const BoundingBox& box);

/// Intersection of normalized histograms, sum_b min(h1_b/t1, h2_b/t2).
/// Evaluated in integer arithmetic so equal distributions give exactly 1.0.
/// Throws objloc::Error on an empty histogram.
double histogram_similarity(const ColorHistogram& h1, const ColorHistogram& h2);

}  // namespace objloc
