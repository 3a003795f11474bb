#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "objloc/raster.hpp"

namespace objloc {

/// Raw 8-bit decode result; channels is 1 (gray) or 3 (RGB).
struct DecodedImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;
};

/// Reads an 8-bit grayscale or 24-bit RGB image stored as PNG or binary
/// PGM/PPM (P5/P6). The container is detected from the file's magic bytes.
DecodedImage read_image(const std::filesystem::path& path);

/// Color image; grayscale files are replicated into all three channels.
RgbImage read_rgb_image(const std::filesystem::path& path);

/// Grayscale only; color files raise FormatError.
SaliencyMap read_gray_image(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const RgbImage& image);
void write_png(const std::filesystem::path& path, const SaliencyMap& map);
void write_ppm(const std::filesystem::path& path, const RgbImage& image);
void write_pgm(const std::filesystem::path& path, const SaliencyMap& map);

}  // namespace objloc
