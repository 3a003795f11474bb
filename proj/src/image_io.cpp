#include "objloc/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>

namespace objloc {

namespace {

using FilePtr = std::unique_ptr<std::FILE, int (*)(std::FILE*)>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  return FilePtr(std::fopen(path.c_str(), mode), &std::fclose);
}

[[noreturn]] void format_error(const std::filesystem::path& path, const std::string& why) {
  throw FormatError(path.string() + ": " + why);
}

DecodedImage read_png(const std::filesystem::path& path) {
  FilePtr fp = open_file(path, "rb");
  if (!fp) throw MissingFileError(path.string() + ": cannot open file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error("libpng: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error("libpng: out of memory");
  }
  DecodedImage out;
  std::string problem;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    format_error(path, "corrupt PNG data");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (bit_depth != 8) {
    problem = "unsupported PNG bit depth " + std::to_string(bit_depth) + " (need 8)";
  } else if (color_type == PNG_COLOR_TYPE_GRAY) {
    out.channels = 1;
  } else if (color_type == PNG_COLOR_TYPE_RGB) {
    out.channels = 3;
  } else {
    problem = "unsupported PNG color type (need 8-bit gray or 24-bit RGB)";
  }
  if (!problem.empty()) {
    png_destroy_read_struct(&png, &info, nullptr);
    format_error(path, problem);
  }
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.data.resize(static_cast<std::size_t>(out.width) * out.height * out.channels);
  rows.resize(out.height);
  for (int y = 0; y < out.height; ++y)
    rows[y] = out.data.data() + static_cast<std::size_t>(y) * out.width * out.channels;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

// Reads one whitespace-delimited header token, skipping '#' comments.
bool pnm_token(std::istream& in, std::string& token) {
  token.clear();
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) break;
  }
  if (c == EOF) return false;
  token.push_back(static_cast<char>(c));
  while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#')
    token.push_back(static_cast<char>(in.get()));
  return true;
}

DecodedImage read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError(path.string() + ": cannot open file");
  std::string magic, w, h, maxval;
  if (!pnm_token(in, magic) || !pnm_token(in, w) || !pnm_token(in, h) ||
      !pnm_token(in, maxval))
    format_error(path, "truncated PNM header");
  DecodedImage out;
  if (magic == "P5")
    out.channels = 1;
  else if (magic == "P6")
    out.channels = 3;
  else
    format_error(path, "unsupported PNM type " + magic + " (need binary P5 or P6)");
  try {
    out.width = std::stoi(w);
    out.height = std::stoi(h);
    if (std::stoi(maxval) != 255)
      format_error(path, "unsupported PNM maxval " + maxval + " (need 8-bit, 255)");
  } catch (const std::logic_error&) {
    format_error(path, "malformed PNM header");
  }
  if (out.width <= 0 || out.height <= 0) format_error(path, "non-positive PNM dimensions");
  in.get();  // single whitespace byte before the raster
  out.data.resize(static_cast<std::size_t>(out.width) * out.height * out.channels);
  in.read(reinterpret_cast<char*>(out.data.data()),
          static_cast<std::streamsize>(out.data.size()));
  if (in.gcount() != static_cast<std::streamsize>(out.data.size()))
    format_error(path, "truncated PNM raster");
  return out;
}

void write_png_raw(const std::filesystem::path& path, int width, int height, int channels,
                   const std::uint8_t* data) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(width);
  img.height = static_cast<png_uint_32>(height);
  img.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&img, path.c_str(), 0, data, 0, nullptr))
    throw Error(path.string() + ": PNG write failed: " + img.message);
}

void write_pnm_raw(const std::filesystem::path& path, const char* magic, int width,
                   int height, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out << magic << "\n" << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(path.string() + ": write failed");
}

}  // namespace

DecodedImage read_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    throw MissingFileError(path.string() + ": no such file");
  std::array<char, 8> magic{};
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingFileError(path.string() + ": cannot open file");
    in.read(magic.data(), magic.size());
  }
  static constexpr std::array<unsigned char, 8> png_sig{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (std::equal(png_sig.begin(), png_sig.end(), reinterpret_cast<unsigned char*>(magic.data())))
    return read_png(path);
  if (magic[0] == 'P') return read_pnm(path);
  format_error(path, "unrecognized image format (need PNG, P5 PGM or P6 PPM)");
}

RgbImage read_rgb_image(const std::filesystem::path& path) {
  DecodedImage d = read_image(path);
  if (d.channels == 3) return RgbImage(d.width, d.height, std::move(d.data));
  std::vector<std::uint8_t> rgb(d.data.size() * 3);
  for (std::size_t i = 0; i < d.data.size(); ++i)
    rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = d.data[i];
  return RgbImage(d.width, d.height, std::move(rgb));
}

SaliencyMap read_gray_image(const std::filesystem::path& path) {
  DecodedImage d = read_image(path);
  if (d.channels != 1)
    format_error(path, "expected a single-channel grayscale image, found color");
  return SaliencyMap(d.width, d.height, std::move(d.data));
}

void write_png(const std::filesystem::path& path, const RgbImage& image) {
  write_png_raw(path, image.width(), image.height(), 3, image.bytes().data());
}

void write_png(const std::filesystem::path& path, const SaliencyMap& map) {
  write_png_raw(path, map.width(), map.height(), 1, map.values().data());
}

void write_ppm(const std::filesystem::path& path, const RgbImage& image) {
  write_pnm_raw(path, "P6", image.width(), image.height(), image.bytes());
}

void write_pgm(const std::filesystem::path& path, const SaliencyMap& map) {
  write_pnm_raw(path, "P5", map.width(), map.height(), map.values());
}

}  // namespace objloc
