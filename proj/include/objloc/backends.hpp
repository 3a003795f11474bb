#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "objloc/geometry.hpp"
#include "objloc/image_io.hpp"
#include "objloc/raster.hpp"

namespace objloc {

/// Proposal-file problem tied to a 1-based line number.
class ProposalParseError : public Error {
public:
  ProposalParseError(const std::filesystem::path& path, std::size_t line, const std::string& why);
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

struct SaliencySource {
  enum class Kind { file, contrast };

  Kind kind = Kind::file;
  /// Sidecar suffix appended to the image stem, e.g. img.png -> img_saliency.png.
  std::string suffix = "_saliency";
  int blur_radius = 3;

  void validate() const;
};

struct AnchorParams {
  int stride = 16;
  std::vector<int> scales{32, 64, 128, 256};
  std::vector<double> aspects{0.5, 1.0, 2.0};
};

struct ProposalSource {
  enum class Kind { file, anchors };

  Kind kind = Kind::file;
  /// Sidecar suffix, e.g. img.png -> img_proposals.csv.
  std::string suffix = "_proposals";
  AnchorParams anchors;
  std::size_t max_proposals = 2000;

  void validate() const;
};

/// Loads a grayscale saliency raster. Raises MissingFileError, FormatError or
/// DimensionMismatchError.
SaliencyMap load_saliency(const std::filesystem::path& path, int expected_width,
                          int expected_height);

/// Fallback saliency: Euclidean distance between the image mean color and a
/// box-blurred (window 2r+1, clipped at borders) pixel color, min-max
/// normalized to 0..255. A zero-contrast image gives an all-zero map.
SaliencyMap contrast_saliency(const RgbImage& image, int blur_radius);

/// Parses `x1,y1,x2,y2[,score]` lines ('#' comments and blank lines skipped),
/// clips boxes to the image and keeps the first `max_n` in file order.
std::vector<RegionProposal> load_proposals(const std::filesystem::path& path, int image_width,
                                           int image_height, std::size_t max_n);

/// Deterministic multi-scale anchor grid. With a saliency map each box is
/// scored by its mean saliency probability and the list is ordered by score
/// before truncation; without one every box scores 0.5 in grid order.
std::vector<RegionProposal> anchor_proposals(int image_width, int image_height,
                                             const ProposalSource& source,
                                             const SaliencyMap* saliency = nullptr);

/// First existing `<dir>/<stem><suffix>.{png,pgm}` next to the image.
std::optional<std::filesystem::path> find_saliency_sidecar(const std::filesystem::path& image,
                                                           const std::string& suffix);
/// `<dir>/<stem><suffix>.csv` if it exists.
std::optional<std::filesystem::path> find_proposal_sidecar(const std::filesystem::path& image,
                                                           const std::string& suffix);

}  // namespace objloc
