#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "objloc/geometry.hpp"
#include "objloc/raster.hpp"

namespace objloc {

/// Thresholds for fusing a saliency map with region proposals.
///
/// Pairs of surviving boxes are merge candidates when their jaccard lies in
/// the band (low_overlap_min, t_nms] and the color-histogram similarity of
/// their regions is at least t_hist.
struct FusionConfig {
  int t_ps = 127;            ///< saliency intensity threshold (strict >)
  std::int64_t t_a = 300;    ///< minimum salient-region area, pixels
  double t_nms = 0.15;
  double t_hist = 1.0;
  bool merge_low_overlap = true;
  double low_overlap_min = 0.0;

  /// Throws objloc::Error describing the first violated constraint.
  void validate() const;

  friend bool operator==(const FusionConfig&, const FusionConfig&) = default;
};

enum class Profile { object_discovery, kth_handtool };

/// Published threshold sets: object-discovery (t_a 300, t_nms 0.15, t_hist 1.0)
/// and kth-handtool (t_a 300, t_nms 0.05, t_hist 1.0); t_ps stays 127.
FusionConfig profile_config(Profile p);
std::optional<Profile> parse_profile(std::string_view name);
std::string_view profile_name(Profile p);

/// Saliency region centroids: binarize(t_ps) -> 8-connected components ->
/// area filter (t_a). Order follows the component order (largest first).
std::vector<Point2d> fixation_points(const SaliencyMap& map, const FusionConfig& config);

/// Keeps proposals whose inclusive box contains at least one fixation.
std::vector<RegionProposal> filter_by_fixation(std::span<const RegionProposal> proposals,
                                               std::span<const Point2d> fixations);

/// A box together with the proposal indices it was built from.
struct Candidate {
  BoundingBox box;
  std::vector<std::size_t> sources;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Repeatedly replaces the best eligible low-overlap pair with its union box
/// until none remain. Best = highest histogram similarity, then larger
/// combined area, then lexicographically smaller box pair. Merged boxes do not
/// re-enter NMS. No-op when config.merge_low_overlap is false.
std::vector<Candidate> merge_candidates(const RgbImage& image, std::vector<Candidate> candidates,
                                        const FusionConfig& config);

std::vector<BoundingBox> merge_similar(const RgbImage& image,
                                       std::span<const RegionProposal> survivors,
                                       const FusionConfig& config);

struct StageCounts {
  std::size_t proposals = 0;
  std::size_t with_fixation = 0;
  std::size_t after_nms = 0;
  std::size_t after_merge = 0;
};

struct LocalizationResult {
  std::vector<BoundingBox> boxes;
  /// sources[k] lists input-proposal indices merged into boxes[k], ascending.
  std::vector<std::vector<std::size_t>> sources;
  std::vector<Point2d> fixations;
  StageCounts stages;
};

/// fixation_points -> filter_by_fixation -> nms(t_nms) -> merge_candidates.
/// Throws DimensionMismatchError when image and saliency sizes differ, and
/// objloc::Error for an invalid config or out-of-bounds proposal.
LocalizationResult localize(const RgbImage& image, const SaliencyMap& saliency,
                            std::span<const RegionProposal> proposals,
                            const FusionConfig& config);

/// Stable-key-order JSON: image, boxes, sources, fixations, config.
std::string result_to_json(const LocalizationResult& result, const std::string& image_id,
                           const FusionConfig& config);

}  // namespace objloc
