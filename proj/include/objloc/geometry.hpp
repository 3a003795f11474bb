#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "objloc/error.hpp"

namespace objloc {

struct Point2d {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2d&, const Point2d&) = default;
};

/// Axis-aligned rectangle in inclusive integer pixel coordinates; a 1x1 box
/// has x1 == x2 and y1 == y2.
struct BoundingBox {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;

  int width() const { return x2 - x1 + 1; }
  int height() const { return y2 - y1 + 1; }
  std::int64_t area() const {
    return static_cast<std::int64_t>(width()) * height();
  }

  /// Non-negative coordinates with x1 <= x2 and y1 <= y2.
  bool valid() const { return x1 >= 0 && y1 >= 0 && x1 <= x2 && y1 <= y2; }
  bool within(int image_width, int image_height) const {
    return valid() && x2 < image_width && y2 < image_height;
  }
  bool contains(Point2d p) const {
    return x1 <= p.x && p.x <= x2 && y1 <= p.y && p.y <= y2;
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
  friend auto operator<=>(const BoundingBox&, const BoundingBox&) = default;
};

std::string to_string(const BoundingBox& b);

/// A candidate box with an optional objectness score in [0,1].
struct RegionProposal {
  BoundingBox box;
  std::optional<double> score;

  /// Ranking score; absent scores rank as 0.5.
  double rank_score() const { return score.value_or(0.5); }

  friend bool operator==(const RegionProposal&, const RegionProposal&) = default;
};

/// Number of pixels shared by both boxes (0 when disjoint).
std::int64_t intersection_area(const BoundingBox& a, const BoundingBox& b);

/// |a ∩ b| / |a ∪ b| over inclusive pixel areas.
double jaccard(const BoundingBox& a, const BoundingBox& b);

/// Smallest box containing both inputs.
BoundingBox union_box(const BoundingBox& a, const BoundingBox& b);

/// Strict weak ordering used for NMS: score descending, then area descending,
/// then (x1,y1,x2,y2) ascending. Score-present sorts before score-absent at
/// equal rank so the order is total on distinct values.
bool ranks_before(const RegionProposal& a, const RegionProposal& b);

/// Greedy non-maximum suppression. Returns the kept proposals in rank order;
/// a proposal is dropped when its jaccard with an already kept one exceeds
/// `t_nms`. Throws objloc::Error when t_nms is outside [0,1].
std::vector<RegionProposal> nms(std::span<const RegionProposal> proposals, double t_nms);

/// Same as nms() but returns indices into `proposals`.
std::vector<std::size_t> nms_indices(std::span<const RegionProposal> proposals, double t_nms);

}  // namespace objloc
