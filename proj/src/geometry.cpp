#include "objloc/geometry.hpp"

#include <algorithm>
#include <numeric>

namespace objloc {

std::string to_string(const BoundingBox& b) {
  return "(" + std::to_string(b.x1) + "," + std::to_string(b.y1) + "," +
         std::to_string(b.x2) + "," + std::to_string(b.y2) + ")";
}

std::int64_t intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const int w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1) + 1;
  const int h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1) + 1;
  if (w <= 0 || h <= 0) return 0;
  return static_cast<std::int64_t>(w) * h;
}

double jaccard(const BoundingBox& a, const BoundingBox& b) {
  const std::int64_t inter = intersection_area(a, b);
  if (inter == 0) return 0.0;
  const std::int64_t uni = a.area() + b.area() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

BoundingBox union_box(const BoundingBox& a, const BoundingBox& b) {
  return {std::min(a.x1, b.x1), std::min(a.y1, b.y1), std::max(a.x2, b.x2),
          std::max(a.y2, b.y2)};
}

bool ranks_before(const RegionProposal& a, const RegionProposal& b) {
  const double sa = a.rank_score();
  const double sb = b.rank_score();
  if (sa != sb) return sa > sb;
  const auto area_a = a.box.area();
  const auto area_b = b.box.area();
  if (area_a != area_b) return area_a > area_b;
  if (a.box != b.box) return a.box < b.box;
  return a.score.has_value() && !b.score.has_value();
}

std::vector<std::size_t> nms_indices(std::span<const RegionProposal> proposals,
                                     double t_nms) {
  if (!(t_nms >= 0.0 && t_nms <= 1.0))
    throw Error("nms: threshold must lie in [0,1], got " + std::to_string(t_nms));

  std::vector<std::size_t> order(proposals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return ranks_before(proposals[i], proposals[j]);
  });

  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    const BoundingBox& box = proposals[idx].box;
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return jaccard(proposals[k].box, box) > t_nms;
    });
    if (!suppressed) kept.push_back(idx);
  }
  return kept;
}

std::vector<RegionProposal> nms(std::span<const RegionProposal> proposals, double t_nms) {
  std::vector<RegionProposal> out;
  for (std::size_t i : nms_indices(proposals, t_nms)) out.push_back(proposals[i]);
  return out;
}

}  // namespace objloc
