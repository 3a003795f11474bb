#include "objloc/fusion.hpp"

#include <algorithm>
#include <tuple>

#include <json.hpp>

namespace objloc {

void FusionConfig::validate() const {
  if (t_ps < 0 || t_ps > 255) throw Error("t_ps must lie in 0..255");
  if (t_a < 0) throw Error("t_a must be >= 0");
  if (!(t_nms >= 0.0 && t_nms <= 1.0)) throw Error("t_nms must lie in [0,1]");
  if (!(t_hist >= 0.0 && t_hist <= 1.0)) throw Error("t_hist must lie in [0,1]");
  if (!(low_overlap_min >= 0.0 && low_overlap_min <= 1.0))
    throw Error("low_overlap_min must lie in [0,1]");
  if (low_overlap_min > t_nms)
    throw Error("low-overlap band (low_overlap_min, t_nms] is inverted");
}

FusionConfig profile_config(Profile p) {
  FusionConfig c;
  c.t_ps = 127;
  c.t_a = 300;
  c.t_hist = 1.0;
  switch (p) {
    case Profile::object_discovery:
      c.t_nms = 0.15;
      break;
    case Profile::kth_handtool:
      c.t_nms = 0.05;
      break;
  }
  return c;
}

std::optional<Profile> parse_profile(std::string_view name) {
  if (name == "object-discovery") return Profile::object_discovery;
  if (name == "kth-handtool") return Profile::kth_handtool;
  return std::nullopt;
}

std::string_view profile_name(Profile p) {
  return p == Profile::object_discovery ? "object-discovery" : "kth-handtool";
}

std::vector<Point2d> fixation_points(const SaliencyMap& map, const FusionConfig& config) {
  const auto regions = area_filter(connected_components(binarize(map, config.t_ps)), config.t_a);
  std::vector<Point2d> out;
  out.reserve(regions.size());
  for (const auto& r : regions) out.push_back(r.centroid());
  return out;
}

namespace {

bool contains_any(const BoundingBox& box, std::span<const Point2d> fixations) {
  return std::any_of(fixations.begin(), fixations.end(),
                     [&](const Point2d& f) { return box.contains(f); });
}

}  // namespace

std::vector<RegionProposal> filter_by_fixation(std::span<const RegionProposal> proposals,
                                               std::span<const Point2d> fixations) {
  std::vector<RegionProposal> kept;
  for (const auto& p : proposals)
    if (contains_any(p.box, fixations)) kept.push_back(p);
  return kept;
}

std::vector<Candidate> merge_candidates(const RgbImage& image, std::vector<Candidate> candidates,
                                        const FusionConfig& config) {
  if (!config.merge_low_overlap || candidates.size() < 2) return candidates;

  std::vector<std::optional<ColorHistogram>> hists(candidates.size());
  const auto hist = [&](std::size_t i) -> const ColorHistogram& {
    if (!hists[i]) hists[i] = region_histogram(image, candidates[i].box);
    return *hists[i];
  };

  struct Pick {
    double similarity;
    std::int64_t combined_area;
    BoundingBox first;
    BoundingBox second;
    std::size_t i;
    std::size_t j;
  };
  // true when a is preferred over b
  const auto better = [](const Pick& a, const Pick& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    if (a.combined_area != b.combined_area) return a.combined_area > b.combined_area;
    return std::tie(a.first, a.second) < std::tie(b.first, b.second);
  };

  while (true) {
    std::optional<Pick> best;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      for (std::size_t j = i + 1; j < candidates.size(); ++j) {
        const auto& a = candidates[i].box;
        const auto& b = candidates[j].box;
        const double overlap = jaccard(a, b);
        if (!(overlap > config.low_overlap_min && overlap <= config.t_nms)) continue;
        const double sim = histogram_similarity(hist(i), hist(j));
        if (sim < config.t_hist) continue;
        Pick p{sim, a.area() + b.area(), std::min(a, b), std::max(a, b), i, j};
        if (!best || better(p, *best)) best = p;
      }
    }
    if (!best) break;

    Candidate& keep = candidates[best->i];
    Candidate& gone = candidates[best->j];
    keep.box = union_box(keep.box, gone.box);
    std::vector<std::size_t> merged;
    std::set_union(keep.sources.begin(), keep.sources.end(), gone.sources.begin(),
                   gone.sources.end(), std::back_inserter(merged));
    keep.sources = std::move(merged);
    hists[best->i].reset();
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best->j));
    hists.erase(hists.begin() + static_cast<std::ptrdiff_t>(best->j));
  }
  return candidates;
}

std::vector<BoundingBox> merge_similar(const RgbImage& image,
                                       std::span<const RegionProposal> survivors,
                                       const FusionConfig& config) {
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < survivors.size(); ++i)
    candidates.push_back({survivors[i].box, {i}});
  std::vector<BoundingBox> out;
  for (auto& c : merge_candidates(image, std::move(candidates), config)) out.push_back(c.box);
  return out;
}

LocalizationResult localize(const RgbImage& image, const SaliencyMap& saliency,
                            std::span<const RegionProposal> proposals,
                            const FusionConfig& config) {
  config.validate();
  if (image.width() != saliency.width() || image.height() != saliency.height())
    throw DimensionMismatchError("localize: image is " + std::to_string(image.width()) + "x" +
                                 std::to_string(image.height()) + " but saliency map is " +
                                 std::to_string(saliency.width()) + "x" +
                                 std::to_string(saliency.height()));
  for (const auto& p : proposals)
    if (!p.box.within(image.width(), image.height()))
      throw Error("localize: proposal " + to_string(p.box) + " outside image bounds");

  LocalizationResult result;
  result.fixations = fixation_points(saliency, config);
  result.stages.proposals = proposals.size();

  std::vector<RegionProposal> filtered;
  std::vector<std::size_t> origin;
  for (std::size_t i = 0; i < proposals.size(); ++i)
    if (contains_any(proposals[i].box, result.fixations)) {
      filtered.push_back(proposals[i]);
      origin.push_back(i);
    }
  result.stages.with_fixation = filtered.size();

  std::vector<Candidate> candidates;
  for (std::size_t k : nms_indices(filtered, config.t_nms))
    candidates.push_back({filtered[k].box, {origin[k]}});
  result.stages.after_nms = candidates.size();

  candidates = merge_candidates(image, std::move(candidates), config);
  result.stages.after_merge = candidates.size();

  for (auto& c : candidates) {
    result.boxes.push_back(c.box);
    result.sources.push_back(std::move(c.sources));
  }
  return result;
}

std::string result_to_json(const LocalizationResult& result, const std::string& image_id,
                           const FusionConfig& config) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["image"] = image_id;
  ordered_json boxes = ordered_json::array();
  for (const auto& b : result.boxes) boxes.push_back({b.x1, b.y1, b.x2, b.y2});
  j["boxes"] = std::move(boxes);
  ordered_json sources = ordered_json::array();
  for (const auto& s : result.sources) sources.push_back(s);
  j["sources"] = std::move(sources);
  ordered_json fixations = ordered_json::array();
  for (const auto& f : result.fixations) fixations.push_back({f.x, f.y});
  j["fixations"] = std::move(fixations);
  j["config"] = {{"t_ps", config.t_ps},
                 {"t_a", config.t_a},
                 {"t_nms", config.t_nms},
                 {"t_hist", config.t_hist},
                 {"merge_low_overlap", config.merge_low_overlap},
                 {"low_overlap_min", config.low_overlap_min}};
  return j.dump(2) + "\n";
}

}  // namespace objloc
