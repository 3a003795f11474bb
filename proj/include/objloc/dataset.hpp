#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "objloc/geometry.hpp"

namespace objloc {

/// Directory conventions understood by scan():
///   flat              <root>/<image>
///   object-discovery  <root>/<category>/<image>
///   kth-handtool      <root>/<camera>/<illumination>/<category>/<instance>/<image>
/// with camera in {Camera1, Camera2} and illumination in
/// {artificial, natural, directional}. Ground truth lives in
/// <root>/ground_truth.csv as `image_id,category,x1,y1,x2,y2`, where image_id
/// is the image path relative to root without extension.
enum class Layout { flat, object_discovery, kth_handtool };

std::optional<Layout> parse_layout(std::string_view name);
std::string_view layout_name(Layout layout);

/// Malformed dataset input; messages carry "file:line" when a line is known.
class DatasetError : public Error {
public:
  using Error::Error;
};

struct ManifestEntry {
  std::string image_id;
  std::filesystem::path image;
  std::optional<std::filesystem::path> saliency;
  std::optional<std::filesystem::path> proposals;
  std::string category;
  std::string camera;        ///< kth-handtool only
  std::string illumination;  ///< kth-handtool only
  std::vector<BoundingBox> truth;

  /// Evaluation group: category, or camera/illumination/category for KTH.
  std::string group() const;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
  std::filesystem::path root;
  Layout layout = Layout::flat;
  std::vector<ManifestEntry> entries;
  /// Every evaluation group the layout declares, sorted. For
  /// object-discovery this includes category directories holding no images.
  std::vector<std::string> groups;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

struct ScanOptions {
  std::string saliency_suffix = "_saliency";
  std::string proposal_suffix = "_proposals";
  std::string ground_truth_file = "ground_truth.csv";
};

/// Builds a manifest sorted by image path. Missing sidecars and missing
/// ground truth are recorded as absent/empty. Throws DatasetError for an
/// unreadable root, a directory outside the layout's closed sets, or a
/// malformed ground-truth row.
DatasetManifest scan(const std::filesystem::path& root, Layout layout,
                     const ScanOptions& options = {});

/// Manifest JSON with paths stored relative to the root.
std::string manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(std::string_view json);

}  // namespace objloc
