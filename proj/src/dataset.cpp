#include "objloc/dataset.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "objloc/backends.hpp"

namespace objloc {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 2> kCameras{"Camera1", "Camera2"};
constexpr std::array<std::string_view, 3> kIlluminations{"artificial", "natural", "directional"};

bool in_set(std::string_view v, std::span<const std::string_view> set) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return !suffix.empty() && s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_image_file(const fs::path& p, const ScanOptions& options) {
  const auto ext = lower(p.extension().string());
  if (ext != ".png" && ext != ".ppm" && ext != ".pgm") return false;
  return !ends_with(p.stem().string(), options.saliency_suffix);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

struct TruthRow {
  std::string category;
  std::vector<BoundingBox> boxes;
};

std::map<std::string, TruthRow> read_ground_truth(const fs::path& path) {
  std::map<std::string, TruthRow> rows;
  std::ifstream in(path);
  if (!in) throw DatasetError(path.string() + ": cannot read ground truth");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto where = path.string() + ":" + std::to_string(lineno) + ": ";
    const auto fields = split(body, ',');
    if (lineno == 1 && fields.front() == "image_id") continue;
    if (fields.size() != 6)
      throw DatasetError(where + "expected image_id,category,x1,y1,x2,y2");
    std::array<int, 4> c{};
    for (int i = 0; i < 4; ++i) {
      const auto f = fields[2 + i];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), c[i]);
      if (ec != std::errc{} || ptr != f.data() + f.size() || f.empty())
        throw DatasetError(where + "bad coordinate '" + std::string(f) + "'");
    }
    const BoundingBox box{c[0], c[1], c[2], c[3]};
    if (!box.valid()) throw DatasetError(where + "invalid box " + to_string(box));
    if (fields[0].empty()) throw DatasetError(where + "empty image_id");
    auto& row = rows[std::string(fields[0])];
    row.category = std::string(fields[1]);
    row.boxes.push_back(box);
  }
  return rows;
}

}  // namespace

std::optional<Layout> parse_layout(std::string_view name) {
  if (name == "flat") return Layout::flat;
  if (name == "object-discovery") return Layout::object_discovery;
  if (name == "kth-handtool") return Layout::kth_handtool;
  return std::nullopt;
}

std::string_view layout_name(Layout layout) {
  switch (layout) {
    case Layout::flat:
      return "flat";
    case Layout::object_discovery:
      return "object-discovery";
    case Layout::kth_handtool:
      return "kth-handtool";
  }
  return "flat";
}

std::string ManifestEntry::group() const {
  if (!camera.empty()) return camera + "/" + illumination + "/" + category;
  return category;
}

DatasetManifest scan(const fs::path& root, Layout layout, const ScanOptions& options) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw DatasetError(root.string() + ": not a readable directory");

  DatasetManifest manifest;
  manifest.root = root;
  manifest.layout = layout;

  const std::size_t depth = layout == Layout::flat ? 1 : layout == Layout::object_discovery ? 2 : 5;
  std::set<std::string> groups;

  std::vector<fs::path> images;
  try {
    for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator();
         ++it) {
      const auto rel = fs::relative(it->path(), root);
      const auto parts = static_cast<std::size_t>(std::distance(rel.begin(), rel.end()));
      if (it->is_directory()) {
        if (parts >= depth) it.disable_recursion_pending();
        if (layout == Layout::object_discovery && parts == 1) groups.insert(rel.string());
        if (layout == Layout::kth_handtool && parts <= 2) {
          const auto name = rel.filename().string();
          const bool ok = parts == 1 ? in_set(name, kCameras) : in_set(name, kIlluminations);
          if (!ok)
            throw DatasetError(it->path().string() + ": unexpected " +
                               (parts == 1 ? "camera" : "illumination") + " directory '" + name +
                               "'");
        }
        continue;
      }
      if (parts == depth && it->is_regular_file() && is_image_file(it->path(), options))
        images.push_back(it->path());
    }
  } catch (const fs::filesystem_error& e) {
    throw DatasetError(std::string("scan failed: ") + e.what());
  }
  std::sort(images.begin(), images.end());

  const auto gt_path = root / options.ground_truth_file;
  std::map<std::string, TruthRow> truth;
  if (fs::is_regular_file(gt_path, ec)) truth = read_ground_truth(gt_path);

  for (const auto& image : images) {
    ManifestEntry e;
    const auto rel = fs::relative(image, root);
    e.image_id = (rel.parent_path() / rel.stem()).generic_string();
    e.image = image;
    e.saliency = find_saliency_sidecar(image, options.saliency_suffix);
    e.proposals = find_proposal_sidecar(image, options.proposal_suffix);
    std::vector<std::string> dirs;
    for (const auto& part : rel.parent_path()) dirs.push_back(part.string());
    if (const auto t = truth.find(e.image_id); t != truth.end()) {
      e.category = t->second.category;
      e.truth = t->second.boxes;
    }
    if (layout == Layout::object_discovery) {
      e.category = dirs[0];
    } else if (layout == Layout::kth_handtool) {
      e.camera = dirs[0];
      e.illumination = dirs[1];
      e.category = dirs[2];
    }
    groups.insert(e.group());
    manifest.entries.push_back(std::move(e));
  }
  manifest.groups.assign(groups.begin(), groups.end());
  return manifest;
}

std::string manifest_to_json(const DatasetManifest& manifest) {
  using nlohmann::ordered_json;
  const auto rel = [&](const fs::path& p) { return p.lexically_relative(manifest.root).generic_string(); };
  ordered_json j;
  j["root"] = manifest.root.generic_string();
  j["layout"] = std::string(layout_name(manifest.layout));
  j["groups"] = manifest.groups;
  ordered_json entries = ordered_json::array();
  for (const auto& e : manifest.entries) {
    ordered_json je;
    je["image_id"] = e.image_id;
    je["image"] = rel(e.image);
    je["saliency"] = e.saliency ? ordered_json(rel(*e.saliency)) : ordered_json(nullptr);
    je["proposals"] = e.proposals ? ordered_json(rel(*e.proposals)) : ordered_json(nullptr);
    je["category"] = e.category;
    je["camera"] = e.camera;
    je["illumination"] = e.illumination;
    ordered_json truth = ordered_json::array();
    for (const auto& b : e.truth) truth.push_back({b.x1, b.y1, b.x2, b.y2});
    je["truth"] = std::move(truth);
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

DatasetManifest manifest_from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    DatasetManifest m;
    m.root = fs::path(j.at("root").get<std::string>());
    const auto layout = parse_layout(j.at("layout").get<std::string>());
    if (!layout) throw DatasetError("manifest: unknown layout");
    m.layout = *layout;
    m.groups = j.at("groups").get<std::vector<std::string>>();
    for (const auto& je : j.at("entries")) {
      ManifestEntry e;
      e.image_id = je.at("image_id").get<std::string>();
      e.image = m.root / je.at("image").get<std::string>();
      if (!je.at("saliency").is_null()) e.saliency = m.root / je.at("saliency").get<std::string>();
      if (!je.at("proposals").is_null())
        e.proposals = m.root / je.at("proposals").get<std::string>();
      e.category = je.at("category").get<std::string>();
      e.camera = je.at("camera").get<std::string>();
      e.illumination = je.at("illumination").get<std::string>();
      for (const auto& b : je.at("truth")) e.truth.push_back({b.at(0), b.at(1), b.at(2), b.at(3)});
      m.entries.push_back(std::move(e));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(std::string("manifest: ") + e.what());
  }
}

}  // namespace objloc
