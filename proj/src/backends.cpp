#include "objloc/backends.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <string_view>

namespace objloc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

// Summed-area table over a single channel, (w+1)x(h+1), zero first row/col.
class IntegralImage {
public:
  template <typename Get>
  IntegralImage(int w, int h, Get get) : w_(w), sums_((w + 1) * static_cast<std::size_t>(h + 1)) {
    for (int y = 0; y < h; ++y) {
      std::uint64_t row = 0;
      for (int x = 0; x < w; ++x) {
        row += get(x, y);
        sums_[idx(x + 1, y + 1)] = sums_[idx(x + 1, y)] + row;
      }
    }
  }
  std::uint64_t sum(int x1, int y1, int x2, int y2) const {
    return sums_[idx(x2 + 1, y2 + 1)] - sums_[idx(x1, y2 + 1)] - sums_[idx(x2 + 1, y1)] +
           sums_[idx(x1, y1)];
  }

private:
  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * (w_ + 1) + x; }
  int w_;
  std::vector<std::uint64_t> sums_;
};

}  // namespace

ProposalParseError::ProposalParseError(const std::filesystem::path& path, std::size_t line,
                                       const std::string& why)
    : Error(path.string() + ":" + std::to_string(line) + ": " + why), line_(line) {}

void SaliencySource::validate() const {
  if (blur_radius < 0) throw Error("saliency blur radius must be >= 0");
}

void ProposalSource::validate() const {
  if (max_proposals < 1) throw Error("max_proposals must be >= 1");
  if (anchors.stride <= 0) throw Error("anchor stride must be positive");
  if (anchors.scales.empty() || anchors.aspects.empty())
    throw Error("anchor scales and aspects must be non-empty");
  for (int s : anchors.scales)
    if (s <= 0) throw Error("anchor scales must be positive");
  for (double a : anchors.aspects)
    if (!(a > 0.0) || !std::isfinite(a)) throw Error("anchor aspects must be positive");
}

SaliencyMap load_saliency(const std::filesystem::path& path, int expected_width,
                          int expected_height) {
  SaliencyMap map = read_gray_image(path);
  if (map.width() != expected_width || map.height() != expected_height)
    throw DimensionMismatchError(path.string() + ": saliency map is " +
                                 std::to_string(map.width()) + "x" +
                                 std::to_string(map.height()) + ", image is " +
                                 std::to_string(expected_width) + "x" +
                                 std::to_string(expected_height));
  return map;
}

SaliencyMap contrast_saliency(const RgbImage& image, int blur_radius) {
  if (image.empty()) throw Error("contrast_saliency: empty image");
  if (blur_radius < 0) throw Error("contrast_saliency: negative blur radius");
  const int w = image.width();
  const int h = image.height();

  std::array<IntegralImage, 3> integral{
      IntegralImage(w, h, [&](int x, int y) { return image.at(x, y).r; }),
      IntegralImage(w, h, [&](int x, int y) { return image.at(x, y).g; }),
      IntegralImage(w, h, [&](int x, int y) { return image.at(x, y).b; })};

  const double n = static_cast<double>(w) * h;
  std::array<double, 3> mean{};
  for (int c = 0; c < 3; ++c)
    mean[c] = static_cast<double>(integral[c].sum(0, 0, w - 1, h - 1)) / n;

  std::vector<double> dist(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    const int y1 = std::max(0, y - blur_radius);
    const int y2 = std::min(h - 1, y + blur_radius);
    for (int x = 0; x < w; ++x) {
      const int x1 = std::max(0, x - blur_radius);
      const int x2 = std::min(w - 1, x + blur_radius);
      const double count = static_cast<double>(x2 - x1 + 1) * (y2 - y1 + 1);
      double sq = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double d = static_cast<double>(integral[c].sum(x1, y1, x2, y2)) / count - mean[c];
        sq += d * d;
      }
      dist[static_cast<std::size_t>(y) * w + x] = std::sqrt(sq);
    }
  }

  const auto [lo, hi] = std::minmax_element(dist.begin(), dist.end());
  const double dmin = *lo;
  const double range = *hi - dmin;
  std::vector<std::uint8_t> out(dist.size(), 0);
  if (range > 1e-12)
    for (std::size_t i = 0; i < dist.size(); ++i)
      out[i] = static_cast<std::uint8_t>(std::lround(255.0 * (dist[i] - dmin) / range));
  return SaliencyMap(w, h, std::move(out));
}

std::vector<RegionProposal> load_proposals(const std::filesystem::path& path, int image_width,
                                           int image_height, std::size_t max_n) {
  std::ifstream in(path);
  if (!in) throw MissingFileError(path.string() + ": cannot open proposal file");

  std::vector<RegionProposal> out;
  std::string line;
  std::size_t lineno = 0;
  while (out.size() < max_n && std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      fields.push_back(body.substr(start, comma == std::string_view::npos ? comma : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4 && fields.size() != 5)
      throw ProposalParseError(path, lineno,
                               "expected x1,y1,x2,y2[,score], got " +
                                   std::to_string(fields.size()) + " fields");
    std::array<int, 4> c{};
    for (int i = 0; i < 4; ++i)
      if (!parse_number(fields[i], c[i]))
        throw ProposalParseError(path, lineno,
                                 "bad integer coordinate '" + std::string(trim(fields[i])) + "'");
    RegionProposal p;
    p.box = {c[0], c[1], c[2], c[3]};
    if (fields.size() == 5) {
      double s = 0.0;
      if (!parse_number(fields[4], s))
        throw ProposalParseError(path, lineno, "bad score '" + std::string(trim(fields[4])) + "'");
      if (!(s >= 0.0 && s <= 1.0))
        throw ProposalParseError(path, lineno, "score outside [0,1]");
      p.score = s;
    }
    if (p.box.x2 < p.box.x1 || p.box.y2 < p.box.y1)
      throw ProposalParseError(path, lineno, "box " + to_string(p.box) + " has x2<x1 or y2<y1");
    if (p.box.x2 < 0 || p.box.y2 < 0 || p.box.x1 >= image_width || p.box.y1 >= image_height)
      throw ProposalParseError(path, lineno, "box " + to_string(p.box) + " lies outside the " +
                                                 std::to_string(image_width) + "x" +
                                                 std::to_string(image_height) + " image");
    p.box.x1 = std::max(p.box.x1, 0);
    p.box.y1 = std::max(p.box.y1, 0);
    p.box.x2 = std::min(p.box.x2, image_width - 1);
    p.box.y2 = std::min(p.box.y2, image_height - 1);
    out.push_back(p);
  }
  return out;
}

std::vector<RegionProposal> anchor_proposals(int image_width, int image_height,
                                             const ProposalSource& source,
                                             const SaliencyMap* saliency) {
  source.validate();
  if (image_width <= 0 || image_height <= 0)
    throw Error("anchor_proposals: dimensions must be positive");
  if (saliency && (saliency->width() != image_width || saliency->height() != image_height))
    throw DimensionMismatchError("anchor_proposals: saliency map size differs from image");

  const int stride = source.anchors.stride;
  // Centers are spread symmetrically: n = max(1, dim / stride) of them.
  const auto centers = [stride](int dim) {
    const int n = std::max(1, dim / stride);
    const int first = (dim - (n - 1) * stride) / 2;
    std::vector<int> cs(n);
    for (int k = 0; k < n; ++k) cs[k] = first + k * stride;
    return cs;
  };

  struct Shape {
    int w;
    int h;
  };
  std::vector<Shape> shapes;
  for (int s : source.anchors.scales)
    for (double a : source.anchors.aspects) {
      const double root = std::sqrt(a);
      shapes.push_back({std::max(1, static_cast<int>(std::lround(s * root))),
                        std::max(1, static_cast<int>(std::lround(s / root)))});
    }

  std::vector<RegionProposal> out;
  std::set<BoundingBox> seen;
  for (int cy : centers(image_height))
    for (int cx : centers(image_width))
      for (const Shape& sh : shapes) {
        const int x1 = cx - sh.w / 2;
        const int y1 = cy - sh.h / 2;
        BoundingBox b{std::max(0, x1), std::max(0, y1), std::min(image_width - 1, x1 + sh.w - 1),
                      std::min(image_height - 1, y1 + sh.h - 1)};
        if (seen.insert(b).second) out.push_back({b, 0.5});
      }

  if (saliency) {
    IntegralImage integral(image_width, image_height,
                           [&](int x, int y) { return saliency->at(x, y); });
    for (auto& p : out) {
      const auto& b = p.box;
      p.score = static_cast<double>(integral.sum(b.x1, b.y1, b.x2, b.y2)) /
                (255.0 * static_cast<double>(b.area()));
    }
    std::stable_sort(out.begin(), out.end(), [](const RegionProposal& a, const RegionProposal& b) {
      return *a.score > *b.score;
    });
  }
  if (out.size() > source.max_proposals) out.resize(source.max_proposals);
  return out;
}

std::optional<std::filesystem::path> find_saliency_sidecar(const std::filesystem::path& image,
                                                           const std::string& suffix) {
  const auto base = image.parent_path() / (image.stem().string() + suffix);
  for (const char* ext : {".png", ".pgm"}) {
    auto candidate = base;
    candidate += ext;
    std::error_code ec;
    if (std::filesystem::is_regular_file(candidate, ec)) return candidate;
  }
  return std::nullopt;
}

std::optional<std::filesystem::path> find_proposal_sidecar(const std::filesystem::path& image,
                                                           const std::string& suffix) {
  auto candidate = image.parent_path() / (image.stem().string() + suffix + ".csv");
  std::error_code ec;
  if (std::filesystem::is_regular_file(candidate, ec)) return candidate;
  return std::nullopt;
}

}  // namespace objloc
