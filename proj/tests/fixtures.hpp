// Synthetic scenes with planted objects, shared by unit and acceptance tests.
#pragma once

#include <random>
#include <vector>

#include "objloc/fusion.hpp"
#include "objloc/raster.hpp"

namespace fixtures {

struct Scene {
  objloc::RgbImage image;
  objloc::SaliencyMap saliency;
  std::vector<objloc::RegionProposal> proposals;
  std::vector<objloc::BoundingBox> objects;
};

inline void paint(Scene& s, const objloc::BoundingBox& b, objloc::Rgb color) {
  for (int y = b.y1; y <= b.y2; ++y)
    for (int x = b.x1; x <= b.x2; ++x) {
      s.image.set(x, y, color);
      s.saliency.set(x, y, 255);
    }
}

inline double centroid_coord(int lo, int hi) { return (lo + hi) / 2.0; }

/// Random box inside w x h that contains none of `avoid` (checked point by
/// point with inclusive bounds).
inline objloc::BoundingBox box_avoiding(std::mt19937& rng, int w, int h,
                                        const std::vector<objloc::Point2d>& avoid) {
  std::uniform_int_distribution<int> dx(0, w - 1), dy(0, h - 1);
  while (true) {
    int x1 = dx(rng), x2 = dx(rng), y1 = dy(rng), y2 = dy(rng);
    if (x1 > x2) std::swap(x1, x2);
    if (y1 > y2) std::swap(y1, y2);
    const objloc::BoundingBox b{x1, y1, x2, y2};
    bool hit = false;
    for (const auto& p : avoid)
      hit |= x1 <= p.x && p.x <= x2 && y1 <= p.y && p.y <= y2;
    if (!hit) return b;
  }
}

/// 200x150 gray scene with a red 40x40 and a blue 50x50 object whose
/// saliency is 255; proposals are the two object boxes plus `distractors`
/// random boxes that contain neither object centroid.
inline Scene two_blob_scene(unsigned seed, int distractors = 50) {
  Scene s{objloc::RgbImage(200, 150, objloc::Rgb{110, 110, 110}), objloc::SaliencyMap(200, 150, 0),
          {}, {}};
  s.objects = {{20, 30, 59, 69}, {120, 60, 169, 109}};
  paint(s, s.objects[0], {220, 20, 20});
  paint(s, s.objects[1], {20, 20, 220});
  const std::vector<objloc::Point2d> centroids{{39.5, 49.5}, {144.5, 84.5}};
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  s.proposals.push_back({s.objects[0], 0.9});
  for (int i = 0; i < distractors; ++i)
    s.proposals.push_back({box_avoiding(rng, 200, 150, centroids), score(rng)});
  s.proposals.push_back({s.objects[1], 0.8});
  return s;
}

/// Random blobs and random proposals, for invariant checks.
inline Scene random_scene(std::mt19937& rng, int w = 96, int h = 80, int blobs = 4,
                          int proposals = 150) {
  Scene s{objloc::RgbImage(w, h, objloc::Rgb{40, 40, 40}), objloc::SaliencyMap(w, h, 0), {}, {}};
  std::uniform_int_distribution<int> color(0, 255), size(3, 20);
  for (int i = 0; i < blobs; ++i) {
    const int bw = size(rng), bh = size(rng);
    const int x1 = static_cast<int>(rng() % static_cast<unsigned>(w - bw));
    const int y1 = static_cast<int>(rng() % static_cast<unsigned>(h - bh));
    const objloc::BoundingBox b{x1, y1, x1 + bw - 1, y1 + bh - 1};
    s.objects.push_back(b);
    paint(s, b, {static_cast<std::uint8_t>(color(rng)), static_cast<std::uint8_t>(color(rng)),
                 static_cast<std::uint8_t>(color(rng))});
  }
  std::uniform_real_distribution<double> score(0.0, 1.0);
  for (int i = 0; i < proposals; ++i) {
    if (i % 5 == 0) {
      // near-copies of objects so filtering and NMS have work to do
      auto b = s.objects[rng() % s.objects.size()];
      b.x1 = std::max(0, b.x1 - static_cast<int>(rng() % 4));
      b.y1 = std::max(0, b.y1 - static_cast<int>(rng() % 4));
      b.x2 = std::min(w - 1, b.x2 + static_cast<int>(rng() % 4));
      b.y2 = std::min(h - 1, b.y2 + static_cast<int>(rng() % 4));
      s.proposals.push_back({b, score(rng)});
    } else {
      s.proposals.push_back({box_avoiding(rng, w, h, {}), score(rng)});
    }
  }
  return s;
}

}  // namespace fixtures
