#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "objloc/image_io.hpp"
#include "oracles.hpp"
#include "synthetic_dataset.hpp"
#include "test_util.hpp"

using namespace objloc;
using testutil::read_file;
using testutil::TempDir;
using testutil::write_file;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

/// Writes the two-blob scene as <dir>/scene.png plus sidecars.
std::filesystem::path write_scene(const TempDir& dir, bool sidecars = true) {
  const auto s = fixtures::two_blob_scene(5);
  write_png(dir / "scene.png", s.image);
  if (sidecars) {
    write_png(dir / "scene_saliency.png", s.saliency);
    std::ostringstream csv;
    for (const auto& p : s.proposals)
      csv << p.box.x1 << "," << p.box.y1 << "," << p.box.x2 << "," << p.box.y2 << ","
          << *p.score << "\n";
    write_file(dir / "scene_proposals.csv", csv.str());
  }
  return dir / "scene.png";
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--t-nms", "1.5", "config"}).code == 2);
  CHECK(run({"config", "--t-nms", "1.5"}).code == 2);
  CHECK(run({"config", "--t-hist", "-0.1"}).code == 2);
  CHECK(run({"config", "--profile", "voc"}).code == 2);
  CHECK(run({"config", "--jobs", "0"}).code == 2);
  CHECK(run({"config", "--t-nms", "0.1", "--low-overlap-min", "0.2"}).code == 2);
  CHECK(run({"localize"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("config reflects profiles and overrides") {
  const auto od = run({"config", "--profile", "object-discovery"});
  REQUIRE(od.code == 0);
  CHECK(od.out.find("t-ps = 127\n") != std::string::npos);
  CHECK(od.out.find("t-a = 300\n") != std::string::npos);
  CHECK(od.out.find("t-nms = 0.15\n") != std::string::npos);
  CHECK(od.out.find("t-hist = 1.0\n") != std::string::npos);

  const auto kth = run({"config", "--profile", "kth-handtool"});
  CHECK(kth.out.find("t-nms = 0.05\n") != std::string::npos);
  CHECK(kth.out.find("t-a = 300\n") != std::string::npos);

  CHECK(run({"config"}).out.find("t-nms = 0.15\n") != std::string::npos);

  const auto over = run({"--profile", "kth-handtool", "config", "--t-nms", "0.3", "--t-a", "10"});
  CHECK(over.out.find("t-nms = 0.3\n") != std::string::npos);
  CHECK(over.out.find("t-a = 10\n") != std::string::npos);
}

TEST_CASE("config file round trip; flags win") {
  TempDir dir("cli_cfg");
  const auto first = run({"config", "--profile", "kth-handtool", "--t-hist", "0.8", "--anchor-scales",
                          "16,48", "--report", "csv", "--no-merge"});
  REQUIRE(first.code == 0);
  write_file(dir / "run.toml", first.out);
  const auto again = run({"config", "--config", (dir / "run.toml").string()});
  REQUIRE(again.code == 0);
  CHECK(again.out == first.out);

  const auto flag = run({"config", "--config", (dir / "run.toml").string(), "--t-hist", "0.5"});
  CHECK(flag.out.find("t-hist = 0.5\n") != std::string::npos);
  CHECK(flag.out.find("t-nms = 0.05\n") != std::string::npos);
}

TEST_CASE("localize writes JSON matching the fusion result") {
  TempDir dir("cli_loc");
  const auto image = write_scene(dir);
  const auto printed = run({"localize", image.string()});
  REQUIRE(printed.code == 0);
  const auto j = nlohmann::json::parse(printed.out);
  CHECK(j["image"] == "scene");
  REQUIRE(j["boxes"].size() == 2);
  CHECK(j["boxes"][0] == nlohmann::json{20, 30, 59, 69});  // higher proposal score first
  CHECK(j["boxes"][1] == nlohmann::json{120, 60, 169, 109});
  CHECK(j["fixations"][0] == nlohmann::json{144.5, 84.5});

  const auto s = fixtures::two_blob_scene(5);
  const auto direct = localize(s.image, s.saliency, s.proposals, FusionConfig{});
  CHECK(printed.out == result_to_json(direct, "scene", FusionConfig{}));

  const auto written = run({"localize", image.string(), "--out", (dir / "o").string(), "--overlay"});
  REQUIRE(written.code == 0);
  CHECK(read_file(dir / "o/scene.json") == printed.out);
  const auto overlay = read_rgb_image(dir / "o/scene_overlay.png");
  CHECK(overlay.width() == 200);
  CHECK(overlay.at(120, 60) == Rgb{0, 255, 0});
  CHECK(overlay.at(144, 84) == Rgb{255, 0, 0});
}

TEST_CASE("localize: missing sidecars") {
  TempDir dir("cli_missing");
  const auto image = write_scene(dir, false);
  const auto r = run({"localize", image.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find((dir / "scene_saliency.png").string()) != std::string::npos);

  CHECK(run({"localize", image.string(), "--fallback"}).code == 0);
  CHECK(run({"localize", image.string(), "--saliency", "contrast", "--proposals", "anchors"}).code == 0);
  CHECK(run({"localize", (dir / "nope.png").string(), "--fallback"}).code == 1);

  // explicit sidecar paths bypass discovery
  const auto s = fixtures::two_blob_scene(5);
  write_png(dir / "elsewhere.png", s.saliency);
  write_file(dir / "boxes.csv", "20,30,59,69,0.9\n");
  const auto ex = run({"localize", image.string(), "--saliency-file", (dir / "elsewhere.png").string(),
                       "--proposals-file", (dir / "boxes.csv").string()});
  REQUIRE(ex.code == 0);
  CHECK(nlohmann::json::parse(ex.out)["boxes"] == nlohmann::json{{20, 30, 59, 69}});

  write_file(dir / "bad.csv", "1,2,3\n");
  const auto bad = run({"localize", image.string(), "--saliency-file", (dir / "elsewhere.png").string(),
                        "--proposals-file", (dir / "bad.csv").string()});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("bad.csv:1") != std::string::npos);
}

TEST_CASE("eval: all correct gives 100.0") {
  TempDir dir("cli_eval_ok");
  synthetic::SuiteOptions suite;
  suite.images_per_category = 4;
  synthetic::write_suite(dir.path(), suite);
  const auto r = run({"eval", dir.path().string(), "--layout", "object-discovery", "--report-label",
                      "Ours"});
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "| Method | Airplane | Car | Horse | Average |\n"
        "| --- | --- | --- | --- | --- |\n"
        "| Ours | 100.0 | 100.0 | 100.0 | 100.0 |\n");
}

TEST_CASE("eval: one category at two of three") {
  TempDir dir("cli_eval_23");
  synthetic::SuiteOptions suite;
  suite.images_per_category = 3;
  suite.misses = {{"car", 1}};
  const auto images = synthetic::write_suite(dir.path(), suite);
  for (const auto& im : images) {
    const auto o = oracle::raster_overlap(im.object, im.truth);
    const bool expect_hit = im.object == im.truth;
    CHECK((2 * o.intersection > o.union_) == expect_hit);
  }
  const auto r = run({"eval", dir.path().string(), "--layout", "object-discovery", "--report", "csv",
                      "--out", (dir / "out").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "category,images,localized,corloc\n"
        "airplane,3,3,100.0\n"
        "car,3,2,66.7\n"
        "horse,3,3,100.0\n"
        "Average,9,8,88.9\n");
  CHECK(read_file(dir / "out/report.csv") == r.out);
  CHECK(std::filesystem::exists(dir / "out/results/car/0000.json"));
}

TEST_CASE("eval: output independent of --jobs") {
  TempDir dir("cli_eval_jobs");
  synthetic::SuiteOptions suite;
  suite.images_per_category = 6;
  suite.misses = {{"horse", 2}};
  synthetic::write_suite(dir.path(), suite);
  TempDir outs("cli_eval_jobs_out");
  const auto one = run({"eval", dir.path().string(), "--layout", "object-discovery", "--jobs", "1",
                        "--out", (outs / "j1").string(), "--overlay"});
  const auto eight = run({"eval", dir.path().string(), "--layout", "object-discovery", "--jobs", "8",
                          "--out", (outs / "j8").string(), "--overlay"});
  REQUIRE(one.code == 0);
  INFO(eight.err);
  REQUIRE(eight.code == 0);
  CHECK(one.out == eight.out);
  CHECK(read_file(outs / "j1/report.md") == read_file(outs / "j8/report.md"));
  for (const auto& e : std::filesystem::recursive_directory_iterator(outs / "j1")) {
    if (!e.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(e.path(), outs / "j1");
    CHECK(read_file(e.path()) == read_file(outs / "j8" / rel));
  }
  CHECK(std::filesystem::exists(outs / "j1/overlays/horse/0005.png"));
}

TEST_CASE("eval errors exit 1") {
  TempDir dir("cli_eval_err");
  CHECK(run({"eval", (dir / "missing").string()}).code == 1);
  CHECK(run({"eval", dir.path().string()}).code == 1);  // no images

  synthetic::SuiteOptions suite;
  suite.images_per_category = 2;
  synthetic::write_suite(dir.path(), suite);
  std::filesystem::create_directories(dir / "boat");
  const auto empty_cat = run({"eval", dir.path().string(), "--layout", "object-discovery"});
  CHECK(empty_cat.code == 1);
  CHECK(empty_cat.err.find("boat") != std::string::npos);
  std::filesystem::remove(dir / "boat");
  REQUIRE(run({"eval", dir.path().string(), "--layout", "object-discovery"}).code == 0);

  std::filesystem::remove(dir / "car/0001_saliency.png");
  const auto missing = run({"eval", dir.path().string(), "--layout", "object-discovery"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("car/0001_saliency.png") != std::string::npos);
  CHECK(run({"eval", dir.path().string(), "--layout", "object-discovery", "--fallback"}).code == 0);

  write_file(dir / "ground_truth.csv", "image_id,category,x1,y1,x2,y2\nairplane/0000,airplane,0,0,5,5\n");
  const auto no_truth = run({"eval", dir.path().string(), "--layout", "object-discovery"});
  CHECK(no_truth.code == 1);
  CHECK(no_truth.err.find("no ground truth") != std::string::npos);
}

TEST_CASE("scan prints the manifest") {
  TempDir dir("cli_scan");
  synthetic::SuiteOptions suite;
  suite.images_per_category = 2;
  synthetic::write_suite(dir.path(), suite);
  const auto r = run({"scan", dir.path().string(), "--layout", "object-discovery"});
  REQUIRE(r.code == 0);
  const auto m = manifest_from_json(r.out);
  CHECK(m.entries.size() == 6);
  CHECK(m.entries[0].image_id == "airplane/0000");
  CHECK(m.entries[0].saliency.has_value());
  CHECK(m.entries[0].proposals.has_value());
  CHECK(m.entries[0].truth.size() == 1);
}
