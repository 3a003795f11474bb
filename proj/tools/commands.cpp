#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "objloc/image_io.hpp"

namespace objloc::cli {

namespace fs = std::filesystem;

namespace {

struct ImageJob {
  std::string id;
  fs::path image;
  std::optional<fs::path> saliency;
  std::optional<fs::path> proposals;
};

struct ImageOutcome {
  RgbImage image;
  LocalizationResult result;
};

fs::path with_suffix(const fs::path& image, const std::string& suffix, const char* ext) {
  return image.parent_path() / (image.stem().string() + suffix + ext);
}

ImageOutcome process(const ImageJob& job, const RunConfig& config) {
  ImageOutcome o;
  o.image = read_rgb_image(job.image);
  const int w = o.image.width();
  const int h = o.image.height();

  SaliencyMap saliency;
  if (config.saliency.kind == SaliencySource::Kind::contrast) {
    saliency = contrast_saliency(o.image, config.saliency.blur_radius);
  } else if (job.saliency) {
    saliency = load_saliency(*job.saliency, w, h);
  } else if (config.fallback) {
    saliency = contrast_saliency(o.image, config.saliency.blur_radius);
  } else {
    throw MissingFileError("no saliency map for " + job.image.string() + " (expected " +
                           with_suffix(job.image, config.saliency.suffix, ".png").string() +
                           " or .pgm)");
  }

  std::vector<RegionProposal> proposals;
  if (config.proposals.kind == ProposalSource::Kind::anchors) {
    proposals = anchor_proposals(w, h, config.proposals, &saliency);
  } else if (job.proposals) {
    proposals = load_proposals(*job.proposals, w, h, config.proposals.max_proposals);
  } else if (config.fallback) {
    proposals = anchor_proposals(w, h, config.proposals, &saliency);
  } else {
    throw MissingFileError("no proposal file for " + job.image.string() + " (expected " +
                           with_suffix(job.image, config.proposals.suffix, ".csv").string() + ")");
  }

  o.result = localize(o.image, saliency, proposals, config.fusion);
  return o;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw Error(path.string() + ": write failed");
}

void write_overlay(const fs::path& path, const ImageOutcome& o) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_png(path, render_overlay(o.image, o.result));
}

ScanOptions scan_options_of(const RunConfig& config) {
  ScanOptions o;
  o.saliency_suffix = config.saliency.suffix;
  o.proposal_suffix = config.proposals.suffix;
  return o;
}

void draw_rect(RgbImage& img, const BoundingBox& b, Rgb color, int thickness) {
  for (int t = 0; t < thickness; ++t) {
    const int x1 = b.x1 + t, y1 = b.y1 + t, x2 = b.x2 - t, y2 = b.y2 - t;
    if (x1 > x2 || y1 > y2) break;
    for (int x = x1; x <= x2; ++x) {
      img.set(x, y1, color);
      img.set(x, y2, color);
    }
    for (int y = y1; y <= y2; ++y) {
      img.set(x1, y, color);
      img.set(x2, y, color);
    }
  }
}

}  // namespace

RgbImage render_overlay(const RgbImage& image, const LocalizationResult& result) {
  RgbImage out = image;
  for (const auto& b : result.boxes) draw_rect(out, b, {0, 255, 0}, 2);
  for (const auto& f : result.fixations) {
    const int cx = static_cast<int>(f.x);
    const int cy = static_cast<int>(f.y);
    for (int d = -3; d <= 3; ++d) {
      if (cx + d >= 0 && cx + d < out.width()) out.set(cx + d, cy, {255, 0, 0});
      if (cy + d >= 0 && cy + d < out.height()) out.set(cx, cy + d, {255, 0, 0});
    }
  }
  return out;
}

int cmd_localize(const fs::path& image, const RunConfig& config, const SidecarOverrides& sidecars,
                 std::ostream& out, std::ostream& err) {
  try {
    ImageJob job;
    job.id = image.stem().string();
    job.image = image;
    job.saliency = sidecars.saliency ? sidecars.saliency
                                     : find_saliency_sidecar(image, config.saliency.suffix);
    job.proposals = sidecars.proposals ? sidecars.proposals
                                       : find_proposal_sidecar(image, config.proposals.suffix);
    const ImageOutcome o = process(job, config);
    const std::string json = result_to_json(o.result, job.id, config.fusion);
    if (config.out.empty()) {
      out << json;
    } else {
      const auto path = config.out / (job.id + ".json");
      write_text(path, json);
      out << "wrote " << path.string() << "\n";
    }
    if (config.overlay) {
      const auto dir = config.out.empty() ? fs::path(".") : config.out;
      const auto path = dir / (job.id + "_overlay.png");
      write_overlay(path, o);
      out << "wrote " << path.string() << "\n";
    }
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}

int cmd_eval(const fs::path& root, const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const DatasetManifest manifest = scan(root, config.layout, scan_options_of(config));
    if (manifest.entries.empty()) throw Error(root.string() + ": no images found");
    for (const auto& e : manifest.entries)
      if (e.truth.empty()) throw Error("no ground truth for image '" + e.image_id + "'");

    const std::size_t n = manifest.entries.size();
    std::vector<std::optional<EvalRecord>> records(n);
    std::vector<std::string> errors(n);
    std::atomic<std::size_t> next{0};

    const auto worker = [&] {
      for (std::size_t i = next++; i < n; i = next++) {
        const ManifestEntry& e = manifest.entries[i];
        try {
          const ImageOutcome o = process({e.image_id, e.image, e.saliency, e.proposals}, config);
          for (const auto& t : e.truth)
            if (!t.within(o.image.width(), o.image.height()))
              throw Error("ground-truth box " + to_string(t) + " outside image '" + e.image_id + "'");
          records[i] = score_image(e.image_id, o.result, {e.image_id, e.group(), e.truth});
          if (!config.out.empty()) {
            write_text(config.out / "results" / (e.image_id + ".json"),
                       result_to_json(o.result, e.image_id, config.fusion));
            if (config.overlay)
              write_overlay(config.out / "overlays" / (e.image_id + ".png"), o);
          }
        } catch (const std::exception& ex) {
          errors[i] = ex.what();
        }
      }
    };
    const int threads = std::max(1, std::min<int>(config.jobs, static_cast<int>(n)));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (const auto& msg : errors)
      if (!msg.empty()) throw Error(msg);

    std::vector<EvalRecord> collected;
    for (auto& r : records) collected.push_back(std::move(*r));
    std::sort(collected.begin(), collected.end(),
              [](const EvalRecord& a, const EvalRecord& b) { return a.image_id < b.image_id; });

    const EvalReport report = corloc(collected, manifest.groups);
    RenderOptions render;
    render.row_label = config.report_label;
    if (config.layout == Layout::kth_handtool)
      render.layout = ReportLayout::camera_illumination_grid;
    const std::string text = render_report(report, config.report, render);
    out << text;
    if (!config.out.empty())
      write_text(config.out / (config.report == ReportFormat::csv ? "report.csv" : "report.md"),
                 text);
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unsupervised single-image object localization from saliency and proposals",
               "objloc"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML-style key = value file mirroring the flags");

  RunConfig config;
  std::string profile;
  std::optional<int> t_ps;
  std::optional<std::int64_t> t_a;
  std::optional<double> t_nms, t_hist, low_overlap_min;
  bool no_merge = false;
  std::string saliency_kind = "file", proposal_kind = "file", layout = "flat", report = "markdown";
  std::string out_dir;

  app.add_option("--profile", profile, "Threshold profile")
      ->check(CLI::IsMember({"object-discovery", "kth-handtool"}));
  app.add_option("--t-ps", t_ps, "Saliency intensity threshold (salient iff > t-ps)")
      ->check(CLI::Range(0, 255));
  app.add_option("--t-a", t_a, "Minimum salient region area in pixels")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--t-nms", t_nms, "NMS jaccard threshold")->check(CLI::Range(0.0, 1.0));
  app.add_option("--t-hist", t_hist, "Histogram similarity needed to merge")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--low-overlap-min", low_overlap_min,
                 "Lower (exclusive) jaccard bound of the merge band")
      ->check(CLI::Range(0.0, 1.0));
  app.add_flag("--no-merge", no_merge, "Disable merging of low-overlap boxes");
  app.add_option("--saliency", saliency_kind, "Saliency source")
      ->check(CLI::IsMember({"file", "contrast"}));
  app.add_option("--saliency-suffix", config.saliency.suffix, "Saliency sidecar suffix");
  app.add_option("--blur-radius", config.saliency.blur_radius, "Contrast saliency blur radius")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--proposals", proposal_kind, "Proposal source")
      ->check(CLI::IsMember({"file", "anchors"}));
  app.add_option("--proposal-suffix", config.proposals.suffix, "Proposal sidecar suffix");
  app.add_option("--max-proposals", config.proposals.max_proposals, "Proposals kept per image")
      ->check(CLI::PositiveNumber);
  app.add_option("--anchor-stride", config.proposals.anchors.stride, "Anchor grid stride")
      ->check(CLI::PositiveNumber);
  app.add_option("--anchor-scales", config.proposals.anchors.scales, "Anchor sizes in pixels")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  app.add_option("--anchor-aspects", config.proposals.anchors.aspects, "Anchor aspect ratios w/h")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  app.add_flag("--fallback", config.fallback,
               "Use contrast saliency / anchor proposals when a sidecar is missing");
  app.add_option("--layout", layout, "Dataset layout")
      ->check(CLI::IsMember({"flat", "object-discovery", "kth-handtool"}));
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--jobs", config.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--report", report, "Report format")->check(CLI::IsMember({"csv", "markdown"}));
  app.add_option("--report-label", config.report_label, "Row label in markdown reports");
  app.add_flag("--overlay", config.overlay, "Also write overlay images");

  fs::path image;
  SidecarOverrides sidecars;
  auto* localize_cmd = app.add_subcommand("localize", "Localize objects in one image");
  localize_cmd->add_option("image", image, "Input image (PNG/PPM/PGM)")->required();
  localize_cmd->add_option("--saliency-file", sidecars.saliency, "Explicit saliency map");
  localize_cmd->add_option("--proposals-file", sidecars.proposals, "Explicit proposal CSV");

  fs::path root;
  auto* eval_cmd = app.add_subcommand("eval", "Localize a dataset and report CorLoc");
  eval_cmd->add_option("root", root, "Dataset root directory")->required();

  auto* scan_cmd = app.add_subcommand("scan", "Print the dataset manifest as JSON");
  scan_cmd->add_option("root", root, "Dataset root directory")->required();

  auto* config_cmd = app.add_subcommand("config", "Print the resolved configuration");

  std::vector<const char*> argv{"objloc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  if (!profile.empty()) {
    config.profile = parse_profile(profile);
    config.fusion = profile_config(*config.profile);
  }
  if (t_ps) config.fusion.t_ps = *t_ps;
  if (t_a) config.fusion.t_a = *t_a;
  if (t_nms) config.fusion.t_nms = *t_nms;
  if (t_hist) config.fusion.t_hist = *t_hist;
  if (low_overlap_min) config.fusion.low_overlap_min = *low_overlap_min;
  config.fusion.merge_low_overlap = !no_merge;
  config.saliency.kind =
      saliency_kind == "contrast" ? SaliencySource::Kind::contrast : SaliencySource::Kind::file;
  config.proposals.kind =
      proposal_kind == "anchors" ? ProposalSource::Kind::anchors : ProposalSource::Kind::file;
  config.layout = *parse_layout(layout);
  config.report = report == "csv" ? ReportFormat::csv : ReportFormat::markdown;
  config.out = out_dir;
  try {
    config.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsageError;
  }

  if (*localize_cmd) return cmd_localize(image, config, sidecars, out, err);
  if (*eval_cmd) return cmd_eval(root, config, out, err);
  if (*scan_cmd) {
    try {
      out << manifest_to_json(scan(root, config.layout, scan_options_of(config)));
      return kOk;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kRuntimeError;
    }
  }
  if (*config_cmd) {
    out << to_toml(config);
    return kOk;
  }
  return kUsageError;
}

}  // namespace objloc::cli
