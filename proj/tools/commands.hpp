#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace objloc::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

/// Explicit sidecar paths for a single image; unset entries fall back to
/// sidecar discovery next to the image.
struct SidecarOverrides {
  std::optional<std::filesystem::path> saliency;
  std::optional<std::filesystem::path> proposals;
};

int cmd_localize(const std::filesystem::path& image, const RunConfig& config,
                 const SidecarOverrides& sidecars, std::ostream& out, std::ostream& err);

int cmd_eval(const std::filesystem::path& root, const RunConfig& config, std::ostream& out,
             std::ostream& err);

/// Entry point behind the `objloc` binary; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Copy of `image` with boxes outlined in green and fixations as red crosses.
RgbImage render_overlay(const RgbImage& image, const LocalizationResult& result);

}  // namespace objloc::cli
