#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "objloc/backends.hpp"
#include "objloc/dataset.hpp"
#include "objloc/eval.hpp"
#include "objloc/fusion.hpp"

namespace objloc::cli {

struct RunConfig {
  std::optional<Profile> profile;
  FusionConfig fusion;
  SaliencySource saliency;
  ProposalSource proposals;
  /// Use the contrast/anchor fallbacks when a file sidecar is missing.
  bool fallback = false;
  Layout layout = Layout::flat;
  std::filesystem::path out;
  int jobs = 1;
  ReportFormat report = ReportFormat::markdown;
  std::string report_label = "CorLoc";
  bool overlay = false;

  /// Throws objloc::Error on the first violated constraint.
  void validate() const;
};

/// Key/value rendering that can be fed back through --config.
std::string to_toml(const RunConfig& config);

}  // namespace objloc::cli
