#include "run_config.hpp"

#include <charconv>
#include <sstream>

namespace objloc::cli {

namespace {

std::string number(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

void RunConfig::validate() const {
  fusion.validate();
  saliency.validate();
  proposals.validate();
  if (jobs < 1) throw Error("jobs must be >= 1");
}

std::string to_toml(const RunConfig& c) {
  std::ostringstream out;
  if (c.profile) out << "profile = " << quoted(std::string(profile_name(*c.profile))) << "\n";
  out << "t-ps = " << c.fusion.t_ps << "\n";
  out << "t-a = " << c.fusion.t_a << "\n";
  out << "t-nms = " << number(c.fusion.t_nms) << "\n";
  out << "t-hist = " << number(c.fusion.t_hist) << "\n";
  out << "no-merge = " << (c.fusion.merge_low_overlap ? "false" : "true") << "\n";
  out << "low-overlap-min = " << number(c.fusion.low_overlap_min) << "\n";
  out << "saliency = "
      << quoted(c.saliency.kind == SaliencySource::Kind::file ? "file" : "contrast") << "\n";
  out << "saliency-suffix = " << quoted(c.saliency.suffix) << "\n";
  out << "blur-radius = " << c.saliency.blur_radius << "\n";
  out << "proposals = "
      << quoted(c.proposals.kind == ProposalSource::Kind::file ? "file" : "anchors") << "\n";
  out << "proposal-suffix = " << quoted(c.proposals.suffix) << "\n";
  out << "max-proposals = " << c.proposals.max_proposals << "\n";
  out << "anchor-stride = " << c.proposals.anchors.stride << "\n";
  out << "anchor-scales = [";
  for (std::size_t i = 0; i < c.proposals.anchors.scales.size(); ++i)
    out << (i ? ", " : "") << c.proposals.anchors.scales[i];
  out << "]\n";
  out << "anchor-aspects = [";
  for (std::size_t i = 0; i < c.proposals.anchors.aspects.size(); ++i)
    out << (i ? ", " : "") << number(c.proposals.anchors.aspects[i]);
  out << "]\n";
  out << "fallback = " << (c.fallback ? "true" : "false") << "\n";
  out << "layout = " << quoted(std::string(layout_name(c.layout))) << "\n";
  if (!c.out.empty()) out << "out = " << quoted(c.out.generic_string()) << "\n";
  out << "jobs = " << c.jobs << "\n";
  out << "report = " << quoted(c.report == ReportFormat::csv ? "csv" : "markdown") << "\n";
  out << "report-label = " << quoted(c.report_label) << "\n";
  out << "overlay = " << (c.overlay ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace objloc::cli
