#include "objloc/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace objloc {

EvalRecord score_image(const std::string& image_id, const LocalizationResult& result,
                       const GroundTruth& truth) {
  if (image_id != truth.image_id)
    throw Error("score_image: prediction for '" + image_id + "' scored against truth for '" +
                truth.image_id + "'");
  EvalRecord rec;
  rec.image_id = image_id;
  rec.category = truth.category;
  for (const auto& p : result.boxes)
    for (const auto& t : truth.boxes) rec.best_jaccard = std::max(rec.best_jaccard, jaccard(p, t));
  rec.localized = is_localized(rec.best_jaccard);
  return rec;
}

EvalReport summarize(std::vector<CategoryScore> categories) {
  EvalReport report;
  report.categories = std::move(categories);
  if (!report.categories.empty()) {
    double sum = 0.0;
    for (const auto& c : report.categories) sum += c.corloc;
    report.average = sum / static_cast<double>(report.categories.size());
  }
  return report;
}

EvalReport corloc(std::span<const EvalRecord> records,
                  std::span<const std::string> category_order) {
  std::map<std::string, CategoryScore> by_name;
  for (const auto& name : category_order) by_name[name].name = name;
  for (const auto& r : records) {
    if (!category_order.empty() && !by_name.contains(r.category))
      throw Error("corloc: record '" + r.image_id + "' has unlisted category '" + r.category + "'");
    auto& c = by_name[r.category];
    c.name = r.category;
    ++c.images;
    if (r.localized) ++c.localized;
  }

  std::vector<CategoryScore> ordered;
  if (category_order.empty()) {
    for (auto& [name, score] : by_name) ordered.push_back(score);
  } else {
    for (const auto& name : category_order) ordered.push_back(by_name.at(name));
  }
  for (auto& c : ordered) {
    if (c.images == 0) throw Error("corloc: category '" + c.name + "' has no images");
    c.corloc = 100.0 * static_cast<double>(c.localized) / static_cast<double>(c.images);
  }
  return summarize(std::move(ordered));
}

double round_one_decimal(double value) {
  return std::floor(value * 10.0 + 0.5 + 1e-9) / 10.0;
}

std::string format_one_decimal(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", round_one_decimal(value));
  return buf;
}

namespace {

std::string capitalized(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string md_row(const std::vector<std::string>& cells) {
  std::string row = "|";
  for (const auto& c : cells) row += " " + c + " |";
  return row + "\n";
}

std::string md_separator(std::size_t columns) {
  std::string row = "|";
  for (std::size_t i = 0; i < columns; ++i) row += " --- |";
  return row + "\n";
}

std::string render_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "category,images,localized,corloc\n";
  std::size_t images = 0;
  std::size_t localized = 0;
  for (const auto& c : report.categories) {
    out << c.name << "," << c.images << "," << c.localized << "," << format_one_decimal(c.corloc)
        << "\n";
    images += c.images;
    localized += c.localized;
  }
  out << "Average," << images << "," << localized << "," << format_one_decimal(report.average)
      << "\n";
  return out.str();
}

std::string render_flat_markdown(const EvalReport& report, const RenderOptions& options) {
  std::vector<std::string> header{"Method"};
  std::vector<std::string> row{options.row_label};
  for (const auto& c : report.categories) {
    header.push_back(capitalized(c.name));
    row.push_back(format_one_decimal(c.corloc));
  }
  header.push_back("Average");
  row.push_back(format_one_decimal(report.average));
  return md_row(header) + md_separator(header.size()) + md_row(row);
}

int illumination_rank(const std::string& s) {
  if (s == "artificial") return 0;
  if (s == "natural") return 1;
  if (s == "directional") return 2;
  return 3;
}

std::string render_grid_markdown(const EvalReport& report) {
  struct Key {
    std::string camera, illumination, object;
  };
  std::vector<std::pair<std::string, std::string>> rows;
  std::vector<std::string> objects;
  std::map<std::tuple<std::string, std::string, std::string>, double> cells;
  for (const auto& c : report.categories) {
    const auto a = c.name.find('/');
    const auto b = a == std::string::npos ? a : c.name.find('/', a + 1);
    if (b == std::string::npos || c.name.find('/', b + 1) != std::string::npos)
      throw Error("render_report: category '" + c.name +
                  "' is not of the form camera/illumination/object");
    Key k{c.name.substr(0, a), c.name.substr(a + 1, b - a - 1), c.name.substr(b + 1)};
    const std::pair<std::string, std::string> row{k.camera, k.illumination};
    if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
    if (std::find(objects.begin(), objects.end(), k.object) == objects.end())
      objects.push_back(k.object);
    cells[{k.camera, k.illumination, k.object}] = c.corloc;
  }
  std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    const int rx = illumination_rank(x.second);
    const int ry = illumination_rank(y.second);
    if (rx != ry) return rx < ry;
    return x.second < y.second;
  });
  std::sort(objects.begin(), objects.end());

  std::vector<std::string> header{"Camera", "Illumination"};
  for (const auto& o : objects) header.push_back(capitalized(o));
  std::string out = md_row(header) + md_separator(header.size());
  for (const auto& [camera, illumination] : rows) {
    std::vector<std::string> cells_row{camera, capitalized(illumination)};
    for (const auto& o : objects) {
      const auto it = cells.find({camera, illumination, o});
      cells_row.push_back(it == cells.end() ? "-" : format_one_decimal(it->second));
    }
    out += md_row(cells_row);
  }
  out += "\nAverage: " + format_one_decimal(report.average) + "\n";
  return out;
}

}  // namespace

std::string render_report(const EvalReport& report, ReportFormat format,
                          const RenderOptions& options) {
  if (format == ReportFormat::csv) return render_csv(report);
  if (options.layout == ReportLayout::camera_illumination_grid) return render_grid_markdown(report);
  return render_flat_markdown(report, options);
}

}  // namespace objloc
