#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "objloc/fusion.hpp"
#include "objloc/geometry.hpp"

namespace objloc {

struct GroundTruth {
  std::string image_id;
  std::string category;
  std::vector<BoundingBox> boxes;
};

struct EvalRecord {
  std::string image_id;
  std::string category;
  double best_jaccard = 0.0;
  bool localized = false;  ///< best_jaccard > 0.5

  friend bool operator==(const EvalRecord&, const EvalRecord&) = default;
};

/// Strict CorLoc criterion.
constexpr bool is_localized(double best_jaccard) { return best_jaccard > 0.5; }

/// Best jaccard over every (predicted, truth) pair; 0 with no predictions.
/// Throws objloc::Error when the ids differ.
EvalRecord score_image(const std::string& image_id, const LocalizationResult& result,
                       const GroundTruth& truth);

struct CategoryScore {
  std::string name;
  std::size_t images = 0;
  std::size_t localized = 0;
  double corloc = 0.0;  ///< percent

  friend bool operator==(const CategoryScore&, const CategoryScore&) = default;
};

struct EvalReport {
  std::vector<CategoryScore> categories;
  double average = 0.0;  ///< unweighted mean of category CorLoc values

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Aggregates per-category CorLoc. Categories appear in the order given by
/// `category_order`, or sorted by name when it is empty. A listed category
/// without records, or a record whose category is not listed, throws.
EvalReport corloc(std::span<const EvalRecord> records,
                  std::span<const std::string> category_order = {});

/// Fills in `average` for already computed category values.
EvalReport summarize(std::vector<CategoryScore> categories);

/// Half-up rounding to one decimal, tolerant of binary representation error
/// (66.65 rounds to 66.7).
double round_one_decimal(double value);
std::string format_one_decimal(double value);

enum class ReportFormat { csv, markdown };

enum class ReportLayout {
  flat,  ///< one column per category, then Average
  /// Categories named "<camera>/<illumination>/<object>": rows are
  /// camera x illumination, columns are objects.
  camera_illumination_grid,
};

struct RenderOptions {
  std::string row_label = "CorLoc";
  ReportLayout layout = ReportLayout::flat;
};

/// csv: `category,images,localized,corloc` rows plus an Average row.
/// markdown: the table layout selected by options.layout.
std::string render_report(const EvalReport& report, ReportFormat format,
                          const RenderOptions& options = {});

}  // namespace objloc
