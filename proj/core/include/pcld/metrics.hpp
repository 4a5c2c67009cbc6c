#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pcld/corpus.hpp"
#include "pcld/predictor.hpp"

namespace pcld {

/// Binary confusion counts; class 1 (PCL) is the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ClassMetrics {
  PrecisionRecallF1 scores;
  std::size_t support = 0;  ///< Gold examples of this class.
};

struct MacroScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsReport {
  ConfusionMatrix confusion;
  std::array<ClassMetrics, 2> per_class;  ///< Index = class id. Recall = per-class hit rate.
  MacroScores macro;
  double accuracy = 0.0;
};

/// Throws UsageError for empty or unequal-length inputs and labels outside {0,1}.
ConfusionMatrix confusion(std::span<const int> preds, std::span<const int> golds);

/// P = tp/(tp+fp), R = tp/(tp+fn), F1 = 2PR/(P+R) from the viewpoint of
/// class_id (roles swapped for class 0). Any 0/0 is 0.
PrecisionRecallF1 prf(const ConfusionMatrix& cm, int class_id);

/// Unweighted mean of the two classes' scores.
MacroScores macro(const PrecisionRecallF1& neg, const PrecisionRecallF1& pos);

MetricsReport build_report(const ConfusionMatrix& cm);

/// Fixed 4 decimal places. The binary value is rounded exactly; exact ties go to even.
std::string format_metric(double value);

nlohmann::json report_to_json(const MetricsReport& report);

/// Aligned plain-text classification report with the confusion matrix.
std::string format_report(const MetricsReport& report);

/// Static 2x2 heatmap; cells are shaded by row-normalised rate.
std::string confusion_svg(const ConfusionMatrix& cm);

struct ErrorRow {
  std::string par_id;
  int predicted = 0;
  std::string text;
  int gold = 0;
};

struct ErrorTable {
  std::vector<ErrorRow> rows;
  std::size_t scored = 0;  ///< Aligned examples considered, before filtering.
  std::size_t agree = 0;
};

/// Pairs predictions with gold records (matched by position and par_id).
/// With only_disagreements, rows where prediction equals gold are dropped.
/// Throws DataError on misalignment or missing gold labels.
ErrorTable error_table(const std::vector<Prediction>& preds, const std::vector<ParagraphRecord>& records,
                       bool only_disagreements = false);

/// Rows "Pred. | Paragraph | Gold" with pos/neg labels plus a summary line
/// "correct: k of n".
std::string format_error_table(const ErrorTable& table);

std::vector<int> gold_labels(const std::vector<ParagraphRecord>& records);  ///< Throws DataError if unlabeled.
std::vector<int> predicted_labels(const std::vector<Prediction>& predictions);

}  // namespace pcld
