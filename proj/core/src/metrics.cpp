#include "pcld/metrics.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "pcld/error.hpp"

namespace pcld {

ConfusionMatrix confusion(std::span<const int> preds, std::span<const int> golds) {
  if (preds.size() != golds.size()) {
    throw UsageError(fmt::format("confusion: {} predictions vs {} gold labels", preds.size(), golds.size()));
  }
  if (preds.empty()) {
    throw UsageError("confusion: no examples");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const int p = preds[i];
    const int g = golds[i];
    if ((p != 0 && p != 1) || (g != 0 && g != 1)) {
      throw UsageError(fmt::format("confusion: label outside {{0,1}} at index {}", i));
    }
    if (p == 1 && g == 1) {
      ++cm.tp;
    } else if (p == 1) {
      ++cm.fp;
    } else if (g == 1) {
      ++cm.fn;
    } else {
      ++cm.tn;
    }
  }
  return cm;
}

namespace {

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

PrecisionRecallF1 prf(const ConfusionMatrix& cm, int class_id) {
  if (class_id != 0 && class_id != 1) {
    throw UsageError(fmt::format("prf: class {} is not 0 or 1", class_id));
  }
  const auto tp = static_cast<double>(class_id == 1 ? cm.tp : cm.tn);
  const auto fp = static_cast<double>(class_id == 1 ? cm.fp : cm.fn);
  const auto fn = static_cast<double>(class_id == 1 ? cm.fn : cm.fp);
  PrecisionRecallF1 out;
  out.precision = safe_div(tp, tp + fp);
  out.recall = safe_div(tp, tp + fn);
  out.f1 = safe_div(2.0 * out.precision * out.recall, out.precision + out.recall);
  return out;
}

MacroScores macro(const PrecisionRecallF1& neg, const PrecisionRecallF1& pos) {
  return {(neg.precision + pos.precision) / 2.0, (neg.recall + pos.recall) / 2.0, (neg.f1 + pos.f1) / 2.0};
}

MetricsReport build_report(const ConfusionMatrix& cm) {
  MetricsReport r;
  r.confusion = cm;
  r.per_class[0] = {prf(cm, 0), cm.tn + cm.fp};
  r.per_class[1] = {prf(cm, 1), cm.tp + cm.fn};
  r.macro = macro(r.per_class[0].scores, r.per_class[1].scores);
  r.accuracy = safe_div(static_cast<double>(cm.tp + cm.tn), static_cast<double>(cm.total()));
  return r;
}

std::string format_metric(double value) { return fmt::format("{:.4f}", value); }

nlohmann::json report_to_json(const MetricsReport& r) {
  nlohmann::json j;
  j["confusion"] = {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}, {"tn", r.confusion.tn}};
  const char* names[] = {"neg", "pos"};
  for (int c = 0; c < 2; ++c) {
    const auto& m = r.per_class[static_cast<std::size_t>(c)];
    j["per_class"][names[c]] = {{"precision", m.scores.precision},
                                {"recall", m.scores.recall},
                                {"f1", m.scores.f1},
                                {"support", m.support}};
  }
  j["macro"] = {{"precision", r.macro.precision}, {"recall", r.macro.recall}, {"f1", r.macro.f1}};
  j["accuracy"] = r.accuracy;
  j["rounded"] = {{"macro_f1", format_metric(r.macro.f1)},
                  {"macro_precision", format_metric(r.macro.precision)},
                  {"macro_recall", format_metric(r.macro.recall)},
                  {"f1_neg", format_metric(r.per_class[0].scores.f1)},
                  {"f1_pos", format_metric(r.per_class[1].scores.f1)}};
  return j;
}

std::string format_report(const MetricsReport& r) {
  std::string out = fmt::format("{:>10} {:>10} {:>10} {:>10} {:>9}\n", "", "precision", "recall", "f1", "support");
  const char* names[] = {"0 (neg)", "1 (pos)"};
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& m = r.per_class[c];
    out += fmt::format("{:>10} {:>10} {:>10} {:>10} {:>9}\n", names[c], format_metric(m.scores.precision),
                       format_metric(m.scores.recall), format_metric(m.scores.f1), m.support);
  }
  out += fmt::format("{:>10} {:>10} {:>10} {:>10} {:>9}\n", "macro", format_metric(r.macro.precision),
                     format_metric(r.macro.recall), format_metric(r.macro.f1), r.confusion.total());
  out += fmt::format("{:>10} {:>32} {:>9}\n\n", "accuracy", format_metric(r.accuracy), r.confusion.total());
  out += "confusion matrix (rows gold, cols predicted)\n";
  out += fmt::format("{:>10} {:>10} {:>10}\n", "", "pred 0", "pred 1");
  out += fmt::format("{:>10} {:>10} {:>10}\n", "gold 0", r.confusion.tn, r.confusion.fp);
  out += fmt::format("{:>10} {:>10} {:>10}\n", "gold 1", r.confusion.fn, r.confusion.tp);
  out += fmt::format("macro F1 ({}): [{} (neg) {} (pos)]\n", format_metric(r.macro.f1),
                     format_metric(r.per_class[0].scores.f1), format_metric(r.per_class[1].scores.f1));
  return out;
}

std::string confusion_svg(const ConfusionMatrix& cm) {
  const std::size_t cells[2][2] = {{cm.tn, cm.fp}, {cm.fn, cm.tp}};
  constexpr int kCell = 120;
  constexpr int kMargin = 80;
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" font-family=\"sans-serif\">\n",
      kMargin + 2 * kCell + 20);
  svg += fmt::format("<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">predicted</text>\n",
                     kMargin + kCell);
  svg += fmt::format(
      "<text x=\"20\" y=\"{0}\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 {0})\">gold</text>\n",
      kMargin + kCell);
  const char* names[] = {"0 (neg)", "1 (pos)"};
  for (int i = 0; i < 2; ++i) {
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">{}</text>\n",
                       kMargin + i * kCell + kCell / 2, kMargin - 10, names[i]);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"12\">{}</text>\n", kMargin - 6,
                       kMargin + i * kCell + kCell / 2, names[i]);
  }
  for (int g = 0; g < 2; ++g) {
    const double row_total = static_cast<double>(cells[g][0] + cells[g][1]);
    for (int p = 0; p < 2; ++p) {
      const double rate = row_total > 0 ? static_cast<double>(cells[g][p]) / row_total : 0.0;
      const int shade = 255 - static_cast<int>(rate * 200.0);
      svg += fmt::format(
          "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"rgb({},{},255)\" stroke=\"#333\"/>\n",
          kMargin + p * kCell, kMargin + g * kCell, kCell, kCell, shade, shade);
      svg += fmt::format(
          "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"16\">{} ({:.1f}%)</text>\n",
          kMargin + p * kCell + kCell / 2, kMargin + g * kCell + kCell / 2, cells[g][p], rate * 100.0);
    }
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<int> gold_labels(const std::vector<ParagraphRecord>& records) {
  std::vector<int> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (!r.binary_label) {
      throw DataError(fmt::format("record '{}' has no gold label", r.par_id));
    }
    out.push_back(*r.binary_label);
  }
  return out;
}

std::vector<int> predicted_labels(const std::vector<Prediction>& predictions) {
  std::vector<int> out;
  out.reserve(predictions.size());
  for (const auto& p : predictions) {
    out.push_back(p.label);
  }
  return out;
}

ErrorTable error_table(const std::vector<Prediction>& preds, const std::vector<ParagraphRecord>& records,
                       bool only_disagreements) {
  if (preds.size() != records.size()) {
    throw DataError(fmt::format("error table: {} predictions vs {} records", preds.size(), records.size()));
  }
  ErrorTable table;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto& r = records[i];
    if (!preds[i].par_id.empty() && preds[i].par_id != r.par_id) {
      throw DataError(fmt::format("error table: row {} pairs prediction '{}' with record '{}'", i, preds[i].par_id,
                                  r.par_id));
    }
    if (!r.binary_label) {
      throw DataError(fmt::format("record '{}' has no gold label", r.par_id));
    }
    ++table.scored;
    const bool agree = preds[i].label == *r.binary_label;
    table.agree += agree ? 1 : 0;
    if (only_disagreements && agree) {
      continue;
    }
    table.rows.push_back({r.par_id, preds[i].label, r.text, *r.binary_label});
  }
  return table;
}

std::string format_error_table(const ErrorTable& table) {
  const auto name = [](int label) { return label == 1 ? "pos" : "neg"; };
  std::string out = fmt::format("{:<6} {:<5} {}\n", "Pred.", "Gold", "Paragraph");
  for (const auto& row : table.rows) {
    out += fmt::format("{:<6} {:<5} {}\n", name(row.predicted), name(row.gold), row.text);
  }
  out += fmt::format("correct: {} of {}\n", table.agree, table.scored);
  return out;
}

}  // namespace pcld
