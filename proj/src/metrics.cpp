#include "tgcm/metrics.hpp"

#include <string>

#include "tgcm/error.hpp"

namespace tgcm {

ConfusionMatrix confusion(const std::vector<int>& preds,
                          const std::vector<int>& labels, int k) {
  if (preds.size() != labels.size())
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(preds.size()) + " predictions vs " +
                    std::to_string(labels.size()) + " labels");
  ConfusionMatrix m;
  m.k = k;
  m.counts.assign(static_cast<std::size_t>(k) * k, 0);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] < 0 || preds[i] >= k || labels[i] < 0 || labels[i] >= k)
      throw Error(ErrorCode::ClassOutOfRange,
                  "sample " + std::to_string(i) + " outside K=" + std::to_string(k));
    ++m.counts[static_cast<std::size_t>(labels[i]) * k + preds[i]];
    ++m.total;
  }
  return m;
}

double accuracy(const ConfusionMatrix& m) {
  if (m.total == 0) throw Error(ErrorCode::EmptyMatrix, "no samples counted");
  std::int64_t correct = 0;
  for (int c = 0; c < m.k; ++c) correct += m.at(c, c);
  return static_cast<double>(correct) / static_cast<double>(m.total);
}

std::pair<double, double> precision_recall(const ConfusionMatrix& m, int c) {
  if (c < 0 || c >= m.k)
    throw Error(ErrorCode::ClassOutOfRange, "class " + std::to_string(c));
  std::int64_t predicted = 0, actual = 0;
  for (int t = 0; t < m.k; ++t) predicted += m.at(t, c);
  for (int p = 0; p < m.k; ++p) actual += m.at(c, p);
  double precision =
      predicted == 0 ? 0.0 : static_cast<double>(m.at(c, c)) / static_cast<double>(predicted);
  double recall =
      actual == 0 ? 0.0 : static_cast<double>(m.at(c, c)) / static_cast<double>(actual);
  return {precision, recall};
}

double f1(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double aggregate_f1(const ConfusionMatrix& m) {
  if (m.total == 0) throw Error(ErrorCode::EmptyMatrix, "no samples counted");
  if (m.k == 2) {
    auto [p, r] = precision_recall(m, 1);
    return f1(p, r);
  }
  double sum = 0.0;
  for (int c = 0; c < m.k; ++c) {
    auto [p, r] = precision_recall(m, c);
    sum += f1(p, r);
  }
  return sum / m.k;
}

MetricsReport metrics_report(const ConfusionMatrix& m) {
  MetricsReport report;
  report.k = m.k;
  report.accuracy = accuracy(m);
  for (int c = 0; c < m.k; ++c) {
    auto [p, r] = precision_recall(m, c);
    report.precision.push_back(p);
    report.recall.push_back(r);
    report.f1_per_class.push_back(f1(p, r));
  }
  report.aggregate_f1 = aggregate_f1(m);
  return report;
}

}  // namespace tgcm
