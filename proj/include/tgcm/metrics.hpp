#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace tgcm {

// K x K counts, rows = true class, columns = predicted class.
struct ConfusionMatrix {
  int k = 0;
  std::vector<std::int64_t> counts;  // row-major K x K
  std::int64_t total = 0;

  std::int64_t at(int truth, int pred) const { return counts[truth * k + pred]; }
};

struct MetricsReport {
  int k = 0;
  double accuracy = 0.0;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1_per_class;
  double aggregate_f1 = 0.0;
};

ConfusionMatrix confusion(const std::vector<int>& preds,
                          const std::vector<int>& labels, int k);

double accuracy(const ConfusionMatrix& m);

// One-vs-rest; 0/0 counts as 0 for both values.
std::pair<double, double> precision_recall(const ConfusionMatrix& m, int c);

double f1(double precision, double recall);

// Binary: F1 of class 1 (the positive class). Multiclass: macro mean.
double aggregate_f1(const ConfusionMatrix& m);

MetricsReport metrics_report(const ConfusionMatrix& m);

}  // namespace tgcm
