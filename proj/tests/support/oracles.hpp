#pragma once

// Brute-force reference implementations for the property suites. These stay
// deliberately naive and independent of the library code paths they check.

#include <cmath>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

// PPMI by literal window enumeration: materialize every window, count distinct
// pairs per window with sets, apply the definition directly.
struct PpmiOracle {
  long long windows = 0;
  std::map<std::pair<int, int>, long long> pair_counts;
  std::map<int, long long> unigram_counts;

  PpmiOracle(const std::vector<int>& ids, int w) {
    if (ids.empty()) return;
    std::vector<std::vector<int>> slices;
    if (static_cast<int>(ids.size()) < w) {
      slices.push_back(ids);
    } else {
      for (std::size_t start = 0; start + w <= ids.size(); ++start)
        slices.emplace_back(ids.begin() + start, ids.begin() + start + w);
    }
    windows = static_cast<long long>(slices.size());
    for (const auto& slice : slices) {
      std::set<int> distinct(slice.begin(), slice.end());
      for (int i : distinct) ++unigram_counts[i];
      for (auto a = distinct.begin(); a != distinct.end(); ++a) {
        auto b = a;
        for (++b; b != distinct.end(); ++b)
          ++pair_counts[{*a, *b}];  // *a < *b by set order
      }
    }
  }

  double ppmi(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = pair_counts.find({i, j});
    if (it == pair_counts.end()) return 0.0;
    double nw = static_cast<double>(windows);
    double pij = static_cast<double>(it->second) / nw;
    double pi = static_cast<double>(unigram_counts.at(i)) / nw;
    double pj = static_cast<double>(unigram_counts.at(j)) / nw;
    double v = std::log(pij / (pi * pj));
    return v > 0.0 ? v : 0.0;
  }
};

// Dense symmetric normalization by the definition, plain loops only.
inline std::vector<std::vector<double>> normalize_dense(
    const std::vector<std::vector<double>>& a) {
  std::size_t n = a.size();
  std::vector<std::vector<double>> tilde(n, std::vector<double>(n, 0.0));
  std::vector<double> deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) tilde[i][j] = a[i][j];
    tilde[i][i] += 1.0;
    for (std::size_t j = 0; j < n; ++j) deg[i] += tilde[i][j];
  }
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out[i][j] = tilde[i][j] / std::sqrt(deg[i] * deg[j]);
  return out;
}

// Plain triple-loop product for checking sparse kernels.
inline std::vector<std::vector<double>> matmul_dense(
    const std::vector<std::vector<double>>& x,
    const std::vector<std::vector<double>>& y) {
  std::size_t m = x.size(), k = y.size(), n = y[0].size();
  std::vector<std::vector<double>> out(m, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t t = 0; t < k; ++t) out[i][j] += x[i][t] * y[t][j];
  return out;
}

// Per-class counting straight off the prediction/label lists.
struct ClassCounts {
  long long tp = 0, fp = 0, fn = 0;
};

inline ClassCounts count_class(const std::vector<int>& preds,
                               const std::vector<int>& labels, int c) {
  ClassCounts counts;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] == c && labels[i] == c) ++counts.tp;
    if (preds[i] == c && labels[i] != c) ++counts.fp;
    if (preds[i] != c && labels[i] == c) ++counts.fn;
  }
  return counts;
}

inline double accuracy_by_counting(const std::vector<int>& preds,
                                   const std::vector<int>& labels) {
  long long correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i)
    if (preds[i] == labels[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(preds.size());
}

inline double precision_by_counting(const ClassCounts& c) {
  return c.tp + c.fp == 0 ? 0.0
                          : static_cast<double>(c.tp) /
                                static_cast<double>(c.tp + c.fp);
}

inline double recall_by_counting(const ClassCounts& c) {
  return c.tp + c.fn == 0 ? 0.0
                          : static_cast<double>(c.tp) /
                                static_cast<double>(c.tp + c.fn);
}

inline double f1_by_counting(const ClassCounts& c) {
  double p = precision_by_counting(c);
  double r = recall_by_counting(c);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

}  // namespace oracle
