#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "tgcm/csr.hpp"
#include "tgcm/error.hpp"
#include "tgcm/types.hpp"

namespace tgcm {

struct GraphConfig {
  int window_size = 3;
  double ppmi_threshold = 0.0;
  int top_k_per_node = 16;
};

// Sliding-window counts. pair_counts is keyed on the unordered token-id pair;
// unigram counts are windows containing the id, not occurrences.
struct CooccurrenceStats {
  std::int64_t window_count = 0;
  std::unordered_map<std::uint64_t, std::int64_t> pair_counts;
  std::unordered_map<int, std::int64_t> unigram_window_counts;

  static std::uint64_t pair_key(int i, int j) {
    if (i > j) std::swap(i, j);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
           static_cast<std::uint32_t>(j);
  }

  std::int64_t pair_count(int i, int j) const {
    auto it = pair_counts.find(pair_key(i, j));
    return it == pair_counts.end() ? 0 : it->second;
  }

  std::int64_t unigram_count(int i) const {
    auto it = unigram_window_counts.find(i);
    return it == unigram_window_counts.end() ? 0 : it->second;
  }
};

// Every length-w contiguous slice is a window; a sequence shorter than w is a
// single window. Within a window each unordered pair of distinct ids counts
// once.
inline CooccurrenceStats cooccurrence(const std::vector<int>& ids, int w) {
  CooccurrenceStats stats;
  if (ids.empty()) return stats;
  int len = static_cast<int>(ids.size());
  int windows = std::max(1, len - w + 1);
  stats.window_count = windows;
  std::vector<int> distinct;
  for (int start = 0; start < windows; ++start) {
    int end = std::min(len, start + w);
    distinct.clear();
    for (int k = start; k < end; ++k) {
      if (std::find(distinct.begin(), distinct.end(), ids[k]) == distinct.end())
        distinct.push_back(ids[k]);
    }
    for (std::size_t a = 0; a < distinct.size(); ++a) {
      ++stats.unigram_window_counts[distinct[a]];
      for (std::size_t b = a + 1; b < distinct.size(); ++b)
        ++stats.pair_counts[CooccurrenceStats::pair_key(distinct[a], distinct[b])];
    }
  }
  return stats;
}

// max(0, ln(p(i,j) / (p(i) p(j)))) with window-relative probabilities.
inline double ppmi(const CooccurrenceStats& stats, int i, int j) {
  std::int64_t cij = stats.pair_count(i, j);
  if (cij == 0) return 0.0;
  double nw = static_cast<double>(stats.window_count);
  double pij = static_cast<double>(cij) / nw;
  double pi = static_cast<double>(stats.unigram_count(i)) / nw;
  double pj = static_cast<double>(stats.unigram_count(j)) / nw;
  double pmi = std::log(pij / (pi * pj));
  return pmi > 0.0 ? pmi : 0.0;
}

// Per-document word graph over distinct token ids. A holds PPMI weights with a
// zero diagonal; A_hat is the symmetric-normalized self-looped adjacency.
template <typename Scalar>
struct TextGraph {
  std::vector<int> nodes;  // token ids in first-occurrence order
  Csr<Scalar> A;
  Csr<Scalar> A_hat;

  int size() const { return static_cast<int>(nodes.size()); }
};

// D^{-1/2} (A+I) D^{-1/2} with d_i = 1 + row sum. d_i >= 1, so no zero
// division; isolated nodes normalize to self-weight 1. Any diagonal already
// present in A folds into the self-loop.
template <typename Scalar>
Csr<Scalar> normalize(const Csr<Scalar>& a) {
  std::vector<double> deg(static_cast<std::size_t>(a.n), 1.0);
  std::vector<double> self(static_cast<std::size_t>(a.n), 1.0);
  for (int r = 0; r < a.n; ++r)
    for (int k = a.indptr[r]; k < a.indptr[r + 1]; ++k) {
      double v = static_cast<double>(a.values[static_cast<std::size_t>(k)]);
      deg[static_cast<std::size_t>(r)] += v;
      if (a.indices[static_cast<std::size_t>(k)] == r)
        self[static_cast<std::size_t>(r)] += v;
    }

  std::vector<Triplet<Scalar>> triplets;
  triplets.reserve(a.indices.size() + static_cast<std::size_t>(a.n));
  for (int r = 0; r < a.n; ++r) {
    triplets.emplace_back(r, r,
                          static_cast<Scalar>(self[static_cast<std::size_t>(r)] /
                                              deg[static_cast<std::size_t>(r)]));
    for (int k = a.indptr[r]; k < a.indptr[r + 1]; ++k) {
      int c = a.indices[static_cast<std::size_t>(k)];
      if (c == r) continue;
      double v = static_cast<double>(a.values[static_cast<std::size_t>(k)]) /
                 std::sqrt(deg[static_cast<std::size_t>(r)] *
                           deg[static_cast<std::size_t>(c)]);
      triplets.emplace_back(r, c, static_cast<Scalar>(v));
    }
  }
  return to_csr(std::move(triplets), a.n);
}

// L = D - A with D_ii the row sum; rows sum to zero.
template <typename Scalar>
Csr<Scalar> laplacian(const Csr<Scalar>& a) {
  std::vector<double> deg(static_cast<std::size_t>(a.n), 0.0);
  std::vector<double> self(static_cast<std::size_t>(a.n), 0.0);
  for (int r = 0; r < a.n; ++r)
    for (int k = a.indptr[r]; k < a.indptr[r + 1]; ++k) {
      double v = static_cast<double>(a.values[static_cast<std::size_t>(k)]);
      deg[static_cast<std::size_t>(r)] += v;
      if (a.indices[static_cast<std::size_t>(k)] == r)
        self[static_cast<std::size_t>(r)] += v;
    }

  std::vector<Triplet<Scalar>> triplets;
  triplets.reserve(a.indices.size() + static_cast<std::size_t>(a.n));
  for (int r = 0; r < a.n; ++r) {
    triplets.emplace_back(r, r,
                          static_cast<Scalar>(deg[static_cast<std::size_t>(r)] -
                                              self[static_cast<std::size_t>(r)]));
    for (int k = a.indptr[r]; k < a.indptr[r + 1]; ++k) {
      int c = a.indices[static_cast<std::size_t>(k)];
      if (c == r) continue;
      triplets.emplace_back(r, c,
                            static_cast<Scalar>(-static_cast<double>(
                                a.values[static_cast<std::size_t>(k)])));
    }
  }
  return to_csr(std::move(triplets), a.n);
}

struct WeightedEdge {
  int u = 0, v = 0;
  double weight = 0.0;
};

// Per-node top-k: each node marks its top_k strongest incident candidates and
// an edge survives if either endpoint marks it. Ties break toward the lower
// neighbor index.
inline std::vector<char> select_top_k(const std::vector<WeightedEdge>& candidates,
                                      int n, int top_k) {
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(n));
  for (std::size_t e = 0; e < candidates.size(); ++e) {
    incident[static_cast<std::size_t>(candidates[e].u)].push_back(
        static_cast<int>(e));
    incident[static_cast<std::size_t>(candidates[e].v)].push_back(
        static_cast<int>(e));
  }
  std::vector<char> kept(candidates.size(), 0);
  for (int v = 0; v < n; ++v) {
    auto& edges = incident[static_cast<std::size_t>(v)];
    auto other = [&](int e) {
      const auto& c = candidates[static_cast<std::size_t>(e)];
      return c.u == v ? c.v : c.u;
    };
    std::sort(edges.begin(), edges.end(), [&](int a, int b) {
      double wa = candidates[static_cast<std::size_t>(a)].weight;
      double wb = candidates[static_cast<std::size_t>(b)].weight;
      if (wa != wb) return wa > wb;
      return other(a) < other(b);
    });
    std::size_t keep =
        std::min<std::size_t>(edges.size(), static_cast<std::size_t>(top_k));
    for (std::size_t k = 0; k < keep; ++k)
      kept[static_cast<std::size_t>(edges[k])] = 1;
  }
  return kept;
}

// Candidate edges are pairs with PPMI above the threshold, thinned by
// select_top_k, weighted by their PPMI.
template <typename Scalar>
TextGraph<Scalar> build_graph(const std::vector<int>& ids, const GraphConfig& cfg) {
  if (ids.empty()) throw Error(ErrorCode::EmptyDocument, "no token ids");

  TextGraph<Scalar> graph;
  std::unordered_map<int, int> node_index;
  for (int id : ids) {
    if (node_index.emplace(id, static_cast<int>(graph.nodes.size())).second)
      graph.nodes.push_back(id);
  }
  int n = graph.size();

  CooccurrenceStats stats = cooccurrence(ids, cfg.window_size);

  std::vector<WeightedEdge> candidates;
  for (const auto& [key, count] : stats.pair_counts) {
    (void)count;
    int id_i = static_cast<int>(key >> 32);
    int id_j = static_cast<int>(key & 0xffffffffULL);
    double w = ppmi(stats, id_i, id_j);
    if (w > cfg.ppmi_threshold)
      candidates.push_back({node_index[id_i], node_index[id_j], w});
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const WeightedEdge& a, const WeightedEdge& b) {
              return std::tie(a.u, a.v) < std::tie(b.u, b.v);
            });
  std::vector<char> kept = select_top_k(candidates, n, cfg.top_k_per_node);

  std::vector<Triplet<Scalar>> triplets;
  for (std::size_t e = 0; e < candidates.size(); ++e) {
    if (!kept[e]) continue;
    const auto& c = candidates[e];
    triplets.emplace_back(c.u, c.v, static_cast<Scalar>(c.weight));
    triplets.emplace_back(c.v, c.u, static_cast<Scalar>(c.weight));
  }
  graph.A = to_csr(std::move(triplets), n);
  graph.A_hat = normalize(graph.A);
  return graph;
}

// Adjacency structure as neighbor lists, optionally with the node itself
// prepended (GAT and GraphSage want the self entry).
template <typename Scalar>
std::vector<std::vector<int>> neighbor_lists(const Csr<Scalar>& a,
                                             bool include_self) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(a.n));
  for (int r = 0; r < a.n; ++r) {
    auto& row = out[static_cast<std::size_t>(r)];
    if (include_self) row.push_back(r);
    for (int k = a.indptr[r]; k < a.indptr[r + 1]; ++k) {
      int c = a.indices[static_cast<std::size_t>(k)];
      if (c != r) row.push_back(c);
    }
  }
  return out;
}

}  // namespace tgcm
