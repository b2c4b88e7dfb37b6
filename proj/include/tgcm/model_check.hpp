#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "tgcm/model.hpp"
#include "tgcm/tensor.hpp"
#include "tgcm/train.hpp"

namespace tgcm {

namespace detail {

inline bool entries_clear_of(const Mat<double>& m, double margin) {
  if (m.size() == 0) return true;
  return m.cwiseAbs().minCoeff() >= margin;
}

// Central differences need the loss to be smooth within the probe radius.
// Rejects instances whose forward pass sits closer than `margin` to a
// LeakyReLU zero crossing or to a pooling argmax switch.
inline bool forward_is_smooth(const Model<double>& model,
                              const DocTrace<double>& trace, double margin) {
  for (std::size_t k = 0; k < trace.layer_traces.size(); ++k) {
    const auto& traces = trace.layer_traces[k];
    if (!entries_clear_of(traces.gcn.pre, margin)) return false;
    if (!entries_clear_of(traces.gat.pre, margin)) return false;
    for (const auto& row : traces.gat.raw)
      for (double r : row)
        if (std::abs(r) < margin) return false;
    if (!entries_clear_of(traces.sage.pre, margin)) return false;
    if (traces.sage.pool_pre.size() > 0) {
      if (!entries_clear_of(traces.sage.pool_pre, margin)) return false;
      // top-2 gap per aggregated feature
      const auto& pooled = traces.sage.pooled;
      for (Index v = 0; v < pooled.rows(); ++v) {
        const auto& sampled = traces.sage.sampled[static_cast<std::size_t>(v)];
        if (sampled.empty()) continue;
        for (Index j = 0; j < pooled.cols(); ++j) {
          double best = pooled(v, j);
          double second = std::numeric_limits<double>::lowest();
          for (int u : sampled) {
            double cand = pooled(u, j);
            if (cand > best) {
              second = best;
              best = cand;
            } else if (cand > second) {
              second = cand;
            }
          }
          if (second > std::numeric_limits<double>::lowest() &&
              best - second < margin)
            return false;
        }
      }
    }
    if (!entries_clear_of(traces.nn4g.pre, margin)) return false;
  }
  for (const auto& mt : trace.modality_traces)
    if (!entries_clear_of(mt.pre, margin)) return false;
  (void)model;
  return true;
}

}  // namespace detail

// Random small classification instance (3-5 graph nodes, two modalities) and a
// finite-difference check of the full analytic backward pass, all at 64-bit.
// Instances whose forward pass sits within the probe radius of an activation
// kink are redrawn, so the comparison always happens on a smooth patch.
// inject_error doubles one analytic gradient, for exercising the failure path.
inline GradCheckReport model_gradcheck(Mode mode, LayerKind kind, Aggregator agg,
                                       std::uint64_t seed, bool inject_error = false,
                                       double eps = 1e-4) {
  ModelSpec spec;
  spec.mode = mode;
  spec.kind = kind;
  spec.aggregator = agg;
  spec.sample_size = 2;  // smaller than the max degree, so sampling is real
  spec.widths = {4, 3};
  spec.d_embed = 5;
  spec.d_fuse = 3;
  spec.vocab_size = 6;
  spec.num_classes = 3;
  spec.modalities = {{"alpha", 3}, {"beta", 2}};

  // A single +-eps parameter perturbation moves any pre-activation by at most
  // a couple of eps here (weights are O(1), features O(0.1)), so ten eps of
  // clearance keeps every probe on one smooth piece.
  const double kink_margin = 10.0 * eps;
  std::uint64_t combo = static_cast<std::uint64_t>(mode) * 16 +
                        static_cast<std::uint64_t>(kind) * 4 +
                        static_cast<std::uint64_t>(agg);

  Model<double> model;
  DocInput<double> doc;
  std::uint64_t sage_seed = mix_seed(seed, 0x5a3e);
  DocTrace<double> trace;

  for (int attempt = 0; attempt < 500; ++attempt) {
    Rng rng(mix_seed(mix_seed(seed, combo), static_cast<std::uint64_t>(attempt)));
    doc = DocInput<double>();
    doc.id = "gradcheck";
    for (int draw = 0; draw < 1000; ++draw) {
      doc.token_sequence.clear();
      int len = rng.next_int(6, 10);
      for (int i = 0; i < len; ++i)
        doc.token_sequence.push_back(rng.next_int(0, spec.vocab_size));
      std::vector<int> distinct;
      for (int id : doc.token_sequence)
        if (std::find(distinct.begin(), distinct.end(), id) == distinct.end())
          distinct.push_back(id);
      if (distinct.size() >= 3 && distinct.size() <= 5) break;
    }
    GraphConfig gcfg;
    gcfg.window_size = 3;
    doc.graph = build_graph<double>(doc.token_sequence, gcfg);
    doc.adj_self = neighbor_lists(doc.graph.A, true);
    for (const auto& decl : spec.modalities) {
      Mat<double> v(1, decl.dim);
      for (Index j = 0; j < decl.dim; ++j) v(0, j) = rng.uniform(-1.0, 1.0);
      doc.modality_values.push_back(std::move(v));
    }
    doc.label = static_cast<int>(rng.next_below(spec.num_classes));

    model = init_model<double>(spec, rng.next_u64());
    trace = DocTrace<double>();
    forward_document(model, doc, sage_seed, trace);
    if (detail::forward_is_smooth(model, trace, kink_margin)) break;
  }

  auto loss_fn = [&]() {
    DocTrace<double> t;
    forward_document(model, doc, sage_seed, t);
    return cross_entropy(t.probs, {doc.label});
  };

  model.zero_grads();
  Mat<double> d_logits = trace.probs;
  d_logits(0, doc.label) -= 1.0;
  backward_document(model, doc, trace, d_logits);
  if (inject_error) model.classifier.W.grad *= 2.0;

  return gradcheck(loss_fn, model.params(), eps);
}

}  // namespace tgcm
