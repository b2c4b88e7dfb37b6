#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "tgcm/fusion.hpp"
#include "tgcm/graph.hpp"
#include "tgcm/layers.hpp"
#include "tgcm/rng.hpp"
#include "tgcm/tensor.hpp"

namespace tgcm {

enum class Mode { full, gnn_only, mmc_only };

struct ModalityDecl {
  std::string name;
  int dim = 0;
};

// Everything needed to rebuild the parameter set from scratch.
struct ModelSpec {
  Mode mode = Mode::full;
  LayerKind kind = LayerKind::gat;
  Aggregator aggregator = Aggregator::mean;
  int sample_size = 10;
  std::vector<int> widths = {128, 64};
  int d_embed = 128;
  int d_fuse = 64;
  int vocab_size = 0;  // content tokens, UNK excluded
  int num_classes = 0;
  std::vector<ModalityDecl> modalities;  // declaration order; drives fusion order

  bool uses_gnn() const { return mode != Mode::mmc_only; }
  bool uses_modalities() const { return mode != Mode::gnn_only; }

  int doc_width() const {
    return uses_gnn() ? widths.back() : d_embed;
  }
  int fused_width() const {
    int n = uses_modalities() ? static_cast<int>(modalities.size()) : 0;
    return doc_width() + n * d_fuse;
  }
};

template <typename Scalar>
using AnyLayerParams =
    std::variant<GcnLayerParams<Scalar>, GatLayerParams<Scalar>,
                 SageLayerParams<Scalar>, Nn4gLayerParams<Scalar>>;

template <typename Scalar>
struct Model {
  ModelSpec spec;
  Param<Scalar> embedding;  // (|V|+1) x d_embed, row 0 = UNK
  std::vector<AnyLayerParams<Scalar>> layers;
  std::vector<ModalityTransform<Scalar>> modalities;
  ClassifierHead<Scalar> classifier;

  void for_each_param(const std::function<void(Param<Scalar>&)>& fn) {
    fn(embedding);
    for (auto& layer : layers) {
      std::visit(
          [&](auto& l) {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, GcnLayerParams<Scalar>>) {
              fn(l.W);
            } else if constexpr (std::is_same_v<T, GatLayerParams<Scalar>>) {
              fn(l.W);
              fn(l.a);
            } else if constexpr (std::is_same_v<T, SageLayerParams<Scalar>>) {
              fn(l.W);
              if (l.aggregator == Aggregator::pooling) fn(l.W_pool);
            } else {
              fn(l.W_in);
              fn(l.theta);
            }
          },
          layer);
    }
    for (auto& m : modalities) {
      fn(m.W);
      fn(m.b);
    }
    fn(classifier.W);
    fn(classifier.b);
  }

  std::vector<Param<Scalar>*> params() {
    std::vector<Param<Scalar>*> out;
    for_each_param([&](Param<Scalar>& p) { out.push_back(&p); });
    return out;
  }

  void zero_grads() {
    for_each_param([](Param<Scalar>& p) { p.zero_grad(); });
  }
};

namespace detail {

template <typename Scalar>
Mat<Scalar> glorot_uniform(Rng& rng, Index rows, Index cols) {
  double r = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Mat<Scalar> m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      m(i, j) = static_cast<Scalar>(rng.uniform(-r, r));
  return m;
}

}  // namespace detail

// Parameter layout and draw order are fixed, so a (spec, seed) pair fully pins
// the initial model.
template <typename Scalar>
Model<Scalar> init_model(const ModelSpec& spec, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x6d6f64656cULL));
  Model<Scalar> model;
  model.spec = spec;

  Mat<Scalar> table(spec.vocab_size + 1, spec.d_embed);
  for (Index i = 0; i < table.rows(); ++i)
    for (Index j = 0; j < table.cols(); ++j)
      table(i, j) = static_cast<Scalar>(rng.uniform(-0.05, 0.05));
  model.embedding = Param<Scalar>("embedding", std::move(table));

  if (spec.uses_gnn()) {
    int d_in = spec.d_embed;
    for (std::size_t k = 0; k < spec.widths.size(); ++k) {
      int width = spec.widths[k];
      std::string prefix = "layer" + std::to_string(k) + ".";
      switch (spec.kind) {
        case LayerKind::gcn: {
          GcnLayerParams<Scalar> l;
          l.W = Param<Scalar>(prefix + "W",
                              detail::glorot_uniform<Scalar>(rng, d_in, width));
          model.layers.emplace_back(std::move(l));
          break;
        }
        case LayerKind::gat: {
          GatLayerParams<Scalar> l;
          l.W = Param<Scalar>(prefix + "W",
                              detail::glorot_uniform<Scalar>(rng, d_in, width));
          l.a = Param<Scalar>(prefix + "a",
                              detail::glorot_uniform<Scalar>(rng, 1, 2 * width));
          model.layers.emplace_back(std::move(l));
          break;
        }
        case LayerKind::sage: {
          SageLayerParams<Scalar> l;
          l.aggregator = spec.aggregator;
          l.sample_size = spec.sample_size;
          l.W = Param<Scalar>(prefix + "W",
                              detail::glorot_uniform<Scalar>(rng, d_in, width));
          if (spec.aggregator == Aggregator::pooling)
            l.W_pool = Param<Scalar>(prefix + "W_pool",
                                     detail::glorot_uniform<Scalar>(rng, d_in, d_in));
          model.layers.emplace_back(std::move(l));
          break;
        }
        case LayerKind::nn4g: {
          // X is always the raw embedding matrix; the state of layer 0 is the
          // all-zero matrix at embedding width.
          int d_hidden = k == 0 ? spec.d_embed : spec.widths[k - 1];
          Nn4gLayerParams<Scalar> l;
          l.W_in = Param<Scalar>(
              prefix + "W_in", detail::glorot_uniform<Scalar>(rng, spec.d_embed, width));
          l.theta = Param<Scalar>(prefix + "theta",
                                  detail::glorot_uniform<Scalar>(rng, d_hidden, width));
          model.layers.emplace_back(std::move(l));
          break;
        }
      }
      d_in = width;
    }
  }

  if (spec.uses_modalities()) {
    for (const auto& decl : spec.modalities) {
      ModalityTransform<Scalar> t;
      t.name = decl.name;
      t.dim_in = decl.dim;
      t.W = Param<Scalar>("modality." + decl.name + ".W",
                          detail::glorot_uniform<Scalar>(rng, decl.dim, spec.d_fuse));
      t.b = Param<Scalar>("modality." + decl.name + ".b",
                          Mat<Scalar>::Zero(1, spec.d_fuse));
      model.modalities.push_back(std::move(t));
    }
  }

  model.classifier.W =
      Param<Scalar>("classifier.W", detail::glorot_uniform<Scalar>(
                                        rng, spec.fused_width(), spec.num_classes));
  model.classifier.b =
      Param<Scalar>("classifier.b", Mat<Scalar>::Zero(1, spec.num_classes));
  return model;
}

// Prepared per-document input: encoded sequence, its graph (GNN modes), and
// modality rows aligned with the model's declaration order.
template <typename Scalar>
struct DocInput {
  std::string id;
  std::vector<int> token_sequence;
  int label = -1;
  TextGraph<Scalar> graph;
  std::vector<std::vector<int>> adj_self;  // neighbor lists incl. self
  std::vector<Mat<Scalar>> modality_values;
};

template <typename Scalar>
struct LayerTraceSet {
  GcnTrace<Scalar> gcn;
  GatTrace<Scalar> gat;
  SageTrace<Scalar> sage;
  Nn4gTrace<Scalar> nn4g;
};

template <typename Scalar>
struct DocTrace {
  Mat<Scalar> h0;                        // node embeddings (GNN modes)
  std::vector<LayerTraceSet<Scalar>> layer_traces;
  std::vector<Mat<Scalar>> layer_outputs;
  Mat<Scalar> h_doc;
  std::vector<ModalityTrace<Scalar>> modality_traces;
  std::vector<Mat<Scalar>> modality_outputs;
  Mat<Scalar> fused;
  Mat<Scalar> probs;
};

template <typename Scalar>
Mat<Scalar> forward_document(const Model<Scalar>& model, const DocInput<Scalar>& doc,
                             std::uint64_t sage_seed, DocTrace<Scalar>& trace) {
  const ModelSpec& spec = model.spec;
  if (doc.token_sequence.empty())
    throw Error(ErrorCode::EmptyDocument, "document '" + doc.id + "' has no tokens");

  if (spec.uses_gnn()) {
    trace.h0 = embed_forward(doc.graph.nodes, model.embedding.value);
    Mat<Scalar> h = trace.h0;
    trace.layer_traces.resize(model.layers.size());
    trace.layer_outputs.clear();
    for (std::size_t k = 0; k < model.layers.size(); ++k) {
      auto& traces = trace.layer_traces[k];
      const Mat<Scalar>* h_prev = k == 0 ? nullptr : &trace.layer_outputs[k - 1];
      h = std::visit(
          [&](const auto& l) -> Mat<Scalar> {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, GcnLayerParams<Scalar>>) {
              return gcn_forward(doc.graph.A_hat, h, l, traces.gcn);
            } else if constexpr (std::is_same_v<T, GatLayerParams<Scalar>>) {
              return gat_forward(h, doc.adj_self, l, traces.gat);
            } else if constexpr (std::is_same_v<T, SageLayerParams<Scalar>>) {
              return sage_forward(h, doc.adj_self, l, mix_seed(sage_seed, k),
                                  traces.sage);
            } else {
              Mat<Scalar> prev = h_prev
                                     ? *h_prev
                                     : Mat<Scalar>::Zero(trace.h0.rows(), spec.d_embed);
              return nn4g_forward(trace.h0, prev, doc.graph.A, l, traces.nn4g);
            }
          },
          model.layers[k]);
      trace.layer_outputs.push_back(h);
    }
    trace.h_doc = readout_mean(trace.layer_outputs.back());
  } else {
    // Graph-free text branch: mean of the raw embedding rows of the sequence.
    Mat<Scalar> seq = embed_forward(doc.token_sequence, model.embedding.value);
    trace.h_doc = readout_mean(seq);
  }

  trace.modality_outputs.clear();
  trace.modality_traces.clear();
  if (spec.uses_modalities()) {
    trace.modality_traces.resize(model.modalities.size());
    for (std::size_t i = 0; i < model.modalities.size(); ++i) {
      ModalityVector<Scalar> m{model.modalities[i].name, doc.modality_values[i]};
      trace.modality_outputs.push_back(
          transform_modality(m, model.modalities[i], trace.modality_traces[i]));
    }
  }
  trace.fused = fuse_concat(trace.h_doc, trace.modality_outputs);
  trace.probs = classify(trace.fused, model.classifier);
  return trace.probs;
}

template <typename Scalar>
Mat<Scalar> forward_document(const Model<Scalar>& model, const DocInput<Scalar>& doc,
                             std::uint64_t sage_seed = 0) {
  DocTrace<Scalar> trace;
  return forward_document(model, doc, sage_seed, trace);
}

// Accumulates dLoss/dParam for one document into the model's grads.
// d_logits is (probs - onehot) already scaled by the caller (1/B for batches).
template <typename Scalar>
void backward_document(Model<Scalar>& model, const DocInput<Scalar>& doc,
                       const DocTrace<Scalar>& trace, const Mat<Scalar>& d_logits) {
  const ModelSpec& spec = model.spec;

  Mat<Scalar> fused_t = trace.fused.transpose();
  model.classifier.W.grad += matmul(fused_t, d_logits);
  model.classifier.b.grad += d_logits;
  Mat<Scalar> cls_w_t = model.classifier.W.value.transpose();
  Mat<Scalar> d_fused = matmul(d_logits, cls_w_t);

  Mat<Scalar> d_doc = d_fused.block(0, 0, 1, trace.h_doc.cols());
  if (spec.uses_modalities()) {
    Index at = trace.h_doc.cols();
    for (std::size_t i = 0; i < model.modalities.size(); ++i) {
      Mat<Scalar> d_m = d_fused.block(0, at, 1, spec.d_fuse);
      transform_modality_backward(d_m, model.modalities[i],
                                  trace.modality_traces[i]);
      at += spec.d_fuse;
    }
  }

  if (spec.uses_gnn()) {
    Index n = trace.h0.rows();
    Mat<Scalar> d_h = readout_mean_backward(d_doc, n);
    Mat<Scalar> d_h0 = Mat<Scalar>::Zero(n, spec.d_embed);
    for (std::size_t k = model.layers.size(); k-- > 0;) {
      const auto& traces = trace.layer_traces[k];
      Mat<Scalar> d_input = std::visit(
          [&](auto& l) -> Mat<Scalar> {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, GcnLayerParams<Scalar>>) {
              return gcn_backward(doc.graph.A_hat, d_h, l, traces.gcn);
            } else if constexpr (std::is_same_v<T, GatLayerParams<Scalar>>) {
              return gat_backward(doc.adj_self, d_h, l, traces.gat);
            } else if constexpr (std::is_same_v<T, SageLayerParams<Scalar>>) {
              return sage_backward(d_h, l, traces.sage);
            } else {
              // dX feeds the embeddings directly; d_h_prev flows to the
              // previous layer's output.
              Mat<Scalar> d_prev = Mat<Scalar>::Zero(
                  n, k == 0 ? spec.d_embed : spec.widths[k - 1]);
              Mat<Scalar> d_x = nn4g_backward(doc.graph.A, d_h, l, traces.nn4g, d_prev);
              d_h0 += d_x;
              return d_prev;
            }
          },
          model.layers[k]);
      if (k == 0) {
        // For NN4G the chained input is the constant zero state; its dX
        // already went into d_h0 above.
        if (!std::holds_alternative<Nn4gLayerParams<Scalar>>(model.layers[k]))
          d_h0 += d_input;
      } else {
        d_h = std::move(d_input);
      }
    }
    embed_backward(doc.graph.nodes, d_h0, model.embedding.grad);
  } else {
    Index len = static_cast<Index>(doc.token_sequence.size());
    Mat<Scalar> d_seq = readout_mean_backward(d_doc, len);
    embed_backward(doc.token_sequence, d_seq, model.embedding.grad);
  }
}

}  // namespace tgcm
