#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tgcm/error.hpp"
#include "tgcm/model.hpp"
#include "tgcm/rng.hpp"
#include "tgcm/tensor.hpp"

namespace tgcm {

struct TrainConfig {
  int epochs = 20;
  int batch_size = 64;
  double lr0 = 0.01;
  double decay = 0.95;
  double momentum = 0.9;
  std::uint64_t seed = 0;
};

// Mean negative log-likelihood with the probability clamped at 1e-12.
template <typename Scalar>
double cross_entropy(const Mat<Scalar>& probs, const std::vector<int>& labels) {
  if (static_cast<Index>(labels.size()) != probs.rows())
    throw Error(ErrorCode::LengthMismatch, "probs rows != labels");
  double total = 0.0;
  for (std::size_t b = 0; b < labels.size(); ++b) {
    if (labels[b] < 0 || labels[b] >= probs.cols())
      throw Error(ErrorCode::LabelOutOfRange,
                  "label " + std::to_string(labels[b]) + " with K=" +
                      std::to_string(probs.cols()));
    double p = static_cast<double>(probs(static_cast<Index>(b), labels[b]));
    total += -std::log(std::max(p, 1e-12));
  }
  return total / static_cast<double>(labels.size());
}

// v <- momentum v + g; theta <- theta - lr v; grads zeroed afterwards.
template <typename Scalar>
void sgd_step(const std::vector<Param<Scalar>*>& params,
              std::vector<Mat<Scalar>>& velocity, double lr, double momentum) {
  if (velocity.size() != params.size())
    throw Error(ErrorCode::ShapeMismatch, "velocity/param count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    Param<Scalar>& p = *params[i];
    Mat<Scalar>& v = velocity[i];
    if (v.rows() != p.value.rows() || v.cols() != p.value.cols())
      throw Error(ErrorCode::ShapeMismatch, "velocity shape for " + p.name);
    v = Scalar(momentum) * v + p.grad;
    p.value -= Scalar(lr) * v;
    p.zero_grad();
  }
}

inline double lr_at(int epoch, const TrainConfig& cfg) {
  return cfg.lr0 * std::pow(cfg.decay, epoch);
}

template <typename Scalar>
std::vector<Mat<Scalar>> make_velocity(Model<Scalar>& model) {
  std::vector<Mat<Scalar>> velocity;
  model.for_each_param([&](Param<Scalar>& p) {
    velocity.push_back(Mat<Scalar>::Zero(p.value.rows(), p.value.cols()));
  });
  return velocity;
}

inline std::uint64_t sage_seed_for(std::uint64_t run_seed, int epoch,
                                   std::size_t doc_index) {
  return mix_seed(mix_seed(run_seed, static_cast<std::uint64_t>(epoch)),
                  static_cast<std::uint64_t>(doc_index));
}

// One pass over the dataset: shuffle with seed^epoch, fixed-size batches (the
// last may be short), one momentum-SGD step per batch at lr_at(epoch).
// Returns the mean batch loss.
template <typename Scalar>
double train_epoch(Model<Scalar>& model, const std::vector<DocInput<Scalar>>& dataset,
                   const TrainConfig& cfg, int epoch,
                   std::vector<Mat<Scalar>>& velocity) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "no documents");

  std::vector<std::size_t> order(dataset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng shuffle_rng(cfg.seed ^ static_cast<std::uint64_t>(epoch));
  shuffle_rng.shuffle(order);

  auto params = model.params();
  double lr = lr_at(epoch, cfg);
  double loss_sum = 0.0;
  int batches = 0;

  for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
    std::size_t end = std::min(order.size(), start + cfg.batch_size);
    Scalar inv_b = Scalar(1) / Scalar(end - start);
    double batch_loss = 0.0;
    for (std::size_t i = start; i < end; ++i) {
      const DocInput<Scalar>& doc = dataset[order[i]];
      DocTrace<Scalar> trace;
      forward_document(model, doc, sage_seed_for(cfg.seed, epoch, order[i]), trace);
      double p = static_cast<double>(trace.probs(0, doc.label));
      batch_loss += -std::log(std::max(p, 1e-12));
      Mat<Scalar> d_logits = trace.probs * inv_b;
      d_logits(0, doc.label) -= inv_b;
      backward_document(model, doc, trace, d_logits);
    }
    batch_loss /= static_cast<double>(end - start);
    if (!std::isfinite(batch_loss))
      throw Error(ErrorCode::NonFiniteLoss,
                  "epoch " + std::to_string(epoch) + ", batch " +
                      std::to_string(batches));
    sgd_step(params, velocity, lr, cfg.momentum);
    loss_sum += batch_loss;
    ++batches;
  }
  return loss_sum / batches;
}

// ---------------------------------------------------------------------------
// Checkpoint format: "TGCM", u32 version, u32-length-prefixed UTF-8 snapshot,
// u32 tensor count, then per tensor: u32 name length + name, u32 rank,
// u32 dims, row-major f32 little-endian payload.

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::vector<float> data;
};

struct RawCheckpoint {
  std::uint32_t version = 0;
  std::string snapshot;
  std::vector<NamedTensor> tensors;
};

void save_checkpoint(const std::string& path, const std::string& snapshot,
                     const std::vector<NamedTensor>& tensors);
RawCheckpoint load_checkpoint(const std::string& path);

// Snapshot of the parameter set in for_each_param order.
template <typename Scalar>
std::vector<NamedTensor> collect_tensors(Model<Scalar>& model) {
  std::vector<NamedTensor> tensors;
  model.for_each_param([&](Param<Scalar>& p) {
    NamedTensor t;
    t.name = p.name;
    t.dims = {static_cast<std::uint32_t>(p.value.rows()),
              static_cast<std::uint32_t>(p.value.cols())};
    t.data.reserve(static_cast<std::size_t>(p.value.size()));
    for (Index r = 0; r < p.value.rows(); ++r)
      for (Index c = 0; c < p.value.cols(); ++c)
        t.data.push_back(static_cast<float>(p.value(r, c)));
    tensors.push_back(std::move(t));
  });
  return tensors;
}

// Fills a freshly initialized model; names and shapes must agree exactly.
template <typename Scalar>
void apply_tensors(Model<Scalar>& model, const std::vector<NamedTensor>& tensors) {
  std::size_t at = 0;
  model.for_each_param([&](Param<Scalar>& p) {
    if (at >= tensors.size())
      throw Error(ErrorCode::CorruptTensor, "missing tensor for " + p.name);
    const NamedTensor& t = tensors[at++];
    if (t.name != p.name)
      throw Error(ErrorCode::CorruptTensor,
                  "expected tensor '" + p.name + "', found '" + t.name + "'");
    if (t.dims.size() != 2 ||
        static_cast<Index>(t.dims[0]) != p.value.rows() ||
        static_cast<Index>(t.dims[1]) != p.value.cols())
      throw Error(ErrorCode::CorruptTensor, "shape disagreement for " + p.name);
    std::size_t k = 0;
    for (Index r = 0; r < p.value.rows(); ++r)
      for (Index c = 0; c < p.value.cols(); ++c)
        p.value(r, c) = static_cast<Scalar>(t.data[k++]);
  });
  if (at != tensors.size())
    throw Error(ErrorCode::CorruptTensor, "checkpoint has extra tensors");
}

}  // namespace tgcm
