#pragma once

#include <string>
#include <vector>

#include "tgcm/error.hpp"
#include "tgcm/layers.hpp"
#include "tgcm/tensor.hpp"
#include "tgcm/types.hpp"

namespace tgcm {

template <typename Scalar>
struct ModalityVector {
  std::string name;
  Mat<Scalar> values;  // 1 x d_i
};

// Affine map into the fusion width, shared slope with the rest of the net.
template <typename Scalar>
struct ModalityTransform {
  std::string name;
  int dim_in = 0;
  Param<Scalar> W;  // d_i x d_fuse
  Param<Scalar> b;  // 1 x d_fuse
};

template <typename Scalar>
struct ClassifierHead {
  Param<Scalar> W;  // d_total x K
  Param<Scalar> b;  // 1 x K
};

template <typename Scalar>
struct ModalityTrace {
  Mat<Scalar> input;  // 1 x d_i
  Mat<Scalar> pre;    // m W + b
};

template <typename Scalar>
Mat<Scalar> transform_modality(const ModalityVector<Scalar>& m,
                               const ModalityTransform<Scalar>& t,
                               ModalityTrace<Scalar>& trace) {
  if (m.values.cols() != t.W.value.rows())
    throw Error(ErrorCode::ShapeMismatch,
                "modality '" + t.name + "' expects " +
                    std::to_string(t.W.value.rows()) + " values, got " +
                    std::to_string(m.values.cols()));
  trace.input = m.values;
  trace.pre = matmul(m.values, t.W.value) + t.b.value;
  return leaky_relu(trace.pre, Scalar(kLeakySlope));
}

template <typename Scalar>
Mat<Scalar> transform_modality(const ModalityVector<Scalar>& m,
                               const ModalityTransform<Scalar>& t) {
  ModalityTrace<Scalar> trace;
  return transform_modality(m, t, trace);
}

// Returns the gradient wrt the modality input row.
template <typename Scalar>
Mat<Scalar> transform_modality_backward(const Mat<Scalar>& d_out,
                                        ModalityTransform<Scalar>& t,
                                        const ModalityTrace<Scalar>& trace) {
  Mat<Scalar> d_pre =
      d_out.cwiseProduct(leaky_relu_deriv(trace.pre, Scalar(kLeakySlope)));
  Mat<Scalar> in_t = trace.input.transpose();
  t.W.grad += matmul(in_t, d_pre);
  t.b.grad += d_pre;
  Mat<Scalar> w_t = t.W.value.transpose();
  return matmul(d_pre, w_t);
}

// Concat(h_doc, m'_1, ..., m'_N); modality order is the configured declaration
// order. N = 0 passes h_doc through unchanged.
template <typename Scalar>
Mat<Scalar> fuse_concat(const Mat<Scalar>& h_doc,
                        const std::vector<Mat<Scalar>>& modality_outputs) {
  if (modality_outputs.empty()) return h_doc;
  std::vector<Mat<Scalar>> parts;
  parts.reserve(modality_outputs.size() + 1);
  parts.push_back(h_doc);
  for (const auto& m : modality_outputs) parts.push_back(m);
  return concat_rows(parts);
}

template <typename Scalar>
Mat<Scalar> classify(const Mat<Scalar>& h_fused, const ClassifierHead<Scalar>& head) {
  if (h_fused.cols() != head.W.value.rows())
    throw Error(ErrorCode::ShapeMismatch,
                "classifier expects " + std::to_string(head.W.value.rows()) +
                    " features, got " + std::to_string(h_fused.cols()));
  Mat<Scalar> logits = matmul(h_fused, head.W.value) + head.b.value;
  return softmax_row(logits);
}

// Ties break toward the lowest class index.
template <typename Scalar>
int argmax_class(const Mat<Scalar>& probs) {
  int best = 0;
  for (Index k = 1; k < probs.cols(); ++k)
    if (probs(0, k) > probs(0, best)) best = static_cast<int>(k);
  return best;
}

}  // namespace tgcm
