#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tgcm/error.hpp"
#include "tgcm/types.hpp"

namespace tgcm {

// Named parameter with its accumulated gradient. Gradients are zeroed by the
// optimizer step, never implicitly.
template <typename Scalar>
struct Param {
  std::string name;
  Mat<Scalar> value;
  Mat<Scalar> grad;

  Param() = default;
  Param(std::string n, Mat<Scalar> v)
      : name(std::move(n)), value(std::move(v)),
        grad(Mat<Scalar>::Zero(value.rows(), value.cols())) {}

  void zero_grad() { grad.setZero(); }
};

// Dense product with 64-bit accumulation, stored back at the working scalar.
template <typename Scalar>
Mat<Scalar> matmul(const Mat<Scalar>& x, const Mat<Scalar>& y) {
  if (x.cols() != y.rows())
    throw Error(ErrorCode::ShapeMismatch,
                "matmul: " + std::to_string(x.rows()) + "x" +
                    std::to_string(x.cols()) + " * " + std::to_string(y.rows()) +
                    "x" + std::to_string(y.cols()));
  if constexpr (std::is_same_v<Scalar, double>) {
    return x * y;
  } else {
    return (x.template cast<double>() * y.template cast<double>())
        .template cast<Scalar>();
  }
}

template <typename Scalar>
Mat<Scalar> leaky_relu(const Mat<Scalar>& x, Scalar slope) {
  return x.array().max(x.array() * slope).matrix();
}

// Derivative convention: 1 at exactly 0.
template <typename Scalar>
Mat<Scalar> leaky_relu_deriv(const Mat<Scalar>& pre, Scalar slope) {
  return (pre.array() >= Scalar(0))
      .select(Mat<Scalar>::Constant(pre.rows(), pre.cols(), Scalar(1)),
              Mat<Scalar>::Constant(pre.rows(), pre.cols(), slope));
}

// Max-subtracted row softmax; strictly positive output summing to 1.
template <typename Scalar>
Mat<Scalar> softmax_row(const Mat<Scalar>& x) {
  if (x.rows() != 1 || x.cols() < 1)
    throw Error(ErrorCode::ShapeMismatch, "softmax_row wants a 1 x n row");
  Mat<Scalar> shifted = x.array() - x.maxCoeff();
  Mat<Scalar> e = shifted.array().exp();
  return e / e.sum();
}

template <typename Scalar>
Mat<Scalar> concat_rows(const std::vector<Mat<Scalar>>& parts) {
  if (parts.empty()) throw Error(ErrorCode::EmptyInput, "concat_rows of nothing");
  Index total = 0;
  for (const auto& p : parts) {
    if (p.rows() != 1)
      throw Error(ErrorCode::ShapeMismatch, "concat_rows wants 1 x d parts");
    total += p.cols();
  }
  Mat<Scalar> out(1, total);
  Index at = 0;
  for (const auto& p : parts) {
    out.block(0, at, 1, p.cols()) = p;
    at += p.cols();
  }
  return out;
}

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst_param;
};

// Central-difference check of analytic gradients. params[i]->grad must hold
// the analytic gradient on entry; loss_fn() re-evaluates the loss at the
// current parameter values. Everything runs at 64-bit.
template <typename LossFn>
GradCheckReport gradcheck(LossFn&& loss_fn, const std::vector<Param<double>*>& params,
                          double eps = 1e-4) {
  GradCheckReport report;
  for (Param<double>* p : params) {
    for (Index r = 0; r < p->value.rows(); ++r) {
      for (Index c = 0; c < p->value.cols(); ++c) {
        double saved = p->value(r, c);
        p->value(r, c) = saved + eps;
        double up = loss_fn();
        p->value(r, c) = saved - eps;
        double down = loss_fn();
        p->value(r, c) = saved;
        if (!std::isfinite(up) || !std::isfinite(down))
          throw Error(ErrorCode::NonFiniteLoss,
                      "while perturbing " + p->name);
        double numeric = (up - down) / (2.0 * eps);
        double analytic = p->grad(r, c);
        double rel = std::abs(analytic - numeric) /
                     std::max(1e-8, std::abs(analytic) + std::abs(numeric));
        if (rel > report.max_rel_error) {
          report.max_rel_error = rel;
          report.worst_param = p->name;
        }
      }
    }
  }
  return report;
}

}  // namespace tgcm
