#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tgcm/csr.hpp"
#include "tgcm/error.hpp"
#include "tgcm/rng.hpp"
#include "tgcm/tensor.hpp"
#include "tgcm/types.hpp"

namespace tgcm {

// Activation slope shared by every layer and by the attention scores.
inline constexpr double kLeakySlope = 0.2;

enum class LayerKind { gat, gcn, sage, nn4g };
enum class Aggregator { mean, pooling };

template <typename Scalar>
struct GcnLayerParams {
  Param<Scalar> W;  // d_in x d_out
};

template <typename Scalar>
struct GatLayerParams {
  Param<Scalar> W;  // d_in x d_out
  Param<Scalar> a;  // 1 x 2*d_out, split [a_src | a_dst]
};

template <typename Scalar>
struct SageLayerParams {
  Param<Scalar> W;       // d_in x d_out, applied to the aggregated vector
  Param<Scalar> W_pool;  // d_in x d_in, pooling pre-transform (pooling only)
  Aggregator aggregator = Aggregator::mean;
  int sample_size = 10;
};

template <typename Scalar>
struct Nn4gLayerParams {
  Param<Scalar> W_in;   // d_in x d_out, applied to the raw node features
  Param<Scalar> theta;  // d_hidden x d_out, applied to the neighbor sum
};

// ---------------------------------------------------------------------------
// Embedding lookup

template <typename Scalar>
Mat<Scalar> embed_forward(const std::vector<int>& ids, const Mat<Scalar>& table) {
  Mat<Scalar> out(static_cast<Index>(ids.size()), table.cols());
  for (std::size_t v = 0; v < ids.size(); ++v) {
    if (ids[v] < 0 || ids[v] >= table.rows())
      throw Error(ErrorCode::IndexOutOfRange,
                  "token id " + std::to_string(ids[v]) + " outside table of " +
                      std::to_string(table.rows()) + " rows");
    out.row(static_cast<Index>(v)) = table.row(ids[v]);
  }
  return out;
}

// Duplicate ids accumulate additively.
template <typename Scalar>
void embed_backward(const std::vector<int>& ids, const Mat<Scalar>& d_out,
                    Mat<Scalar>& table_grad) {
  for (std::size_t v = 0; v < ids.size(); ++v)
    table_grad.row(ids[v]) += d_out.row(static_cast<Index>(v));
}

// ---------------------------------------------------------------------------
// GCN: sigma(A_hat H W)

template <typename Scalar>
struct GcnTrace {
  Mat<Scalar> input;       // H
  Mat<Scalar> propagated;  // A_hat H
  Mat<Scalar> pre;         // A_hat H W
};

template <typename Scalar>
Mat<Scalar> gcn_forward(const Csr<Scalar>& a_hat, const Mat<Scalar>& h,
                        const GcnLayerParams<Scalar>& p, GcnTrace<Scalar>& trace) {
  trace.input = h;
  trace.propagated = spmm(a_hat, h);
  trace.pre = matmul(trace.propagated, p.W.value);
  return leaky_relu(trace.pre, Scalar(kLeakySlope));
}

template <typename Scalar>
Mat<Scalar> gcn_forward(const Csr<Scalar>& a_hat, const Mat<Scalar>& h,
                        const GcnLayerParams<Scalar>& p) {
  GcnTrace<Scalar> trace;
  return gcn_forward(a_hat, h, p, trace);
}

// A_hat is symmetric, so dH = A_hat dP with P = A_hat H.
template <typename Scalar>
Mat<Scalar> gcn_backward(const Csr<Scalar>& a_hat, const Mat<Scalar>& d_z,
                         GcnLayerParams<Scalar>& p, const GcnTrace<Scalar>& trace) {
  Mat<Scalar> d_pre =
      d_z.cwiseProduct(leaky_relu_deriv(trace.pre, Scalar(kLeakySlope)));
  Mat<Scalar> prop_t = trace.propagated.transpose();
  p.W.grad += matmul(prop_t, d_pre);
  Mat<Scalar> w_t = p.W.value.transpose();
  Mat<Scalar> d_prop = matmul(d_pre, w_t);
  return spmm(a_hat, d_prop);
}

// ---------------------------------------------------------------------------
// GAT: attention over N(v) including self (Eq. style: scores from
// a . [W h_v || W h_u], LeakyReLU, row softmax)

template <typename Scalar>
struct GatTrace {
  Mat<Scalar> input;      // H
  Mat<Scalar> projected;  // G = H W
  Mat<Scalar> src_score;  // n x 1, G a_src^T
  Mat<Scalar> dst_score;  // n x 1, G a_dst^T
  std::vector<std::vector<Scalar>> raw;    // pre-softmax scores per neighbor
  std::vector<std::vector<Scalar>> alpha;  // attention rows, aligned to adj
  Mat<Scalar> pre;                         // aggregated messages before sigma
};

template <typename Scalar>
Mat<Scalar> gat_forward(const Mat<Scalar>& h, const std::vector<std::vector<int>>& adj,
                        const GatLayerParams<Scalar>& p, GatTrace<Scalar>& trace) {
  Index d_out = p.W.value.cols();
  if (p.a.value.cols() != 2 * d_out)
    throw Error(ErrorCode::ShapeMismatch,
                "attention vector must have 2*d_out entries");
  Index n = h.rows();
  if (static_cast<Index>(adj.size()) != n)
    throw Error(ErrorCode::ShapeMismatch, "adjacency/node count mismatch");

  trace.input = h;
  trace.projected = matmul(h, p.W.value);
  Mat<Scalar> a_src = p.a.value.block(0, 0, 1, d_out);
  Mat<Scalar> a_dst = p.a.value.block(0, d_out, 1, d_out);
  Mat<Scalar> a_src_t = a_src.transpose();
  Mat<Scalar> a_dst_t = a_dst.transpose();
  trace.src_score = matmul(trace.projected, a_src_t);
  trace.dst_score = matmul(trace.projected, a_dst_t);

  trace.raw.assign(adj.size(), {});
  trace.alpha.assign(adj.size(), {});
  trace.pre = Mat<Scalar>::Zero(n, d_out);
  for (Index v = 0; v < n; ++v) {
    const auto& nbrs = adj[static_cast<std::size_t>(v)];
    auto& raw = trace.raw[static_cast<std::size_t>(v)];
    auto& alpha = trace.alpha[static_cast<std::size_t>(v)];
    raw.resize(nbrs.size());
    alpha.resize(nbrs.size());
    Scalar max_e = std::numeric_limits<Scalar>::lowest();
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      Scalar s = trace.src_score(v, 0) + trace.dst_score(nbrs[k], 0);
      raw[k] = s;
      Scalar e = s >= Scalar(0) ? s : Scalar(kLeakySlope) * s;
      alpha[k] = e;
      if (e > max_e) max_e = e;
    }
    Scalar total = Scalar(0);
    for (auto& e : alpha) {
      e = std::exp(e - max_e);
      total += e;
    }
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      alpha[k] /= total;
      trace.pre.row(v) += alpha[k] * trace.projected.row(nbrs[k]);
    }
  }
  return leaky_relu(trace.pre, Scalar(kLeakySlope));
}

template <typename Scalar>
Mat<Scalar> gat_forward(const Mat<Scalar>& h, const std::vector<std::vector<int>>& adj,
                        const GatLayerParams<Scalar>& p) {
  GatTrace<Scalar> trace;
  return gat_forward(h, adj, p, trace);
}

// Attention coefficients only; rows aligned with adj and summing to 1.
template <typename Scalar>
std::vector<std::vector<Scalar>> gat_attention(const Mat<Scalar>& h,
                                               const std::vector<std::vector<int>>& adj,
                                               const GatLayerParams<Scalar>& p) {
  GatTrace<Scalar> trace;
  gat_forward(h, adj, p, trace);
  return trace.alpha;
}

template <typename Scalar>
Mat<Scalar> gat_backward(const std::vector<std::vector<int>>& adj,
                         const Mat<Scalar>& d_z, GatLayerParams<Scalar>& p,
                         const GatTrace<Scalar>& trace) {
  Index n = trace.input.rows();
  Index d_out = p.W.value.cols();
  Mat<Scalar> a_src = p.a.value.block(0, 0, 1, d_out);
  Mat<Scalar> a_dst = p.a.value.block(0, d_out, 1, d_out);

  Mat<Scalar> d_pre =
      d_z.cwiseProduct(leaky_relu_deriv(trace.pre, Scalar(kLeakySlope)));
  Mat<Scalar> d_proj = Mat<Scalar>::Zero(n, d_out);
  Mat<Scalar> d_src = Mat<Scalar>::Zero(n, 1);
  Mat<Scalar> d_dst = Mat<Scalar>::Zero(n, 1);

  for (Index v = 0; v < n; ++v) {
    const auto& nbrs = adj[static_cast<std::size_t>(v)];
    const auto& alpha = trace.alpha[static_cast<std::size_t>(v)];
    const auto& raw = trace.raw[static_cast<std::size_t>(v)];

    // d alpha_vu = dPre_v . g_u, and message term g_u picks up alpha_vu dPre_v
    std::vector<Scalar> d_alpha(nbrs.size());
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      d_alpha[k] = d_pre.row(v).dot(trace.projected.row(nbrs[k]));
      d_proj.row(nbrs[k]) += alpha[k] * d_pre.row(v);
    }
    // softmax jacobian, then the LeakyReLU on the raw scores
    Scalar inner = Scalar(0);
    for (std::size_t k = 0; k < nbrs.size(); ++k) inner += alpha[k] * d_alpha[k];
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      Scalar d_e = alpha[k] * (d_alpha[k] - inner);
      Scalar d_raw =
          d_e * (raw[k] >= Scalar(0) ? Scalar(1) : Scalar(kLeakySlope));
      d_src(v, 0) += d_raw;
      d_dst(nbrs[k], 0) += d_raw;
    }
  }

  // src_score = G a_src^T, dst_score = G a_dst^T
  Mat<Scalar> proj_t = trace.projected.transpose();
  Mat<Scalar> d_a_src = matmul(Mat<Scalar>(d_src.transpose()), trace.projected);
  Mat<Scalar> d_a_dst = matmul(Mat<Scalar>(d_dst.transpose()), trace.projected);
  p.a.grad.block(0, 0, 1, d_out) += d_a_src;
  p.a.grad.block(0, d_out, 1, d_out) += d_a_dst;
  d_proj += matmul(d_src, a_src);
  d_proj += matmul(d_dst, a_dst);

  Mat<Scalar> input_t = trace.input.transpose();
  p.W.grad += matmul(input_t, d_proj);
  Mat<Scalar> w_t = p.W.value.transpose();
  return matmul(d_proj, w_t);
}

// ---------------------------------------------------------------------------
// GraphSage with seeded uniform neighbor sampling (without replacement)

template <typename Scalar>
struct SageTrace {
  Mat<Scalar> input;
  std::vector<std::vector<int>> sampled;  // per node, self excluded
  Mat<Scalar> pool_pre;                   // H W_pool (pooling only)
  Mat<Scalar> pooled;                     // sigma(pool_pre) (pooling only)
  std::vector<std::vector<int>> argmax;   // winner row per (v, feature)
  Mat<Scalar> aggregated;                 // z_v rows
  Mat<Scalar> pre;                        // z W
};

// Nodes are visited in index order and draw from one seeded stream, so the
// sample set is a pure function of (seed, adjacency).
inline std::vector<std::vector<int>> sage_sample_neighbors(
    const std::vector<std::vector<int>>& adj, int self_excluded_cap,
    std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<int>> sampled(adj.size());
  for (std::size_t v = 0; v < adj.size(); ++v) {
    std::vector<int> pool;
    for (int u : adj[v])
      if (u != static_cast<int>(v)) pool.push_back(u);
    if (static_cast<int>(pool.size()) <= self_excluded_cap) {
      sampled[v] = std::move(pool);
    } else {
      sampled[v] = rng.sample_without_replacement(
          std::move(pool), static_cast<std::size_t>(self_excluded_cap));
    }
  }
  return sampled;
}

template <typename Scalar>
Mat<Scalar> sage_forward(const Mat<Scalar>& h, const std::vector<std::vector<int>>& adj,
                         const SageLayerParams<Scalar>& p, std::uint64_t seed,
                         SageTrace<Scalar>& trace) {
  Index n = h.rows();
  trace.input = h;
  trace.sampled = sage_sample_neighbors(adj, p.sample_size, seed);

  if (p.aggregator == Aggregator::mean) {
    trace.aggregated = Mat<Scalar>::Zero(n, h.cols());
    for (Index v = 0; v < n; ++v) {
      const auto& nbrs = trace.sampled[static_cast<std::size_t>(v)];
      Mat<Scalar> acc = h.row(v);
      for (int u : nbrs) acc += h.row(u);
      trace.aggregated.row(v) = acc / Scalar(1 + nbrs.size());
    }
  } else {
    trace.pool_pre = matmul(h, p.W_pool.value);
    trace.pooled = leaky_relu(trace.pool_pre, Scalar(kLeakySlope));
    trace.aggregated = Mat<Scalar>::Zero(n, h.cols());
    trace.argmax.assign(static_cast<std::size_t>(n), {});
    for (Index v = 0; v < n; ++v) {
      auto& winners = trace.argmax[static_cast<std::size_t>(v)];
      winners.assign(static_cast<std::size_t>(h.cols()), static_cast<int>(v));
      trace.aggregated.row(v) = trace.pooled.row(v);
      for (int u : trace.sampled[static_cast<std::size_t>(v)]) {
        for (Index j = 0; j < h.cols(); ++j) {
          if (trace.pooled(u, j) > trace.aggregated(v, j)) {
            trace.aggregated(v, j) = trace.pooled(u, j);
            winners[static_cast<std::size_t>(j)] = u;
          }
        }
      }
    }
  }
  trace.pre = matmul(trace.aggregated, p.W.value);
  return leaky_relu(trace.pre, Scalar(kLeakySlope));
}

template <typename Scalar>
Mat<Scalar> sage_forward(const Mat<Scalar>& h, const std::vector<std::vector<int>>& adj,
                         const SageLayerParams<Scalar>& p, std::uint64_t seed) {
  SageTrace<Scalar> trace;
  return sage_forward(h, adj, p, seed, trace);
}

template <typename Scalar>
Mat<Scalar> sage_backward(const Mat<Scalar>& d_z, SageLayerParams<Scalar>& p,
                          const SageTrace<Scalar>& trace) {
  Index n = trace.input.rows();
  Mat<Scalar> d_pre =
      d_z.cwiseProduct(leaky_relu_deriv(trace.pre, Scalar(kLeakySlope)));
  Mat<Scalar> agg_t = trace.aggregated.transpose();
  p.W.grad += matmul(agg_t, d_pre);
  Mat<Scalar> w_t = p.W.value.transpose();
  Mat<Scalar> d_agg = matmul(d_pre, w_t);

  Mat<Scalar> d_h = Mat<Scalar>::Zero(n, trace.input.cols());
  if (p.aggregator == Aggregator::mean) {
    for (Index v = 0; v < n; ++v) {
      const auto& nbrs = trace.sampled[static_cast<std::size_t>(v)];
      Scalar inv = Scalar(1) / Scalar(1 + nbrs.size());
      d_h.row(v) += inv * d_agg.row(v);
      for (int u : nbrs) d_h.row(u) += inv * d_agg.row(v);
    }
  } else {
    Mat<Scalar> d_pooled = Mat<Scalar>::Zero(n, trace.input.cols());
    for (Index v = 0; v < n; ++v) {
      const auto& winners = trace.argmax[static_cast<std::size_t>(v)];
      for (Index j = 0; j < trace.input.cols(); ++j)
        d_pooled(winners[static_cast<std::size_t>(j)], j) += d_agg(v, j);
    }
    Mat<Scalar> d_pool_pre = d_pooled.cwiseProduct(
        leaky_relu_deriv(trace.pool_pre, Scalar(kLeakySlope)));
    Mat<Scalar> input_t = trace.input.transpose();
    p.W_pool.grad += matmul(input_t, d_pool_pre);
    Mat<Scalar> pool_t = p.W_pool.value.transpose();
    d_h += matmul(d_pool_pre, pool_t);
  }
  return d_h;
}

// ---------------------------------------------------------------------------
// NN4G: f(X W_in + (A H_prev) Theta) on the raw adjacency, h^(0) = 0

template <typename Scalar>
struct Nn4gTrace {
  Mat<Scalar> features;      // X
  Mat<Scalar> neighbor_sum;  // A H_prev
  Mat<Scalar> pre;
};

template <typename Scalar>
Mat<Scalar> nn4g_forward(const Mat<Scalar>& x, const Mat<Scalar>& h_prev,
                         const Csr<Scalar>& a, const Nn4gLayerParams<Scalar>& p,
                         Nn4gTrace<Scalar>& trace) {
  trace.features = x;
  trace.neighbor_sum = spmm(a, h_prev);
  trace.pre = matmul(x, p.W_in.value) + matmul(trace.neighbor_sum, p.theta.value);
  return leaky_relu(trace.pre, Scalar(kLeakySlope));
}

template <typename Scalar>
Mat<Scalar> nn4g_forward(const Mat<Scalar>& x, const Mat<Scalar>& h_prev,
                         const Csr<Scalar>& a, const Nn4gLayerParams<Scalar>& p) {
  Nn4gTrace<Scalar> trace;
  return nn4g_forward(x, h_prev, a, p, trace);
}

// Returns dX; dH_prev accumulates into d_h_prev (the previous layer's output).
template <typename Scalar>
Mat<Scalar> nn4g_backward(const Csr<Scalar>& a, const Mat<Scalar>& d_z,
                          Nn4gLayerParams<Scalar>& p, const Nn4gTrace<Scalar>& trace,
                          Mat<Scalar>& d_h_prev) {
  Mat<Scalar> d_pre =
      d_z.cwiseProduct(leaky_relu_deriv(trace.pre, Scalar(kLeakySlope)));
  Mat<Scalar> x_t = trace.features.transpose();
  p.W_in.grad += matmul(x_t, d_pre);
  Mat<Scalar> sum_t = trace.neighbor_sum.transpose();
  p.theta.grad += matmul(sum_t, d_pre);
  Mat<Scalar> theta_t = p.theta.value.transpose();
  Mat<Scalar> d_sum = matmul(d_pre, theta_t);
  d_h_prev += spmm(a, d_sum);
  Mat<Scalar> w_in_t = p.W_in.value.transpose();
  return matmul(d_pre, w_in_t);
}

// ---------------------------------------------------------------------------
// Mean readout

template <typename Scalar>
Mat<Scalar> readout_mean(const Mat<Scalar>& h_final) {
  if (h_final.rows() < 1) throw Error(ErrorCode::EmptyGraph, "readout of 0 nodes");
  Mat<Scalar> out(1, h_final.cols());
  for (Index c = 0; c < h_final.cols(); ++c) {
    double acc = 0.0;
    for (Index r = 0; r < h_final.rows(); ++r)
      acc += static_cast<double>(h_final(r, c));
    out(0, c) = static_cast<Scalar>(acc / static_cast<double>(h_final.rows()));
  }
  return out;
}

template <typename Scalar>
Mat<Scalar> readout_mean_backward(const Mat<Scalar>& d_out, Index n) {
  Mat<Scalar> d_h(n, d_out.cols());
  for (Index r = 0; r < n; ++r) d_h.row(r) = d_out.row(0) / Scalar(n);
  return d_h;
}

}  // namespace tgcm
