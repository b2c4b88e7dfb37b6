#pragma once

#include <algorithm>
#include <tuple>
#include <vector>

#include "tgcm/error.hpp"
#include "tgcm/types.hpp"

namespace tgcm {

// Compressed sparse row square matrix. Column indices are sorted within each
// row; there are no duplicate entries.
template <typename Scalar>
struct Csr {
  int n = 0;
  std::vector<int> indptr;   // size n+1
  std::vector<int> indices;  // column index per stored entry
  std::vector<Scalar> values;

  Csr() : indptr(1, 0) {}
  explicit Csr(int size) : n(size), indptr(static_cast<std::size_t>(size) + 1, 0) {}

  int nnz() const { return static_cast<int>(indices.size()); }

  static Csr identity(int size) {
    Csr m(size);
    m.indices.resize(static_cast<std::size_t>(size));
    m.values.assign(static_cast<std::size_t>(size), Scalar(1));
    for (int i = 0; i < size; ++i) {
      m.indptr[static_cast<std::size_t>(i) + 1] = i + 1;
      m.indices[static_cast<std::size_t>(i)] = i;
    }
    return m;
  }
};

template <typename Scalar>
using Triplet = std::tuple<int, int, Scalar>;

template <typename Scalar>
Csr<Scalar> to_csr(std::vector<Triplet<Scalar>> triplets, int n) {
  for (const auto& [r, c, v] : triplets) {
    (void)v;
    if (r < 0 || r >= n || c < 0 || c >= n)
      throw Error(ErrorCode::IndexOutOfRange,
                  "triplet (" + std::to_string(r) + "," + std::to_string(c) +
                      ") outside " + std::to_string(n) + "x" + std::to_string(n));
  }
  std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b));
  });
  for (std::size_t i = 1; i < triplets.size(); ++i) {
    if (std::get<0>(triplets[i]) == std::get<0>(triplets[i - 1]) &&
        std::get<1>(triplets[i]) == std::get<1>(triplets[i - 1]))
      throw Error(ErrorCode::DuplicateEntry,
                  "(" + std::to_string(std::get<0>(triplets[i])) + "," +
                      std::to_string(std::get<1>(triplets[i])) + ")");
  }
  Csr<Scalar> out(n);
  out.indices.reserve(triplets.size());
  out.values.reserve(triplets.size());
  for (const auto& [r, c, v] : triplets) {
    out.indices.push_back(c);
    out.values.push_back(v);
    ++out.indptr[static_cast<std::size_t>(r) + 1];
  }
  for (int i = 0; i < n; ++i)
    out.indptr[static_cast<std::size_t>(i) + 1] +=
        out.indptr[static_cast<std::size_t>(i)];
  return out;
}

template <typename Scalar>
Mat<Scalar> to_dense(const Csr<Scalar>& m) {
  Mat<Scalar> out = Mat<Scalar>::Zero(m.n, m.n);
  for (int r = 0; r < m.n; ++r)
    for (int k = m.indptr[r]; k < m.indptr[r + 1]; ++k)
      out(r, m.indices[static_cast<std::size_t>(k)]) =
          m.values[static_cast<std::size_t>(k)];
  return out;
}

// S * X for CSR S (n x n) and dense X (n x d). Per-entry accumulation runs in
// 64-bit regardless of the stored scalar.
template <typename Scalar>
Mat<Scalar> spmm(const Csr<Scalar>& s, const Mat<Scalar>& x) {
  if (x.rows() != s.n)
    throw Error(ErrorCode::ShapeMismatch,
                "spmm: " + std::to_string(s.n) + "x" + std::to_string(s.n) +
                    " * " + std::to_string(x.rows()) + "x" +
                    std::to_string(x.cols()));
  Mat<Scalar> out = Mat<Scalar>::Zero(s.n, x.cols());
  for (int r = 0; r < s.n; ++r) {
    for (Index c = 0; c < x.cols(); ++c) {
      double acc = 0.0;
      for (int k = s.indptr[r]; k < s.indptr[r + 1]; ++k)
        acc += static_cast<double>(s.values[static_cast<std::size_t>(k)]) *
               static_cast<double>(x(s.indices[static_cast<std::size_t>(k)], c));
      out(r, c) = static_cast<Scalar>(acc);
    }
  }
  return out;
}

}  // namespace tgcm
