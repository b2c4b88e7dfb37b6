#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace tgcm {

// All dense payloads are row-major so serialized bytes match the in-memory
// layout. Rows (1 x n) reuse the same type.
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Matf = Mat<float>;
using Matd = Mat<double>;

using Index = Eigen::Index;

}  // namespace tgcm
