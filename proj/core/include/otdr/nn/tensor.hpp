#pragma once

#include <Eigen/Core>

namespace otdr::nn {

// Activations are channel-major: row c holds channel c of every example in
// the batch back to back, example b occupying columns [b*L, (b+1)*L).
template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

}  // namespace otdr::nn
