#pragma once

#include <cstddef>

#include "otdr/nn/tensor.hpp"

namespace otdr::nn {

// 1D convolution with same-length zero padding of (K-1)/2 on both sides.
// weight is out x (in*K) with column c*K + k holding kernel[o][c][k]:
//   y[o][i] = bias[o] + sum_c sum_k kernel[o][c][k] * x[c][i + k - (K-1)/2]
template <typename T>
struct Conv1d {
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t kernel_size = 0;
  Matrix<T> weight;
  Vector<T> bias;

  Conv1d() = default;
  Conv1d(std::size_t in, std::size_t out, std::size_t kernel);

  void set_zero();
};

// x: in_channels x (B*length). Returns out_channels x (B*length).
template <typename T>
Matrix<T> conv1d_forward(const Conv1d<T>& conv, const Matrix<T>& x, std::size_t length);

// Accumulates dL/dweight and dL/dbias into grad and returns dL/dx.
template <typename T>
Matrix<T> conv1d_backward(const Conv1d<T>& conv, const Matrix<T>& x, std::size_t length,
                          const Matrix<T>& dy, Conv1d<T>& grad);

// Unfolds x into (C*K) x (B*length) so the convolution becomes one GEMM.
template <typename T>
void im2col(const Matrix<T>& x, std::size_t length, std::size_t kernel, Matrix<T>& col);
template <typename T>
void col2im(const Matrix<T>& col, std::size_t length, std::size_t kernel, Matrix<T>& dx);

template <typename T>
Matrix<T> relu_forward(const Matrix<T>& x);
// dy masked by (y > 0), where y is the ReLU output.
template <typename T>
Matrix<T> relu_backward(const Matrix<T>& y, const Matrix<T>& dy);

enum class Mode { train, eval };

// Per-channel batch normalization over (batch x length).
template <typename T>
struct BatchNorm {
  Vector<T> scale;
  Vector<T> shift;
  Vector<T> running_mean;
  Vector<T> running_var;
  T momentum = T(0.1);
  T eps = T(1e-5);

  BatchNorm() = default;
  explicit BatchNorm(std::size_t channels);
  std::size_t channels() const { return static_cast<std::size_t>(scale.size()); }
};

template <typename T>
struct BatchNormCache {
  Matrix<T> normalized;
  Vector<T> inv_std;
  Mode mode = Mode::train;
};

// Train mode normalizes with batch statistics and updates the running stats
// (unbiased variance); eval mode uses the running stats.
template <typename T>
Matrix<T> batchnorm_forward(BatchNorm<T>& bn, const Matrix<T>& x, Mode mode, BatchNormCache<T>* cache);

// Accumulates dL/dscale, dL/dshift into grad; returns dL/dx.
template <typename T>
Matrix<T> batchnorm_backward(const BatchNorm<T>& bn, const BatchNormCache<T>& cache, const Matrix<T>& dy,
                             BatchNorm<T>& grad);

}  // namespace otdr::nn
