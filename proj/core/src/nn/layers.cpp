#include "otdr/nn/layers.hpp"

#include <algorithm>
#include <string>

#include "otdr/error.hpp"

namespace otdr::nn {

namespace {

void check_batch(std::ptrdiff_t cols, std::size_t length) {
  if (length == 0 || cols % static_cast<std::ptrdiff_t>(length) != 0) {
    throw ConfigError("activation width " + std::to_string(cols) + " is not a multiple of length " +
                      std::to_string(length));
  }
}

}  // namespace

template <typename T>
Conv1d<T>::Conv1d(std::size_t in, std::size_t out, std::size_t kernel)
    : in_channels(in), out_channels(out), kernel_size(kernel) {
  if (in == 0 || out == 0) throw ConfigError("convolution needs at least one channel");
  if (kernel == 0 || kernel % 2 == 0) throw ConfigError("kernel size must be odd");
  weight = Matrix<T>::Zero(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in * kernel));
  bias = Vector<T>::Zero(static_cast<Eigen::Index>(out));
}

template <typename T>
void Conv1d<T>::set_zero() {
  weight.setZero();
  bias.setZero();
}

namespace {

// Samples [first, first + count) of x unrolled into col (C*K x count*length).
template <typename T>
void im2col_range(const Matrix<T>& x, std::size_t length, std::size_t kernel, std::size_t first,
                  std::size_t count, Matrix<T>& col) {
  const auto channels = static_cast<std::size_t>(x.rows());
  const auto pad = static_cast<std::ptrdiff_t>(kernel / 2);
  const auto len = static_cast<std::ptrdiff_t>(length);
  col.resize(static_cast<Eigen::Index>(channels * kernel), static_cast<Eigen::Index>(count * length));
  for (std::size_t c = 0; c < channels; ++c) {
    const T* src_row = x.row(static_cast<Eigen::Index>(c)).data() + first * length;
    for (std::size_t k = 0; k < kernel; ++k) {
      T* dst_row = col.row(static_cast<Eigen::Index>(c * kernel + k)).data();
      const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(k) - pad;
      const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -shift);
      const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(len, len - shift);
      for (std::size_t b = 0; b < count; ++b) {
        const T* src = src_row + b * length;
        T* dst = dst_row + b * length;
        std::fill(dst, dst + lo, T(0));
        if (hi > lo) std::copy(src + lo + shift, src + hi + shift, dst + lo);
        std::fill(dst + std::max(hi, lo), dst + len, T(0));
      }
    }
  }
}

// Adds the folded col back into samples [first, first + count) of dx.
template <typename T>
void col2im_range(const Matrix<T>& col, std::size_t length, std::size_t kernel, std::size_t first,
                  Matrix<T>& dx) {
  const auto channels = static_cast<std::size_t>(col.rows()) / kernel;
  const auto count = static_cast<std::size_t>(col.cols()) / length;
  const auto pad = static_cast<std::ptrdiff_t>(kernel / 2);
  const auto len = static_cast<std::ptrdiff_t>(length);
  for (std::size_t c = 0; c < channels; ++c) {
    T* dst_row = dx.row(static_cast<Eigen::Index>(c)).data() + first * length;
    for (std::size_t k = 0; k < kernel; ++k) {
      const T* src_row = col.row(static_cast<Eigen::Index>(c * kernel + k)).data();
      const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(k) - pad;
      const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -shift);
      const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(len, len - shift);
      for (std::size_t b = 0; b < count; ++b) {
        const T* src = src_row + b * length;
        T* dst = dst_row + b * length;
        for (std::ptrdiff_t i = lo; i < hi; ++i) dst[i + shift] += src[i];
      }
    }
  }
}

// Samples per GEMM block, keeping the unrolled buffer cache-sized.
std::size_t block_samples(std::size_t length) {
  constexpr std::size_t kColumns = 4096;
  return std::max<std::size_t>(1, kColumns / length);
}

template <typename T>
Matrix<T>& scratch() {
  thread_local Matrix<T> buf;
  return buf;
}

template <typename T>
Matrix<T>& scratch2() {
  thread_local Matrix<T> buf;
  return buf;
}

}  // namespace

template <typename T>
void im2col(const Matrix<T>& x, std::size_t length, std::size_t kernel, Matrix<T>& col) {
  check_batch(x.cols(), length);
  im2col_range(x, length, kernel, 0, static_cast<std::size_t>(x.cols()) / length, col);
}

template <typename T>
void col2im(const Matrix<T>& col, std::size_t length, std::size_t kernel, Matrix<T>& dx) {
  check_batch(col.cols(), length);
  dx = Matrix<T>::Zero(static_cast<Eigen::Index>(static_cast<std::size_t>(col.rows()) / kernel), col.cols());
  col2im_range(col, length, kernel, 0, dx);
}

template <typename T>
Matrix<T> conv1d_forward(const Conv1d<T>& conv, const Matrix<T>& x, std::size_t length) {
  if (static_cast<std::size_t>(x.rows()) != conv.in_channels) {
    throw ConfigError("conv1d expects " + std::to_string(conv.in_channels) + " input channels, got " +
                      std::to_string(x.rows()));
  }
  check_batch(x.cols(), length);
  const std::size_t batch = static_cast<std::size_t>(x.cols()) / length;
  const std::size_t step = block_samples(length);
  Matrix<T> y(conv.weight.rows(), x.cols());
  Matrix<T>& col = scratch<T>();
  for (std::size_t b = 0; b < batch; b += step) {
    const std::size_t count = std::min(step, batch - b);
    im2col_range(x, length, conv.kernel_size, b, count, col);
    y.middleCols(static_cast<Eigen::Index>(b * length), col.cols()).noalias() = conv.weight * col;
  }
  y.colwise() += conv.bias;
  return y;
}

template <typename T>
Matrix<T> conv1d_backward(const Conv1d<T>& conv, const Matrix<T>& x, std::size_t length,
                          const Matrix<T>& dy, Conv1d<T>& grad) {
  if (dy.rows() != conv.weight.rows() || dy.cols() != x.cols()) {
    throw ConfigError("conv1d backward: upstream gradient shape mismatch");
  }
  check_batch(x.cols(), length);
  const std::size_t batch = static_cast<std::size_t>(x.cols()) / length;
  const std::size_t step = block_samples(length);
  Matrix<T> dx = Matrix<T>::Zero(x.rows(), x.cols());
  Matrix<T>& col = scratch<T>();
  Matrix<T>& dcol = scratch2<T>();
  for (std::size_t b = 0; b < batch; b += step) {
    const std::size_t count = std::min(step, batch - b);
    im2col_range(x, length, conv.kernel_size, b, count, col);
    const auto dyb = dy.middleCols(static_cast<Eigen::Index>(b * length), col.cols());
    grad.weight.noalias() += dyb * col.transpose();
    dcol.resize(col.rows(), col.cols());
    dcol.noalias() = conv.weight.transpose() * dyb;
    col2im_range(dcol, length, conv.kernel_size, b, dx);
  }
  grad.bias += dy.rowwise().sum();
  return dx;
}

template <typename T>
Matrix<T> relu_forward(const Matrix<T>& x) {
  return x.cwiseMax(T(0));
}

template <typename T>
Matrix<T> relu_backward(const Matrix<T>& y, const Matrix<T>& dy) {
  return (y.array() > T(0)).select(dy, T(0));
}

template <typename T>
BatchNorm<T>::BatchNorm(std::size_t channels) {
  const auto c = static_cast<Eigen::Index>(channels);
  scale = Vector<T>::Ones(c);
  shift = Vector<T>::Zero(c);
  running_mean = Vector<T>::Zero(c);
  running_var = Vector<T>::Ones(c);
}

template <typename T>
Matrix<T> batchnorm_forward(BatchNorm<T>& bn, const Matrix<T>& x, Mode mode, BatchNormCache<T>* cache) {
  if (static_cast<std::size_t>(x.rows()) != bn.channels()) throw ConfigError("batchnorm channel mismatch");
  const auto n = static_cast<T>(x.cols());
  Vector<T> mean, inv_std;
  if (mode == Mode::train) {
    mean = x.rowwise().mean();
    const Matrix<T> centered = x.colwise() - mean;
    const Vector<T> var = centered.array().square().rowwise().sum() / n;
    inv_std = (var.array() + bn.eps).rsqrt();
    const T unbias = x.cols() > 1 ? n / (n - T(1)) : T(1);
    bn.running_mean = (T(1) - bn.momentum) * bn.running_mean + bn.momentum * mean;
    bn.running_var = (T(1) - bn.momentum) * bn.running_var + bn.momentum * unbias * var;
  } else {
    mean = bn.running_mean;
    inv_std = (bn.running_var.array() + bn.eps).rsqrt();
  }
  Matrix<T> normalized = (x.colwise() - mean).array().colwise() * inv_std.array();
  Matrix<T> y = (normalized.array().colwise() * bn.scale.array()).colwise() + bn.shift.array();
  if (cache) {
    cache->normalized = std::move(normalized);
    cache->inv_std = std::move(inv_std);
    cache->mode = mode;
  }
  return y;
}

template <typename T>
Matrix<T> batchnorm_backward(const BatchNorm<T>& bn, const BatchNormCache<T>& cache, const Matrix<T>& dy,
                             BatchNorm<T>& grad) {
  const Matrix<T>& xhat = cache.normalized;
  if (xhat.rows() != dy.rows() || xhat.cols() != dy.cols()) throw UsageError("batchnorm backward without matching cache");
  const Vector<T> sum_dy = dy.rowwise().sum();
  const Vector<T> sum_dy_xhat = (dy.array() * xhat.array()).rowwise().sum();
  grad.scale += sum_dy_xhat;
  grad.shift += sum_dy;
  const Vector<T> g = bn.scale.cwiseProduct(cache.inv_std);
  if (cache.mode == Mode::eval) return dy.array().colwise() * g.array();
  const auto n = static_cast<T>(dy.cols());
  Matrix<T> dx = (dy * n).colwise() - sum_dy;
  dx -= (xhat.array().colwise() * sum_dy_xhat.array()).matrix();
  return dx.array().colwise() * (g.array() / n);
}

#define OTDR_INSTANTIATE_LAYERS(T)                                                                           \
  template struct Conv1d<T>;                                                                                  \
  template struct BatchNorm<T>;                                                                               \
  template void im2col<T>(const Matrix<T>&, std::size_t, std::size_t, Matrix<T>&);                            \
  template void col2im<T>(const Matrix<T>&, std::size_t, std::size_t, Matrix<T>&);                            \
  template Matrix<T> conv1d_forward<T>(const Conv1d<T>&, const Matrix<T>&, std::size_t);                      \
  template Matrix<T> conv1d_backward<T>(const Conv1d<T>&, const Matrix<T>&, std::size_t, const Matrix<T>&,    \
                                        Conv1d<T>&);                                                          \
  template Matrix<T> relu_forward<T>(const Matrix<T>&);                                                       \
  template Matrix<T> relu_backward<T>(const Matrix<T>&, const Matrix<T>&);                                    \
  template Matrix<T> batchnorm_forward<T>(BatchNorm<T>&, const Matrix<T>&, Mode, BatchNormCache<T>*);         \
  template Matrix<T> batchnorm_backward<T>(const BatchNorm<T>&, const BatchNormCache<T>&, const Matrix<T>&,   \
                                           BatchNorm<T>&);

OTDR_INSTANTIATE_LAYERS(float)
OTDR_INSTANTIATE_LAYERS(double)

}  // namespace otdr::nn
