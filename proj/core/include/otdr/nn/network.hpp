#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "otdr/nn/layers.hpp"
#include "otdr/nn/tensor.hpp"

namespace otdr::nn {

struct NetArchitecture {
  std::size_t n_resblocks = 11;
  std::size_t channels = 128;
  std::size_t kernel_size = 9;
  bool use_bn = false;

  void validate() const;
  // Head conv + two convs per ResBlock + tail conv, each widening by K - 1.
  std::size_t receptive_field() const { return (2 * n_resblocks + 2) * (kernel_size - 1) + 1; }

  friend bool operator==(const NetArchitecture&, const NetArchitecture&) = default;
};

// x + conv2(relu([bn](conv1(x)))); identity shortcut.
template <typename T>
struct ResBlock {
  Conv1d<T> conv1;
  std::optional<BatchNorm<T>> bn;
  Conv1d<T> conv2;
};

template <typename T>
struct Network {
  NetArchitecture arch;
  Conv1d<T> head;  // 1 -> channels
  std::vector<ResBlock<T>> blocks;
  Conv1d<T> tail;  // channels -> 1

  Network() = default;
  // All weights zero, BN at identity.
  explicit Network(const NetArchitecture& arch);

  std::size_t param_count() const;
};

// Normal kernels with std sqrt(gain / (in * K)): gain 2 for conv1 (it feeds a
// ReLU), gain 1 for head and tail. conv2 starts at zero so every ResBlock is
// the identity at step 0. All biases zero.
template <typename T>
Network<T> make_network(const NetArchitecture& arch, std::uint64_t seed);

// Same shapes, all parameters zero. Used for gradient and moment buffers.
template <typename T>
Network<T> zeros_like(const Network<T>& net);

template <typename To, typename From>
Network<To> network_cast(const Network<From>& net);

template <typename T>
struct TensorView {
  std::string name;
  std::vector<std::size_t> shape;
  std::span<T> values;
  bool trainable;
};

// Every tensor in declaration order: head, blocks (conv1, [bn scale, shift,
// running mean, running var], conv2), tail. Conv weights report shape
// [out, in, K].
template <typename T>
std::vector<TensorView<T>> tensor_views(Network<T>& net);
template <typename T>
std::vector<TensorView<T>> parameter_views(Network<T>& net);  // trainable only

template <typename T>
struct BlockCache {
  Matrix<T> pre;       // conv1 output
  BatchNormCache<T> bn;
  Matrix<T> act;       // relu output
  Matrix<T> out;       // block output
};

template <typename T>
struct ForwardCache {
  std::size_t length = 0;
  Mode mode = Mode::train;
  Matrix<T> input;
  Matrix<T> head_out;
  std::vector<BlockCache<T>> blocks;
  Matrix<T> output;

  bool empty() const { return length == 0; }
};

template <typename T>
Matrix<T> resblock_forward(ResBlock<T>& block, const Matrix<T>& x, std::size_t length, Mode mode,
                           BlockCache<T>* cache = nullptr);

// Given dL/d(block output), accumulates parameter gradients into grad and
// returns dL/dx. cache must come from resblock_forward on the same x.
template <typename T>
Matrix<T> resblock_backward(const ResBlock<T>& block, const Matrix<T>& x, std::size_t length,
                            const BlockCache<T>& cache, const Matrix<T>& dy, ResBlock<T>& grad);

// input: 1 x (B*length). Returns 1 x (B*length). Throws DomainError on
// non-finite input. BN running stats update in train mode.
template <typename T>
Matrix<T> forward(Network<T>& net, const Matrix<T>& input, std::size_t length, Mode mode,
                  ForwardCache<T>* cache = nullptr);

// Inference on one trace (eval mode). Does not modify the model, so one
// network can serve concurrent callers.
template <typename T>
std::vector<T> infer(const Network<T>& net, std::span<const T> trace);

template <typename T>
struct Gradients {
  Network<T> params;
  Matrix<T> input;
};

// Reverse pass through a cached forward. upstream is dL/doutput.
template <typename T>
Gradients<T> backward(const Network<T>& net, const ForwardCache<T>& cache, const Matrix<T>& upstream);

// Mean squared error over every element and its gradient 2 (y - label) / N.
template <typename T>
T mse_loss(const Matrix<T>& output, const Matrix<T>& label, Matrix<T>* grad = nullptr);

}  // namespace otdr::nn
