#include "otdr/nn/network.hpp"

#include <cmath>
#include <random>

#include "otdr/error.hpp"
#include "otdr/rng.hpp"

namespace otdr::nn {

void NetArchitecture::validate() const {
  if (n_resblocks < 1) throw ConfigError("need at least one ResBlock");
  if (channels < 1) throw ConfigError("need at least one channel");
  if (kernel_size < 1 || kernel_size % 2 == 0) throw ConfigError("kernel size must be odd and >= 1");
}

template <typename T>
Network<T>::Network(const NetArchitecture& a) : arch(a) {
  arch.validate();
  head = Conv1d<T>(1, arch.channels, arch.kernel_size);
  for (std::size_t b = 0; b < arch.n_resblocks; ++b) {
    ResBlock<T> block{Conv1d<T>(arch.channels, arch.channels, arch.kernel_size), std::nullopt,
                      Conv1d<T>(arch.channels, arch.channels, arch.kernel_size)};
    if (arch.use_bn) block.bn.emplace(arch.channels);
    blocks.push_back(std::move(block));
  }
  tail = Conv1d<T>(arch.channels, 1, arch.kernel_size);
}

template <typename T>
std::size_t Network<T>::param_count() const {
  auto conv = [](const Conv1d<T>& c) { return static_cast<std::size_t>(c.weight.size() + c.bias.size()); };
  std::size_t n = conv(head) + conv(tail);
  for (const auto& b : blocks) {
    n += conv(b.conv1) + conv(b.conv2);
    if (b.bn) n += 2 * b.bn->channels();
  }
  return n;
}

template <typename T>
Network<T> make_network(const NetArchitecture& arch, std::uint64_t seed) {
  Network<T> net(arch);
  Rng rng = make_rng(seed);
  auto init = [&rng](Conv1d<T>& c, double gain) {
    const double fan_in = static_cast<double>(c.in_channels * c.kernel_size);
    std::normal_distribution<double> dist(0.0, std::sqrt(gain / fan_in));
    for (Eigen::Index i = 0; i < c.weight.size(); ++i) c.weight.data()[i] = static_cast<T>(dist(rng));
    c.bias.setZero();
  };
  init(net.head, 1.0);
  for (auto& b : net.blocks) {
    init(b.conv1, 2.0);
    b.conv2.set_zero();
  }
  init(net.tail, 1.0);
  return net;
}

template <typename T>
Network<T> zeros_like(const Network<T>& net) {
  Network<T> z = net;
  for (auto& v : tensor_views(z)) std::fill(v.values.begin(), v.values.end(), T(0));
  return z;
}

template <typename To, typename From>
Network<To> network_cast(const Network<From>& net) {
  Network<To> out(net.arch);
  Network<From> src = net;
  auto dst_views = tensor_views(out);
  auto src_views = tensor_views(src);
  for (std::size_t i = 0; i < dst_views.size(); ++i) {
    std::copy(src_views[i].values.begin(), src_views[i].values.end(), dst_views[i].values.begin());
  }
  return out;
}

namespace {

template <typename T, typename M>
std::span<T> span_of(M& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

template <typename T>
void push_conv(std::vector<TensorView<T>>& out, const std::string& prefix, Conv1d<T>& c) {
  out.push_back({prefix + ".weight", {c.out_channels, c.in_channels, c.kernel_size}, span_of<T>(c.weight), true});
  out.push_back({prefix + ".bias", {c.out_channels}, span_of<T>(c.bias), true});
}

}  // namespace

template <typename T>
std::vector<TensorView<T>> tensor_views(Network<T>& net) {
  std::vector<TensorView<T>> out;
  push_conv(out, "head", net.head);
  for (std::size_t b = 0; b < net.blocks.size(); ++b) {
    auto& blk = net.blocks[b];
    const std::string p = "blocks." + std::to_string(b);
    push_conv(out, p + ".conv1", blk.conv1);
    if (blk.bn) {
      const std::vector<std::size_t> shape{blk.bn->channels()};
      out.push_back({p + ".bn.scale", shape, span_of<T>(blk.bn->scale), true});
      out.push_back({p + ".bn.shift", shape, span_of<T>(blk.bn->shift), true});
      out.push_back({p + ".bn.running_mean", shape, span_of<T>(blk.bn->running_mean), false});
      out.push_back({p + ".bn.running_var", shape, span_of<T>(blk.bn->running_var), false});
    }
    push_conv(out, p + ".conv2", blk.conv2);
  }
  push_conv(out, "tail", net.tail);
  return out;
}

template <typename T>
std::vector<TensorView<T>> parameter_views(Network<T>& net) {
  auto all = tensor_views(net);
  std::vector<TensorView<T>> out;
  for (auto& v : all) {
    if (v.trainable) out.push_back(std::move(v));
  }
  return out;
}

template <typename T>
Matrix<T> resblock_forward(ResBlock<T>& block, const Matrix<T>& x, std::size_t length, Mode mode,
                           BlockCache<T>* cache) {
  Matrix<T> pre = conv1d_forward(block.conv1, x, length);
  BatchNormCache<T> bn_cache;
  Matrix<T> act = block.bn ? relu_forward<T>(batchnorm_forward(*block.bn, pre, mode, cache ? &bn_cache : nullptr))
                           : relu_forward<T>(pre);
  Matrix<T> out = x + conv1d_forward(block.conv2, act, length);
  if (cache) {
    cache->pre = std::move(pre);
    cache->bn = std::move(bn_cache);
    cache->act = std::move(act);
    cache->out = out;
  }
  return out;
}

template <typename T>
Matrix<T> resblock_backward(const ResBlock<T>& block, const Matrix<T>& x, std::size_t length,
                            const BlockCache<T>& cache, const Matrix<T>& dy, ResBlock<T>& grad) {
  Matrix<T> d_act = conv1d_backward(block.conv2, cache.act, length, dy, grad.conv2);
  Matrix<T> d_pre = relu_backward<T>(cache.act, d_act);
  if (block.bn) d_pre = batchnorm_backward(*block.bn, cache.bn, d_pre, *grad.bn);
  return dy + conv1d_backward(block.conv1, x, length, d_pre, grad.conv1);
}

template <typename T>
Matrix<T> forward(Network<T>& net, const Matrix<T>& input, std::size_t length, Mode mode, ForwardCache<T>* cache) {
  if (input.rows() != 1) throw ConfigError("network input must have a single channel");
  if (!input.allFinite()) throw DomainError("network input contains non-finite samples");
  Matrix<T> h = conv1d_forward(net.head, input, length);
  if (cache) {
    cache->length = length;
    cache->mode = mode;
    cache->input = input;
    cache->head_out = h;
    cache->blocks.assign(net.blocks.size(), {});
  }
  for (std::size_t b = 0; b < net.blocks.size(); ++b) {
    h = resblock_forward(net.blocks[b], h, length, mode, cache ? &cache->blocks[b] : nullptr);
  }
  Matrix<T> y = conv1d_forward(net.tail, h, length);
  if (cache) cache->output = y;
  return y;
}

template <typename T>
std::vector<T> infer(const Network<T>& net, std::span<const T> trace) {
  if (trace.empty()) throw DomainError("cannot run inference on an empty trace");
  Matrix<T> x(1, static_cast<Eigen::Index>(trace.size()));
  std::copy(trace.begin(), trace.end(), x.data());
  // eval mode only reads the running statistics
  const Matrix<T> y = forward(const_cast<Network<T>&>(net), x, trace.size(), Mode::eval);
  return std::vector<T>(y.data(), y.data() + y.size());
}

template <typename T>
Gradients<T> backward(const Network<T>& net, const ForwardCache<T>& cache, const Matrix<T>& upstream) {
  if (cache.empty() || cache.blocks.size() != net.blocks.size()) {
    throw UsageError("backward requires the cache of a forward pass through this network");
  }
  if (upstream.rows() != cache.output.rows() || upstream.cols() != cache.output.cols()) {
    throw ConfigError("upstream gradient shape does not match the network output");
  }
  const std::size_t len = cache.length;
  Gradients<T> g{zeros_like(net), {}};
  const Matrix<T>& last = net.blocks.empty() ? cache.head_out : cache.blocks.back().out;
  Matrix<T> dh = conv1d_backward(net.tail, last, len, upstream, g.params.tail);
  for (std::size_t bi = net.blocks.size(); bi-- > 0;) {
    const Matrix<T>& in = bi == 0 ? cache.head_out : cache.blocks[bi - 1].out;
    dh = resblock_backward(net.blocks[bi], in, len, cache.blocks[bi], dh, g.params.blocks[bi]);
  }
  g.input = conv1d_backward(net.head, cache.input, len, dh, g.params.head);
  return g;
}

template <typename T>
T mse_loss(const Matrix<T>& output, const Matrix<T>& label, Matrix<T>* grad) {
  if (output.rows() != label.rows() || output.cols() != label.cols()) throw ConfigError("loss shape mismatch");
  const Matrix<T> diff = output - label;
  const auto n = static_cast<T>(diff.size());
  if (grad) *grad = diff * (T(2) / n);
  return diff.squaredNorm() / n;
}

#define OTDR_INSTANTIATE_NETWORK(T)                                                                       \
  template struct Network<T>;                                                                              \
  template Network<T> make_network<T>(const NetArchitecture&, std::uint64_t);                              \
  template Network<T> zeros_like<T>(const Network<T>&);                                                    \
  template std::vector<TensorView<T>> tensor_views<T>(Network<T>&);                                        \
  template std::vector<TensorView<T>> parameter_views<T>(Network<T>&);                                     \
  template Matrix<T> resblock_forward<T>(ResBlock<T>&, const Matrix<T>&, std::size_t, Mode, BlockCache<T>*); \
  template Matrix<T> resblock_backward<T>(const ResBlock<T>&, const Matrix<T>&, std::size_t,                \
                                          const BlockCache<T>&, const Matrix<T>&, ResBlock<T>&);          \
  template Matrix<T> forward<T>(Network<T>&, const Matrix<T>&, std::size_t, Mode, ForwardCache<T>*);       \
  template std::vector<T> infer<T>(const Network<T>&, std::span<const T>);                                       \
  template Gradients<T> backward<T>(const Network<T>&, const ForwardCache<T>&, const Matrix<T>&);          \
  template T mse_loss<T>(const Matrix<T>&, const Matrix<T>&, Matrix<T>*);

OTDR_INSTANTIATE_NETWORK(float)
OTDR_INSTANTIATE_NETWORK(double)

template Network<float> network_cast<float, double>(const Network<double>&);
template Network<double> network_cast<double, float>(const Network<float>&);
template Network<float> network_cast<float, float>(const Network<float>&);
template Network<double> network_cast<double, double>(const Network<double>&);

}  // namespace otdr::nn
