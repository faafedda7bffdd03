//
// Copyright 2026 The zsl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Hand-differentiated text CNN:
//
//   tokens (t x d) -> per filter size h: valid 1-D convolution, ReLU,
//   max-over-time -> concat -> dense ReLU layers -> sigmoid | softmax head
//
// plus cross-entropy losses, Adam, a training loop with early stopping and
// a finite-difference gradient checker. Scalar type is a template parameter
// so the checker can run in double while training uses float.

#ifndef ZSL_NEURAL_HPP_
#define ZSL_NEURAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zsl/common.hpp"

namespace zsl::neural {

enum class Head { kSigmoid, kSoftmax };

inline std::string to_string(Head head) {
  return head == Head::kSigmoid ? "sigmoid" : "softmax";
}

inline Head parse_head(const std::string& name) {
  if (name == "sigmoid") return Head::kSigmoid;
  if (name == "softmax") return Head::kSoftmax;
  throw Error("unknown head '" + name + "'");
}

struct TextCnnConfig {
  std::size_t input_dim = 200;
  std::vector<std::size_t> filter_sizes = {3, 4, 5};
  std::size_t filters_per_size = 400;
  std::vector<std::size_t> dense_units = {300};
  Head head = Head::kSigmoid;
  std::size_t output_classes = 1;
  // Inverted dropout on pooled features and hidden activations; training only.
  double dropout = 0.0;

  void validate() const {
    if (input_dim == 0) throw Error("TextCnnConfig: input_dim must be >= 1");
    if (filter_sizes.empty()) {
      throw Error("TextCnnConfig: at least one filter size required");
    }
    for (std::size_t h : filter_sizes) {
      if (h == 0) throw Error("TextCnnConfig: filter sizes must be >= 1");
    }
    if (filters_per_size == 0) {
      throw Error("TextCnnConfig: filters_per_size must be >= 1");
    }
    for (std::size_t units : dense_units) {
      if (units == 0) throw Error("TextCnnConfig: dense layers need units");
    }
    if (head == Head::kSigmoid && output_classes != 1) {
      throw Error("TextCnnConfig: sigmoid head requires output_classes = 1");
    }
    if (head == Head::kSoftmax && output_classes < 2) {
      throw Error("TextCnnConfig: softmax head requires >= 2 classes");
    }
    if (!(dropout >= 0.0 && dropout < 1.0)) {
      throw Error("TextCnnConfig: dropout must lie in [0, 1)");
    }
  }

  std::size_t max_filter_size() const {
    return *std::max_element(filter_sizes.begin(), filter_sizes.end());
  }
  std::size_t feature_size() const {
    return filter_sizes.size() * filters_per_size;
  }

  bool operator==(const TextCnnConfig&) const = default;
};

inline void to_json(nlohmann::json& j, const TextCnnConfig& c) {
  j = {{"input_dim", c.input_dim},
       {"filter_sizes", c.filter_sizes},
       {"filters_per_size", c.filters_per_size},
       {"dense_units", c.dense_units},
       {"head", to_string(c.head)},
       {"output_classes", c.output_classes},
       {"dropout", c.dropout}};
}

inline void from_json(const nlohmann::json& j, TextCnnConfig& c) {
  c.input_dim = j.at("input_dim").get<std::size_t>();
  c.filter_sizes = j.at("filter_sizes").get<std::vector<std::size_t>>();
  c.filters_per_size = j.at("filters_per_size").get<std::size_t>();
  c.dense_units = j.at("dense_units").get<std::vector<std::size_t>>();
  c.head = parse_head(j.at("head").get<std::string>());
  c.output_classes = j.at("output_classes").get<std::size_t>();
  c.dropout = j.value("dropout", 0.0);
}

template <typename T>
struct Tensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<T> data;

  std::size_t size() const { return data.size(); }
  bool operator==(const Tensor&) const = default;
};

// Row-major dense matrix.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  void assign(std::size_t rows, std::size_t cols) {
    rows_ = rows;
    cols_ = cols;
    data_.assign(rows * cols, T(0));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  T operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

namespace detail {

// Eight independent accumulators let the compiler vectorize the reduction
// without reassociating floating-point sums.
template <typename T>
inline T dot(const T* a, const T* b, std::size_t n) {
  T acc[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (std::size_t k = 0; k < 8; ++k) acc[k] += a[i + k] * b[i + k];
  }
  T sum = ((acc[0] + acc[1]) + (acc[2] + acc[3])) +
          ((acc[4] + acc[5]) + (acc[6] + acc[7]));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

template <typename T>
inline void axpy(T alpha, const T* x, T* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace detail

// Activations recorded by forward() and consumed by backward().
template <typename T>
struct ForwardCache {
  Matrix<T> input;  // zero-padded to at least the largest filter size
  std::vector<std::vector<std::size_t>> argmax;  // [branch][filter]
  std::vector<T> pooled;        // ReLU(max over time), before dropout
  std::vector<T> features;      // pooled after dropout
  std::vector<T> feature_mask;  // empty when dropout is off
  std::vector<std::vector<T>> hidden_relu;  // per dense layer, before dropout
  std::vector<std::vector<T>> hidden;       // after dropout
  std::vector<std::vector<T>> hidden_mask;
  std::vector<T> logits;
  std::vector<T> output;
  bool valid = false;
};

template <typename T>
class TextCnn {
 public:
  TextCnn() = default;

  TextCnn(TextCnnConfig config, std::uint64_t seed)
      : config_(std::move(config)), seed_(seed) {
    config_.validate();
    const std::size_t d = config_.input_dim;
    const std::size_t f = config_.filters_per_size;
    for (std::size_t h : config_.filter_sizes) {
      add_tensor("conv" + std::to_string(h) + ".weight", {f, h * d});
      add_tensor("conv" + std::to_string(h) + ".bias", {f});
    }
    std::size_t in = config_.feature_size();
    for (std::size_t l = 0; l < config_.dense_units.size(); ++l) {
      add_tensor("dense" + std::to_string(l) + ".weight",
                 {config_.dense_units[l], in});
      add_tensor("dense" + std::to_string(l) + ".bias", {config_.dense_units[l]});
      in = config_.dense_units[l];
    }
    add_tensor("output.weight", {config_.output_classes, in});
    add_tensor("output.bias", {config_.output_classes});

    // He-uniform for ReLU layers, LeCun-uniform for the head; zero biases.
    Rng rng(seed);
    for (std::size_t p = 0; p < params_.size(); p += 2) {
      Tensor<T>& weight = params_[p];
      const double fan_in = static_cast<double>(weight.shape[1]);
      const bool head = p + 2 == params_.size();
      const double limit = std::sqrt((head ? 3.0 : 6.0) / fan_in);
      for (T& w : weight.data) {
        w = static_cast<T>((2.0 * uniform_unit(rng) - 1.0) * limit);
      }
    }
  }

  const TextCnnConfig& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  std::vector<Tensor<T>>& parameters() { return params_; }
  const std::vector<Tensor<T>>& parameters() const { return params_; }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& t : params_) n += t.size();
    return n;
  }

  std::vector<Tensor<T>> zero_gradients() const {
    std::vector<Tensor<T>> grads = params_;
    for (auto& g : grads) std::fill(g.data.begin(), g.data.end(), T(0));
    return grads;
  }

  // `dropout_rng` enables dropout (training mode) when non-null.
  std::vector<T> forward(const Matrix<T>& tokens, ForwardCache<T>* cache,
                         Rng* dropout_rng = nullptr) const {
    if (tokens.cols() != config_.input_dim) {
      throw Error("TextCnn::forward: input has " +
                  std::to_string(tokens.cols()) + " columns, expected " +
                  std::to_string(config_.input_dim));
    }
    ForwardCache<T> local;
    ForwardCache<T>& c = cache ? *cache : local;
    const std::size_t d = config_.input_dim;
    const std::size_t rows = std::max(tokens.rows(), config_.max_filter_size());
    c.input.assign(rows, d);
    if (tokens.rows()) {
      std::memcpy(c.input.data(), tokens.data(),
                  tokens.rows() * d * sizeof(T));
    }
    const bool dropout = dropout_rng && config_.dropout > 0.0;
    const T keep_scale = static_cast<T>(1.0 / (1.0 - config_.dropout));

    const std::size_t f = config_.filters_per_size;
    c.argmax.assign(config_.filter_sizes.size(), std::vector<std::size_t>(f, 0));
    c.pooled.assign(config_.feature_size(), T(0));
    std::vector<T> best(f);
    for (std::size_t b = 0; b < config_.filter_sizes.size(); ++b) {
      const std::size_t h = config_.filter_sizes[b];
      const Tensor<T>& weight = params_[2 * b];
      const Tensor<T>& bias = params_[2 * b + 1];
      const std::size_t positions = rows - h + 1;
      std::fill(best.begin(), best.end(), -std::numeric_limits<T>::infinity());
      auto& arg = c.argmax[b];
      for (std::size_t p = 0; p < positions; ++p) {
        const T* window = c.input.data() + p * d;
        for (std::size_t k = 0; k < f; ++k) {
          const T v = bias.data[k] +
                      detail::dot(weight.data.data() + k * h * d, window, h * d);
          // NaN is sticky.
          if (v > best[k] || std::isnan(v)) {
            best[k] = v;
            arg[k] = p;
          }
        }
      }
      for (std::size_t k = 0; k < f; ++k) {
        c.pooled[b * f + k] = std::max(best[k], T(0));
      }
    }
    c.features = c.pooled;
    c.feature_mask.clear();
    if (dropout) apply_dropout(c.features, c.feature_mask, *dropout_rng, keep_scale);

    const std::size_t layers = config_.dense_units.size();
    c.hidden_relu.assign(layers, {});
    c.hidden.assign(layers, {});
    c.hidden_mask.assign(layers, {});
    const std::vector<T>* in = &c.features;
    const std::size_t dense_base = 2 * config_.filter_sizes.size();
    for (std::size_t l = 0; l < layers; ++l) {
      affine(params_[dense_base + 2 * l], params_[dense_base + 2 * l + 1], *in,
             c.hidden_relu[l]);
      for (T& v : c.hidden_relu[l]) v = std::max(v, T(0));
      c.hidden[l] = c.hidden_relu[l];
      if (dropout) {
        apply_dropout(c.hidden[l], c.hidden_mask[l], *dropout_rng, keep_scale);
      }
      in = &c.hidden[l];
    }
    affine(params_[params_.size() - 2], params_.back(), *in, c.logits);

    c.output = c.logits;
    if (config_.head == Head::kSigmoid) {
      c.output[0] = sigmoid(c.logits[0]);
    } else {
      const T top = *std::max_element(c.logits.begin(), c.logits.end());
      T total = 0;
      for (T& v : c.output) {
        v = std::exp(v - top);
        total += v;
      }
      for (T& v : c.output) v /= total;
    }
    c.valid = true;
    return c.output;
  }

  std::vector<T> predict(const Matrix<T>& tokens) const {
    return forward(tokens, nullptr);
  }

  // Accumulates d(loss)/d(parameters) into `grads` given d(loss)/d(logits).
  void backward(const ForwardCache<T>& c, std::span<const T> logit_grad,
                std::vector<Tensor<T>>& grads) const {
    if (!c.valid) throw Error("TextCnn::backward: forward cache missing");
    if (logit_grad.size() != config_.output_classes) {
      throw Error("TextCnn::backward: gradient size mismatch");
    }
    if (grads.size() != params_.size()) {
      throw Error("TextCnn::backward: gradient set does not match model");
    }
    const std::size_t layers = config_.dense_units.size();
    const std::size_t dense_base = 2 * config_.filter_sizes.size();

    std::vector<T> upstream(logit_grad.begin(), logit_grad.end());
    const std::vector<T>* below =
        layers ? &c.hidden[layers - 1] : &c.features;
    std::vector<T> down =
        affine_backward(params_[params_.size() - 2], *below, upstream,
                        grads[params_.size() - 2], grads.back());
    for (std::size_t l = layers; l-- > 0;) {
      if (!c.hidden_mask[l].empty()) {
        for (std::size_t i = 0; i < down.size(); ++i) down[i] *= c.hidden_mask[l][i];
      }
      for (std::size_t i = 0; i < down.size(); ++i) {
        if (!(c.hidden_relu[l][i] > T(0))) down[i] = T(0);
      }
      below = l ? &c.hidden[l - 1] : &c.features;
      down = affine_backward(params_[dense_base + 2 * l], *below, down,
                             grads[dense_base + 2 * l],
                             grads[dense_base + 2 * l + 1]);
    }
    if (!c.feature_mask.empty()) {
      for (std::size_t i = 0; i < down.size(); ++i) down[i] *= c.feature_mask[i];
    }

    // Max-over-time routes each filter's gradient to its argmax window only.
    const std::size_t d = config_.input_dim;
    const std::size_t f = config_.filters_per_size;
    for (std::size_t b = 0; b < config_.filter_sizes.size(); ++b) {
      const std::size_t h = config_.filter_sizes[b];
      Tensor<T>& gw = grads[2 * b];
      Tensor<T>& gb = grads[2 * b + 1];
      for (std::size_t k = 0; k < f; ++k) {
        const T g = down[b * f + k];
        if (g == T(0) || !(c.pooled[b * f + k] > T(0))) continue;
        const T* window = c.input.data() + c.argmax[b][k] * d;
        detail::axpy(g, window, gw.data.data() + k * h * d, h * d);
        gb.data[k] += g;
      }
    }
  }

  // Binary checkpoint: magic, JSON header (config, seed, float width, tensor
  // shapes), then raw tensors in declaration order.
  void save(const std::filesystem::path& path) const {
    nlohmann::json header;
    header["config"] = config_;
    header["seed"] = seed_;
    header["float_bits"] = sizeof(T) * 8;
    for (const auto& t : params_) {
      header["tensors"].push_back({{"name", t.name}, {"shape", t.shape}});
    }
    const std::string text = header.dump();
    const std::uint64_t length = text.size();
    std::string out(kMagic, sizeof(kMagic));
    out.append(reinterpret_cast<const char*>(&length), sizeof(length));
    out += text;
    for (const auto& t : params_) {
      out.append(reinterpret_cast<const char*>(t.data.data()),
                 t.data.size() * sizeof(T));
    }
    write_file(path, out);
  }

  static TextCnn load(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    std::uint64_t length = 0;
    if (data.size() < sizeof(kMagic) + sizeof(length) ||
        std::memcmp(data.data(), kMagic, sizeof(kMagic)) != 0) {
      throw Error(path.string() + ": not a model checkpoint");
    }
    std::memcpy(&length, data.data() + sizeof(kMagic), sizeof(length));
    std::size_t offset = sizeof(kMagic) + sizeof(length);
    if (data.size() < offset + length) throw Error(path.string() + ": truncated");
    const auto header = nlohmann::json::parse(data.substr(offset, length));
    offset += length;
    if (header.at("float_bits").get<std::size_t>() != sizeof(T) * 8) {
      throw Error(path.string() + ": checkpoint stores " +
                  std::to_string(header.at("float_bits").get<std::size_t>()) +
                  "-bit floats");
    }
    TextCnn model(header.at("config").get<TextCnnConfig>(),
                  header.at("seed").get<std::uint64_t>());
    const auto& shapes = header.at("tensors");
    if (shapes.size() != model.params_.size()) {
      throw Error(path.string() + ": tensor count mismatch");
    }
    for (std::size_t i = 0; i < model.params_.size(); ++i) {
      Tensor<T>& t = model.params_[i];
      if (shapes[i].at("shape").get<std::vector<std::size_t>>() != t.shape) {
        throw Error(path.string() + ": shape mismatch for " + t.name);
      }
      const std::size_t bytes = t.data.size() * sizeof(T);
      if (data.size() < offset + bytes) throw Error(path.string() + ": truncated");
      std::memcpy(t.data.data(), data.data() + offset, bytes);
      offset += bytes;
    }
    if (offset != data.size()) throw Error(path.string() + ": trailing bytes");
    return model;
  }

 private:
  static constexpr char kMagic[8] = {'Z', 'S', 'L', 'C', 'N', 'N', '0', '1'};

  static T sigmoid(T x) {
    if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
    const T e = std::exp(x);
    return e / (T(1) + e);
  }

  void add_tensor(std::string name, std::vector<std::size_t> shape) {
    Tensor<T> t;
    t.name = std::move(name);
    t.shape = std::move(shape);
    t.data.assign(std::accumulate(t.shape.begin(), t.shape.end(),
                                  std::size_t{1}, std::multiplies<>()),
                  T(0));
    params_.push_back(std::move(t));
  }

  static void apply_dropout(std::vector<T>& values, std::vector<T>& mask,
                            Rng& rng, T keep_scale) {
    const double keep = 1.0 / static_cast<double>(keep_scale);
    mask.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      mask[i] = uniform_unit(rng) < keep ? keep_scale : T(0);
      values[i] *= mask[i];
    }
  }

  static void affine(const Tensor<T>& weight, const Tensor<T>& bias,
                     const std::vector<T>& in, std::vector<T>& out) {
    const std::size_t rows = weight.shape[0];
    const std::size_t cols = weight.shape[1];
    out.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      out[r] = bias.data[r] + detail::dot(weight.data.data() + r * cols,
                                          in.data(), cols);
    }
  }

  // Returns d(loss)/d(in).
  static std::vector<T> affine_backward(const Tensor<T>& weight,
                                        const std::vector<T>& in,
                                        const std::vector<T>& upstream,
                                        Tensor<T>& grad_weight,
                                        Tensor<T>& grad_bias) {
    const std::size_t rows = weight.shape[0];
    const std::size_t cols = weight.shape[1];
    std::vector<T> down(cols, T(0));
    for (std::size_t r = 0; r < rows; ++r) {
      const T g = upstream[r];
      if (g == T(0)) continue;
      grad_bias.data[r] += g;
      detail::axpy(g, in.data(), grad_weight.data.data() + r * cols, cols);
      detail::axpy(g, weight.data.data() + r * cols, down.data(), cols);
    }
    return down;
  }

  TextCnnConfig config_;
  std::uint64_t seed_ = 0;
  std::vector<Tensor<T>> params_;
};

// --- Losses ---------------------------------------------------------------------

inline constexpr double kProbabilityClip = 1e-7;

template <typename T>
T loss(std::span<const T> output, std::size_t target, Head head) {
  const auto clip = [](T p) {
    return std::clamp(p, static_cast<T>(kProbabilityClip),
                      static_cast<T>(1.0 - kProbabilityClip));
  };
  if (head == Head::kSigmoid) {
    if (output.size() != 1 || target > 1) {
      throw Error("binary cross-entropy: target must be 0 or 1");
    }
    const T p = clip(output[0]);
    return target ? -std::log(p) : -std::log(T(1) - p);
  }
  if (target >= output.size()) {
    throw Error("categorical cross-entropy: target " + std::to_string(target) +
                " out of range");
  }
  return -std::log(clip(output[target]));
}

// d(loss)/d(logits) for the matching head: output - onehot(target).
template <typename T>
std::vector<T> loss_gradient(std::span<const T> output, std::size_t target,
                             Head head) {
  std::vector<T> grad(output.begin(), output.end());
  if (head == Head::kSigmoid) {
    if (target > 1) throw Error("binary cross-entropy: target must be 0 or 1");
    grad[0] -= static_cast<T>(target);
  } else {
    if (target >= grad.size()) {
      throw Error("categorical cross-entropy: target out of range");
    }
    grad[target] -= T(1);
  }
  return grad;
}

// --- Optimizer --------------------------------------------------------------------

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

template <typename T>
class Adam {
 public:
  Adam(const std::vector<Tensor<T>>& params, AdamConfig config)
      : config_(config) {
    for (const auto& p : params) {
      m_.emplace_back(p.size(), 0.0);
      v_.emplace_back(p.size(), 0.0);
    }
  }

  // Applies one update using grads * scale (scale = 1 / batch size).
  void step(std::vector<Tensor<T>>& params, const std::vector<Tensor<T>>& grads,
            double scale) {
    ++t_;
    const double b1 = config_.beta1;
    const double b2 = config_.beta2;
    const double correction1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double correction2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    const double lr = config_.learning_rate;
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto& p = params[i].data;
      const auto& g = grads[i].data;
      auto& m = m_[i];
      auto& v = v_[i];
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double gk = static_cast<double>(g[k]) * scale;
        m[k] = b1 * m[k] + (1.0 - b1) * gk;
        v[k] = b2 * v[k] + (1.0 - b2) * gk * gk;
        const double update = lr * (m[k] / correction1) /
                               (std::sqrt(v[k] / correction2) + config_.epsilon);
        p[k] = static_cast<T>(static_cast<double>(p[k]) - update);
      }
    }
  }

  std::size_t steps() const { return t_; }

 private:
  AdamConfig config_;
  std::size_t t_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

// --- Training ----------------------------------------------------------------------

// Random-access training examples.
template <typename T>
class SampleSource {
 public:
  virtual ~SampleSource() = default;
  virtual std::size_t size() const = 0;
  // Fills `out` with the token matrix of example i.
  virtual void input(std::size_t i, Matrix<T>& out) const = 0;
  virtual std::size_t target(std::size_t i) const = 0;
};

struct TrainConfig {
  std::size_t epochs = 10;
  std::size_t batch_size = 64;
  AdamConfig adam;
  // Held-out share for early stopping; 0 disables it.
  double validation_fraction = 0.1;
  std::size_t patience = 2;
  std::uint64_t seed = 1;
};

struct TrainResult {
  std::vector<double> train_loss;       // per epoch
  std::vector<double> validation_loss;  // per epoch, empty without hold-out
  std::size_t best_epoch = 0;           // 1-based
};

template <typename T>
TrainResult train(TextCnn<T>& model, const SampleSource<T>& data,
                  const TrainConfig& config) {
  const std::size_t n = data.size();
  if (n == 0) throw Error("train: empty dataset");
  if (config.batch_size == 0) throw Error("train: batch_size must be >= 1");
  const Head head = model.config().head;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng split_rng(derive_seed(config.seed, {1}));
  shuffle(order, split_rng);
  std::size_t held_out = static_cast<std::size_t>(
      std::floor(config.validation_fraction * static_cast<double>(n)));
  if (held_out >= n) held_out = n - 1;
  const std::vector<std::size_t> validation(order.begin(),
                                            order.begin() + held_out);
  std::vector<std::size_t> training(order.begin() + held_out, order.end());

  Rng epoch_rng(derive_seed(config.seed, {2}));
  Rng dropout_rng(derive_seed(config.seed, {3}));
  Adam<T> adam(model.parameters(), config.adam);
  auto grads = model.zero_gradients();
  ForwardCache<T> cache;
  Matrix<T> input;

  TrainResult result;
  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<Tensor<T>> best_params;
  std::size_t stale = 0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle(training, epoch_rng);
    double total = 0.0;
    for (std::size_t start = 0; start < training.size();
         start += config.batch_size) {
      const std::size_t end =
          std::min(training.size(), start + config.batch_size);
      for (auto& g : grads) std::fill(g.data.begin(), g.data.end(), T(0));
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t i = training[b];
        data.input(i, input);
        const auto output = model.forward(input, &cache, &dropout_rng);
        const std::size_t target = data.target(i);
        total += static_cast<double>(loss<T>(output, target, head));
        const auto grad = loss_gradient<T>(output, target, head);
        model.backward(cache, grad, grads);
      }
      adam.step(model.parameters(), grads,
                1.0 / static_cast<double>(end - start));
    }
    const double train_loss = total / static_cast<double>(training.size());
    if (!std::isfinite(train_loss)) {
      throw DivergenceError(epoch, "training loss is not finite");
    }
    result.train_loss.push_back(train_loss);
    if (validation.empty()) {
      result.best_epoch = epoch;
      continue;
    }
    double held = 0.0;
    for (std::size_t i : validation) {
      data.input(i, input);
      const auto output = model.forward(input, nullptr);
      held += static_cast<double>(loss<T>(output, data.target(i), head));
    }
    held /= static_cast<double>(validation.size());
    if (!std::isfinite(held)) {
      throw DivergenceError(epoch, "validation loss is not finite");
    }
    result.validation_loss.push_back(held);
    if (held < best_loss) {
      best_loss = held;
      best_params = model.parameters();
      result.best_epoch = epoch;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  if (!best_params.empty()) model.parameters() = std::move(best_params);
  return result;
}

// --- Gradient verification ------------------------------------------------------------

struct GradientCheckReport {
  double max_relative_error = 0.0;
  std::string worst_tensor;
  std::size_t worst_index = 0;
  std::size_t checked = 0;
  // Entries whose perturbation crossed a ReLU or max-pool switch point.
  std::size_t skipped_kinks = 0;
  double tolerance = 0.0;
  bool passed = true;
};

// |a - n| / max(|a|, |n|, floor); the floor keeps round-off on near-zero
// gradients from dominating.
inline constexpr double kRelativeErrorFloor = 1e-6;

// Generic checker over an explicit parameter set.
//   loss_at():       loss at the current parameter values
//   signature():     identifies the active piecewise-linear region
//   analytic:        gradients to verify, same layout as `params`
// Uses the fourth-order central stencil
//   (-L(+2h) + 8 L(+h) - 8 L(-h) + L(-2h)) / 12h.
template <typename T>
GradientCheckReport check_gradients(
    std::vector<Tensor<T>>& params, const std::vector<Tensor<T>>& analytic,
    const std::function<double()>& loss_at,
    const std::function<std::vector<std::size_t>()>& signature,
    double tolerance, double step) {
  GradientCheckReport report;
  report.tolerance = tolerance;
  const auto base_signature = signature ? signature() : std::vector<std::size_t>{};
  for (std::size_t t = 0; t < params.size(); ++t) {
    auto& values = params[t].data;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const T original = values[i];
      double losses[4];
      const double offsets[4] = {2.0, 1.0, -1.0, -2.0};
      bool kink = false;
      for (int k = 0; k < 4; ++k) {
        values[i] = static_cast<T>(static_cast<double>(original) +
                                   offsets[k] * step);
        losses[k] = loss_at();
        if (signature && signature() != base_signature) kink = true;
      }
      values[i] = original;
      if (kink) {
        ++report.skipped_kinks;
        continue;
      }
      const double numeric =
          (-losses[0] + 8.0 * losses[1] - 8.0 * losses[2] + losses[3]) /
          (12.0 * step);
      const double exact = static_cast<double>(analytic[t].data[i]);
      const double denom = std::max(
          {std::abs(exact), std::abs(numeric), kRelativeErrorFloor});
      const double error = std::abs(exact - numeric) / denom;
      ++report.checked;
      if (error > report.max_relative_error || report.worst_tensor.empty()) {
        if (error >= report.max_relative_error) {
          report.max_relative_error = error;
          report.worst_tensor = params[t].name;
          report.worst_index = i;
        }
      }
    }
  }
  report.passed = report.max_relative_error < tolerance;
  return report;
}

// Checks backward() against finite differences of loss(forward()) on one
// example. `tamper` may modify the analytic gradients before comparison.
template <typename T>
GradientCheckReport gradient_check(
    const TextCnn<T>& model, const Matrix<T>& input, std::size_t target,
    double tolerance = 1e-5, double step = 1e-4,
    const std::function<void(std::vector<Tensor<T>>&)>& tamper = {}) {
  TextCnn<T> probe = model;
  ForwardCache<T> cache;
  const auto output = probe.forward(input, &cache);
  auto analytic = probe.zero_gradients();
  const Head head = probe.config().head;
  probe.backward(cache, loss_gradient<T>(output, target, head), analytic);
  if (tamper) tamper(analytic);

  ForwardCache<T> scratch;
  auto loss_at = [&] {
    const auto out = probe.forward(input, &scratch);
    return static_cast<double>(loss<T>(out, target, head));
  };
  auto signature = [&] {
    std::vector<std::size_t> sig;
    for (const auto& branch : scratch.argmax) {
      sig.insert(sig.end(), branch.begin(), branch.end());
    }
    for (T v : scratch.pooled) sig.push_back(v > T(0));
    for (const auto& layer : scratch.hidden_relu) {
      for (T v : layer) sig.push_back(v > T(0));
    }
    return sig;
  };
  // Establish the unperturbed signature from `scratch`.
  loss_at();
  return check_gradients<T>(probe.parameters(), analytic, loss_at, signature,
                            tolerance, step);
}

}  // namespace zsl::neural

#endif  // ZSL_NEURAL_HPP_
