// Copyright 2026 The cvoc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvoc/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

#include "cvoc/common.hpp"
#include "cvoc/serialize.hpp"

namespace cvoc {

void LayerSpec::validate() const {
  if (input_dim <= 0) throw InvalidArgument("LayerSpec: input_dim must be > 0");
  if (output_dim <= 0)
    throw InvalidArgument("LayerSpec: output_dim must be > 0");
  for (const auto& [width, act] : hidden) {
    if (width <= 0) throw InvalidArgument("LayerSpec: zero-width layer");
    if (act != Activation::kTanh && act != Activation::kLinear)
      throw InvalidArgument("LayerSpec: unsupported activation");
  }
}

LayerSpec LayerSpec::uniform(int input_dim, int width, int depth,
                             int output_dim) {
  LayerSpec spec;
  spec.input_dim = input_dim;
  spec.output_dim = output_dim;
  for (int i = 0; i < depth; ++i)
    spec.hidden.emplace_back(width, Activation::kTanh);
  return spec;
}

void Network::validate() const {
  spec.validate();
  int prev = spec.input_dim;
  if (layers.size() != spec.hidden.size() + 1)
    throw InvalidArgument("Network: layer count does not match spec");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const int out = (i < spec.hidden.size()) ? spec.hidden[i].first
                                             : spec.output_dim;
    if (l.weights.rows() != out || l.weights.cols() != prev ||
        l.bias.size() != out)
      throw InvalidArgument("Network: shape chain broken at layer " +
                            std::to_string(i));
    if (!l.weights.allFinite() || !l.bias.allFinite())
      throw InvalidArgument("Network: non-finite parameters at layer " +
                            std::to_string(i));
    prev = out;
  }
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw InvalidArgument("TrainConfig: batch_size >= 1");
  if (epochs < 1) throw InvalidArgument("TrainConfig: epochs >= 1");
  if (lr < 0.0) throw InvalidArgument("TrainConfig: lr must be >= 0");
}

Network init_network(const LayerSpec& spec, uint64_t seed) {
  spec.validate();
  Network net;
  net.spec = spec;
  net.provenance.seed = seed;
  std::mt19937_64 rng(seed);

  int prev = spec.input_dim;
  const std::size_t n_layers = spec.hidden.size() + 1;
  for (std::size_t i = 0; i < n_layers; ++i) {
    const int out = (i < spec.hidden.size()) ? spec.hidden[i].first
                                             : spec.output_dim;
    Network::Layer layer;
    layer.activation = (i < spec.hidden.size()) ? spec.hidden[i].second
                                                : Activation::kLinear;
    layer.weights.resize(out, prev);
    layer.bias = Eigen::VectorXd::Zero(out);
    const double limit = std::sqrt(6.0 / (prev + out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (int r = 0; r < out; ++r)
      for (int c = 0; c < prev; ++c) layer.weights(r, c) = dist(rng);
    net.layers.push_back(std::move(layer));
    prev = out;
  }
  return net;
}

namespace {

Eigen::MatrixXd apply_activation(Eigen::MatrixXd z, Activation act) {
  if (act == Activation::kTanh) return z.array().tanh().matrix();
  return z;
}

}  // namespace

Eigen::MatrixXd forward(const Network& net, const Eigen::MatrixXd& inputs) {
  if (inputs.cols() != net.input_dim())
    throw InvalidArgument("forward: input width " +
                          std::to_string(inputs.cols()) +
                          " does not match network input dim " +
                          std::to_string(net.input_dim()));
  Eigen::MatrixXd h = inputs;
  for (const auto& layer : net.layers) {
    Eigen::MatrixXd z = h * layer.weights.transpose();
    z.rowwise() += layer.bias.transpose();
    h = apply_activation(std::move(z), layer.activation);
  }
  return h;
}

double mse_loss(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols())
    throw InvalidArgument("mse_loss: shape mismatch");
  const Eigen::MatrixXd diff = pred - target;
  return diff.squaredNorm() / static_cast<double>(diff.size());
}

Gradients backprop(const Network& net, const Eigen::MatrixXd& inputs,
                   const Eigen::MatrixXd& targets, double* loss) {
  const std::size_t n_layers = net.layers.size();
  std::vector<Eigen::MatrixXd> activations;
  activations.reserve(n_layers + 1);
  activations.push_back(inputs);
  for (const auto& layer : net.layers) {
    Eigen::MatrixXd z = activations.back() * layer.weights.transpose();
    z.rowwise() += layer.bias.transpose();
    activations.push_back(apply_activation(std::move(z), layer.activation));
  }

  const Eigen::MatrixXd& pred = activations.back();
  const double denom = static_cast<double>(pred.size());
  if (loss) *loss = (pred - targets).squaredNorm() / denom;

  Gradients grads;
  grads.weights.resize(n_layers);
  grads.bias.resize(n_layers);

  // dL/d(pre-activation) of the output layer; MSE over all elements.
  Eigen::MatrixXd delta = 2.0 * (pred - targets) / denom;
  for (std::size_t i = n_layers; i-- > 0;) {
    const auto& layer = net.layers[i];
    if (layer.activation == Activation::kTanh) {
      // a = tanh(z): da/dz = 1 - a^2
      delta = delta.cwiseProduct(
          (1.0 - activations[i + 1].array().square()).matrix());
    }
    grads.weights[i] = delta.transpose() * activations[i];
    grads.bias[i] = delta.colwise().sum().transpose();
    if (i > 0) delta = delta * layer.weights;
  }
  return grads;
}

double learning_rate_at(const TrainConfig& cfg, int epoch_index) {
  if (cfg.epochs <= 1) return cfg.lr;
  const double t = std::clamp(
      static_cast<double>(epoch_index) / (cfg.epochs - 1), 0.0, 1.0);
  return cfg.lr + t * (cfg.lr_end - cfg.lr);
}

double sgd_epoch(Network& net, const Eigen::MatrixXd& inputs,
                 const Eigen::MatrixXd& targets, const TrainConfig& cfg,
                 int epoch_index) {
  cfg.validate();
  if (inputs.rows() != targets.rows())
    throw InvalidArgument("sgd_epoch: input/target row mismatch");
  if (inputs.rows() == 0) throw InvalidArgument("sgd_epoch: empty dataset");

  const Eigen::Index n = inputs.rows();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed + 0x9e3779b97f4a7c15ULL *
                                     static_cast<uint64_t>(epoch_index + 1));
  std::shuffle(order.begin(), order.end(), rng);

  const double lr = learning_rate_at(cfg, epoch_index);
  double loss_sum = 0.0;
  std::size_t batches = 0;

  for (Eigen::Index start = 0; start < n; start += cfg.batch_size) {
    const Eigen::Index len = std::min<Eigen::Index>(cfg.batch_size, n - start);
    Eigen::MatrixXd bx(len, inputs.cols());
    Eigen::MatrixXd by(len, targets.cols());
    for (Eigen::Index r = 0; r < len; ++r) {
      bx.row(r) = inputs.row(order[start + r]);
      by.row(r) = targets.row(order[start + r]);
    }
    double batch_loss = 0.0;
    const Gradients grads = backprop(net, bx, by, &batch_loss);
    if (!std::isfinite(batch_loss))
      throw Error("sgd_epoch: non-finite loss (learning rate too high?)");
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
      net.layers[i].weights.noalias() -= lr * grads.weights[i];
      net.layers[i].bias.noalias() -= lr * grads.bias[i];
    }
    loss_sum += batch_loss;
    ++batches;
  }
  return loss_sum / static_cast<double>(batches);
}

namespace {

void write_stats(ByteWriter& bw, const NormStats& st) {
  bw.u8(static_cast<uint8_t>(st.kind));
  bw.u32(static_cast<uint32_t>(st.cols()));
  for (double v : st.a) bw.f64(v);
  for (double v : st.b) bw.f64(v);
  for (uint8_t v : st.degenerate) bw.u8(v);
}

NormStats read_stats(ByteReader& br) {
  NormStats st;
  st.kind = static_cast<NormStats::Kind>(br.u8());
  const uint32_t cols = br.u32();
  st.a.resize(cols);
  st.b.resize(cols);
  st.degenerate.resize(cols);
  for (auto& v : st.a) v = br.f64();
  for (auto& v : st.b) v = br.f64();
  for (auto& v : st.degenerate) v = br.u8();
  return st;
}

}  // namespace

void save_network(const std::string& path, const Network& net) {
  net.validate();
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FileError("save_network: cannot open: " + path);

  ByteWriter bw;
  bw.bytes("CVDN", 4);
  bw.u16(1);
  bw.u32(static_cast<uint32_t>(net.layers.size()));
  bw.u32(static_cast<uint32_t>(net.input_dim()));
  for (const auto& layer : net.layers) {
    bw.u32(static_cast<uint32_t>(layer.weights.rows()));
    bw.u8(static_cast<uint8_t>(layer.activation));
  }
  for (const auto& layer : net.layers) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
        bw.f32(static_cast<float>(layer.weights(r, c)));
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r)
      bw.f32(static_cast<float>(layer.bias(r)));
  }
  write_stats(bw, net.input_stats);
  write_stats(bw, net.output_stats);
  bw.u64(net.provenance.seed);
  bw.u32(net.provenance.epochs_trained);
  bw.str(net.provenance.corpus_digest);
  bw.to_stream(f);
  if (!f) throw FileError("save_network: write failed: " + path);
}

Network load_network(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FileError("load_network: cannot open: " + path);
  ByteReader br(f, path);
  char magic[4];
  br.bytes(magic, 4);
  if (std::memcmp(magic, "CVDN", 4) != 0)
    throw FormatError("load_network: bad magic: " + path);
  if (br.u16() != 1)
    throw FormatError("load_network: unsupported version: " + path);

  const uint32_t n_layers = br.u32();
  Network net;
  net.spec.input_dim = static_cast<int>(br.u32());
  std::vector<std::pair<int, Activation>> dims;
  for (uint32_t i = 0; i < n_layers; ++i) {
    const int out = static_cast<int>(br.u32());
    const auto act = static_cast<Activation>(br.u8());
    dims.emplace_back(out, act);
  }
  net.spec.output_dim = dims.back().first;
  for (uint32_t i = 0; i + 1 < n_layers; ++i)
    net.spec.hidden.push_back(dims[i]);

  int prev = net.spec.input_dim;
  for (uint32_t i = 0; i < n_layers; ++i) {
    Network::Layer layer;
    layer.activation = dims[i].second;
    layer.weights.resize(dims[i].first, prev);
    layer.bias.resize(dims[i].first);
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
        layer.weights(r, c) = br.f32();
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r)
      layer.bias(r) = br.f32();
    net.layers.push_back(std::move(layer));
    prev = dims[i].first;
  }
  net.input_stats = read_stats(br);
  net.output_stats = read_stats(br);
  net.provenance.seed = br.u64();
  net.provenance.epochs_trained = br.u32();
  net.provenance.corpus_digest = br.str();
  net.validate();
  return net;
}

}  // namespace cvoc
