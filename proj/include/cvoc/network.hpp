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

#ifndef CVOC_NETWORK_HPP_
#define CVOC_NETWORK_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "cvoc/features.hpp"

namespace cvoc {

enum class Activation : uint8_t { kTanh = 0, kLinear = 1 };

struct LayerSpec {
  int input_dim = 0;
  std::vector<std::pair<int, Activation>> hidden;
  int output_dim = 0;  // output activation is linear

  void validate() const;
  // n hidden layers of equal width, tanh.
  static LayerSpec uniform(int input_dim, int width, int depth,
                           int output_dim);
};

struct Provenance {
  uint64_t seed = 0;
  uint32_t epochs_trained = 0;
  std::string corpus_digest;
};

// Plain feedforward network. Inputs and outputs live in normalized
// space; the attached stats map to and from physical units.
struct Network {
  struct Layer {
    Eigen::MatrixXd weights;  // out x in
    Eigen::VectorXd bias;     // out
    Activation activation = Activation::kTanh;
  };
  std::vector<Layer> layers;
  LayerSpec spec;
  NormStats input_stats;
  NormStats output_stats;
  Provenance provenance;

  int input_dim() const { return spec.input_dim; }
  int output_dim() const { return spec.output_dim; }
  void validate() const;  // shape chain + finite parameters
};

struct TrainConfig {
  int batch_size = 265;
  double lr = 0.02;
  double lr_end = 0.002;  // linear decay target over the epoch schedule
  int epochs = 25;
  uint64_t seed = 0;

  void validate() const;
};

// Glorot-uniform initialization, biases zero, deterministic per seed.
Network init_network(const LayerSpec& spec, uint64_t seed);

// Row-wise forward pass in normalized space.
Eigen::MatrixXd forward(const Network& net, const Eigen::MatrixXd& inputs);

// Mean squared error over all elements.
double mse_loss(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target);

// Analytic gradients of the MSE loss for one batch; used by sgd_epoch
// and by the finite-difference checks.
struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> bias;
};
Gradients backprop(const Network& net, const Eigen::MatrixXd& inputs,
                   const Eigen::MatrixXd& targets, double* loss = nullptr);

// One epoch of mini-batch SGD with a seeded per-epoch reshuffle.
// epoch_index selects the shuffle stream and the decayed learning rate.
// Returns the mean per-batch loss. Throws on a non-finite loss.
double sgd_epoch(Network& net, const Eigen::MatrixXd& inputs,
                 const Eigen::MatrixXd& targets, const TrainConfig& cfg,
                 int epoch_index);

double learning_rate_at(const TrainConfig& cfg, int epoch_index);

// Model file, magic "CVDN": layer dims and activation tags, float32
// row-major weights, normalization stats, provenance.
void save_network(const std::string& path, const Network& net);
Network load_network(const std::string& path);

}  // namespace cvoc

#endif  // CVOC_NETWORK_HPP_
