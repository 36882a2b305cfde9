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

#ifndef CVOC_TRAINING_HPP_
#define CVOC_TRAINING_HPP_

#include <optional>
#include <string>
#include <vector>

#include "cvoc/features.hpp"
#include "cvoc/network.hpp"
#include "cvoc/streams.hpp"
#include "cvoc/vocoder.hpp"

namespace cvoc {

enum class Split : uint8_t { kTrain = 0, kDev = 1, kTest = 2 };

struct SplitFractions {
  double train = 0.90;
  double dev = 0.05;
  double test = 0.05;
};

// Deterministic per-utterance split assignment (seeded shuffle).
std::vector<Split> assign_splits(std::size_t n, const SplitFractions& fr,
                                 uint64_t seed);

// One utterance of supervised data in physical units.
struct SupervisedUtterance {
  std::string id;
  std::string speaker;
  FeatureMatrix inputs;
  Eigen::MatrixXd targets;
  Split split = Split::kTrain;
};

// Acoustic targets: one row per frame of [ln F0, MVF, c0..c_order].
Eigen::MatrixXd param_targets(const ParamTrack& track);

// Duration rows for one utterance; targets are ln(frames).
SupervisedUtterance duration_utterance(const AlignedUtterance& u,
                                       const PhoneInventory& inv, int hop,
                                       int sample_rate);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainResult {
  Network net;
  std::vector<EpochRecord> log;

  std::string log_csv() const;  // "epoch,train_loss,val_loss"
};

// Pools the train-split frames of all utterances, fits normalization
// stats on them and runs the SGD schedule. Utterances tagged kDev form
// the per-epoch validation set.
TrainResult train_network(const std::vector<SupervisedUtterance>& corpus,
                          LayerSpec spec, const TrainConfig& cfg);

// Average voice model over pooled speakers; requires at least two
// distinct speaker ids.
TrainResult train_avm(const std::vector<SupervisedUtterance>& corpus,
                      LayerSpec spec, const TrainConfig& cfg);

struct AdaptConfig {
  double lr_scale = 0.1;  // in (0, 1]
  int epochs = 10;
  // 0 = update all layers; k > 0 = update only the top k layers.
  int top_k_layers = 0;
  int batch_size = 265;
  double lr = 0.02;
  uint64_t seed = 0;

  void validate() const;
};

struct AdaptResult {
  Network net;
  // Validation MSE on the target speaker, measured in a common space
  // (target-speaker output normalization) before and after fine-tuning.
  double base_val_mse = 0.0;
  double adapted_val_mse = 0.0;
  std::vector<EpochRecord> log;
};

// Fine-tunes the base network on the target-speaker corpus with
// lr * lr_scale; output normalization is recomputed on the target.
AdaptResult adapt(const Network& base,
                  const std::vector<SupervisedUtterance>& target_corpus,
                  const AdaptConfig& cfg);

// Duration model: same machinery, phone-level rows, scalar log-domain
// output, clamped to >= 1 frame at inference.
TrainResult train_duration_model(
    const std::vector<SupervisedUtterance>& corpus, LayerSpec spec,
    const TrainConfig& cfg);

std::vector<double> predict_durations_frames(const Network& duration_net,
                                             const std::vector<std::string>& phones,
                                             const PhoneInventory& inv);

// Runs the acoustic network over the utterance's frame features and
// splits the denormalized output into the three streams. lf0 and MVF
// are smoothed with a 3-frame moving average; MVF is clamped to
// [floor, Nyquist].
struct PredictConfig {
  int sample_rate = kWorkingRate;
  double mvf_floor_hz = 800.0;
  MgcConfig mgc;  // metadata for the produced MgcTrack
};
ParamTrack predict_parameters(const Network& acoustic,
                              const AlignedUtterance& u,
                              const PhoneInventory& inv,
                              const PredictConfig& cfg = {});

// Builds an alignment from a phone string via the duration model, then
// predicts parameters.
ParamTrack predict_parameters_from_phones(
    const Network& acoustic, const Network& duration_net,
    const std::vector<std::string>& phones, const PhoneInventory& inv,
    const PredictConfig& cfg = {});

// FNV-1a digest of utterance ids and sizes; stored in provenance.
std::string corpus_digest(const std::vector<SupervisedUtterance>& corpus);

}  // namespace cvoc

#endif  // CVOC_TRAINING_HPP_
