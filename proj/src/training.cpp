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

#include "cvoc/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "cvoc/common.hpp"
#include "cvoc/dsp.hpp"

namespace cvoc {

std::vector<Split> assign_splits(std::size_t n, const SplitFractions& fr,
                                 uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t n_train =
      static_cast<std::size_t>(std::round(fr.train * n));
  const std::size_t n_dev = std::min(
      n - n_train, static_cast<std::size_t>(std::round(fr.dev * n)));

  std::vector<Split> splits(n, Split::kTest);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_train)
      splits[order[i]] = Split::kTrain;
    else if (i < n_train + n_dev)
      splits[order[i]] = Split::kDev;
  }
  // Degenerate corpora still need at least one train utterance.
  if (n > 0 && n_train == 0) splits[order[0]] = Split::kTrain;
  return splits;
}

Eigen::MatrixXd param_targets(const ParamTrack& track) {
  track.validate();
  const std::size_t n = track.n_frames();
  const int width = 2 + track.mgc.width();
  Eigen::MatrixXd out(n, width);
  for (std::size_t t = 0; t < n; ++t) {
    if (track.f0.values_hz[t] <= 0.0)
      throw InvalidArgument("param_targets: non-positive F0");
    out(t, 0) = std::log(track.f0.values_hz[t]);
    out(t, 1) = track.mvf.values_hz[t];
    const auto frame = track.mgc.frame(t);
    for (int i = 0; i < track.mgc.width(); ++i) out(t, 2 + i) = frame[i];
  }
  return out;
}

SupervisedUtterance duration_utterance(const AlignedUtterance& u,
                                       const PhoneInventory& inv, int hop,
                                       int sample_rate) {
  SupervisedUtterance su;
  su.id = u.id;
  su.speaker = u.speaker;
  auto df = encode_duration_features(u, inv, hop, sample_rate);
  su.inputs = std::move(df.features);
  su.targets.resize(df.target_frames.size(), 1);
  for (std::size_t i = 0; i < df.target_frames.size(); ++i)
    su.targets(i, 0) = std::log(df.target_frames[i]);
  return su;
}

std::string TrainResult::log_csv() const {
  std::ostringstream os;
  os << "epoch,train_loss,val_loss\n";
  for (const auto& rec : log)
    os << rec.epoch << "," << rec.train_loss << "," << rec.val_loss << "\n";
  return os.str();
}

namespace {

struct PooledData {
  Eigen::MatrixXd train_x, train_y;
  Eigen::MatrixXd dev_x, dev_y;
};

// Fits normalization on the train split, then pools normalized rows.
PooledData pool_corpus(const std::vector<SupervisedUtterance>& corpus,
                       NormStats& in_stats, NormStats& out_stats) {
  std::vector<const FeatureMatrix*> train_inputs;
  std::vector<FeatureMatrix> target_views;
  target_views.reserve(corpus.size());
  for (const auto& u : corpus) {
    FeatureMatrix fm;
    fm.rows = static_cast<std::size_t>(u.targets.rows());
    fm.cols = static_cast<std::size_t>(u.targets.cols());
    fm.data.resize(fm.rows * fm.cols);
    for (std::size_t r = 0; r < fm.rows; ++r)
      for (std::size_t c = 0; c < fm.cols; ++c)
        fm.data[r * fm.cols + c] = u.targets(r, c);
    target_views.push_back(std::move(fm));
  }
  std::vector<const FeatureMatrix*> train_targets;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].split == Split::kTrain) {
      train_inputs.push_back(&corpus[i].inputs);
      train_targets.push_back(&target_views[i]);
    }
  }
  if (train_inputs.empty())
    throw InvalidArgument("train: no utterances in the train split");

  in_stats = compute_stats(train_inputs, NormStats::Kind::kMinMax);
  out_stats = compute_stats(train_targets, NormStats::Kind::kMeanVar);

  std::size_t n_train = 0, n_dev = 0;
  for (const auto& u : corpus) {
    if (u.split == Split::kTrain) n_train += u.inputs.rows;
    if (u.split == Split::kDev) n_dev += u.inputs.rows;
  }

  PooledData pd;
  const std::size_t in_w = corpus[0].inputs.cols;
  const std::size_t out_w = static_cast<std::size_t>(corpus[0].targets.cols());
  pd.train_x.resize(n_train, in_w);
  pd.train_y.resize(n_train, out_w);
  pd.dev_x.resize(n_dev, in_w);
  pd.dev_y.resize(n_dev, out_w);

  std::size_t ti = 0, di = 0;
  std::vector<double> row_buf;
  for (const auto& u : corpus) {
    if (u.split == Split::kTest) continue;
    for (std::size_t r = 0; r < u.inputs.rows; ++r) {
      row_buf.assign(u.inputs.row(r).begin(), u.inputs.row(r).end());
      in_stats.apply_row(row_buf);
      std::vector<double> trow(out_w);
      for (std::size_t c = 0; c < out_w; ++c) trow[c] = u.targets(r, c);
      out_stats.apply_row(trow);
      if (u.split == Split::kTrain) {
        for (std::size_t c = 0; c < in_w; ++c) pd.train_x(ti, c) = row_buf[c];
        for (std::size_t c = 0; c < out_w; ++c) pd.train_y(ti, c) = trow[c];
        ++ti;
      } else {
        for (std::size_t c = 0; c < in_w; ++c) pd.dev_x(di, c) = row_buf[c];
        for (std::size_t c = 0; c < out_w; ++c) pd.dev_y(di, c) = trow[c];
        ++di;
      }
    }
  }
  return pd;
}

void check_corpus(const std::vector<SupervisedUtterance>& corpus) {
  if (corpus.empty()) throw InvalidArgument("train: empty corpus");
  const std::size_t w = corpus[0].inputs.cols;
  const Eigen::Index tw = corpus[0].targets.cols();
  for (const auto& u : corpus) {
    if (u.inputs.cols != w || u.targets.cols() != tw)
      throw InvalidArgument("train: inconsistent feature schema across corpus");
    if (static_cast<Eigen::Index>(u.inputs.rows) != u.targets.rows())
      throw InvalidArgument("train: row mismatch in utterance " + u.id);
  }
}

}  // namespace

std::string corpus_digest(const std::vector<SupervisedUtterance>& corpus) {
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&](uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  for (const auto& u : corpus) {
    for (char c : u.id) mix(static_cast<unsigned char>(c));
    mix(u.inputs.rows);
    mix(static_cast<uint64_t>(u.targets.cols()));
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

TrainResult train_network(const std::vector<SupervisedUtterance>& corpus,
                          LayerSpec spec, const TrainConfig& cfg) {
  check_corpus(corpus);
  cfg.validate();

  NormStats in_stats, out_stats;
  const PooledData pd = pool_corpus(corpus, in_stats, out_stats);

  spec.input_dim = static_cast<int>(corpus[0].inputs.cols);
  spec.output_dim = static_cast<int>(corpus[0].targets.cols());

  TrainResult res;
  res.net = init_network(spec, cfg.seed);
  res.net.input_stats = in_stats;
  res.net.output_stats = out_stats;
  res.net.provenance.corpus_digest = corpus_digest(corpus);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch + 1;
    rec.train_loss = sgd_epoch(res.net, pd.train_x, pd.train_y, cfg, epoch);
    rec.val_loss = pd.dev_x.rows() > 0
                       ? mse_loss(forward(res.net, pd.dev_x), pd.dev_y)
                       : rec.train_loss;
    res.log.push_back(rec);
  }
  res.net.provenance.epochs_trained = static_cast<uint32_t>(cfg.epochs);
  return res;
}

TrainResult train_avm(const std::vector<SupervisedUtterance>& corpus,
                      LayerSpec spec, const TrainConfig& cfg) {
  std::set<std::string> speakers;
  for (const auto& u : corpus) speakers.insert(u.speaker);
  if (speakers.size() < 2)
    throw InvalidArgument(
        "train_avm: need at least 2 speakers for an average voice model, got " +
        std::to_string(speakers.size()));
  return train_network(corpus, spec, cfg);
}

void AdaptConfig::validate() const {
  if (lr_scale <= 0.0 || lr_scale > 1.0)
    throw InvalidArgument("AdaptConfig: lr_scale must be in (0, 1]");
  if (epochs < 1) throw InvalidArgument("AdaptConfig: epochs must be >= 1");
  if (top_k_layers < 0)
    throw InvalidArgument("AdaptConfig: top_k_layers must be >= 0");
}

AdaptResult adapt(const Network& base,
                  const std::vector<SupervisedUtterance>& target_corpus,
                  const AdaptConfig& cfg) {
  cfg.validate();
  check_corpus(target_corpus);
  if (static_cast<int>(target_corpus[0].inputs.cols) != base.input_dim() ||
      static_cast<int>(target_corpus[0].targets.cols()) != base.output_dim())
    throw InvalidArgument(
        "adapt: feature schema mismatch (corpus " +
        std::to_string(target_corpus[0].inputs.cols) + "->" +
        std::to_string(target_corpus[0].targets.cols()) + ", base network " +
        std::to_string(base.input_dim()) + "->" +
        std::to_string(base.output_dim()) + ")");

  AdaptResult res;
  res.net = base;

  // Output normalization is recomputed on the target speaker; inputs
  // keep the base scaling so the learned feature mapping stays valid.
  NormStats in_stats = base.input_stats;
  NormStats out_stats;
  {
    std::vector<FeatureMatrix> views;
    for (const auto& u : target_corpus) {
      if (u.split != Split::kTrain) continue;
      FeatureMatrix fm;
      fm.rows = static_cast<std::size_t>(u.targets.rows());
      fm.cols = static_cast<std::size_t>(u.targets.cols());
      fm.data.resize(fm.rows * fm.cols);
      for (std::size_t r = 0; r < fm.rows; ++r)
        for (std::size_t c = 0; c < fm.cols; ++c)
          fm.data[r * fm.cols + c] = u.targets(r, c);
      views.push_back(std::move(fm));
    }
    std::vector<const FeatureMatrix*> train_targets;
    for (const auto& v : views) train_targets.push_back(&v);
    if (train_targets.empty())
      throw InvalidArgument("adapt: no utterances in the target train split");
    out_stats = compute_stats(train_targets, NormStats::Kind::kMeanVar);
  }
  res.net.output_stats = out_stats;

  // Pool normalized target data.
  auto pool = [&](Split split, Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
    std::size_t rows = 0;
    for (const auto& u : target_corpus)
      if (u.split == split) rows += u.inputs.rows;
    x.resize(rows, base.input_dim());
    y.resize(rows, base.output_dim());
    std::size_t i = 0;
    std::vector<double> buf;
    for (const auto& u : target_corpus) {
      if (u.split != split) continue;
      for (std::size_t r = 0; r < u.inputs.rows; ++r) {
        buf.assign(u.inputs.row(r).begin(), u.inputs.row(r).end());
        in_stats.apply_row(buf);
        for (int c = 0; c < base.input_dim(); ++c) x(i, c) = buf[c];
        std::vector<double> t(base.output_dim());
        for (int c = 0; c < base.output_dim(); ++c) t[c] = u.targets(r, c);
        out_stats.apply_row(t);
        for (int c = 0; c < base.output_dim(); ++c) y(i, c) = t[c];
        ++i;
      }
    }
  };
  Eigen::MatrixXd train_x, train_y, dev_x, dev_y;
  pool(Split::kTrain, train_x, train_y);
  pool(Split::kDev, dev_x, dev_y);
  if (dev_x.rows() == 0) {
    dev_x = train_x;
    dev_y = train_y;
  }

  res.base_val_mse = mse_loss(forward(res.net, dev_x), dev_y);

  TrainConfig tc;
  tc.batch_size = cfg.batch_size;
  tc.lr = cfg.lr * cfg.lr_scale;
  tc.lr_end = tc.lr * 0.1;
  tc.epochs = cfg.epochs;
  tc.seed = cfg.seed;

  const std::size_t n_layers = res.net.layers.size();
  const std::size_t first_trainable =
      (cfg.top_k_layers > 0 && static_cast<std::size_t>(cfg.top_k_layers) <
                                   n_layers)
          ? n_layers - cfg.top_k_layers
          : 0;

  for (int epoch = 0; epoch < tc.epochs; ++epoch) {
    // Frozen layers are restored after the step.
    std::vector<Network::Layer> frozen(res.net.layers.begin(),
                                       res.net.layers.begin() +
                                           first_trainable);
    EpochRecord rec;
    rec.epoch = epoch + 1;
    rec.train_loss = sgd_epoch(res.net, train_x, train_y, tc, epoch);
    for (std::size_t i = 0; i < first_trainable; ++i)
      res.net.layers[i] = frozen[i];
    rec.val_loss = mse_loss(forward(res.net, dev_x), dev_y);
    res.log.push_back(rec);
  }
  res.adapted_val_mse = mse_loss(forward(res.net, dev_x), dev_y);
  res.net.provenance.epochs_trained += static_cast<uint32_t>(cfg.epochs);
  return res;
}

TrainResult train_duration_model(
    const std::vector<SupervisedUtterance>& corpus, LayerSpec spec,
    const TrainConfig& cfg) {
  return train_network(corpus, spec, cfg);
}

namespace {

Eigen::MatrixXd run_normalized(const Network& net, const FeatureMatrix& fm) {
  if (static_cast<int>(fm.cols) != net.input_dim())
    throw InvalidArgument("predict: feature width " + std::to_string(fm.cols) +
                          " does not match network input dim " +
                          std::to_string(net.input_dim()));
  Eigen::MatrixXd x(fm.rows, fm.cols);
  std::vector<double> buf;
  for (std::size_t r = 0; r < fm.rows; ++r) {
    buf.assign(fm.row(r).begin(), fm.row(r).end());
    net.input_stats.apply_row(buf);
    for (std::size_t c = 0; c < fm.cols; ++c) x(r, c) = buf[c];
  }
  return forward(net, x);
}

}  // namespace

std::vector<double> predict_durations_frames(
    const Network& duration_net, const std::vector<std::string>& phones,
    const PhoneInventory& inv) {
  if (phones.empty())
    throw InvalidArgument("predict_durations: empty phone sequence");
  // Build a nominal alignment purely to reuse the feature encoder; the
  // times do not influence the one-hot/position features.
  AlignedUtterance u;
  double t = 0.0;
  for (const auto& p : phones) {
    (void)inv.index(p);
    u.entries.push_back({p, t, t + 0.1});
    t += 0.1;
  }
  auto df = encode_duration_features(u, inv, hop_samples(kWorkingRate),
                                     kWorkingRate);
  Eigen::MatrixXd out = run_normalized(duration_net, df.features);
  std::vector<double> frames(phones.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    std::vector<double> row{out(i, 0)};
    duration_net.output_stats.invert_row(row);
    frames[i] = std::max(1.0, std::round(std::exp(row[0])));
  }
  return frames;
}

ParamTrack predict_parameters(const Network& acoustic,
                              const AlignedUtterance& u,
                              const PhoneInventory& inv,
                              const PredictConfig& cfg) {
  u.validate();
  const int hop = hop_samples(cfg.sample_rate);
  FrameGrid grid;
  grid.hop = hop;
  grid.frame_len = hop;
  grid.n_frames = static_cast<std::size_t>(
      std::ceil(u.total_duration_s() * cfg.sample_rate / hop - 1e-9));
  if (grid.n_frames == 0)
    throw InvalidArgument("predict_parameters: zero-length utterance");

  const FeatureMatrix fm = encode_linguistic_features(u, inv, grid);
  Eigen::MatrixXd out = run_normalized(acoustic, fm);

  const int width = acoustic.output_dim();
  if (width < 3)
    throw InvalidArgument("predict_parameters: network output too narrow");
  const int mgc_width = width - 2;

  std::vector<double> lf0(grid.n_frames), mvf(grid.n_frames);
  ParamTrack track;
  track.mgc.order = mgc_width - 1;
  track.mgc.alpha = cfg.mgc.alpha;
  track.mgc.gamma = cfg.mgc.gamma;
  track.mgc.hop = hop;
  track.mgc.n_frames = grid.n_frames;
  track.mgc.coeffs.resize(grid.n_frames * mgc_width);

  std::vector<double> row(width);
  for (std::size_t t = 0; t < grid.n_frames; ++t) {
    for (int c = 0; c < width; ++c) row[c] = out(t, c);
    acoustic.output_stats.invert_row(row);
    lf0[t] = row[0];
    mvf[t] = row[1];
    for (int c = 0; c < mgc_width; ++c)
      track.mgc.coeffs[t * mgc_width + c] = row[2 + c];
  }

  lf0 = dsp::moving_average(lf0, 3);
  mvf = dsp::moving_average(mvf, 3);

  const double nyquist = cfg.sample_rate / 2.0;
  track.f0.hop = hop;
  track.mvf.hop = hop;
  track.f0.values_hz.resize(grid.n_frames);
  track.mvf.values_hz.resize(grid.n_frames);
  for (std::size_t t = 0; t < grid.n_frames; ++t) {
    track.f0.values_hz[t] = std::exp(lf0[t]);
    track.mvf.values_hz[t] =
        std::clamp(mvf[t], cfg.mvf_floor_hz, nyquist);
  }
  track.validate();
  return track;
}

ParamTrack predict_parameters_from_phones(
    const Network& acoustic, const Network& duration_net,
    const std::vector<std::string>& phones, const PhoneInventory& inv,
    const PredictConfig& cfg) {
  const auto frames = predict_durations_frames(duration_net, phones, inv);
  const double frame_s =
      static_cast<double>(hop_samples(cfg.sample_rate)) / cfg.sample_rate;
  AlignedUtterance u;
  double t = 0.0;
  for (std::size_t i = 0; i < phones.size(); ++i) {
    const double dur = frames[i] * frame_s;
    u.entries.push_back({phones[i], t, t + dur});
    t += dur;
  }
  return predict_parameters(acoustic, u, inv, cfg);
}

}  // namespace cvoc
