#include <chrono>
#include <cmath>
#include <cstdio>
#include "cvoc/network.hpp"
#include "cvoc/synthcorpus.hpp"
#include "cvoc/training.hpp"
#include "cvoc/vocoder.hpp"
using namespace cvoc;
double now_s() { return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count(); }

int main() {
  double t0 = now_s();
  SynthCorpusConfig cc;
  cc.n_speakers = 4;  // 3 AVM + 1 target
  cc.utterances_per_speaker = 50;
  auto inv = synth_inventory();

  std::vector<SupervisedUtterance> avm_corpus, target_corpus;
  std::size_t total_frames = 0;
  for (std::size_t s = 0; s < 4; ++s) {
    auto splits = assign_splits(50, {}, cc.seed + s);
    for (std::size_t u = 0; u < 50; ++u) {
      auto gu = generate_utterance(s, u, cc);
      auto ar = analyze(gu.wav);
      SupervisedUtterance su;
      su.id = gu.id; su.speaker = gu.speaker;
      FrameGrid grid; grid.hop = 80; grid.frame_len = 80; grid.n_frames = ar.params.n_frames();
      su.inputs = encode_linguistic_features(gu.alignment, inv, grid);
      su.targets = param_targets(ar.params);
      su.split = splits[u];
      total_frames += su.inputs.rows;
      (s < 3 ? avm_corpus : target_corpus).push_back(std::move(su));
    }
  }
  std::printf("analysis done: %zu frames (%.1f s)\n", total_frames, now_s() - t0);

  LayerSpec spec = LayerSpec::uniform(0, 128, 2, 0);
  TrainConfig tc; tc.batch_size = 265; tc.lr = 0.02; tc.lr_end = 0.002; tc.epochs = 25; tc.seed = 1234;
  double t1 = now_s();
  auto result = train_avm(avm_corpus, spec, tc);
  std::printf("AVM trained (%.1f s): epoch1 %.4f epoch25 %.4f val %.4f\n",
              now_s() - t1, result.log.front().train_loss, result.log.back().train_loss, result.log.back().val_loss);

  AdaptConfig ac; ac.lr_scale = 0.1; ac.epochs = 10; ac.batch_size = 265; ac.lr = 0.02; ac.seed = 77;
  double t2 = now_s();
  auto ares = adapt(result.net, target_corpus, ac);
  std::printf("adapt (%.1f s): base val %.4f adapted val %.4f ratio %.3f\n",
              now_s() - t2, ares.base_val_mse, ares.adapted_val_mse, ares.adapted_val_mse / ares.base_val_mse);
  std::printf("total %.1f s\n", now_s() - t0);
  return 0;
}
