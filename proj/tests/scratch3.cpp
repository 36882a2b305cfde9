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
  SynthCorpusConfig cc;
  cc.n_speakers = 4;
  cc.utterances_per_speaker = 50;
  auto inv = synth_inventory();
  std::vector<SupervisedUtterance> avm_corpus, target_corpus;
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
      (s < 3 ? avm_corpus : target_corpus).push_back(std::move(su));
    }
  }
  std::printf("corpus ready\n");
  struct P { double lr; int batch; int width; int depth; double ascale; };
  for (P p : {P{0.005, 96, 128, 2, 0.1}, P{0.01, 64, 128, 2, 0.1}, P{0.02, 64, 128, 2, 0.1}}) {
    LayerSpec spec = LayerSpec::uniform(0, p.width, p.depth, 0);
    TrainConfig tc; tc.batch_size = p.batch; tc.lr = p.lr; tc.lr_end = 0.5; tc.epochs = 25; tc.seed = 1234;
    double t1 = now_s();
    auto result = train_avm(avm_corpus, spec, tc);
    AdaptConfig ac; ac.lr_scale = p.ascale; ac.epochs = 10; ac.batch_size = p.batch; ac.lr = 0.3; ac.seed = 77;
    auto ares = adapt(result.net, target_corpus, ac);
    std::printf("lr %.2f batch %d %dx%d: e1 %.4f e25 %.4f (drop %.0f%%) val %.4f | base %.4f adapted %.4f ratio %.3f (%.0f s)\n",
                p.lr, p.batch, p.width, p.depth,
                result.log.front().train_loss, result.log.back().train_loss,
                100.0 * (1.0 - result.log.back().train_loss / result.log.front().train_loss),
                result.log.back().val_loss, ares.base_val_mse, ares.adapted_val_mse,
                ares.adapted_val_mse / ares.base_val_mse, now_s() - t1);
  }
  return 0;
}
