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

#include <CLI11.hpp>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "cvoc/common.hpp"
#include "cvoc/config.hpp"
#include "cvoc/evaluation.hpp"
#include "cvoc/log.hpp"
#include "cvoc/spectrogram.hpp"
#include "cvoc/synthcorpus.hpp"
#include "cvoc/training.hpp"
#include "cvoc/vocoder.hpp"

namespace fs = std::filesystem;
using namespace cvoc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitPartial = 2;

// Runs fn(i) for i in [0, n); results must be written by index.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  const int n_workers = std::min<int>(jobs, static_cast<int>(n));
  for (int w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : workers) t.join();
}

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
  int jobs = 1;

  ProjectConfig load() const {
    return ProjectConfig::from_file(config_path, overrides);
  }
};

void add_common(CLI::App* app, CommonOpts& opts) {
  app->add_option("--config", opts.config_path, "Project config (INI)");
  app->add_option("--set", opts.overrides,
                  "Override a config key: section.key=value");
  app->add_option("--jobs", opts.jobs, "Worker threads (default 1)");
}

LayerSpec acoustic_spec(const ProjectConfig& pc) {
  return LayerSpec::uniform(0, pc.acoustic_width, pc.acoustic_depth, 0);
}

LayerSpec duration_spec(const ProjectConfig& pc) {
  return LayerSpec::uniform(0, pc.duration_width, pc.duration_depth, 0);
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::kTrain;
  if (s == "dev") return Split::kDev;
  if (s == "test") return Split::kTest;
  throw InvalidArgument("unknown split '" + s + "'");
}

// Assembles acoustic training data from alignments plus analyzed
// streams under <features_dir>/params/<id>.
std::vector<SupervisedUtterance> load_acoustic_corpus(
    const std::vector<ManifestRow>& rows, const PhoneInventory& inv,
    const std::string& features_dir, const ProjectConfig& pc) {
  std::vector<SupervisedUtterance> corpus;
  corpus.reserve(rows.size());
  for (const auto& row : rows) {
    const std::string stem =
        (fs::path(features_dir) / "params" / row.id).string();
    const ParamTrack track =
        load_param_track(stem, pc.analysis.sample_rate);
    AlignedUtterance u = parse_alignment(row.alignment_path);
    u.id = row.id;
    u.speaker = row.speaker;

    FrameGrid grid;
    grid.hop = track.hop();
    grid.frame_len = grid.hop;
    grid.n_frames = track.n_frames();

    SupervisedUtterance su;
    su.id = row.id;
    su.speaker = row.speaker;
    su.inputs = encode_linguistic_features(u, inv, grid);
    su.targets = param_targets(track);
    su.split = split_from_string(row.split);
    corpus.push_back(std::move(su));
  }
  return corpus;
}

std::vector<SupervisedUtterance> load_duration_corpus(
    const std::vector<ManifestRow>& rows, const PhoneInventory& inv,
    const ProjectConfig& pc) {
  std::vector<SupervisedUtterance> corpus;
  corpus.reserve(rows.size());
  for (const auto& row : rows) {
    AlignedUtterance u = parse_alignment(row.alignment_path);
    u.id = row.id;
    u.speaker = row.speaker;
    SupervisedUtterance su = duration_utterance(
        u, inv, hop_samples(pc.analysis.sample_rate), pc.analysis.sample_rate);
    su.split = split_from_string(row.split);
    corpus.push_back(std::move(su));
  }
  return corpus;
}

int cmd_gen_corpus(const std::string& out_dir, std::size_t speakers,
                   std::size_t utts, uint64_t seed) {
  SynthCorpusConfig cfg;
  cfg.n_speakers = speakers;
  cfg.utterances_per_speaker = utts;
  cfg.seed = seed;
  const std::string manifest = write_synth_corpus(out_dir, cfg);
  log_info("wrote synthetic corpus manifest: " + manifest);
  return kExitOk;
}

int cmd_analyze(const CommonOpts& common, const std::string& manifest_path,
                const std::string& out_dir) {
  const ProjectConfig pc = common.load();
  const auto rows = load_corpus_manifest(manifest_path);
  fs::create_directories(fs::path(out_dir) / "params");
  fs::create_directories(fs::path(out_dir) / "prototypes");

  struct Item {
    bool ok = false;
    std::string error;
    AnalysisResult result;
    std::vector<std::vector<double>> cycles;
  };
  std::vector<Item> items(rows.size());

  parallel_for(rows.size(), common.jobs, [&](std::size_t i) {
    try {
      const Waveform raw = read_wav(rows[i].wav_path);
      const Waveform w = resample(raw, pc.analysis.sample_rate);
      items[i].result = analyze(w, pc.analysis);
      PrototypeConfig proto_cfg = pc.analysis.prototype;
      proto_cfg.residual = pc.analysis.residual;
      items[i].cycles = extract_residual_cycles(w, items[i].result.gcis,
                                                items[i].result.pitch,
                                                proto_cfg);
      items[i].ok = true;
    } catch (const std::exception& e) {
      items[i].error = e.what();
    }
  });

  // Streams per utterance; residual cycles pooled per speaker.
  std::size_t failures = 0;
  std::map<std::string, std::vector<std::vector<double>>> speaker_cycles;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!items[i].ok) {
      ++failures;
      log_error("analyze failed for " + rows[i].wav_path + ": " +
                items[i].error);
      continue;
    }
    const std::string stem =
        (fs::path(out_dir) / "params" / rows[i].id).string();
    save_param_track(stem, items[i].result.params, pc.analysis.sample_rate);
    auto& pool = speaker_cycles[rows[i].speaker];
    for (auto& c : items[i].cycles) pool.push_back(std::move(c));
  }

  PrototypeConfig proto_cfg = pc.analysis.prototype;
  for (const auto& [speaker, cycles] : speaker_cycles) {
    try {
      const ResidualPrototype proto =
          build_prototype_from_cycles(cycles, proto_cfg);
      const std::string path =
          (fs::path(out_dir) / "prototypes" / (speaker + ".cvrp")).string();
      save_prototype(path, proto);
      log_info("prototype for " + speaker + ": " +
               std::to_string(proto.source_cycle_count) + " cycles, share " +
               std::to_string(proto.energy_share));
    } catch (const std::exception& e) {
      ++failures;
      log_error("prototype failed for speaker " + speaker + ": " + e.what());
    }
  }

  if (failures == 0) return kExitOk;
  return failures == rows.size() ? kExitFailure : kExitPartial;
}

int cmd_copysyn(const CommonOpts& common, const std::string& wav_in,
                const std::string& wav_out, const std::string& dump_stem) {
  const ProjectConfig pc = common.load();
  const Waveform input = read_wav(wav_in);  // fails before any output exists
  const CopySynthesisResult res =
      copy_synthesis(input, pc.analysis, pc.synthesis);
  const std::size_t clipped = write_wav(wav_out, res.waveform);
  if (clipped > 0)
    log_warn("copysyn clipped " + std::to_string(clipped) + " samples");
  if (!dump_stem.empty())
    save_param_track(dump_stem, res.params, pc.analysis.sample_rate);
  return kExitOk;
}

int cmd_synth(const CommonOpts& common, const std::string& stem,
              const std::string& proto_path, const std::string& wav_out) {
  const ProjectConfig pc = common.load();
  const ParamTrack track = load_param_track(stem, pc.analysis.sample_rate);
  const ResidualPrototype proto = load_prototype(proto_path);
  const Waveform w =
      synthesize(track, proto, pc.synthesis, pc.analysis.sample_rate);
  write_wav(wav_out, w);
  return kExitOk;
}

int cmd_train_avm(const CommonOpts& common, const std::string& manifest_path,
                  const std::string& features_dir,
                  const std::string& phones_path, const std::string& model_out,
                  const std::string& log_out, bool duration_model,
                  bool single_speaker_ok) {
  const ProjectConfig pc = common.load();
  const auto rows = load_corpus_manifest(manifest_path);
  const PhoneInventory inv = PhoneInventory::from_file(phones_path);

  TrainResult result;
  if (duration_model) {
    const auto corpus = load_duration_corpus(rows, inv, pc);
    result = train_duration_model(corpus, duration_spec(pc), pc.train);
  } else {
    const auto corpus = load_acoustic_corpus(rows, inv, features_dir, pc);
    result = single_speaker_ok
                 ? train_network(corpus, acoustic_spec(pc), pc.train)
                 : train_avm(corpus, acoustic_spec(pc), pc.train);
  }
  save_network(model_out, result.net);
  if (!log_out.empty()) {
    std::ofstream lf(log_out, std::ios::trunc);
    lf << result.log_csv();
  }
  log_info("trained " + std::string(duration_model ? "duration" : "acoustic") +
           " model: final train loss " +
           std::to_string(result.log.back().train_loss) + ", val loss " +
           std::to_string(result.log.back().val_loss));
  return kExitOk;
}

int cmd_adapt(const CommonOpts& common, const std::string& manifest_path,
              const std::string& features_dir, const std::string& phones_path,
              const std::string& base_path, const std::string& model_out,
              const std::string& log_out) {
  const ProjectConfig pc = common.load();
  const auto rows = load_corpus_manifest(manifest_path);
  const PhoneInventory inv = PhoneInventory::from_file(phones_path);
  const Network base = load_network(base_path);

  const auto corpus = load_acoustic_corpus(rows, inv, features_dir, pc);
  const AdaptResult res = adapt(base, corpus, pc.adapt);
  save_network(model_out, res.net);
  if (!log_out.empty()) {
    std::ofstream lf(log_out, std::ios::trunc);
    lf << "epoch,train_loss,val_loss\n";
    for (const auto& rec : res.log)
      lf << rec.epoch << "," << rec.train_loss << "," << rec.val_loss << "\n";
  }
  log_info("adaptation val MSE: base " + std::to_string(res.base_val_mse) +
           " -> adapted " + std::to_string(res.adapted_val_mse));
  return kExitOk;
}

int cmd_tts(const CommonOpts& common, const std::string& acoustic_path,
            const std::string& duration_path, const std::string& phones_arg,
            const std::string& alignment_path, bool use_oracle_durations,
            const std::string& phones_file, const std::string& proto_path,
            const std::string& wav_out) {
  const ProjectConfig pc = common.load();
  const Network acoustic = load_network(acoustic_path);
  const PhoneInventory inv = PhoneInventory::from_file(phones_file);
  const ResidualPrototype proto = load_prototype(proto_path);

  PredictConfig pcfg;
  pcfg.sample_rate = pc.analysis.sample_rate;
  pcfg.mvf_floor_hz = pc.analysis.mvf.floor_hz;
  pcfg.mgc = pc.analysis.mgc;

  ParamTrack track;
  if (!alignment_path.empty() && use_oracle_durations) {
    const AlignedUtterance u = parse_alignment(alignment_path);
    track = predict_parameters(acoustic, u, inv, pcfg);
  } else {
    std::vector<std::string> phones;
    if (!phones_arg.empty()) {
      std::istringstream ss(phones_arg);
      std::string p;
      while (ss >> p) phones.push_back(p);
    } else if (!alignment_path.empty()) {
      for (const auto& e : parse_alignment(alignment_path).entries)
        phones.push_back(e.phone);
    } else {
      throw InvalidArgument("tts: need --phones or --alignment");
    }
    if (duration_path.empty())
      throw InvalidArgument("tts: need --duration model unless "
                            "--use-oracle-durations with an alignment");
    const Network duration_net = load_network(duration_path);
    track = predict_parameters_from_phones(acoustic, duration_net, phones,
                                           inv, pcfg);
  }

  const Waveform w =
      synthesize(track, proto, pc.synthesis, pc.analysis.sample_rate);
  write_wav(wav_out, w);
  log_info("tts wrote " + std::to_string(w.duration_s()) + " s to " + wav_out);
  return kExitOk;
}

int cmd_evaluate(const CommonOpts& common, const std::string& manifest_path,
                 const std::string& csv_out, const std::string& table_out,
                 bool standard_db, bool include_c0, int force_order) {
  const ProjectConfig pc = common.load();
  const auto manifest = load_eval_manifest(manifest_path);

  EvalConfig cfg;
  cfg.analysis = pc.analysis;
  cfg.mcd.scaling =
      standard_db ? McdScaling::kStandardDb : McdScaling::kAsPrinted;
  cfg.mcd.skip_c0 = !include_c0;
  cfg.mcd.force_order = force_order;

  std::vector<UtteranceScore> scores(manifest.size());
  parallel_for(manifest.size(), common.jobs, [&](std::size_t i) {
    const auto report = evaluate_corpus({manifest[i]}, cfg);
    scores[i] = report.utterances[0];
  });
  EvalReport report = aggregate_report(std::move(scores));

  if (!csv_out.empty()) {
    std::ofstream cf(csv_out, std::ios::trunc);
    cf << report.to_csv();
  }
  const std::string table = report.to_table();
  if (!table_out.empty()) {
    std::ofstream tf(table_out, std::ios::trunc);
    tf << table;
  }
  log_info("evaluated " + std::to_string(report.utterances.size()) +
           " utterances, " + std::to_string(report.failed) + " failed");
  if (report.failed == 0) return kExitOk;
  return report.failed == report.utterances.size() ? kExitFailure
                                                   : kExitPartial;
}

int cmd_spectrogram(const CommonOpts& common, const std::string& wav_in,
                    const std::string& png_out, const std::string& mvf_path,
                    int zoom) {
  const ProjectConfig pc = common.load();
  const Waveform raw = read_wav(wav_in);
  const Waveform w = resample(raw, pc.analysis.sample_rate);

  SpectrogramConfig scfg;
  scfg.zoom = zoom;

  if (!mvf_path.empty()) {
    MvfTrack overlay;
    overlay.hop = hop_samples(pc.analysis.sample_rate);
    overlay.values_hz = read_float_stream(mvf_path);
    render_spectrogram(w, png_out, scfg, &overlay);
  } else {
    render_spectrogram(w, png_out, scfg, nullptr);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cvoc: continuous-vocoder speech analysis/synthesis toolkit"};
  app.require_subcommand(1);

  // gen-corpus
  auto* gen = app.add_subcommand("gen-corpus",
                                 "Generate the bundled synthetic corpus");
  std::string gen_out = "corpus";
  std::size_t gen_speakers = 3, gen_utts = 50;
  uint64_t gen_seed = 1000;
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--speakers", gen_speakers, "Number of pseudo-speakers");
  gen->add_option("--utts", gen_utts, "Utterances per speaker");
  gen->add_option("--seed", gen_seed, "Corpus seed");

  // analyze
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Extract lf0/mvf/mgc streams + prototypes");
  CommonOpts analyze_opts;
  std::string analyze_manifest, analyze_out;
  add_common(analyze_cmd, analyze_opts);
  analyze_cmd->add_option("--manifest", analyze_manifest)->required();
  analyze_cmd->add_option("--out", analyze_out)->required();

  // copysyn
  auto* copysyn_cmd =
      app.add_subcommand("copysyn", "Analysis followed by synthesis");
  CommonOpts copysyn_opts;
  std::string copysyn_in, copysyn_out, copysyn_dump;
  add_common(copysyn_cmd, copysyn_opts);
  copysyn_cmd->add_option("--in", copysyn_in)->required();
  copysyn_cmd->add_option("--out", copysyn_out)->required();
  copysyn_cmd->add_option("--dump-params", copysyn_dump,
                          "Also write the three streams under this stem");

  // synth
  auto* synth_cmd =
      app.add_subcommand("synth", "Synthesize from stream files");
  CommonOpts synth_opts;
  std::string synth_stem, synth_proto, synth_out;
  add_common(synth_cmd, synth_opts);
  synth_cmd->add_option("--params", synth_stem, "Stream stem")->required();
  synth_cmd->add_option("--prototype", synth_proto)->required();
  synth_cmd->add_option("--out", synth_out)->required();

  // train-avm / train-duration
  auto* train_cmd = app.add_subcommand("train-avm",
                                       "Train the average voice model");
  CommonOpts train_opts;
  std::string train_manifest, train_features, train_phones, train_model,
      train_log;
  bool train_single_speaker = false;
  add_common(train_cmd, train_opts);
  train_cmd->add_option("--manifest", train_manifest)->required();
  train_cmd->add_option("--features", train_features,
                        "Directory produced by analyze")->required();
  train_cmd->add_option("--phones", train_phones)->required();
  train_cmd->add_option("--model", train_model)->required();
  train_cmd->add_option("--log", train_log, "Training log CSV");
  train_cmd->add_flag("--allow-single-speaker", train_single_speaker,
                      "Skip the multi-speaker check (not an AVM)");

  auto* dur_cmd = app.add_subcommand("train-duration",
                                     "Train the duration model");
  CommonOpts dur_opts;
  std::string dur_manifest, dur_phones, dur_model, dur_log;
  add_common(dur_cmd, dur_opts);
  dur_cmd->add_option("--manifest", dur_manifest)->required();
  dur_cmd->add_option("--phones", dur_phones)->required();
  dur_cmd->add_option("--model", dur_model)->required();
  dur_cmd->add_option("--log", dur_log);

  // adapt
  auto* adapt_cmd = app.add_subcommand("adapt",
                                       "Fine-tune the AVM to a target speaker");
  CommonOpts adapt_opts;
  std::string adapt_manifest, adapt_features, adapt_phones, adapt_base,
      adapt_model, adapt_log;
  add_common(adapt_cmd, adapt_opts);
  adapt_cmd->add_option("--manifest", adapt_manifest)->required();
  adapt_cmd->add_option("--features", adapt_features)->required();
  adapt_cmd->add_option("--phones", adapt_phones)->required();
  adapt_cmd->add_option("--base", adapt_base)->required();
  adapt_cmd->add_option("--model", adapt_model)->required();
  adapt_cmd->add_option("--log", adapt_log);

  // tts
  auto* tts_cmd = app.add_subcommand("tts", "Synthesize from phones or alignment");
  CommonOpts tts_opts;
  std::string tts_acoustic, tts_duration, tts_phones_arg, tts_alignment,
      tts_phones_file, tts_proto, tts_out;
  bool tts_oracle = false;
  add_common(tts_cmd, tts_opts);
  tts_cmd->add_option("--acoustic", tts_acoustic)->required();
  tts_cmd->add_option("--duration", tts_duration);
  tts_cmd->add_option("--phones", tts_phones_arg,
                      "Space-separated phone string");
  tts_cmd->add_option("--alignment", tts_alignment);
  tts_cmd->add_flag("--use-oracle-durations", tts_oracle,
                    "Take durations from the alignment file");
  tts_cmd->add_option("--phones-file", tts_phones_file,
                      "Phone inventory")->required();
  tts_cmd->add_option("--prototype", tts_proto)->required();
  tts_cmd->add_option("--out", tts_out)->required();

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "MCD / F0-CORR report");
  CommonOpts eval_opts;
  std::string eval_manifest, eval_csv, eval_table;
  bool eval_standard_db = false, eval_include_c0 = false;
  int eval_force_order = 0;
  add_common(eval_cmd, eval_opts);
  eval_cmd->add_option("--manifest", eval_manifest)->required();
  eval_cmd->add_option("--out-csv", eval_csv);
  eval_cmd->add_option("--out-table", eval_table);
  eval_cmd->add_flag("--standard-db", eval_standard_db,
                     "Scale frame terms by 10*sqrt(2)/ln 10");
  eval_cmd->add_flag("--include-c0", eval_include_c0);
  eval_cmd->add_option("--force-order", eval_force_order,
                       "Truncate/pad coefficients to this order");

  // spectrogram
  auto* spec_cmd = app.add_subcommand("spectrogram", "Render a PNG spectrogram");
  CommonOpts spec_opts;
  std::string spec_in, spec_out, spec_mvf;
  int spec_zoom = 1;
  add_common(spec_cmd, spec_opts);
  spec_cmd->add_option("--in", spec_in)->required();
  spec_cmd->add_option("--out", spec_out)->required();
  spec_cmd->add_option("--overlay-mvf", spec_mvf, ".mvf stream to overlay");
  spec_cmd->add_option("--zoom", spec_zoom);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen_corpus(gen_out, gen_speakers, gen_utts, gen_seed);
    if (analyze_cmd->parsed())
      return cmd_analyze(analyze_opts, analyze_manifest, analyze_out);
    if (copysyn_cmd->parsed())
      return cmd_copysyn(copysyn_opts, copysyn_in, copysyn_out, copysyn_dump);
    if (synth_cmd->parsed())
      return cmd_synth(synth_opts, synth_stem, synth_proto, synth_out);
    if (train_cmd->parsed())
      return cmd_train_avm(train_opts, train_manifest, train_features,
                           train_phones, train_model, train_log, false,
                           train_single_speaker);
    if (dur_cmd->parsed())
      return cmd_train_avm(dur_opts, dur_manifest, "", dur_phones, dur_model,
                           dur_log, true, true);
    if (adapt_cmd->parsed())
      return cmd_adapt(adapt_opts, adapt_manifest, adapt_features,
                       adapt_phones, adapt_base, adapt_model, adapt_log);
    if (tts_cmd->parsed())
      return cmd_tts(tts_opts, tts_acoustic, tts_duration, tts_phones_arg,
                     tts_alignment, tts_oracle, tts_phones_file, tts_proto,
                     tts_out);
    if (eval_cmd->parsed())
      return cmd_evaluate(eval_opts, eval_manifest, eval_csv, eval_table,
                          eval_standard_db, eval_include_c0, eval_force_order);
    if (spec_cmd->parsed())
      return cmd_spectrogram(spec_opts, spec_in, spec_out, spec_mvf,
                             spec_zoom);
  } catch (const std::exception& e) {
    log_error(e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
