// ser/cli/commands.cc

// Copyright 2026  ser-duo contributors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "ser/cli/commands.h"

#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "ser/cli/synthetic.h"
#include "ser/common/checkpoint.h"
#include "ser/common/error.h"
#include "ser/common/run_config.h"
#include "ser/datasets/manifest.h"
#include "ser/fusion/score_table.h"
#include "ser/gcn/train.h"
#include "ser/hubert/train.h"
#include "ser/metrics/metrics.h"
#include "ser/textgraph/embedding.h"

namespace ser::cli {

namespace {

namespace fs = std::filesystem;

// The resolved configuration lands beside the outputs: <out>/config.txt
// for directory outputs, <out>.config for file outputs.
void save_config_for_dir(const common::RunConfig &rc, const std::string &out) {
  rc.save((fs::path(out) / "config.txt").string());
}

void save_config_for_file(const common::RunConfig &rc,
                          const std::string &out) {
  rc.save(out + ".config");
}

void report_build(const datasets::BuildReport &report) {
  std::printf("scanned=%d kept=%d skipped_label=%d skipped_unreadable=%d\n",
              report.scanned, report.kept, report.skipped_label,
              report.skipped_unreadable);
  for (const std::string &w : report.warnings)
    std::fprintf(stderr, "warning: %s\n", w.c_str());
}

struct PrepareRavdessArgs {
  std::string dir, out;
  bool all_classes = false;
  int test_actor_start = 21;
};

void cmd_prepare_ravdess(const PrepareRavdessArgs &args) {
  datasets::BuildOptions options;
  options.all_classes = args.all_classes;
  options.test_actor_start = args.test_actor_start;
  datasets::BuildReport report;
  const datasets::Manifest manifest =
      datasets::build_ravdess_manifest(args.dir, options, &report);
  datasets::write_manifest(manifest, args.out);
  report_build(report);

  common::RunConfig rc;
  rc.set("command", "prepare_ravdess");
  rc.set("dir", args.dir);
  rc.set("out", args.out);
  rc.set_bool("all_classes", options.all_classes);
  rc.set_int("test_actor_start", options.test_actor_start);
  save_config_for_file(rc, args.out);
}

struct PrepareIemocapArgs {
  std::string metadata, transcripts, audio_root, out;
  bool all_classes = false;
  bool merge_excited = true;
  int min_agreement = 2;
  int held_out_session = 5;
};

void cmd_prepare_iemocap(const PrepareIemocapArgs &args) {
  datasets::BuildOptions options;
  options.all_classes = args.all_classes;
  options.merge_excited = args.merge_excited;
  options.min_agreement = args.min_agreement;
  options.held_out_session = args.held_out_session;
  datasets::BuildReport report;
  const datasets::Manifest manifest = datasets::build_iemocap_manifest(
      args.metadata, args.transcripts, args.audio_root, options, &report);
  datasets::write_manifest(manifest, args.out);
  report_build(report);

  common::RunConfig rc;
  rc.set("command", "prepare_iemocap");
  rc.set("metadata", args.metadata);
  rc.set("transcripts", args.transcripts);
  rc.set("audio_root", args.audio_root);
  rc.set("out", args.out);
  rc.set_bool("all_classes", options.all_classes);
  rc.set_bool("merge_excited", options.merge_excited);
  rc.set_int("min_agreement", options.min_agreement);
  rc.set_int("held_out_session", options.held_out_session);
  save_config_for_file(rc, args.out);
}

struct PrepareSyntheticArgs {
  std::string out;
  uint64_t seed = 7;
  int per_class = 40;
  int test_per_class = 8;
};

void cmd_prepare_synthetic(const PrepareSyntheticArgs &args) {
  SyntheticOptions options;
  options.seed = args.seed;
  options.per_class = args.per_class;
  options.test_per_class = args.test_per_class;
  fs::create_directories(args.out);
  const datasets::Manifest manifest = generate_synthetic(args.out, options);
  std::printf("generated %zu utterances under %s\n", manifest.size(),
              args.out.c_str());

  common::RunConfig rc;
  rc.set("command", "prepare_synthetic");
  rc.set("out", args.out);
  rc.set_int("seed", static_cast<long long>(options.seed));
  rc.set_int("per_class", options.per_class);
  rc.set_int("test_per_class", options.test_per_class);
  save_config_for_dir(rc, args.out);
}

struct TrainGcnArgs {
  std::string manifest, embeddings, out;
  uint64_t seed = 7;
  int epochs = 45;
  int patience = 10;
  double lr = 0.01;
  int batch = 16;
  int hidden = 128;
  int degree = 2;
};

void cmd_train_gcn(const TrainGcnArgs &args) {
  fs::create_directories(args.out);
  const datasets::Manifest manifest = datasets::load_manifest(args.manifest);
  const textgraph::EmbeddingTable embeddings =
      textgraph::EmbeddingTable::load(args.embeddings);

  gcn::GcnConfig model_cfg;
  model_cfg.input_dim = embeddings.dim();
  model_cfg.hidden_dim = args.hidden;
  model_cfg.poly_degree = args.degree;
  gcn::TrainConfig train_cfg;
  train_cfg.max_epochs = args.epochs;
  train_cfg.patience = args.patience;
  train_cfg.learning_rate = args.lr;
  train_cfg.batch_size = args.batch;
  train_cfg.seed = args.seed;

  const gcn::GcnTrainResult result =
      gcn::train_gcn(manifest, embeddings, model_cfg, train_cfg);
  for (const gcn::EpochStats &e : result.history)
    std::printf("epoch %d: train_loss=%.6f train_acc=%.6f test_acc=%.6f\n",
                e.epoch, e.train_loss, e.train_acc, e.test_acc);
  std::printf("best epoch %d, test_acc=%.6f\n", result.best_epoch,
              result.history[result.best_epoch - 1].test_acc);

  common::save_checkpoint(result.model.to_checkpoint(args.seed),
                          (fs::path(args.out) / "checkpoint").string());
  fusion::write_score_table(result.test_scores,
                            (fs::path(args.out) / "scores.csv").string());
  gcn::write_history_csv(result.history,
                         (fs::path(args.out) / "history.csv").string());

  common::RunConfig rc;
  rc.set("command", "train_gcn");
  rc.set("manifest", args.manifest);
  rc.set("embeddings", args.embeddings);
  rc.set("out", args.out);
  rc.set_int("seed", static_cast<long long>(args.seed));
  rc.set_int("epochs", args.epochs);
  rc.set_int("patience", args.patience);
  rc.set_double("learning_rate", args.lr);
  rc.set_int("batch_size", args.batch);
  rc.set_int("hidden_dim", args.hidden);
  rc.set_int("poly_degree", args.degree);
  rc.set_int("input_dim", model_cfg.input_dim);
  save_config_for_dir(rc, args.out);
}

struct PretrainHubertArgs {
  std::string manifest, out;
  uint64_t seed = 7;
  int iterations = 2;
  int steps = 500;
  double lr = 1e-3;
  int k = 50;
  int span = 10;
  double coverage = 0.5;
  int model_dim = 64;
  int enc_layers = 4;
  int heads = 4;
  int ffn_dim = 256;
  int proj_dim = 64;
  bool positional = true;
};

void cmd_pretrain_hubert(const PretrainHubertArgs &args) {
  fs::create_directories(args.out);
  const datasets::Manifest manifest = datasets::load_manifest(args.manifest);

  hubert::PretrainConfig cfg;
  cfg.iterations = args.iterations;
  cfg.steps_per_iteration = args.steps;
  cfg.learning_rate = args.lr;
  cfg.k = args.k;
  cfg.mask.span_len = args.span;
  cfg.mask.target_coverage = args.coverage;
  cfg.encoder.model_dim = args.model_dim;
  cfg.encoder.layers = args.enc_layers;
  cfg.encoder.heads = args.heads;
  cfg.encoder.ffn_dim = args.ffn_dim;
  cfg.encoder.proj_dim = args.proj_dim;
  cfg.encoder.positional_encoding = args.positional;
  cfg.seed = args.seed;

  const hubert::PretrainResult result = pretrain_hubert(manifest, cfg);
  std::printf("pretrain: %zu steps, first loss=%.6f, last loss=%.6f\n",
              result.log.size(), result.log.front().loss,
              result.log.back().loss);

  common::save_checkpoint(
      result.model.to_checkpoint("hubert_pretrain", args.seed),
      (fs::path(args.out) / "checkpoint").string());
  hubert::write_pretrain_log_csv(
      result.log, (fs::path(args.out) / "pretrain_log.csv").string());

  common::RunConfig rc;
  rc.set("command", "pretrain_hubert");
  rc.set("manifest", args.manifest);
  rc.set("out", args.out);
  rc.set_int("seed", static_cast<long long>(args.seed));
  rc.set_int("iterations", args.iterations);
  rc.set_int("steps_per_iteration", args.steps);
  rc.set_double("learning_rate", args.lr);
  rc.set_int("k", args.k);
  rc.set_int("mask_span", args.span);
  rc.set_double("mask_coverage", args.coverage);
  rc.set_int("model_dim", args.model_dim);
  rc.set_int("encoder_layers", args.enc_layers);
  rc.set_int("heads", args.heads);
  rc.set_int("ffn_dim", args.ffn_dim);
  rc.set_int("proj_dim", args.proj_dim);
  rc.set_bool("positional_encoding", args.positional);
  save_config_for_dir(rc, args.out);
}

struct FinetuneHubertArgs {
  std::string manifest, pretrained, out;
  uint64_t seed = 7;
  int epochs = 12;
  double lr = 3e-4;
  int batch = 8;
};

void cmd_finetune_hubert(const FinetuneHubertArgs &args) {
  fs::create_directories(args.out);
  const datasets::Manifest manifest = datasets::load_manifest(args.manifest);
  const common::Checkpoint ckpt = common::load_checkpoint(args.pretrained);
  const hubert::HubertModel pretrained =
      hubert::HubertModel::from_checkpoint(ckpt);

  hubert::FinetuneConfig cfg;
  cfg.epochs = args.epochs;
  cfg.learning_rate = args.lr;
  cfg.batch_size = args.batch;
  cfg.seed = args.seed;

  const hubert::FinetuneResult result =
      finetune_hubert(pretrained, manifest, cfg);
  for (const hubert::FinetuneEpoch &e : result.history)
    std::printf("epoch %d: train_loss=%.6f train_acc=%.6f test_acc=%.6f\n",
                e.epoch, e.train_loss, e.train_acc, e.test_acc);

  common::save_checkpoint(
      result.model.to_checkpoint("hubert_classifier", args.seed),
      (fs::path(args.out) / "checkpoint").string());
  fusion::write_score_table(result.test_scores,
                            (fs::path(args.out) / "scores.csv").string());
  hubert::write_finetune_history_csv(
      result.history, (fs::path(args.out) / "history.csv").string());

  common::RunConfig rc;
  rc.set("command", "finetune_hubert");
  rc.set("manifest", args.manifest);
  rc.set("pretrained", args.pretrained);
  rc.set("out", args.out);
  rc.set_int("seed", static_cast<long long>(args.seed));
  rc.set_int("epochs", args.epochs);
  rc.set_double("learning_rate", args.lr);
  rc.set_int("batch_size", args.batch);
  save_config_for_dir(rc, args.out);
}

struct ScoreArgs {
  std::string checkpoint, manifest, embeddings, out;
};

void cmd_score(const ScoreArgs &args) {
  const common::Checkpoint ckpt = common::load_checkpoint(args.checkpoint);
  const datasets::Manifest manifest = datasets::load_manifest(args.manifest);
  fusion::ScoreTable table;
  if (ckpt.model_kind == "gcn") {
    if (args.embeddings.empty())
      throw DataError("score: gcn checkpoints need --embeddings");
    const gcn::GcnModel model = gcn::GcnModel::from_checkpoint(ckpt);
    table = gcn::score_gcn(model, manifest,
                           textgraph::EmbeddingTable::load(args.embeddings));
  } else if (ckpt.model_kind == "hubert_classifier") {
    const hubert::HubertModel model = hubert::HubertModel::from_checkpoint(ckpt);
    table = hubert::score_hubert(model, manifest);
  } else if (ckpt.model_kind == "hubert_pretrain") {
    throw DataError(
        "score: checkpoint holds a pretrained encoder, not a classifier; "
        "finetune it first");
  } else {
    throw DataError("score: unknown checkpoint kind \"" + ckpt.model_kind +
                    "\"");
  }
  fusion::write_score_table(table, args.out);
  std::printf("scored %zu rows\n", table.rows.size());

  common::RunConfig rc;
  rc.set("command", "score");
  rc.set("checkpoint", args.checkpoint);
  rc.set("manifest", args.manifest);
  if (!args.embeddings.empty()) rc.set("embeddings", args.embeddings);
  rc.set("out", args.out);
  save_config_for_file(rc, args.out);
}

struct FuseArgs {
  std::string a, b, out;
};

void cmd_fuse(const FuseArgs &args) {
  const fusion::ScoreTable a = fusion::load_score_table(args.a);
  const fusion::ScoreTable b = fusion::load_score_table(args.b);
  const fusion::ScoreTable fused = fusion::fuse_max(a, b);
  fusion::write_score_table(fused, args.out);
  std::printf("fused %zu rows\n", fused.rows.size());

  common::RunConfig rc;
  rc.set("command", "fuse");
  rc.set("a", args.a);
  rc.set("b", args.b);
  rc.set("out", args.out);
  save_config_for_file(rc, args.out);
}

struct EvaluateArgs {
  std::string scores, report, roc;
};

void cmd_evaluate(const EvaluateArgs &args) {
  const fusion::ScoreTable table = fusion::load_score_table(args.scores);
  const metrics::Evaluation eval = metrics::evaluate_scores(table);
  metrics::write_report_json(eval, args.report);
  metrics::write_roc_csv(eval, args.roc);
  std::printf("overall_accuracy=%.6f\n", eval.acc.overall);
  std::printf("balanced_accuracy=%.6f\n", eval.acc.balanced);

  common::RunConfig rc;
  rc.set("command", "evaluate");
  rc.set("scores", args.scores);
  rc.set("report", args.report);
  rc.set("roc", args.roc);
  save_config_for_file(rc, args.report);
}

}  // namespace

int run_cli(int argc, const char *const *argv) {
  CLI::App app{"ser-duo: dual-branch speech emotion recognition"};
  app.require_subcommand(1);

  CLI::App *prepare =
      app.add_subcommand("prepare", "Build a manifest or the toy corpus");
  prepare->require_subcommand(1);

  PrepareRavdessArgs rav;
  CLI::App *prep_rav = prepare->add_subcommand(
      "ravdess", "Scan a RAVDESS directory into a manifest CSV");
  prep_rav->add_option("--dir", rav.dir, "Corpus root")->required();
  prep_rav->add_option("--out", rav.out, "Manifest CSV path")->required();
  prep_rav->add_flag("--all-classes", rav.all_classes,
                     "Keep emotions outside the 4-class task");
  prep_rav->add_option("--test-actor-start", rav.test_actor_start,
                       "First actor id of the test split");

  PrepareIemocapArgs iem;
  CLI::App *prep_iem = prepare->add_subcommand(
      "iemocap", "Build a manifest from IEMOCAP metadata");
  prep_iem->add_option("--metadata", iem.metadata, "Metadata CSV")->required();
  prep_iem->add_option("--transcripts", iem.transcripts,
                       "Transcripts TSV (optional)");
  prep_iem->add_option("--audio-root", iem.audio_root,
                       "Base directory for relative audio paths")
      ->required();
  prep_iem->add_option("--out", iem.out, "Manifest CSV path")->required();
  prep_iem->add_flag("--all-classes", iem.all_classes,
                     "Keep emotions outside the 4-class task");
  prep_iem->add_flag("--merge-excited,!--no-merge-excited", iem.merge_excited,
                     "Fold 'exc' into happy");
  prep_iem->add_option("--min-agreement", iem.min_agreement,
                       "Minimum annotator agreement");
  prep_iem->add_option("--held-out-session", iem.held_out_session,
                       "Session used as the test split");

  PrepareSyntheticArgs syn;
  CLI::App *prep_syn = prepare->add_subcommand(
      "synthetic", "Generate the deterministic toy corpus");
  prep_syn->add_option("--out", syn.out, "Output directory")->required();
  prep_syn->add_option("--seed", syn.seed, "Corpus seed");
  prep_syn->add_option("--per-class", syn.per_class, "Utterances per class");
  prep_syn->add_option("--test-per-class", syn.test_per_class,
                       "Test utterances per class");

  CLI::App *train = app.add_subcommand("train", "Train a branch");
  train->require_subcommand(1);
  TrainGcnArgs tg;
  CLI::App *train_gcn_cmd =
      train->add_subcommand("gcn", "Train the text-graph branch");
  train_gcn_cmd->add_option("--manifest", tg.manifest, "Manifest CSV")
      ->required();
  train_gcn_cmd->add_option("--embeddings", tg.embeddings,
                            "Word vectors (GloVe text format)")
      ->required();
  train_gcn_cmd->add_option("--out", tg.out, "Output directory")->required();
  train_gcn_cmd->add_option("--seed", tg.seed, "Training seed");
  train_gcn_cmd->add_option("--epochs", tg.epochs, "Epoch cap");
  train_gcn_cmd->add_option("--patience", tg.patience,
                            "Early stopping patience");
  train_gcn_cmd->add_option("--lr", tg.lr, "Adam learning rate");
  train_gcn_cmd->add_option("--batch", tg.batch, "Batch size");
  train_gcn_cmd->add_option("--hidden", tg.hidden, "Hidden width");
  train_gcn_cmd->add_option("--degree", tg.degree,
                            "Polynomial filter degree");

  CLI::App *pretrain =
      app.add_subcommand("pretrain", "Self-supervised pretraining");
  pretrain->require_subcommand(1);
  PretrainHubertArgs ph;
  CLI::App *pre_hub = pretrain->add_subcommand(
      "hubert", "Masked unit prediction over the train split");
  pre_hub->add_option("--manifest", ph.manifest, "Manifest CSV")->required();
  pre_hub->add_option("--out", ph.out, "Output directory")->required();
  pre_hub->add_option("--seed", ph.seed, "Training seed");
  pre_hub->add_option("--iterations", ph.iterations,
                      "Clustering iterations");
  pre_hub->add_option("--steps", ph.steps, "Adam steps per iteration");
  pre_hub->add_option("--lr", ph.lr, "Adam learning rate");
  pre_hub->add_option("--k", ph.k, "Unit count");
  pre_hub->add_option("--span", ph.span, "Mask span length (frames)");
  pre_hub->add_option("--coverage", ph.coverage, "Mask target coverage");
  pre_hub->add_option("--model-dim", ph.model_dim, "Encoder width");
  pre_hub->add_option("--enc-layers", ph.enc_layers, "Encoder layers");
  pre_hub->add_option("--heads", ph.heads, "Attention heads");
  pre_hub->add_option("--ffn-dim", ph.ffn_dim, "Feed-forward width");
  pre_hub->add_option("--proj-dim", ph.proj_dim, "Unit projection width");
  pre_hub->add_flag("--positional,!--no-positional", ph.positional,
                    "Sinusoidal positional encoding");

  CLI::App *finetune =
      app.add_subcommand("finetune", "Supervised fine-tuning");
  finetune->require_subcommand(1);
  FinetuneHubertArgs fh;
  CLI::App *fin_hub = finetune->add_subcommand(
      "hubert", "Attach and train the emotion head");
  fin_hub->add_option("--manifest", fh.manifest, "Manifest CSV")->required();
  fin_hub->add_option("--pretrained", fh.pretrained,
                      "Pretrain checkpoint directory")
      ->required();
  fin_hub->add_option("--out", fh.out, "Output directory")->required();
  fin_hub->add_option("--seed", fh.seed, "Training seed");
  fin_hub->add_option("--epochs", fh.epochs, "Epoch count");
  fin_hub->add_option("--lr", fh.lr, "Adam learning rate");
  fin_hub->add_option("--batch", fh.batch, "Batch size");

  ScoreArgs sc;
  CLI::App *score =
      app.add_subcommand("score", "Score a manifest with a checkpoint");
  score->add_option("--checkpoint", sc.checkpoint, "Checkpoint directory")
      ->required();
  score->add_option("--manifest", sc.manifest, "Manifest CSV")->required();
  score->add_option("--embeddings", sc.embeddings,
                    "Word vectors (gcn checkpoints only)");
  score->add_option("--out", sc.out, "Score CSV path")->required();

  FuseArgs fu;
  CLI::App *fuse =
      app.add_subcommand("fuse", "Max-fuse two probability score tables");
  fuse->add_option("--a", fu.a, "First score CSV")->required();
  fuse->add_option("--b", fu.b, "Second score CSV")->required();
  fuse->add_option("--out", fu.out, "Fused CSV path")->required();

  EvaluateArgs ev;
  CLI::App *evaluate =
      app.add_subcommand("evaluate", "Metrics report for a score table");
  evaluate->add_option("--scores", ev.scores, "Score CSV")->required();
  evaluate->add_option("--report", ev.report, "JSON report path")->required();
  evaluate->add_option("--roc", ev.roc, "ROC points CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(prepare)) {
      if (prepare->got_subcommand(prep_rav)) cmd_prepare_ravdess(rav);
      if (prepare->got_subcommand(prep_iem)) cmd_prepare_iemocap(iem);
      if (prepare->got_subcommand(prep_syn)) cmd_prepare_synthetic(syn);
    } else if (app.got_subcommand(train)) {
      cmd_train_gcn(tg);
    } else if (app.got_subcommand(pretrain)) {
      cmd_pretrain_hubert(ph);
    } else if (app.got_subcommand(finetune)) {
      cmd_finetune_hubert(fh);
    } else if (app.got_subcommand(score)) {
      cmd_score(sc);
    } else if (app.got_subcommand(fuse)) {
      cmd_fuse(fu);
    } else if (app.got_subcommand(evaluate)) {
      cmd_evaluate(ev);
    }
    return kExitOk;
  } catch (const NumericError &e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumeric;
  } catch (const DataError &e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const StructuralError &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
}

}  // namespace ser::cli
