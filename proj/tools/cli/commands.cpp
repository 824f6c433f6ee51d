#include "cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "cli/config_file.hpp"
#include "cli/reports.hpp"
#include "cmr/checkpoint.hpp"
#include "cmr/errors.hpp"
#include "cmr/scheduler.hpp"
#include "cmr/trainer.hpp"

namespace cmr::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kArgument:
    case ErrorKind::kFormat:
    case ErrorKind::kConsistency:
    case ErrorKind::kValidation:
      return kExitValidation;
    case ErrorKind::kIo:
      return kExitIo;
    case ErrorKind::kNumeric:
      return kExitNumeric;
  }
  return kExitInternal;
}

DatasetPaths synth_paths(const fs::path& dir, const std::string& split) {
  return {dir / (split + ".text.cmre"), dir / (split + ".mol.cmre"),
          dir / (split + ".ids")};
}

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError(fmt::format("cannot create directory '{}': {}", dir.string(),
                              ec.message()));
  }
}

DatasetPaths absolute(const DatasetPaths& p) {
  return {fs::absolute(p.text), fs::absolute(p.molecule), fs::absolute(p.manifest)};
}

}  // namespace

SynthOutputs cmd_synth(const SynthArgs& args, std::ostream& out) {
  args.spec.validate();
  ensure_dir(args.out_dir);
  const PairedDataset ds = generate_synthetic(args.spec);
  SynthOutputs outputs;
  outputs.train = synth_paths(args.out_dir, "train");
  if (args.val_fraction > 0.0) {
    auto [train, val] = split_dataset(ds, args.val_fraction, args.spec.seed);
    outputs.val = synth_paths(args.out_dir, "val");
    save_dataset(train, outputs.train);
    save_dataset(val, *outputs.val);
    out << fmt::format("train={} val={}\n", train.size(), val.size());
  } else {
    save_dataset(ds, outputs.train);
    out << fmt::format("train={}\n", ds.size());
  }

  std::ostringstream spec;
  spec << "# cmr synthetic dataset v1\n";
  spec << "n_clusters = " << args.spec.n_clusters << '\n';
  spec << "samples_per_cluster = ";
  for (std::size_t c = 0; c < args.spec.samples_per_cluster.size(); ++c) {
    spec << (c ? "," : "") << args.spec.samples_per_cluster[c];
  }
  spec << '\n';
  spec << "dim_text = " << args.spec.dim_text << '\n';
  spec << "dim_molecule = " << args.spec.dim_molecule << '\n';
  spec << fmt::format("noise_scale = {:.17g}\n", args.spec.noise_scale);
  spec << fmt::format("pair_coupling = {:.17g}\n", args.spec.pair_coupling);
  spec << "seed = " << args.spec.seed << '\n';
  spec << fmt::format("val_fraction = {:.17g}\n", args.val_fraction);
  write_text_file(args.out_dir / "synth_manifest.txt", spec.str());
  return outputs;
}

DifficultyIndex cmd_quantify(const DatasetPaths& data, double sigma,
                             const CountOptions& opts, const fs::path& report_path,
                             std::ostream& out) {
  const PairedDataset ds = load_dataset(data);
  auto index = build_index(count_confusable(ds, sigma, opts), sigma);
  write_difficulty_report(report_path, ds.ids(), index);
  const auto [lo, hi] = std::minmax_element(index.counts.begin(), index.counts.end());
  double mean = 0.0;
  for (auto c : index.counts) mean += c;
  mean /= static_cast<double>(index.size());
  out << fmt::format("samples={} sigma={:g} modality={} min={} max={} mean={:.4f}\n",
                     index.size(), sigma, to_string(opts.modality), *lo, *hi, mean);
  return index;
}

void cmd_plan(const CurriculumConfig& cfg, std::size_t n, std::ostream& out) {
  cfg.validate();
  if (n == 0) throw ArgumentError("plan needs n >= 1");
  write_schedule(out, cfg, n);
}

RunFiles RunFiles::in(const fs::path& dir) {
  return {dir / "checkpoint.cmrm", dir / "train_report.txt", dir / "difficulty.tsv",
          dir / "manifest.txt"};
}

RunManifest cmd_train(const TrainArgs& args, std::ostream& out,
                      const DifficultyIndex* index) {
  args.config.validate();
  ensure_dir(args.out_dir);
  const RunFiles files = RunFiles::in(args.out_dir);

  RunManifest manifest;
  manifest.config = args.config;
  manifest.train = absolute(args.train);
  manifest.val = absolute(args.val);
  manifest.fingerprint_inputs();
  manifest.checkpoint = fs::absolute(files.checkpoint);
  manifest.report = fs::absolute(files.report);
  manifest.difficulty = fs::absolute(files.difficulty);

  const PairedDataset train_ds = load_dataset(args.train);
  const PairedDataset val_ds = load_dataset(args.val);

  TrainResult result;
  if (index != nullptr) {
    result = train_with_index(train_ds, val_ds, args.config, *index);
  } else {
    result = train(train_ds, val_ds, args.config);
  }

  save_checkpoint(result.params, files.checkpoint);
  std::ostringstream report;
  write_train_report(report, result.report);
  write_text_file(files.report, report.str());
  write_difficulty_report(files.difficulty, train_ds.ids(), result.index);
  manifest.created = utc_timestamp();
  write_manifest(manifest, files.manifest);

  write_metrics(out, result.report.final_validation);
  out << fmt::format("total_presentations={} run_dir={}\n",
                     result.report.total_presentations, args.out_dir.string());
  return manifest;
}

RunManifest cmd_train_from_manifest(const fs::path& manifest_path,
                                    const fs::path& out_dir, std::ostream& out) {
  const RunManifest m = read_manifest(manifest_path);
  m.verify_inputs();
  TrainArgs args;
  args.config = m.config;
  args.train = m.train;
  args.val = m.val;
  args.out_dir = out_dir;
  return cmd_train(args, out);
}

std::array<MetricsReport, 2> cmd_evaluate(const fs::path& checkpoint,
                                          const DatasetPaths& data,
                                          const std::optional<fs::path>& report_path,
                                          std::ostream& out) {
  const ModelParams params = load_checkpoint(checkpoint);
  const PairedDataset ds = load_dataset(data);
  if (ds.text().dim() != params.text_dim() || ds.molecule().dim() != params.mol_dim()) {
    throw ConsistencyError(fmt::format(
        "checkpoint expects dims {} / {}, dataset has {} / {}", params.text_dim(),
        params.mol_dim(), ds.text().dim(), ds.molecule().dim()));
  }
  const auto metrics = evaluate(params, ds);
  std::ostringstream body;
  body << "# cmr evaluation report v1\n";
  write_metrics(body, metrics);
  if (report_path) write_text_file(*report_path, body.str());
  write_metrics(out, metrics);
  return metrics;
}

std::vector<GridCell> cmd_grid(const GridArgs& args, std::ostream& out) {
  if (args.alphas_percent.empty() || args.betas_percent.empty()) {
    throw ArgumentError("grid needs at least one alpha and one beta");
  }
  ensure_dir(args.out_dir);

  // Difficulty depends only on the training set and sigma; share it.
  std::optional<DifficultyIndex> index;
  try {
    const PairedDataset ds = load_dataset(args.train);
    CountOptions opts;
    opts.workers = args.base.workers;
    opts.modality = args.base.difficulty_modality;
    index = build_index(count_confusable(ds, args.base.sigma, opts), args.base.sigma);
  } catch (const Error&) {
    index.reset();  // every cell will then surface the error itself
  }

  std::vector<GridCell> cells;
  for (double a : args.alphas_percent) {
    for (double b : args.betas_percent) {
      GridCell cell;
      cell.alpha_percent = a;
      cell.beta_percent = b;
      const fs::path dir = args.out_dir / fmt::format("alpha{:g}_beta{:g}", a, b);
      try {
        TrainArgs targs;
        targs.config = args.base;
        targs.config.alpha = percent_to_fraction(a);
        targs.config.beta = percent_to_fraction(b);
        targs.train = args.train;
        targs.val = args.val;
        targs.out_dir = dir;
        std::ostringstream sink;
        const RunManifest m = cmd_train(targs, sink, index ? &*index : nullptr);
        cell.metrics = cmd_evaluate(m.checkpoint, args.val, dir / "evaluation.txt", sink);
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
      out << fmt::format("cell alpha={:g} beta={:g} status={}\n", a, b,
                         cell.ok ? "ok" : "failed");
      cells.push_back(std::move(cell));
    }
  }
  normalize_grid(cells);
  std::ostringstream summary;
  write_grid_summary(summary, cells);
  write_text_file(args.out_dir / "grid_summary.tsv", summary.str());
  out << summary.str();
  return cells;
}

namespace {

// Config flags shared by plan, train and grid. Precedence: built-in
// defaults, then --config, then individual flags.
struct ConfigFlags {
  std::optional<std::string> config_path;
  std::optional<double> alpha, beta, sigma, lr, margin;
  std::optional<std::int64_t> epochs;
  std::optional<std::string> curve, modality;
  std::optional<std::size_t> batch_size, proj_dim, workers;
  std::optional<std::uint64_t> seed;
  bool no_curriculum = false;

  void add_to(CLI::App* app) {
    app->add_option("--config", config_path, "Key-value config file");
    app->add_option("--alpha", alpha, "Initial sample proportion, percent");
    app->add_option("--beta", beta, "Per-epoch growth, percent");
    app->add_option("--sigma", sigma, "Similarity threshold");
    app->add_option("--epochs", epochs, "Number of epochs");
    app->add_option("--curve", curve, "Intensity curve: sigmoid | rational | off");
    app->add_option("--difficulty-modality", modality,
                    "Similarity used for difficulty: both | text | molecule");
    app->add_option("--batch-size", batch_size, "Minibatch size");
    app->add_option("--lr", lr, "Adam learning rate");
    app->add_option("--margin", margin, "Triplet margin");
    app->add_option("--proj-dim", proj_dim, "Shared-space dimension");
    app->add_option("--workers", workers, "Similarity kernel threads (0 = all)");
    app->add_option("--seed", seed, "Trainer seed");
    app->add_flag("--no-curriculum", no_curriculum,
                  "alpha = 100, beta = 0, intensity off");
  }

  CurriculumConfig resolve() const {
    CurriculumConfig cfg;
    if (config_path) cfg = load_config(*config_path);
    if (alpha) cfg.alpha = percent_to_fraction(*alpha);
    if (beta) cfg.beta = percent_to_fraction(*beta);
    if (sigma) cfg.sigma = *sigma;
    if (epochs) cfg.epochs = *epochs;
    if (curve) cfg.curve = parse_curve(*curve);
    if (modality) cfg.difficulty_modality = parse_modality(*modality);
    if (batch_size) cfg.trainer.batch_size = *batch_size;
    if (lr) cfg.trainer.learning_rate = *lr;
    if (margin) cfg.trainer.margin = *margin;
    if (proj_dim) cfg.trainer.proj_dim = *proj_dim;
    if (workers) cfg.workers = *workers;
    if (seed) cfg.trainer.seed = *seed;
    if (no_curriculum) cfg = cfg.without_curriculum();
    cfg.validate();
    return cfg;
  }
};

void add_dataset_flags(CLI::App* app, DatasetPaths& p, const std::string& prefix,
                       bool required) {
  auto* t = app->add_option("--" + prefix + "text", p.text, "Text embedding table");
  auto* m = app->add_option("--" + prefix + "mol", p.molecule,
                            "Molecule embedding table");
  auto* i = app->add_option("--" + prefix + "ids", p.manifest, "Sample id manifest");
  if (required) {
    t->required();
    m->required();
    i->required();
  }
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ValidationError(fmt::format("per-cluster: '{}' is not a size", item));
    }
  }
  return out;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curriculum learning for cross-modal text-molecule retrieval"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a clustered synthetic dataset");
  std::size_t clusters = 8;
  std::string per_cluster = "250";
  SynthArgs synth_args;
  synth_args.spec.dim_text = 300;
  synth_args.spec.dim_molecule = 300;
  synth_args.spec.noise_scale = 0.006;
  synth_args.spec.pair_coupling = 1.0;
  std::string synth_out;
  synth->add_option("--clusters", clusters, "Number of clusters");
  synth->add_option("--per-cluster", per_cluster,
                    "Samples per cluster: one value or a comma list");
  synth->add_option("--dim-text", synth_args.spec.dim_text);
  synth->add_option("--dim-mol", synth_args.spec.dim_molecule);
  synth->add_option("--noise", synth_args.spec.noise_scale, "Noise scale (>= 0)");
  synth->add_option("--coupling", synth_args.spec.pair_coupling,
                    "Share of molecule noise that is a linear map of text noise");
  synth->add_option("--seed", synth_args.spec.seed);
  synth->add_option("--val-fraction", synth_args.val_fraction,
                    "Fraction held out as validation (0 = none)");
  synth->add_option("--out", synth_out, "Output directory")->required();

  // quantify
  auto* quantify = app.add_subcommand("quantify", "Count confusable samples");
  DatasetPaths q_data;
  double q_sigma = 0.99;
  CountOptions q_opts;
  std::string q_modality = "both";
  std::string q_out;
  add_dataset_flags(quantify, q_data, "", true);
  quantify->add_option("--sigma", q_sigma, "Similarity threshold");
  quantify->add_option("--workers", q_opts.workers, "Threads (0 = all)");
  quantify->add_option("--block-size", q_opts.block_size, "Tile edge in rows");
  quantify->add_option("--difficulty-modality", q_modality, "both | text | molecule");
  quantify->add_option("--out", q_out, "Difficulty report path")->required();

  // plan
  auto* plan = app.add_subcommand("plan", "Print the per-epoch schedule");
  ConfigFlags plan_flags;
  std::size_t plan_n = 0;
  plan_flags.add_to(plan);
  plan->add_option("--n", plan_n, "Training set size")->required();

  // train
  auto* train_cmd = app.add_subcommand("train", "Train with the curriculum");
  ConfigFlags train_flags;
  TrainArgs train_args;
  std::string train_out;
  std::optional<std::string> from_manifest;
  train_flags.add_to(train_cmd);
  add_dataset_flags(train_cmd, train_args.train, "", false);
  add_dataset_flags(train_cmd, train_args.val, "val-", false);
  train_cmd->add_option("--manifest", from_manifest,
                        "Repeat the run a manifest describes");
  train_cmd->add_option("--out", train_out, "Run directory")->required();

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Retrieval metrics of a checkpoint");
  std::string e_ckpt;
  DatasetPaths e_data;
  std::optional<std::string> e_out;
  eval_cmd->add_option("--checkpoint", e_ckpt)->required();
  add_dataset_flags(eval_cmd, e_data, "", true);
  eval_cmd->add_option("--out", e_out, "Report path");

  // grid
  auto* grid = app.add_subcommand("grid", "Train and evaluate over an alpha x beta grid");
  ConfigFlags grid_flags;
  GridArgs grid_args;
  std::string grid_out;
  grid_flags.add_to(grid);
  grid->add_option("--alphas", grid_args.alphas_percent, "Alpha values, percent")
      ->delimiter(',')
      ->required();
  grid->add_option("--betas", grid_args.betas_percent, "Beta values, percent")
      ->delimiter(',')
      ->required();
  add_dataset_flags(grid, grid_args.train, "", true);
  add_dataset_flags(grid, grid_args.val, "val-", true);
  grid->add_option("--out", grid_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*synth) {
      const auto sizes = parse_sizes(per_cluster);
      synth_args.spec.n_clusters = clusters;
      if (sizes.size() == 1) {
        synth_args.spec.samples_per_cluster.assign(clusters, sizes[0]);
      } else {
        synth_args.spec.samples_per_cluster = sizes;
      }
      synth_args.out_dir = synth_out;
      cmd_synth(synth_args, out);
    } else if (*quantify) {
      q_opts.modality = parse_modality(q_modality);
      cmd_quantify(q_data, q_sigma, q_opts, q_out, out);
    } else if (*plan) {
      cmd_plan(plan_flags.resolve(), plan_n, out);
    } else if (*train_cmd) {
      if (from_manifest) {
        cmd_train_from_manifest(*from_manifest, train_out, out);
      } else {
        for (const auto* p : {&train_args.train.text, &train_args.train.molecule,
                              &train_args.train.manifest, &train_args.val.text,
                              &train_args.val.molecule, &train_args.val.manifest}) {
          if (p->empty()) {
            throw ArgumentError(
                "train needs --text --mol --ids --val-text --val-mol --val-ids "
                "or --manifest");
          }
        }
        train_args.config = train_flags.resolve();
        train_args.out_dir = train_out;
        cmd_train(train_args, out);
      }
    } else if (*eval_cmd) {
      std::optional<fs::path> report;
      if (e_out) report = *e_out;
      cmd_evaluate(e_ckpt, e_data, report, out);
    } else if (*grid) {
      grid_args.base = grid_flags.resolve();
      grid_args.out_dir = grid_out;
      cmd_grid(grid_args, out);
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace cmr::cli
