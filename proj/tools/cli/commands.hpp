#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cli/grid.hpp"
#include "cli/manifest.hpp"
#include "cmr/config.hpp"
#include "cmr/dataset.hpp"
#include "cmr/difficulty.hpp"
#include "cmr/errors.hpp"
#include "cmr/evaluation.hpp"
#include "cmr/synthetic.hpp"

namespace cmr::cli {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitValidation = 2,  // argument, format, consistency, validation
  kExitIo = 3,
  kExitNumeric = 4,
  kExitInternal = 5,
};

int exit_code_for(ErrorKind kind);

// Entry point of the `cmr` binary.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

// Dataset file names written by `synth` under its output directory.
DatasetPaths synth_paths(const std::filesystem::path& dir, const std::string& split);

struct SynthArgs {
  SyntheticSpec spec;
  double val_fraction = 0.2;  // 0 writes a single "train" set
  std::filesystem::path out_dir;
};

struct SynthOutputs {
  DatasetPaths train;
  std::optional<DatasetPaths> val;
};

SynthOutputs cmd_synth(const SynthArgs& args, std::ostream& out);

DifficultyIndex cmd_quantify(const DatasetPaths& data, double sigma,
                             const CountOptions& opts,
                             const std::filesystem::path& report_path,
                             std::ostream& out);

void cmd_plan(const CurriculumConfig& cfg, std::size_t n, std::ostream& out);

struct TrainArgs {
  CurriculumConfig config;
  DatasetPaths train;
  DatasetPaths val;
  std::filesystem::path out_dir;
};

// Names of the files a run directory holds.
struct RunFiles {
  std::filesystem::path checkpoint, report, difficulty, manifest;
  static RunFiles in(const std::filesystem::path& dir);
};

// Trains and writes checkpoint, report, difficulty report and manifest into
// out_dir. A precomputed index for the same training set may be passed.
RunManifest cmd_train(const TrainArgs& args, std::ostream& out,
                      const DifficultyIndex* index = nullptr);

// Re-runs the training a manifest describes into a new directory.
RunManifest cmd_train_from_manifest(const std::filesystem::path& manifest,
                                    const std::filesystem::path& out_dir,
                                    std::ostream& out);

std::array<MetricsReport, 2> cmd_evaluate(
    const std::filesystem::path& checkpoint, const DatasetPaths& data,
    const std::optional<std::filesystem::path>& report_path, std::ostream& out);

struct GridArgs {
  CurriculumConfig base;
  std::vector<double> alphas_percent;
  std::vector<double> betas_percent;
  DatasetPaths train;
  DatasetPaths val;
  std::filesystem::path out_dir;
};

// One run directory per (alpha, beta) cell plus grid_summary.tsv. A failing
// cell is recorded as failed and the grid continues.
std::vector<GridCell> cmd_grid(const GridArgs& args, std::ostream& out);

}  // namespace cmr::cli
