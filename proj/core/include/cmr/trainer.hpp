#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cmr/config.hpp"
#include "cmr/dataset.hpp"
#include "cmr/difficulty.hpp"
#include "cmr/evaluation.hpp"
#include "cmr/model.hpp"

namespace cmr {

struct EpochRecord {
  std::int64_t epoch = 0;
  double lambda = 0.0;
  double gamma = 1.0;
  std::size_t active_count = 0;
  std::size_t batches = 0;
  double mean_loss = 0.0;         // mean unscaled batch loss
  double mean_scaled_loss = 0.0;  // gamma * mean_loss
  std::optional<std::array<MetricsReport, 2>> validation;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::array<MetricsReport, 2> final_validation{};
  std::uint64_t total_presentations = 0;
};

struct TrainResult {
  ModelParams params;
  TrainReport report;
  DifficultyIndex index;
};

// Instrumentation. on_batch sees every batch (training-set row indices)
// before its update is applied; on_gradient sees the unscaled and the
// intensity-scaled gradient handed to the optimizer.
struct TrainHooks {
  std::function<void(std::int64_t epoch, std::span<const std::size_t> batch)>
      on_batch;
  std::function<void(std::int64_t epoch, double gamma, const ModelParams& raw,
                     const ModelParams& scaled)>
      on_gradient;
};

// Quantifies difficulty on ds_train, then runs the curriculum.
TrainResult train(const PairedDataset& ds_train, const PairedDataset& ds_val,
                  const CurriculumConfig& cfg, const TrainHooks& hooks = {});

// Same loop over a precomputed difficulty index.
TrainResult train_with_index(const PairedDataset& ds_train,
                             const PairedDataset& ds_val,
                             const CurriculumConfig& cfg,
                             DifficultyIndex index,
                             const TrainHooks& hooks = {});

// Splits a shuffled active set into batches of batch_size; a trailing batch
// of one sample is merged into the previous batch.
std::vector<std::vector<std::size_t>> make_batches(
    std::span<const std::size_t> shuffled, std::size_t batch_size);

}  // namespace cmr
