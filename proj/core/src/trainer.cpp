#include "cmr/trainer.hpp"

#include <algorithm>
#include <random>

#include <fmt/core.h>

#include "cmr/adam.hpp"
#include "cmr/errors.hpp"
#include "cmr/intensity.hpp"
#include "cmr/scheduler.hpp"
#include "cmr/triplet.hpp"

namespace cmr {

std::vector<std::vector<std::size_t>> make_batches(
    std::span<const std::size_t> shuffled, std::size_t batch_size) {
  if (batch_size < 2) throw ArgumentError("batch_size must be >= 2");
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < shuffled.size(); start += batch_size) {
    const std::size_t end = std::min(shuffled.size(), start + batch_size);
    batches.emplace_back(shuffled.begin() + start, shuffled.begin() + end);
  }
  if (batches.size() >= 2 && batches.back().size() == 1) {
    batches[batches.size() - 2].push_back(batches.back().front());
    batches.pop_back();
  }
  return batches;
}

TrainResult train(const PairedDataset& ds_train, const PairedDataset& ds_val,
                  const CurriculumConfig& cfg, const TrainHooks& hooks) {
  cfg.validate();
  CountOptions opts;
  opts.workers = cfg.workers;
  opts.modality = cfg.difficulty_modality;
  auto counts = count_confusable(ds_train, cfg.sigma, opts);
  return train_with_index(ds_train, ds_val, cfg,
                          build_index(std::move(counts), cfg.sigma), hooks);
}

TrainResult train_with_index(const PairedDataset& ds_train,
                             const PairedDataset& ds_val,
                             const CurriculumConfig& cfg, DifficultyIndex index,
                             const TrainHooks& hooks) {
  cfg.validate();
  if (index.size() != ds_train.size()) {
    throw ConsistencyError(fmt::format(
        "difficulty index covers {} samples, training set has {}",
        index.size(), ds_train.size()));
  }
  if (ds_val.text().dim() != ds_train.text().dim() ||
      ds_val.molecule().dim() != ds_train.molecule().dim()) {
    throw ConsistencyError("validation and training embedding dims differ");
  }
  const TrainerConfig& tc = cfg.trainer;

  TrainResult result;
  result.params = init_model(tc, ds_train.text().dim(), ds_train.molecule().dim());
  OptimizerState opt = OptimizerState::for_params(result.params);
  std::mt19937_64 shuffle_rng(tc.seed ^ 0x9e3779b97f4a7c15ULL);

  for (std::int64_t k = 1; k <= cfg.epochs; ++k) {
    const EpochPlan plan = plan_epoch(cfg, index, k);

    std::vector<std::size_t> order = plan.active_indices;
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    EpochRecord rec;
    rec.epoch = k;
    rec.lambda = plan.lambda;
    rec.gamma = plan.gamma;
    rec.active_count = plan.active_count;

    double loss_sum = 0.0;
    // A single admitted sample has no in-batch negative; nothing to learn.
    if (order.size() >= 2) {
      for (const auto& batch : make_batches(order, tc.batch_size)) {
        if (hooks.on_batch) hooks.on_batch(k, batch);
        const Matrix text = gather_rows(ds_train.text(), batch);
        const Matrix mol = gather_rows(ds_train.molecule(), batch);
        TripletResult tr = triplet_loss_batch(text, mol, result.params, tc.margin);
        scale_loss(plan.gamma, tr.loss);  // validates gamma and the loss
        ModelParams grads = tr.grads;
        for (auto& block : blocks(grads)) {
          for (double& g : block.values) g *= plan.gamma;
        }
        if (hooks.on_gradient) hooks.on_gradient(k, plan.gamma, tr.grads, grads);
        adam_step(result.params, grads, opt, tc);
        loss_sum += tr.loss;
        ++rec.batches;
      }
    }
    if (rec.batches > 0) {
      rec.mean_loss = loss_sum / static_cast<double>(rec.batches);
      rec.mean_scaled_loss = scale_loss(plan.gamma, rec.mean_loss);
    }
    result.report.total_presentations += plan.active_count;
    if (tc.eval_every_epoch || k == cfg.epochs) {
      rec.validation = evaluate(result.params, ds_val);
    }
    result.report.epochs.push_back(std::move(rec));
  }
  result.report.final_validation = *result.report.epochs.back().validation;
  result.index = std::move(index);
  return result;
}

}  // namespace cmr
