#include "cmr/scheduler.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "cmr/errors.hpp"

namespace cmr {

void TrainerConfig::validate() const {
  if (proj_dim < 1) throw ValidationError("proj_dim must be >= 1");
  if (!(margin > 0.0) || !std::isfinite(margin)) {
    throw ValidationError(fmt::format("margin must be > 0, got {}", margin));
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError(
        fmt::format("learning_rate must be > 0, got {}", learning_rate));
  }
  if (batch_size < 2) {
    throw ValidationError(
        fmt::format("batch_size must be >= 2, got {}", batch_size));
  }
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0)) {
    throw ValidationError(fmt::format("adam_beta1 must be in [0, 1), got {}",
                                      adam_beta1));
  }
  if (!(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw ValidationError(fmt::format("adam_beta2 must be in [0, 1), got {}",
                                      adam_beta2));
  }
  if (!(adam_epsilon > 0.0)) {
    throw ValidationError(
        fmt::format("adam_epsilon must be > 0, got {}", adam_epsilon));
  }
}

void CurriculumConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError(fmt::format("alpha must be in [0, 1], got {}", alpha));
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ValidationError(fmt::format("beta must be >= 0, got {}", beta));
  }
  if (!(sigma > -1.0 && sigma <= 1.0)) {
    throw ValidationError(fmt::format("sigma must be in (-1, 1], got {}", sigma));
  }
  if (epochs < 1) {
    throw ValidationError(fmt::format("epochs must be >= 1, got {}", epochs));
  }
  trainer.validate();
}

CurriculumConfig CurriculumConfig::without_curriculum() const {
  CurriculumConfig cfg = *this;
  cfg.alpha = 1.0;
  cfg.beta = 0.0;
  cfg.curve = IntensityCurve::kConstantOne;
  return cfg;
}

double lambda_at(const CurriculumConfig& cfg, std::int64_t k) {
  if (k < 1 || k > cfg.epochs) {
    throw ArgumentError(
        fmt::format("epoch {} outside 1..{}", k, cfg.epochs));
  }
  const double lambda = cfg.alpha + cfg.beta * static_cast<double>(k);
  // alpha + beta*k can land an ulp under 1 at the saturating epoch.
  if (lambda >= 1.0 - 1e-12) return 1.0;
  return lambda;
}

std::size_t active_count(double lambda, std::size_t n) {
  if (n == 0) throw ArgumentError("active_count of an empty dataset");
  const double scaled = lambda * static_cast<double>(n);
  // Relative guard so that e.g. 0.61 * 100 = 60.999999999999993 floors to 61.
  const auto count = static_cast<std::size_t>(std::floor(scaled * (1.0 + 1e-12)));
  return std::clamp<std::size_t>(count, 1, n);
}

EpochPlan plan_epoch(const CurriculumConfig& cfg, const DifficultyIndex& index,
                     std::int64_t k) {
  if (index.order.size() != index.counts.size() || index.order.empty()) {
    throw ArgumentError("difficulty index is empty or inconsistent");
  }
  EpochPlan plan;
  plan.epoch = k;
  plan.lambda = lambda_at(cfg, k);
  plan.active_count = active_count(plan.lambda, index.size());
  plan.active_indices.assign(index.order.begin(),
                             index.order.begin() + plan.active_count);
  plan.gamma = gamma(cfg.curve, k);
  return plan;
}

std::vector<ScheduleRow> plan_schedule(const CurriculumConfig& cfg,
                                       std::size_t n) {
  std::vector<ScheduleRow> rows;
  rows.reserve(static_cast<std::size_t>(cfg.epochs));
  for (std::int64_t k = 1; k <= cfg.epochs; ++k) {
    ScheduleRow row;
    row.epoch = k;
    row.lambda = lambda_at(cfg, k);
    row.active_count = active_count(row.lambda, n);
    row.gamma = gamma(cfg.curve, k);
    rows.push_back(row);
  }
  return rows;
}

std::uint64_t total_presentations(const CurriculumConfig& cfg, std::size_t n) {
  std::uint64_t total = 0;
  for (const auto& row : plan_schedule(cfg, n)) total += row.active_count;
  return total;
}

double usage_ratio(const CurriculumConfig& cfg, std::size_t n) {
  return static_cast<double>(total_presentations(cfg, n)) /
         (static_cast<double>(cfg.epochs) * static_cast<double>(n));
}

}  // namespace cmr
