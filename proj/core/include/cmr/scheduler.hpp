#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cmr/config.hpp"
#include "cmr/difficulty.hpp"

namespace cmr {

// Fraction of the easy-to-hard order admitted at 1-based epoch k:
// min(1, alpha + beta * k).
double lambda_at(const CurriculumConfig& cfg, std::int64_t k);

// max(1, floor(lambda * n)).
std::size_t active_count(double lambda, std::size_t n);

struct EpochPlan {
  std::int64_t epoch = 0;
  double lambda = 0.0;
  std::size_t active_count = 0;
  std::vector<std::size_t> active_indices;  // prefix of the difficulty order
  double gamma = 1.0;
};

EpochPlan plan_epoch(const CurriculumConfig& cfg, const DifficultyIndex& index,
                     std::int64_t k);

// Per-epoch row of a schedule, without the index lists.
struct ScheduleRow {
  std::int64_t epoch = 0;
  double lambda = 0.0;
  std::size_t active_count = 0;
  double gamma = 1.0;
};

std::vector<ScheduleRow> plan_schedule(const CurriculumConfig& cfg,
                                       std::size_t n);

// Sum over epochs of active_count.
std::uint64_t total_presentations(const CurriculumConfig& cfg, std::size_t n);

// total_presentations / (epochs * n).
double usage_ratio(const CurriculumConfig& cfg, std::size_t n);

}  // namespace cmr
