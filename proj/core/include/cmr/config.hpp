#pragma once

#include <cstddef>
#include <cstdint>

#include "cmr/difficulty.hpp"
#include "cmr/intensity.hpp"

namespace cmr {

struct TrainerConfig {
  std::size_t proj_dim = 300;
  double margin = 0.2;
  double learning_rate = 1e-4;
  std::size_t batch_size = 32;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;
  // Validation metrics are recorded after every epoch when set; they never
  // drive early stopping.
  bool eval_every_epoch = true;

  void validate() const;
  bool operator==(const TrainerConfig&) const = default;
};

// Alpha and beta are fractions here (0.40, 0.03); the CLI takes percents.
struct CurriculumConfig {
  double alpha = 0.40;
  double beta = 0.03;
  double sigma = 0.99;
  std::int64_t epochs = 60;
  IntensityCurve curve = IntensityCurve::kRational;
  Modality difficulty_modality = Modality::kBoth;
  std::size_t workers = 0;  // similarity kernel threads, 0 = all cores
  TrainerConfig trainer;

  void validate() const;
  bool operator==(const CurriculumConfig&) const = default;

  // alpha = 1, beta = 0, intensity off.
  CurriculumConfig without_curriculum() const;
};

}  // namespace cmr
