#pragma once

#include <cstdint>

#include "cmr/config.hpp"
#include "cmr/model.hpp"

namespace cmr {

struct OptimizerState {
  ModelParams first_moment;
  ModelParams second_moment;
  std::int64_t step = 0;

  static OptimizerState for_params(const ModelParams& params);
};

// One bias-corrected Adam update in place. Throws NumericError naming the
// block if any gradient is non-finite; nothing is modified in that case.
void adam_step(ModelParams& params, const ModelParams& grads,
               OptimizerState& state, const TrainerConfig& cfg);

}  // namespace cmr
