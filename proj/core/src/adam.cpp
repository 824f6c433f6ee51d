#include "cmr/adam.hpp"

#include <cmath>

#include <fmt/core.h>

#include "cmr/errors.hpp"

namespace cmr {

OptimizerState OptimizerState::for_params(const ModelParams& params) {
  return {params.zeros_like(), params.zeros_like(), 0};
}

void adam_step(ModelParams& params, const ModelParams& grads,
               OptimizerState& state, const TrainerConfig& cfg) {
  auto p_blocks = blocks(params);
  const auto g_blocks = blocks(grads);
  auto m_blocks = blocks(state.first_moment);
  auto v_blocks = blocks(state.second_moment);

  for (std::size_t b = 0; b < p_blocks.size(); ++b) {
    if (g_blocks[b].values.size() != p_blocks[b].values.size() ||
        m_blocks[b].values.size() != p_blocks[b].values.size()) {
      throw ArgumentError(fmt::format("shape mismatch in block {}",
                                      p_blocks[b].name));
    }
    for (double g : g_blocks[b].values) {
      if (!std::isfinite(g)) {
        throw NumericError(fmt::format("non-finite gradient in block {}",
                                       g_blocks[b].name));
      }
    }
  }

  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(cfg.adam_beta1, t);
  const double c2 = 1.0 - std::pow(cfg.adam_beta2, t);

  for (std::size_t b = 0; b < p_blocks.size(); ++b) {
    auto p = p_blocks[b].values;
    auto g = g_blocks[b].values;
    auto m = m_blocks[b].values;
    auto v = v_blocks[b].values;
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * g[i];
      v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * g[i] * g[i];
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      p[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_epsilon);
    }
  }
}

}  // namespace cmr
