#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>

#include "cmr/config.hpp"

namespace cmr::cli {

// Flat "key = value" text, '#' starts a comment. Keys:
//   alpha, beta            percent form (40 -> 0.40)
//   alpha_fraction, beta_fraction
//   sigma, epochs, curve, difficulty_modality, workers
//   proj_dim, margin, lr, batch_size, adam_beta1, adam_beta2, adam_epsilon,
//   seed, eval_every_epoch
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in, const std::string& origin);
KeyValues read_key_values(const std::filesystem::path& path);

// Applies one key; throws ValidationError on an unknown key or bad value.
void apply_config_key(CurriculumConfig& cfg, const std::string& key,
                      const std::string& value);

// Applies every key in `kv` whose name is a config key (optionally with
// `prefix` stripped first); other keys are ignored only when a prefix is
// given.
void apply_config(CurriculumConfig& cfg, const KeyValues& kv,
                  const std::string& prefix = "");

CurriculumConfig load_config(const std::filesystem::path& path);

// Writes every field, reals with 17 significant digits, fractions for alpha
// and beta, so that reading back reproduces cfg exactly.
void write_config(std::ostream& out, const CurriculumConfig& cfg,
                  const std::string& prefix = "");

double percent_to_fraction(double percent);

}  // namespace cmr::cli
