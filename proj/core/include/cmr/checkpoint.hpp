#pragma once

#include <cstdint>
#include <filesystem>

#include "cmr/model.hpp"

namespace cmr {

// "CMRM", u16 version = 1, u16 reserved = 0, u64 text dim, u64 molecule dim,
// u64 proj dim, then w_text, b_text, w_mol, b_mol as little-endian f64,
// matrices row-major.
inline constexpr char kCheckpointMagic[4] = {'C', 'M', 'R', 'M'};
inline constexpr std::uint16_t kCheckpointVersion = 1;

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace cmr
