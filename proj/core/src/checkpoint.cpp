#include "cmr/checkpoint.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/core.h>

#include "cmr/binary_io.hpp"
#include "cmr/errors.hpp"

namespace cmr {

void save_checkpoint(const ModelParams& params,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  }
  out.write(kCheckpointMagic, 4);
  binary::write_le<std::uint16_t>(out, kCheckpointVersion);
  binary::write_le<std::uint16_t>(out, 0);
  binary::write_le<std::uint64_t>(out, params.text_dim());
  binary::write_le<std::uint64_t>(out, params.mol_dim());
  binary::write_le<std::uint64_t>(out, params.proj_dim());
  // Matrix storage is row-major, so the raw blocks are already in file order.
  for (const auto& block : blocks(params)) {
    for (double v : block.values) binary::write_f64(out, v);
  }
  out.flush();
  if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  }
  char magic[4];
  std::uint16_t version = 0;
  std::uint16_t reserved = 0;
  std::uint64_t d_t = 0, d_m = 0, proj = 0;
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kCheckpointMagic)) {
    throw FormatError(fmt::format("'{}': bad checkpoint magic", path.string()));
  }
  if (!binary::read_le(in, version) || version != kCheckpointVersion) {
    throw FormatError(fmt::format("'{}': unsupported checkpoint version {}",
                                  path.string(), version));
  }
  if (!binary::read_le(in, reserved) || reserved != 0) {
    throw FormatError(fmt::format("'{}': reserved field must be 0",
                                  path.string()));
  }
  if (!binary::read_le(in, d_t) ||
      !binary::read_le(in, d_m) || !binary::read_le(in, proj)) {
    throw FormatError(fmt::format("'{}': truncated header", path.string()));
  }
  constexpr std::uint64_t kMaxDim = 1u << 20;
  if (d_t < 1 || d_m < 1 || proj < 1 || d_t > kMaxDim || d_m > kMaxDim ||
      proj > kMaxDim) {
    throw FormatError(fmt::format("'{}': implausible dims {} / {} / {}",
                                  path.string(), d_t, d_m, proj));
  }
  ModelParams params = ModelParams::zeros(d_t, d_m, proj);
  for (auto& block : blocks(params)) {
    for (double& v : block.values) {
      if (!binary::read_f64(in, v)) {
        throw FormatError(fmt::format("'{}': truncated block {}", path.string(),
                                      block.name));
      }
      if (!std::isfinite(v)) {
        throw ValidationError(fmt::format("'{}': non-finite value in block {}",
                                          path.string(), block.name));
      }
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError(fmt::format("'{}': trailing bytes after parameters",
                                  path.string()));
  }
  return params;
}

}  // namespace cmr
