#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "cmr/config.hpp"
#include "cmr/dataset.hpp"

namespace cmr::cli {

// FNV-1a 64 over the file's bytes.
std::uint64_t file_fingerprint(const std::filesystem::path& path);

// Everything needed to repeat a training run.
struct RunManifest {
  CurriculumConfig config;
  DatasetPaths train;
  DatasetPaths val;
  // Fingerprints of the six dataset files: train text/molecule/ids, then val.
  std::uint64_t fingerprints[6] = {};
  std::filesystem::path checkpoint;
  std::filesystem::path report;
  std::filesystem::path difficulty;
  std::string created;  // UTC, ISO-8601

  void fingerprint_inputs();
  // Throws ConsistencyError if any input file changed since fingerprinting.
  void verify_inputs() const;
};

void write_manifest(const RunManifest& m, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

std::string utc_timestamp();

}  // namespace cmr::cli
