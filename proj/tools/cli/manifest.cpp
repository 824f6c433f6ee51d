#include "cli/manifest.hpp"

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>

#include <fmt/core.h>

#include "cli/config_file.hpp"
#include "cmr/errors.hpp"

namespace cmr::cli {

std::uint64_t file_fingerprint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

namespace {

std::array<const std::filesystem::path*, 6> input_paths(const RunManifest& m) {
  return {&m.train.text, &m.train.molecule, &m.train.manifest,
          &m.val.text,   &m.val.molecule,   &m.val.manifest};
}

constexpr const char* kInputKeys[6] = {"train.text", "train.molecule",
                                       "train.ids",  "val.text",
                                       "val.molecule", "val.ids"};

}  // namespace

void RunManifest::fingerprint_inputs() {
  const auto paths = input_paths(*this);
  for (int i = 0; i < 6; ++i) fingerprints[i] = file_fingerprint(*paths[i]);
}

void RunManifest::verify_inputs() const {
  const auto paths = input_paths(*this);
  for (int i = 0; i < 6; ++i) {
    if (file_fingerprint(*paths[i]) != fingerprints[i]) {
      throw ConsistencyError(fmt::format(
          "input '{}' ({}) changed since the manifest was written",
          paths[i]->string(), kInputKeys[i]));
    }
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  }
  out << "# cmr run manifest v1\n";
  write_config(out, m.config, "config.");
  const auto paths = input_paths(m);
  for (int i = 0; i < 6; ++i) {
    out << kInputKeys[i] << " = " << paths[i]->string() << '\n';
    out << kInputKeys[i] << ".fnv1a64 = " << fmt::format("{:016x}", m.fingerprints[i])
        << '\n';
  }
  out << "output.checkpoint = " << m.checkpoint.string() << '\n';
  out << "output.report = " << m.report.string() << '\n';
  out << "output.difficulty = " << m.difficulty.string() << '\n';
  out << "created = " << m.created << '\n';
  out.flush();
  if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

RunManifest read_manifest(const std::filesystem::path& path) {
  const KeyValues kv = read_key_values(path);
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      throw FormatError(fmt::format("'{}': missing key '{}'", path.string(), key));
    }
    return it->second;
  };
  RunManifest m;
  apply_config(m.config, kv, "config.");
  std::filesystem::path* paths[6] = {&m.train.text, &m.train.molecule,
                                     &m.train.manifest, &m.val.text,
                                     &m.val.molecule, &m.val.manifest};
  for (int i = 0; i < 6; ++i) {
    *paths[i] = get(kInputKeys[i]);
    const auto& hex = get(std::string(kInputKeys[i]) + ".fnv1a64");
    try {
      std::size_t used = 0;
      m.fingerprints[i] = std::stoull(hex, &used, 16);
      if (used != hex.size()) throw std::invalid_argument(hex);
    } catch (const std::exception&) {
      throw FormatError(fmt::format("'{}': bad fingerprint '{}'", path.string(), hex));
    }
  }
  m.checkpoint = get("output.checkpoint");
  m.report = get("output.report");
  m.difficulty = get("output.difficulty");
  m.created = get("created");
  return m;
}

}  // namespace cmr::cli
