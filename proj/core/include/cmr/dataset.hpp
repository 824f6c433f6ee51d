#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace cmr {

// Row-major N x d table of 32-bit embedding components. Immutable once
// constructed; every row is finite with Euclidean norm > kMinRowNorm.
class EmbeddingTable {
 public:
  static constexpr double kMinRowNorm = 1e-12;

  EmbeddingTable(std::size_t count, std::size_t dim, std::vector<float> values);

  std::size_t count() const noexcept { return count_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const float> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<const float> values() const noexcept { return values_; }

  bool operator==(const EmbeddingTable&) const = default;

 private:
  std::size_t count_;
  std::size_t dim_;
  std::vector<float> values_;
};

// Aligned text/molecule tables. Row i of both tables is the pair z_i.
class PairedDataset {
 public:
  PairedDataset(std::vector<std::string> ids, EmbeddingTable text,
                EmbeddingTable molecule);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const EmbeddingTable& text() const noexcept { return text_; }
  const EmbeddingTable& molecule() const noexcept { return molecule_; }

  // Rows picked by `indices`, in that order.
  PairedDataset subset(std::span<const std::size_t> indices) const;

  bool operator==(const PairedDataset&) const = default;

 private:
  std::vector<std::string> ids_;
  EmbeddingTable text_;
  EmbeddingTable molecule_;
};

struct DatasetPaths {
  std::filesystem::path text;
  std::filesystem::path molecule;
  std::filesystem::path manifest;
};

// Binary table file: "CMRE", u16 version = 1, u16 reserved = 0, u64 count,
// u64 dim, then count*dim little-endian IEEE-754 floats, row-major.
inline constexpr char kTableMagic[4] = {'C', 'M', 'R', 'E'};
inline constexpr std::uint16_t kTableVersion = 1;

void save_table(const EmbeddingTable& table, const std::filesystem::path& path);
EmbeddingTable load_table(const std::filesystem::path& path);

// Manifest: UTF-8, one id per line.
void save_manifest(const std::vector<std::string>& ids,
                   const std::filesystem::path& path);
std::vector<std::string> load_manifest(const std::filesystem::path& path);

void save_dataset(const PairedDataset& ds, const DatasetPaths& paths);
PairedDataset load_dataset(const DatasetPaths& paths);

// Deterministic split into (train, validation) by a seeded shuffle; the
// validation part gets round(val_fraction * N) rows, both parts keep the
// original relative order.
std::pair<PairedDataset, PairedDataset> split_dataset(const PairedDataset& ds,
                                                      double val_fraction,
                                                      std::uint64_t seed);

}  // namespace cmr
