#include "cmr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_set>

#include <fmt/core.h>

#include "cmr/binary_io.hpp"
#include "cmr/errors.hpp"

namespace cmr {

EmbeddingTable::EmbeddingTable(std::size_t count, std::size_t dim,
                               std::vector<float> values)
    : count_(count), dim_(dim), values_(std::move(values)) {
  if (count_ == 0 || dim_ == 0) {
    throw ValidationError(
        fmt::format("embedding table must be non-empty (count={}, dim={})",
                    count_, dim_));
  }
  if (values_.size() != count_ * dim_) {
    throw ConsistencyError(fmt::format(
        "embedding table holds {} values, expected {} x {}", values_.size(),
        count_, dim_));
  }
  for (std::size_t i = 0; i < count_; ++i) {
    double sq = 0.0;
    for (float v : row(i)) {
      if (!std::isfinite(v)) {
        throw ValidationError(
            fmt::format("row {} has a non-finite component", i),
            static_cast<long long>(i));
      }
      sq += static_cast<double>(v) * static_cast<double>(v);
    }
    if (!(std::sqrt(sq) > kMinRowNorm)) {
      throw ValidationError(fmt::format("row {} has zero norm", i),
                            static_cast<long long>(i));
    }
  }
}

PairedDataset::PairedDataset(std::vector<std::string> ids, EmbeddingTable text,
                             EmbeddingTable molecule)
    : ids_(std::move(ids)), text_(std::move(text)),
      molecule_(std::move(molecule)) {
  if (text_.count() != molecule_.count() || text_.count() != ids_.size()) {
    throw ConsistencyError(fmt::format(
        "row counts disagree: {} ids, {} text rows, {} molecule rows",
        ids_.size(), text_.count(), molecule_.count()));
  }
  std::unordered_set<std::string> seen;
  seen.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!seen.insert(ids_[i]).second) {
      throw ValidationError(
          fmt::format("duplicate sample id '{}' at row {}", ids_[i], i),
          static_cast<long long>(i));
    }
  }
}

namespace {

EmbeddingTable gather(const EmbeddingTable& t,
                      std::span<const std::size_t> indices) {
  std::vector<float> values;
  values.reserve(indices.size() * t.dim());
  for (std::size_t i : indices) {
    auto r = t.row(i);
    values.insert(values.end(), r.begin(), r.end());
  }
  return EmbeddingTable(indices.size(), t.dim(), std::move(values));
}

}  // namespace

PairedDataset PairedDataset::subset(std::span<const std::size_t> indices) const {
  std::vector<std::string> ids;
  ids.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) {
      throw ArgumentError(fmt::format("subset index {} out of range", i));
    }
    ids.push_back(ids_[i]);
  }
  return PairedDataset(std::move(ids), gather(text_, indices),
                       gather(molecule_, indices));
}

void save_table(const EmbeddingTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  }
  out.write(kTableMagic, 4);
  binary::write_le<std::uint16_t>(out, kTableVersion);
  binary::write_le<std::uint16_t>(out, 0);
  binary::write_le<std::uint64_t>(out, table.count());
  binary::write_le<std::uint64_t>(out, table.dim());
  for (float v : table.values()) binary::write_f32(out, v);
  out.flush();
  if (!out) {
    throw IoError(fmt::format("write to '{}' failed", path.string()));
  }
}

EmbeddingTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  }
  char magic[4];
  std::uint16_t version = 0;
  std::uint16_t reserved = 0;
  std::uint64_t count = 0;
  std::uint64_t dim = 0;
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kTableMagic)) {
    throw FormatError(fmt::format("'{}': bad magic", path.string()));
  }
  if (!binary::read_le(in, version) || version != kTableVersion) {
    throw FormatError(fmt::format("'{}': unsupported version {}",
                                  path.string(), version));
  }
  if (!binary::read_le(in, reserved) || reserved != 0) {
    throw FormatError(fmt::format("'{}': reserved field must be 0",
                                  path.string()));
  }
  if (!binary::read_le(in, count) || !binary::read_le(in, dim)) {
    throw FormatError(fmt::format("'{}': truncated header", path.string()));
  }
  // Bound the allocation by what the file can actually hold.
  const auto header_end = in.tellg();
  in.seekg(0, std::ios::end);
  const auto payload = static_cast<std::uint64_t>(in.tellg() - header_end);
  in.seekg(header_end);
  if (dim != 0 && count > payload / 4 / dim) {
    throw FormatError(fmt::format("'{}': header declares {} x {} but payload "
                                  "has {} bytes",
                                  path.string(), count, dim, payload));
  }
  if (payload != count * dim * 4) {
    throw FormatError(fmt::format("'{}': payload is {} bytes, expected {}",
                                  path.string(), payload, count * dim * 4));
  }
  std::vector<float> values(count * dim);
  for (float& v : values) {
    if (!binary::read_f32(in, v)) {
      throw FormatError(fmt::format("'{}': truncated payload", path.string()));
    }
  }
  return EmbeddingTable(count, dim, std::move(values));
}

void save_manifest(const std::vector<std::string>& ids,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  }
  for (const auto& id : ids) {
    if (id.empty() || id.find_first_of("\r\n") != std::string::npos) {
      throw ValidationError(fmt::format("sample id '{}' is not a valid "
                                        "manifest line", id));
    }
    out << id << '\n';
  }
  out.flush();
  if (!out) {
    throw IoError(fmt::format("write to '{}' failed", path.string()));
  }
}

std::vector<std::string> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  }
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      throw FormatError(fmt::format("'{}': empty id on line {}", path.string(),
                                    ids.size() + 1));
    }
    ids.push_back(line);
  }
  return ids;
}

void save_dataset(const PairedDataset& ds, const DatasetPaths& paths) {
  save_table(ds.text(), paths.text);
  save_table(ds.molecule(), paths.molecule);
  save_manifest(ds.ids(), paths.manifest);
}

PairedDataset load_dataset(const DatasetPaths& paths) {
  auto text = load_table(paths.text);
  auto molecule = load_table(paths.molecule);
  auto ids = load_manifest(paths.manifest);
  return PairedDataset(std::move(ids), std::move(text), std::move(molecule));
}

std::pair<PairedDataset, PairedDataset> split_dataset(const PairedDataset& ds,
                                                      double val_fraction,
                                                      std::uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw ArgumentError(
        fmt::format("val_fraction must be in (0, 1), got {}", val_fraction));
  }
  const std::size_t n = ds.size();
  const auto n_val = static_cast<std::size_t>(
      std::llround(val_fraction * static_cast<double>(n)));
  if (n_val == 0 || n_val >= n) {
    throw ArgumentError(fmt::format(
        "split of {} rows with fraction {} leaves an empty part", n,
        val_fraction));
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::size_t> val(perm.begin(), perm.begin() + n_val);
  std::vector<std::size_t> train(perm.begin() + n_val, perm.end());
  std::sort(val.begin(), val.end());
  std::sort(train.begin(), train.end());
  return {ds.subset(train), ds.subset(val)};
}

}  // namespace cmr
