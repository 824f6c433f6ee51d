#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cmr/dataset.hpp"

namespace cmr {

// Which modalities enter the pair similarity. kBoth is the mean of the text
// and molecule cosines; the single-modality modes exist for ablation.
enum class Modality { kBoth, kTextOnly, kMoleculeOnly };

const char* to_string(Modality m);
Modality parse_modality(const std::string& s);  // "both" | "text" | "molecule"

// Dot product of two float rows, accumulated in double over four lanes
// (component k goes to lane k % 4) and combined as (l0 + l1) + (l2 + l3).
// Every similarity in the library goes through this routine, so blocked and
// naive evaluation agree bit for bit.
double dot64(std::span<const float> u, std::span<const float> v);

// dot/(|u||v|) clamped to [-1, 1]. Throws ArgumentError on length mismatch
// or a norm <= 1e-12.
double cosine(std::span<const float> u, std::span<const float> v);

double pair_similarity(const PairedDataset& ds, std::size_t i, std::size_t j,
                       Modality modality = Modality::kBoth);

struct CountOptions {
  std::size_t workers = 0;      // 0 = hardware concurrency
  std::size_t block_size = 128; // rows per tile edge
  Modality modality = Modality::kBoth;
};

// counts[i] = |{ j != i : pair_similarity(i, j) > sigma }|.
//
// Streams upper-triangular tiles of the pair space; nothing of size N x N is
// allocated. The result is identical for every worker count and block size.
std::vector<std::uint32_t> count_confusable(const PairedDataset& ds,
                                            double sigma,
                                            const CountOptions& opts = {});

struct DifficultyIndex {
  std::vector<std::uint32_t> counts;
  std::vector<std::size_t> order;  // easy-to-hard permutation
  double sigma = 0.99;

  std::size_t size() const noexcept { return counts.size(); }
  // 1-based position of sample i in `order`.
  std::vector<std::size_t> ranks() const;
};

// Stable nondecreasing sort of counts; ties fall back to the original index.
DifficultyIndex build_index(std::vector<std::uint32_t> counts, double sigma);

// Tab-separated text: two '#' header lines, a column line "id count rank",
// then one record per sample in dataset order.
void write_difficulty_report(const std::filesystem::path& path,
                             const std::vector<std::string>& ids,
                             const DifficultyIndex& index);

struct DifficultyReport {
  std::vector<std::string> ids;
  DifficultyIndex index;
};

DifficultyReport read_difficulty_report(const std::filesystem::path& path);

}  // namespace cmr
