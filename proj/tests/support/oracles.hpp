#pragma once

// Reference computations used only by tests. They deliberately avoid the
// library's optimized paths (tiling, threads, Eigen products).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "cmr/dataset.hpp"
#include "cmr/difficulty.hpp"
#include "cmr/model.hpp"

namespace cmr::testing {

// Plain O(N^2) double loop over every ordered pair.
inline std::vector<std::uint32_t> naive_counts(const PairedDataset& ds,
                                               double sigma,
                                               Modality m = Modality::kBoth) {
  const std::size_t n = ds.size();
  std::vector<std::uint32_t> counts(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double ct = cosine(ds.text().row(i), ds.text().row(j));
      const double cm = cosine(ds.molecule().row(i), ds.molecule().row(j));
      double s = 0.5 * (ct + cm);
      if (m == Modality::kTextOnly) s = ct;
      if (m == Modality::kMoleculeOnly) s = cm;
      if (s > sigma) ++counts[i];
    }
  }
  return counts;
}

// Rank via an explicit full sort of candidates: descending score, ties by
// ascending candidate index.
inline std::vector<std::size_t> sort_ranks(
    const std::vector<std::vector<double>>& scores) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> ranks(n);
  for (std::size_t q = 0; q < n; ++q) {
    std::vector<std::size_t> cand(n);
    std::iota(cand.begin(), cand.end(), 0);
    std::stable_sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
      return scores[q][a] > scores[q][b];
    });
    ranks[q] = static_cast<std::size_t>(
                   std::find(cand.begin(), cand.end(), q) - cand.begin()) + 1;
  }
  return ranks;
}

// Dataset of Gaussian rows, with each row optionally pulled towards one of a
// few anchors so that high-similarity pairs exist.
inline PairedDataset random_dataset(std::size_t n, std::size_t d_t,
                                    std::size_t d_m, std::uint64_t seed,
                                    double pull = 0.0, std::size_t anchors = 4) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto table = [&](std::size_t d) {
    std::vector<std::vector<double>> centers(anchors, std::vector<double>(d));
    for (auto& c : centers) for (double& x : c) x = g(rng);
    std::vector<float> v;
    v.reserve(n * d);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = centers[i % anchors];
      for (std::size_t k = 0; k < d; ++k) {
        v.push_back(static_cast<float>(pull * c[k] + g(rng)));
      }
    }
    return EmbeddingTable(n, d, std::move(v));
  };
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("r" + std::to_string(i));
  auto text = table(d_t);
  auto mol = table(d_m);
  return PairedDataset(std::move(ids), std::move(text), std::move(mol));
}

// Unique scratch directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("cmr-" + tag + "-" + std::to_string(rd()) + "-" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace cmr::testing
