#pragma once

#include <cstdint>
#include <vector>

#include "cmr/dataset.hpp"

namespace cmr {

// Clustered paired data with controllable confusability.
//
// Each cluster has a text and a molecule center on the unit sphere. Sample i
// of cluster c gets text = normalize(center_t + noise_scale * g_i) and
// molecule = normalize(center_m + noise_scale * h_i), with g_i standard normal.
// h_i = pair_coupling * M g_i + sqrt(1 - pair_coupling^2) * g'_i where M is a
// fixed random dim_molecule x dim_text map with N(0, 1/dim_text) entries and
// g'_i is an independent standard normal draw. pair_coupling = 0 makes the
// two modalities' noise independent; 1 makes it a linear function of the
// text noise, so individual pairs are recoverable by a linear model.
struct SyntheticSpec {
  std::size_t n_clusters = 1;
  std::vector<std::size_t> samples_per_cluster{1};
  std::size_t dim_text = 1;
  std::size_t dim_molecule = 1;
  double noise_scale = 0.0;
  double pair_coupling = 0.0;
  std::uint64_t seed = 0;

  std::size_t total() const;
  void validate() const;  // throws ValidationError naming the field
};

// Rows are emitted cluster by cluster; ids are "c<cluster>-<row>".
PairedDataset generate_synthetic(const SyntheticSpec& spec);

// Cluster of row `row` under the layout generate_synthetic uses.
std::size_t cluster_of(const SyntheticSpec& spec, std::size_t row);

// The 2000-pair, 8-cluster desk-scale benchmark.
SyntheticSpec desk_benchmark_spec(std::uint64_t seed);

}  // namespace cmr
