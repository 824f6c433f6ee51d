#include "cmr/synthetic.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include <fmt/core.h>

#include "cmr/errors.hpp"

namespace cmr {

std::size_t SyntheticSpec::total() const {
  return std::accumulate(samples_per_cluster.begin(),
                         samples_per_cluster.end(), std::size_t{0});
}

void SyntheticSpec::validate() const {
  if (n_clusters < 1) throw ValidationError("n_clusters must be >= 1");
  if (samples_per_cluster.size() != n_clusters) {
    throw ValidationError(fmt::format(
        "samples_per_cluster has {} entries but n_clusters is {}",
        samples_per_cluster.size(), n_clusters));
  }
  for (std::size_t c = 0; c < n_clusters; ++c) {
    if (samples_per_cluster[c] < 1) {
      throw ValidationError(
          fmt::format("samples_per_cluster[{}] must be >= 1", c));
    }
  }
  if (dim_text < 1) throw ValidationError("dim_text must be >= 1");
  if (dim_molecule < 1) throw ValidationError("dim_molecule must be >= 1");
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
    throw ValidationError(fmt::format(
        "noise_scale must be finite and >= 0, got {}", noise_scale));
  }
  if (!(pair_coupling >= 0.0 && pair_coupling <= 1.0)) {
    throw ValidationError(fmt::format(
        "pair_coupling must be in [0, 1], got {}", pair_coupling));
  }
}

namespace {

using Rng = std::mt19937_64;

std::vector<double> normal_vector(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(dim);
  for (double& x : v) x = gauss(rng);
  return v;
}

std::vector<double> unit_vector(Rng& rng, std::size_t dim) {
  for (;;) {
    auto v = normal_vector(rng, dim);
    double sq = 0.0;
    for (double x : v) sq += x * x;
    if (sq > 1e-12) {
      const double inv = 1.0 / std::sqrt(sq);
      for (double& x : v) x *= inv;
      return v;
    }
  }
}

void append_normalized(std::vector<float>& out, const std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double inv = 1.0 / std::sqrt(sq);
  for (double x : v) out.push_back(static_cast<float>(x * inv));
}

}  // namespace

PairedDataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  std::vector<std::vector<double>> text_centers;
  std::vector<std::vector<double>> mol_centers;
  for (std::size_t c = 0; c < spec.n_clusters; ++c) {
    text_centers.push_back(unit_vector(rng, spec.dim_text));
    mol_centers.push_back(unit_vector(rng, spec.dim_molecule));
  }

  // Coupling map, row-major dim_molecule x dim_text.
  std::vector<double> coupling;
  if (spec.pair_coupling > 0.0) {
    std::normal_distribution<double> gauss(
        0.0, 1.0 / std::sqrt(static_cast<double>(spec.dim_text)));
    coupling.resize(spec.dim_molecule * spec.dim_text);
    for (double& x : coupling) x = gauss(rng);
  }
  const double fresh_weight =
      std::sqrt(1.0 - spec.pair_coupling * spec.pair_coupling);

  const std::size_t n = spec.total();
  std::vector<std::string> ids;
  std::vector<float> text;
  std::vector<float> mol;
  ids.reserve(n);
  text.reserve(n * spec.dim_text);
  mol.reserve(n * spec.dim_molecule);

  std::size_t row = 0;
  for (std::size_t c = 0; c < spec.n_clusters; ++c) {
    for (std::size_t s = 0; s < spec.samples_per_cluster[c]; ++s, ++row) {
      const auto g = normal_vector(rng, spec.dim_text);
      const auto fresh = normal_vector(rng, spec.dim_molecule);

      std::vector<double> t(text_centers[c]);
      for (std::size_t k = 0; k < spec.dim_text; ++k) {
        t[k] += spec.noise_scale * g[k];
      }
      std::vector<double> m(mol_centers[c]);
      for (std::size_t k = 0; k < spec.dim_molecule; ++k) {
        double h = fresh_weight * fresh[k];
        if (!coupling.empty()) {
          double mg = 0.0;
          for (std::size_t q = 0; q < spec.dim_text; ++q) {
            mg += coupling[k * spec.dim_text + q] * g[q];
          }
          h += spec.pair_coupling * mg;
        }
        m[k] += spec.noise_scale * h;
      }
      append_normalized(text, t);
      append_normalized(mol, m);
      ids.push_back(fmt::format("c{}-{:06}", c, row));
    }
  }

  return PairedDataset(std::move(ids),
                       EmbeddingTable(n, spec.dim_text, std::move(text)),
                       EmbeddingTable(n, spec.dim_molecule, std::move(mol)));
}

std::size_t cluster_of(const SyntheticSpec& spec, std::size_t row) {
  std::size_t start = 0;
  for (std::size_t c = 0; c < spec.samples_per_cluster.size(); ++c) {
    start += spec.samples_per_cluster[c];
    if (row < start) return c;
  }
  throw ArgumentError(fmt::format("row {} beyond synthetic layout", row));
}

SyntheticSpec desk_benchmark_spec(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n_clusters = 8;
  spec.samples_per_cluster = {100, 150, 200, 250, 250, 300, 350, 400};
  spec.dim_text = 300;
  spec.dim_molecule = 300;
  spec.noise_scale = 0.006;
  spec.pair_coupling = 1.0;
  spec.seed = seed;
  return spec;
}

}  // namespace cmr
