#include "cmr/difficulty.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

#include <fmt/core.h>

#include "cmr/errors.hpp"

namespace cmr {

const char* to_string(Modality m) {
  switch (m) {
    case Modality::kBoth:
      return "both";
    case Modality::kTextOnly:
      return "text";
    case Modality::kMoleculeOnly:
      return "molecule";
  }
  return "both";
}

Modality parse_modality(const std::string& s) {
  if (s == "both") return Modality::kBoth;
  if (s == "text") return Modality::kTextOnly;
  if (s == "molecule") return Modality::kMoleculeOnly;
  throw ArgumentError(fmt::format(
      "unknown modality '{}' (expected both, text or molecule)", s));
}

namespace {

template <typename T>
double dot_lanes(const T* u, const T* v, std::size_t n) {
  double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    l0 += static_cast<double>(u[k]) * static_cast<double>(v[k]);
    l1 += static_cast<double>(u[k + 1]) * static_cast<double>(v[k + 1]);
    l2 += static_cast<double>(u[k + 2]) * static_cast<double>(v[k + 2]);
    l3 += static_cast<double>(u[k + 3]) * static_cast<double>(v[k + 3]);
  }
  if (k < n) l0 += static_cast<double>(u[k]) * static_cast<double>(v[k]);
  if (k + 1 < n) l1 += static_cast<double>(u[k + 1]) * static_cast<double>(v[k + 1]);
  if (k + 2 < n) l2 += static_cast<double>(u[k + 2]) * static_cast<double>(v[k + 2]);
  return (l0 + l1) + (l2 + l3);
}

inline double clamp_unit(double c) { return std::clamp(c, -1.0, 1.0); }

void check_sigma(double sigma) {
  if (!(sigma > -1.0 && sigma <= 1.0)) {
    throw ArgumentError(fmt::format("sigma must be in (-1, 1], got {}", sigma));
  }
}

// One table widened to double with precomputed row norms.
struct WideTable {
  std::size_t dim = 0;
  std::vector<double> values;
  std::vector<double> norms;

  explicit WideTable(const EmbeddingTable& t) : dim(t.dim()) {
    values.assign(t.values().begin(), t.values().end());
    norms.resize(t.count());
    for (std::size_t i = 0; i < t.count(); ++i) {
      const double* r = row(i);
      norms[i] = std::sqrt(dot_lanes(r, r, dim));
    }
  }

  const double* row(std::size_t i) const { return values.data() + i * dim; }

  double cosine(std::size_t i, std::size_t j) const {
    return clamp_unit(dot_lanes(row(i), row(j), dim) / (norms[i] * norms[j]));
  }
};

}  // namespace

double dot64(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    throw ArgumentError(fmt::format("dot of vectors with lengths {} and {}",
                                    u.size(), v.size()));
  }
  return dot_lanes(u.data(), v.data(), u.size());
}

double cosine(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    throw ArgumentError(fmt::format("cosine of vectors with lengths {} and {}",
                                    u.size(), v.size()));
  }
  const double nu = std::sqrt(dot_lanes(u.data(), u.data(), u.size()));
  const double nv = std::sqrt(dot_lanes(v.data(), v.data(), v.size()));
  if (!(nu > EmbeddingTable::kMinRowNorm) ||
      !(nv > EmbeddingTable::kMinRowNorm)) {
    throw ArgumentError("cosine of a near-zero vector is undefined");
  }
  return clamp_unit(dot_lanes(u.data(), v.data(), u.size()) / (nu * nv));
}

double pair_similarity(const PairedDataset& ds, std::size_t i, std::size_t j,
                       Modality modality) {
  if (i >= ds.size() || j >= ds.size()) {
    throw ArgumentError(fmt::format("pair ({}, {}) out of range for {} samples",
                                    i, j, ds.size()));
  }
  switch (modality) {
    case Modality::kTextOnly:
      return cosine(ds.text().row(i), ds.text().row(j));
    case Modality::kMoleculeOnly:
      return cosine(ds.molecule().row(i), ds.molecule().row(j));
    case Modality::kBoth:
      break;
  }
  return 0.5 * (cosine(ds.text().row(i), ds.text().row(j)) +
                cosine(ds.molecule().row(i), ds.molecule().row(j)));
}

std::vector<std::uint32_t> count_confusable(const PairedDataset& ds,
                                            double sigma,
                                            const CountOptions& opts) {
  check_sigma(sigma);
  const std::size_t n = ds.size();
  const std::size_t block = std::max<std::size_t>(1, opts.block_size);
  std::size_t workers = opts.workers;
  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }

  const bool use_text = opts.modality != Modality::kMoleculeOnly;
  const bool use_mol = opts.modality != Modality::kTextOnly;
  std::optional<WideTable> text;
  std::optional<WideTable> mol;
  if (use_text) text.emplace(ds.text());
  if (use_mol) mol.emplace(ds.molecule());

  // With both modalities, 0.5 * (ct + cm) <= 0.5 * (ct + 1), so a text
  // cosine below 2*sigma - 1 (less a rounding guard) settles the pair.
  const double text_prune = 2.0 * sigma - 1.0 - 1e-9;

  const std::size_t n_blocks = (n + block - 1) / block;
  const std::size_t n_tiles = n_blocks * (n_blocks + 1) / 2;

  auto similar = [&](std::size_t i, std::size_t j) {
    switch (opts.modality) {
      case Modality::kTextOnly:
        return text->cosine(i, j) > sigma;
      case Modality::kMoleculeOnly:
        return mol->cosine(i, j) > sigma;
      case Modality::kBoth:
        break;
    }
    const double ct = text->cosine(i, j);
    if (ct < text_prune) return false;
    return 0.5 * (ct + mol->cosine(i, j)) > sigma;
  };

  std::atomic<std::size_t> next_tile{0};
  std::vector<std::vector<std::uint32_t>> partial(
      workers, std::vector<std::uint32_t>(n, 0));

  auto run = [&](std::size_t w) {
    auto& local = partial[w];
    for (;;) {
      std::size_t t = next_tile.fetch_add(1, std::memory_order_relaxed);
      if (t >= n_tiles) return;
      // Tile t -> (bi, bj) with bi <= bj, row-major over the upper triangle.
      std::size_t bi = 0;
      std::size_t row_len = n_blocks;
      while (t >= row_len) {
        t -= row_len;
        ++bi;
        --row_len;
      }
      const std::size_t bj = bi + t;
      const std::size_t i_end = std::min(n, (bi + 1) * block);
      const std::size_t j_end = std::min(n, (bj + 1) * block);
      for (std::size_t i = bi * block; i < i_end; ++i) {
        const std::size_t j_begin = bi == bj ? i + 1 : bj * block;
        for (std::size_t j = j_begin; j < j_end; ++j) {
          if (similar(i, j)) {
            ++local[i];
            ++local[j];
          }
        }
      }
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  std::vector<std::uint32_t> counts(n, 0);
  for (const auto& local : partial) {
    for (std::size_t i = 0; i < n; ++i) counts[i] += local[i];
  }
  return counts;
}

std::vector<std::size_t> DifficultyIndex::ranks() const {
  std::vector<std::size_t> r(order.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) r[order[pos]] = pos + 1;
  return r;
}

DifficultyIndex build_index(std::vector<std::uint32_t> counts, double sigma) {
  if (counts.empty()) throw ArgumentError("cannot index an empty count list");
  DifficultyIndex index;
  index.order.resize(counts.size());
  std::iota(index.order.begin(), index.order.end(), 0);
  std::stable_sort(index.order.begin(), index.order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return counts[a] < counts[b];
                   });
  index.counts = std::move(counts);
  index.sigma = sigma;
  return index;
}

void write_difficulty_report(const std::filesystem::path& path,
                             const std::vector<std::string>& ids,
                             const DifficultyIndex& index) {
  if (ids.size() != index.size()) {
    throw ConsistencyError(fmt::format(
        "{} ids for a difficulty index of {} samples", ids.size(),
        index.size()));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  }
  const auto ranks = index.ranks();
  out << "# cmr difficulty report v1\n";
  out << fmt::format("# sigma={:.17g} n={}\n", index.sigma, index.size());
  out << "id\tcount\trank\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << fmt::format("{}\t{}\t{}\n", ids[i], index.counts[i], ranks[i]);
  }
  out.flush();
  if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

DifficultyReport read_difficulty_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  }
  std::string line;
  if (!std::getline(in, line) || line != "# cmr difficulty report v1") {
    throw FormatError(fmt::format("'{}': not a difficulty report", path.string()));
  }
  double sigma = 0.0;
  std::size_t n = 0;
  if (!std::getline(in, line) ||
      std::sscanf(line.c_str(), "# sigma=%lg n=%zu", &sigma, &n) != 2) {
    throw FormatError(fmt::format("'{}': bad parameter line", path.string()));
  }
  if (!std::getline(in, line) || line != "id\tcount\trank") {
    throw FormatError(fmt::format("'{}': bad column line", path.string()));
  }
  DifficultyReport report;
  report.index.sigma = sigma;
  std::vector<std::size_t> ranks;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string id;
    std::uint64_t count = 0;
    std::size_t rank = 0;
    if (!std::getline(fields, id, '\t') || !(fields >> count >> rank)) {
      throw FormatError(fmt::format("'{}': malformed record '{}'",
                                    path.string(), line));
    }
    report.ids.push_back(id);
    report.index.counts.push_back(static_cast<std::uint32_t>(count));
    ranks.push_back(rank);
  }
  if (report.ids.size() != n) {
    throw ConsistencyError(fmt::format("'{}': header says {} records, found {}",
                                       path.string(), n, report.ids.size()));
  }
  report.index.order.assign(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (ranks[i] < 1 || ranks[i] > n || report.index.order[ranks[i] - 1] != n) {
      throw ConsistencyError(fmt::format(
          "'{}': rank column is not a permutation", path.string()));
    }
    report.index.order[ranks[i] - 1] = i;
  }
  for (std::size_t a = 1; a < n; ++a) {
    const auto prev = report.index.order[a - 1];
    const auto cur = report.index.order[a];
    const auto cp = report.index.counts[prev];
    const auto cc = report.index.counts[cur];
    if (cp > cc || (cp == cc && prev > cur)) {
      throw ConsistencyError(fmt::format(
          "'{}': ranks do not follow the easy-to-hard order", path.string()));
    }
  }
  return report;
}

}  // namespace cmr
