#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cmr/evaluation.hpp"

namespace cmr::cli {

struct GridCell {
  double alpha_percent = 0.0;
  double beta_percent = 0.0;
  bool ok = false;
  std::string error;
  std::array<MetricsReport, 2> metrics{};  // text_to_mol, mol_to_text

  // Filled by normalize_grid, per direction: normalized Hits@1, Hits@10,
  // MRR, inverted Mean Rank, and their mean.
  std::array<std::array<double, 4>, 2> normalized{};
  std::array<double, 2> score{};
};

// Max-min normalization over the successful cells, per direction and metric:
// (x - min) / (max - min) for Hits@1, Hits@10 and MRR, (max - x) / (max - min)
// for Mean Rank, then score = mean of the four. A metric on which all cells
// tie normalizes to 1. Failed cells keep zero scores.
void normalize_grid(std::vector<GridCell>& cells);

// Index of the best-scoring successful cell for a direction.
std::optional<std::size_t> best_cell(const std::vector<GridCell>& cells,
                                     Direction direction);

void write_grid_summary(std::ostream& out, const std::vector<GridCell>& cells);

}  // namespace cmr::cli
