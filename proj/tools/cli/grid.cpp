#include "cli/grid.hpp"

#include <algorithm>
#include <limits>

#include <fmt/core.h>

namespace cmr::cli {

namespace {

double metric(const MetricsReport& m, int which) {
  switch (which) {
    case 0:
      return m.hits_at_1;
    case 1:
      return m.hits_at_10;
    case 2:
      return m.mrr;
    default:
      return m.mean_rank;
  }
}

}  // namespace

void normalize_grid(std::vector<GridCell>& cells) {
  for (int dir = 0; dir < 2; ++dir) {
    for (int which = 0; which < 4; ++which) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& c : cells) {
        if (!c.ok) continue;
        lo = std::min(lo, metric(c.metrics[dir], which));
        hi = std::max(hi, metric(c.metrics[dir], which));
      }
      for (auto& c : cells) {
        if (!c.ok) {
          c.normalized[dir][which] = 0.0;
          continue;
        }
        const double x = metric(c.metrics[dir], which);
        double v = 1.0;
        if (hi > lo) {
          v = which == 3 ? (hi - x) / (hi - lo) : (x - lo) / (hi - lo);
        }
        c.normalized[dir][which] = v;
      }
    }
    for (auto& c : cells) {
      const auto& n = c.normalized[dir];
      c.score[dir] = c.ok ? (n[0] + n[1] + n[2] + n[3]) / 4.0 : 0.0;
    }
  }
}

std::optional<std::size_t> best_cell(const std::vector<GridCell>& cells,
                                     Direction direction) {
  const int dir = direction == Direction::kTextToMol ? 0 : 1;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cells[i].ok) continue;
    if (!best || cells[i].score[dir] > cells[*best].score[dir]) best = i;
  }
  return best;
}

void write_grid_summary(std::ostream& out, const std::vector<GridCell>& cells) {
  out << "alpha\tbeta\tstatus";
  for (const char* d : {"t2m", "m2t"}) {
    out << fmt::format("\t{0}_hits@1\t{0}_hits@10\t{0}_mrr\t{0}_mean_rank\t{0}_score", d);
  }
  out << '\n';
  for (const auto& c : cells) {
    out << fmt::format("{:g}\t{:g}\t{}", c.alpha_percent, c.beta_percent,
                       c.ok ? "ok" : "failed");
    for (int dir = 0; dir < 2; ++dir) {
      if (c.ok) {
        const auto& m = c.metrics[dir];
        out << fmt::format("\t{:.6f}\t{:.6f}\t{:.6f}\t{:.4f}\t{:.6f}", m.hits_at_1,
                           m.hits_at_10, m.mrr, m.mean_rank, c.score[dir]);
      } else {
        out << "\t-\t-\t-\t-\t-";
      }
    }
    out << '\n';
  }
  for (auto dir : {Direction::kTextToMol, Direction::kMolToText}) {
    if (const auto b = best_cell(cells, dir)) {
      out << fmt::format("# best {} alpha={:g} beta={:g}\n", to_string(dir),
                         cells[*b].alpha_percent, cells[*b].beta_percent);
    }
  }
  for (const auto& c : cells) {
    if (!c.ok) {
      out << fmt::format("# failed alpha={:g} beta={:g}: {}\n", c.alpha_percent,
                         c.beta_percent, c.error);
    }
  }
}

}  // namespace cmr::cli
