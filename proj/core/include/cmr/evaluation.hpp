#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cmr/dataset.hpp"
#include "cmr/model.hpp"

namespace cmr {

enum class Direction { kTextToMol, kMolToText };

const char* to_string(Direction d);  // "text_to_mol" | "mol_to_text"

// Rank of the ground-truth candidate for each query, 1-based.
struct RankList {
  std::vector<std::size_t> ranks;
};

// scores(q, c) is the score of candidate c for query q; the ground truth of
// query q is candidate q. rank_q = 1 + #{c != q : s_qc > s_qq}
//                                    + #{c < q : s_qc == s_qq}.
RankList rank_from_scores(const Matrix& scores);

// Cosine scores in the shared space for all N x N (query, candidate) pairs.
Matrix retrieval_scores(const ModelParams& model, const PairedDataset& ds,
                        Direction direction);

RankList rank_queries(const ModelParams& model, const PairedDataset& ds,
                      Direction direction);

double hits_at_k(const RankList& ranks, std::size_t k);
double mrr(const RankList& ranks);
double mean_rank(const RankList& ranks);

struct MetricsReport {
  Direction direction = Direction::kTextToMol;
  double hits_at_1 = 0.0;
  double hits_at_10 = 0.0;
  double mrr = 0.0;
  double mean_rank = 0.0;
  std::size_t query_count = 0;

  bool operator==(const MetricsReport&) const = default;
};

MetricsReport make_report(const RankList& ranks, Direction direction);

// Text-to-molecule first, then molecule-to-text.
std::array<MetricsReport, 2> evaluate(const ModelParams& model,
                                      const PairedDataset& ds);

}  // namespace cmr
