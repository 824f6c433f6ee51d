#include "cmr/evaluation.hpp"

#include <fmt/core.h>

#include "cmr/errors.hpp"

namespace cmr {

const char* to_string(Direction d) {
  return d == Direction::kTextToMol ? "text_to_mol" : "mol_to_text";
}

RankList rank_from_scores(const Matrix& scores) {
  if (scores.rows() != scores.cols()) {
    throw ArgumentError(fmt::format("score matrix must be square, got {} x {}",
                                    scores.rows(), scores.cols()));
  }
  const Eigen::Index n = scores.rows();
  RankList out;
  out.ranks.resize(static_cast<std::size_t>(n));
  for (Eigen::Index q = 0; q < n; ++q) {
    const double truth = scores(q, q);
    std::size_t rank = 1;
    for (Eigen::Index c = 0; c < n; ++c) {
      if (c == q) continue;
      const double s = scores(q, c);
      if (s > truth || (s == truth && c < q)) ++rank;
    }
    out.ranks[static_cast<std::size_t>(q)] = rank;
  }
  return out;
}

Matrix retrieval_scores(const ModelParams& model, const PairedDataset& ds,
                        Direction direction) {
  const Matrix text = project(model, Side::kText, gather_rows(ds.text()));
  const Matrix mol = project(model, Side::kMolecule, gather_rows(ds.molecule()));
  Matrix t2m = text * mol.transpose();
  if (direction == Direction::kTextToMol) return t2m;
  return t2m.transpose();
}

RankList rank_queries(const ModelParams& model, const PairedDataset& ds,
                      Direction direction) {
  return rank_from_scores(retrieval_scores(model, ds, direction));
}

namespace {

void require_nonempty(const RankList& ranks) {
  if (ranks.ranks.empty()) throw ArgumentError("empty rank list");
}

}  // namespace

double hits_at_k(const RankList& ranks, std::size_t k) {
  require_nonempty(ranks);
  if (k < 1) throw ArgumentError("hits@k needs k >= 1");
  std::size_t hits = 0;
  for (std::size_t r : ranks.ranks) hits += r <= k ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(ranks.ranks.size());
}

double mrr(const RankList& ranks) {
  require_nonempty(ranks);
  double sum = 0.0;
  for (std::size_t r : ranks.ranks) sum += 1.0 / static_cast<double>(r);
  return sum / static_cast<double>(ranks.ranks.size());
}

double mean_rank(const RankList& ranks) {
  require_nonempty(ranks);
  double sum = 0.0;
  for (std::size_t r : ranks.ranks) sum += static_cast<double>(r);
  return sum / static_cast<double>(ranks.ranks.size());
}

MetricsReport make_report(const RankList& ranks, Direction direction) {
  MetricsReport m;
  m.direction = direction;
  m.hits_at_1 = hits_at_k(ranks, 1);
  m.hits_at_10 = hits_at_k(ranks, 10);
  m.mrr = mrr(ranks);
  m.mean_rank = mean_rank(ranks);
  m.query_count = ranks.ranks.size();
  return m;
}

std::array<MetricsReport, 2> evaluate(const ModelParams& model,
                                      const PairedDataset& ds) {
  const Matrix t2m = retrieval_scores(model, ds, Direction::kTextToMol);
  return {make_report(rank_from_scores(t2m), Direction::kTextToMol),
          make_report(rank_from_scores(t2m.transpose()), Direction::kMolToText)};
}

}  // namespace cmr
