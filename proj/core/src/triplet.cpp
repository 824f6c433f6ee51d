#include "cmr/triplet.hpp"

#include <fmt/core.h>

#include "cmr/errors.hpp"

namespace cmr {

TripletResult triplet_loss_batch(const Matrix& text_rows, const Matrix& mol_rows,
                                 const ModelParams& params, double margin) {
  const Eigen::Index b = text_rows.rows();
  if (b < 2) {
    throw ArgumentError(
        fmt::format("triplet loss needs a batch of >= 2 pairs, got {}", b));
  }
  if (mol_rows.rows() != b) {
    throw ArgumentError(fmt::format("batch has {} text rows but {} molecule rows",
                                    b, mol_rows.rows()));
  }

  const Projection a = project_with_norms(params, Side::kText, text_rows);
  const Projection p = project_with_norms(params, Side::kMolecule, mol_rows);
  const Matrix sim = a.unit * p.unit.transpose();

  TripletResult out;
  out.text_negatives.resize(static_cast<std::size_t>(b));
  out.mol_negatives.resize(static_cast<std::size_t>(b));

  // d loss / d sim.
  Matrix d_sim = Matrix::Zero(b, b);
  const double w = 1.0 / (2.0 * static_cast<double>(b));
  double total = 0.0;

  for (Eigen::Index i = 0; i < b; ++i) {
    Eigen::Index row_neg = -1;
    Eigen::Index col_neg = -1;
    for (Eigen::Index j = 0; j < b; ++j) {
      if (j == i) continue;
      if (row_neg < 0 || sim(i, j) > sim(i, row_neg)) row_neg = j;
      if (col_neg < 0 || sim(j, i) > sim(col_neg, i)) col_neg = j;
    }
    out.text_negatives[static_cast<std::size_t>(i)] = static_cast<std::size_t>(row_neg);
    out.mol_negatives[static_cast<std::size_t>(i)] = static_cast<std::size_t>(col_neg);

    const double text_hinge = margin - sim(i, i) + sim(i, row_neg);
    if (text_hinge > 0.0) {
      total += text_hinge;
      d_sim(i, i) -= w;
      d_sim(i, row_neg) += w;
    }
    const double mol_hinge = margin - sim(i, i) + sim(col_neg, i);
    if (mol_hinge > 0.0) {
      total += mol_hinge;
      d_sim(i, i) -= w;
      d_sim(col_neg, i) += w;
    }
  }
  out.loss = total * w;

  out.grads = params.zeros_like();
  const Matrix d_a = d_sim * p.unit;
  const Matrix d_p = d_sim.transpose() * a.unit;
  backprop_projection(Side::kText, text_rows, a, d_a, out.grads);
  backprop_projection(Side::kMolecule, mol_rows, p, d_p, out.grads);
  return out;
}

}  // namespace cmr
