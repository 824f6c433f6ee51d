#pragma once

#include <cstddef>
#include <vector>

#include "cmr/model.hpp"

namespace cmr {

struct TripletResult {
  double loss = 0.0;
  ModelParams grads;
  // Hardest in-batch negative per anchor, for each direction.
  std::vector<std::size_t> text_negatives;  // molecule index per text anchor
  std::vector<std::size_t> mol_negatives;   // text index per molecule anchor
};

// Symmetric hardest-negative triplet loss over a batch of B >= 2 aligned
// (text, molecule) rows.
//
// With a_i, p_i the normalized text and molecule projections and C = A P^T,
// text anchor i contributes max(0, margin - C_ii + max_{j != i} C_ij) and
// molecule anchor i contributes max(0, margin - C_ii + max_{j != i} C_ji).
// The loss is the mean of all 2B terms. Argmax ties pick the lowest index;
// a hinge exactly at zero is treated as inactive.
TripletResult triplet_loss_batch(const Matrix& text_rows, const Matrix& mol_rows,
                                 const ModelParams& params, double margin);

}  // namespace cmr
