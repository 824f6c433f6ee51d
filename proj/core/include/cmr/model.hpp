#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cmr/config.hpp"
#include "cmr/dataset.hpp"

namespace cmr {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::RowVectorXd;

enum class Side { kText, kMolecule };

// Two linear heads into a shared proj_dim space. Also used as the gradient
// and Adam-moment container, since those share its shape.
struct ModelParams {
  Matrix w_text;     // d_t x proj_dim
  RowVector b_text;  // proj_dim
  Matrix w_mol;      // d_m x proj_dim
  RowVector b_mol;   // proj_dim

  std::size_t text_dim() const { return static_cast<std::size_t>(w_text.rows()); }
  std::size_t mol_dim() const { return static_cast<std::size_t>(w_mol.rows()); }
  std::size_t proj_dim() const { return static_cast<std::size_t>(w_text.cols()); }

  static ModelParams zeros(std::size_t d_t, std::size_t d_m, std::size_t proj);
  ModelParams zeros_like() const;

  bool operator==(const ModelParams& o) const;
};

struct ParamBlock {
  std::string_view name;
  std::span<double> values;
};
struct ConstParamBlock {
  std::string_view name;
  std::span<const double> values;
};

// Blocks in checkpoint order: w_text, b_text, w_mol, b_mol.
std::vector<ParamBlock> blocks(ModelParams& p);
std::vector<ConstParamBlock> blocks(const ModelParams& p);

// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per head, zero biases.
ModelParams init_model(const TrainerConfig& cfg, std::size_t d_t, std::size_t d_m);

// Rows `indices` of a table widened to double (all rows when empty).
Matrix gather_rows(const EmbeddingTable& table,
                   std::span<const std::size_t> indices = {});

// Forward pass of one head with what the backward pass needs.
struct Projection {
  Matrix unit;            // normalize(rows * W + b)
  Eigen::VectorXd norms;  // |rows * W + b| per row
};

Projection project_with_norms(const ModelParams& params, Side side,
                              const Matrix& rows);

// normalize(rows * W + b); every output row has unit norm.
Matrix project(const ModelParams& params, Side side, const Matrix& rows);

// Accumulates into `grads` the parameter gradient for a head, given the
// gradient with respect to its normalized outputs.
void backprop_projection(Side side, const Matrix& rows, const Projection& fwd,
                         const Matrix& d_unit, ModelParams& grads);

}  // namespace cmr
