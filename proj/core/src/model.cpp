#include "cmr/model.hpp"

#include <cmath>
#include <random>

#include <fmt/core.h>

#include "cmr/errors.hpp"

namespace cmr {

ModelParams ModelParams::zeros(std::size_t d_t, std::size_t d_m,
                               std::size_t proj) {
  const auto p = static_cast<Eigen::Index>(proj);
  ModelParams m;
  m.w_text = Matrix::Zero(static_cast<Eigen::Index>(d_t), p);
  m.b_text = RowVector::Zero(p);
  m.w_mol = Matrix::Zero(static_cast<Eigen::Index>(d_m), p);
  m.b_mol = RowVector::Zero(p);
  return m;
}

ModelParams ModelParams::zeros_like() const {
  return zeros(text_dim(), mol_dim(), proj_dim());
}

bool ModelParams::operator==(const ModelParams& o) const {
  auto same = [](const auto& a, const auto& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
  };
  return same(w_text, o.w_text) && same(b_text, o.b_text) &&
         same(w_mol, o.w_mol) && same(b_mol, o.b_mol);
}

namespace {

template <typename M>
std::span<double> as_span(M& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
template <typename M>
std::span<const double> as_cspan(const M& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

}  // namespace

std::vector<ParamBlock> blocks(ModelParams& p) {
  return {{"w_text", as_span(p.w_text)},
          {"b_text", as_span(p.b_text)},
          {"w_mol", as_span(p.w_mol)},
          {"b_mol", as_span(p.b_mol)}};
}

std::vector<ConstParamBlock> blocks(const ModelParams& p) {
  return {{"w_text", as_cspan(p.w_text)},
          {"b_text", as_cspan(p.b_text)},
          {"w_mol", as_cspan(p.w_mol)},
          {"b_mol", as_cspan(p.b_mol)}};
}

ModelParams init_model(const TrainerConfig& cfg, std::size_t d_t,
                       std::size_t d_m) {
  if (d_t < 1 || d_m < 1 || cfg.proj_dim < 1) {
    throw ArgumentError(fmt::format(
        "model dims must be >= 1 (text {}, molecule {}, proj {})", d_t, d_m,
        cfg.proj_dim));
  }
  ModelParams m = ModelParams::zeros(d_t, d_m, cfg.proj_dim);
  std::mt19937_64 rng(cfg.seed);
  auto fill = [&](Matrix& w) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(w.rows()));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = dist(rng);
  };
  fill(m.w_text);
  fill(m.w_mol);
  return m;
}

Matrix gather_rows(const EmbeddingTable& table,
                   std::span<const std::size_t> indices) {
  const std::size_t n = indices.empty() ? table.count() : indices.size();
  Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(table.dim()));
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t src = indices.empty() ? r : indices[r];
    if (src >= table.count()) {
      throw ArgumentError(fmt::format("row {} out of range", src));
    }
    const auto row = table.row(src);
    for (std::size_t c = 0; c < row.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
  }
  return out;
}

namespace {

const Matrix& weights(const ModelParams& p, Side side) {
  return side == Side::kText ? p.w_text : p.w_mol;
}
const RowVector& bias(const ModelParams& p, Side side) {
  return side == Side::kText ? p.b_text : p.b_mol;
}

}  // namespace

Projection project_with_norms(const ModelParams& params, Side side,
                              const Matrix& rows) {
  const Matrix& w = weights(params, side);
  if (rows.cols() != w.rows()) {
    throw ArgumentError(fmt::format(
        "{} rows have width {}, head expects {}",
        side == Side::kText ? "text" : "molecule", rows.cols(), w.rows()));
  }
  Projection out;
  out.unit = rows * w;
  out.unit.rowwise() += bias(params, side);
  out.norms = out.unit.rowwise().norm();
  for (Eigen::Index i = 0; i < out.norms.size(); ++i) {
    if (!(out.norms(i) > 1e-12) || !std::isfinite(out.norms(i))) {
      throw NumericError(fmt::format(
          "projected row {} has degenerate norm {}", i, out.norms(i)));
    }
  }
  out.unit.array().colwise() /= out.norms.array();
  return out;
}

Matrix project(const ModelParams& params, Side side, const Matrix& rows) {
  return project_with_norms(params, side, rows).unit;
}

void backprop_projection(Side side, const Matrix& rows, const Projection& fwd,
                         const Matrix& d_unit, ModelParams& grads) {
  // d/du of u/|u| applied to g: (g - a (a . g)) / |u|.
  const Eigen::VectorXd radial = (fwd.unit.array() * d_unit.array()).rowwise().sum();
  Matrix d_pre = d_unit - (fwd.unit.array().colwise() * radial.array()).matrix();
  d_pre.array().colwise() /= fwd.norms.array();
  if (side == Side::kText) {
    grads.w_text.noalias() += rows.transpose() * d_pre;
    grads.b_text += d_pre.colwise().sum();
  } else {
    grads.w_mol.noalias() += rows.transpose() * d_pre;
    grads.b_mol += d_pre.colwise().sum();
  }
}

}  // namespace cmr
