#include "cmr/trainer.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "cmr/errors.hpp"
#include "cmr/scheduler.hpp"
#include "cmr/synthetic.hpp"
#include "oracles.hpp"

namespace cmr {
namespace {

CurriculumConfig small_config() {
  CurriculumConfig cfg;
  cfg.epochs = 6;
  cfg.sigma = 0.5;
  cfg.trainer.proj_dim = 8;
  cfg.trainer.batch_size = 8;
  cfg.trainer.learning_rate = 1e-2;
  cfg.trainer.seed = 3;
  return cfg;
}

TEST(MakeBatchesTest, SplitsAndMergesTrailingSingleton) {
  std::vector<std::size_t> idx(9);
  std::iota(idx.begin(), idx.end(), 0);
  auto b = make_batches(idx, 4);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].size(), 4u);
  EXPECT_EQ(b[1].size(), 5u);
  b = make_batches(std::span(idx).first(8), 4);
  EXPECT_EQ(b.size(), 2u);
  b = make_batches(std::span(idx).first(3), 4);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].size(), 3u);
  EXPECT_THROW(make_batches(idx, 1), ArgumentError);
}

TEST(TrainTest, NoCurriculumUsesEverySampleEachEpoch) {
  const auto train_ds = testing::random_dataset(50, 6, 5, 1, 1.0);
  const auto val_ds = testing::random_dataset(12, 6, 5, 2, 1.0);
  const CurriculumConfig cfg = small_config().without_curriculum();
  const TrainResult r = train(train_ds, val_ds, cfg);
  ASSERT_EQ(r.report.epochs.size(), 6u);
  for (const auto& e : r.report.epochs) {
    EXPECT_EQ(e.active_count, 50u);
    EXPECT_EQ(e.gamma, 1.0);
    EXPECT_EQ(e.lambda, 1.0);
    EXPECT_EQ(e.batches, 7u);  // six of 8 and one of 2
    EXPECT_TRUE(e.validation.has_value());
  }
  EXPECT_EQ(r.report.total_presentations, 300u);
}

TEST(TrainTest, DeterministicGivenSeed) {
  const auto train_ds = testing::random_dataset(40, 6, 5, 1, 1.0);
  const auto val_ds = testing::random_dataset(10, 6, 5, 2, 1.0);
  const TrainResult a = train(train_ds, val_ds, small_config());
  const TrainResult b = train(train_ds, val_ds, small_config());
  EXPECT_EQ(a.params, b.params);
  ASSERT_EQ(a.report.epochs.size(), b.report.epochs.size());
  for (std::size_t i = 0; i < a.report.epochs.size(); ++i) {
    EXPECT_EQ(a.report.epochs[i].mean_loss, b.report.epochs[i].mean_loss);
    EXPECT_EQ(a.report.epochs[i].validation, b.report.epochs[i].validation);
  }
  auto other = small_config();
  other.trainer.seed = 4;
  EXPECT_FALSE(train(train_ds, val_ds, other).params == a.params);
}

TEST(TrainTest, OnlyAdmittedSamplesReachTheOptimizer) {
  const auto train_ds = testing::random_dataset(60, 6, 5, 5, 1.2);
  const auto val_ds = testing::random_dataset(10, 6, 5, 6, 1.2);
  CurriculumConfig cfg = small_config();
  cfg.alpha = 0.2;
  cfg.beta = 0.15;
  const DifficultyIndex index =
      build_index(testing::naive_counts(train_ds, cfg.sigma), cfg.sigma);

  std::vector<std::set<std::size_t>> seen(cfg.epochs + 1);
  TrainHooks hooks;
  hooks.on_batch = [&](std::int64_t k, std::span<const std::size_t> batch) {
    seen[k].insert(batch.begin(), batch.end());
  };
  const TrainResult r = train_with_index(train_ds, val_ds, cfg, index, hooks);
  std::uint64_t total = 0;
  for (std::int64_t k = 1; k <= cfg.epochs; ++k) {
    const EpochPlan plan = plan_epoch(cfg, index, k);
    const std::set<std::size_t> admitted(plan.active_indices.begin(),
                                         plan.active_indices.end());
    EXPECT_EQ(seen[k], admitted) << "epoch " << k;
    // The admitted set is the easiest prefix.
    for (std::size_t i = 0; i < plan.active_count; ++i) {
      EXPECT_EQ(plan.active_indices[i], index.order[i]);
    }
    total += plan.active_count;
  }
  EXPECT_EQ(r.report.total_presentations, total);
  EXPECT_EQ(total, total_presentations(cfg, 60));
}

TEST(TrainTest, IntensityScalesGradients) {
  const auto train_ds = testing::random_dataset(30, 5, 4, 7, 1.0);
  const auto val_ds = testing::random_dataset(8, 5, 4, 8, 1.0);
  CurriculumConfig cfg = small_config();
  cfg.epochs = 3;

  auto first_gradient = [&](IntensityCurve curve) {
    CurriculumConfig c = cfg;
    c.curve = curve;
    std::optional<ModelParams> first;
    TrainHooks hooks;
    hooks.on_gradient = [&](std::int64_t k, double g, const ModelParams& raw,
                            const ModelParams& scaled) {
      auto rb = blocks(raw);
      auto sb = blocks(scaled);
      for (std::size_t b = 0; b < rb.size(); ++b)
        for (std::size_t e = 0; e < rb[b].values.size(); ++e)
          ASSERT_EQ(sb[b].values[e], g * rb[b].values[e]) << "epoch " << k;
      if (!first) first = scaled;
    };
    train(train_ds, val_ds, c, hooks);
    return *first;
  };
  const ModelParams off = first_gradient(IntensityCurve::kConstantOne);
  const ModelParams rational = first_gradient(IntensityCurve::kRational);
  auto ob = blocks(off);
  auto rb = blocks(rational);
  for (std::size_t b = 0; b < ob.size(); ++b) {
    for (std::size_t e = 0; e < ob[b].values.size(); ++e) {
      const double expect = 0.5 * ob[b].values[e];
      ASSERT_LE(std::abs(rb[b].values[e] - expect),
                1e-10 * std::max(std::abs(expect), 1e-300));
    }
  }
}

TEST(TrainTest, RejectsMismatchedInputs) {
  const auto train_ds = testing::random_dataset(20, 6, 5, 1);
  const auto val_ds = testing::random_dataset(10, 6, 4, 2);
  EXPECT_THROW(train(train_ds, val_ds, small_config()), ConsistencyError);
  DifficultyIndex idx = build_index(std::vector<std::uint32_t>(5, 0), 0.5);
  EXPECT_THROW(train_with_index(train_ds, train_ds, small_config(), idx),
               ConsistencyError);
  auto bad = small_config();
  bad.trainer.batch_size = 1;
  EXPECT_THROW(train(train_ds, train_ds, bad), ValidationError);
}

TEST(TrainTest, DeskBenchmarkPresentationsMatchUsageRatio) {
  const PairedDataset all = generate_synthetic(desk_benchmark_spec(1));
  auto [train_ds, val_ds] = split_dataset(all, 0.2, 1);
  CurriculumConfig cfg;  // library defaults
  cfg.trainer.eval_every_epoch = false;
  const TrainResult r = train(train_ds, val_ds, cfg);
  const std::size_t n = train_ds.size();
  std::uint64_t sum = 0;
  for (const auto& e : r.report.epochs) sum += e.active_count;
  EXPECT_EQ(r.report.total_presentations, sum);
  EXPECT_EQ(static_cast<std::int64_t>(sum),
            std::llround(usage_ratio(cfg, n) * static_cast<double>(cfg.epochs * n)));
}

}  // namespace
}  // namespace cmr
