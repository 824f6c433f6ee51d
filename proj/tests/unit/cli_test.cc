#include "cli/commands.hpp"

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli/config_file.hpp"
#include "cli/grid.hpp"
#include "cli/manifest.hpp"
#include "cmr/checkpoint.hpp"
#include "cmr/errors.hpp"
#include "oracles.hpp"

namespace cmr::cli {
namespace {

using testing::TempDir;

int run_args(std::vector<std::string> args, std::string* out_text = nullptr,
             std::string* err_text = nullptr) {
  args.insert(args.begin(), "cmr");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int rc = run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(ConfigFileTest, RoundTripIsExact) {
  CurriculumConfig cfg;
  cfg.alpha = 0.1 + 0.2;
  cfg.beta = 1.0 / 3.0;
  cfg.sigma = 0.97;
  cfg.epochs = 11;
  cfg.curve = IntensityCurve::kSigmoid;
  cfg.difficulty_modality = Modality::kMoleculeOnly;
  cfg.workers = 3;
  cfg.trainer.learning_rate = 3e-4;
  cfg.trainer.seed = 0xffffffffffffffffULL;
  cfg.trainer.eval_every_epoch = false;
  std::stringstream s;
  write_config(s, cfg);
  CurriculumConfig back;
  apply_config(back, parse_key_values(s, "test"));
  EXPECT_EQ(back, cfg);
}

TEST(ConfigFileTest, PercentKeysAndErrors) {
  std::istringstream in("alpha = 20  # percent\nbeta=4\ncurve = off\n");
  CurriculumConfig cfg;
  apply_config(cfg, parse_key_values(in, "test"));
  EXPECT_DOUBLE_EQ(cfg.alpha, 0.20);
  EXPECT_DOUBLE_EQ(cfg.beta, 0.04);
  EXPECT_EQ(cfg.curve, IntensityCurve::kConstantOne);

  std::istringstream dup("sigma = 0.9\nsigma = 0.8\n");
  EXPECT_THROW(parse_key_values(dup, "dup"), FormatError);
  std::istringstream no_eq("sigma 0.9\n");
  EXPECT_THROW(parse_key_values(no_eq, "no_eq"), FormatError);
  EXPECT_THROW(apply_config_key(cfg, "sigmaa", "0.9"), ValidationError);
  EXPECT_THROW(apply_config_key(cfg, "epochs", "ten"), ValidationError);
  EXPECT_THROW(apply_config_key(cfg, "curve", "cubic"), ValidationError);
}

TEST(GridTest, NormalizationByHand) {
  std::vector<GridCell> cells(4);
  const double h1[] = {0.2, 0.5, 0.8}, mrr_v[] = {0.3, 0.3, 0.6}, mr[] = {10, 4, 7};
  for (int i = 0; i < 3; ++i) {
    cells[i].ok = true;
    cells[i].alpha_percent = 10.0 * (i + 1);
    for (auto& m : cells[i].metrics) {
      m.hits_at_1 = h1[i];
      m.hits_at_10 = 0.9;
      m.mrr = mrr_v[i];
      m.mean_rank = mr[i];
    }
  }
  cells[1].metrics[1].hits_at_1 = 0.9;  // mol_to_text prefers cell 1
  cells[1].metrics[1].mrr = 0.6;
  cells[3].ok = false;
  cells[3].error = "boom";
  normalize_grid(cells);
  EXPECT_NEAR(cells[0].score[0], 0.25, 1e-15);
  EXPECT_NEAR(cells[1].score[0], 0.625, 1e-15);
  EXPECT_NEAR(cells[2].score[0], 0.875, 1e-15);
  EXPECT_EQ(cells[3].score[0], 0.0);
  EXPECT_EQ(cells[1].normalized[0][1], 1.0);  // Hits@10 tie
  EXPECT_EQ(best_cell(cells, Direction::kTextToMol), 2u);
  // mol_to_text: cell 1 is best on every metric; cell 2 gets
  // (6/7 + 1 + 1 + 0.5) / 4.
  EXPECT_EQ(cells[1].score[1], 1.0);
  EXPECT_NEAR(cells[2].score[1], (6.0 / 7.0 + 2.5) / 4.0, 1e-15);
  EXPECT_EQ(best_cell(cells, Direction::kMolToText), 1u);

  std::ostringstream s;
  write_grid_summary(s, cells);
  EXPECT_NE(s.str().find("# failed alpha=0 beta=0: boom"), std::string::npos) << s.str();
}

TEST(CliTest, UsageAndValidationExitCodes) {
  std::string out, err;
  EXPECT_EQ(run_args({}, &out, &err), kExitUsage);
  EXPECT_EQ(run_args({"plan"}, &out, &err), kExitUsage);
  EXPECT_EQ(run_args({"plan", "--n", "10", "--alpha", "150"}, &out, &err),
            kExitValidation);
  EXPECT_NE(err.find("alpha"), std::string::npos);
  EXPECT_EQ(run_args({"plan", "--n", "10", "--curve", "cubic"}, &out, &err),
            kExitValidation);
  EXPECT_EQ(run_args({"synth", "--noise", "-1", "--out", "unused"}, &out, &err),
            kExitValidation);
  EXPECT_NE(err.find("noise_scale"), std::string::npos) << err;
  EXPECT_EQ(run_args({"evaluate", "--checkpoint", "/nonexistent/x.cmrm", "--text",
                      "a", "--mol", "b", "--ids", "c"},
                     &out, &err),
            kExitIo);
}

TEST(CliTest, PlanPrintsUsageRatio) {
  std::string out;
  ASSERT_EQ(run_args({"plan", "--n", "100", "--alpha", "40", "--beta", "3"}, &out),
            kExitOk);
  EXPECT_NE(out.find("usage_ratio=0.905000"), std::string::npos) << out;
  EXPECT_NE(out.find("epoch=20 lambda=1.000000 active=100"), std::string::npos);
  ASSERT_EQ(run_args({"plan", "--n", "100", "--no-curriculum"}, &out), kExitOk);
  EXPECT_NE(out.find("usage_ratio=1.000000"), std::string::npos);
}

TEST(CliTest, FlagsOverrideConfigFile) {
  TempDir dir("cli");
  {
    std::ofstream f(dir / "c.cfg");
    f << "alpha = 20\nbeta = 4\nepochs = 60\n";
  }
  std::string out;
  const std::string cfg = (dir / "c.cfg").string();
  ASSERT_EQ(run_args({"plan", "--n", "100", "--config", cfg}, &out), kExitOk);
  EXPECT_NE(out.find("usage_ratio=0.873333"), std::string::npos) << out;
  ASSERT_EQ(run_args({"plan", "--n", "100", "--config", cfg, "--alpha", "40",
                      "--beta", "3"},
                     &out),
            kExitOk);
  EXPECT_NE(out.find("usage_ratio=0.905000"), std::string::npos) << out;
}

TEST(CliTest, SynthTrainRerunEvaluate) {
  TempDir dir("cli");
  const std::string data = (dir / "data").string();
  ASSERT_EQ(run_args({"synth", "--clusters", "3", "--per-cluster", "20,25,30",
                      "--dim-text", "12", "--dim-mol", "10", "--noise", "0.05",
                      "--seed", "4", "--out", data}),
            kExitOk);
  const DatasetPaths tr = synth_paths(dir / "data", "train");
  const DatasetPaths va = synth_paths(dir / "data", "val");
  EXPECT_EQ(load_dataset(tr).size() + load_dataset(va).size(), 75u);

  std::vector<std::string> train_args{
      "train", "--text", tr.text.string(), "--mol", tr.molecule.string(),
      "--ids", tr.manifest.string(), "--val-text", va.text.string(),
      "--val-mol", va.molecule.string(), "--val-ids", va.manifest.string(),
      "--epochs", "4", "--proj-dim", "6", "--lr", "1e-2", "--sigma", "0.9",
      "--out", (dir / "run1").string()};
  std::string out;
  ASSERT_EQ(run_args(train_args, &out), kExitOk) << out;
  const RunFiles r1 = RunFiles::in(dir / "run1");
  for (const auto& p : {r1.checkpoint, r1.report, r1.difficulty, r1.manifest})
    EXPECT_TRUE(std::filesystem::exists(p)) << p;
  const RunManifest m = read_manifest(r1.manifest);
  EXPECT_EQ(m.config.epochs, 4);
  EXPECT_DOUBLE_EQ(m.config.sigma, 0.9);
  EXPECT_TRUE(m.train.text.is_absolute());

  ASSERT_EQ(run_args({"train", "--manifest", r1.manifest.string(), "--out",
                      (dir / "run2").string()}),
            kExitOk);
  const RunFiles r2 = RunFiles::in(dir / "run2");
  EXPECT_EQ(read_file(r1.checkpoint), read_file(r2.checkpoint));
  EXPECT_EQ(read_file(r1.report), read_file(r2.report));
  EXPECT_EQ(read_file(r1.difficulty), read_file(r2.difficulty));

  const auto eval_path = dir / "eval.txt";
  ASSERT_EQ(run_args({"evaluate", "--checkpoint", r1.checkpoint.string(), "--text",
                      va.text.string(), "--mol", va.molecule.string(), "--ids",
                      va.manifest.string(), "--out", eval_path.string()},
                     &out),
            kExitOk);
  EXPECT_NE(read_file(eval_path).find("direction=mol_to_text"), std::string::npos);

  // A changed input invalidates the manifest.
  { std::ofstream f(tr.manifest, std::ios::app); f << "extra\n"; }
  std::string err;
  EXPECT_EQ(run_args({"train", "--manifest", r1.manifest.string(), "--out",
                      (dir / "run3").string()},
                     &out, &err),
            kExitValidation);
  EXPECT_NE(err.find("consistency"), std::string::npos) << err;
}

TEST(CliTest, QuantifyMatchesNaiveCounts) {
  TempDir dir("cli");
  const PairedDataset ds = testing::random_dataset(40, 5, 4, 2, 2.0);
  const DatasetPaths p{dir / "t.cmre", dir / "m.cmre", dir / "ids"};
  save_dataset(ds, p);
  std::ostringstream out;
  CountOptions opts;
  opts.workers = 2;
  opts.block_size = 7;
  const DifficultyIndex idx = cmd_quantify(p, 0.6, opts, dir / "q.tsv", out);
  EXPECT_EQ(idx.counts, testing::naive_counts(ds, 0.6));
  const auto back = read_difficulty_report(dir / "q.tsv");
  EXPECT_EQ(back.index.counts, idx.counts);
}

TEST(CliTest, GridContinuesPastFailedCell) {
  TempDir dir("cli");
  SynthArgs sa;
  sa.spec.n_clusters = 2;
  sa.spec.samples_per_cluster = {20, 20};
  sa.spec.dim_text = 6;
  sa.spec.dim_molecule = 6;
  sa.spec.noise_scale = 0.2;
  sa.spec.seed = 1;
  sa.out_dir = dir / "data";
  std::ostringstream sink;
  const SynthOutputs so = cmd_synth(sa, sink);

  GridArgs g;
  g.base.epochs = 2;
  g.base.sigma = 0.9;
  g.base.trainer.proj_dim = 4;
  g.alphas_percent = {40, 250};
  g.betas_percent = {3};
  g.train = so.train;
  g.val = *so.val;
  g.out_dir = dir / "grid";
  const auto cells = cmd_grid(g, sink);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_TRUE(cells[0].ok);
  EXPECT_FALSE(cells[1].ok);
  EXPECT_NE(cells[1].error.find("alpha"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "grid" / "alpha40_beta3" / "checkpoint.cmrm"));
  const std::string summary = read_file(dir / "grid" / "grid_summary.tsv");
  EXPECT_NE(summary.find("# failed alpha=250 beta=3"), std::string::npos) << summary;
}

}  // namespace
}  // namespace cmr::cli
