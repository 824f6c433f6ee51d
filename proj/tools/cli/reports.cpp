#include "cli/reports.hpp"

#include <fstream>

#include <fmt/core.h>

#include "cmr/errors.hpp"

namespace cmr::cli {

std::string format_metrics(const MetricsReport& m) {
  return fmt::format(
      "direction={} queries={} hits@1={:.6f} hits@10={:.6f} mrr={:.6f} "
      "mean_rank={:.4f}",
      to_string(m.direction), m.query_count, m.hits_at_1, m.hits_at_10, m.mrr,
      m.mean_rank);
}

void write_metrics(std::ostream& out, const std::array<MetricsReport, 2>& m) {
  out << format_metrics(m[0]) << '\n' << format_metrics(m[1]) << '\n';
}

void write_schedule(std::ostream& out, const CurriculumConfig& cfg,
                    std::size_t n) {
  out << fmt::format("# schedule alpha={:.6g} beta={:.6g} epochs={} curve={} n={}\n",
                     cfg.alpha, cfg.beta, cfg.epochs, to_string(cfg.curve), n);
  for (const auto& row : plan_schedule(cfg, n)) {
    out << fmt::format("epoch={} lambda={:.6f} active={} gamma={:.10f}\n",
                       row.epoch, row.lambda, row.active_count, row.gamma);
  }
  out << fmt::format("total_presentations={}\n", total_presentations(cfg, n));
  out << fmt::format("usage_ratio={:.6f}\n", usage_ratio(cfg, n));
}

void write_train_report(std::ostream& out, const TrainReport& report) {
  out << "# cmr train report v1\n";
  out << fmt::format("epochs={}\n", report.epochs.size());
  out << fmt::format("total_presentations={}\n", report.total_presentations);
  for (const auto& e : report.epochs) {
    out << fmt::format(
        "epoch={} lambda={:.6f} gamma={:.10f} active={} batches={} "
        "mean_loss={:.10g} scaled_loss={:.10g}",
        e.epoch, e.lambda, e.gamma, e.active_count, e.batches, e.mean_loss,
        e.mean_scaled_loss);
    if (e.validation) {
      out << fmt::format(" val_t2m_hits@1={:.6f} val_m2t_hits@1={:.6f}",
                         (*e.validation)[0].hits_at_1, (*e.validation)[1].hits_at_1);
    }
    out << '\n';
  }
  for (const auto& m : report.final_validation) {
    out << "final " << format_metrics(m) << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  }
  out << body;
  out.flush();
  if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace cmr::cli
