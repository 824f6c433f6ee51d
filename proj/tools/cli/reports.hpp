#pragma once

#include <array>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "cmr/evaluation.hpp"
#include "cmr/scheduler.hpp"
#include "cmr/trainer.hpp"

namespace cmr::cli {

// All reports are line-oriented "key=value" records with a fixed field
// order; nothing time-dependent is written, so equal runs give equal bytes.

std::string format_metrics(const MetricsReport& m);
void write_metrics(std::ostream& out, const std::array<MetricsReport, 2>& m);

void write_schedule(std::ostream& out, const CurriculumConfig& cfg, std::size_t n);

void write_train_report(std::ostream& out, const TrainReport& report);

void write_text_file(const std::filesystem::path& path, const std::string& body);

}  // namespace cmr::cli
