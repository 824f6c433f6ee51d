#include "cli/config_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "cmr/errors.hpp"

namespace cmr::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || !std::isfinite(out)) {
    throw ValidationError(fmt::format("{}: '{}' is not a finite number", key, v));
  }
  return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ValidationError(fmt::format("{}: '{}' is not an integer", key, v));
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ValidationError(fmt::format("{}: '{}' is not a boolean", key, v));
}

}  // namespace

double percent_to_fraction(double percent) { return percent / 100.0; }

KeyValues parse_key_values(std::istream& in, const std::string& origin) {
  KeyValues kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError(fmt::format("{}:{}: expected key = value", origin, lineno));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw FormatError(fmt::format("{}:{}: empty key", origin, lineno));
    }
    if (!kv.emplace(key, value).second) {
      throw FormatError(fmt::format("{}:{}: duplicate key '{}'", origin, lineno, key));
    }
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  }
  return parse_key_values(in, path.string());
}

void apply_config_key(CurriculumConfig& cfg, const std::string& key,
                      const std::string& value) {
  auto& t = cfg.trainer;
  if (key == "alpha") {
    cfg.alpha = percent_to_fraction(to_double(key, value));
  } else if (key == "beta") {
    cfg.beta = percent_to_fraction(to_double(key, value));
  } else if (key == "alpha_fraction") {
    cfg.alpha = to_double(key, value);
  } else if (key == "beta_fraction") {
    cfg.beta = to_double(key, value);
  } else if (key == "sigma") {
    cfg.sigma = to_double(key, value);
  } else if (key == "epochs") {
    cfg.epochs = to_int<std::int64_t>(key, value);
  } else if (key == "curve") {
    try {
      cfg.curve = parse_curve(value);
    } catch (const ArgumentError& e) {
      throw ValidationError(fmt::format("{}: {}", key, e.what()));
    }
  } else if (key == "difficulty_modality") {
    try {
      cfg.difficulty_modality = parse_modality(value);
    } catch (const ArgumentError& e) {
      throw ValidationError(fmt::format("{}: {}", key, e.what()));
    }
  } else if (key == "workers") {
    cfg.workers = to_int<std::size_t>(key, value);
  } else if (key == "proj_dim") {
    t.proj_dim = to_int<std::size_t>(key, value);
  } else if (key == "margin") {
    t.margin = to_double(key, value);
  } else if (key == "lr" || key == "learning_rate") {
    t.learning_rate = to_double(key, value);
  } else if (key == "batch_size") {
    t.batch_size = to_int<std::size_t>(key, value);
  } else if (key == "adam_beta1") {
    t.adam_beta1 = to_double(key, value);
  } else if (key == "adam_beta2") {
    t.adam_beta2 = to_double(key, value);
  } else if (key == "adam_epsilon") {
    t.adam_epsilon = to_double(key, value);
  } else if (key == "seed") {
    t.seed = to_int<std::uint64_t>(key, value);
  } else if (key == "eval_every_epoch") {
    t.eval_every_epoch = to_bool(key, value);
  } else {
    throw ValidationError(fmt::format("unknown config key '{}'", key));
  }
}

void apply_config(CurriculumConfig& cfg, const KeyValues& kv,
                  const std::string& prefix) {
  for (const auto& [key, value] : kv) {
    if (prefix.empty()) {
      apply_config_key(cfg, key, value);
    } else if (key.rfind(prefix, 0) == 0) {
      apply_config_key(cfg, key.substr(prefix.size()), value);
    }
  }
}

CurriculumConfig load_config(const std::filesystem::path& path) {
  CurriculumConfig cfg;
  apply_config(cfg, read_key_values(path));
  return cfg;
}

void write_config(std::ostream& out, const CurriculumConfig& cfg,
                  const std::string& prefix) {
  const auto& t = cfg.trainer;
  auto line = [&](const char* key, const std::string& value) {
    out << prefix << key << " = " << value << '\n';
  };
  auto real = [](double v) { return fmt::format("{:.17g}", v); };
  line("alpha_fraction", real(cfg.alpha));
  line("beta_fraction", real(cfg.beta));
  line("sigma", real(cfg.sigma));
  line("epochs", std::to_string(cfg.epochs));
  line("curve", to_string(cfg.curve));
  line("difficulty_modality", to_string(cfg.difficulty_modality));
  line("workers", std::to_string(cfg.workers));
  line("proj_dim", std::to_string(t.proj_dim));
  line("margin", real(t.margin));
  line("lr", real(t.learning_rate));
  line("batch_size", std::to_string(t.batch_size));
  line("adam_beta1", real(t.adam_beta1));
  line("adam_beta2", real(t.adam_beta2));
  line("adam_epsilon", real(t.adam_epsilon));
  line("seed", std::to_string(t.seed));
  line("eval_every_epoch", t.eval_every_epoch ? "true" : "false");
}

}  // namespace cmr::cli
