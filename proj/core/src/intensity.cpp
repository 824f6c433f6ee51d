#include "cmr/intensity.hpp"

#include <cmath>

#include <fmt/core.h>

#include "cmr/errors.hpp"

namespace cmr {

const char* to_string(IntensityCurve c) {
  switch (c) {
    case IntensityCurve::kSigmoid:
      return "sigmoid";
    case IntensityCurve::kRational:
      return "rational";
    case IntensityCurve::kConstantOne:
      return "off";
  }
  return "off";
}

IntensityCurve parse_curve(const std::string& s) {
  if (s == "sigmoid") return IntensityCurve::kSigmoid;
  if (s == "rational") return IntensityCurve::kRational;
  if (s == "off") return IntensityCurve::kConstantOne;
  throw ArgumentError(fmt::format(
      "unknown intensity curve '{}' (expected sigmoid, rational or off)", s));
}

double gamma(IntensityCurve curve, std::int64_t k) {
  if (k < 1) {
    throw ArgumentError(fmt::format("epoch index must be >= 1, got {}", k));
  }
  const auto kd = static_cast<double>(k);
  switch (curve) {
    case IntensityCurve::kSigmoid:
      return 1.0 / (1.0 + std::exp(-kd - 1.0));
    case IntensityCurve::kRational:
      return kd / (1.0 + kd);
    case IntensityCurve::kConstantOne:
      return 1.0;
  }
  return 1.0;
}

double scale_loss(double gamma_k, double epoch_loss) {
  if (!(gamma_k > 0.0 && gamma_k <= 1.0)) {
    throw ArgumentError(fmt::format("gamma must be in (0, 1], got {}", gamma_k));
  }
  if (!std::isfinite(epoch_loss)) {
    throw NumericError(fmt::format("non-finite loss {}", epoch_loss));
  }
  return gamma_k * epoch_loss;
}

}  // namespace cmr
