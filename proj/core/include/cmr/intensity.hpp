#pragma once

#include <cstdint>
#include <string>

namespace cmr {

// Learning-intensity curves gamma(k) over 1-based epochs, all in (0, 1].
//   kSigmoid     1 / (1 + exp(-k - 1))
//   kRational    k / (1 + k)
//   kConstantOne 1, i.e. adaptive intensity disabled
enum class IntensityCurve { kSigmoid, kRational, kConstantOne };

const char* to_string(IntensityCurve c);  // "sigmoid" | "rational" | "off"
IntensityCurve parse_curve(const std::string& s);

double gamma(IntensityCurve curve, std::int64_t k);

// gamma_k * epoch_loss. Since gamma is constant within an epoch, applying it
// to each minibatch loss is the same objective and scales every gradient.
double scale_loss(double gamma_k, double epoch_loss);

}  // namespace cmr
