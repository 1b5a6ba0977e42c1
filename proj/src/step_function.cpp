#include "ipcw/step_function.hpp"

#include <algorithm>
#include <cmath>

namespace ipcw {

StepFunction::StepFunction(std::vector<double> jump_locations,
                           std::vector<double> values, double left_value)
    : jumps_(std::move(jump_locations)),
      values_(std::move(values)),
      left_value_(left_value) {
  if (jumps_.size() != values_.size()) {
    throw ConfigError("step function: jump/value size mismatch");
  }
  for (std::size_t k = 0; k + 1 < jumps_.size(); ++k) {
    if (!(jumps_[k] < jumps_[k + 1])) {
      throw ConfigError("step function: jump locations must be strictly increasing");
    }
  }
  for (const double v : jumps_) {
    if (std::isnan(v)) throw ConfigError("step function: NaN jump location");
  }
}

StepFunction StepFunction::constant(double value) {
  return StepFunction({}, {}, value);
}

double StepFunction::operator()(double u) const {
  // first jump strictly greater than u; value comes from the interval before it
  const auto it = std::upper_bound(jumps_.begin(), jumps_.end(), u);
  if (it == jumps_.begin()) return left_value_;
  return values_[static_cast<std::size_t>(it - jumps_.begin()) - 1];
}

bool StepFunction::nondecreasing() const {
  double prev = left_value_;
  for (const double v : values_) {
    if (v < prev) return false;
    prev = v;
  }
  return true;
}

}  // namespace ipcw
