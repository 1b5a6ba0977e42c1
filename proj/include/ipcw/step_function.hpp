#pragma once

#include <vector>

#include "ipcw/errors.hpp"

namespace ipcw {

//! Right-continuous piecewise-constant function on the reals:
//! value left_value on (-inf, loc_0), values[k] on [loc_k, loc_{k+1}).
//! Immutable after construction; safe to share across threads.
class StepFunction {
public:
  StepFunction(std::vector<double> jump_locations, std::vector<double> values,
               double left_value);

  static StepFunction constant(double value);

  //! Right-continuous evaluation (binary search over jump locations).
  double operator()(double u) const;

  const std::vector<double>& jump_locations() const { return jumps_; }
  const std::vector<double>& values() const { return values_; }
  double left_value() const { return left_value_; }

  bool nondecreasing() const;

private:
  std::vector<double> jumps_;
  std::vector<double> values_;
  double left_value_;
};

}  // namespace ipcw
