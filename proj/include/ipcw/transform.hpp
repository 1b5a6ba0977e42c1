#pragma once

#include <optional>
#include <vector>

#include "ipcw/errors.hpp"

namespace ipcw {

//! Response transform psi applied to the observed times. Identity gives the
//! classical regression function, indicator_leq(t) the conditional CDF at t.
//! Tabulated transforms interpolate linearly between knots and are clamped
//! to the end values outside them.
//!
//! An optional upper cutoff tau0 forces psi = 0 on (tau0, inf); censored-data
//! functionals are only estimable below the upper support point of Z, and the
//! cutoff is how callers keep the transform inside that range.
class Transform {
public:
  enum class Kind { identity, indicator_leq, tabulated };

  static Transform identity();
  static Transform indicator_leq(double threshold);
  static Transform tabulated(std::vector<double> knots,
                             std::vector<double> values);

  Transform with_upper_cutoff(double tau0) const;

  double operator()(double y) const;

  Kind kind() const { return kind_; }
  double threshold() const { return threshold_; }
  std::optional<double> upper_cutoff() const { return upper_cutoff_; }

private:
  Transform(Kind kind) : kind_(kind) {}

  Kind kind_;
  double threshold_ = 0.0;
  std::vector<double> knots_;
  std::vector<double> values_;
  std::optional<double> upper_cutoff_;
};

}  // namespace ipcw
