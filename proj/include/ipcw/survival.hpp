#pragma once

#include <span>

#include "ipcw/dataset.hpp"
#include "ipcw/step_function.hpp"

namespace ipcw {

//! Kaplan-Meier estimator of the censoring distribution,
//!
//!   G*_n(u) = 1 - prod_{i: Z_i <= u} ((N_n(Z_i) - 1) / N_n(Z_i))^(1 - delta_i),
//!
//! with N_n(x) = #{j : Z_j >= x} and the conventions prod_{empty} = 1 and
//! 0^0 = 1. Tied observations each contribute one factor, all sharing the
//! same N_n(Z_i). Flipping delta -> 1 - delta yields the Kaplan-Meier
//! estimator of the event distribution F instead.
StepFunction km_censoring(std::span<const double> z, std::span<const int> delta);

StepFunction km_censoring(const Dataset& data);

}  // namespace ipcw
