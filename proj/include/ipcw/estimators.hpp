#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ipcw/dataset.hpp"
#include "ipcw/kernels.hpp"
#include "ipcw/step_function.hpp"
#include "ipcw/transform.hpp"

namespace ipcw {

//! Censoring distribution used by the inverse-probability weights: either a
//! known CDF (step function or closed form) or the dataset's Kaplan-Meier
//! plug-in G*_n.
class GSpec {
public:
  static GSpec kaplan_meier();
  static GSpec known(StepFunction g);
  static GSpec known(std::function<double(double)> cdf,
                     std::string label = "known");

  bool is_kaplan_meier() const { return mode_ == Mode::kaplan_meier; }
  const std::string& label() const { return label_; }

  //! G(u) for this dataset. Kaplan-Meier mode reads the dataset cache.
  double operator()(const Dataset& data, double u) const;

private:
  enum class Mode { kaplan_meier, known_step, known_fn };
  GSpec(Mode mode) : mode_(mode) {}

  Mode mode_;
  std::shared_ptr<const StepFunction> step_;
  std::function<double(double)> fn_;
  std::string label_ = "kaplan-meier";
};

//! Per-observation inverse-probability factors delta_i / (1 - G(Z_i)).
//! Terms with delta_i = 0, and terms where 1 - G(Z_i) <= 0 (the 0/0 = 0
//! convention; G*_n(Z_i) = 1 only at a censored sample maximum), are zero.
//! Precomputed once per (dataset, G) pair and reused across evaluation
//! points; pure data, shareable across threads.
std::vector<double> ipcw_factors(const Dataset& data, const GSpec& g);

//! Nadaraya-Watson weights at x: K((x - X_i)/h) normalized to sum to one.
//! Throws EmptyWindowError when no covariate lies within h * support_radius.
std::vector<double> nw_weights(const Dataset& data, std::span<const double> x,
                               double h, const KernelSpec& kernel);

//! IPCW regression estimate of E[psi(Y) | X = x]:
//! sum_i w_i(x) delta_i psi(Z_i) / (1 - G(Z_i)).
double ipcw_regression(const Dataset& data, const Transform& psi,
                       std::span<const double> x, double h,
                       const KernelSpec& kernel, const GSpec& g);

struct CdfEstimate {
  double value;  // clamped to [0, 1]
  double raw;
};

//! Conditional distribution function estimate P(Y <= t | X = x).
CdfEstimate conditional_cdf(const Dataset& data, double t,
                            std::span<const double> x, double h,
                            const KernelSpec& kernel, const GSpec& g);

//! Conditional density estimate with response-direction bandwidth ell:
//! (1/ell) sum_i w_i(x) delta_i 1{Z_i in [t - ell/2, t + ell/2]} / (1 - G(Z_i)).
double conditional_density(const Dataset& data, double t,
                           std::span<const double> x, double h, double ell,
                           const KernelSpec& kernel, const GSpec& g);

//! Conditional hazard rate: density / (1 - cdf), both at the same (h, g).
//! Throws DegenerateDenominatorError when the raw CDF is >= 1 - guard.
double conditional_hazard(const Dataset& data, double t,
                          std::span<const double> x, double h, double ell,
                          const KernelSpec& kernel, const GSpec& g,
                          double guard = 1e-10);

namespace detail {

//! One shared pass: unnormalized kernel weights against precomputed factors.
//! num = sum K_i * factor_i * psi(Z_i), den = sum K_i.
struct LocalSums {
  double num = 0.0;
  double den = 0.0;
  double num_sq = 0.0;  // sum K_i * factor_i^2 * psi(Z_i)^2
};

LocalSums local_sums(const Dataset& data, std::span<const double> factors,
                     const Transform& psi, std::span<const double> x, double h,
                     const KernelSpec& kernel, bool with_square = false);

double regression_from_factors(const Dataset& data,
                               std::span<const double> factors,
                               const Transform& psi, std::span<const double> x,
                               double h, const KernelSpec& kernel);

}  // namespace detail

}  // namespace ipcw
