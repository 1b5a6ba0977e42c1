#include "ipcw/estimators.hpp"

#include <cmath>

namespace ipcw {

GSpec GSpec::kaplan_meier() { return GSpec(Mode::kaplan_meier); }

GSpec GSpec::known(StepFunction g) {
  GSpec spec(Mode::known_step);
  spec.step_ = std::make_shared<const StepFunction>(std::move(g));
  spec.label_ = "known-step";
  return spec;
}

GSpec GSpec::known(std::function<double(double)> cdf, std::string label) {
  if (!cdf) throw ConfigError("GSpec::known: empty function");
  GSpec spec(Mode::known_fn);
  spec.fn_ = std::move(cdf);
  spec.label_ = std::move(label);
  return spec;
}

double GSpec::operator()(const Dataset& data, double u) const {
  switch (mode_) {
    case Mode::kaplan_meier:
      return data.censoring_km()(u);
    case Mode::known_step:
      return (*step_)(u);
    case Mode::known_fn:
      return fn_(u);
  }
  return 0.0;
}

std::vector<double> ipcw_factors(const Dataset& data, const GSpec& g) {
  const int n = data.n();
  std::vector<double> factors(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    if (data.delta(i) == 0) continue;
    const double surv = 1.0 - g(data, data.z(i));
    if (surv <= 0.0) continue;  // 0/0 = 0 convention
    factors[static_cast<std::size_t>(i)] = 1.0 / surv;
  }
  return factors;
}

namespace {

//! K((x - X_i)/h); exact zero outside the support cube.
double kernel_at(const Dataset& data, int i, std::span<const double> x,
                 double h, const KernelSpec& kernel) {
  const auto xi = data.covariate(i);
  double k = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    k *= kernel.profile((x[j] - xi[j]) / h);
    if (k == 0.0) return 0.0;
  }
  return k;
}

void check_point(const Dataset& data, std::span<const double> x, double h) {
  if (static_cast<int>(x.size()) != data.dim()) {
    throw ConfigError("evaluation point has dimension " +
                      std::to_string(x.size()) + ", dataset has " +
                      std::to_string(data.dim()));
  }
  if (!(h > 0.0)) throw ConfigError("bandwidth h must be positive");
}

}  // namespace

namespace detail {

LocalSums local_sums(const Dataset& data, std::span<const double> factors,
                     const Transform& psi, std::span<const double> x, double h,
                     const KernelSpec& kernel, bool with_square) {
  check_point(data, x, h);
  LocalSums sums;
  const int n = data.n();
  for (int i = 0; i < n; ++i) {
    const double k = kernel_at(data, i, x, h, kernel);
    if (k == 0.0) continue;
    sums.den += k;
    const double f = factors[static_cast<std::size_t>(i)];
    if (f == 0.0) continue;
    const double p = psi(data.z(i));
    sums.num += k * f * p;
    if (with_square) sums.num_sq += k * f * f * p * p;
  }
  return sums;
}

double regression_from_factors(const Dataset& data,
                               std::span<const double> factors,
                               const Transform& psi, std::span<const double> x,
                               double h, const KernelSpec& kernel) {
  const LocalSums sums = local_sums(data, factors, psi, x, h, kernel);
  if (sums.den <= 0.0) {
    throw EmptyWindowError("no covariate within the kernel window");
  }
  return sums.num / sums.den;
}

}  // namespace detail

std::vector<double> nw_weights(const Dataset& data, std::span<const double> x,
                               double h, const KernelSpec& kernel) {
  check_point(data, x, h);
  const int n = data.n();
  std::vector<double> weights(static_cast<std::size_t>(n));
  double den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k = kernel_at(data, i, x, h, kernel);
    weights[static_cast<std::size_t>(i)] = k;
    den += k;
  }
  if (den <= 0.0) {
    throw EmptyWindowError("no covariate within the kernel window");
  }
  for (double& w : weights) w /= den;
  return weights;
}

double ipcw_regression(const Dataset& data, const Transform& psi,
                       std::span<const double> x, double h,
                       const KernelSpec& kernel, const GSpec& g) {
  const auto factors = ipcw_factors(data, g);
  return detail::regression_from_factors(data, factors, psi, x, h, kernel);
}

CdfEstimate conditional_cdf(const Dataset& data, double t,
                            std::span<const double> x, double h,
                            const KernelSpec& kernel, const GSpec& g) {
  const double raw = ipcw_regression(data, Transform::indicator_leq(t), x, h,
                                     kernel, g);
  return {std::min(1.0, std::max(0.0, raw)), raw};
}

double conditional_density(const Dataset& data, double t,
                           std::span<const double> x, double h, double ell,
                           const KernelSpec& kernel, const GSpec& g) {
  if (!(ell > 0.0)) throw ConfigError("density bandwidth ell must be positive");
  check_point(data, x, h);
  const auto factors = ipcw_factors(data, g);
  const double lo = t - 0.5 * ell, hi = t + 0.5 * ell;
  detail::LocalSums sums;
  const int n = data.n();
  for (int i = 0; i < n; ++i) {
    const double k = kernel_at(data, i, x, h, kernel);
    if (k == 0.0) continue;
    sums.den += k;
    const double f = factors[static_cast<std::size_t>(i)];
    if (f == 0.0) continue;
    const double zi = data.z(i);
    if (zi >= lo && zi <= hi) sums.num += k * f;
  }
  if (sums.den <= 0.0) {
    throw EmptyWindowError("no covariate within the kernel window");
  }
  return sums.num / sums.den / ell;
}

double conditional_hazard(const Dataset& data, double t,
                          std::span<const double> x, double h, double ell,
                          const KernelSpec& kernel, const GSpec& g,
                          double guard) {
  const CdfEstimate cdf = conditional_cdf(data, t, x, h, kernel, g);
  if (cdf.raw >= 1.0 - guard) {
    throw DegenerateDenominatorError(
        "conditional CDF is within guard of 1; t is too deep in the tail");
  }
  const double density = conditional_density(data, t, x, h, ell, kernel, g);
  return density / (1.0 - cdf.raw);
}

}  // namespace ipcw
