#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ipcw/estimators.hpp"

namespace ipcw {

//! Axis-aligned box region I in R^d; V_I is its Lebesgue measure.
class Region {
public:
  explicit Region(std::vector<std::array<double, 2>> bounds);
  static Region interval(double lo, double hi);

  int dim() const { return static_cast<int>(bounds_.size()); }
  double volume() const;
  bool contains(std::span<const double> x) const;
  const std::vector<std::array<double, 2>>& bounds() const { return bounds_; }

private:
  std::vector<std::array<double, 2>> bounds_;
};

//! Bandwidth resolution per evaluation point.
struct FixedBandwidth {
  double h;
};
//! h_n = A n^(-delta0); the band theory requires 1/(4+d) <= delta0 < 1.
struct PowerLawBandwidth {
  double A;
  double delta0;
};
//! Tabulated H_n(x), resolved by nearest table point. Optional (c1, c2)
//! bounds are checked against c1 h_ref <= H_n(x) <= c2 h_ref; violations
//! produce warnings, not errors, since the condition is asymptotic.
struct PerPointBandwidth {
  std::vector<std::vector<double>> points;
  std::vector<double> h;
  std::optional<std::array<double, 2>> band_bounds;  // (c1, c2)
  double h_ref = 0.0;
};

using BandwidthRule =
    std::variant<FixedBandwidth, PowerLawBandwidth, PerPointBandwidth>;

double resolve_bandwidth(const BandwidthRule& rule, std::span<const double> x,
                         int n);

struct BandConfig {
  double theta;  // floor constant in the log factor, > 1
  Region region;
  BandwidthRule bandwidth;

  BandConfig(double theta_, Region region_, BandwidthRule bandwidth_);
};

struct Variance {
  double raw;      // may be negative in tiny samples
  double clamped;  // max(raw, 0)
};

//! Plug-in conditional variance
//!   sigma*^2(x; h) = sum_i delta_i psi(Z_i)^2 / (1 - G(Z_i))^2 w_i(x)
//!                    - mhat*(x)^2.
Variance variance_estimate(const Dataset& data, const Transform& psi,
                           std::span<const double> x, double h,
                           const KernelSpec& kernel, const GSpec& g);

//! log(max(theta, u * \int K^2)).
double log_theta_k(double u, const KernelSpec& kernel, double theta);

//! Kernel design-density plug-in f_{X;n}(x; h) = (1/(n h^d)) sum_i K((x-X_i)/h).
double design_density(const Dataset& data, std::span<const double> x, double h,
                      const KernelSpec& kernel);

//! Band halfwidth
//!   L_n(x) = sqrt( 2 log_theta_k(V_I / h^d) / (n h^d)
//!                  * sigma*^2_clamped(x; h) / f_{X;n}(x; h) ) * sqrt(\int K^2).
//! Throws ZeroDensityError when the density plug-in is nonpositive.
double band_halfwidth(const Dataset& data, const Transform& psi,
                      std::span<const double> x, double h,
                      const KernelSpec& kernel, const GSpec& g,
                      const BandConfig& cfg);

enum class PointFlag { ok, empty_window, zero_density, beyond_cutoff };

std::string to_string(PointFlag flag);

struct BandPoint {
  std::vector<double> x;
  double h_used = 0.0;
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double halfwidth = 0.0;
  PointFlag flag = PointFlag::ok;

  bool missing() const { return flag == PointFlag::empty_window ||
                                flag == PointFlag::zero_density; }
};

struct EstimateCurve {
  std::vector<BandPoint> points;
  std::vector<std::string> warnings;
};

//! Simultaneous confidence band over a grid: per point, resolve H_n(x),
//! compute the estimate and halfwidth. EmptyWindow / zero-density points are
//! flagged missing rather than extrapolated; throws NumericError when every
//! grid point is missing. Grid points are independent and evaluated in
//! parallel.
EstimateCurve confidence_band(const Dataset& data, const Transform& psi,
                              const std::vector<std::vector<double>>& grid,
                              const KernelSpec& kernel, const GSpec& g,
                              const BandConfig& cfg, unsigned nthreads = 0);

namespace detail {

//! variance_estimate against precomputed IPCW factors (grid evaluations
//! share one factor vector per dataset).
Variance variance_from_factors(const Dataset& data,
                               std::span<const double> factors,
                               const Transform& psi, std::span<const double> x,
                               double h, const KernelSpec& kernel);

double halfwidth_from_factors(const Dataset& data,
                              std::span<const double> factors,
                              const Transform& psi, std::span<const double> x,
                              double h, const KernelSpec& kernel,
                              const BandConfig& cfg);

}  // namespace detail

}  // namespace ipcw
