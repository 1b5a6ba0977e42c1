#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "ipcw/errors.hpp"

namespace ipcw {

enum class KernelFamily { epanechnikov, box, triangular, custom };

//! Compactly supported kernel on R^d. Multivariate kernels are products
//! of a common 1-d profile, so K(u) = prod_j profile(u_j) and
//! K vanishes outside the cube max_j |u_j| >= support_radius().
//!
//! Built-in profiles integrate to one exactly:
//!   epanechnikov  0.75 (1 - u^2)   on [-1, 1]
//!   box           1                on [-1/2, 1/2]
//!   triangular    1 - |u|          on [-1, 1]
//!
//! Custom profiles must integrate to one (checked to 1e-9 by adaptive
//! quadrature) and be bounded; signed profiles are rejected unless
//! allow_signed is set, since monotonicity of conditional-CDF estimates
//! holds only for nonnegative kernels.
class KernelSpec {
public:
  static KernelSpec epanechnikov(int dim = 1);
  static KernelSpec box(int dim = 1);
  static KernelSpec triangular(int dim = 1);
  static KernelSpec custom(std::function<double(double)> profile,
                           double support_radius, int dim,
                           bool allow_signed = false);

  //! Lookup by CLI name: "epanechnikov" | "box" | "triangular".
  static KernelSpec from_name(std::string_view name, int dim = 1);

  //! K(u); throws ConfigError on dimension mismatch.
  double operator()(std::span<const double> u) const;

  //! The 1-d profile (exact zero outside the support).
  double profile(double u) const;

  //! \int_{R^d} K^2, closed form for built-ins, adaptive quadrature
  //! (1e-8 relative) for custom profiles.
  double l2_norm() const;

  int dim() const { return dim_; }
  double support_radius() const { return support_radius_; }
  KernelFamily family() const { return family_; }
  bool nonnegative() const { return nonnegative_; }
  std::string name() const;

private:
  KernelSpec(KernelFamily family, int dim, double support_radius,
             std::function<double(double)> profile, bool nonnegative,
             double profile_l2);

  KernelFamily family_;
  int dim_;
  double support_radius_;
  std::function<double(double)> custom_profile_;  // custom family only
  bool nonnegative_;
  double profile_l2_;  // \int profile^2 over the support
};

//! Adaptive Simpson integration of f over [a, b] to a relative tolerance.
double adaptive_quadrature(const std::function<double(double)>& f, double a,
                           double b, double rel_tol = 1e-10);

}  // namespace ipcw
