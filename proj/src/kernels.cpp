#include "ipcw/kernels.hpp"

#include <cmath>
#include <utility>

namespace ipcw {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double fa, double b, double fb, double m, double fm,
                     double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double epanechnikov_profile(double u) {
  return std::abs(u) < 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
}

double box_profile(double u) { return std::abs(u) < 0.5 ? 1.0 : 0.0; }

double triangular_profile(double u) {
  return std::abs(u) < 1.0 ? 1.0 - std::abs(u) : 0.0;
}

}  // namespace

double adaptive_quadrature(const std::function<double(double)>& f, double a,
                           double b, double rel_tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(a, fa, b, fb, fm);
  const double scale = std::max(std::abs(whole), 1e-3);
  return adaptive_step(f, a, fa, b, fb, m, fm, whole, rel_tol * scale, 48);
}

KernelSpec::KernelSpec(KernelFamily family, int dim, double support_radius,
                       std::function<double(double)> profile, bool nonnegative,
                       double profile_l2)
    : family_(family),
      dim_(dim),
      support_radius_(support_radius),
      custom_profile_(std::move(profile)),
      nonnegative_(nonnegative),
      profile_l2_(profile_l2) {
  if (dim < 1) throw ConfigError("kernel dimension must be positive");
}

KernelSpec KernelSpec::epanechnikov(int dim) {
  return KernelSpec(KernelFamily::epanechnikov, dim, 1.0, nullptr, true, 0.6);
}

KernelSpec KernelSpec::box(int dim) {
  return KernelSpec(KernelFamily::box, dim, 0.5, nullptr, true, 1.0);
}

KernelSpec KernelSpec::triangular(int dim) {
  return KernelSpec(KernelFamily::triangular, dim, 1.0, nullptr, true,
                    2.0 / 3.0);
}

KernelSpec KernelSpec::custom(std::function<double(double)> profile,
                              double support_radius, int dim,
                              bool allow_signed) {
  if (!profile) throw ConfigError("custom kernel: profile is empty");
  if (!(support_radius > 0.0)) {
    throw ConfigError("custom kernel: support radius must be positive");
  }
  const double r = support_radius;
  const double mass = adaptive_quadrature(profile, -r, r, 1e-12);
  if (std::abs(mass - 1.0) > 1e-9) {
    throw ConfigError("custom kernel: profile integrates to " +
                      std::to_string(mass) + ", expected 1");
  }
  bool nonnegative = true;
  double sup = 0.0;
  const int probes = 4096;
  for (int i = 0; i <= probes; ++i) {
    const double v = profile(-r + 2.0 * r * i / probes);
    if (v < 0.0) nonnegative = false;
    sup = std::max(sup, std::abs(v));
  }
  if (!std::isfinite(sup)) {
    throw ConfigError("custom kernel: profile is unbounded on its support");
  }
  if (!nonnegative && !allow_signed) {
    throw ConfigError(
        "custom kernel: signed profile rejected (pass allow_signed to accept; "
        "conditional-CDF monotonicity is then not guaranteed)");
  }
  const double l2 = adaptive_quadrature(
      [&profile](double u) { double v = profile(u); return v * v; }, -r, r,
      1e-10);
  return KernelSpec(KernelFamily::custom, dim, r, std::move(profile),
                    nonnegative, l2);
}

KernelSpec KernelSpec::from_name(std::string_view name, int dim) {
  if (name == "epanechnikov") return epanechnikov(dim);
  if (name == "box") return box(dim);
  if (name == "triangular") return triangular(dim);
  throw ConfigError("unknown kernel '" + std::string(name) +
                    "' (expected epanechnikov, box or triangular)");
}

double KernelSpec::profile(double u) const {
  switch (family_) {
    case KernelFamily::epanechnikov:
      return epanechnikov_profile(u);
    case KernelFamily::box:
      return box_profile(u);
    case KernelFamily::triangular:
      return triangular_profile(u);
    case KernelFamily::custom:
      return std::abs(u) < support_radius_ ? custom_profile_(u) : 0.0;
  }
  return 0.0;
}

double KernelSpec::operator()(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != dim_) {
    throw ConfigError("kernel evaluated with dimension " +
                      std::to_string(u.size()) + ", spec has dimension " +
                      std::to_string(dim_));
  }
  double out = 1.0;
  for (const double uj : u) {
    out *= profile(uj);
    if (out == 0.0) return 0.0;
  }
  return out;
}

double KernelSpec::l2_norm() const {
  double out = 1.0;
  for (int j = 0; j < dim_; ++j) out *= profile_l2_;
  return out;
}

std::string KernelSpec::name() const {
  switch (family_) {
    case KernelFamily::epanechnikov:
      return "epanechnikov";
    case KernelFamily::box:
      return "box";
    case KernelFamily::triangular:
      return "triangular";
    case KernelFamily::custom:
      return "custom";
  }
  return "?";
}

}  // namespace ipcw
