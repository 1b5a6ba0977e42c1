#include "ipcw/bands.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include "ipcw/parallel.hpp"

namespace ipcw {

Region::Region(std::vector<std::array<double, 2>> bounds)
    : bounds_(std::move(bounds)) {
  if (bounds_.empty()) throw ConfigError("region: needs at least one axis");
  for (const auto& [lo, hi] : bounds_) {
    if (!(lo < hi)) throw ConfigError("region: each axis needs lo < hi");
  }
}

Region Region::interval(double lo, double hi) {
  return Region(std::vector<std::array<double, 2>>{{lo, hi}});
}

double Region::volume() const {
  double v = 1.0;
  for (const auto& [lo, hi] : bounds_) v *= hi - lo;
  return v;
}

bool Region::contains(std::span<const double> x) const {
  if (x.size() != bounds_.size()) return false;
  for (std::size_t j = 0; j < bounds_.size(); ++j) {
    if (x[j] < bounds_[j][0] || x[j] > bounds_[j][1]) return false;
  }
  return true;
}

double resolve_bandwidth(const BandwidthRule& rule, std::span<const double> x,
                         int n) {
  if (const auto* fixed = std::get_if<FixedBandwidth>(&rule)) {
    return fixed->h;
  }
  if (const auto* power = std::get_if<PowerLawBandwidth>(&rule)) {
    return power->A * std::pow(static_cast<double>(n), -power->delta0);
  }
  const auto& table = std::get<PerPointBandwidth>(rule);
  double best = -1.0;
  double best_dist = 0.0;
  for (std::size_t k = 0; k < table.points.size(); ++k) {
    double dist = 0.0;
    for (std::size_t j = 0; j < x.size() && j < table.points[k].size(); ++j) {
      const double d = x[j] - table.points[k][j];
      dist += d * d;
    }
    if (best < 0.0 || dist < best_dist) {
      best = table.h[k];
      best_dist = dist;
    }
  }
  if (best < 0.0) throw ConfigError("per-point bandwidth table is empty");
  return best;
}

BandConfig::BandConfig(double theta_, Region region_, BandwidthRule bandwidth_)
    : theta(theta_), region(std::move(region_)), bandwidth(std::move(bandwidth_)) {
  if (!(theta > 1.0)) throw ConfigError("band config: theta must exceed 1");
  if (const auto* power = std::get_if<PowerLawBandwidth>(&bandwidth)) {
    const double d = static_cast<double>(region.dim());
    if (power->delta0 < 1.0 / (4.0 + d) || power->delta0 >= 1.0) {
      throw ConfigError("band config: power-law exponent must lie in [1/(4+d), 1)");
    }
    if (!(power->A > 0.0)) throw ConfigError("band config: power-law A must be positive");
  }
  if (const auto* table = std::get_if<PerPointBandwidth>(&bandwidth)) {
    if (table->points.size() != table->h.size()) {
      throw ConfigError("band config: bandwidth table points/h size mismatch");
    }
  }
}

namespace detail {

Variance variance_from_factors(const Dataset& data,
                               std::span<const double> factors,
                               const Transform& psi, std::span<const double> x,
                               double h, const KernelSpec& kernel) {
  const auto sums = local_sums(data, factors, psi, x, h, kernel,
                               /*with_square=*/true);
  if (sums.den <= 0.0) {
    throw EmptyWindowError("no covariate within the kernel window");
  }
  const double mean = sums.num / sums.den;
  const double raw = sums.num_sq / sums.den - mean * mean;
  return {raw, std::max(raw, 0.0)};
}

}  // namespace detail

Variance variance_estimate(const Dataset& data, const Transform& psi,
                           std::span<const double> x, double h,
                           const KernelSpec& kernel, const GSpec& g) {
  const auto factors = ipcw_factors(data, g);
  return detail::variance_from_factors(data, factors, psi, x, h, kernel);
}

double log_theta_k(double u, const KernelSpec& kernel, double theta) {
  if (!(theta > 1.0)) throw ConfigError("log_theta_k: theta must exceed 1");
  if (!(u > 0.0)) throw ConfigError("log_theta_k: u must be positive");
  return std::log(std::max(theta, u * kernel.l2_norm()));
}

double design_density(const Dataset& data, std::span<const double> x, double h,
                      const KernelSpec& kernel) {
  const int n = data.n();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto xi = data.covariate(i);
    double k = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      k *= kernel.profile((x[j] - xi[j]) / h);
      if (k == 0.0) break;
    }
    sum += k;
  }
  const double hd = std::pow(h, static_cast<double>(data.dim()));
  return sum / (static_cast<double>(n) * hd);
}

namespace detail {

double halfwidth_from_factors(const Dataset& data,
                              std::span<const double> factors,
                              const Transform& psi, std::span<const double> x,
                              double h, const KernelSpec& kernel,
                              const BandConfig& cfg) {
  const double density = design_density(data, x, h, kernel);
  if (!(density > 0.0)) {
    throw ZeroDensityError("design-density plug-in is nonpositive");
  }
  const Variance var = variance_from_factors(data, factors, psi, x, h, kernel);
  const double d = static_cast<double>(data.dim());
  const double hd = std::pow(h, d);
  const double n = static_cast<double>(data.n());
  const double log_factor =
      log_theta_k(cfg.region.volume() / hd, kernel, cfg.theta);
  return std::sqrt(2.0 * log_factor / (n * hd) * var.clamped / density) *
         std::sqrt(kernel.l2_norm());
}

}  // namespace detail

double band_halfwidth(const Dataset& data, const Transform& psi,
                      std::span<const double> x, double h,
                      const KernelSpec& kernel, const GSpec& g,
                      const BandConfig& cfg) {
  const auto factors = ipcw_factors(data, g);
  return detail::halfwidth_from_factors(data, factors, psi, x, h, kernel, cfg);
}

std::string to_string(PointFlag flag) {
  switch (flag) {
    case PointFlag::ok:
      return "ok";
    case PointFlag::empty_window:
      return "empty_window";
    case PointFlag::zero_density:
      return "zero_density";
    case PointFlag::beyond_cutoff:
      return "beyond_tau0";
  }
  return "?";
}

EstimateCurve confidence_band(const Dataset& data, const Transform& psi,
                              const std::vector<std::vector<double>>& grid,
                              const KernelSpec& kernel, const GSpec& g,
                              const BandConfig& cfg, unsigned nthreads) {
  if (grid.empty()) throw ConfigError("confidence_band: empty grid");

  EstimateCurve curve;
  curve.points.resize(grid.size());

  if (const auto* table = std::get_if<PerPointBandwidth>(&cfg.bandwidth);
      table && table->band_bounds && table->h_ref > 0.0) {
    const auto [c1, c2] = *table->band_bounds;
    for (std::size_t k = 0; k < table->h.size(); ++k) {
      if (table->h[k] < c1 * table->h_ref || table->h[k] > c2 * table->h_ref) {
        std::ostringstream msg;
        msg << "bandwidth table entry " << k << " (h=" << table->h[k]
            << ") violates bounds [" << c1 * table->h_ref << ", "
            << c2 * table->h_ref << "]";
        curve.warnings.push_back(msg.str());
      }
    }
  }

  for (const auto& x : grid) {
    if (!cfg.region.contains(x)) {
      throw ConfigError("confidence_band: grid point outside the region");
    }
  }

  // materialize the Kaplan-Meier cache before the parallel section
  if (g.is_kaplan_meier()) data.censoring_km();
  const auto factors = ipcw_factors(data, g);

  std::atomic<std::size_t> usable{0};
  parallel_for(grid.size(), nthreads, [&](std::size_t k) {
    BandPoint& pt = curve.points[k];
    pt.x = grid[k];
    const double h = resolve_bandwidth(cfg.bandwidth, pt.x, data.n());
    pt.h_used = h;
    try {
      pt.estimate =
          detail::regression_from_factors(data, factors, psi, pt.x, h, kernel);
      pt.halfwidth =
          detail::halfwidth_from_factors(data, factors, psi, pt.x, h, kernel, cfg);
      pt.lower = pt.estimate - pt.halfwidth;
      pt.upper = pt.estimate + pt.halfwidth;
      usable.fetch_add(1, std::memory_order_relaxed);
    } catch (const EmptyWindowError&) {
      pt.flag = PointFlag::empty_window;
      pt.estimate = pt.lower = pt.upper = pt.halfwidth =
          std::numeric_limits<double>::quiet_NaN();
    } catch (const ZeroDensityError&) {
      pt.flag = PointFlag::zero_density;
      pt.estimate = pt.lower = pt.upper = pt.halfwidth =
          std::numeric_limits<double>::quiet_NaN();
    }
  });

  if (usable.load() == 0) {
    throw NumericError("confidence_band: every grid point is missing");
  }
  return curve;
}

}  // namespace ipcw
