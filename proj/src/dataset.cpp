#include "ipcw/dataset.hpp"

#include <cmath>

#include "ipcw/survival.hpp"

namespace ipcw {

Dataset::Dataset(std::vector<double> z, std::vector<int> delta,
                 std::vector<double> x_rowmajor, int dim)
    : z_(std::move(z)),
      delta_(std::move(delta)),
      x_(std::move(x_rowmajor)),
      dim_(dim),
      km_cache_(std::make_shared<KmCache>()) {
  if (z_.empty()) throw ConfigError("dataset: n must be at least 1");
  if (dim_ < 1) throw ConfigError("dataset: covariate dimension must be positive");
  if (delta_.size() != z_.size() || x_.size() != z_.size() * static_cast<std::size_t>(dim_)) {
    throw ConfigError("dataset: column lengths are inconsistent");
  }
  for (const int d : delta_) {
    if (d != 0 && d != 1) throw ConfigError("dataset: delta entries must be 0 or 1");
  }
  for (const double v : z_) {
    if (std::isnan(v)) throw ConfigError("dataset: NaN in z column");
  }
  for (const double v : x_) {
    if (std::isnan(v)) throw ConfigError("dataset: NaN in covariates");
  }
}

const StepFunction& Dataset::censoring_km() const {
  std::call_once(km_cache_->flag, [this] {
    km_cache_->value = std::make_unique<StepFunction>(km_censoring(*this));
  });
  return *km_cache_->value;
}

double Dataset::censoring_rate() const {
  std::size_t censored = 0;
  for (const int d : delta_) censored += (d == 0);
  return static_cast<double>(censored) / static_cast<double>(delta_.size());
}

}  // namespace ipcw
