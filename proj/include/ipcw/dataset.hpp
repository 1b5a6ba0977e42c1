#pragma once

#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "ipcw/step_function.hpp"

namespace ipcw {

//! Censored sample (Z_i, delta_i, X_i), i = 1..n, with Z = min(Y, C) and
//! delta = 1{Y <= C}. Covariates are stored row-major, n x d.
//!
//! The Kaplan-Meier estimate of the censoring distribution is computed on
//! first use and cached, so every estimator evaluated on the same dataset
//! shares one copy (copies of the dataset share the cache as well).
class Dataset {
public:
  Dataset(std::vector<double> z, std::vector<int> delta,
          std::vector<double> x_rowmajor, int dim);

  int n() const { return static_cast<int>(z_.size()); }
  int dim() const { return dim_; }

  double z(int i) const { return z_[static_cast<std::size_t>(i)]; }
  int delta(int i) const { return delta_[static_cast<std::size_t>(i)]; }
  std::span<const double> covariate(int i) const {
    return {x_.data() + static_cast<std::size_t>(i) * dim_,
            static_cast<std::size_t>(dim_)};
  }

  const std::vector<double>& z_values() const { return z_; }
  const std::vector<int>& delta_values() const { return delta_; }
  const std::vector<double>& x_values() const { return x_; }

  //! G*_n, the Kaplan-Meier estimate of the censoring law (lazy, thread-safe).
  const StepFunction& censoring_km() const;

  //! Fraction of censored observations, #{delta_i = 0} / n.
  double censoring_rate() const;

private:
  struct KmCache {
    std::once_flag flag;
    std::unique_ptr<StepFunction> value;
  };

  std::vector<double> z_;
  std::vector<int> delta_;
  std::vector<double> x_;
  int dim_;
  std::shared_ptr<KmCache> km_cache_;
};

}  // namespace ipcw
