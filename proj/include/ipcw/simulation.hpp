#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ipcw/bands.hpp"
#include "ipcw/dataset.hpp"
#include "ipcw/rng.hpp"

#include "json.hpp"

namespace ipcw {

struct SimConfig {
  int n = 2000;
  std::uint64_t seed = 1;
};

//! Data-generating design: draws (X, Y, C) triples and knows its own
//! regression truth. Studies derive replication r's generator stream as
//! Rng(Rng::stream_seed(seed, r)), so results are independent of execution
//! order and thread count.
class Generator {
public:
  virtual ~Generator() = default;
  virtual int dim() const = 0;
  //! Draw one observation; x receives dim() components.
  virtual void draw(Rng& rng, std::span<double> x, double& y,
                    double& c) const = 0;
  virtual double regression_truth(std::span<const double> x) const = 0;
  //! The response transform the design is built around.
  virtual Transform response_transform() const = 0;
  virtual std::string name() const = 0;
};

//! Built-in design: X ~ N(0,1); p(x) = 0.25 + 0.5 cos^2(x);
//! Y | X = x ~ U(0.9 - p(x), 1.9 - p(x)), so P(Y <= 0.9 | X = x) = p(x);
//! C ~ U(0,1) independent of (X, Y); psi = 1{. <= 0.9}.
//! Heavy censoring by construction: P(delta = 1) is about 0.2.
class CosineDesign final : public Generator {
public:
  int dim() const override { return 1; }
  void draw(Rng& rng, std::span<double> x, double& y, double& c) const override;
  double regression_truth(std::span<const double> x) const override;
  Transform response_transform() const override;
  std::string name() const override { return "cosine-uniform"; }

  //! Censoring CDF, U(0,1): G(u) = clamp(u, 0, 1).
  static double censoring_cdf(double u);

  //! Closed-form conditional variance of the censoring-weighted transform,
  //! sigma_psi^2(x) = E[psi^2(Y)/(1 - G(Y)) | X = x] - p(x)^2
  //!               = log(1 + 10 p(x)) - p(x)^2
  //! (the response density is 1 on [0.9 - p, 1.9 - p], so the integral of
  //! 1/(1-y) over [0.9 - p, 0.9] is log((0.1 + p)/0.1)).
  static double ipcw_variance_truth(double x);

  //! Standard normal covariate density.
  static double covariate_density(double x);
};

//! p(x) = 0.25 + 0.5 cos^2(x), the built-in design's regression truth.
double true_regression(double x);

//! Deterministic sample from the design: Z_i = min(Y_i, C_i),
//! delta_i = 1{Y_i <= C_i}. Per-observation draw order is (x, y, c).
Dataset generate_sample(const SimConfig& cfg,
                        const Generator& gen = CosineDesign{});

//! Monte Carlo estimate of E[psi(Y) K((x-X)/h)] / E[K((x-X)/h)] under the
//! design's true law. This is the centering the limit theory subtracts; it
//! is not computable from data, so only tests and studies use it.
//! Requires mc_size >= 10^4; throws EmptyWindowError when the denominator
//! estimate is nonpositive.
double centering_term_mc(double h, std::span<const double> x,
                         const Transform& psi, const KernelSpec& kernel,
                         const Generator& gen, long mc_size,
                         std::uint64_t seed);

struct RepRecord {
  int rep = 0;
  double censoring_rate = 0.0;  // fraction with delta = 0
  double sup_error = 0.0;       // max_x |estimate - truth| over usable grid
  double x0 = 0.0;              // argmax location (ties -> smallest x)
  double halfwidth_at_x0 = 0.0;
  double epsilon1 = 0.0;        // sup_error - L_n(x0)
  bool covered = false;         // |err(x)| <= inflation * L(x) for all usable x
  bool failed = false;          // every grid point was missing
};

struct SimReport {
  std::string study;
  SimConfig config;
  double h = 0.0;            // fixed bandwidth studies
  double inflation = 1.0;
  int replications = 0;
  std::vector<double> x_grid;
  std::vector<RepRecord> records;
  std::map<std::string, double> epsilon1_quantiles;  // p05..p95
  double simultaneous_coverage = 0.0;
  std::vector<double> pointwise_coverage;

  nlohmann::ordered_json to_json() const;
};

//! Replicated epsilon_1 study: per replication locate
//! x0 = argmax_x |mhat*(x) - truth(x)| over the grid and record
//! epsilon_1 = |mhat*(x0) - truth(x0)| - L_n(x0). The bandwidth h is used
//! for both the estimate and the band; band_cfg supplies theta and the
//! region. Missing grid points are excluded from the argmax; if all are
//! missing the replication is recorded as failed. The coverage indicator
//! uses inflation 1.
SimReport epsilon1_study(const SimConfig& cfg, double h, int replications,
                         std::span<const double> x_grid,
                         const BandConfig& band_cfg, unsigned nthreads = 0,
                         const Generator& gen = CosineDesign{});

//! Replicated simultaneous-coverage study at a given band inflation:
//! fraction of replications with truth inside [mhat* +- inflation * L_n]
//! at every usable grid point, plus per-point coverage.
SimReport coverage_study(const SimConfig& cfg, const BandConfig& band_cfg,
                         int replications, std::span<const double> x_grid,
                         double inflation, unsigned nthreads = 0,
                         const Generator& gen = CosineDesign{});

//! Linear-interpolation quantile of unsorted data (numpy default scheme).
double quantile(std::vector<double> values, double p);

}  // namespace ipcw
