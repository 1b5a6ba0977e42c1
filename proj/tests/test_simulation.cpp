#include "ipcw/simulation.hpp"

#include <cmath>

#include "doctest.h"

using ipcw::BandConfig;
using ipcw::CosineDesign;
using ipcw::Dataset;
using ipcw::KernelSpec;
using ipcw::Region;
using ipcw::SimConfig;
using ipcw::Transform;

namespace {

BandConfig study_cfg(double h) {
  return BandConfig(std::exp(1.0), Region::interval(-1.0, 1.0),
                    ipcw::FixedBandwidth{h});
}

std::vector<double> grid201() {
  std::vector<double> g(201);
  for (int i = 0; i < 201; ++i) g[static_cast<std::size_t>(i)] = -1.0 + i / 100.0;
  return g;
}

}  // namespace

TEST_CASE("true_regression values and symmetry") {
  CHECK(ipcw::true_regression(0.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(ipcw::true_regression(M_PI / 2.0) ==
        doctest::Approx(0.25).epsilon(1e-12));
  ipcw::Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-3.0, 3.0);
    CHECK(ipcw::true_regression(-x) ==
          doctest::Approx(ipcw::true_regression(x)).epsilon(1e-15));
  }
}

TEST_CASE("generate_sample: determinism and observed censoring level") {
  const SimConfig cfg{2000, 42};
  const Dataset a = ipcw::generate_sample(cfg);
  const Dataset b = ipcw::generate_sample(cfg);
  CHECK(a.z_values() == b.z_values());
  CHECK(a.delta_values() == b.delta_values());
  CHECK(a.x_values() == b.x_values());

  double uncensored = 0.0;
  for (const int d : a.delta_values()) uncensored += d;
  const double rate = uncensored / a.n();
  CHECK(rate > 0.17);
  CHECK(rate < 0.23);
}

TEST_CASE("generate_sample: regression truth recovered by binning") {
  const SimConfig cfg{1000000, 7};
  const Dataset data = ipcw::generate_sample(cfg);
  // E[1{Y <= 0.9} | X near 0] should be close to p(0) = 0.75; the sample
  // only exposes (Z, delta), so recompute Y from the stream instead
  ipcw::Rng rng(7);
  double hits = 0.0, count = 0.0;
  for (int i = 0; i < cfg.n; ++i) {
    const double x = rng.normal();
    const double p = ipcw::true_regression(x);
    const double y = rng.uniform(0.9 - p, 1.9 - p);
    rng.uniform();  // censoring draw, unused here
    if (std::abs(x) < 0.05) {
      count += 1.0;
      hits += y <= 0.9 ? 1.0 : 0.0;
    }
  }
  CHECK(count > 10000);
  CHECK(hits / count == doctest::Approx(0.75).epsilon(0.0134));  // +-0.01
  // and the dataset is the deterministic image of that stream
  CHECK(data.n() == cfg.n);
}

TEST_CASE("censoring draws are independent of (X, Y)") {
  ipcw::Rng rng(123);
  const CosineDesign design;
  const int n = 100000;
  std::vector<double> xs(n), ys(n), cs(n);
  std::vector<double> xbuf(1);
  for (int i = 0; i < n; ++i) {
    design.draw(rng, xbuf, ys[static_cast<std::size_t>(i)],
                cs[static_cast<std::size_t>(i)]);
    xs[static_cast<std::size_t>(i)] = xbuf[0];
  }
  const auto corr = [n](const std::vector<double>& a,
                        const std::vector<double>& b) {
    double ma = 0, mb = 0;
    for (int i = 0; i < n; ++i) {
      ma += a[static_cast<std::size_t>(i)];
      mb += b[static_cast<std::size_t>(i)];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (int i = 0; i < n; ++i) {
      const double da = a[static_cast<std::size_t>(i)] - ma;
      const double db = b[static_cast<std::size_t>(i)] - mb;
      sab += da * db;
      saa += da * da;
      sbb += db * db;
    }
    return sab / std::sqrt(saa * sbb);
  };
  CHECK(std::abs(corr(cs, xs)) < 0.01);
  CHECK(std::abs(corr(cs, ys)) < 0.01);
}

TEST_CASE("centering_term_mc: constant transform collapses to the constant") {
  const CosineDesign design;
  const std::array<double, 1> at{0.3};
  const Transform c3 = Transform::tabulated({-100.0, 100.0}, {3.0, 3.0});
  const double got = ipcw::centering_term_mc(0.2, at, c3,
                                             KernelSpec::epanechnikov(1),
                                             design, 20000, 99);
  CHECK(got == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("centering_term_mc: small bandwidth approaches p(0)") {
  const CosineDesign design;
  const std::array<double, 1> at{0.0};
  const double got = ipcw::centering_term_mc(
      0.05, at, design.response_transform(), KernelSpec::epanechnikov(1),
      design, 1000000, 2024);
  CHECK(got == doctest::Approx(0.75).epsilon(0.0134));  // within 0.01
}

TEST_CASE("centering_term_mc: symmetric design points agree") {
  const CosineDesign design;
  const std::array<double, 1> pos{0.6};
  const std::array<double, 1> neg{-0.6};
  const double a = ipcw::centering_term_mc(0.15, pos,
                                           design.response_transform(),
                                           KernelSpec::epanechnikov(1),
                                           design, 1000000, 5);
  const double b = ipcw::centering_term_mc(0.15, neg,
                                           design.response_transform(),
                                           KernelSpec::epanechnikov(1),
                                           design, 1000000, 6);
  CHECK(a == doctest::Approx(b).epsilon(0.02));
}

TEST_CASE("centering_term_mc: input validation") {
  const CosineDesign design;
  const std::array<double, 1> at{0.0};
  CHECK_THROWS_AS(
      ipcw::centering_term_mc(0.1, at, Transform::identity(),
                              KernelSpec::epanechnikov(1), design, 100, 1),
      ipcw::ConfigError);
}

TEST_CASE("design closed forms: variance truth and covariate density") {
  // sigma^2(x) = log(1 + 10 p(x)) - p(x)^2
  const double p0 = 0.75;
  CHECK(CosineDesign::ipcw_variance_truth(0.0) ==
        doctest::Approx(std::log(1.0 + 10.0 * p0) - p0 * p0).epsilon(1e-15));
  CHECK(CosineDesign::covariate_density(0.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-15));
  CHECK(CosineDesign::censoring_cdf(-0.5) == 0.0);
  CHECK(CosineDesign::censoring_cdf(0.25) == 0.25);
  CHECK(CosineDesign::censoring_cdf(2.0) == 1.0);
}

TEST_CASE("epsilon1_study: determinism and the emitted-record identity") {
  const SimConfig cfg{300, 2468};
  const auto grid = grid201();
  const auto r1 = ipcw::epsilon1_study(cfg, 0.2, 3, grid, study_cfg(0.2), 1);
  const auto r2 = ipcw::epsilon1_study(cfg, 0.2, 3, grid, study_cfg(0.2), 1);
  REQUIRE(r1.records.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r1.records[i].epsilon1 == r2.records[i].epsilon1);
    CHECK(r1.records[i].sup_error == r2.records[i].sup_error);
    // epsilon1 identity holds exactly on the emitted fields
    CHECK(r1.records[i].epsilon1 ==
          r1.records[i].sup_error - r1.records[i].halfwidth_at_x0);
  }
}

TEST_CASE("studies are independent of the thread count") {
  const SimConfig cfg{250, 1357};
  const auto grid = grid201();
  const auto serial =
      ipcw::epsilon1_study(cfg, 0.25, 12, grid, study_cfg(0.25), 1);
  const auto parallel =
      ipcw::epsilon1_study(cfg, 0.25, 12, grid, study_cfg(0.25), 4);
  REQUIRE(serial.records.size() == parallel.records.size());
  for (std::size_t i = 0; i < serial.records.size(); ++i) {
    CHECK(serial.records[i].epsilon1 == parallel.records[i].epsilon1);
    CHECK(serial.records[i].sup_error == parallel.records[i].sup_error);
    CHECK(serial.records[i].x0 == parallel.records[i].x0);
    CHECK(serial.records[i].censoring_rate ==
          parallel.records[i].censoring_rate);
  }
  CHECK(serial.to_json().dump() == parallel.to_json().dump());
}

TEST_CASE("coverage_study: extreme inflations") {
  // windows wide enough that no grid point sees only censored observations
  // (an all-censored window has a zero-width band and can never cover)
  const SimConfig cfg{400, 11};
  std::vector<double> grid;
  for (int i = 0; i < 41; ++i) grid.push_back(-0.8 + i / 25.0);
  const auto wide = ipcw::coverage_study(cfg, study_cfg(0.5), 30, grid, 1e9);
  CHECK(wide.simultaneous_coverage == doctest::Approx(1.0));
  const auto nil = ipcw::coverage_study(cfg, study_cfg(0.5), 30, grid, 0.0);
  CHECK(nil.simultaneous_coverage == doctest::Approx(0.0));
}

TEST_CASE("quantile helper") {
  CHECK(ipcw::quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.5) == 3.0);
  CHECK(ipcw::quantile({4.0, 1.0, 3.0, 2.0}, 0.5) ==
        doctest::Approx(2.5).epsilon(1e-15));
  CHECK(ipcw::quantile({1.0, 2.0}, 0.0) == 1.0);
  CHECK(ipcw::quantile({1.0, 2.0}, 1.0) == 2.0);
}
