#include "ipcw/kernels.hpp"

#include <array>
#include <cmath>

#include "doctest.h"
#include "ipcw/rng.hpp"
#include "oracles.hpp"

using ipcw::KernelSpec;

TEST_CASE("kernel evaluation: closed-form values") {
  const KernelSpec k1 = KernelSpec::epanechnikov(1);
  const std::array<double, 1> zero{0.0};
  CHECK(k1(zero) == doctest::Approx(0.75).epsilon(1e-15));

  const std::array<double, 1> outside{1.2};
  CHECK(k1(outside) == 0.0);

  const KernelSpec k2 = KernelSpec::epanechnikov(2);
  const std::array<double, 2> origin{0.0, 0.0};
  CHECK(k2(origin) == doctest::Approx(0.5625).epsilon(1e-15));
}

TEST_CASE("kernel evaluation: dimension mismatch") {
  const KernelSpec k2 = KernelSpec::epanechnikov(2);
  const std::array<double, 1> u{0.0};
  CHECK_THROWS_AS(k2(u), ipcw::ConfigError);
}

TEST_CASE("kernel L2 norms: closed forms against quadrature oracle") {
  CHECK(KernelSpec::box(1).l2_norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(KernelSpec::epanechnikov(1).l2_norm() ==
        doctest::Approx(0.6).epsilon(1e-12));
  CHECK(KernelSpec::epanechnikov(2).l2_norm() ==
        doctest::Approx(0.36).epsilon(1e-12));

  for (const auto& [spec, profile] :
       {std::pair<KernelSpec, double (*)(double)>{KernelSpec::epanechnikov(1),
                                                  oracle::epan},
        {KernelSpec::box(1), oracle::box},
        {KernelSpec::triangular(1), oracle::triangular}}) {
    const double r = spec.support_radius();
    const double l2 = oracle::integrate(
        [profile](double u) { return profile(u) * profile(u); }, -r, r);
    CHECK(spec.l2_norm() == doctest::Approx(l2).epsilon(1e-8));
  }
}

TEST_CASE("kernels integrate to one") {
  for (const auto& [spec, profile] :
       {std::pair<KernelSpec, double (*)(double)>{KernelSpec::epanechnikov(1),
                                                  oracle::epan},
        {KernelSpec::box(1), oracle::box},
        {KernelSpec::triangular(1), oracle::triangular}}) {
    const double r = spec.support_radius();
    const double mass = oracle::integrate(profile, -r, r);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    // the library profile agrees with the restated one
    for (double u = -r; u <= r; u += 0.01) {
      CHECK(spec.profile(u) == doctest::Approx(profile(u)).epsilon(1e-15));
    }
  }
}

TEST_CASE("kernels vanish outside the support cube") {
  ipcw::Rng rng(42);
  for (const KernelSpec& spec :
       {KernelSpec::epanechnikov(2), KernelSpec::box(2),
        KernelSpec::triangular(3)}) {
    const double r = spec.support_radius();
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> u(static_cast<std::size_t>(spec.dim()));
      for (double& v : u) v = rng.uniform(-3.0, 3.0);
      // push one coordinate outside
      const std::size_t j = rng.next_u64() % u.size();
      u[j] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(r, 4.0 * r);
      CHECK(spec(u) == 0.0);
    }
  }
}

TEST_CASE("product kernels factor over coordinates") {
  ipcw::Rng rng(7);
  const KernelSpec k1 = KernelSpec::triangular(1);
  const KernelSpec k3 = KernelSpec::triangular(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> u(3);
    for (double& v : u) v = rng.uniform(-1.5, 1.5);
    double prod = 1.0;
    for (const double v : u) {
      const std::array<double, 1> one{v};
      prod *= k1(one);
    }
    CHECK(k3(u) == prod);  // exact: same multiplications
  }
  CHECK(k3.l2_norm() ==
        doctest::Approx(std::pow(k1.l2_norm(), 3)).epsilon(1e-8));
}

TEST_CASE("custom kernels: normalization and sign checks") {
  // cosine bump on [-1/2, 1/2]: (pi/2) cos(pi u) / 2... normalized below
  const auto bump = [](double u) {
    return std::abs(u) < 0.5 ? 0.5 * M_PI * std::cos(M_PI * u) : 0.0;
  };
  const KernelSpec custom = KernelSpec::custom(bump, 0.5, 1);
  CHECK(custom.nonnegative());
  const double l2 = oracle::integrate(
      [&bump](double u) { return bump(u) * bump(u); }, -0.5, 0.5);
  CHECK(custom.l2_norm() == doctest::Approx(l2).epsilon(1e-8));

  // not normalized -> rejected
  CHECK_THROWS_AS(
      KernelSpec::custom([](double) { return 1.0; }, 1.0, 1),
      ipcw::ConfigError);

  // signed kernel rejected unless explicitly allowed
  const auto signed_profile = [](double u) {
    return std::abs(u) < 1.0 ? 1.125 - 1.875 * u * u : 0.0;  // dips negative
  };
  CHECK_THROWS_AS(KernelSpec::custom(signed_profile, 1.0, 1),
                  ipcw::ConfigError);
  const KernelSpec accepted = KernelSpec::custom(signed_profile, 1.0, 1,
                                                 /*allow_signed=*/true);
  CHECK_FALSE(accepted.nonnegative());
}

TEST_CASE("kernel lookup by name") {
  CHECK(KernelSpec::from_name("epanechnikov").family() ==
        ipcw::KernelFamily::epanechnikov);
  CHECK(KernelSpec::from_name("box").support_radius() == 0.5);
  CHECK(KernelSpec::from_name("triangular").name() == "triangular");
  CHECK_THROWS_AS(KernelSpec::from_name("gauss"), ipcw::ConfigError);
}
