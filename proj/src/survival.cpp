#include "ipcw/survival.hpp"

#include <algorithm>
#include <numeric>

namespace ipcw {

StepFunction km_censoring(std::span<const double> z,
                          std::span<const int> delta) {
  const std::size_t n = z.size();
  if (n == 0) throw ConfigError("km_censoring: empty dataset");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&z](std::size_t a, std::size_t b) { return z[a] < z[b]; });

  std::vector<double> jumps;
  std::vector<double> values;
  double survival = 1.0;  // running product, equals 1 - G*_n

  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && z[order[j]] == z[order[i]]) ++j;
    // every observation in the tie group shares N_n(Z_i) = n - i
    const double risk = static_cast<double>(n - i);
    bool changed = false;
    for (std::size_t k = i; k < j; ++k) {
      if (delta[order[k]] == 0) {
        survival *= (risk - 1.0) / risk;
        changed = true;
      }
    }
    if (changed) {
      jumps.push_back(z[order[i]]);
      values.push_back(1.0 - survival);
    }
    i = j;
  }
  return StepFunction(std::move(jumps), std::move(values), 0.0);
}

StepFunction km_censoring(const Dataset& data) {
  return km_censoring(data.z_values(), data.delta_values());
}

}  // namespace ipcw
