#include "ipcw/transform.hpp"

#include <algorithm>

namespace ipcw {

Transform Transform::identity() { return Transform(Kind::identity); }

Transform Transform::indicator_leq(double threshold) {
  Transform t(Kind::indicator_leq);
  t.threshold_ = threshold;
  return t;
}

Transform Transform::tabulated(std::vector<double> knots,
                               std::vector<double> values) {
  if (knots.size() < 2 || knots.size() != values.size()) {
    throw ConfigError("tabulated transform: need >= 2 matching knot/value pairs");
  }
  if (!std::is_sorted(knots.begin(), knots.end())) {
    throw ConfigError("tabulated transform: knots must be sorted");
  }
  Transform t(Kind::tabulated);
  t.knots_ = std::move(knots);
  t.values_ = std::move(values);
  return t;
}

Transform Transform::with_upper_cutoff(double tau0) const {
  Transform t = *this;
  t.upper_cutoff_ = tau0;
  return t;
}

double Transform::operator()(double y) const {
  if (upper_cutoff_ && y > *upper_cutoff_) return 0.0;
  switch (kind_) {
    case Kind::identity:
      return y;
    case Kind::indicator_leq:
      return y <= threshold_ ? 1.0 : 0.0;
    case Kind::tabulated: {
      if (y <= knots_.front()) return values_.front();
      if (y >= knots_.back()) return values_.back();
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), y);
      const std::size_t k = static_cast<std::size_t>(it - knots_.begin());
      const double x0 = knots_[k - 1], x1 = knots_[k];
      const double y0 = values_[k - 1], y1 = values_[k];
      return y0 + (y1 - y0) * (y - x0) / (x1 - x0);
    }
  }
  return 0.0;
}

}  // namespace ipcw
