#include "ascent/estimate.hpp"

#include <cmath>
#include <stdexcept>

namespace ascent {

double data_norm(const EstimateSet& d) {
  double s = 0.0;
  for (const TargetEstimate& t : d.targets) {
    s += dot(t.xhat, t.xhat);
    const double f = t.info.frob_norm();
    s += f * f;
  }
  return std::sqrt(s);
}

double data_distance(const EstimateSet& a, const EstimateSet& b) {
  if (a.size() != b.size()) throw std::invalid_argument("data_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec2 dx = a[i].xhat - b[i].xhat;
    s += dot(dx, dx);
    const double f = (a[i].info - b[i].info).frob_norm();
    s += f * f;
  }
  return std::sqrt(s);
}

}  // namespace ascent
