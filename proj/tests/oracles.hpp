#pragma once

// Brute-force references for the unit and acceptance suites. Nothing here
// calls into the engine's membership or defuzzification code.

#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

namespace oracle {

/// Shape corners (a, b, c, d); a triangle repeats its apex.
using Corners = std::array<double, 4>;

/// min/max closed form of a trapezoid, shoulders extending to +-infinity.
inline double trapezoid(const Corners& p, double x) {
  const auto [a, b, c, d] = p;
  const double rise = a == b ? 1.0 : (x - a) / (b - a);
  const double fall = c == d ? 1.0 : (d - x) / (d - c);
  return std::max(0.0, std::min({rise, 1.0, fall}));
}

/// Linear interpolation in a dense table sampled from the closed form.
inline double dense_grid(const Corners& p, double lo, double hi, double x, std::size_t n = 200001) {
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    ys[i] = trapezoid(p, xs[i]);
  }
  const auto it = std::lower_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return ys.front();
  if (it == xs.end()) return ys.back();
  const auto j = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return ys[j - 1] + t * (ys[j] - ys[j - 1]);
}

struct Firing {
  double strength;
  Corners consequent;
};

/// Centroid of max_r min(alpha_r, mu_r(y)) over [lo, hi] by the midpoint rule.
inline double centroid(const std::vector<Firing>& firings, double lo, double hi,
                       std::size_t cells = 100000) {
  const double h = (hi - lo) / static_cast<double>(cells);
  double area = 0.0, moment = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double y = lo + (static_cast<double>(i) + 0.5) * h;
    double mu = 0.0;
    for (const auto& f : firings) mu = std::max(mu, std::min(f.strength, trapezoid(f.consequent, y)));
    area += mu;
    moment += mu * y;
  }
  return moment / area;
}

}  // namespace oracle
