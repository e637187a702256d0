#include "wavelab/smooth.hpp"

#include <cmath>
#include <numbers>

namespace wavelab {

double mollifier(double u) {
  const double u2 = u * u;
  if (u2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u2));
}

namespace {
double half_exp(double a) { return a > 0.0 ? std::exp(-1.0 / a) : 0.0; }
}  // namespace

double smoothstep(double u) {
  const double g0 = half_exp(u);
  const double g1 = half_exp(1.0 - u);
  return g0 / (g0 + g1);
}

double plateau(double lambda, double center, double w) {
  const double d = std::abs(lambda - center);
  if (d <= w / 2) return 1.0;
  if (d >= w) return 0.0;
  return smoothstep((w - d) / (w / 2));
}

double circle_window(double x, double center, double radius) {
  if (radius >= std::numbers::pi) return 1.0;
  double d = std::fmod(std::abs(x - center), 2.0 * std::numbers::pi);
  if (d > std::numbers::pi) d = 2.0 * std::numbers::pi - d;
  return mollifier(d / radius);
}

}  // namespace wavelab
