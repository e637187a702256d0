#pragma once

namespace wavelab {

// Standard mollifier profile: exp(1 - 1/(1-u^2)) for |u| < 1, else 0.
// Equals 1 at u = 0, vanishes to all orders at |u| = 1.
double mollifier(double u);

// C-infinity step: 0 for u <= 0, 1 for u >= 1, strictly increasing between.
double smoothstep(double u);

// Plateau cutoff in lambda: 1 on [c - w/2, c + w/2], supported in
// [c - w, c + w], smooth transitions.
double plateau(double lambda, double center, double w);

// Smooth periodic window on the circle: mollifier of torus distance to
// `center` scaled by `radius`. radius >= pi means the constant window 1.
double circle_window(double x, double center, double radius);

}  // namespace wavelab
