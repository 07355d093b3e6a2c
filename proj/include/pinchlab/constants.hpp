#pragma once

#include <cmath>

namespace pinchlab {

inline constexpr double kPi = 3.14159265358979323846;

/// Volume of the unit ball in R^n.
inline double unit_ball_volume(int n) {
    return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

/// Area of the unit sphere S^{n-1} in R^n.
inline double unit_sphere_area(int n) {
    return n * unit_ball_volume(n);
}

} // namespace pinchlab
