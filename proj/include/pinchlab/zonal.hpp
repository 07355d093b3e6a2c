#pragma once

#include <vector>

namespace pinchlab {

/// Gegenbauer polynomials C_l^nu(c), l = 0..L, by the three-term recurrence.
/// With nu = (n-2)/2 these are the zonal spherical harmonics on S^{n-1} up to
/// normalization: the delta expansion reads
///   delta(omega, omega') = sum_l (l+nu)/(nu |S^{n-1}|) C_l^nu(<omega, omega'>).
void gegenbauer_row(double nu, int L, double c, std::vector<double>& out);

/// First derivative in c: d/dc C_l^nu = 2 nu C_{l-1}^{nu+1}.
void gegenbauer_row_deriv(double nu, int L, double c, std::vector<double>& out);

} // namespace pinchlab
