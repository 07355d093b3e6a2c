#pragma once

#include <vector>

#include "pinchlab/green.hpp"
#include "pinchlab/manifold.hpp"

namespace pinchlab {

struct TensorField; // hessian.hpp

/// Level-indexed monotone quantities of a b-field:
///   A(s) = s^{1-n} int_{b=s} |grad b|^3 dArea   (non-increasing)
///   V(s) = s^{-n}  int_{b<=s} |grad b|^4 dV
///   F(s) = A(s) - 2(n-1) V(s)                   (non-decreasing)
/// with per-level quadrature error estimates.
struct MonotoneProfile {
    int n = 3;
    std::vector<double> s;
    std::vector<double> A, V, F;
    std::vector<double> errA, errV;
};

/// Center-pole profile through the radial shortcut
/// A(s) = s^{1-n} |S^{n-1}| f(rho_s)^{n-1} b'(rho_s)^3, rho_s = b^{-1}(s),
/// with V by radial quadrature. Errors from a half-resolution recomputation.
MonotoneProfile radial_monotone(const ManifoldSpec& spec, const RadialProfile& prof,
                                const std::vector<double>& levels);

/// General profile from a 2D field: A by marching-squares level curves with
/// the metric line element and hypersurface weight |S^{n-2}| (f sin phi)^{n-2},
/// V by cell quadrature over the sublevel set. Errors from a stride-2 pass.
MonotoneProfile grid_monotone(const BField& field, const std::vector<double>& levels);

struct PinchingReport {
    double s = 0.0, t = 0.0;
    double W = 0.0;      // |A(t) - A(s)|
    double Fpinch = 0.0; // |F(t) - F(s)|
    double err = 0.0;    // combined quadrature error of the differences
};

/// Pinching between two levels; A, F interpolated linearly on the profile.
PinchingReport pinching(const MonotoneProfile& profile, double s, double t);

/// Interpolated accessors used by the inequality checks.
double interp_A(const MonotoneProfile& profile, double s);
double interp_F(const MonotoneProfile& profile, double s);

struct DerivativeResiduals {
    double fdA = 0.0, rhsA = 0.0, resA = 0.0; // residual relative to max scale
    double fdF = 0.0, rhsF = 0.0, resF = 0.0;
};

/// Compares centered finite differences of A and F at level s against the
/// integral identities
///   A'(s) = -(s^{n-3}/2) int_{b>=s} (|TF Hess b^2|^2 + Ric(grad b^2, grad b^2)) b^{2-2n} dV
///   F'(s) = +(s^{-1-n}/2) int_{b<=s} (same integrand) dV.
DerivativeResiduals derivative_identity_check(const BField& field, const TensorField& tf,
                                              const MonotoneProfile& profile, double s);

} // namespace pinchlab
