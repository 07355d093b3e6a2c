#pragma once

#include <cstdint>
#include <vector>

#include "pinchlab/green.hpp"
#include "pinchlab/grid.hpp"
#include "pinchlab/manifold.hpp"

namespace pinchlab {

/// Pole on the symmetry axis: radius rho >= 0 and side +1 (phi = 0) or -1
/// (phi = pi). rho = 0 is the center regardless of side.
struct AxisPole {
    double rho = 0.0;
    int side = +1;
};

/// Diagnostics of the one-dimensional almost-splitting map built from two
/// axis poles. u is the orthonormalized difference of normalized squared
/// b-functions; items follow the standard (1) Hessian average, (2) gradient
/// Gram defect, (3) sup gradient layout, each with its comparison quantity.
struct SplittingReport {
    int k = 1;
    double ball_r = 0.0;
    double delta = 0.0;
    double d01 = 0.0;        // distance between the poles
    double alpha_hat = 0.0;  // independence proxy of {x_0, x_1}
    std::vector<double> c;   // gradient normalizers c_{r,x_j}
    double A_norm = 0.0;     // |A| of the 1x1 orthonormalization

    double item1 = 0.0;      // r^2 avg_B |Hess u|^2
    double rhs1 = 0.0;       // (delta r)^{-n}(F_1 + F_0) + r^2 (E_1 + E_0)
    double item2 = 0.0;      // avg_B (|grad u|^2 - 1)^2
    double rhs2 = 0.0;       // F_1 + F_0
    double item3 = 0.0;      // sup_B |grad u|
    double sup_grad_raw = 0.0;
    double sup_lap = 0.0;    // sup_B |Delta u| (the maps are not harmonic)

    double F_pinch0 = 0.0, F_pinch1 = 0.0; // F gaps between 1/delta and 2/delta
    double sym_lhs = 0.0;    // max F gap between 2/delta and 4/delta
    double sym_rhs = 0.0;    // delta^{4+4mu} surrogate threshold (mu = 1)
    bool symmetric_ok = false;
    double energy0 = 0.0, energy1 = 0.0; // avg_B |TF Hess b^2|^2 b^{-2}
    double item1_err = 0.0;  // quadrature error of the Hessian average
};

/// Build the k = 1 splitting map from the two axis poles and evaluate every
/// report column over the centered ball of radius ball_r. The grid must
/// extend past 4/delta so the pinching levels stay inside it.
SplittingReport axis_splitting(const ManifoldSpec& spec, const Grid2D& grid, AxisPole x0,
                               AxisPole x1, double ball_r, double delta, int L);

/// Exact-kernel splitting on R^n with poles x_0 = 0, x_j = (r/2) e_j,
/// j = 1..k, evaluated on a Monte Carlo sample of the ball B(0, r). Every
/// ingredient (b = |y - x|, gradients, Hessians) is closed-form, so the items
/// vanish to roundoff; the report exercises the full assembly path.
struct EuclidSplitReport {
    int n = 3, k = 1;
    double ball_r = 0.0;
    double alpha_hat = 0.0;
    double item1 = 0.0;      // r^2 avg max_j |Hess u_j|^2
    double item2 = 0.0;      // max_ij avg (<grad u_i, grad u_j> - delta_ij)^2
    double grad_lo = 0.0, grad_hi = 0.0; // range of |grad u_i| over the sample
    double sup_lap = 0.0;
};

EuclidSplitReport euclidean_splitting(int n, int k, double ball_r, int count,
                                      std::uint64_t seed);

/// Gromov-Hausdorff distance between two finite metric spaces given by m x m
/// distance matrices (row-major), by enumeration of map-pair correspondences.
/// Exact for m <= 4; larger m falls back to permutation correspondences.
double finite_gh(const std::vector<double>& dx, const std::vector<double>& dy, int m);

/// Scaled obstruction to embedding the k+1 points into R^{k-1}:
/// alpha = min over configurations U' of d_GH(U, U') / r. Brute force for
/// k <= 3 (least-squares configuration fit, GH by enumeration); permutation
/// proxy beyond.
double independence_proxy(const std::vector<double>& dist, int k, double r);

} // namespace pinchlab
