#pragma once

#include <vector>

#include "pinchlab/green.hpp"
#include "pinchlab/grid.hpp"
#include "pinchlab/manifold.hpp"

namespace pinchlab {

/// Hessian blocks of an axisymmetric scalar field in the orthonormal frame
/// (e_r, e_phi, orbit directions) of dr^2 + f^2 (dphi^2 + sin^2 phi g_{S^{n-2}}):
///   H_rr = h_rr
///   H_rp = (h_rp - (f'/f) h_p) / f
///   H_pp = h_pp / f^2 + (f'/f) h_r
///   H_aa = (f'/f) h_r + cos(phi)/(f^2 sin(phi)) h_p   (n-2 copies)
/// Validated against the Euclidean identity Hess d^2 = 2g.
struct TensorField {
    const ManifoldSpec* spec = nullptr;
    Grid2D grid;
    std::vector<double> H_rr, H_rp, H_pp, H_aa;
    std::vector<double> lap;    // trace
    std::vector<double> tf2;    // |H - (trace/n) g|^2
    std::vector<double> full2;  // |H|^2
    std::vector<char> valid;    // interior nodes (finite differences defined)
};

/// Finite-difference Hessian blocks of an arbitrary node field h.
TensorField hessian_blocks(const ManifoldSpec& spec, const Grid2D& grid,
                           const std::vector<double>& h);

/// Hessian of h = b^2 for the given field (pole-ball nodes stay flagged valid;
/// consumers exclude them via BField::near_pole where required).
TensorField tracefree_hessian_field(const BField& field);

/// Closed-form |TF Hess b^2|^2 for a center-pole radial field:
/// (n-1)/n * (h'' - (f'/f) h')^2 with h = b^2. Oracle for the grid route.
std::vector<double> radial_tf2(const ManifoldSpec& spec, const RadialProfile& prof,
                               const std::vector<double>& r);

/// Ric(X, X) for an axisymmetric vector with radial part xr and tangential
/// magnitude xt, from the diagonal Ricci eigenvalues.
double ricci_quadratic(const ManifoldSpec& spec, double r, double xr, double xt);

struct Region {
    enum Flavor { Sublevel, Superlevel, BAnnulus, CenterBall } flavor = Sublevel;
    double a = 0.0; // level / inner level / ball radius
    double c = 0.0; // outer level for BAnnulus
};

struct EnergyValue {
    double value = 0.0;
    double error = 0.0; // |full - coarse| quadrature estimate
};

/// Integral of |TF|^2 b^w over the region, w in {0, -2, -n}, with the
/// axisymmetric volume weight. The pole-regularization ball is excluded for
/// negative weights when the region reaches the pole.
EnergyValue weighted_energy(const TensorField& tf, const BField& field, Region region,
                            int w);

/// Average of integrand over a center ball (same machinery, divided by volume).
EnergyValue averaged_energy(const TensorField& tf, const BField& field, double ball_r,
                            int w);

struct PinchMarginRow {
    std::string inequality;
    double scale_s = 0.0, scale_t = 0.0;
    double lhs = 0.0, rhs = 0.0; // rhs without the unknown constant where noted
    double ratio = 0.0;
    double lhs_err = 0.0, rhs_err = 0.0;
    bool pass = false; // only meaningful for the explicit-constant rows
};

/// Inequality checks for one field at scale s (ball radius r for the averaged
/// rows). Produces rows:
///   annulus-energy  : int_{2s<=b<=4s} |TF|^2 b^{-n}  <=  2*4^{n-2} W_{s,2s}   (explicit C=4)
///   sublevel-energy : r^{-n} int_{b<=r} |TF|^2       <=  2^{n+2} F_{r,2r}      (explicit C=2)
///   ball-average    : avg_{B_p(r)} |TF|^2 vs (s/r)^n F_{s,2s}                 (ratio only)
///   grad-variance   : r^{-2} avg | |grad b|^2 - c |^2 vs avg |TF|^2 b^{-2}    (ratio only)
/// The F/W values come from the supplied profile.
struct MonotoneProfile; // defined in monotone.hpp
std::vector<PinchMarginRow> pinching_inequality_check(const BField& field,
                                                      const TensorField& tf,
                                                      const MonotoneProfile& profile,
                                                      double s, double ball_r);

/// Two-piece split of int_{B_p(r)} |TF|^2 b^{-2} at the optimal eta ball
/// around the pole, with H estimated from the TF norm extrapolated to the
/// pole along the axis (reported as a lower estimate).
struct EtaSplitReport {
    double eta = 0.0;
    double H_est = 0.0;
    double piece_ball = 0.0;   // int over {d_x <= eta}
    double piece_rest = 0.0;
    double sup_d2_over_b2 = 1.0;
    double bound_ball = 0.0; // sup(d^2/b^2) * H * eta^{n-2}, constant-free form
};
EtaSplitReport eta_split(const BField& field, const TensorField& tf,
                         const MonotoneProfile& profile, double s, double ball_r);

/// (avg |u - avg u|^2) / (diam^2 avg |grad u|^2) over a center ball.
double poincare_quotient(const ManifoldSpec& spec, const Grid2D& grid,
                         const std::vector<double>& u, const std::vector<double>& grad2,
                         double ball_r);

} // namespace pinchlab
