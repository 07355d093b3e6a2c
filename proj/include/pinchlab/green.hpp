#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "pinchlab/grid.hpp"
#include "pinchlab/manifold.hpp"

namespace pinchlab {

/// Minimal positive Green function with a pole at the center, radial profile.
///
/// Normalization ledger: G_D solves Delta G_D = -delta (so G_D = |S^{n-1}|^{-1}
/// int_r^inf f^{1-n}), G_CM = n(n-2) omega_n G_D, and
/// b = b_infty^{-1} G_CM^{1/(2-n)}. On exact cones with vertex pole b equals
/// the distance from the vertex.
struct RadialProfile {
    const ManifoldSpec* spec = nullptr;
    std::vector<double> r;
    std::vector<double> G_D;
    std::vector<double> b_val;
    std::vector<double> db_val;
    double b_infty = 1.0;
    double tail_c0 = 0.0; // b = r + tail_c0 beyond the grid

    double b(double rr) const;       // Hermite interpolation, analytic tail
    double db(double rr) const;
    double d2b(double rr) const;     // from the harmonicity relation
    double b_inverse(double s) const;
};

RadialProfile radial_green(const ManifoldSpec& spec, const Grid2D& grid);

/// Axisymmetric b-field for a pole on the axis at radius rho (rho = 0 gives
/// the radial profile sampled on the grid).
///
/// Off-center fields are assembled from a zonal mode expansion of G_D with the
/// leading singularity split off in closed form: the chordal comparison kernel
/// S = kappa ((r-rho)^2 + 4 f(r) f(rho) sin^2(phi/2))^{(2-n)/2} has exactly
/// computable Gegenbauer coefficients, so only the smooth remainder is summed
/// mode by mode and the truncation tail stays small near the pole sphere.
struct BField {
    const ManifoldSpec* spec = nullptr;
    Grid2D grid;
    double rho = 0.0;
    int L = 0;
    double b_infty = 1.0;
    std::vector<double> b;                // node values
    std::vector<double> db_dr;            // orthonormal radial gradient
    std::vector<double> db_dphi_over_f;   // orthonormal angular gradient
    double mode_tail_estimate = 0.0;

    double grad_norm(std::size_t i, std::size_t j) const {
        const double gr = db_dr[grid.idx(i, j)], gp = db_dphi_over_f[grid.idx(i, j)];
        return std::sqrt(gr * gr + gp * gp);
    }
    /// True when the node lies inside the pole-regularization ball
    /// (5 grid cells around the pole).
    bool near_pole(std::size_t i, std::size_t j) const;

    void export_csv(const std::string& path) const;
};

BField radial_bfield(const ManifoldSpec& spec, const Grid2D& grid);
BField offcenter_green(const ManifoldSpec& spec, double rho, int L, const Grid2D& grid);

/// Closeness diagnostics over the geodesic ball of radius ball_r around the
/// field's pole: (sup |b^2/d^2 - 1|, |avg |grad b|^2 - 1|). d is the geodesic
/// distance from the pole; the pole-regularization ball is excluded.
std::pair<double, double> uniform_estimates(const BField& field, double ball_r);

} // namespace pinchlab
