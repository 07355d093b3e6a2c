#pragma once

#include <vector>

#include "pinchlab/grid.hpp"
#include "pinchlab/manifold.hpp"

namespace pinchlab {

/// Resolution knobs for the graph shortest-path solver on the meridian
/// surface dr^2 + f(r)^2 dtheta^2.
struct GeoResolution {
    int nr = 129;        // radial nodes of the Dijkstra lattice
    int ntheta = 129;    // angular nodes over the sector [0, gamma]
    int stencil = 3;     // edge offsets up to this Chebyshev radius
    int relax_points = 192;
    bool relax = true;   // polyline relaxation after Dijkstra
};

/// Chord distance on R^n in polar form.
double euclidean_chord(double r1, double r2, double gamma);

/// Exact distance on the cone dr^2 + (a r)^2 g_S: unroll to the plane with
/// opening angle a*gamma, through the vertex when a*gamma >= pi.
double cone_unroll_distance(double a, double r1, double r2, double gamma);

/// Graph shortest path + coarse-to-fine polyline relaxation on the meridian
/// surface. Works for every kind; kept as the reference engine for tests.
double graph_geodesic_distance(const ManifoldSpec& spec, double r1, double r2,
                               double gamma, const GeoResolution& res = {});

/// Production distance: closed forms for Euclidean and exact cones, the graph
/// engine for warped profiles. gamma is the angle between the two directions
/// on the unit sphere, in [0, pi].
double geodesic_distance(const ManifoldSpec& spec, double r1, double r2, double gamma,
                         const GeoResolution& res = {});

/// Distances from a single pole on the axis to every node of an (r, phi)
/// field grid. Dijkstra over the grid, with per-node path relaxation on
/// demand for targets that need better than graph accuracy.
class DistanceField {
public:
    DistanceField(const ManifoldSpec& spec, const Grid2D& grid, double pole_r,
                  int stencil = 3);

    /// Graph-level distance at a grid node.
    double at(std::size_t i, std::size_t j) const { return dist_[grid_.idx(i, j)]; }

    /// Relaxed (high-accuracy) distance to a grid node; cached.
    double accurate(std::size_t i, std::size_t j) const;

    const Grid2D& grid() const { return grid_; }
    double pole_r() const { return pole_r_; }

private:
    std::vector<std::pair<double, double>> backtrack(std::size_t node) const;

    const ManifoldSpec spec_;
    Grid2D grid_;
    double pole_r_;
    std::vector<double> dist_;
    std::vector<int> pred_;
    mutable std::vector<double> refined_;
};

/// Relax a polyline (fixed endpoints) toward the geodesic on the meridian
/// surface and return its metric length. Coarse-to-fine Gauss-Seidel on the
/// segment energy. Exposed for the distance solvers and tests.
double relax_polyline_length(const ManifoldSpec& spec,
                             std::vector<std::pair<double, double>> path,
                             int target_points);

} // namespace pinchlab
