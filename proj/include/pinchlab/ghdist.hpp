#pragma once

#include <cstdint>
#include <vector>

#include "pinchlab/geodesic.hpp"
#include "pinchlab/manifold.hpp"
#include "pinchlab/sampling.hpp"

namespace pinchlab {

/// Random points of a centered ball (r_lo = 0) or annulus with their pairwise
/// geodesic distances. Points follow the volume density; distances come from
/// the production geodesic engine (closed forms where available, otherwise
/// the graph solver at the supplied resolution, parallel over pairs).
struct MetricSample {
    RegionPoints pts;
    std::vector<double> dist; // count x count, row-major
    double r_lo = 0.0, r_hi = 0.0;
    int count = 0;

    double d(int i, int j) const { return dist[i * count + j]; }
};

MetricSample metric_sample(const ManifoldSpec& spec, double r_lo, double r_hi, int count,
                           std::uint64_t seed, const GeoResolution& res = {});

/// Best cone through the sample: the correspondence keeps the polar
/// coordinates (r, omega) and compares against the cone of slope a; the
/// distortion D(a) = max over pairs |d_M - d_{C(a)}| is minimized over a.
struct ConeFit {
    double slope = 1.0;
    double distortion = 0.0;
    double gh_bound = 0.0; // distortion / 2, a valid GH upper bound
};

/// Max pairwise defect of the coordinate correspondence at a fixed slope.
double cone_distortion(const MetricSample& sample, double slope, int subset = 0);

ConeFit best_fit_cone(const MetricSample& sample);

/// One family member of the pinching-versus-distance sweep.
struct GhSweepRow {
    double param = 0.0;       // family parameter (transition width; 0 = exact)
    double s = 0.0;
    double W_pinch = 0.0;     // |A(s/2) - A(s/4)|
    double F_pinch = 0.0;     // |F(4s) - F(2s)|
    double gh_ball = 0.0;     // fitted distortion/2 over B(s), divided by s
    double gh_annulus = 0.0;  // same over the annulus [s, 2s]
    double slope_ball = 1.0, slope_annulus = 1.0;
    double pinch_err = 0.0;   // quadrature error of the pinching columns
};

/// Sweep a family of specs at scale s; per-member W/F pinching from the
/// radial profile and scaled GH bounds for the centered ball and annulus.
std::vector<GhSweepRow> pinching_vs_gh_sweep(const std::vector<ManifoldSpec>& family,
                                             const std::vector<double>& params, double s,
                                             int count, std::uint64_t seed,
                                             const GeoResolution& res = {});

/// Least-squares exponent of gh against pinching across the sweep rows
/// (log-log; non-positive rows skipped).
double fitted_exponent(const std::vector<GhSweepRow>& rows, bool use_ball);

} // namespace pinchlab
