#pragma once

#include <cstdint>
#include <vector>

#include "pinchlab/grid.hpp"
#include "pinchlab/manifold.hpp"

namespace pinchlab {

/// Quadrature nodes for a ball around the center: every grid node with
/// r <= ball_r, weighted by the axisymmetric volume element
/// |S^{n-2}| (f sin phi)^{n-2} f dr dphi.
struct BallSample {
    std::vector<std::size_t> node; // grid.idx values
    std::vector<std::size_t> ri, pj;
    std::vector<double> weight;
    double total = 0.0;
    double ball_r = 0.0;
};

BallSample ball_sample(const ManifoldSpec& spec, const Grid2D& grid, double ball_r);

/// Weighted average of per-node values over the sample; mask (optional, same
/// layout as the grid) drops nodes with mask == 0 and renormalizes.
double ball_average(const BallSample& s, const std::vector<double>& values,
                    const std::vector<char>* mask = nullptr);

/// Stratified random points (r, phi, theta) in a ball or annulus around the
/// center, density proportional to the volume element. theta is the first
/// orbit angle; together with phi it determines pairwise angles via
/// cos gamma = cos phi cos phi' + sin phi sin phi' cos(theta - theta').
struct RegionPoints {
    std::vector<double> r, phi, theta;
};

RegionPoints sample_region_points(const ManifoldSpec& spec, double r_lo, double r_hi,
                                  int count, std::uint64_t seed);

/// Uniform points in the Euclidean ball B(center, radius) in R^n.
std::vector<std::vector<double>> euclidean_ball_points(int n,
                                                       const std::vector<double>& center,
                                                       double radius, int count,
                                                       std::uint64_t seed);

} // namespace pinchlab
