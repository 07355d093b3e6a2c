#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace pinchlab {

/// Axisymmetric (r, phi) grid: log-spaced radii, uniform polar angle [0, pi].
struct Grid2D {
    std::vector<double> r;
    std::vector<double> phi;

    std::size_t nr() const { return r.size(); }
    std::size_t nphi() const { return phi.size(); }
    std::size_t idx(std::size_t i, std::size_t j) const { return i * nphi() + j; }
    std::size_t size() const { return nr() * nphi(); }

    static Grid2D make(double r_min, double r_max, int nr, int nphi) {
        Grid2D g;
        g.r.resize(nr);
        const double lr0 = std::log(r_min), lr1 = std::log(r_max);
        for (int i = 0; i < nr; ++i)
            g.r[i] = std::exp(lr0 + (lr1 - lr0) * i / (nr - 1));
        g.phi.resize(nphi);
        const double pi = 3.14159265358979323846;
        for (int j = 0; j < nphi; ++j) g.phi[j] = pi * j / (nphi - 1);
        return g;
    }

    /// Index of the radial node closest to r0.
    std::size_t nearest_r(double r0) const {
        std::size_t best = 0;
        double d = std::abs(r[0] - r0);
        for (std::size_t i = 1; i < r.size(); ++i)
            if (std::abs(r[i] - r0) < d) { d = std::abs(r[i] - r0); best = i; }
        return best;
    }
};

} // namespace pinchlab
