#include "pinchlab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pinchlab/constants.hpp"

namespace pinchlab {

BallSample ball_sample(const ManifoldSpec& spec, const Grid2D& grid, double ball_r) {
    if (ball_r > grid.r.back()) throw DomainError("ball not covered by grid");
    const int n = spec.n;
    const double orbit = unit_sphere_area(n - 1);
    BallSample s;
    s.ball_r = ball_r;
    for (std::size_t i = 0; i < grid.nr(); ++i) {
        if (grid.r[i] > ball_r) break;
        const double dr = 0.5 * ((i + 1 < grid.nr() ? grid.r[i + 1] : grid.r[i]) -
                                 (i > 0 ? grid.r[i - 1] : grid.r[i]));
        const double f = spec.f(grid.r[i]);
        for (std::size_t j = 0; j < grid.nphi(); ++j) {
            const double dphi = 0.5 * ((j + 1 < grid.nphi() ? grid.phi[j + 1] : grid.phi[j]) -
                                       (j > 0 ? grid.phi[j - 1] : grid.phi[j]));
            const double w =
                orbit * std::pow(f * std::sin(grid.phi[j]), n - 2) * f * dr * dphi;
            if (w <= 0.0) continue;
            s.node.push_back(grid.idx(i, j));
            s.ri.push_back(i);
            s.pj.push_back(j);
            s.weight.push_back(w);
            s.total += w;
        }
    }
    return s;
}

double ball_average(const BallSample& s, const std::vector<double>& values,
                    const std::vector<char>* mask) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < s.node.size(); ++k) {
        if (mask && !(*mask)[s.node[k]]) continue;
        num += s.weight[k] * values[s.node[k]];
        den += s.weight[k];
    }
    if (den <= 0.0) throw DomainError("empty sample ball");
    return num / den;
}

RegionPoints sample_region_points(const ManifoldSpec& spec, double r_lo, double r_hi,
                                  int count, std::uint64_t seed) {
    if (!(r_hi > r_lo) || r_lo < 0.0) throw DomainError("bad region radii");
    const int n = spec.n;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    // inverse-CDF table for the radial density f(r)^{n-1}
    const int m = 2048;
    std::vector<double> rs(m), cdf(m);
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        rs[i] = r_lo + (r_hi - r_lo) * i / (m - 1);
        if (i > 0)
            acc += 0.5 * (std::pow(spec.f(rs[i]), n - 1) + std::pow(spec.f(rs[i - 1]), n - 1)) *
                   (rs[i] - rs[i - 1]);
        cdf[i] = acc;
    }
    for (double& c : cdf) c /= acc;

    RegionPoints out;
    out.r.reserve(count);
    for (int k = 0; k < count; ++k) {
        const double u = uni(rng);
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        std::size_t i = std::min<std::size_t>(it - cdf.begin(), m - 1);
        if (i == 0) i = 1;
        const double t = (u - cdf[i - 1]) / std::max(cdf[i] - cdf[i - 1], 1e-300);
        out.r.push_back(rs[i - 1] + t * (rs[i] - rs[i - 1]));
        // phi with density sin^{n-2} by rejection
        double phi;
        for (;;) {
            phi = kPi * uni(rng);
            if (uni(rng) <= std::pow(std::sin(phi), n - 2)) break;
        }
        out.phi.push_back(phi);
        out.theta.push_back(2.0 * kPi * uni(rng));
    }
    return out;
}

std::vector<std::vector<double>> euclidean_ball_points(int n,
                                                       const std::vector<double>& center,
                                                       double radius, int count,
                                                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<std::vector<double>> pts(count, std::vector<double>(n));
    for (auto& p : pts) {
        double norm = 0.0;
        for (double& c : p) {
            c = gauss(rng);
            norm += c * c;
        }
        norm = std::sqrt(norm);
        const double rad = radius * std::pow(uni(rng), 1.0 / n);
        for (int t = 0; t < n; ++t) p[t] = center[t] + p[t] / norm * rad;
    }
    return pts;
}

} // namespace pinchlab
