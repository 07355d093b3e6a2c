#include "pinchlab/ghdist.hpp"

#include <algorithm>
#include <cmath>

#include "pinchlab/grid.hpp"
#include "pinchlab/monotone.hpp"
#include "pinchlab/green.hpp"
#include "pinchlab/parallel.hpp"
#include "pinchlab/stats.hpp"

namespace pinchlab {

namespace {

double pair_angle(const RegionPoints& p, int i, int j) {
    const double c = std::cos(p.phi[i]) * std::cos(p.phi[j]) +
                     std::sin(p.phi[i]) * std::sin(p.phi[j]) *
                         std::cos(p.theta[i] - p.theta[j]);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

} // namespace

MetricSample metric_sample(const ManifoldSpec& spec, double r_lo, double r_hi, int count,
                           std::uint64_t seed, const GeoResolution& res) {
    if (count < 32) throw DomainError("sample too small");
    MetricSample out;
    out.r_lo = r_lo;
    out.r_hi = r_hi;
    out.count = count;
    out.pts = sample_region_points(spec, r_lo, r_hi, count, seed);
    out.dist.assign(static_cast<std::size_t>(count) * count, 0.0);

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(count) * (count - 1) / 2);
    for (int i = 0; i < count; ++i)
        for (int j = i + 1; j < count; ++j) pairs.emplace_back(i, j);
    parallel_for(static_cast<std::ptrdiff_t>(pairs.size()), [&](std::ptrdiff_t q) {
        const auto [i, j] = pairs[static_cast<std::size_t>(q)];
        const double d = geodesic_distance(spec, out.pts.r[i], out.pts.r[j],
                                           pair_angle(out.pts, i, j), res);
        out.dist[static_cast<std::size_t>(i) * count + j] = d;
        out.dist[static_cast<std::size_t>(j) * count + i] = d;
    });
    return out;
}

double cone_distortion(const MetricSample& sample, double slope, int subset) {
    const int m = subset > 0 ? std::min(subset, sample.count) : sample.count;
    double worst = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const double dc = cone_unroll_distance(slope, sample.pts.r[i],
                                                   sample.pts.r[j],
                                                   pair_angle(sample.pts, i, j));
            worst = std::max(worst, std::abs(sample.d(i, j) - dc));
        }
    return worst;
}

ConeFit best_fit_cone(const MetricSample& sample) {
    if (sample.count < 32) throw DomainError("sample too small");
    // coarse scan over the admissible slopes, then ternary refinement
    double best_a = 1.0, best_d = cone_distortion(sample, 1.0);
    for (int k = 0; k < 96; ++k) {
        const double a = 0.05 + (1.0 - 0.05) * k / 95.0;
        const double d = cone_distortion(sample, a);
        if (d < best_d) { best_d = d; best_a = a; }
    }
    double lo = std::max(0.05, best_a - 0.02), hi = std::min(1.0, best_a + 0.02);
    for (int it = 0; it < 40; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (cone_distortion(sample, m1) < cone_distortion(sample, m2)) hi = m2;
        else lo = m1;
    }
    const double a = 0.5 * (lo + hi);
    const double d = cone_distortion(sample, a);
    ConeFit fit;
    if (d <= best_d) { fit.slope = a; fit.distortion = d; }
    else { fit.slope = best_a; fit.distortion = best_d; }
    fit.gh_bound = 0.5 * fit.distortion;
    return fit;
}

std::vector<GhSweepRow> pinching_vs_gh_sweep(const std::vector<ManifoldSpec>& family,
                                             const std::vector<double>& params, double s,
                                             int count, std::uint64_t seed,
                                             const GeoResolution& res) {
    if (family.size() != params.size()) throw DomainError("family/params size mismatch");
    std::vector<GhSweepRow> rows;
    for (std::size_t m = 0; m < family.size(); ++m) {
        const ManifoldSpec& spec = family[m];
        GhSweepRow row;
        row.param = params[m];
        row.s = s;

        const Grid2D grid = Grid2D::make(1e-3, std::max(64.0, 8.0 * s), 400, 8);
        const RadialProfile prof = radial_green(spec, grid);
        std::vector<double> levels;
        for (double v = s / 5.0; v <= 4.0 * s * 1.31; v *= 1.15) levels.push_back(v);
        const MonotoneProfile mp = radial_monotone(spec, prof, levels);
        const auto pw = pinching(mp, s / 4.0, s / 2.0);
        const auto pf = pinching(mp, 2.0 * s, 4.0 * s);
        row.W_pinch = pw.W;
        row.F_pinch = pf.Fpinch;
        row.pinch_err = pw.err + pf.err;

        const MetricSample ball = metric_sample(spec, 0.0, s, count, seed, res);
        const MetricSample ann = metric_sample(spec, s, 2.0 * s, count, seed + 1, res);
        const ConeFit fb = best_fit_cone(ball);
        const ConeFit fa = best_fit_cone(ann);
        row.gh_ball = fb.gh_bound / s;
        row.gh_annulus = fa.gh_bound / s;
        row.slope_ball = fb.slope;
        row.slope_annulus = fa.slope;
        rows.push_back(row);
    }
    return rows;
}

double fitted_exponent(const std::vector<GhSweepRow>& rows, bool use_ball) {
    std::vector<double> x, y;
    for (const auto& r : rows) {
        x.push_back(use_ball ? r.F_pinch : r.W_pinch);
        y.push_back(use_ball ? r.gh_ball : r.gh_annulus);
    }
    return loglog_slope(x, y);
}

} // namespace pinchlab
