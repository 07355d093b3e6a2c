#include "pinchlab/hessian.hpp"

#include <algorithm>
#include <cmath>

#include "pinchlab/constants.hpp"
#include "pinchlab/monotone.hpp"
#include "pinchlab/parallel.hpp"
#include "pinchlab/sampling.hpp"

namespace pinchlab {

TensorField hessian_blocks(const ManifoldSpec& spec, const Grid2D& grid,
                           const std::vector<double>& h) {
    const int n = spec.n;
    const std::size_t nr = grid.nr(), np = grid.nphi();
    TensorField t;
    t.spec = &spec;
    t.grid = grid;
    t.H_rr.assign(grid.size(), 0.0);
    t.H_rp.assign(grid.size(), 0.0);
    t.H_pp.assign(grid.size(), 0.0);
    t.H_aa.assign(grid.size(), 0.0);
    t.lap.assign(grid.size(), 0.0);
    t.tf2.assign(grid.size(), 0.0);
    t.full2.assign(grid.size(), 0.0);
    t.valid.assign(grid.size(), 0);
    const double dphi = grid.phi[1] - grid.phi[0];

    parallel_for(static_cast<std::ptrdiff_t>(nr), [&](std::ptrdiff_t ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        if (i == 0 || i + 1 == nr) return;
        const double h1 = grid.r[i] - grid.r[i - 1];
        const double h2 = grid.r[i + 1] - grid.r[i];
        const double f = spec.f(grid.r[i]), fp = spec.df(grid.r[i]);
        auto dr1 = [&](double ym, double y0, double yp) {
            return (h1 * h1 * yp + (h2 * h2 - h1 * h1) * y0 - h2 * h2 * ym) /
                   (h1 * h2 * (h1 + h2));
        };
        auto dr2 = [&](double ym, double y0, double yp) {
            return 2.0 * (h1 * yp - (h1 + h2) * y0 + h2 * ym) / (h1 * h2 * (h1 + h2));
        };
        for (std::size_t j = 0; j < np; ++j) {
            const std::size_t k = grid.idx(i, j);
            const double y0 = h[k];
            const double ym = h[grid.idx(i - 1, j)], yp = h[grid.idx(i + 1, j)];
            // symmetric extension across the axis
            const std::size_t jm = (j == 0) ? 1 : j - 1;
            const std::size_t jp = (j + 1 == np) ? np - 2 : j + 1;
            const double hp = (j == 0 || j + 1 == np)
                                  ? 0.0
                                  : (h[grid.idx(i, jp)] - h[grid.idx(i, jm)]) / (2 * dphi);
            const double hpp =
                (h[grid.idx(i, jp)] - 2 * y0 + h[grid.idx(i, jm)]) / (dphi * dphi);
            const double hrp_m = (jm == jp) ? 0.0
                                 : (j == 0 || j + 1 == np)
                                     ? 0.0
                                     : (h[grid.idx(i - 1, jp)] - h[grid.idx(i - 1, jm)]) /
                                           (2 * dphi);
            const double hrp_0 = hp;
            const double hrp_p = (j == 0 || j + 1 == np)
                                     ? 0.0
                                     : (h[grid.idx(i + 1, jp)] - h[grid.idx(i + 1, jm)]) /
                                           (2 * dphi);
            const double hr = dr1(ym, y0, yp);
            const double hrr = dr2(ym, y0, yp);
            const double hrp = dr1(hrp_m, hrp_0, hrp_p);

            const double Hrr = hrr;
            const double Hrp = (hrp - fp / f * hp) / f;
            const double Hpp = hpp / (f * f) + fp / f * hr;
            double Haa;
            if (j == 0 || j + 1 == np) {
                Haa = Hpp; // axis limit: angular directions degenerate
            } else {
                Haa = fp / f * hr +
                      std::cos(grid.phi[j]) / (f * f * std::sin(grid.phi[j])) * hp;
            }
            const double tr = Hrr + Hpp + (n - 2) * Haa;
            const double m = tr / n;
            t.H_rr[k] = Hrr;
            t.H_rp[k] = Hrp;
            t.H_pp[k] = Hpp;
            t.H_aa[k] = Haa;
            t.lap[k] = tr;
            t.full2[k] = Hrr * Hrr + 2 * Hrp * Hrp + Hpp * Hpp + (n - 2) * Haa * Haa;
            t.tf2[k] = (Hrr - m) * (Hrr - m) + 2 * Hrp * Hrp + (Hpp - m) * (Hpp - m) +
                       (n - 2) * (Haa - m) * (Haa - m);
            t.valid[k] = 1;
        }
    });
    return t;
}

TensorField tracefree_hessian_field(const BField& field) {
    std::vector<double> h(field.b.size());
    for (std::size_t k = 0; k < h.size(); ++k) h[k] = field.b[k] * field.b[k];
    return hessian_blocks(*field.spec, field.grid, h);
}

std::vector<double> radial_tf2(const ManifoldSpec& spec, const RadialProfile& prof,
                               const std::vector<double>& r) {
    const int n = spec.n;
    std::vector<double> out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double b = prof.b(r[i]), bp = prof.db(r[i]), bpp = prof.d2b(r[i]);
        const double hp = 2 * b * bp;
        const double hpp = 2 * (bp * bp + b * bpp);
        const double f = spec.f(r[i]), fp = spec.df(r[i]);
        const double d = hpp - fp / f * hp;
        out[i] = (n - 1.0) / n * d * d;
    }
    return out;
}

double ricci_quadratic(const ManifoldSpec& spec, double r, double xr, double xt) {
    const int n = spec.n;
    const double f = spec.f(r), fp = spec.df(r), fpp = spec.d2f(r);
    const double rad = -(n - 1) * fpp / f;
    const double tan = -fpp / f + (n - 2) * (1 - fp * fp) / (f * f);
    return rad * xr * xr + tan * xt * xt;
}

namespace {

// Region integral of |TF|^2 b^w at a given decimation stride; the coarse
// (stride 2) pass feeds the quadrature error estimate.
double energy_pass(const TensorField& tf, const BField& field, Region region, int w,
                   std::size_t stride) {
    const ManifoldSpec& spec = *field.spec;
    const Grid2D& g = field.grid;
    const int n = spec.n;
    const double orbit = unit_sphere_area(n - 1);
    const bool exclude_pole = (w != 0);
    const std::size_t nr = g.nr(), np = g.nphi();

    return parallel_sum(static_cast<std::ptrdiff_t>((nr + stride - 1) / stride),
                        [&](std::ptrdiff_t block) {
        const std::size_t i = static_cast<std::size_t>(block) * stride;
        if (i >= nr) return 0.0;
        const std::size_t im = (i >= stride) ? i - stride : i;
        const std::size_t ip = (i + stride < nr) ? i + stride : i;
        const double dr = 0.5 * (g.r[ip] - g.r[im]);
        const double f = spec.f(g.r[i]);
        double acc = 0.0;
        for (std::size_t j = 0; j < np; j += stride) {
            const std::size_t k = g.idx(i, j);
            if (!tf.valid[k]) continue;
            if (exclude_pole && field.near_pole(i, j)) continue;
            const double b = field.b[k];
            bool in = false;
            switch (region.flavor) {
                case Region::Sublevel: in = b <= region.a; break;
                case Region::Superlevel: in = b >= region.a; break;
                case Region::BAnnulus: in = b >= region.a && b <= region.c; break;
                case Region::CenterBall: in = g.r[i] <= region.a; break;
            }
            if (!in) continue;
            const std::size_t jm = (j >= stride) ? j - stride : j;
            const std::size_t jp = (j + stride < np) ? j + stride : j;
            const double dphi = 0.5 * (g.phi[jp] - g.phi[jm]);
            const double vol =
                orbit * std::pow(f * std::sin(g.phi[j]), n - 2) * f * dr * dphi;
            acc += tf.tf2[k] * std::pow(b, w) * vol;
        }
        return acc;
    });
}

double region_volume(const BField& field, Region region, bool exclude_pole) {
    const ManifoldSpec& spec = *field.spec;
    const Grid2D& g = field.grid;
    const int n = spec.n;
    const double orbit = unit_sphere_area(n - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.nr(); ++i) {
        const double dr = 0.5 * ((i + 1 < g.nr() ? g.r[i + 1] : g.r[i]) -
                                 (i > 0 ? g.r[i - 1] : g.r[i]));
        const double f = spec.f(g.r[i]);
        for (std::size_t j = 0; j < g.nphi(); ++j) {
            if (exclude_pole && field.near_pole(i, j)) continue;
            const double b = field.b[g.idx(i, j)];
            bool in = false;
            switch (region.flavor) {
                case Region::Sublevel: in = b <= region.a; break;
                case Region::Superlevel: in = b >= region.a; break;
                case Region::BAnnulus: in = b >= region.a && b <= region.c; break;
                case Region::CenterBall: in = g.r[i] <= region.a; break;
            }
            if (!in) continue;
            const double dphi = 0.5 * ((j + 1 < g.nphi() ? g.phi[j + 1] : g.phi[j]) -
                                       (j > 0 ? g.phi[j - 1] : g.phi[j]));
            acc += orbit * std::pow(f * std::sin(g.phi[j]), n - 2) * f * dr * dphi;
        }
    }
    return acc;
}

} // namespace

EnergyValue weighted_energy(const TensorField& tf, const BField& field, Region region,
                            int w) {
    if (region.flavor == Region::BAnnulus && !(region.a > 0 && region.c > region.a))
        throw DomainError("bad annulus levels");
    const double b_edge = field.b[field.grid.idx(field.grid.nr() - 1, 0)];
    const double top = (region.flavor == Region::BAnnulus) ? region.c
                       : (region.flavor == Region::Sublevel) ? region.a
                                                             : 0.0;
    if (top > b_edge) throw DomainError("scale exceeds grid");
    EnergyValue e;
    e.value = energy_pass(tf, field, region, w, 1);
    e.error = std::abs(e.value - energy_pass(tf, field, region, w, 2));
    return e;
}

EnergyValue averaged_energy(const TensorField& tf, const BField& field, double ball_r,
                            int w) {
    Region reg;
    reg.flavor = Region::CenterBall;
    reg.a = ball_r;
    EnergyValue e = weighted_energy(tf, field, reg, w);
    const double vol = region_volume(field, reg, w != 0);
    e.value /= vol;
    e.error /= vol;
    return e;
}

std::vector<PinchMarginRow> pinching_inequality_check(const BField& field,
                                                      const TensorField& tf,
                                                      const MonotoneProfile& profile,
                                                      double s, double ball_r) {
    const int n = field.spec->n;
    std::vector<PinchMarginRow> rows;

    {
        // annulus energy against W_{s,2s}, explicit constant with C = 4
        PinchMarginRow row;
        row.inequality = "annulus-energy";
        row.scale_s = s;
        row.scale_t = 2 * s;
        Region reg;
        reg.flavor = Region::BAnnulus;
        reg.a = 2 * s;
        reg.c = 4 * s;
        const EnergyValue e = weighted_energy(tf, field, reg, -n);
        const auto pin = pinching(profile, s, 2 * s);
        row.lhs = e.value;
        row.lhs_err = e.error;
        row.rhs = 2.0 * std::pow(4.0, n - 2) * pin.W;
        row.rhs_err = 2.0 * std::pow(4.0, n - 2) * pin.err;
        row.ratio = row.rhs > 0 ? row.lhs / row.rhs : 0.0;
        row.pass = row.lhs - row.lhs_err <= row.rhs + row.rhs_err;
        rows.push_back(row);
    }
    {
        // sublevel energy against F_{r,2r}, explicit constant with C = 2
        PinchMarginRow row;
        row.inequality = "sublevel-energy";
        row.scale_s = s;
        row.scale_t = 2 * s;
        Region reg;
        reg.flavor = Region::Sublevel;
        reg.a = s;
        const EnergyValue e = weighted_energy(tf, field, reg, 0);
        const auto pin = pinching(profile, s, 2 * s);
        row.lhs = std::pow(s, -n) * e.value;
        row.lhs_err = std::pow(s, -n) * e.error;
        row.rhs = std::pow(2.0, n + 2) * pin.Fpinch;
        row.rhs_err = std::pow(2.0, n + 2) * pin.err;
        row.ratio = row.rhs > 0 ? row.lhs / row.rhs : 0.0;
        row.pass = row.lhs - row.lhs_err <= row.rhs + row.rhs_err;
        rows.push_back(row);
    }
    {
        // ball average against (s/r)^n F_{s,2s}; constant unknown, ratio only
        if (!(s >= 2.0 * ball_r / field.b_infty))
            throw DomainError("scale hypothesis violated: need s >= 2 b_inf^-1 r");
        PinchMarginRow row;
        row.inequality = "ball-average";
        row.scale_s = s;
        row.scale_t = ball_r;
        const EnergyValue e = averaged_energy(tf, field, ball_r, 0);
        const auto pin = pinching(profile, s, 2 * s);
        row.lhs = e.value;
        row.lhs_err = e.error;
        row.rhs = std::pow(s / ball_r, n) * pin.Fpinch;
        row.rhs_err = std::pow(s / ball_r, n) * pin.err;
        row.ratio = row.rhs > 0 ? row.lhs / row.rhs : 0.0;
        row.pass = true;
        rows.push_back(row);
    }
    {
        // gradient variance against r^2 avg |TF|^2 b^{-2}; constant unknown
        PinchMarginRow row;
        row.inequality = "grad-variance";
        row.scale_s = ball_r;
        row.scale_t = 0.0;
        const Grid2D& g = field.grid;
        const BallSample samp = ball_sample(*field.spec, g, ball_r);
        std::vector<char> mask(g.size(), 0);
        for (std::size_t k = 0; k < samp.node.size(); ++k) {
            const std::size_t i = samp.ri[k], j = samp.pj[k];
            mask[samp.node[k]] = (tf.valid[samp.node[k]] && !field.near_pole(i, j)) ? 1 : 0;
        }
        std::vector<double> g2(g.size(), 0.0);
        for (std::size_t i = 0; i < g.nr(); ++i)
            for (std::size_t j = 0; j < g.nphi(); ++j) {
                const double v = field.grad_norm(i, j);
                g2[g.idx(i, j)] = v * v;
            }
        const double c = ball_average(samp, g2, &mask);
        std::vector<double> dev(g.size(), 0.0);
        for (std::size_t k = 0; k < g.size(); ++k)
            dev[k] = (g2[k] - c) * (g2[k] - c);
        row.lhs = ball_average(samp, dev, &mask);
        const EnergyValue e = averaged_energy(tf, field, ball_r, -2);
        row.rhs = ball_r * ball_r * e.value;
        row.rhs_err = ball_r * ball_r * e.error;
        row.ratio = row.rhs > 0 ? row.lhs / row.rhs : 0.0;
        row.pass = true;
        rows.push_back(row);
    }
    return rows;
}

EtaSplitReport eta_split(const BField& field, const TensorField& tf,
                         const MonotoneProfile& profile, double s, double ball_r) {
    const ManifoldSpec& spec = *field.spec;
    const Grid2D& g = field.grid;
    const int n = spec.n;
    EtaSplitReport rep;

    // H: |TF|^2 extrapolated to the pole along the axis, both sides
    const double rho = field.rho;
    const std::size_t pi = rho > 0 ? g.nearest_r(rho) : 0;
    auto axis_extrapolate = [&](bool outward, std::size_t j) {
        std::vector<double> xs, ys;
        for (long step = 6; step <= 12 && xs.size() < 4; ++step) {
            const long i = static_cast<long>(pi) + (outward ? step : -step);
            if (i < 1 || i + 1 >= static_cast<long>(g.nr())) continue;
            const std::size_t k = g.idx(static_cast<std::size_t>(i), j);
            if (!tf.valid[k]) continue;
            xs.push_back(std::abs(g.r[static_cast<std::size_t>(i)] - rho));
            ys.push_back(tf.tf2[k]);
        }
        if (xs.size() < 2) return 0.0;
        // linear extrapolation to distance 0
        const double slope = (ys.back() - ys.front()) / (xs.back() - xs.front());
        return std::max(ys.front() - slope * xs.front(), 0.0);
    };
    rep.H_est = std::max(axis_extrapolate(true, 0), axis_extrapolate(false, 0));
    if (rho > 0) rep.H_est = std::max(rep.H_est, axis_extrapolate(true, g.nphi() - 1));
    if (rep.H_est <= 0) rep.H_est = 1e-300;

    const auto pin = pinching(profile, s, 2 * s);
    rep.eta = std::pow(2.0 * std::pow(s, n) * std::max(pin.Fpinch, 0.0) /
                           ((n - 2) * rep.H_est),
                       1.0 / n);

    // chordal approximation of the distance from the pole; accurate at the
    // small eta scales this split operates on
    const double f_rho = spec.f(rho);
    auto d_approx = [&](std::size_t i, std::size_t j) {
        if (rho <= 0) return g.r[i];
        const double dr = g.r[i] - rho;
        const double sh = std::sin(0.5 * g.phi[j]);
        return std::sqrt(dr * dr + 4.0 * spec.f(g.r[i]) * f_rho * sh * sh);
    };

    const double orbit = unit_sphere_area(n - 1);
    double vol_ball = 0.0;
    for (std::size_t i = 0; i < g.nr(); ++i) {
        if (g.r[i] > ball_r) break;
        const double dr = 0.5 * ((i + 1 < g.nr() ? g.r[i + 1] : g.r[i]) -
                                 (i > 0 ? g.r[i - 1] : g.r[i]));
        const double f = spec.f(g.r[i]);
        for (std::size_t j = 0; j < g.nphi(); ++j) {
            const std::size_t k = g.idx(i, j);
            if (!tf.valid[k] || field.near_pole(i, j)) continue;
            const double dphi = 0.5 * ((j + 1 < g.nphi() ? g.phi[j + 1] : g.phi[j]) -
                                       (j > 0 ? g.phi[j - 1] : g.phi[j]));
            const double vol =
                orbit * std::pow(f * std::sin(g.phi[j]), n - 2) * f * dr * dphi;
            vol_ball += vol;
            const double b = field.b[k];
            const double term = tf.tf2[k] / (b * b) * vol;
            const double d = d_approx(i, j);
            if (d <= rep.eta) {
                rep.piece_ball += term;
                rep.sup_d2_over_b2 = std::max(rep.sup_d2_over_b2, d * d / (b * b));
            } else {
                rep.piece_rest += term;
            }
        }
    }
    rep.bound_ball = rep.sup_d2_over_b2 * rep.H_est * std::pow(rep.eta, n - 2);
    (void)vol_ball;
    return rep;
}

double poincare_quotient(const ManifoldSpec& spec, const Grid2D& grid,
                         const std::vector<double>& u, const std::vector<double>& grad2,
                         double ball_r) {
    const BallSample samp = ball_sample(spec, grid, ball_r);
    const double mean = ball_average(samp, u);
    std::vector<double> dev(u.size(), 0.0);
    for (std::size_t k = 0; k < u.size(); ++k) dev[k] = (u[k] - mean) * (u[k] - mean);
    const double var = ball_average(samp, dev);
    const double g2 = ball_average(samp, grad2);
    if (g2 <= 0.0) return 0.0;
    const double diam = 2.0 * ball_r;
    return var / (diam * diam * g2);
}

} // namespace pinchlab
