#include "pinchlab/monotone.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "pinchlab/constants.hpp"
#include "pinchlab/hessian.hpp"
#include "pinchlab/parallel.hpp"

namespace pinchlab {

namespace {

double gauss4(const std::function<double(double)>& fn, double x0, double x1) {
    static const double xs[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double ws[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};
    const double c = 0.5 * (x0 + x1), h = 0.5 * (x1 - x0);
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += ws[k] * fn(c + h * xs[k]);
    return s * h;
}

// A and V of a center-pole field from the radial profile alone.
void radial_av(const ManifoldSpec& spec, const RadialProfile& prof, double s, double& A,
               double& V) {
    const int n = spec.n;
    const double sphere = unit_sphere_area(n);
    const double rho_s = prof.b_inverse(s);
    const double bp = prof.db(rho_s);
    A = std::pow(s, 1 - n) * sphere * std::pow(spec.f(rho_s), n - 1) * bp * bp * bp;

    auto integrand = [&](double r) {
        const double d = prof.db(r);
        return d * d * d * d * std::pow(spec.f(r), n - 1);
    };
    const auto& rg = prof.r;
    double acc = 0.0;
    // leading cell [0, r0]: b' and f/r nearly constant
    acc += integrand(rg[0]) * rg[0] / n;
    for (std::size_t i = 0; i + 1 < rg.size() && rg[i] < rho_s; ++i) {
        const double hi = std::min(rg[i + 1], rho_s);
        acc += gauss4(integrand, rg[i], hi);
    }
    V = std::pow(s, -n) * sphere * acc;
}

} // namespace

MonotoneProfile radial_monotone(const ManifoldSpec& spec, const RadialProfile& prof,
                                const std::vector<double>& levels) {
    MonotoneProfile out;
    out.n = spec.n;
    out.s = levels;
    const std::size_t m = levels.size();
    out.A.resize(m);
    out.V.resize(m);
    out.F.resize(m);
    out.errA.resize(m);
    out.errV.resize(m);

    // half-resolution profile for the error estimate
    const std::size_t nr = prof.r.size();
    const Grid2D coarse_grid =
        Grid2D::make(prof.r.front(), prof.r.back(), static_cast<int>(nr / 2), 8);
    const RadialProfile coarse = radial_green(spec, coarse_grid);

    for (std::size_t k = 0; k < m; ++k) {
        if (levels[k] > prof.b_val.back()) throw DomainError("scale exceeds grid");
        double A, V, Ac, Vc;
        radial_av(spec, prof, levels[k], A, V);
        radial_av(spec, coarse, levels[k], Ac, Vc);
        out.A[k] = A;
        out.V[k] = V;
        out.F[k] = A - 2.0 * (spec.n - 1) * V;
        out.errA[k] = std::abs(A - Ac);
        out.errV[k] = std::abs(V - Vc);
    }
    return out;
}

namespace {

struct LevelPass {
    double A = 0.0, V = 0.0;
    bool touches_boundary = false;
    double pole_contrib = 0.0; // V contribution from clamped pole-ball cells
};

LevelPass level_pass(const BField& field, double s, std::size_t stride) {
    const ManifoldSpec& spec = *field.spec;
    const Grid2D& g = field.grid;
    const int n = spec.n;
    const double orbit = unit_sphere_area(n - 1);
    const double grad_cap = 1.0 / field.b_infty;
    const std::size_t nr = g.nr(), np = g.nphi();

    std::vector<LevelPass> parts((nr + stride - 1) / stride);
    parallel_for(static_cast<std::ptrdiff_t>(parts.size()), [&](std::ptrdiff_t block) {
        LevelPass lp;
        const std::size_t i = static_cast<std::size_t>(block) * stride;
        if (i + stride >= nr) {
            parts[block] = lp;
            return;
        }
        const std::size_t i1 = i + stride;
        for (std::size_t j = 0; j + stride < np; j += stride) {
            const std::size_t j1 = j + stride;
            const double r0 = g.r[i], r1 = g.r[i1];
            const double p0 = g.phi[j], p1 = g.phi[j1];
            const std::array<double, 4> bc = {
                field.b[g.idx(i, j)], field.b[g.idx(i1, j)], field.b[g.idx(i1, j1)],
                field.b[g.idx(i, j1)]};
            bool pole_cell = field.near_pole(i, j) || field.near_pole(i1, j) ||
                             field.near_pole(i1, j1) || field.near_pole(i, j1);

            auto grad_at = [&](std::size_t a, std::size_t bjj) {
                double v = field.grad_norm(a, bjj);
                if (pole_cell) v = std::min(v, grad_cap);
                return v;
            };

            // level-curve extraction on the cell edges
            const double d0 = bc[0] - s, d1 = bc[1] - s, d2 = bc[2] - s, d3 = bc[3] - s;
            std::vector<std::array<double, 2>> pts; // (r, phi)
            auto edge = [&](double da, double db, double ra, double pa, double rb,
                            double pb) {
                if ((da < 0) == (db < 0)) return;
                const double t = da / (da - db);
                pts.push_back({ra + t * (rb - ra), pa + t * (pb - pa)});
            };
            edge(d0, d1, r0, p0, r1, p0);
            edge(d1, d2, r1, p0, r1, p1);
            edge(d2, d3, r1, p1, r0, p1);
            edge(d3, d0, r0, p1, r0, p0);
            if (!pts.empty() && i1 + stride >= nr) lp.touches_boundary = true;
            if (!pole_cell)
                for (std::size_t q = 0; q + 1 < pts.size(); q += 2) {
                    const double rm = 0.5 * (pts[q][0] + pts[q + 1][0]);
                    const double pm = 0.5 * (pts[q][1] + pts[q + 1][1]);
                    const double dr = pts[q + 1][0] - pts[q][0];
                    const double dp = pts[q + 1][1] - pts[q][1];
                    const double f = spec.f(rm);
                    const double dl = std::sqrt(dr * dr + f * f * dp * dp);
                    // bilinear |grad b| at the segment midpoint
                    const double tr = (rm - r0) / (r1 - r0), tp = (pm - p0) / (p1 - p0);
                    const double gb =
                        (1 - tr) * (1 - tp) * grad_at(i, j) + tr * (1 - tp) * grad_at(i1, j) +
                        tr * tp * grad_at(i1, j1) + (1 - tr) * tp * grad_at(i, j1);
                    lp.A += gb * gb * gb * orbit * std::pow(f * std::sin(pm), n - 2) * dl;
                }

            // sublevel quadrature: 2x2 subsamples of the cell, with a
            // fractional coverage for subcells cut by the level so the ball
            // boundary is not quantized to quarter-cell shells
            auto bilin = [&](double tr, double tp) {
                return (1 - tr) * (1 - tp) * bc[0] + tr * (1 - tp) * bc[1] +
                       tr * tp * bc[2] + (1 - tr) * tp * bc[3];
            };
            for (int a = 0; a < 2; ++a)
                for (int c = 0; c < 2; ++c) {
                    const double tr = 0.25 + 0.5 * a, tp = 0.25 + 0.5 * c;
                    double bmin = bilin(0.5 * a, 0.5 * c), bmax = bmin;
                    for (int q = 1; q < 4; ++q) {
                        const double v = bilin(0.5 * (a + (q & 1)), 0.5 * (c + (q >> 1)));
                        bmin = std::min(bmin, v);
                        bmax = std::max(bmax, v);
                    }
                    if (bmin > s) continue;
                    const double frac =
                        bmax <= s ? 1.0 : (s - bmin) / (bmax - bmin);
                    const double rm = r0 + tr * (r1 - r0);
                    const double pm = p0 + tp * (p1 - p0);
                    const double gb =
                        (1 - tr) * (1 - tp) * grad_at(i, j) + tr * (1 - tp) * grad_at(i1, j) +
                        tr * tp * grad_at(i1, j1) + (1 - tr) * tp * grad_at(i, j1);
                    const double f = spec.f(rm);
                    const double vol = orbit * std::pow(f * std::sin(pm), n - 2) * f *
                                       0.5 * (r1 - r0) * 0.5 * (p1 - p0);
                    const double term = gb * gb * gb * gb * vol * frac;
                    lp.V += term;
                    if (pole_cell) lp.pole_contrib += term;
                }
        }
        parts[block] = lp;
    });
    LevelPass total;
    for (const auto& lp : parts) {
        total.A += lp.A;
        total.V += lp.V;
        total.pole_contrib += lp.pole_contrib;
        total.touches_boundary = total.touches_boundary || lp.touches_boundary;
    }
    const int n2 = n;
    total.A *= std::pow(s, 1 - n2);
    total.V *= std::pow(s, -n2);
    total.pole_contrib *= std::pow(s, -n2);
    return total;
}

} // namespace

MonotoneProfile grid_monotone(const BField& field, const std::vector<double>& levels) {
    MonotoneProfile out;
    out.n = field.spec->n;
    out.s = levels;
    const std::size_t m = levels.size();
    out.A.resize(m);
    out.V.resize(m);
    out.F.resize(m);
    out.errA.resize(m);
    out.errV.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const LevelPass fine = level_pass(field, levels[k], 1);
        if (fine.touches_boundary) throw DomainError("scale exceeds grid");
        const LevelPass coarse = level_pass(field, levels[k], 2);
        out.A[k] = fine.A;
        out.V[k] = fine.V;
        out.F[k] = fine.A - 2.0 * (out.n - 1) * fine.V;
        out.errA[k] = std::abs(fine.A - coarse.A);
        out.errV[k] = std::abs(fine.V - coarse.V) + fine.pole_contrib;
    }
    return out;
}

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (xs.empty()) throw DomainError("empty profile");
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double t = (x - xs[k]) / (xs[k + 1] - xs[k]);
    return ys[k] + t * (ys[k + 1] - ys[k]);
}

} // namespace

double interp_A(const MonotoneProfile& p, double s) { return interp(p.s, p.A, s); }
double interp_F(const MonotoneProfile& p, double s) { return interp(p.s, p.F, s); }

PinchingReport pinching(const MonotoneProfile& p, double s, double t) {
    if (!(s < t)) throw DomainError("pinching needs s < t");
    if (s < p.s.front() || t > p.s.back()) throw DomainError("levels outside profile");
    PinchingReport rep;
    rep.s = s;
    rep.t = t;
    rep.W = std::abs(interp_A(p, t) - interp_A(p, s));
    rep.Fpinch = std::abs(interp_F(p, t) - interp_F(p, s));
    rep.err = interp(p.s, p.errA, s) + interp(p.s, p.errA, t) +
              2.0 * (p.n - 1) * (interp(p.s, p.errV, s) + interp(p.s, p.errV, t));
    return rep;
}

DerivativeResiduals derivative_identity_check(const BField& field, const TensorField& tf,
                                              const MonotoneProfile& profile, double s) {
    const ManifoldSpec& spec = *field.spec;
    const Grid2D& g = field.grid;
    const int n = spec.n;
    const double orbit = unit_sphere_area(n - 1);

    // finite differences over the bracketing profile levels; the integral
    // sides are evaluated at the bracket midpoint so both sides refer to the
    // same level to second order
    const auto& ls = profile.s;
    if (s < ls.front() || s > ls.back()) throw DomainError("level outside profile");
    std::size_t lo = 0;
    while (lo + 2 < ls.size() && ls[lo + 1] <= s) ++lo;
    const std::size_t hi = lo + 1;
    DerivativeResiduals res;
    res.fdA = (profile.A[hi] - profile.A[lo]) / (ls[hi] - ls[lo]);
    res.fdF = (profile.F[hi] - profile.F[lo]) / (ls[hi] - ls[lo]);
    s = 0.5 * (ls[lo] + ls[hi]);

    // RHS integrals of the identity
    double sub = 0.0, super = 0.0;
    for (std::size_t i = 1; i + 1 < g.nr(); ++i) {
        const double dr = 0.5 * (g.r[i + 1] - g.r[i - 1]);
        const double f = spec.f(g.r[i]);
        for (std::size_t j = 0; j < g.nphi(); ++j) {
            const std::size_t k = g.idx(i, j);
            if (!tf.valid[k] || field.near_pole(i, j)) continue;
            const double dphi = 0.5 * ((j + 1 < g.nphi() ? g.phi[j + 1] : g.phi[j]) -
                                       (j > 0 ? g.phi[j - 1] : g.phi[j]));
            const double vol = orbit * std::pow(f * std::sin(g.phi[j]), n - 2) * f * dr * dphi;
            const double b = field.b[k];
            const double xr = 2.0 * b * field.db_dr[k];
            const double xt = 2.0 * b * field.db_dphi_over_f[k];
            const double integrand = tf.tf2[k] + ricci_quadratic(spec, g.r[i], xr, xt);
            if (b <= s) sub += integrand * vol;
            else super += integrand * std::pow(b, 2 - 2 * n) * vol;
        }
    }
    res.rhsA = -0.5 * std::pow(s, n - 3) * super;
    res.rhsF = 0.5 * std::pow(s, -1 - n) * sub;
    const double scaleA = std::max({std::abs(res.fdA), std::abs(res.rhsA), 1e-300});
    const double scaleF = std::max({std::abs(res.fdF), std::abs(res.rhsF), 1e-300});
    res.resA = std::abs(res.fdA - res.rhsA) / scaleA;
    res.resF = std::abs(res.fdF - res.rhsF) / scaleF;
    return res;
}

} // namespace pinchlab
