#include "pinchlab/green.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "pinchlab/constants.hpp"
#include "pinchlab/geodesic.hpp"
#include "pinchlab/parallel.hpp"
#include "pinchlab/zonal.hpp"

namespace pinchlab {

namespace {

// 4-point Gauss-Legendre on [x0, x1].
template <typename Fn>
double gauss4(Fn&& fn, double x0, double x1) {
    static const double xs[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double ws[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};
    const double c = 0.5 * (x0 + x1), h = 0.5 * (x1 - x0);
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += ws[k] * fn(c + h * xs[k]);
    return s * h;
}

double hermite(double x, double x0, double x1, double y0, double y1, double d0, double d1,
               int deriv) {
    const double h = x1 - x0, t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    if (deriv == 0) {
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 +
               (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
    }
    return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * h * d0 + (-6 * t2 + 6 * t) * y1 +
            (3 * t2 - 2 * t) * h * d1) / h;
}

} // namespace

double RadialProfile::b(double rr) const {
    if (rr <= r.front()) return b_val.front() * rr / r.front();
    if (rr >= r.back()) return rr + tail_c0;
    const auto it = std::upper_bound(r.begin(), r.end(), rr);
    const std::size_t k = static_cast<std::size_t>(it - r.begin()) - 1;
    return hermite(rr, r[k], r[k + 1], b_val[k], b_val[k + 1], db_val[k], db_val[k + 1], 0);
}

double RadialProfile::db(double rr) const {
    if (rr <= r.front()) return db_val.front();
    if (rr >= r.back()) return 1.0;
    const auto it = std::upper_bound(r.begin(), r.end(), rr);
    const std::size_t k = static_cast<std::size_t>(it - r.begin()) - 1;
    return hermite(rr, r[k], r[k + 1], b_val[k], b_val[k + 1], db_val[k], db_val[k + 1], 1);
}

double RadialProfile::d2b(double rr) const {
    // Harmonicity of G gives b'' = (n-1)(b'^2/b - (f'/f) b') exactly.
    const int n = spec->n;
    const double bb = b(rr), bp = db(rr);
    const double f = spec->f(rr), fp = spec->df(rr);
    return (n - 1) * (bp * bp / bb - fp / f * bp);
}

double RadialProfile::b_inverse(double s) const {
    if (s <= b_val.front()) return r.front() * s / b_val.front();
    if (s >= b_val.back()) return s - tail_c0;
    // bisection on nodes, then Newton
    std::size_t lo = 0, hi = b_val.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (b_val[mid] <= s ? lo : hi) = mid;
    }
    double x = r[lo] + (r[hi] - r[lo]) * (s - b_val[lo]) / (b_val[hi] - b_val[lo]);
    for (int it = 0; it < 40; ++it) {
        const double e = b(x) - s;
        if (std::abs(e) < 1e-14 * std::max(1.0, s)) break;
        x -= e / db(x);
        x = std::clamp(x, r[lo], r[hi]);
    }
    return x;
}

RadialProfile radial_green(const ManifoldSpec& spec, const Grid2D& grid) {
    const int n = spec.n;
    const double a = spec.slope();
    if (!(a > 0.0)) throw ValidationError("radial Green tail divergent: slope <= 0");
    RadialProfile out;
    out.spec = &spec;
    out.r = grid.r;
    const std::size_t m = out.r.size();
    const double sphere = unit_sphere_area(n);
    const double omega = unit_ball_volume(n);
    const VolumeData vol = avr_and_binfty(spec);
    out.b_infty = vol.b_infty;

    auto integrand = [&](double t) { return std::pow(spec.f(t), 1 - n); };
    std::vector<double> I(m, 0.0);
    // analytic tail: f linear with slope a beyond the grid
    const double R = out.r.back();
    I[m - 1] = std::pow(spec.f(R), 2 - n) / (a * (n - 2));
    for (std::size_t i = m - 1; i-- > 0;) {
        // two panels per grid interval keep the quadrature error tiny on the
        // log-spaced mesh
        const double mid = 0.5 * (out.r[i] + out.r[i + 1]);
        I[i] = I[i + 1] + gauss4(integrand, out.r[i], mid) + gauss4(integrand, mid, out.r[i + 1]);
    }
    out.G_D.resize(m);
    out.b_val.resize(m);
    out.db_val.resize(m);
    const double mexp = 1.0 / (2.0 - n);
    for (std::size_t i = 0; i < m; ++i) {
        out.G_D[i] = I[i] / sphere;
        const double gcm = n * (n - 2) * omega * out.G_D[i];
        out.b_val[i] = std::pow(gcm, mexp) / out.b_infty;
        // b' = b_infty^{-1} m gcm^{m-1} * gcm', gcm' = -(n-2) f^{1-n}
        const double dgcm = -(n - 2) * std::pow(spec.f(out.r[i]), 1 - n);
        out.db_val[i] = mexp * std::pow(gcm, mexp - 1.0) * dgcm / out.b_infty;
    }
    out.tail_c0 = out.b_val.back() - out.r.back();
    return out;
}

bool BField::near_pole(std::size_t i, std::size_t j) const {
    const std::size_t pi = rho > 0.0 ? grid.nearest_r(rho) : 0;
    const long di = static_cast<long>(i) - static_cast<long>(pi);
    if (rho <= 0.0) return i < 5;
    return std::abs(di) <= 5 && j <= 5;
}

void BField::export_csv(const std::string& path) const {
    std::ofstream out(path);
    out << "# spec_hash=" << spec->hash << " rho=" << rho << " L=" << L
        << " b_infty=" << b_infty << "\n";
    out << "r,phi,b,db_dr,db_dphi_over_f\n";
    char buf[160];
    for (std::size_t i = 0; i < grid.nr(); ++i)
        for (std::size_t j = 0; j < grid.nphi(); ++j) {
            const std::size_t k = grid.idx(i, j);
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g\n", grid.r[i],
                          grid.phi[j], b[k], db_dr[k], db_dphi_over_f[k]);
            out << buf;
        }
}

BField radial_bfield(const ManifoldSpec& spec, const Grid2D& grid) {
    const RadialProfile prof = radial_green(spec, grid);
    BField f;
    f.spec = &spec;
    f.grid = grid;
    f.rho = 0.0;
    f.L = 0;
    f.b_infty = prof.b_infty;
    f.b.resize(grid.size());
    f.db_dr.resize(grid.size());
    f.db_dphi_over_f.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.nr(); ++i)
        for (std::size_t j = 0; j < grid.nphi(); ++j) {
            f.b[grid.idx(i, j)] = prof.b_val[i];
            f.db_dr[grid.idx(i, j)] = prof.db_val[i];
        }
    return f;
}

namespace {

/// Regular (w_u) and decaying (w_v) Riccati log-derivatives of the mode ODE
///   g'' + (n-1)(f'/f) g' - l(l+n-2) f^{-2} g = 0,
/// integrated in x = log r with W = r g'/g, plus the log of |g| accumulated
/// along the way. Everything is per mode; modes run in parallel.
struct ModeSolution {
    // at grid nodes
    std::vector<double> w_u, w_v;   // g'/g on the two sides
    std::vector<double> Lu, Sv;     // int_{r0}^{r} w_u dr, int_{r}^{rN} (-w_v) dr
    double w_u_rho = 0.0, w_v_rho = 0.0;
    double Lu_rho = 0.0, Sv_rho = 0.0;
    double log_g_rho = 0.0;
};

ModeSolution solve_mode(const ManifoldSpec& spec, const std::vector<double>& r, double rho,
                        int l, int substeps = 8) {
    const int n = spec.n;
    const std::size_t m = r.size();
    ModeSolution ms;
    ms.w_u.resize(m);
    ms.w_v.resize(m);
    ms.Lu.assign(m, 0.0);
    ms.Sv.assign(m, 0.0);

    const double lam = static_cast<double>(l) * (l + n - 2);
    auto rhs = [&](double x, double W) {
        const double rr = std::exp(x);
        const double f = spec.f(rr), fp = spec.df(rr);
        return W - W * W - (n - 1) * (rr * fp / f) * W + lam * rr * rr / (f * f);
    };
    auto rk4 = [&](double& x, double& W, double h, double& area) {
        // area accumulates int W dx = int w dr over the step (Simpson-grade)
        const double k1 = rhs(x, W);
        const double k2 = rhs(x + 0.5 * h, W + 0.5 * h * k1);
        const double k3 = rhs(x + 0.5 * h, W + 0.5 * h * k2);
        const double k4 = rhs(x + h, W + h * k3);
        const double Wmid = W + 0.5 * h * (k1 + k2 + k3 + k4) * 0.25; // midpoint estimate
        const double Wend = W + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        area += h / 6.0 * (W + 4.0 * Wmid + Wend);
        x += h;
        W = Wend;
    };

    const double x_rho = std::log(rho);
    // outward sweep: regular solution, W -> l as r -> 0
    {
        double x = std::log(r[0]);
        double W = static_cast<double>(l);
        ms.w_u[0] = W / r[0];
        double acc = 0.0;
        bool rho_done = false;
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const double x1 = std::log(r[i + 1]);
            if (!rho_done && x_rho > x && x_rho <= x1) {
                const double h = (x_rho - x) / substeps;
                double xx = x, WW = W, aa = acc;
                for (int s = 0; s < substeps; ++s) rk4(xx, WW, h, aa);
                ms.w_u_rho = WW / rho;
                ms.Lu_rho = aa;
                rho_done = true;
            }
            const double h = (x1 - x) / substeps;
            for (int s = 0; s < substeps; ++s) rk4(x, W, h, acc);
            ms.w_u[i + 1] = W / r[i + 1];
            ms.Lu[i + 1] = acc;
        }
    }
    // inward sweep: decaying solution, cone-tail exponent at the outer edge
    {
        const double a = spec.slope();
        const double c0 = spec.f(r[m - 1]) / a - r[m - 1];
        const double lam_minus =
            0.5 * (-(n - 2) - std::sqrt((n - 2.0) * (n - 2.0) + 4.0 * lam / (a * a)));
        double x = std::log(r[m - 1]);
        double W = lam_minus * r[m - 1] / (r[m - 1] + c0);
        ms.w_v[m - 1] = W / r[m - 1];
        double acc = 0.0; // int_{r}^{rN} (-w_v) dr, positive
        bool rho_done = false;
        for (std::size_t i = m - 1; i-- > 0;) {
            const double x1 = std::log(r[i]);
            if (!rho_done && x_rho < x && x_rho >= x1) {
                const double h = (x_rho - x) / substeps; // negative
                double xx = x, WW = W, aa = acc;
                for (int s = 0; s < substeps; ++s) rk4(xx, WW, h, aa);
                ms.w_v_rho = WW / rho;
                // aa = int W dx along decreasing x = int_rho^rN (-w_v) dr >= 0
                ms.Sv_rho = aa;
                rho_done = true;
            }
            const double h = (x1 - x) / substeps;
            for (int s = 0; s < substeps; ++s) rk4(x, W, h, acc);
            ms.w_v[i] = W / r[i];
            ms.Sv[i] = acc;
        }
    }
    const double denom = std::pow(spec.f(rho), n - 1) * (ms.w_u_rho - ms.w_v_rho);
    if (!(denom > 0.0))
        throw std::runtime_error("mode ODE matching failed for mode " + std::to_string(l));
    ms.log_g_rho = -std::log(denom);
    return ms;
}

} // namespace

BField offcenter_green(const ManifoldSpec& spec, double rho, int L, const Grid2D& grid) {
    if (!(rho > 0.0 && rho < spec.r_max)) throw DomainError("pole radius outside (0, r_max)");
    if (L < 8) throw DomainError("mode cutoff L must be at least 8");
    const int n = spec.n;
    const double nu = 0.5 * (n - 2);
    const std::size_t nr = grid.nr(), np = grid.nphi();
    const double omega = unit_ball_volume(n);
    const double kappa = 1.0 / ((n - 2.0) * n * omega);
    const VolumeData vol = avr_and_binfty(spec);

    // mode coefficients a_l(r) = (l+nu)/(nu n omega_n) g_l(r) of G_D in the
    // plain Gegenbauer basis G = sum a_l C_l^nu(cos phi)
    std::vector<std::vector<double>> a(L + 1), da(L + 1);
    std::vector<ModeSolution> modes(L + 1);
    parallel_for(L + 1, [&](std::ptrdiff_t l) {
        modes[l] = solve_mode(spec, grid.r, rho, static_cast<int>(l));
    });
    const double sphere = n * omega;
    for (int l = 0; l <= L; ++l) {
        const auto& ms = modes[l];
        const double wl = (l + nu) / (nu * sphere);
        a[l].resize(nr);
        da[l].resize(nr);
        for (std::size_t i = 0; i < nr; ++i) {
            double logg, w;
            if (grid.r[i] <= rho) {
                logg = ms.log_g_rho - (ms.Lu_rho - ms.Lu[i]);
                w = ms.w_u[i];
            } else {
                logg = ms.log_g_rho - (ms.Sv_rho - ms.Sv[i]);
                w = ms.w_v[i];
            }
            const double g = std::exp(logg);
            a[l][i] = wl * g;
            da[l][i] = wl * w * g;
        }
    }

    // closed-form Gegenbauer coefficients of the chordal comparison kernel:
    // sigma_l = kappa (2t/B)^nu t^l with q = A/B, t = q - sqrt(q^2-1)
    const double f_rho = spec.f(rho);
    std::vector<double> sig0(nr), dlog_sig(nr), log_t(nr), dlog_t(nr);
    for (std::size_t i = 0; i < nr; ++i) {
        const double r = grid.r[i];
        const double f = spec.f(r), fp = spec.df(r);
        const double A = (r - rho) * (r - rho) + 2.0 * f * f_rho;
        const double B = 2.0 * f * f_rho;
        const double q = std::max(A / B, 1.0 + 1e-15);
        const double root = std::sqrt(q * q - 1.0);
        const double t = q - root;
        const double dA = 2.0 * (r - rho) + 2.0 * fp * f_rho;
        const double dB = 2.0 * fp * f_rho;
        const double dq = (dA * B - A * dB) / (B * B);
        log_t[i] = std::log(t);
        dlog_t[i] = -dq / root;
        sig0[i] = kappa * std::pow(2.0 * t / B, nu); // sigma_l = sig0 * t^l
        dlog_sig[i] = nu * (dlog_t[i] - dB / B);     // d/dr log sig0
    }

    // angular tables, shared across radii
    std::vector<std::vector<double>> C(np), dC(np);
    for (std::size_t j = 0; j < np; ++j) {
        const double c = std::cos(grid.phi[j]);
        gegenbauer_row(nu, L, c, C[j]);
        gegenbauer_row_deriv(nu, L, c, dC[j]);
    }

    BField field;
    field.spec = &spec;
    field.grid = grid;
    field.rho = rho;
    field.L = L;
    field.b_infty = vol.b_infty;
    field.b.resize(grid.size());
    field.db_dr.resize(grid.size());
    field.db_dphi_over_f.resize(grid.size());
    const double mexp = 1.0 / (2.0 - n);
    const double cm = n * (n - 2.0) * omega; // G_CM = cm * G_D
    std::vector<double> tail(grid.size(), 0.0);

    parallel_for(static_cast<std::ptrdiff_t>(nr), [&](std::ptrdiff_t ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double r = grid.r[i];
        const double f = spec.f(r), fp = spec.df(r);
        const double rr = r - rho;
        for (std::size_t j = 0; j < np; ++j) {
            const double phi = grid.phi[j];
            const double sh = std::sin(0.5 * phi);
            const double D2 = rr * rr + 4.0 * f * f_rho * sh * sh;
            const double D = std::sqrt(std::max(D2, 1e-280));
            const double S = kappa * std::pow(D, 2.0 - n);
            const double dD2_dr = 2.0 * rr + 4.0 * fp * f_rho * sh * sh;
            const double dD2_dphi = 2.0 * f * f_rho * std::sin(phi);
            const double Sfac = kappa * (2.0 - n) * std::pow(D, -n) * 0.5;
            const double S_r = Sfac * dD2_dr;
            const double S_phi = Sfac * dD2_dphi;

            double G = S, G_r = S_r, G_phi = S_phi;
            const double sphi = std::sin(phi);
            for (int l = 0; l <= L; ++l) {
                const double sig = sig0[i] * std::exp(l * log_t[i]);
                const double dsig = sig * (dlog_sig[i] + l * dlog_t[i]);
                const double rem = a[l][i] - sig;
                const double drem = da[l][i] - dsig;
                G += rem * C[j][l];
                G_r += drem * C[j][l];
                G_phi += rem * (-sphi) * dC[j][l];
                if (l == L)
                    tail[grid.idx(i, j)] = std::abs(rem * C[j][l]) * 3.0;
            }
            G = std::max(G, 1e-280);
            const double bb = std::pow(cm * G, mexp) / vol.b_infty;
            const double chain = mexp * bb / G; // d b / d G
            field.b[grid.idx(i, j)] = bb;
            field.db_dr[grid.idx(i, j)] = chain * G_r;
            field.db_dphi_over_f[grid.idx(i, j)] = chain * G_phi / f;
        }
    });
    field.mode_tail_estimate = *std::max_element(tail.begin(), tail.end());
    return field;
}

std::pair<double, double> uniform_estimates(const BField& field, double ball_r) {
    const ManifoldSpec& spec = *field.spec;
    const Grid2D& g = field.grid;
    if (ball_r > g.r.back()) throw DomainError("ball not covered by grid");
    const int n = spec.n;
    const double orbit = unit_sphere_area(n - 1);

    std::unique_ptr<DistanceField> df;
    if (spec.kind == Kind::Warped && field.rho > 0.0)
        df = std::make_unique<DistanceField>(spec, g, field.rho);

    // the ball is centered at the field's pole; membership uses the geodesic
    // distance from the pole
    double sup_ratio = 0.0;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.nr(); ++i) {
        if (g.r[i] > field.rho + ball_r) break;
        const double dr = 0.5 * ((i + 1 < g.nr() ? g.r[i + 1] : g.r[i]) -
                                 (i > 0 ? g.r[i - 1] : g.r[i]));
        const double f = spec.f(g.r[i]);
        for (std::size_t j = 0; j < g.nphi(); ++j) {
            if (field.near_pole(i, j)) continue;
            double d;
            if (field.rho <= 0.0)
                d = g.r[i];
            else if (df)
                d = df->accurate(i, j);
            else
                d = geodesic_distance(spec, field.rho, g.r[i], g.phi[j]);
            if (!(d > 0.0) || d > ball_r) continue;
            const double dphi = 0.5 * ((j + 1 < g.nphi() ? g.phi[j + 1] : g.phi[j]) -
                                       (j > 0 ? g.phi[j - 1] : g.phi[j]));
            const double w =
                orbit * std::pow(f * std::sin(g.phi[j]), n - 2) * f * dr * dphi;
            const double gr = field.db_dr[g.idx(i, j)];
            const double gp = field.db_dphi_over_f[g.idx(i, j)];
            num += w * (gr * gr + gp * gp);
            den += w;
            const double b = field.b[g.idx(i, j)];
            sup_ratio = std::max(sup_ratio, std::abs(b * b / (d * d) - 1.0));
        }
    }
    if (!(den > 0.0)) throw DomainError("empty sample ball");
    return {sup_ratio, std::abs(num / den - 1.0)};
}

} // namespace pinchlab
