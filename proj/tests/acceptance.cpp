// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
// Exactness checks run on analytically solvable models (euclidean space and
// exact cones); curved models get property and trend checks with tolerances
// tied to the reported quadrature errors.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pinchlab/config.hpp"
#include "pinchlab/ghdist.hpp"
#include "pinchlab/green.hpp"
#include "pinchlab/hessian.hpp"
#include "pinchlab/manifold.hpp"
#include "pinchlab/monotone.hpp"
#include "pinchlab/report.hpp"
#include "pinchlab/sampling.hpp"
#include "pinchlab/splitting.hpp"
#include "pinchlab/stats.hpp"

using namespace pinchlab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    g_notes.emplace_back(buf);
}

bool expect(bool ok, const char* fmt, ...) {
    if (!ok) {
        char buf[512];
        va_list ap;
        va_start(ap, fmt);
        std::vsnprintf(buf, sizeof buf, fmt, ap);
        va_end(ap);
        g_notes.emplace_back(std::string("FAILED: ") + buf);
    }
    return ok;
}

void run_criterion(int id, const char* name, const std::function<bool()>& body) {
    g_notes.clear();
    bool ok = false;
    try {
        ok = body();
    } catch (const std::exception& e) {
        note("exception: %s", e.what());
    }
    std::printf("criterion %2d  %-32s %s\n", id, name, ok ? "PASS" : "FAIL");
    if (!ok) {
        for (const auto& n : g_notes) std::printf("              %s\n", n.c_str());
        ++g_failures;
    }
    std::fflush(stdout);
}

double omega_n(int n) {
    return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

ManifoldSpec euclid_spec(int n) {
    return load_spec(Config::parse_string("[manifold]\nn = " + std::to_string(n) +
                                          "\nkind = euclidean\n"));
}

ManifoldSpec cone_spec(int n, double a) {
    return load_spec(Config::parse_string("[manifold]\nn = " + std::to_string(n) +
                                          "\nkind = cone\na = " + CsvTable::num(a) +
                                          "\n"));
}

ManifoldSpec smoothed_cone(int n, double a, double w) {
    return load_spec(Config::parse_string(
        "[manifold]\nn = " + std::to_string(n) +
        "\nkind = warped\nwarp.id = smoothed-cone\nwarp.a = " + CsvTable::num(a) +
        "\nwarp.width = " + CsvTable::num(w) + "\n"));
}

ManifoldSpec tanh_cap(int n, double a, double lambda) {
    return load_spec(Config::parse_string(
        "[manifold]\nn = " + std::to_string(n) +
        "\nkind = warped\nwarp.id = tanh-cap\nwarp.a = " + CsvTable::num(a) +
        "\nwarp.lambda = " + CsvTable::num(lambda) + "\n"));
}

std::vector<double> geometric(double lo, double hi, double ratio) {
    std::vector<double> out;
    for (double v = lo; v <= hi * (1.0 + 1e-12); v *= ratio) out.push_back(v);
    return out;
}

GeoResolution fast_res() {
    GeoResolution res;
    res.nr = 25;
    res.ntheta = 25;
    res.stencil = 2;
    res.relax_points = 64;
    return res;
}

// Shared five-spec corpus for the monotonicity and bound criteria.
std::vector<ManifoldSpec> accepted_specs() {
    return {smoothed_cone(3, 0.8, 0.4), smoothed_cone(3, 0.8, 0.1),
            smoothed_cone(3, 0.6, 0.3), smoothed_cone(4, 0.9, 0.2),
            tanh_cap(3, 0.7, 1.0)};
}

bool euclidean_exactness() {
    bool ok = true;
    for (int n : {3, 4}) {
        const ManifoldSpec spec = euclid_spec(n);
        const Grid2D grid = Grid2D::make(1e-3, 64.0, 400, 64);
        const RadialProfile prof = radial_green(spec, grid);
        double worst_b = 0.0;
        for (double r : geometric(0.05, 48.0, 1.1))
            worst_b = std::max(worst_b, std::fabs(prof.b(r) / r - 1.0));
        ok &= expect(worst_b <= 1e-6, "n=%d b vs distance: %.3g", n, worst_b);

        const auto levels = geometric(0.5, 36.0, 1.12);
        const MonotoneProfile mp = radial_monotone(spec, prof, levels);
        const double wn = omega_n(n);
        double worst_q = 0.0;
        for (std::size_t k = 0; k < mp.s.size(); ++k) {
            worst_q = std::max(worst_q, std::fabs(mp.A[k] / (n * wn) - 1.0));
            worst_q = std::max(worst_q, std::fabs(mp.V[k] / wn - 1.0));
            worst_q = std::max(worst_q, std::fabs(mp.F[k] / ((2 - n) * wn) - 1.0));
        }
        ok &= expect(worst_q <= 1e-4, "n=%d A/V/F constancy: %.3g", n, worst_q);

        double worst_p = 0.0;
        for (double s : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            const auto p = pinching(mp, s, 4.0 * s);
            worst_p = std::max({worst_p, p.W, p.Fpinch});
        }
        ok &= expect(worst_p <= 1e-6, "n=%d pinching: %.3g", n, worst_p);
    }
    return ok;
}

bool cone_exactness() {
    bool ok = true;
    for (double a : {0.6, 0.8, 0.9}) {
        const ManifoldSpec spec = cone_spec(3, a);
        const Grid2D grid = Grid2D::make(1e-3, 64.0, 400, 64);
        const RadialProfile prof = radial_green(spec, grid);
        double worst_b = 0.0;
        for (double r : geometric(0.05, 48.0, 1.1))
            worst_b = std::max(worst_b, std::fabs(prof.b(r) / r - 1.0));
        ok &= expect(worst_b <= 1e-6, "a=%.1f b vs distance: %.3g", a, worst_b);

        const MonotoneProfile mp = radial_monotone(spec, prof, geometric(0.5, 32.0, 1.2));
        const double A_exact = 3.0 * omega_n(3) * a * a;
        double worst_A = 0.0, worst_p = 0.0;
        for (std::size_t k = 0; k < mp.s.size(); ++k)
            worst_A = std::max(worst_A, std::fabs(mp.A[k] / A_exact - 1.0));
        for (double s : {0.5, 1.0, 2.0, 4.0}) {
            const auto p = pinching(mp, s, 4.0 * s);
            worst_p = std::max({worst_p, p.W, p.Fpinch});
        }
        ok &= expect(worst_A <= 1e-4, "a=%.1f level area: %.3g", a, worst_A);
        ok &= expect(worst_p <= 1e-6, "a=%.1f pinching: %.3g", a, worst_p);

        const MetricSample sample = metric_sample(spec, 1.0, 2.0, 32, 11, fast_res());
        const ConeFit fit = best_fit_cone(sample);
        ok &= expect(std::fabs(fit.slope - a) <= 0.01, "a=%.1f fit slope %.4f", a,
                     fit.slope);
    }
    return ok;
}

double offcenter_worst(const ManifoldSpec& spec, int L, int nr, int np) {
    const Grid2D grid = Grid2D::make(1e-3, 64.0, nr, np);
    const BField f = offcenter_green(spec, 1.0, L, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.r.size(); ++i)
        for (std::size_t j = 0; j < grid.phi.size(); ++j) {
            const double r = grid.r[i], c = std::cos(grid.phi[j]);
            const double d = std::sqrt(std::max(0.0, r * r + 1.0 - 2.0 * r * c));
            if (d < 0.05 || r > 48.0) continue;
            worst = std::max(worst, std::fabs(f.b[grid.idx(i, j)] / d - 1.0));
        }
    return worst;
}

bool offcenter_calibration() {
    const ManifoldSpec spec = euclid_spec(3);
    const double coarse = offcenter_worst(spec, 32, 300, 128);
    bool ok = expect(coarse <= 1e-3, "L=32 worst relative error %.3g", coarse);
    const double fine = offcenter_worst(spec, 64, 600, 256);
    // the closed-form singularity split leaves only roundoff at L = 32, so the
    // halving check is waived once the coarse error sits at the noise floor
    ok &= expect(fine <= 0.5 * coarse || coarse <= 1e-9,
                 "refinement %.3g -> %.3g (need half)", coarse, fine);
    return ok;
}

bool profile_monotone(const MonotoneProfile& mp, const char* tag) {
    bool ok = true;
    const double cF = 2.0 * (mp.n - 1);
    for (std::size_t k = 0; k + 1 < mp.s.size(); ++k) {
        const double eps = 1e-12 * (1.0 + std::fabs(mp.A[k]));
        const double slackA = mp.errA[k] + mp.errA[k + 1] + eps;
        const double slackF = slackA + cF * (mp.errV[k] + mp.errV[k + 1]);
        ok &= expect(mp.A[k + 1] <= mp.A[k] + slackA, "%s A rises at s=%.3g by %.3g", tag,
                     mp.s[k + 1], mp.A[k + 1] - mp.A[k] - slackA);
        ok &= expect(mp.F[k + 1] >= mp.F[k] - slackF, "%s F drops at s=%.3g by %.3g", tag,
                     mp.s[k + 1], mp.F[k] - mp.F[k + 1] - slackF);
    }
    return ok;
}

bool monotonicity_suite() {
    bool ok = true;
    const auto levels = geometric(0.5, 24.0, 1.15);
    for (const ManifoldSpec& spec : accepted_specs()) {
        const Grid2D grid = Grid2D::make(1e-3, 64.0, 300, 128);
        ok &= profile_monotone(grid_monotone(radial_bfield(spec, grid), levels),
                               spec.label.c_str());
        ok &= profile_monotone(grid_monotone(offcenter_green(spec, 1.0, 24, grid), levels),
                               (spec.label + "/off").c_str());
    }
    return ok;
}

std::pair<double, double> derivative_residuals(const ManifoldSpec& spec, int nr, int np) {
    const Grid2D grid = Grid2D::make(1e-3, 64.0, nr, np);
    const BField f = radial_bfield(spec, grid);
    const TensorField tf = tracefree_hessian_field(f);
    // fixed finite-difference bracket so grid refinement isolates the
    // quadrature part of the residual
    const MonotoneProfile mp = grid_monotone(f, geometric(2.0, 9.0, 1.08));
    const auto dr = derivative_identity_check(f, tf, mp, 4.0);
    return {dr.resA, dr.resF};
}

bool derivative_identities() {
    const ManifoldSpec spec = smoothed_cone(3, 0.8, 0.5);
    const auto [cA, cF] = derivative_residuals(spec, 512, 256);
    bool ok = expect(cA <= 0.05 && cF <= 0.05, "residuals A %.3g F %.3g", cA, cF);
    const auto [fA, fF] = derivative_residuals(spec, 1024, 512);
    const double order = std::log2(std::max(cA, cF) / std::max(fA, fF));
    ok &= expect(order >= 1.0, "worst residual %.3g -> %.3g (order %.2f)",
                 std::max(cA, cF), std::max(fA, fF), order);
    return ok;
}

bool gradient_and_containment() {
    bool ok = true;
    for (const ManifoldSpec& spec : accepted_specs()) {
        const Grid2D grid = Grid2D::make(1e-3, 64.0, 300, 128);
        const double b_infty = avr_and_binfty(spec).b_infty;
        for (const BField& f :
             {radial_bfield(spec, grid), offcenter_green(spec, 1.0, 24, grid)}) {
            double worst = 0.0;
            for (std::size_t i = 0; i < grid.r.size(); ++i)
                for (std::size_t j = 0; j < grid.phi.size(); ++j)
                    if (!f.near_pole(i, j)) worst = std::max(worst, f.grad_norm(i, j));
            ok &= expect(worst * b_infty <= 1.0 + 1e-3, "%s rho=%.1f |grad b| %.6f > %.6f",
                         spec.label.c_str(), f.rho, worst, (1.0 + 1e-3) / b_infty);
            // center-ball containment: every point of B_p(r) satisfies
            // b_x <= 2 r / b_infty whenever the pole x lies in the ball
            for (double ball_r : {1.5, 3.0, 6.0}) {
                if (f.rho > ball_r) continue;
                double worst_b = 0.0;
                for (std::size_t i = 0; i < grid.r.size() && grid.r[i] <= ball_r; ++i)
                    for (std::size_t j = 0; j < grid.phi.size(); ++j)
                        if (!f.near_pole(i, j))
                            worst_b = std::max(worst_b, f.b[grid.idx(i, j)]);
                ok &= expect(worst_b <= 2.0 * ball_r / b_infty * (1.0 + 1e-9),
                             "%s rho=%.1f ball %.1f: max b %.4f > %.4f",
                             spec.label.c_str(), f.rho, ball_r, worst_b,
                             2.0 * ball_r / b_infty);
            }
        }
    }
    return ok;
}

bool pinching_inequalities() {
    bool ok = true;
    const auto levels = geometric(0.5, 24.0, 1.15);
    for (double w : {0.4, 0.2, 0.1, 0.05}) {
        const ManifoldSpec spec = smoothed_cone(3, 0.8, w);
        const Grid2D grid = Grid2D::make(1e-3, 64.0, 300, 128);
        for (const BField& f :
             {radial_bfield(spec, grid), offcenter_green(spec, 1.0, 24, grid)}) {
            const TensorField tf = tracefree_hessian_field(f);
            const MonotoneProfile mp = grid_monotone(f, levels);
            for (const auto& row : pinching_inequality_check(f, tf, mp, 4.0, 1.0))
                if (row.inequality == "annulus-energy" ||
                    row.inequality == "sublevel-energy")
                    ok &= expect(row.pass, "w=%.2f rho=%.1f %s lhs %.3g rhs %.3g", w,
                                 f.rho, row.inequality.c_str(), row.lhs, row.rhs);
        }
    }
    return ok;
}

bool splitting_exactness() {
    bool ok = true;
    const int pairs[3][2] = {{3, 1}, {3, 2}, {4, 3}};
    for (const auto& nk : pairs) {
        const auto rep = euclidean_splitting(nk[0], nk[1], 1.0, 4000, 17);
        ok &= expect(rep.item1 <= 1e-6, "n=%d k=%d hessian %.3g", nk[0], nk[1], rep.item1);
        ok &= expect(rep.item2 <= 1e-6, "n=%d k=%d gram %.3g", nk[0], nk[1], rep.item2);
        ok &= expect(rep.grad_lo >= 1.0 - 1e-3 && rep.grad_hi <= 1.0 + 1e-3,
                     "n=%d k=%d gradients [%.6f, %.6f]", nk[0], nk[1], rep.grad_lo,
                     rep.grad_hi);
        ok &= expect(rep.sup_lap <= 1e-6, "n=%d k=%d laplacian %.3g", nk[0], nk[1],
                     rep.sup_lap);
    }
    return ok;
}

bool splitting_trend() {
    // Scale-following sweep: the probe ball shrinks into the smooth cap faster
    // than the transition width so every defect decays toward the cone limit.
    std::vector<double> item1, item2, pinch, ratio;
    for (double w : {0.4, 0.2, 0.1, 0.05}) {
        const ManifoldSpec spec = smoothed_cone(3, 0.8, w);
        const double r = 0.095 * std::pow(w, 1.5);
        const double delta = 1.0 / (4.0 * r);
        const Grid2D grid = Grid2D::make(std::min(1e-3, r * 1e-3), 64.0, 300, 128);
        const auto rep = axis_splitting(spec, grid, AxisPole{0.0, +1},
                                        AxisPole{0.5 * r, +1}, r, delta, 24);
        item1.push_back(rep.item1);
        item2.push_back(rep.item2);
        pinch.push_back(rep.F_pinch0 + rep.F_pinch1);
        ratio.push_back(rep.item1 / rep.rhs1);
    }
    bool ok = true;
    for (std::size_t k = 0; k + 1 < item1.size(); ++k) {
        ok &= expect(item1[k + 1] < item1[k], "hessian defect not decreasing at %zu", k);
        ok &= expect(item2[k + 1] < item2[k], "gram defect not decreasing at %zu", k);
        ok &= expect(pinch[k + 1] < pinch[k], "pinching not decreasing at %zu", k);
    }
    const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
    ok &= expect(*hi / *lo <= 20.0, "ratio band %.3g", *hi / *lo);
    const double rho = spearman_rho(pinch, item1);
    ok &= expect(rho >= 0.9, "spearman %.3f", rho);
    return ok;
}

bool gh_trend() {
    std::vector<ManifoldSpec> family;
    std::vector<double> params;
    for (double w : {0.4, 0.2, 0.1}) {
        family.push_back(smoothed_cone(3, 0.8, w));
        params.push_back(w);
    }
    const auto rows = pinching_vs_gh_sweep(family, params, 2.0, 36, 23, fast_res());
    bool ok = true;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
        ok &= expect(rows[k + 1].W_pinch < rows[k].W_pinch, "pinching not decreasing");
        ok &= expect(rows[k + 1].gh_ball < rows[k].gh_ball, "ball bound not decreasing");
        ok &= expect(rows[k + 1].gh_annulus < rows[k].gh_annulus,
                     "annulus bound not decreasing");
    }
    const MetricSample cone = metric_sample(cone_spec(3, 0.8), 1.0, 2.0, 32, 29,
                                            fast_res());
    const ConeFit fit = best_fit_cone(cone);
    ok &= expect(fit.gh_bound <= 1e-6, "exact cone bound %.3g", fit.gh_bound);
    return ok;
}

bool uniform_trend() {
    std::vector<double> sup, avg;
    for (double w : {0.4, 0.2, 0.1, 0.05}) {
        const ManifoldSpec spec = smoothed_cone(3, 0.8, w);
        const Grid2D grid = Grid2D::make(1e-3, 64.0, 300, 128);
        const auto ue = uniform_estimates(radial_bfield(spec, grid), 1.0);
        sup.push_back(ue.first);
        avg.push_back(ue.second);
    }
    bool ok = true;
    for (std::size_t k = 0; k + 1 < sup.size(); ++k) {
        ok &= expect(sup[k + 1] <= sup[k] + 1e-6, "sup estimate rises at %zu", k);
        ok &= expect(avg[k + 1] <= avg[k] + 1e-6, "avg estimate rises at %zu", k);
    }
    return ok;
}

std::string csv_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool determinism(const std::chrono::steady_clock::time_point& t0) {
#ifndef PINCHLAB_CLI_PATH
    note("cli path not configured");
    return false;
#else
    const fs::path base = fs::temp_directory_path() / "pinchlab_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);
    const fs::path plan = base / "plan";
    {
        std::ofstream out(plan);
        out << "[manifold]\nn = 3\nkind = warped\nwarp.id = smoothed-cone\n"
               "warp.a = 0.8\nwarp.width = 0.4\nlabel = determinism\n"
               "[grid]\nnr = 300\nnphi = 128\n"
               "[family]\nwidths = 0.4, 0.2\n"
               "[gh]\ncount = 36\n";
    }
    bool ok = true;
    for (const char* run : {"one", "two"}) {
        const std::string cmd = std::string("\"") + PINCHLAB_CLI_PATH + "\" --plan \"" +
                                plan.string() + "\" --out \"" + (base / run).string() +
                                "\" --seed 5 sweep > /dev/null";
        ok &= expect(std::system(cmd.c_str()) == 0, "sweep run %s failed", run);
    }
    if (ok) {
        int csvs = 0;
        for (const auto& e : fs::directory_iterator(base / "one")) {
            if (e.path().extension() != ".csv") continue;
            ++csvs;
            const fs::path other = base / "two" / e.path().filename();
            ok &= expect(fs::exists(other) && csv_bytes(e.path()) == csv_bytes(other),
                         "mismatch in %s", e.path().filename().c_str());
        }
        ok &= expect(csvs == 3, "expected 3 csv outputs, saw %d", csvs);
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok &= expect(elapsed <= 540.0, "suite took %.0f s", elapsed);
    note("total %.0f s", elapsed);
    return ok;
#endif
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    run_criterion(1, "euclidean exactness", euclidean_exactness);
    run_criterion(2, "cone exactness", cone_exactness);
    run_criterion(3, "off-center calibration", offcenter_calibration);
    run_criterion(4, "monotonicity suite", monotonicity_suite);
    run_criterion(5, "derivative identities", derivative_identities);
    run_criterion(6, "gradient bound and containment", gradient_and_containment);
    run_criterion(7, "pinching inequalities", pinching_inequalities);
    run_criterion(8, "splitting exactness", splitting_exactness);
    run_criterion(9, "splitting trend", splitting_trend);
    run_criterion(10, "distance bound trend", gh_trend);
    run_criterion(11, "uniform estimate trend", uniform_trend);
    run_criterion(12, "determinism and runtime", [&] { return determinism(t0); });
    if (g_failures) std::printf("%d criteria failed\n", g_failures);
    return g_failures ? 1 : 0;
}
