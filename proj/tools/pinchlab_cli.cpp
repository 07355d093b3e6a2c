#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pinchlab/config.hpp"
#include "pinchlab/ghdist.hpp"
#include "pinchlab/green.hpp"
#include "pinchlab/hessian.hpp"
#include "pinchlab/manifold.hpp"
#include "pinchlab/monotone.hpp"
#include "pinchlab/parallel.hpp"
#include "pinchlab/report.hpp"
#include "pinchlab/splitting.hpp"
#include "pinchlab/stats.hpp"

namespace fs = std::filesystem;
using namespace pinchlab;

namespace {

struct RunContext {
    Config cfg;
    ManifoldSpec spec;
    std::string out_dir;
    std::uint64_t seed = 1;
    double grid_scale = 1.0;
    Manifest manifest;
};

Grid2D plan_grid(const RunContext& ctx, double r_min_floor = 0.0) {
    double r_min = ctx.cfg.get_double("grid.r_min", 1e-3);
    if (r_min_floor > 0.0) r_min = std::min(r_min, r_min_floor);
    const double r_max = ctx.cfg.get_double("grid.r_max", 64.0);
    const int nr = std::max(32, static_cast<int>(std::lround(
                                    ctx.cfg.get_int("grid.nr", 300) * ctx.grid_scale)));
    const int np = std::max(16, static_cast<int>(std::lround(
                                    ctx.cfg.get_int("grid.nphi", 128) * ctx.grid_scale)));
    return Grid2D::make(r_min, r_max, nr, np);
}

std::vector<double> plan_levels(const RunContext& ctx) {
    if (ctx.cfg.has("scales.levels")) return ctx.cfg.get_double_list("scales.levels");
    std::vector<double> out;
    const double lo = ctx.cfg.get_double("scales.level_lo", 0.5);
    const double hi = ctx.cfg.get_double("scales.level_hi", 32.0);
    const double ratio = ctx.cfg.get_double("scales.level_ratio", 1.15);
    for (double v = lo; v <= hi * (1.0 + 1e-12); v *= ratio) out.push_back(v);
    return out;
}

GeoResolution plan_geo_res(const RunContext& ctx) {
    GeoResolution res;
    res.nr = static_cast<int>(ctx.cfg.get_int("gh.lattice", 25));
    res.ntheta = res.nr;
    res.stencil = 2;
    res.relax_points = static_cast<int>(ctx.cfg.get_int("gh.relax_points", 64));
    return res;
}

std::string out_path(const RunContext& ctx, const std::string& task, std::uint64_t hash) {
    return ctx.out_dir + "/" + task + "_" + hash_tag(hash) + ".csv";
}

void emit(RunContext& ctx, const std::string& task, std::uint64_t hash,
          const CsvTable& table) {
    const std::string path = out_path(ctx, task, hash);
    table.write(path);
    ctx.manifest.add(fs::path(path).filename().string(), "complete");
}

std::vector<BField> solve_fields(const RunContext& ctx, const Grid2D& grid) {
    std::vector<BField> fields;
    fields.push_back(radial_bfield(ctx.spec, grid));
    const double rho = ctx.cfg.get_double("scales.rho", 0.0);
    if (rho > 0.0) {
        const int L = static_cast<int>(ctx.cfg.get_int("scales.L", 32));
        fields.push_back(offcenter_green(ctx.spec, rho, L, grid));
    }
    return fields;
}

void run_green(RunContext& ctx) {
    const Grid2D grid = plan_grid(ctx);
    const auto fields = solve_fields(ctx, grid);
    for (std::size_t k = 0; k < fields.size(); ++k) {
        const std::string task = k == 0 ? "green" : "green_off";
        const std::string path = out_path(ctx, task, ctx.spec.hash);
        fields[k].export_csv(path);
        ctx.manifest.add(fs::path(path).filename().string(), "complete");
    }
}

void run_monotone(RunContext& ctx) {
    const Grid2D grid = plan_grid(ctx);
    const auto levels = plan_levels(ctx);
    CsvTable t({"pole_rho", "s", "A", "V", "F", "errA", "errV"});
    t.add_meta("spec_hash", hash_tag(ctx.spec.hash));
    t.add_meta("label", ctx.spec.label);
    for (const BField& f : solve_fields(ctx, grid)) {
        const MonotoneProfile mp = grid_monotone(f, levels);
        for (std::size_t k = 0; k < mp.s.size(); ++k)
            t.add_row({CsvTable::num(f.rho), CsvTable::num(mp.s[k]),
                       CsvTable::num(mp.A[k]), CsvTable::num(mp.V[k]),
                       CsvTable::num(mp.F[k]), CsvTable::num(mp.errA[k]),
                       CsvTable::num(mp.errV[k])});
    }
    emit(ctx, "monotone", ctx.spec.hash, t);
}

void run_hessian_checks(RunContext& ctx) {
    const double ball_r = ctx.cfg.get_double("scales.r", 1.0);
    const double s = ctx.cfg.get_double("scales.s", 4.0);
    const double b_infty = avr_and_binfty(ctx.spec).b_infty;
    if (s < 2.0 * ball_r / b_infty)
        throw ValidationError("scale hypothesis violated: s < 2 r / b_infty");

    const Grid2D grid = plan_grid(ctx);
    const auto levels = plan_levels(ctx);
    CsvTable t({"check", "pole_rho", "s", "lhs", "rhs", "ratio", "lhs_err", "rhs_err",
                "pass"});
    t.add_meta("spec_hash", hash_tag(ctx.spec.hash));
    for (const BField& f : solve_fields(ctx, grid)) {
        const TensorField tf = tracefree_hessian_field(f);
        const MonotoneProfile mp = grid_monotone(f, levels);
        for (const auto& row : pinching_inequality_check(f, tf, mp, s, ball_r))
            t.add_row({row.inequality, CsvTable::num(f.rho), CsvTable::num(row.scale_s),
                       CsvTable::num(row.lhs), CsvTable::num(row.rhs),
                       CsvTable::num(row.ratio), CsvTable::num(row.lhs_err),
                       CsvTable::num(row.rhs_err), row.pass ? "1" : "0"});
        const auto dr = derivative_identity_check(f, tf, mp, s);
        t.add_row({"derivative-A", CsvTable::num(f.rho), CsvTable::num(s),
                   CsvTable::num(dr.fdA), CsvTable::num(dr.rhsA), CsvTable::num(dr.resA),
                   "0", "0", dr.resA <= 0.05 ? "1" : "0"});
        t.add_row({"derivative-F", CsvTable::num(f.rho), CsvTable::num(s),
                   CsvTable::num(dr.fdF), CsvTable::num(dr.rhsF), CsvTable::num(dr.resF),
                   "0", "0", dr.resF <= 0.05 ? "1" : "0"});
        const auto ue = uniform_estimates(f, ball_r);
        t.add_row({"uniform-sup", CsvTable::num(f.rho), CsvTable::num(ball_r),
                   CsvTable::num(ue.first), "0", "0", "0", "0", "1"});
        t.add_row({"uniform-avg", CsvTable::num(f.rho), CsvTable::num(ball_r),
                   CsvTable::num(ue.second), "0", "0", "0", "0", "1"});
    }
    emit(ctx, "hessian", ctx.spec.hash, t);
}

SplittingReport splitting_for(const RunContext& ctx, const ManifoldSpec& spec,
                              AxisPole x0, AxisPole x1, double ball_r, double delta) {
    const int L = static_cast<int>(ctx.cfg.get_int("splitting.L", 24));
    const Grid2D grid = plan_grid(ctx, ball_r * 1e-3);
    return axis_splitting(spec, grid, x0, x1, ball_r, delta, L);
}

std::vector<std::string> splitting_columns() {
    return {"width", "r",     "delta", "d01",   "alpha",    "c0",      "c1",
            "item1", "rhs1",  "item2", "rhs2",  "item3",    "sup_lap", "F0",
            "F1",    "E0",    "E1",    "sym_lhs", "sym_rhs", "item1_err", "A_norm"};
}

std::vector<std::string> splitting_row(double width, const SplittingReport& rep) {
    auto n = [](double v) { return CsvTable::num(v); };
    return {n(width),       n(rep.ball_r),  n(rep.delta),   n(rep.d01),
            n(rep.alpha_hat), n(rep.c[0]),  n(rep.c[1]),    n(rep.item1),
            n(rep.rhs1),    n(rep.item2),   n(rep.rhs2),    n(rep.item3),
            n(rep.sup_lap), n(rep.F_pinch0), n(rep.F_pinch1), n(rep.energy0),
            n(rep.energy1), n(rep.sym_lhs), n(rep.sym_rhs), n(rep.item1_err),
            n(rep.A_norm)};
}

void run_splitting(RunContext& ctx) {
    const auto p0 = ctx.cfg.get_double_list("poles.x0");
    const auto p1 = ctx.cfg.get_double_list("poles.x1");
    if (p0.size() != 2 || p1.size() != 2)
        throw ConfigError("poles.x0 / poles.x1 must be rho, side pairs");
    const double ball_r = ctx.cfg.get_double("scales.r", 1.0);
    const double delta = ctx.cfg.get_double("scales.delta", 0.125);
    const auto rep = splitting_for(ctx, ctx.spec, AxisPole{p0[0], p0[1] >= 0 ? +1 : -1},
                                   AxisPole{p1[0], p1[1] >= 0 ? +1 : -1}, ball_r, delta);
    CsvTable t(splitting_columns());
    t.add_meta("spec_hash", hash_tag(ctx.spec.hash));
    t.add_row(splitting_row(0.0, rep));
    emit(ctx, "splitting", ctx.spec.hash, t);
}

std::vector<double> family_widths(const RunContext& ctx) {
    if (ctx.cfg.has("family.widths")) return ctx.cfg.get_double_list("family.widths");
    return {0.4, 0.2, 0.1, 0.05};
}

ManifoldSpec family_member(const RunContext& ctx, double width) {
    Config cfg = ctx.cfg;
    cfg.set("manifold.warp.width", CsvTable::num(width));
    return load_spec(cfg);
}

void run_gh(RunContext& ctx, bool family_mode) {
    const double s = ctx.cfg.get_double("gh.s", 2.0);
    const int count = static_cast<int>(ctx.cfg.get_int("gh.count", 64));
    std::vector<ManifoldSpec> family;
    std::vector<double> params;
    if (family_mode) {
        for (double w : family_widths(ctx)) {
            family.push_back(family_member(ctx, w));
            params.push_back(w);
        }
    } else {
        family.push_back(ctx.spec);
        params.push_back(0.0);
    }
    const auto rows =
        pinching_vs_gh_sweep(family, params, s, count, ctx.seed, plan_geo_res(ctx));
    CsvTable t({"width", "s", "W_pinch", "F_pinch", "gh_ball", "gh_annulus",
                "slope_ball", "slope_annulus", "pinch_err"});
    t.add_meta("spec_hash", hash_tag(ctx.spec.hash));
    t.add_meta("exponent_ball", CsvTable::num(fitted_exponent(rows, true)));
    t.add_meta("exponent_annulus", CsvTable::num(fitted_exponent(rows, false)));
    for (const auto& r : rows)
        t.add_row({CsvTable::num(r.param), CsvTable::num(r.s), CsvTable::num(r.W_pinch),
                   CsvTable::num(r.F_pinch), CsvTable::num(r.gh_ball),
                   CsvTable::num(r.gh_annulus), CsvTable::num(r.slope_ball),
                   CsvTable::num(r.slope_annulus), CsvTable::num(r.pinch_err)});
    emit(ctx, family_mode ? "gh_sweep" : "gh", ctx.spec.hash, t);
}

void run_sweep(RunContext& ctx) {
    const auto widths = family_widths(ctx);

    // monotone + uniform columns per member
    {
        CsvTable t({"width", "s", "W_pinch", "F_pinch", "pinch_err", "uniform_sup",
                    "uniform_avg"});
        t.add_meta("spec_hash", hash_tag(ctx.spec.hash));
        const double s = ctx.cfg.get_double("gh.s", 2.0);
        for (double w : widths) {
            const ManifoldSpec spec = family_member(ctx, w);
            const Grid2D grid = plan_grid(ctx);
            const RadialProfile prof = radial_green(spec, grid);
            std::vector<double> levels;
            for (double v = s / 5.0; v <= 4.0 * s * 1.31; v *= 1.12) levels.push_back(v);
            const MonotoneProfile mp = radial_monotone(spec, prof, levels);
            const auto pw = pinching(mp, s / 4.0, s / 2.0);
            const auto pf = pinching(mp, 2.0 * s, 4.0 * s);
            const BField f = radial_bfield(spec, grid);
            const auto ue = uniform_estimates(f, 1.0);
            t.add_row({CsvTable::num(w), CsvTable::num(s), CsvTable::num(pw.W),
                       CsvTable::num(pf.Fpinch), CsvTable::num(pw.err + pf.err),
                       CsvTable::num(ue.first), CsvTable::num(ue.second)});
        }
        emit(ctx, "monotone_sweep", ctx.spec.hash, t);
    }

    // scale-following splitting sweep: the probe scales sink into the cap so
    // pinching and splitting defects decay together
    {
        CsvTable t(splitting_columns());
        t.add_meta("spec_hash", hash_tag(ctx.spec.hash));
        const double r_coeff = ctx.cfg.get_double("splitting.r_coeff", 0.095);
        const double scale_mult = ctx.cfg.get_double("splitting.scale_mult", 4.0);
        const double rho_frac = ctx.cfg.get_double("splitting.rho_frac", 0.5);
        for (double w : widths) {
            const ManifoldSpec spec = family_member(ctx, w);
            const double r = r_coeff * std::pow(w, 1.5);
            const double delta = 1.0 / (scale_mult * r);
            const auto rep = splitting_for(ctx, spec, AxisPole{0.0, +1},
                                           AxisPole{rho_frac * r, +1}, r, delta);
            t.add_row(splitting_row(w, rep));
        }
        emit(ctx, "splitting_sweep", ctx.spec.hash, t);
    }

    run_gh(ctx, true);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pinchlab: monotone quantities, pinching inequalities and "
                 "almost-splitting maps on rotationally symmetric model manifolds"};
    app.require_subcommand(1);

    std::string plan_path, out_dir = ".";
    std::uint64_t seed = 1;
    double grid_scale = 1.0;
    int jobs = 0;
    bool serial = false;
    app.add_option("--plan", plan_path, "plan file")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--grid-scale", grid_scale, "grid resolution multiplier");
    app.add_option("--jobs", jobs, "worker thread limit");
    app.add_flag("--serial", serial, "use the serial reference kernels");

    auto* c_validate = app.add_subcommand("validate", "check a spec and print its data");
    auto* c_analyze = app.add_subcommand("analyze", "run the plan's tasks on one spec");
    auto* c_sweep = app.add_subcommand("sweep", "run the family sweep");
    auto* c_split = app.add_subcommand("splitting", "axis splitting report");
    auto* c_gh = app.add_subcommand("gh", "cone distance report");

    CLI11_PARSE(app, argc, argv);

    if (serial) use_serial_kernels() = true;
#ifdef _OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#endif

    RunContext ctx;
    try {
        ctx.cfg = Config::parse_file(plan_path);
        ctx.spec = load_spec(ctx.cfg);
        ctx.out_dir = out_dir;
        ctx.seed = seed;
        ctx.grid_scale = grid_scale;
        fs::create_directories(out_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    int status = 0;
    try {
        if (c_validate->parsed()) {
            const auto vol = avr_and_binfty(ctx.spec);
            const auto ric = ricci_range(ctx.spec);
            std::printf("label=%s n=%d slope=%.12g\n", ctx.spec.label.c_str(), ctx.spec.n,
                        ctx.spec.slope());
            std::printf("avr=%.12g b_infty=%.12g\n", vol.v_m, vol.b_infty);
            std::printf("ricci_radial_min=%.12g ricci_tangential_min=%.12g\n",
                        ric.min_radial, ric.min_tangential);
            std::printf("spec_hash=%s\n", hash_tag(ctx.spec.hash).c_str());
            return 0;
        }
        if (c_analyze->parsed()) {
            std::vector<std::string> tasks = {"green", "monotone", "hessian-checks"};
            if (ctx.cfg.has("plan.tasks")) tasks = ctx.cfg.get_string_list("plan.tasks");
            for (const auto& task : tasks) {
                if (task == "green") run_green(ctx);
                else if (task == "monotone") run_monotone(ctx);
                else if (task == "hessian-checks") run_hessian_checks(ctx);
                else if (task == "splitting") run_splitting(ctx);
                else if (task == "gh") run_gh(ctx, false);
                else throw ConfigError("unknown task: " + task);
            }
        }
        if (c_sweep->parsed()) run_sweep(ctx);
        if (c_split->parsed()) run_splitting(ctx);
        if (c_gh->parsed()) run_gh(ctx, ctx.cfg.has("family.widths"));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        ctx.manifest.add("(aborted)", std::string("incomplete: ") + e.what());
        status = 1;
    }
    ctx.manifest.write(ctx.out_dir + "/MANIFEST");
    return status;
}
