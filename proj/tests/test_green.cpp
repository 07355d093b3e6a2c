#include <doctest.h>

#include <cmath>

#include "pinchlab/constants.hpp"
#include "pinchlab/geodesic.hpp"
#include "pinchlab/green.hpp"

using namespace pinchlab;

namespace {

ManifoldSpec euclid(int n) {
    ManifoldSpec s;
    s.n = n;
    return s;
}

ManifoldSpec cone_spec(int n, double a) {
    ManifoldSpec s;
    s.n = n;
    s.kind = Kind::Cone;
    s.cone_slope = a;
    return s;
}

ManifoldSpec warped_spec(int n, double a, double width) {
    ManifoldSpec s;
    s.n = n;
    s.kind = Kind::Warped;
    s.warp = make_smoothed_cone_profile(a, width);
    return s;
}

} // namespace

TEST_CASE("radial b is the distance on euclidean space and exact cones") {
    const Grid2D g = Grid2D::make(1e-3, 256.0, 400, 8);
    for (int n : {3, 4, 5}) {
        const RadialProfile p = radial_green(euclid(n), g);
        for (std::size_t i = 0; i < g.nr(); i += 29) {
            CHECK(p.b_val[i] == doctest::Approx(g.r[i]).epsilon(1e-8));
            CHECK(p.db_val[i] == doctest::Approx(1.0).epsilon(1e-8));
        }
        CHECK(std::abs(p.tail_c0) < 1e-8);
    }
    const RadialProfile pc = radial_green(cone_spec(3, 0.7), g);
    for (std::size_t i = 0; i < g.nr(); i += 29)
        CHECK(pc.b_val[i] == doctest::Approx(g.r[i]).epsilon(1e-8));
    CHECK(pc.b_infty == doctest::Approx(std::pow(0.7, 2.0)).epsilon(1e-12));
}

TEST_CASE("radial green matches the explicit euclidean kernel") {
    const Grid2D g = Grid2D::make(1e-3, 256.0, 400, 8);
    const int n = 4;
    const RadialProfile p = radial_green(euclid(n), g);
    for (std::size_t i = 0; i < g.nr(); i += 43) {
        const double exact =
            std::pow(g.r[i], 2.0 - n) / ((n - 2.0) * unit_sphere_area(n));
        CHECK(p.G_D[i] == doctest::Approx(exact).epsilon(1e-9));
    }
}

TEST_CASE("radial interpolation, inverse and second derivative") {
    const Grid2D g = Grid2D::make(1e-3, 256.0, 400, 8);
    const ManifoldSpec s = warped_spec(3, 0.6, 0.3);
    const RadialProfile p = radial_green(s, g);
    for (double r : {0.01, 0.37, 1.9, 14.0, 300.0}) {
        CHECK(p.b_inverse(p.b(r)) == doctest::Approx(r).epsilon(1e-9));
        const double h = 1e-4 * std::max(1.0, r);
        const double fd1 = (p.b(r + h) - p.b(r - h)) / (2 * h);
        const double fd2 = (p.b(r + h) - 2 * p.b(r) + p.b(r - h)) / (h * h);
        CHECK(p.db(r) == doctest::Approx(fd1).epsilon(1e-5));
        CHECK(p.d2b(r) == doctest::Approx(fd2).epsilon(2e-2).scale(1.0));
    }
    // gradient bound
    for (std::size_t i = 0; i < g.nr(); ++i)
        CHECK(p.db_val[i] <= (1.0 + 1e-9) / p.b_infty);
    // euclidean second derivative vanishes
    const RadialProfile pe = radial_green(euclid(3), g);
    CHECK(pe.d2b(2.0) == doctest::Approx(0.0).epsilon(1e-4).scale(1.0));
}

TEST_CASE("offcenter field reproduces the euclidean distance") {
    const ManifoldSpec s = euclid(3);
    const Grid2D g = Grid2D::make(1e-3, 64.0, 300, 128);
    const BField f = offcenter_green(s, 1.0, 32, g);
    double worst = 0.0, worst_grad = 0.0;
    for (std::size_t i = 0; i < g.nr(); i += 7)
        for (std::size_t j = 0; j < g.nphi(); j += 5) {
            if (f.near_pole(i, j)) continue;
            const double d = euclidean_chord(1.0, g.r[i], g.phi[j]);
            if (d < 0.05) continue;
            worst = std::max(worst, std::abs(f.b[g.idx(i, j)] / d - 1.0));
            worst_grad = std::max(worst_grad, std::abs(f.grad_norm(i, j) - 1.0));
        }
    CHECK(worst < 1e-6);
    CHECK(worst_grad < 1e-5);
}

TEST_CASE("offcenter mode truncation is converged") {
    const ManifoldSpec s = warped_spec(3, 0.7, 0.2);
    const Grid2D g = Grid2D::make(1e-3, 64.0, 200, 96);
    const BField f32 = offcenter_green(s, 1.0, 32, g);
    const BField f40 = offcenter_green(s, 1.0, 40, g);
    double diff = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
        diff = std::max(diff, std::abs(f32.b[k] - f40.b[k]));
    CHECK(diff < 1e-4);
    CHECK(f32.mode_tail_estimate < 1e-4);
}

TEST_CASE("offcenter field obeys the gradient bound") {
    const ManifoldSpec s = warped_spec(3, 0.6, 0.3);
    const Grid2D g = Grid2D::make(1e-3, 64.0, 200, 96);
    const BField f = offcenter_green(s, 1.0, 32, g);
    const double bound = (1.0 + 1e-3) / f.b_infty;
    for (std::size_t i = 0; i < g.nr(); ++i)
        for (std::size_t j = 0; j < g.nphi(); ++j) {
            if (f.near_pole(i, j)) continue;
            CHECK(f.grad_norm(i, j) <= bound);
        }
}

TEST_CASE("uniform estimates vanish on euclidean space") {
    const ManifoldSpec s = euclid(3);
    const Grid2D g = Grid2D::make(1e-3, 64.0, 300, 128);
    const BField f = offcenter_green(s, 1.0, 32, g);
    const auto [sup, grad] = uniform_estimates(f, 2.0);
    CHECK(sup < 1e-5);
    CHECK(grad < 1e-5);
}
