#include <doctest.h>

#include <cmath>

#include "pinchlab/constants.hpp"
#include "pinchlab/hessian.hpp"
#include "pinchlab/monotone.hpp"

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

std::vector<double> geometric_levels(double lo, double hi, double ratio) {
    std::vector<double> out;
    for (double v = lo; v <= hi; v *= ratio) out.push_back(v);
    return out;
}

} // namespace

TEST_CASE("euclidean radial profile is the constant triple") {
    const Grid2D g = Grid2D::make(1e-3, 256.0, 400, 8);
    for (int n : {3, 4}) {
        const ManifoldSpec s = euclid(n);
        const RadialProfile prof = radial_green(s, g);
        const auto levels = geometric_levels(0.5, 32.0, 1.3);
        const MonotoneProfile mp = radial_monotone(s, prof, levels);
        const double omega = unit_ball_volume(n);
        for (std::size_t k = 0; k < mp.s.size(); ++k) {
            CHECK(mp.A[k] == doctest::Approx(n * omega).epsilon(1e-6));
            CHECK(mp.V[k] == doctest::Approx(omega).epsilon(1e-6));
            CHECK(mp.F[k] == doctest::Approx((2 - n) * omega).epsilon(1e-6));
        }
        const auto pin = pinching(mp, 1.0, 8.0);
        CHECK(pin.W < 1e-6);
        CHECK(pin.Fpinch < 1e-6);
    }
}

TEST_CASE("cone vertex profile is constant with zero pinching") {
    const Grid2D g = Grid2D::make(1e-3, 256.0, 400, 8);
    const ManifoldSpec s = cone_spec(3, 0.8);
    const RadialProfile prof = radial_green(s, g);
    const auto levels = geometric_levels(0.5, 32.0, 1.3);
    const MonotoneProfile mp = radial_monotone(s, prof, levels);
    const double expect = 3 * unit_ball_volume(3) * 0.64;
    for (std::size_t k = 0; k < mp.s.size(); ++k)
        CHECK(mp.A[k] == doctest::Approx(expect).epsilon(1e-6));
    const auto pin = pinching(mp, 1.0, 16.0);
    CHECK(pin.W < 1e-6);
    CHECK(pin.Fpinch < 1e-6);
}

TEST_CASE("grid profile reproduces the euclidean constants") {
    const ManifoldSpec s = euclid(3);
    const Grid2D g = Grid2D::make(1e-3, 64.0, 300, 128);
    const BField center = radial_bfield(s, g);
    const auto levels = geometric_levels(0.5, 8.0, 1.5);
    const MonotoneProfile mp = grid_monotone(center, levels);
    for (std::size_t k = 0; k < mp.s.size(); ++k) {
        CHECK(mp.A[k] == doctest::Approx(4 * kPi).epsilon(5e-3));
        CHECK(mp.V[k] == doctest::Approx(unit_ball_volume(3)).epsilon(5e-3));
    }

    const BField off = offcenter_green(s, 1.0, 32, g);
    const MonotoneProfile mo = grid_monotone(off, levels);
    for (std::size_t k = 0; k < mo.s.size(); ++k) {
        CHECK(mo.A[k] == doctest::Approx(4 * kPi).epsilon(5e-3));
        CHECK(mo.V[k] == doctest::Approx(unit_ball_volume(3)).epsilon(5e-3));
    }
}

TEST_CASE("monotone signs on the smoothed-cone family") {
    const auto levels = geometric_levels(0.5, 32.0, 1.2);
    for (double w : {0.4, 0.1}) {
        const ManifoldSpec s = warped_spec(3, 0.7, w);
        const Grid2D g = Grid2D::make(1e-3, 256.0, 400, 8);
        const RadialProfile prof = radial_green(s, g);
        const MonotoneProfile mp = radial_monotone(s, prof, levels);
        for (std::size_t k = 0; k + 1 < mp.s.size(); ++k) {
            const double tie = 1e-12 * std::abs(mp.A[k]);
            CHECK(mp.A[k + 1] <= mp.A[k] + mp.errA[k] + mp.errA[k + 1] + tie);
            CHECK(mp.F[k + 1] >= mp.F[k] - mp.errA[k] - mp.errA[k + 1] -
                                     4 * (mp.errV[k] + mp.errV[k + 1]) - tie);
        }
        // pinching decreases with width handled in sweep tests; here: positive
        const auto pin = pinching(mp, 1.0, 8.0);
        CHECK(pin.W > 0.0);
        CHECK(pin.Fpinch > 0.0);
    }
}

TEST_CASE("pinching is additive over nested scales") {
    const ManifoldSpec s = warped_spec(3, 0.6, 0.3);
    const Grid2D g = Grid2D::make(1e-3, 256.0, 400, 8);
    const RadialProfile prof = radial_green(s, g);
    const auto levels = geometric_levels(0.5, 40.0, 1.1);
    const MonotoneProfile mp = radial_monotone(s, prof, levels);
    const auto p12 = pinching(mp, 1.0, 2.0);
    const auto p24 = pinching(mp, 2.0, 4.0);
    const auto p14 = pinching(mp, 1.0, 4.0);
    CHECK(p14.Fpinch == doctest::Approx(p12.Fpinch + p24.Fpinch).epsilon(1e-9));
    CHECK(p14.W == doctest::Approx(p12.W + p24.W).epsilon(1e-9));
}

TEST_CASE("derivative identities hold on the smoothed-cone reference") {
    const ManifoldSpec s = warped_spec(3, 0.7, 0.2);
    const Grid2D g = Grid2D::make(1e-3, 256.0, 512, 96);
    const RadialProfile prof = radial_green(s, g);
    const BField f = radial_bfield(s, g);
    const TensorField t = tracefree_hessian_field(f);
    std::vector<double> levels;
    for (double v = 0.2; v <= 8.0; v *= 1.05) levels.push_back(v);
    const MonotoneProfile mp = radial_monotone(s, prof, levels);
    for (double r : {0.5, 1.0, 2.0}) {
        const DerivativeResiduals res = derivative_identity_check(f, t, mp, r);
        INFO("r=", r, " fdA=", res.fdA, " rhsA=", res.rhsA, " fdF=", res.fdF,
             " rhsF=", res.rhsF);
        CHECK(res.resA < 0.05);
        CHECK(res.resF < 0.05);
    }
}

TEST_CASE("level-set quadrature error shrinks under refinement") {
    const ManifoldSpec s = euclid(3);
    const Grid2D coarse = Grid2D::make(1e-3, 64.0, 150, 64);
    const Grid2D fine = Grid2D::make(1e-3, 64.0, 300, 128);
    const std::vector<double> levels = {2.0};
    const double e0 =
        std::abs(grid_monotone(radial_bfield(s, coarse), levels).A[0] - 4 * kPi);
    const double e1 =
        std::abs(grid_monotone(radial_bfield(s, fine), levels).A[0] - 4 * kPi);
    CHECK(e1 < 0.6 * e0);
}
