#include <doctest.h>

#include <cmath>

#include "pinchlab/constants.hpp"
#include "pinchlab/manifold.hpp"

using namespace pinchlab;

namespace {

ManifoldSpec smoothed(int n, double a, double width) {
    ManifoldSpec s;
    s.n = n;
    s.kind = Kind::Warped;
    s.warp = make_smoothed_cone_profile(a, width);
    s.label = "smoothed";
    return s;
}

} // namespace

TEST_CASE("profiles satisfy the cap conditions at the origin") {
    for (const auto& p : {make_euclidean_profile(), make_cone_profile(1.0),
                          make_smoothed_cone_profile(0.6, 0.3),
                          make_tanh_cap_profile(0.5, 2.0)}) {
        CHECK(p->f(0.0) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(p->df(0.0) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(p->d2f(5.0) <= 1e-12);
        // f/r non-increasing toward the asymptotic slope
        CHECK(p->f(1.0) / 1.0 >= p->f(8.0) / 8.0 - 1e-12);
        CHECK(p->f(200.0) / 200.0 == doctest::Approx(p->slope()).epsilon(1e-2));
    }
}

TEST_CASE("profile derivatives match finite differences") {
    const auto p = make_smoothed_cone_profile(0.55, 0.25);
    const double h = 1e-5;
    for (double r : {0.05, 0.3, 1.0, 4.0}) {
        const double fd1 = (p->f(r + h) - p->f(r - h)) / (2 * h);
        const double fd2 = (p->f(r + h) - 2 * p->f(r) + p->f(r - h)) / (h * h);
        CHECK(p->df(r) == doctest::Approx(fd1).epsilon(1e-7));
        CHECK(p->d2f(r) == doctest::Approx(fd2).epsilon(1e-4));
    }
}

TEST_CASE("ricci eigenvalues match a finite-difference curvature oracle") {
    // oracle: build the eigenvalues purely from finite differences of f,
    // independent of the analytic derivative implementations
    ManifoldSpec s;
    s.n = 4;
    s.kind = Kind::Warped;
    s.warp = make_tanh_cap_profile(0.5, 1.5);
    const RicciReport rep = ricci_range(s);
    const double h = 1e-5;
    for (std::size_t k = 0; k < rep.r.size(); k += 37) {
        const double r = rep.r[k];
        if (r < 10 * h) continue;
        const double f = s.f(r);
        const double fp = (s.f(r + h) - s.f(r - h)) / (2 * h);
        const double fpp = (s.f(r + h) - 2 * f + s.f(r - h)) / (h * h);
        const double rad = -(s.n - 1) * fpp / f;
        const double tan = -fpp / f + (s.n - 2) * (1 - fp * fp) / (f * f);
        CHECK(rep.ric_radial[k] == doctest::Approx(rad).epsilon(1e-4));
        CHECK(rep.ric_tangential[k] == doctest::Approx(tan).epsilon(1e-4));
    }
    CHECK(rep.min_radial >= -1e-9);
    CHECK(rep.min_tangential >= -1e-9);
}

TEST_CASE("volume ratio and normalization on cones") {
    ManifoldSpec s;
    s.n = 3;
    s.kind = Kind::Cone;
    s.cone_slope = 0.8;
    const VolumeData v = avr_and_binfty(s);
    CHECK(v.v_m == doctest::Approx(unit_ball_volume(3) * 0.64).epsilon(1e-12));
    CHECK(v.b_infty == doctest::Approx(std::pow(0.8, 2.0)).epsilon(1e-12));

    ManifoldSpec e;
    e.n = 5;
    const VolumeData ve = avr_and_binfty(e);
    CHECK(ve.v_m == doctest::Approx(unit_ball_volume(5)).epsilon(1e-12));
    CHECK(ve.b_infty == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("smoothed cone family validates for all default widths") {
    for (double w : {0.4, 0.2, 0.1, 0.05}) {
        CHECK_NOTHROW(validate_spec(smoothed(3, 0.75, w)));
        CHECK_NOTHROW(validate_spec(smoothed(4, 0.6, w)));
    }
}

TEST_CASE("validation rejects bad specs") {
    ManifoldSpec s;
    s.n = 2;
    CHECK_THROWS_AS(validate_spec(s), ValidationError);
    ManifoldSpec c;
    c.n = 3;
    c.kind = Kind::Cone;
    c.cone_slope = 1.2;
    CHECK_THROWS_AS(validate_spec(c), ValidationError);
    c.cone_slope = -0.1;
    CHECK_THROWS_AS(validate_spec(c), ValidationError);
    // convex profile: f''> 0 somewhere, negative curvature
    ManifoldSpec t;
    t.n = 3;
    t.kind = Kind::Warped;
    t.warp = make_table_profile({0.0, 1.0, 2.0, 3.0, 4.0},
                                {0.0, 1.0, 2.3, 3.9, 5.8});
    CHECK_THROWS_AS(validate_spec(t), ValidationError);
}

TEST_CASE("specs load from config text") {
    const Config cfg = Config::parse_string(
        "[manifold]\n"
        "n = 3\n"
        "kind = warped\n"
        "warp.id = smoothed-cone\n"
        "warp.a = 0.7\n"
        "warp.width = 0.2\n"
        "r_max = 128\n"
        "[grid]\n"
        "nr = 300\n"
        "nphi = 160\n");
    const ManifoldSpec s = load_spec(cfg);
    CHECK(s.n == 3);
    CHECK(s.kind == Kind::Warped);
    CHECK(s.slope() == doctest::Approx(0.7));
    CHECK(s.r_max == doctest::Approx(128.0));
    CHECK(s.grid_nr == 300);
    CHECK(s.grid_nphi == 160);
    CHECK(s.hash != 0);
}
