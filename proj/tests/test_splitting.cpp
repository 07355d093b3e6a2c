#include <doctest.h>

#include <cmath>

#include "pinchlab/manifold.hpp"
#include "pinchlab/splitting.hpp"

using namespace pinchlab;

namespace {

ManifoldSpec warped_spec(int n, double a, double width) {
    ManifoldSpec s;
    s.n = n;
    s.kind = Kind::Warped;
    s.warp = make_smoothed_cone_profile(a, width);
    return s;
}

} // namespace

TEST_CASE("euclidean splitting is exact for every admissible rank") {
    for (auto [n, k] : {std::pair{3, 1}, {3, 2}, {4, 3}}) {
        const auto rep = euclidean_splitting(n, k, 1.0, 4000, 17u);
        CHECK(rep.item1 < 1e-6);
        CHECK(rep.item2 < 1e-6);
        CHECK(rep.grad_lo > 1.0 - 1e-3);
        CHECK(rep.grad_hi < 1.0 + 1e-3);
        CHECK(rep.sup_lap < 1e-6);
        CHECK(rep.alpha_hat > 0.02);
    }
}

TEST_CASE("finite GH by enumeration matches hand values") {
    // two points at distance 2 vs a single point (duplicated): GH = diam/2
    const std::vector<double> two = {0, 2, 2, 0};
    const std::vector<double> pt = {0, 0, 0, 0};
    CHECK(finite_gh(two, pt, 2) == doctest::Approx(1.0));
    // identical spaces
    CHECK(finite_gh(two, two, 2) == doctest::Approx(0.0));
    // unit triangle vs a degenerate triangle on a segment of length 1
    const std::vector<double> tri = {0, 1, 1, 1, 0, 1, 1, 1, 0};
    const std::vector<double> seg = {0, 1, 0.5, 1, 0, 0.5, 0.5, 0.5, 0};
    const double g = finite_gh(tri, seg, 3);
    CHECK(g > 0.0);
    CHECK(g <= 0.5);
}

TEST_CASE("independence proxy separates lines from triangles") {
    // 3 collinear points embed isometrically into R^1: alpha ~ 0
    const std::vector<double> line = {0, 1, 2, 1, 0, 1, 2, 1, 0};
    CHECK(independence_proxy(line, 2, 1.0) < 1e-3);
    // equilateral triangle of side 1 stays GH-far from every line
    const std::vector<double> tri = {0, 1, 1, 1, 0, 1, 1, 1, 0};
    CHECK(independence_proxy(tri, 2, 1.0) > 0.05);
    // 2 points at distance d: alpha = d/(2r)
    const std::vector<double> two = {0, 0.8, 0.8, 0};
    CHECK(independence_proxy(two, 1, 1.0) == doctest::Approx(0.4));
}

TEST_CASE("axis splitting on a warped spec produces bounded sane reports") {
    const ManifoldSpec s = warped_spec(3, 0.8, 0.2);
    const Grid2D g = Grid2D::make(1e-3, 64.0, 300, 128);
    const auto rep = axis_splitting(s, g, AxisPole{0.0, +1}, AxisPole{0.5, +1}, 1.0,
                                    1.0 / 8.0, 24);
    CHECK(rep.d01 == doctest::Approx(0.5));
    CHECK(rep.alpha_hat == doctest::Approx(0.25));
    CHECK(rep.c[0] > 0.5);
    CHECK(rep.c[1] > 0.5);
    const double bi = avr_and_binfty(s).b_infty;
    CHECK(rep.c[0] <= 1.0 / (bi * bi) + 1e-6);
    CHECK(rep.item1 > 0.0);
    CHECK(rep.item1 < 5.0);
    CHECK(rep.item2 < 1.0);
    CHECK(rep.item3 < 10.0);
    CHECK(rep.sup_grad_raw < 10.0);
    CHECK(rep.rhs1 > 0.0);
    CHECK(rep.sup_lap > 0.0);
}

TEST_CASE("axis splitting scale covariance and degeneracy guard") {
    const ManifoldSpec s = warped_spec(3, 0.8, 0.2);
    const Grid2D g = Grid2D::make(1e-3, 64.0, 300, 128);
    CHECK_THROWS_AS(
        axis_splitting(s, g, AxisPole{0.5, +1}, AxisPole{0.5, +1}, 1.0, 0.125, 16),
        DomainError);
    // opposite sides add distances along the axis
    const auto rep = axis_splitting(s, g, AxisPole{0.3, +1}, AxisPole{0.3, -1}, 1.0,
                                    1.0 / 8.0, 16);
    CHECK(rep.d01 == doctest::Approx(0.6));
}
