#include "pinchlab/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pinchlab/constants.hpp"
#include "pinchlab/hessian.hpp"
#include "pinchlab/monotone.hpp"
#include "pinchlab/sampling.hpp"
#include "pinchlab/stats.hpp"

namespace pinchlab {

namespace {

// Read a b-field through an optional phi -> pi - phi reflection so a pole on
// the far side of the axis reuses the axisymmetric solve. The angular
// gradient component flips sign under the reflection.
struct PoleView {
    const BField* f = nullptr;
    int side = +1;

    std::size_t jmap(std::size_t j) const {
        return side > 0 ? j : f->grid.nphi() - 1 - j;
    }
    double b(std::size_t i, std::size_t j) const { return f->b[f->grid.idx(i, jmap(j))]; }
    double gr(std::size_t i, std::size_t j) const {
        return f->db_dr[f->grid.idx(i, jmap(j))];
    }
    double gp(std::size_t i, std::size_t j) const {
        const double v = f->db_dphi_over_f[f->grid.idx(i, jmap(j))];
        return side > 0 ? v : -v;
    }
    bool near(std::size_t i, std::size_t j) const { return f->near_pole(i, jmap(j)); }
};

std::vector<double> geometric_span(double lo, double hi, double ratio) {
    std::vector<double> out;
    for (double v = lo; v <= hi * (1.0 + 1e-12); v *= ratio) out.push_back(v);
    return out;
}

double sq(double x) { return x * x; }

} // namespace

SplittingReport axis_splitting(const ManifoldSpec& spec, const Grid2D& grid, AxisPole x0,
                               AxisPole x1, double ball_r, double delta, int L) {
    if (delta <= 0.0 || ball_r <= 0.0) throw DomainError("splitting scales must be positive");
    if (x0.rho > ball_r || x1.rho > ball_r)
        throw DomainError("pole outside the splitting ball");

    const int n = spec.n;
    auto solve = [&](const AxisPole& p) {
        return p.rho > 0.0 ? offcenter_green(spec, p.rho, L, grid)
                           : radial_bfield(spec, grid);
    };
    const BField f0 = solve(x0);
    const BField f1 = solve(x1);
    const PoleView v0{&f0, x0.rho > 0.0 ? x0.side : +1};
    const PoleView v1{&f1, x1.rho > 0.0 ? x1.side : +1};

    SplittingReport rep;
    rep.ball_r = ball_r;
    rep.delta = delta;
    rep.d01 = (v0.side == v1.side) ? std::abs(x1.rho - x0.rho) : x1.rho + x0.rho;
    if (rep.d01 < 1e-9 * ball_r) throw DomainError("splitting poles coincide");
    rep.alpha_hat = independence_proxy({0.0, rep.d01, rep.d01, 0.0}, 1, ball_r);

    const BallSample sample = ball_sample(spec, grid, ball_r);
    std::vector<char> mask(grid.size(), 1);
    for (std::size_t q = 0; q < sample.node.size(); ++q)
        if (v0.near(sample.ri[q], sample.pj[q]) || v1.near(sample.ri[q], sample.pj[q]))
            mask[sample.node[q]] = 0;

    // gradient normalizers c_{r,x} = avg_B |grad b_x|^2 on the shared sample
    std::vector<double> g0(grid.size(), 0.0), g1(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.nr(); ++i)
        for (std::size_t j = 0; j < grid.nphi(); ++j) {
            const std::size_t k = grid.idx(i, j);
            g0[k] = sq(v0.gr(i, j)) + sq(v0.gp(i, j));
            g1[k] = sq(v1.gr(i, j)) + sq(v1.gp(i, j));
        }
    const double c0 = ball_average(sample, g0, &mask);
    const double c1 = ball_average(sample, g1, &mask);
    rep.c = {c0, c1};

    // raw map and its gradient from the chain rule on b^2/c
    const double d01 = rep.d01;
    std::vector<double> ut(grid.size(), 0.0), gut_r(grid.size(), 0.0),
        gut_p(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.nr(); ++i)
        for (std::size_t j = 0; j < grid.nphi(); ++j) {
            const std::size_t k = grid.idx(i, j);
            const double b0 = v0.b(i, j), b1 = v1.b(i, j);
            ut[k] = (b1 * b1 / c1 - b0 * b0 / c0 - d01 * d01) / (2.0 * d01);
            gut_r[k] = (b1 * v1.gr(i, j) / c1 - b0 * v0.gr(i, j) / c0) / d01;
            gut_p[k] = (b1 * v1.gp(i, j) / c1 - b0 * v0.gp(i, j) / c0) / d01;
        }

    std::vector<double> gut2(grid.size(), 0.0);
    for (std::size_t k = 0; k < grid.size(); ++k)
        gut2[k] = sq(gut_r[k]) + sq(gut_p[k]);
    const double gram = ball_average(sample, gut2, &mask);
    if (gram < 1e-8) throw DomainError("points nearly dependent");
    const double a = 1.0 / std::sqrt(gram);
    rep.A_norm = a;

    std::vector<double> u(grid.size(), 0.0), gu2(grid.size(), 0.0), defect(grid.size(), 0.0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        u[k] = a * ut[k];
        gu2[k] = a * a * gut2[k];
        defect[k] = sq(gu2[k] - 1.0);
    }
    rep.item2 = ball_average(sample, defect, &mask);
    for (std::size_t q = 0; q < sample.node.size(); ++q) {
        if (!mask[sample.node[q]]) continue;
        rep.item3 = std::max(rep.item3, std::sqrt(gu2[sample.node[q]]));
        rep.sup_grad_raw = std::max(rep.sup_grad_raw, std::sqrt(gut2[sample.node[q]]));
    }

    // Hessian of the orthonormalized map over the ball
    const TensorField th = hessian_blocks(spec, grid, u);
    std::vector<char> hmask = mask;
    for (std::size_t k = 0; k < grid.size(); ++k)
        if (!th.valid[k]) hmask[k] = 0;
    rep.item1 = ball_r * ball_r * ball_average(sample, th.full2, &hmask);
    for (std::size_t q = 0; q < sample.node.size(); ++q)
        if (hmask[sample.node[q]])
            rep.sup_lap = std::max(rep.sup_lap, std::abs(th.lap[sample.node[q]]));

    // quadrature error estimate: drop every other sample node
    {
        std::vector<char> coarse = hmask;
        for (std::size_t q = 0; q < sample.node.size(); ++q)
            if (q % 2 != 0) coarse[sample.node[q]] = 0;
        const double i1c = ball_r * ball_r * ball_average(sample, th.full2, &coarse);
        rep.item1_err = std::abs(i1c - rep.item1);
    }

    // comparison quantities: F gaps of each pole and the weighted energies
    const double s1 = 1.0 / delta;
    const auto levels = geometric_span(s1 / 1.3, 4.0 * s1 * 1.3, 1.12);
    const MonotoneProfile mp0 = grid_monotone(f0, levels);
    const MonotoneProfile mp1 = grid_monotone(f1, levels);
    rep.F_pinch0 = pinching(mp0, s1, 2.0 * s1).Fpinch;
    rep.F_pinch1 = pinching(mp1, s1, 2.0 * s1).Fpinch;
    rep.sym_lhs = std::max(pinching(mp0, 2.0 * s1, 4.0 * s1).Fpinch,
                           pinching(mp1, 2.0 * s1, 4.0 * s1).Fpinch);
    rep.sym_rhs = std::pow(delta, 8.0); // delta^{4+4mu}, mu = 1, threshold C = 1
    rep.symmetric_ok = rep.sym_lhs < rep.sym_rhs;

    const TensorField t0 = tracefree_hessian_field(f0);
    const TensorField t1 = tracefree_hessian_field(f1);
    rep.energy0 = averaged_energy(t0, f0, ball_r, -2).value;
    rep.energy1 = averaged_energy(t1, f1, ball_r, -2).value;
    rep.rhs1 = std::pow(delta * ball_r, -n) * (rep.F_pinch0 + rep.F_pinch1) +
               ball_r * ball_r * (rep.energy0 + rep.energy1);
    rep.rhs2 = rep.F_pinch0 + rep.F_pinch1;
    return rep;
}

EuclidSplitReport euclidean_splitting(int n, int k, double ball_r, int count,
                                      std::uint64_t seed) {
    if (k < 1 || k > n) throw DomainError("splitting rank must satisfy 1 <= k <= n");
    if (count < 8) throw DomainError("sample too small");

    EuclidSplitReport rep;
    rep.n = n;
    rep.k = k;
    rep.ball_r = ball_r;

    // poles x_0 = 0, x_j = (r/2) e_j
    std::vector<std::vector<double>> poles(k + 1, std::vector<double>(n, 0.0));
    for (int j = 1; j <= k; ++j) poles[j][j - 1] = 0.5 * ball_r;
    std::vector<double> dist((k + 1) * (k + 1), 0.0);
    for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j) {
            double s = 0.0;
            for (int d = 0; d < n; ++d) s += sq(poles[i][d] - poles[j][d]);
            dist[i * (k + 1) + j] = std::sqrt(s);
        }
    rep.alpha_hat = independence_proxy(dist, k, ball_r);

    const auto pts =
        euclidean_ball_points(n, std::vector<double>(n, 0.0), ball_r, count, seed);

    // b_x = |y - x| exactly; c_{r,x} = avg |grad b|^2 computed as sampled
    std::vector<double> c(k + 1, 0.0);
    for (int j = 0; j <= k; ++j) {
        double acc = 0.0;
        for (const auto& y : pts) {
            double g2 = 0.0, d2 = 0.0;
            for (int d = 0; d < n; ++d) d2 += sq(y[d] - poles[j][d]);
            for (int d = 0; d < n; ++d) g2 += sq((y[d] - poles[j][d]) / std::sqrt(d2));
            acc += g2;
        }
        c[j] = acc / count;
    }

    // raw gradients are constant: grad u~_j = (2(y-x_j)/c_j - 2(y-x_0)/c_0)/(2 d_j),
    // sampled pointwise to keep the assembly honest
    std::vector<std::vector<std::vector<double>>> gut(
        k, std::vector<std::vector<double>>(count, std::vector<double>(n, 0.0)));
    for (int j = 1; j <= k; ++j) {
        const double dj = dist[j];
        for (int q = 0; q < count; ++q)
            for (int d = 0; d < n; ++d)
                gut[j - 1][q][d] = ((pts[q][d] - poles[j][d]) / c[j] -
                                    (pts[q][d] - poles[0][d]) / c[0]) /
                                   dj;
    }

    std::vector<double> gram(k * k, 0.0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            double acc = 0.0;
            for (int q = 0; q < count; ++q)
                for (int d = 0; d < n; ++d) acc += gut[i][q][d] * gut[j][q][d];
            gram[i * k + j] = acc / count;
        }
    std::vector<double> L;
    if (!cholesky_lower(k, gram, L, 1e-8)) throw DomainError("points nearly dependent");
    const std::vector<double> A = lower_triangular_inverse(k, L);

    // Hess u~_j = I (1/c_j - 1/c_0)/d_j; items from the transformed blocks
    double worst_h = 0.0;
    for (int i = 0; i < k; ++i) {
        double diag = 0.0;
        for (int j = 0; j <= i; ++j)
            diag += A[i * k + j] * (1.0 / c[j + 1] - 1.0 / c[0]) / dist[j + 1];
        worst_h = std::max(worst_h, n * diag * diag);
        rep.sup_lap = std::max(rep.sup_lap, std::abs(n * diag));
    }
    rep.item1 = ball_r * ball_r * worst_h;

    for (int i = 0; i < k; ++i)
        for (int j = 0; j <= i; ++j) {
            double acc = 0.0;
            for (int q = 0; q < count; ++q) {
                double dot = 0.0;
                for (int d = 0; d < n; ++d) {
                    double gi = 0.0, gj = 0.0;
                    for (int m = 0; m <= i; ++m) gi += A[i * k + m] * gut[m][q][d];
                    for (int m = 0; m <= j; ++m) gj += A[j * k + m] * gut[m][q][d];
                    dot += gi * gj;
                }
                acc += sq(dot - (i == j ? 1.0 : 0.0));
            }
            rep.item2 = std::max(rep.item2, acc / count);
        }

    rep.grad_lo = 1e300;
    for (int i = 0; i < k; ++i)
        for (int q = 0; q < count; ++q) {
            double g2 = 0.0;
            for (int d = 0; d < n; ++d) {
                double gi = 0.0;
                for (int m = 0; m <= i; ++m) gi += A[i * k + m] * gut[m][q][d];
                g2 += gi * gi;
            }
            rep.grad_lo = std::min(rep.grad_lo, std::sqrt(g2));
            rep.grad_hi = std::max(rep.grad_hi, std::sqrt(g2));
        }
    return rep;
}

double finite_gh(const std::vector<double>& dx, const std::vector<double>& dy, int m) {
    auto distortion = [&](const std::vector<std::pair<int, int>>& R) {
        double worst = 0.0;
        for (std::size_t a = 0; a < R.size(); ++a)
            for (std::size_t b = 0; b < R.size(); ++b)
                worst = std::max(worst, std::abs(dx[R[a].first * m + R[b].first] -
                                                 dy[R[a].second * m + R[b].second]));
        return worst;
    };

    double best = 1e300;
    if (m <= 4) {
        // all pairs of maps phi: X -> Y, psi: Y -> X; their graphs union to a
        // correspondence, and some optimal correspondence has this shape
        int pw = 1;
        for (int i = 0; i < m; ++i) pw *= m;
        std::vector<std::pair<int, int>> R(2 * m);
        for (int phi = 0; phi < pw; ++phi) {
            int ph = phi;
            for (int i = 0; i < m; ++i, ph /= m) R[i] = {i, ph % m};
            for (int psi = 0; psi < pw; ++psi) {
                int ps = psi;
                for (int j = 0; j < m; ++j, ps /= m) R[m + j] = {ps % m, j};
                best = std::min(best, distortion(R));
            }
        }
    } else {
        // permutation proxy for larger sets
        std::vector<int> perm(m);
        for (int i = 0; i < m; ++i) perm[i] = i;
        std::vector<std::pair<int, int>> R(m);
        do {
            for (int i = 0; i < m; ++i) R[i] = {i, perm[i]};
            best = std::min(best, distortion(R));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return 0.5 * best;
}

double independence_proxy(const std::vector<double>& dist, int k, double r) {
    const int m = k + 1;
    if (k == 1) {
        // the only subset of R^0 is a point; GH to a point is half the diameter
        return 0.5 * dist[1] / r;
    }
    const int dim = k - 1;

    double best = 1e300;
    std::mt19937_64 rng(20240817u);
    std::normal_distribution<double> gauss(0.0, 0.5 * r);
    for (int start = 0; start < 6; ++start) {
        std::vector<double> x0(m * dim, 0.0);
        for (auto& v : x0) v = gauss(rng);
        auto objective = [&](const std::vector<double>& x) {
            double acc = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j) {
                    double s = 0.0;
                    for (int d = 0; d < dim; ++d)
                        s += sq(x[i * dim + d] - x[j * dim + d]);
                    acc += sq(std::sqrt(s) - dist[i * m + j]);
                }
            return acc;
        };
        const std::vector<double> fit = nelder_mead(objective, x0, 0.3 * r, 600);
        std::vector<double> dy(m * m, 0.0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double s = 0.0;
                for (int d = 0; d < dim; ++d)
                    s += sq(fit[i * dim + d] - fit[j * dim + d]);
                dy[i * m + j] = std::sqrt(s);
            }
        best = std::min(best, finite_gh(dist, dy, m));
    }
    return best / r;
}

} // namespace pinchlab
