#include "pinchlab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "pinchlab/constants.hpp"

namespace pinchlab {

namespace {

/// Metric length of the straight coordinate segment between two (r, theta)
/// points, Simpson in the parameter.
double segment_length(const ManifoldSpec& spec, double r0, double t0, double r1, double t1) {
    const double dr = r1 - r0, dt = t1 - t0;
    auto g = [&](double s) {
        const double f = spec.f(r0 + s * dr);
        return std::sqrt(dr * dr + f * f * dt * dt);
    };
    return (g(0.0) + 4.0 * g(0.5) + g(1.0)) / 6.0;
}

double segment_energy(const ManifoldSpec& spec, double r0, double t0, double r1, double t1) {
    const double dr = r1 - r0, dt = t1 - t0;
    const double f = spec.f(0.5 * (r0 + r1));
    return dr * dr + f * f * dt * dt;
}

std::vector<std::pair<double, double>> resample(
    const std::vector<std::pair<double, double>>& path, int m) {
    std::vector<double> cum(path.size(), 0.0);
    for (std::size_t k = 1; k < path.size(); ++k) {
        const double dr = path[k].first - path[k - 1].first;
        const double dt = path[k].second - path[k - 1].second;
        cum[k] = cum[k - 1] + std::sqrt(dr * dr + dt * dt) + 1e-300;
    }
    std::vector<std::pair<double, double>> out(m + 1);
    out[0] = path.front();
    out[m] = path.back();
    const double total = cum.back();
    std::size_t k = 1;
    for (int i = 1; i < m; ++i) {
        const double target = total * i / m;
        while (k + 1 < path.size() && cum[k] < target) ++k;
        const double seg = cum[k] - cum[k - 1];
        const double w = seg > 0 ? (target - cum[k - 1]) / seg : 0.0;
        out[i] = {path[k - 1].first + w * (path[k].first - path[k - 1].first),
                  path[k - 1].second + w * (path[k].second - path[k - 1].second)};
    }
    return out;
}

/// One Gauss-Seidel sweep of the segment-energy minimization.
void relax_sweep(const ManifoldSpec& spec, std::vector<std::pair<double, double>>& p) {
    for (std::size_t k = 1; k + 1 < p.size(); ++k) {
        auto& [rk, tk] = p[k];
        const auto [ra, ta] = p[k - 1];
        const auto [rb, tb] = p[k + 1];
        const double ma = 0.5 * (ra + rk), mb = 0.5 * (rk + rb);
        const double fa = spec.f(ma), fb = spec.f(mb);
        const double fpa = spec.df(ma), fpb = spec.df(mb);
        const double da = tk - ta, db = tb - tk;
        const double gr = 2.0 * (rk - ra) - 2.0 * (rb - rk) + fa * fpa * da * da +
                          fb * fpb * db * db;
        const double gt = 2.0 * fa * fa * da - 2.0 * fb * fb * db;
        const double hrr = 4.0;
        const double htt = 2.0 * (fa * fa + fb * fb) + 1e-300;
        rk -= gr / hrr;
        tk -= gt / htt;
        if (rk < 0.0) rk = 0.0;
    }
}

double path_length(const ManifoldSpec& spec, const std::vector<std::pair<double, double>>& p) {
    double len = 0.0;
    for (std::size_t k = 1; k < p.size(); ++k)
        len += segment_length(spec, p[k - 1].first, p[k - 1].second, p[k].first, p[k].second);
    return len;
}

struct HeapItem {
    double d;
    int node;
    bool operator>(const HeapItem& o) const { return d > o.d; }
};

std::vector<std::pair<int, int>> stencil_offsets(int k) {
    std::vector<std::pair<int, int>> out;
    for (int di = -k; di <= k; ++di)
        for (int dj = -k; dj <= k; ++dj) {
            if (di == 0 && dj == 0) continue;
            if (std::gcd(std::abs(di), std::abs(dj)) != 1) continue;
            out.emplace_back(di, dj);
        }
    return out;
}

} // namespace

double euclidean_chord(double r1, double r2, double gamma) {
    const double c = std::cos(gamma);
    return std::sqrt(std::max(0.0, r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * c));
}

double cone_unroll_distance(double a, double r1, double r2, double gamma) {
    const double beta = a * gamma;
    if (beta >= kPi) return r1 + r2;
    return euclidean_chord(r1, r2, beta);
}

double relax_polyline_length(const ManifoldSpec& spec,
                             std::vector<std::pair<double, double>> path,
                             int target_points) {
    // Coarse-to-fine: heavy smoothing on short polylines removes the
    // low-frequency error cheaply before refining.
    int m = 8;
    std::vector<int> levels;
    while (m < target_points) { levels.push_back(m); m *= 2; }
    levels.push_back(target_points);
    for (int lv : levels) {
        path = resample(path, lv);
        const int sweeps = std::max(40, 4000 / lv);
        for (int it = 0; it < sweeps; ++it) relax_sweep(spec, path);
    }
    return path_length(spec, path);
}

double graph_geodesic_distance(const ManifoldSpec& spec, double r1, double r2,
                               double gamma, const GeoResolution& res) {
    gamma = std::clamp(gamma, 0.0, kPi);
    if (gamma < 1e-12) return std::abs(r1 - r2);
    if (r1 < 1e-12 || r2 < 1e-12) return r1 + r2;

    const double R = std::max(r1, r2);
    if (R > spec.r_max) throw DomainError("geodesic endpoint beyond r_max");
    const int nr = res.nr, nt = res.ntheta;
    const double hr = R / (nr - 1), ht = gamma / (nt - 1);
    // Through-vertex candidate; the sector grid cannot represent it well
    // because r = 0 collapses to a point.
    double best_through_vertex = r1 + r2;

    const int n_nodes = nr * nt + 2; // grid + two endpoints
    const int src = nr * nt, dst = nr * nt + 1;
    std::vector<double> dist(n_nodes, std::numeric_limits<double>::infinity());
    std::vector<int> pred(n_nodes, -1);
    auto rc = [&](int v) -> std::pair<double, double> {
        if (v == src) return {r1, 0.0};
        if (v == dst) return {r2, gamma};
        return {(v / nt) * hr, (v % nt) * ht};
    };
    const auto offs = stencil_offsets(res.stencil);

    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap;
    dist[src] = 0.0;
    heap.push({0.0, src});
    auto relax_edge = [&](int u, int v, double w) {
        if (dist[u] + w < dist[v] - 1e-15) {
            dist[v] = dist[u] + w;
            pred[v] = u;
            heap.push({dist[v], v});
        }
    };
    const int ei1 = static_cast<int>(std::round(r1 / hr));
    const int ei2 = static_cast<int>(std::round(r2 / hr));
    const int K = res.stencil + 1;
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u] + 1e-15) continue;
        if (u == dst) break;
        const auto [ru, tu] = rc(u);
        if (u == src) {
            for (int di = -K; di <= K; ++di)
                for (int j = 0; j <= K; ++j) {
                    const int i = ei1 + di;
                    if (i < 0 || i >= nr) continue;
                    const int v = i * nt + j;
                    const auto [rv, tv] = rc(v);
                    relax_edge(u, v, segment_length(spec, ru, tu, rv, tv));
                }
            continue;
        }
        const int iu = u / nt, ju = u % nt;
        // endpoint hookups
        if (std::abs(iu - ei1) <= K && ju <= K)
            relax_edge(u, src, segment_length(spec, ru, tu, r1, 0.0));
        if (std::abs(iu - ei2) <= K && ju >= nt - 1 - K) {
            relax_edge(u, dst, segment_length(spec, ru, tu, r2, gamma));
        }
        for (const auto& [di, dj] : offs) {
            const int i = iu + di, j = ju + dj;
            if (i < 0 || i >= nr || j < 0 || j >= nt) continue;
            const int v = i * nt + j;
            const auto [rv, tv] = rc(v);
            relax_edge(u, v, segment_length(spec, ru, tu, rv, tv));
        }
    }

    double d = dist[dst];
    if (res.relax && std::isfinite(d)) {
        std::vector<std::pair<double, double>> path;
        for (int v = dst; v != -1; v = pred[v]) path.push_back(rc(v));
        std::reverse(path.begin(), path.end());
        d = relax_polyline_length(spec, std::move(path), res.relax_points);
    }
    return std::min(d, best_through_vertex);
}

double geodesic_distance(const ManifoldSpec& spec, double r1, double r2, double gamma,
                         const GeoResolution& res) {
    gamma = std::clamp(gamma, 0.0, kPi);
    if (std::max(r1, r2) > spec.r_max) throw DomainError("point beyond r_max");
    switch (spec.kind) {
        case Kind::Euclidean: return euclidean_chord(r1, r2, gamma);
        case Kind::Cone: return cone_unroll_distance(spec.cone_slope, r1, r2, gamma);
        case Kind::Warped: return graph_geodesic_distance(spec, r1, r2, gamma, res);
    }
    return euclidean_chord(r1, r2, gamma);
}

DistanceField::DistanceField(const ManifoldSpec& spec, const Grid2D& grid, double pole_r,
                             int stencil)
    : spec_(spec), grid_(grid), pole_r_(pole_r) {
    const int nr = static_cast<int>(grid_.nr());
    const int np = static_cast<int>(grid_.nphi());
    const int n_nodes = nr * np + 1;
    const int src = nr * np; // the pole, at (pole_r, phi = 0)
    dist_.assign(n_nodes, std::numeric_limits<double>::infinity());
    pred_.assign(n_nodes, -1);
    refined_.assign(nr * np, -1.0);

    auto rc = [&](int v) -> std::pair<double, double> {
        if (v == src) return {pole_r_, 0.0};
        return {grid_.r[v / np], grid_.phi[v % np]};
    };
    const auto offs = stencil_offsets(stencil);
    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap;
    dist_[src] = 0.0;
    heap.push({0.0, src});
    auto relax_edge = [&](int u, int v, double w) {
        if (dist_[u] + w < dist_[v] - 1e-15) {
            dist_[v] = dist_[u] + w;
            pred_[v] = u;
            heap.push({dist_[v], v});
        }
    };
    const int pi0 = static_cast<int>(grid_.nearest_r(pole_r_));
    const int K = stencil + 1;
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist_[u] + 1e-15) continue;
        const auto [ru, tu] = rc(u);
        if (u == src) {
            for (int di = -2 * K; di <= 2 * K; ++di)
                for (int j = 0; j <= K; ++j) {
                    const int i = pi0 + di;
                    if (i < 0 || i >= nr) continue;
                    const int v = i * np + j;
                    const auto [rv, tv] = rc(v);
                    relax_edge(u, v, segment_length(spec_, ru, tu, rv, tv));
                }
            continue;
        }
        const int iu = u / np, ju = u % np;
        for (const auto& [di, dj] : offs) {
            const int i = iu + di, j = ju + dj;
            if (i < 0 || i >= nr || j < 0 || j >= np) continue;
            const int v = i * np + j;
            const auto [rv, tv] = rc(v);
            relax_edge(u, v, segment_length(spec_, ru, tu, rv, tv));
        }
    }
    // Radial shortcut through the center: d <= pole_r + r (exact when the
    // geodesic passes the center); keeps far-axis nodes honest where the
    // log grid is coarse.
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < np; ++j) {
            const double through = pole_r_ + grid_.r[i];
            auto& d = dist_[i * np + j];
            if (through < d) {
                d = through;
                pred_[i * np + j] = -2; // marker: straight through center
            }
        }
}

std::vector<std::pair<double, double>> DistanceField::backtrack(std::size_t node) const {
    std::vector<std::pair<double, double>> path;
    const int np = static_cast<int>(grid_.nphi());
    int v = static_cast<int>(node);
    while (v >= 0) {
        if (v == static_cast<int>(grid_.size()))
            path.emplace_back(pole_r_, 0.0);
        else
            path.emplace_back(grid_.r[v / np], grid_.phi[v % np]);
        v = pred_[v];
    }
    std::reverse(path.begin(), path.end());
    return path;
}

double DistanceField::accurate(std::size_t i, std::size_t j) const {
    const std::size_t node = grid_.idx(i, j);
    if (refined_[node] >= 0.0) return refined_[node];
    double d;
    if (pred_[node] == -2) {
        d = pole_r_ + grid_.r[i]; // through-center path is already exact
    } else {
        d = relax_polyline_length(spec_, backtrack(node), 192);
        d = std::min(d, pole_r_ + grid_.r[i]);
    }
    refined_[node] = d;
    return d;
}

} // namespace pinchlab
