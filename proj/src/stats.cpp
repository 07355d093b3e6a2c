#include "pinchlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pinchlab {

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
    const std::size_t m = v.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(m);
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i;
        while (j + 1 < m && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = 0.5 * (i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
        i = j + 1;
    }
    return r;
}

} // namespace

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("spearman_rho needs two equal-length samples");
    const std::vector<double> rx = ranks(x), ry = ranks(y);
    const double m = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += rx[i]; my += ry[i]; }
    mx /= m;
    my /= m;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0 || syy == 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) return 0.0;
    const double den = m * sxx - sx * sx;
    if (den == 0) return 0.0;
    return (m * sxy - sx * sy) / den;
}

bool cholesky_lower(int k, const std::vector<double>& m, std::vector<double>& L, double tol) {
    L.assign(static_cast<std::size_t>(k) * k, 0.0);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = m[i * k + j];
            for (int t = 0; t < j; ++t) s -= L[i * k + t] * L[j * k + t];
            if (i == j) {
                if (s < tol) return false;
                L[i * k + i] = std::sqrt(s);
            } else {
                L[i * k + j] = s / L[j * k + j];
            }
        }
    }
    return true;
}

std::vector<double> lower_triangular_inverse(int k, const std::vector<double>& L) {
    std::vector<double> inv(static_cast<std::size_t>(k) * k, 0.0);
    for (int i = 0; i < k; ++i) {
        inv[i * k + i] = 1.0 / L[i * k + i];
        for (int j = 0; j < i; ++j) {
            double s = 0.0;
            for (int t = j; t < i; ++t) s += L[i * k + t] * inv[t * k + j];
            inv[i * k + j] = -s / L[i * k + i];
        }
    }
    return inv;
}

std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, double step, int max_iter,
                                double* fmin) {
    const std::size_t d = x0.size();
    if (d == 0) {
        if (fmin) *fmin = f(x0);
        return x0;
    }
    std::vector<std::vector<double>> pts(d + 1, x0);
    std::vector<double> val(d + 1);
    for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step;
    for (std::size_t i = 0; i <= d; ++i) val[i] = f(pts[i]);

    for (int it = 0; it < max_iter; ++it) {
        std::vector<std::size_t> ord(d + 1);
        std::iota(ord.begin(), ord.end(), 0);
        std::sort(ord.begin(), ord.end(),
                  [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
        const std::size_t best = ord[0], worst = ord[d], second = ord[d - 1];
        if (std::abs(val[worst] - val[best]) < 1e-14 * (1.0 + std::abs(val[best]))) break;

        std::vector<double> cen(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == worst) continue;
            for (std::size_t t = 0; t < d; ++t) cen[t] += pts[i][t] / d;
        }
        auto combine = [&](double alpha) {
            std::vector<double> p(d);
            for (std::size_t t = 0; t < d; ++t)
                p[t] = cen[t] + alpha * (pts[worst][t] - cen[t]);
            return p;
        };
        std::vector<double> refl = combine(-1.0);
        const double fr = f(refl);
        if (fr < val[best]) {
            std::vector<double> exp_ = combine(-2.0);
            const double fe = f(exp_);
            if (fe < fr) { pts[worst] = exp_; val[worst] = fe; }
            else { pts[worst] = refl; val[worst] = fr; }
        } else if (fr < val[second]) {
            pts[worst] = refl;
            val[worst] = fr;
        } else {
            std::vector<double> con = combine(0.5);
            const double fc = f(con);
            if (fc < val[worst]) { pts[worst] = con; val[worst] = fc; }
            else {
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    for (std::size_t t = 0; t < d; ++t)
                        pts[i][t] = 0.5 * (pts[i][t] + pts[best][t]);
                    val[i] = f(pts[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= d; ++i)
        if (val[i] < val[best]) best = i;
    if (fmin) *fmin = val[best];
    return pts[best];
}

} // namespace pinchlab
