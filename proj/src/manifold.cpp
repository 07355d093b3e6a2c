#include "pinchlab/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pinchlab/constants.hpp"

namespace pinchlab {

namespace {

constexpr double kCurvTol = 1e-8;

class EuclideanProfile final : public WarpProfile {
public:
    double f(double r) const override { return r; }
    double df(double) const override { return 1.0; }
    double d2f(double) const override { return 0.0; }
    double slope() const override { return 1.0; }
    std::string id() const override { return "euclidean"; }
};

class ConeProfile final : public WarpProfile {
public:
    explicit ConeProfile(double a) : a_(a) {}
    double f(double r) const override { return a_ * r; }
    double df(double) const override { return a_; }
    double d2f(double) const override { return 0.0; }
    double slope() const override { return a_; }
    std::string id() const override { return "cone"; }

private:
    double a_;
};

class SmoothedConeProfile final : public WarpProfile {
public:
    SmoothedConeProfile(double a, double w) : a_(a), w_(w) {}
    // gd(x) = 2 atan(tanh(x/2)); gd' = sech, gd'' = -sech tanh
    double f(double r) const override {
        const double x = r / w_;
        return a_ * r + (1.0 - a_) * w_ * 2.0 * std::atan(std::tanh(0.5 * x));
    }
    double df(double r) const override {
        return a_ + (1.0 - a_) / std::cosh(r / w_);
    }
    double d2f(double r) const override {
        const double x = r / w_;
        return -(1.0 - a_) / w_ * std::tanh(x) / std::cosh(x);
    }
    double slope() const override { return a_; }
    std::string id() const override { return "smoothed-cone"; }

private:
    double a_, w_;
};

class TanhCapProfile final : public WarpProfile {
public:
    TanhCapProfile(double a, double lambda) : a_(a), l_(lambda) {}
    double f(double r) const override { return a_ * r + (1.0 - a_) * std::tanh(l_ * r) / l_; }
    double df(double r) const override {
        const double s = 1.0 / std::cosh(l_ * r);
        return a_ + (1.0 - a_) * s * s;
    }
    double d2f(double r) const override {
        const double s = 1.0 / std::cosh(l_ * r);
        return -2.0 * l_ * (1.0 - a_) * s * s * std::tanh(l_ * r);
    }
    double slope() const override { return a_; }
    std::string id() const override { return "tanh-cap"; }

private:
    double a_, l_;
};

// Natural cubic spline through the sample table; slope taken from the last
// two samples. Used for raw-table profiles only.
class TableProfile final : public WarpProfile {
public:
    TableProfile(std::vector<double> r, std::vector<double> f)
        : r_(std::move(r)), v_(std::move(f)) {
        const std::size_t m = r_.size();
        if (m < 4) throw ValidationError("table profile needs at least 4 samples");
        for (std::size_t i = 1; i < m; ++i)
            if (r_[i] <= r_[i - 1])
                throw ValidationError("table profile radii must be strictly increasing");
        if (std::abs(r_.front()) > 1e-14 || std::abs(v_.front()) > 1e-14)
            throw ValidationError("table profile must start at f(0) = 0");
        slope_ = (v_[m - 1] - v_[m - 2]) / (r_[m - 1] - r_[m - 2]);
        build_spline();
        set_r_max(r_.back());
    }

    double f(double r) const override {
        if (r >= r_.back()) return v_.back() + slope_ * (r - r_.back());
        return eval(r, 0);
    }
    double df(double r) const override {
        if (r >= r_.back()) return slope_;
        return eval(r, 1);
    }
    double d2f(double r) const override {
        if (r >= r_.back()) return 0.0;
        return eval(r, 2);
    }
    double slope() const override { return slope_; }
    std::string id() const override { return "table"; }

private:
    void build_spline() {
        const std::size_t m = r_.size();
        m2_.assign(m, 0.0);
        std::vector<double> u(m, 0.0), yp(m, 0.0);
        for (std::size_t i = 1; i + 1 < m; ++i) {
            const double sig = (r_[i] - r_[i - 1]) / (r_[i + 1] - r_[i - 1]);
            const double p = sig * m2_[i - 1] + 2.0;
            m2_[i] = (sig - 1.0) / p;
            u[i] = (v_[i + 1] - v_[i]) / (r_[i + 1] - r_[i]) -
                   (v_[i] - v_[i - 1]) / (r_[i] - r_[i - 1]);
            u[i] = (6.0 * u[i] / (r_[i + 1] - r_[i - 1]) - sig * u[i - 1]) / p;
        }
        for (std::size_t i = m - 1; i-- > 0;) m2_[i] = m2_[i] * m2_[i + 1] + u[i];
    }

    double eval(double r, int deriv) const {
        auto it = std::upper_bound(r_.begin(), r_.end(), r);
        std::size_t k = std::min<std::size_t>(
            r_.size() - 2, it == r_.begin() ? 0 : std::size_t(it - r_.begin() - 1));
        const double h = r_[k + 1] - r_[k];
        const double A = (r_[k + 1] - r) / h, B = (r - r_[k]) / h;
        if (deriv == 0)
            return A * v_[k] + B * v_[k + 1] +
                   ((A * A * A - A) * m2_[k] + (B * B * B - B) * m2_[k + 1]) * h * h / 6.0;
        if (deriv == 1)
            return (v_[k + 1] - v_[k]) / h -
                   (3.0 * A * A - 1.0) / 6.0 * h * m2_[k] +
                   (3.0 * B * B - 1.0) / 6.0 * h * m2_[k + 1];
        return A * m2_[k] + B * m2_[k + 1];
    }

    std::vector<double> r_, v_, m2_;
    double slope_ = 1.0;
};

} // namespace

std::shared_ptr<WarpProfile> make_euclidean_profile() {
    return std::make_shared<EuclideanProfile>();
}
std::shared_ptr<WarpProfile> make_cone_profile(double a) {
    return std::make_shared<ConeProfile>(a);
}
std::shared_ptr<WarpProfile> make_smoothed_cone_profile(double a, double width) {
    return std::make_shared<SmoothedConeProfile>(a, width);
}
std::shared_ptr<WarpProfile> make_tanh_cap_profile(double a, double lambda) {
    return std::make_shared<TanhCapProfile>(a, lambda);
}
std::shared_ptr<WarpProfile> make_table_profile(std::vector<double> r, std::vector<double> f) {
    return std::make_shared<TableProfile>(std::move(r), std::move(f));
}

double ManifoldSpec::f(double r) const {
    switch (kind) {
        case Kind::Euclidean: return r;
        case Kind::Cone: return cone_slope * r;
        case Kind::Warped: return warp->f(r);
    }
    return r;
}

double ManifoldSpec::df(double r) const {
    switch (kind) {
        case Kind::Euclidean: return 1.0;
        case Kind::Cone: return cone_slope;
        case Kind::Warped: return warp->df(r);
    }
    return 1.0;
}

double ManifoldSpec::d2f(double r) const {
    return kind == Kind::Warped ? warp->d2f(r) : 0.0;
}

double ManifoldSpec::slope() const {
    switch (kind) {
        case Kind::Euclidean: return 1.0;
        case Kind::Cone: return cone_slope;
        case Kind::Warped: return warp->slope();
    }
    return 1.0;
}

RicciReport ricci_range(const ManifoldSpec& spec, int grid) {
    RicciReport rep;
    const double rmax = spec.r_max;
    const int n = spec.n;
    rep.r.reserve(grid);
    rep.ric_radial.reserve(grid);
    rep.ric_tangential.reserve(grid);
    double worst = 0.0;
    for (int i = 1; i <= grid; ++i) {
        const double r = rmax * i / grid;
        const double f = spec.f(r), fp = spec.df(r), fpp = spec.d2f(r);
        const double rad = -(n - 1) * fpp / f;
        const double tan = -fpp / f + (n - 2) * (1.0 - fp * fp) / (f * f);
        rep.r.push_back(r);
        rep.ric_radial.push_back(rad);
        rep.ric_tangential.push_back(tan);
        const double mn = std::min(rad, tan);
        if (i == 1 || mn < worst) {
            worst = mn;
            rep.worst_r = r;
        }
    }
    auto mm = [](const std::vector<double>& v) {
        return std::pair{*std::min_element(v.begin(), v.end()),
                         *std::max_element(v.begin(), v.end())};
    };
    std::tie(rep.min_radial, rep.max_radial) = mm(rep.ric_radial);
    std::tie(rep.min_tangential, rep.max_tangential) = mm(rep.ric_tangential);
    return rep;
}

VolumeData avr_and_binfty(const ManifoldSpec& spec) {
    const int n = spec.n;
    const double a = spec.slope();
    if (!(a > 0.0))
        throw ValidationError("volume growth undetermined: asymptotic slope is not positive");
    // Vol(B_R)/R^n -> |S^{n-1}| a^{n-1} / n = omega_n a^{n-1}.
    VolumeData out;
    out.v_m = unit_ball_volume(n) * std::pow(a, n - 1);
    out.b_infty = std::pow(out.v_m / unit_ball_volume(n), 1.0 / (n - 2));
    out.v_lower = out.v_m;
    return out;
}

void validate_spec(const ManifoldSpec& spec) {
    if (spec.n < 3) throw ValidationError("dimension must satisfy n >= 3");
    if (spec.kind == Kind::Cone) {
        if (!(spec.cone_slope > 0.0 && spec.cone_slope <= 1.0))
            throw ValidationError("cone slope must lie in (0, 1]");
        return;
    }
    if (spec.kind != Kind::Warped) return;
    if (!spec.warp) throw ValidationError("warped spec has no profile");

    const auto& w = *spec.warp;
    if (std::abs(w.f(0.0)) > 1e-12)
        throw ValidationError("warp profile must satisfy f(0) = 0");
    const double fp0 = w.df(0.0);
    if (std::abs(fp0 - 1.0) > 1e-6)
        throw ValidationError("warp profile must satisfy f'(0) = 1, got " +
                              std::to_string(fp0));
    const double a = w.slope();
    if (!(a > 0.0 && a <= 1.0 + 1e-12))
        throw ValidationError("asymptotic slope must lie in (0, 1], got " + std::to_string(a));

    const auto rep = ricci_range(spec);
    const double worst = std::min(rep.min_radial, rep.min_tangential);
    if (worst < -kCurvTol) {
        std::ostringstream msg;
        msg << "Ricci >= 0 violated: min eigenvalue " << worst << " at r = " << rep.worst_r;
        throw ValidationError(msg.str());
    }
    // f(r)/r non-increasing follows from concavity; spot-check anyway.
    double prev = 1.0;
    for (int i = 1; i <= 64; ++i) {
        const double r = spec.r_max * i / 64.0;
        const double q = w.f(r) / r;
        if (q > prev + 1e-9)
            throw ValidationError("f(r)/r increases at r = " + std::to_string(r));
        prev = q;
    }
}

ManifoldSpec load_spec(const Config& cfg) {
    ManifoldSpec spec;
    spec.n = static_cast<int>(cfg.get_int("manifold.n"));
    const std::string kind = cfg.get_string("manifold.kind");
    spec.r_max = cfg.get_double("manifold.r_max", 256.0);
    spec.grid_nr = static_cast<int>(cfg.get_int("grid.nr", 512));
    spec.grid_nphi = static_cast<int>(cfg.get_int("grid.nphi", 256));
    spec.label = cfg.get_string("manifold.label", kind);
    spec.hash = fnv1a(cfg.canonical());

    if (kind == "euclidean") {
        spec.kind = Kind::Euclidean;
    } else if (kind == "cone") {
        spec.kind = Kind::Cone;
        spec.cone_slope = cfg.get_double("manifold.a");
    } else if (kind == "warped") {
        spec.kind = Kind::Warped;
        const std::string id = cfg.get_string("manifold.warp.id");
        if (id == "euclidean") {
            spec.warp = make_euclidean_profile();
        } else if (id == "cone") {
            spec.warp = make_cone_profile(cfg.get_double("manifold.warp.a"));
        } else if (id == "smoothed-cone") {
            spec.warp = make_smoothed_cone_profile(cfg.get_double("manifold.warp.a"),
                                                   cfg.get_double("manifold.warp.width"));
        } else if (id == "tanh-cap") {
            spec.warp = make_tanh_cap_profile(cfg.get_double("manifold.warp.a"),
                                              cfg.get_double("manifold.warp.lambda"));
        } else if (id == "table") {
            spec.warp = make_table_profile(cfg.get_double_list("manifold.warp.r"),
                                           cfg.get_double_list("manifold.warp.f"));
        } else {
            throw ConfigError("unknown warp.id: " + id);
        }
        spec.warp->set_r_max(spec.r_max);
    } else {
        throw ConfigError("unknown manifold.kind: " + kind);
    }

    validate_spec(spec);
    return spec;
}

} // namespace pinchlab
