#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pinchlab/config.hpp"

namespace pinchlab {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Kind { Euclidean, Cone, Warped };

/// Rotationally symmetric warp profile f for the metric dr^2 + f(r)^2 g_{S^{n-1}}.
///
/// Requirements: f(0) = 0, f'(0) = 1, f'' <= 0, and asymptotic slope
/// a = lim f(r)/r in (0, 1]. Beyond r_max the profile continues linearly with
/// slope a, so all tail integrals have closed forms.
class WarpProfile {
public:
    virtual ~WarpProfile() = default;

    virtual double f(double r) const = 0;
    virtual double df(double r) const = 0;
    virtual double d2f(double r) const = 0;

    virtual double slope() const = 0;
    virtual std::string id() const = 0;

    double r_max() const { return r_max_; }
    void set_r_max(double r) { r_max_ = r; }

protected:
    double r_max_ = 256.0;
};

std::shared_ptr<WarpProfile> make_euclidean_profile();
std::shared_ptr<WarpProfile> make_cone_profile(double a);
/// f(r) = a r + (1-a) w gd(r/w), gd the Gudermannian; smooth concave blend
/// from unit slope at the center to slope a outside the transition width w.
std::shared_ptr<WarpProfile> make_smoothed_cone_profile(double a, double width);
/// f(r) = a r + (1-a) tanh(lambda r)/lambda.
std::shared_ptr<WarpProfile> make_tanh_cap_profile(double a, double lambda);
/// Cubic-interpolated sample table (r_i, f_i); slope estimated from the tail.
std::shared_ptr<WarpProfile> make_table_profile(std::vector<double> r,
                                                std::vector<double> f);

struct ManifoldSpec {
    int n = 3;
    Kind kind = Kind::Euclidean;
    double cone_slope = 1.0; // Cone only
    std::shared_ptr<WarpProfile> warp; // Warped only
    std::string label;
    double r_max = 256.0;
    int grid_nr = 512;
    int grid_nphi = 256;
    std::uint64_t hash = 0;

    /// Warp function of the metric; defined for every kind (r, a r, or warp->f).
    double f(double r) const;
    double df(double r) const;
    double d2f(double r) const;
    /// Asymptotic slope a = lim f(r)/r.
    double slope() const;
};

struct VolumeData {
    double v_m = 0.0;    // asymptotic volume ratio lim Vol(B_R)/R^n
    double b_infty = 1.0;
    double v_lower = 0.0; // declared lower bound, <= v_m
};

struct RicciReport {
    std::vector<double> r;
    std::vector<double> ric_radial;     // (n-1) eigenvalue -(n-1) f''/f
    std::vector<double> ric_tangential; // -f''/f + (n-2)(1-f'^2)/f^2
    double min_radial = 0.0;
    double max_radial = 0.0;
    double min_tangential = 0.0;
    double max_tangential = 0.0;
    double worst_r = 0.0; // location of the most negative eigenvalue
};

/// Ricci eigenvalues of dr^2 + f^2 g_{S^{n-1}} on a radial grid. Euclidean and
/// Cone report the flat / positive closed forms away from the vertex.
RicciReport ricci_range(const ManifoldSpec& spec, int grid = 512);

/// Asymptotic volume ratio and the normalization constant b_infty.
VolumeData avr_and_binfty(const ManifoldSpec& spec);

/// Parse and validate a [manifold] section. Curvature tolerance 1e-8 absolute;
/// profiles failing it are rejected with the location of the worst violation.
ManifoldSpec load_spec(const Config& cfg);

/// Validation only; throws ValidationError on curvature / slope violations.
void validate_spec(const ManifoldSpec& spec);

} // namespace pinchlab
