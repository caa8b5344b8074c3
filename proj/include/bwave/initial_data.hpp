#ifndef BWAVE_INITIAL_DATA_HPP
#define BWAVE_INITIAL_DATA_HPP

#include <string>
#include <vector>

#include "bwave/multiplier.hpp"

namespace bwave {

/// Kernel e-folding length of csch(pi y/2) tails; compact data must keep
/// this many decay lengths of margin from the periodic seam.
inline constexpr double kernel_decay_length = 2.0 / std::numbers::pi;
inline constexpr double support_margin = 10.0 * kernel_decay_length;

/// Compactly supported bump exp(-(1 - s^2)^(-theta)), s = (x-center)/width,
/// smooth with derivative growth of Gevrey type; theta = alpha/(1-alpha)
/// targets Gevrey index 1/alpha (validated numerically, not assumed).
struct GevreyBumpSpec {
    double alpha = 0.6;
    double amplitude = 1.0;
    double center = 0.0;
    double width = 1.0;

    double theta() const { return alpha / (1.0 - alpha); }
};

inline RealField gevrey_bump(const GevreyBumpSpec& spec, const GridSpec& grid) {
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
        throw config_error("gevrey_bump: alpha must lie in (0,1)");
    if (!(spec.width > 0.0)) throw config_error("gevrey_bump: width must be positive");
    const double lo = spec.center - spec.width, hi = spec.center + spec.width;
    if (lo < -grid.half_length + support_margin || hi > grid.half_length - support_margin)
        throw config_error("gevrey_bump: support too close to the periodic boundary");
    const double theta = spec.theta();
    return RealField::from_function(grid, [&](double x) {
        const double s = (x - spec.center) / spec.width;
        if (std::abs(s) >= 1.0) return 0.0;
        return spec.amplitude * std::exp(-std::pow(1.0 - s * s, -theta));
    });
}

namespace detail {

// golden-section minimization of the interpolated slope near a grid argmin
inline double golden_min_slope(const SpectralField& dspec, double a, double b) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = eval_at(dspec, c), fd = eval_at(dspec, d);
    for (int it = 0; it < 60 && (b - a) > 1e-13; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = eval_at(dspec, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = eval_at(dspec, d);
        }
    }
    return std::min(fc, fd);
}

inline double refined_min_slope(const RealField& u) {
    RealField du = derivative(u, 1);
    int j0 = 0;
    for (int j = 1; j < u.grid.n_points; ++j)
        if (du.samples[j] < du.samples[j0]) j0 = j;
    SpectralField dspec = forward(du);
    const double x0 = u.grid.x(j0);
    return golden_min_slope(dspec, x0 - u.grid.spacing, x0 + u.grid.spacing);
}

} // namespace detail

/// Compactly supported velocity profile with prescribed minimum slope:
/// u0 = -s W B(x) with B a unit Gevrey bump of half-width `width`, the scale
/// s calibrated so that inf u0' hits target_min_slope within 1%.
inline RealField steep_profile(double target_min_slope, double width, const GridSpec& grid,
                               double alpha = 0.6) {
    if (!(target_min_slope < 0.0))
        throw config_error("steep_profile: target slope must be negative");
    GevreyBumpSpec base;
    base.alpha = alpha;
    base.width = width;
    base.amplitude = 1.0;
    RealField bump = gevrey_bump(base, grid);

    RealField u0 = (-width) * bump;
    double measured = detail::refined_min_slope(u0);
    for (int it = 0; it < 4; ++it) {
        if (!(measured < 0.0))
            throw resolution_error("steep_profile: bump slope not resolved on this grid");
        const double scale = target_min_slope / measured;
        u0 = scale * u0;
        measured = detail::refined_min_slope(u0);
        if (std::abs(measured - target_min_slope) <= 0.005 * std::abs(target_min_slope))
            break;
    }

    // per-cell drop relative to the profile height; > 5% is unresolvable
    const double peak = u0.max_abs();
    if (std::abs(target_min_slope) * grid.spacing > 0.05 * peak)
        throw resolution_error("steep_profile: slope exceeds grid resolution");
    if (std::abs(measured - target_min_slope) > 0.01 * std::abs(target_min_slope))
        throw resolution_error("steep_profile: calibration failed on this grid");
    return u0;
}

// ---- hypothesis checking -----------------------------------------------

/// Sup-norms entering the breaking theorem's hypotheses. un_inf[i] is
/// |u0^(n)|_inf for n = 2 + i; etan_inf[i] is |eta0^(n)|_inf for n = 1 + i.
struct TheoremNorms {
    double u_inf = 0.0;
    double min_du = 0.0; // inf u0' (m(0))
    double du_inf = 0.0;
    std::vector<double> un_inf;
    double eta_inf = 0.0;
    std::vector<double> etan_inf;
    double eta_h2 = 0.0;
};

struct AssumptionRecord {
    std::string id;
    bool satisfied = false;
    double lhs = 0.0;   // as printed in the hypothesis
    double rhs = 0.0;
    double margin = 0.0; // positive iff satisfied
};

struct AssumptionReport {
    double eps = 0.0;
    double alpha = 0.0;
    double b = 1.0;
    double sigma = 0.0; // 3/2 + 6 eps
    int n_max_checked = 0;
    std::vector<AssumptionRecord> records;

    bool all_satisfied() const {
        for (const auto& r : records)
            if (!r.satisfied) return false;
        return true;
    }

    const AssumptionRecord* find(const std::string& id) const {
        for (const auto& r : records)
            if (r.id == id) return &r;
        return nullptr;
    }
};

/// Evaluate every hypothesis inequality on a norm bundle. Derivative bounds
/// are checked for n up to the bundle's truncation order (grid data cannot
/// certify all n; the report records how far it looked).
inline AssumptionReport check_assumptions_from_norms(const TheoremNorms& norms, double eps,
                                                     double alpha, double b) {
    if (!(b >= 1.0)) throw config_error("check_assumptions: b must be >= 1");
    if (!(eps > 0.0)) throw config_error("check_assumptions: eps must be positive");
    const int n_max = 2 + (int)norms.un_inf.size() - 1;
    if (n_max < 3) throw config_error("check_assumptions: need derivative norms up to n >= 3");

    AssumptionReport rep;
    rep.eps = eps;
    rep.alpha = alpha;
    rep.b = b;
    rep.sigma = 1.5 + 6.0 * eps;
    rep.n_max_checked = n_max;

    auto push_less = [&](std::string id, double lhs, double rhs) {
        rep.records.push_back({std::move(id), lhs < rhs, lhs, rhs, rhs - lhs});
    };
    auto push_greater = [&](std::string id, double lhs, double rhs) {
        rep.records.push_back({std::move(id), lhs > rhs, lhs, rhs, lhs - rhs});
    };

    for (int n = 2; n <= n_max; ++n)
        push_less("A:un n=" + std::to_string(n), norms.un_inf[n - 2],
                  std::pow(n, (n - 1.0) / alpha + 1.0) * std::pow(b, n - 1.0));
    push_less("A:h0", norms.eta_inf, 0.5 / eps);
    for (int n = 1; n <= n_max; ++n)
        push_less("A:hn n=" + std::to_string(n), norms.etan_inf[n - 1],
                  std::pow(n, n / alpha) * std::pow(b, n - 1.0) / eps);

    const double m0 = norms.min_du;
    push_greater("A:m1", eps * eps * m0 * m0 * (m0 < 0.0 ? 1.0 : 0.0),
                 1.0 + norms.eta_h2);
    const double ratio = (1.0 - eps) / (1.0 + eps);
    push_greater("A:m2",
                 m0 < 0.0 ? eps * ratio * ratio * std::pow(-m0, 0.25) : 0.0,
                 4.0 * std::numbers::e / (std::pow(2.0, 1.0 / alpha - 1.0) - 1.0));
    push_greater("A:m3",
                 m0 < 0.0 ? std::pow(eps, 5.0) * std::pow(1.0 - eps, 4.0) * std::pow(-m0, 0.75)
                          : 0.0,
                 80.0 / std::numbers::pi *
                     (1.0 + std::pow(2.0 * std::numbers::e, 1.0 / alpha) * b));
    push_less("alpha-window lower", 0.5 * (1.0 + eps), alpha);
    push_less("alpha-window upper", alpha, 2.0 / 3.0 * (1.0 - 14.0 * eps));
    return rep;
}

/// Measure the norms of concrete initial data (sup norms refined beyond the
/// grid) and evaluate the hypotheses up to derivative order n_max.
inline AssumptionReport check_assumptions(const RealField& eta0, const RealField& u0,
                                          double eps, double alpha, double b,
                                          int n_max = 8) {
    if (n_max < 3) throw config_error("check_assumptions: n_max must be >= 3");
    TheoremNorms norms;
    norms.u_inf = refined_sup_abs(u0);
    norms.du_inf = refined_sup_abs(derivative(u0, 1));
    norms.min_du = detail::refined_min_slope(u0);
    norms.eta_inf = refined_sup_abs(eta0);
    norms.eta_h2 = sobolev_norm(eta0, 2.0);
    for (int n = 2; n <= n_max; ++n)
        norms.un_inf.push_back(refined_sup_abs(derivative(u0, n)));
    for (int n = 1; n <= n_max; ++n)
        norms.etan_inf.push_back(refined_sup_abs(derivative(eta0, n)));
    return check_assumptions_from_norms(norms, eps, alpha, b);
}

} // namespace bwave

#endif
