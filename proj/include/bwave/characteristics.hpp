#ifndef BWAVE_CHARACTERISTICS_HPP
#define BWAVE_CHARACTERISTICS_HPP

#include <vector>

#include "bwave/kernels.hpp"
#include "bwave/timestepping.hpp"

namespace bwave {

/// Per-seed Lagrangian data along a trajectory: positions X(t;x), the sampled
/// derivative ladders zeta_n = (d^n eta/dx^n)(X) and v_n = (d^n u/dx^n)(X),
/// the variation derivatives dX/dx, d2X/dx2, d3X/dx3, and the accumulated
/// kernel integrals I2, I3.
struct CharBundle {
    std::vector<double> seeds;
    int order = 4; // highest sampled derivative
    std::vector<double> times;
    std::vector<std::vector<double>> X;                  // [time][seed]
    std::vector<std::vector<std::vector<double>>> zeta;  // [time][seed][0..order]
    std::vector<std::vector<std::vector<double>>> v;     // [time][seed][0..order]
    std::vector<std::vector<double>> dX1, dX2, dX3;      // [time][seed]
    std::vector<std::vector<double>> I2, I3;             // [time][seed]

    int n_times() const { return (int)times.size(); }
    int n_seeds() const { return (int)seeds.size(); }
};

inline CharBundle make_char_bundle(std::vector<double> seeds, int order) {
    if (order < 1) throw config_error("make_char_bundle: order must be >= 1");
    CharBundle b;
    b.seeds = std::move(seeds);
    b.order = order;
    return b;
}

namespace detail {

inline double binomial(int n, int j) {
    double c = 1.0;
    for (int i = 1; i <= j; ++i) c = c * (n - j + i) / i;
    return c;
}

// cubic Hermite combination of two snapshot spectra and their time
// derivatives, evaluated at interior fraction theta of the interval
inline SpectralField hermite_mix(const SpectralField& f0, const SpectralField& fd0,
                                 const SpectralField& f1, const SpectralField& fd1,
                                 double delta, double theta) {
    const double t2 = theta * theta, t3 = t2 * theta;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + theta;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    SpectralField out(f0.grid);
    for (int i = 0; i < f0.grid.n_points; ++i)
        out.coeffs[i] = h00 * f0.coeffs[i] + (h10 * delta) * fd0.coeffs[i] +
                        h01 * f1.coeffs[i] + (h11 * delta) * fd1.coeffs[i];
    return out;
}

// spectra of d^n u/dx^n and of its stored time derivative at one snapshot
struct SnapshotUSpectra {
    std::vector<SpectralField> u;  // order 0..max_order
    std::vector<SpectralField> du;

    SnapshotUSpectra(const Snapshot& snap, int max_order) {
        SpectralField U = forward(*snap.state.u);
        SpectralField Ud = forward(*snap.deriv.du);
        for (int n = 0; n <= max_order; ++n) {
            u.push_back(derivative(U, n));
            du.push_back(derivative(Ud, n));
        }
    }
};

} // namespace detail

/// Integrate dX/dt = u(X, t) by RK4 through the snapshot sequence, with u
/// interpolated in time by a cubic Hermite of the stored states and their
/// time derivatives; then sample the eta/u derivative ladders at X. With
/// escape_margin > 0, characteristics entering that band around the periodic
/// seam raise domain_escape_error.
inline void advance_characteristics(CharBundle& bundle, const Trajectory& traj,
                                    double escape_margin = 0.0) {
    if (traj.snapshots.empty()) throw config_error("advance_characteristics: empty trajectory");
    if (!traj.snapshots.front().state.u)
        throw config_error("advance_characteristics: model carries no velocity");
    const GridSpec& g = traj.snapshots.front().state.grid();
    const int ns = (int)bundle.seeds.size();
    const int nt = (int)traj.snapshots.size();
    const int order = bundle.order;

    bundle.times.assign(nt, 0.0);
    bundle.X.assign(nt, std::vector<double>(ns, 0.0));
    bundle.zeta.assign(nt, std::vector<std::vector<double>>(ns, std::vector<double>(order + 1)));
    bundle.v.assign(nt, std::vector<std::vector<double>>(ns, std::vector<double>(order + 1)));

    auto check_escape = [&](double x) {
        if (escape_margin > 0.0 &&
            std::abs(g.wrap(x)) > g.half_length - escape_margin)
            throw domain_escape_error("advance_characteristics: characteristic at x = " +
                                      std::to_string(x) + " left the safe region");
    };

    auto sample = [&](int it, const detail::SnapshotUSpectra& us, const SpectralField& eta0) {
        std::vector<SpectralField> etas;
        for (int n = 0; n <= order; ++n) etas.push_back(derivative(eta0, n));
        for (int s = 0; s < ns; ++s) {
            const double x = bundle.X[it][s];
            for (int n = 0; n <= order; ++n) {
                bundle.zeta[it][s][n] = eval_at(etas[n], x);
                bundle.v[it][s][n] = eval_at(us.u[n], x);
            }
        }
    };

    detail::SnapshotUSpectra cur(traj.snapshots[0], order);
    bundle.times[0] = traj.snapshots[0].state.t;
    for (int s = 0; s < ns; ++s) {
        bundle.X[0][s] = bundle.seeds[s];
        check_escape(bundle.seeds[s]);
    }
    sample(0, cur, forward(traj.snapshots[0].state.eta));

    for (int it = 0; it + 1 < nt; ++it) {
        const Snapshot& a = traj.snapshots[it];
        const Snapshot& b = traj.snapshots[it + 1];
        detail::SnapshotUSpectra next(b, order);
        const double delta = b.state.t - a.state.t;
        const SpectralField mid =
            detail::hermite_mix(cur.u[0], cur.du[0], next.u[0], next.du[0], delta, 0.5);

        for (int s = 0; s < ns; ++s) {
            const double x = bundle.X[it][s];
            const double k1 = eval_at(cur.u[0], x);
            const double k2 = eval_at(mid, x + 0.5 * delta * k1);
            const double k3 = eval_at(mid, x + 0.5 * delta * k2);
            const double k4 = eval_at(next.u[0], x + delta * k3);
            const double xn = x + delta / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
            check_escape(xn);
            bundle.X[it + 1][s] = xn;
        }
        bundle.times[it + 1] = b.state.t;
        cur = std::move(next);
        sample(it + 1, cur, forward(b.state.eta));
    }
}

/// Integrate the variation equations d(dX)/dt = v1 dX, etc., along each
/// characteristic (jointly re-integrating X with the same stages), and
/// accumulate I2, I3 by the trapezoid rule on the snapshot grid using the
/// spectral-route kernel samples K_n(t; x) = (M d^(n+1) eta)(X).
inline void variation_flow(CharBundle& bundle, const Trajectory& traj,
                           bool with_kernel = true) {
    const int nt = bundle.n_times(), ns = bundle.n_seeds();
    if (nt == 0) throw config_error("variation_flow: advance_characteristics first");
    bundle.dX1.assign(nt, std::vector<double>(ns, 1.0));
    bundle.dX2.assign(nt, std::vector<double>(ns, 0.0));
    bundle.dX3.assign(nt, std::vector<double>(ns, 0.0));
    bundle.I2.assign(nt, std::vector<double>(ns, 0.0));
    bundle.I3.assign(nt, std::vector<double>(ns, 0.0));

    struct Vars {
        double x, p1, p2, p3;
    };
    std::vector<Vars> state(ns);
    for (int s = 0; s < ns; ++s) state[s] = {bundle.seeds[s], 1.0, 0.0, 0.0};

    // K_n(t_i; X) per seed for the I2/I3 quadrature
    auto kernel_row = [&](int it, std::vector<std::array<double, 3>>& K) {
        K.assign(ns, {0.0, 0.0, 0.0});
        if (!with_kernel) return;
        const RealField& eta = traj.snapshots[it].state.eta;
        for (int n = 1; n <= 3; ++n) {
            SpectralField F = kn_field(eta, n);
            for (int s = 0; s < ns; ++s) K[s][n - 1] = eval_at(F, bundle.X[it][s]);
        }
    };

    std::vector<std::array<double, 3>> Kcur, Knext;
    kernel_row(0, Kcur);

    detail::SnapshotUSpectra cur(traj.snapshots[0], 3);
    for (int it = 0; it + 1 < nt; ++it) {
        const Snapshot& b = traj.snapshots[it + 1];
        detail::SnapshotUSpectra next(b, 3);
        const double delta = b.state.t - traj.snapshots[it].state.t;

        std::array<SpectralField, 4> mid;
        for (int n = 0; n <= 3; ++n)
            mid[n] = detail::hermite_mix(cur.u[n], cur.du[n], next.u[n], next.du[n], delta, 0.5);

        auto deriv = [&](const Vars& y, int stage) -> Vars {
            const auto& bank = stage == 0 ? cur.u : (stage == 3 ? next.u : mid);
            const double u = eval_at(stage == 0 ? cur.u[0] : (stage == 3 ? next.u[0] : mid[0]),
                                     y.x);
            const double v1 = eval_at(bank[1], y.x);
            const double v2 = eval_at(bank[2], y.x);
            const double v3 = eval_at(bank[3], y.x);
            return {u, v1 * y.p1, v2 * y.p1 * y.p1 + v1 * y.p2,
                    v3 * y.p1 * y.p1 * y.p1 + 3.0 * v2 * y.p1 * y.p2 + v1 * y.p3};
        };

        for (int s = 0; s < ns; ++s) {
            Vars y = state[s];
            const Vars k1 = deriv(y, 0);
            Vars y2{y.x + 0.5 * delta * k1.x, y.p1 + 0.5 * delta * k1.p1,
                    y.p2 + 0.5 * delta * k1.p2, y.p3 + 0.5 * delta * k1.p3};
            const Vars k2 = deriv(y2, 1);
            Vars y3{y.x + 0.5 * delta * k2.x, y.p1 + 0.5 * delta * k2.p1,
                    y.p2 + 0.5 * delta * k2.p2, y.p3 + 0.5 * delta * k2.p3};
            const Vars k3 = deriv(y3, 2);
            Vars y4{y.x + delta * k3.x, y.p1 + delta * k3.p1, y.p2 + delta * k3.p2,
                    y.p3 + delta * k3.p3};
            const Vars k4 = deriv(y4, 3);
            y.x += delta / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
            y.p1 += delta / 6.0 * (k1.p1 + 2 * k2.p1 + 2 * k3.p1 + k4.p1);
            y.p2 += delta / 6.0 * (k1.p2 + 2 * k2.p2 + 2 * k3.p2 + k4.p2);
            y.p3 += delta / 6.0 * (k1.p3 + 2 * k2.p3 + 2 * k3.p3 + k4.p3);
            state[s] = y;
            bundle.dX1[it + 1][s] = y.p1;
            bundle.dX2[it + 1][s] = y.p2;
            bundle.dX3[it + 1][s] = y.p3;
        }

        kernel_row(it + 1, Knext);
        for (int s = 0; s < ns; ++s) {
            // integrands of I2 and I3 at both interval ends
            auto integrand = [&](int i, const std::array<double, 3>& K, double p1, double p2,
                                 double p3) {
                (void)i;
                const double a2 = K[1] * p1 * p1 + K[0] * p2;
                const double a3 = K[2] * p1 * p1 * p1 + 3.0 * K[1] * p1 * p2 + K[0] * p3;
                return std::pair<double, double>(a2, a3);
            };
            const auto [a2l, a3l] = integrand(it, Kcur[s], bundle.dX1[it][s],
                                              bundle.dX2[it][s], bundle.dX3[it][s]);
            const auto [a2r, a3r] = integrand(it + 1, Knext[s], bundle.dX1[it + 1][s],
                                              bundle.dX2[it + 1][s], bundle.dX3[it + 1][s]);
            bundle.I2[it + 1][s] = bundle.I2[it][s] + 0.5 * delta * (a2l + a2r);
            bundle.I3[it + 1][s] = bundle.I3[it][s] + 0.5 * delta * (a3l + a3r);
        }
        Kcur = Knext;
        cur = std::move(next);
    }
}

/// Extremal slope record: m(t) = inf_x du/dx, its normalization q = m(0)/m(t),
/// and the location of the infimum.
struct SlopeTrace {
    std::vector<double> times;
    std::vector<double> m;
    std::vector<double> q;
    std::vector<double> argmin_x;
    bool degenerate = false; // u identically zero: m = 0, q undefined
};

inline SlopeTrace slope_trace(const Trajectory& traj, const ModelSpec& spec) {
    SlopeTrace out;
    for (const auto& snap : traj.snapshots) {
        const RealField& f = snap.state.steepening_field(spec);
        RefinedMin mn = refined_min(derivative(f, 1));
        out.times.push_back(snap.state.t);
        out.m.push_back(mn.value);
        out.argmin_x.push_back(mn.x);
    }
    if (out.m.empty() || out.m.front() >= 0.0) {
        out.degenerate = true;
        return out;
    }
    const double m0 = out.m.front();
    for (double mt : out.m) out.q.push_back(mt < 0.0 ? m0 / mt : 0.0);
    return out;
}

/// Riccati normalization along each tracked seed, r = m(0) / v1(t; x).
inline std::vector<std::vector<double>> per_seed_r(const CharBundle& bundle, double m0) {
    std::vector<std::vector<double>> r(bundle.n_times(),
                                       std::vector<double>(bundle.n_seeds(), 0.0));
    for (int it = 0; it < bundle.n_times(); ++it)
        for (int s = 0; s < bundle.n_seeds(); ++s) {
            const double v1 = bundle.v[it][s][1];
            r[it][s] = v1 != 0.0 ? m0 / v1 : 0.0;
        }
    return r;
}

/// Grid indices where du/dx <= (1 - gamma) m_t, with a small tie tolerance.
inline std::vector<int> sigma_set(const SimState& state, double m_t, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw config_error("sigma_set: gamma must be in (0,1)");
    if (!(m_t < 0.0)) throw config_error("sigma_set: m_t must be negative");
    if (!state.u) throw config_error("sigma_set: state carries no velocity");
    RealField du = derivative(*state.u, 1);
    const double threshold = (1.0 - gamma) * m_t + 1e-9 * std::abs(m_t);
    std::vector<int> idx;
    for (int j = 0; j < state.grid().n_points; ++j)
        if (du.samples[j] <= threshold) idx.push_back(j);
    return idx;
}

/// Material-label membership of the gamma-set per snapshot: seed s is in
/// Sigma_gamma(t_i) when v1(t_i; s) <= (1 - gamma) m(t_i).
inline std::vector<std::vector<bool>> sigma_membership(const CharBundle& bundle,
                                                       const SlopeTrace& slope,
                                                       double gamma) {
    std::vector<std::vector<bool>> member(bundle.n_times(),
                                          std::vector<bool>(bundle.n_seeds(), false));
    for (int it = 0; it < bundle.n_times(); ++it) {
        const double m_t = slope.m[it];
        const double threshold = (1.0 - gamma) * m_t + 1e-9 * std::abs(m_t);
        for (int s = 0; s < bundle.n_seeds(); ++s)
            member[it][s] = bundle.v[it][s][1] <= threshold;
    }
    return member;
}

/// Count of nesting violations: a seed outside Sigma at some time that
/// re-enters later (nesting demands per-seed membership non-increasing).
inline int sigma_nesting_violations(const std::vector<std::vector<bool>>& member) {
    int violations = 0;
    const int nt = (int)member.size();
    if (nt == 0) return 0;
    const int ns = (int)member[0].size();
    for (int s = 0; s < ns; ++s) {
        bool left = false;
        for (int it = 0; it < nt; ++it) {
            if (!member[it][s]) left = true;
            else if (left) ++violations;
        }
    }
    return violations;
}

struct HierarchyResidual {
    std::vector<double> zeta; // per seed, max over interior times
    std::vector<double> v;

    double max_zeta() const {
        double m = 0.0;
        for (double x : zeta) m = std::max(m, x);
        return m;
    }
    double max_v() const {
        double m = 0.0;
        for (double x : v) m = std::max(m, x);
        return m;
    }
};

/// Residual of the transport hierarchy at order n: finite-difference d/dt of
/// the sampled zeta_n, v_n minus the transported right-hand sides
///   d zeta_n/dt = -sum_j C(n,j) v_j zeta_{n+1-j} - v_{n+1}   (zeta_0: -v_1)
///   d v_n/dt    = -sum_j C(n,j) v_j v_{n+1-j}    - K_n.
/// The ladders are sampled from the PDE solution, so this is an independent
/// consistency check, not the integrator.
inline HierarchyResidual hierarchy_residual(const CharBundle& bundle, const Trajectory& traj,
                                            int n, bool with_kernel = true) {
    if (n + 1 > bundle.order)
        throw config_error("hierarchy_residual: bundle order too low for n");
    const int nt = bundle.n_times(), ns = bundle.n_seeds();
    HierarchyResidual out;
    out.zeta.assign(ns, 0.0);
    out.v.assign(ns, 0.0);

    // K_n(t_i; X) rows
    std::vector<std::vector<double>> K(nt, std::vector<double>(ns, 0.0));
    if (with_kernel)
        for (int it = 0; it < nt; ++it) {
            SpectralField F = kn_field(traj.snapshots[it].state.eta, n);
            for (int s = 0; s < ns; ++s) K[it][s] = eval_at(F, bundle.X[it][s]);
        }

    for (int it = 1; it + 1 < nt; ++it) {
        const double dm = bundle.times[it] - bundle.times[it - 1];
        const double dp = bundle.times[it + 1] - bundle.times[it];
        for (int s = 0; s < ns; ++s) {
            auto ddt = [&](const std::vector<std::vector<std::vector<double>>>& f) {
                const double fm = f[it - 1][s][n], f0 = f[it][s][n], fp = f[it + 1][s][n];
                return (dm * dm * fp + (dp * dp - dm * dm) * f0 - dp * dp * fm) /
                       (dm * dp * (dm + dp));
            };
            double conv_zeta = bundle.v[it][s][n + 1];
            double conv_v = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double c = detail::binomial(n, j);
                conv_zeta += n == 0 ? 0.0 : c * bundle.v[it][s][j] * bundle.zeta[it][s][n + 1 - j];
                conv_v += c * bundle.v[it][s][j] * bundle.v[it][s][n + 1 - j];
            }
            if (n == 0) conv_zeta = bundle.v[it][s][1];
            const double rz = ddt(bundle.zeta) + conv_zeta;
            const double rv = ddt(bundle.v) + conv_v + K[it][s];
            out.zeta[s] = std::max(out.zeta[s], std::abs(rz));
            out.v[s] = std::max(out.v[s], std::abs(rv));
        }
    }
    return out;
}

} // namespace bwave

#endif
