#ifndef BWAVE_TIMESTEPPING_HPP
#define BWAVE_TIMESTEPPING_HPP

#include <functional>
#include <vector>

#include "bwave/models.hpp"

namespace bwave {

enum class Integrator { RK4, IFRK4 };

enum class Termination { ReachedTEnd, SlopeStop, NumericBlowup };

struct StepperConfig {
    double dt_max = 0.1;
    double cfl = 0.4;             // in (0, 1)
    double t_end = 1.0;
    double slope_stop = -1e12;    // terminate when min slope <= this (< 0)
    double snapshot_every = 0.0;  // <= 0: record every accepted step
    Integrator integrator = Integrator::RK4;
};

struct Snapshot {
    SimState state;
    StateDeriv deriv; // stored for Hermite-in-time sampling
};

using DiagnosticsHook = std::function<void(const SimState&, const StateDeriv&)>;

struct Trajectory {
    std::vector<Snapshot> snapshots;
    Termination termination = Termination::ReachedTEnd;
    std::vector<double> step_sizes; // accepted dt sequence

    double final_time() const {
        return snapshots.empty() ? 0.0 : snapshots.back().state.t;
    }
};

namespace detail {

inline SimState axpy(const SimState& s, const StateDeriv& d, double c) {
    SimState out = s;
    for (int j = 0; j < s.grid().n_points; ++j)
        out.eta.samples[j] += c * d.deta.samples[j];
    if (s.u)
        for (int j = 0; j < s.grid().n_points; ++j)
            out.u->samples[j] += c * d.du->samples[j];
    return out;
}

inline SimState rk4_step(const SimState& s, double dt, const ModelSpec& spec,
                         const StateDeriv& k1) {
    StateDeriv k2 = rhs(spec, axpy(s, k1, 0.5 * dt));
    StateDeriv k3 = rhs(spec, axpy(s, k2, 0.5 * dt));
    StateDeriv k4 = rhs(spec, axpy(s, k3, dt));
    SimState out = s;
    const int n = s.grid().n_points;
    for (int j = 0; j < n; ++j)
        out.eta.samples[j] += dt / 6.0 *
                              (k1.deta.samples[j] + 2.0 * k2.deta.samples[j] +
                               2.0 * k3.deta.samples[j] + k4.deta.samples[j]);
    if (s.u)
        for (int j = 0; j < n; ++j)
            out.u->samples[j] += dt / 6.0 *
                                 (k1.du->samples[j] + 2.0 * k2.du->samples[j] +
                                  2.0 * k3.du->samples[j] + k4.du->samples[j]);
    out.t = s.t + dt;
    return out;
}

// ---- integrating-factor machinery -------------------------------------

using Mat2 = std::array<complexd, 4>; // row-major

// exp(A t) for A = [[a,b],[c,d]] with a = d = 0 in every model here:
// A^2 = bc I, so exp(A t) = cosh(mu t) I + t sinhc(mu t) A with mu = sqrt(bc).
inline Mat2 mat2_exp(const Mat2& A, double t) {
    const complexd kappa = A[1] * A[2];
    const complexd mu = std::sqrt(kappa);
    const complexd z = mu * t;
    complexd ch, shc;
    if (std::abs(z) < 1e-6) {
        const complexd z2 = z * z;
        ch = 1.0 + z2 * (0.5 + z2 / 24.0);
        shc = 1.0 + z2 * (1.0 / 6.0 + z2 / 120.0);
    } else {
        ch = std::cosh(z);
        shc = std::sinh(z) / z;
    }
    return {ch, t * shc * A[1], t * shc * A[2], ch};
}

struct SpectralState {
    SpectralField eta;
    std::optional<SpectralField> u;
};

inline SpectralState to_spectral(const SimState& s) {
    SpectralState out{forward(s.eta), std::nullopt};
    if (s.u) out.u = forward(*s.u);
    return out;
}

inline SpectralState to_spectral(const StateDeriv& d) {
    SpectralState out{forward(d.deta), std::nullopt};
    if (d.du) out.u = forward(*d.du);
    return out;
}

inline SimState to_physical(const SpectralState& Y, double t) {
    SimState out;
    out.eta = inverse(Y.eta);
    if (Y.u) out.u = inverse(*Y.u);
    out.t = t;
    return out;
}

// per-mode 2x2 (or 1x1) linear propagators for one step size
// The unpaired Nyquist mode has a self-conjugate (cos-like) basis function;
// a symbol acts on it through its real part only. Mirrors the multiplier
// convention that zeroes odd-imaginary symbols there.
inline Mat2 symbol_at(const LinearSymbol& sym, const GridSpec& g, int i) {
    Mat2 A = sym.matrix(g.wavenumber(i));
    if (g.mode_number(i) == -g.n_points / 2)
        for (complexd& e : A) e = complexd(e.real(), 0.0);
    return A;
}

struct Propagator {
    std::vector<Mat2> mats;
    int arity;

    Propagator(const LinearSymbol& sym, const GridSpec& g, double t) : arity(sym.arity) {
        mats.resize(g.n_points);
        for (int i = 0; i < g.n_points; ++i) {
            const Mat2 A = symbol_at(sym, g, i);
            if (arity == 1)
                mats[i] = {std::exp(A[0] * t), 0.0, 0.0, 0.0};
            else
                mats[i] = mat2_exp(A, t);
        }
    }

    SpectralState apply(const SpectralState& Y) const {
        SpectralState out = Y;
        const int n = (int)mats.size();
        for (int i = 0; i < n; ++i) {
            if (arity == 1) {
                out.eta.coeffs[i] = mats[i][0] * Y.eta.coeffs[i];
            } else {
                const complexd e = Y.eta.coeffs[i], w = Y.u->coeffs[i];
                out.eta.coeffs[i] = mats[i][0] * e + mats[i][1] * w;
                out.u->coeffs[i] = mats[i][2] * e + mats[i][3] * w;
            }
        }
        return out;
    }
};

inline SpectralState sxpy(SpectralState Y, const SpectralState& Z, double c) {
    const int n = (int)Y.eta.coeffs.size();
    for (int i = 0; i < n; ++i) Y.eta.coeffs[i] += c * Z.eta.coeffs[i];
    if (Y.u)
        for (int i = 0; i < n; ++i) Y.u->coeffs[i] += c * Z.u->coeffs[i];
    return Y;
}

// nonlinear remainder N(Y) = FFT(rhs(state(Y))) - A Y, in spectral space
inline SpectralState nonlinear_part(const ModelSpec& spec, const LinearSymbol& sym,
                                    const SpectralState& Y, double t,
                                    const GridSpec& g) {
    SimState s = to_physical(Y, t);
    SpectralState N = to_spectral(rhs(spec, s));
    for (int i = 0; i < g.n_points; ++i) {
        const Mat2 A = symbol_at(sym, g, i);
        if (sym.arity == 1) {
            N.eta.coeffs[i] -= A[0] * Y.eta.coeffs[i];
        } else {
            const complexd e = Y.eta.coeffs[i], w = Y.u->coeffs[i];
            N.eta.coeffs[i] -= A[0] * e + A[1] * w;
            N.u->coeffs[i] -= A[2] * e + A[3] * w;
        }
    }
    return N;
}

// Lawson (integrating factor) RK4
inline SimState ifrk4_step(const SimState& s, double dt, const ModelSpec& spec) {
    const GridSpec& g = s.grid();
    const LinearSymbol sym = linear_symbol(spec);
    const Propagator E1(sym, g, 0.5 * dt);
    const Propagator E2(sym, g, dt);

    const SpectralState Y = to_spectral(s);
    const SpectralState k1 = nonlinear_part(spec, sym, Y, s.t, g);
    const SpectralState Y2 = E1.apply(sxpy(Y, k1, 0.5 * dt));
    const SpectralState k2 = nonlinear_part(spec, sym, Y2, s.t + 0.5 * dt, g);
    const SpectralState Y3 = sxpy(E1.apply(Y), k2, 0.5 * dt);
    const SpectralState k3 = nonlinear_part(spec, sym, Y3, s.t + 0.5 * dt, g);
    const SpectralState Y4 = sxpy(E2.apply(Y), E1.apply(k3), dt);
    const SpectralState k4 = nonlinear_part(spec, sym, Y4, s.t + dt, g);

    SpectralState out = E2.apply(Y);
    out = sxpy(out, E2.apply(k1), dt / 6.0);
    out = sxpy(out, E1.apply(k2), dt / 3.0);
    out = sxpy(out, E1.apply(k3), dt / 3.0);
    out = sxpy(out, k4, dt / 6.0);
    return to_physical(out, s.t + dt);
}

// largest advecting velocity scale of the model, for the CFL bound
inline double advection_scale(const ModelSpec& spec) {
    switch (spec.model_id) {
        case ModelId::MainSystem:
        case ModelId::Burgers:
            return 1.0;
        case ModelId::KdV:
        case ModelId::Whitham:
            return 1.5 * spec.a;
        case ModelId::BW1:
        case ModelId::BW2:
            return 0.0;
        default:
            return spec.a;
    }
}

} // namespace detail

/// One explicit step; fourth-order local accuracy for smooth states.
inline SimState step(const SimState& s, double dt, const ModelSpec& spec,
                     const StepperConfig& cfg) {
    if (!(dt > 0.0)) throw config_error("step: dt must be positive");
    if (cfg.integrator == Integrator::IFRK4) return detail::ifrk4_step(s, dt, spec);
    return detail::rk4_step(s, dt, spec, rhs(spec, s));
}

/// Refined minimum of the spatial slope of the steepening component.
inline double min_slope(const SimState& s, const ModelSpec& spec) {
    return refined_min(derivative(s.steepening_field(spec), 1)).value;
}

/// Advance to t_end with dt = min(dt_max, cfl h / max(1, |u|_inf),
/// cfl / |min slope|), recording snapshots and stopping on slope_stop,
/// t_end, or loss of finiteness (NumericBlowup is recorded, not thrown).
inline Trajectory run(const SimState& initial, const ModelSpec& spec,
                      const StepperConfig& cfg,
                      const std::vector<DiagnosticsHook>& hooks = {}) {
    check_arity(spec, initial);
    if (!(cfg.dt_max > 0.0)) throw config_error("run: dt_max must be positive");
    if (!(cfg.cfl > 0.0 && cfg.cfl < 1.0)) throw config_error("run: cfl must be in (0,1)");

    Trajectory traj;
    SimState s = initial;
    double last_snap = -1.0;

    auto record = [&](const SimState& state) {
        StateDeriv d;
        try {
            d = rhs(spec, state);
        } catch (const numeric_error&) {
            d.deta = RealField(state.grid());
            if (state.u) d.du = RealField(state.grid());
            traj.snapshots.push_back({state, d});
            traj.termination = Termination::NumericBlowup;
            return false;
        }
        traj.snapshots.push_back({state, d});
        for (const auto& h : hooks) h(state, d);
        last_snap = state.t;
        return true;
    };

    if (!record(s)) return traj;

    const double h = initial.grid().spacing;
    const double speed_scale = detail::advection_scale(spec);
    while (s.t < cfg.t_end - 1e-14 * std::max(1.0, cfg.t_end)) {
        double dt = cfg.dt_max;
        const double speed = speed_scale * s.steepening_field(spec).max_abs();
        dt = std::min(dt, cfg.cfl * h / std::max(1.0, speed));
        const double m = min_slope(s, spec);
        if (m < 0.0) dt = std::min(dt, cfg.cfl / (-m));
        dt = std::min(dt, cfg.t_end - s.t);

        // slope or amplitude collapse drives dt to zero: time can no longer
        // advance, which is the discrete signature of blow-up
        if (!(dt > 1e-14 * std::max(1.0, std::abs(s.t)))) {
            if (traj.snapshots.back().state.t < s.t) record(s);
            traj.termination = Termination::NumericBlowup;
            return traj;
        }

        SimState next;
        try {
            next = step(s, dt, spec, cfg);
        } catch (const numeric_error&) {
            next.eta = RealField(s.grid());
            next.eta.samples[0] = std::nan("");
        }
        if (!next.all_finite()) {
            traj.termination = Termination::NumericBlowup;
            if (traj.snapshots.back().state.t < s.t) record(s);
            return traj;
        }
        s = next;
        traj.step_sizes.push_back(dt);

        const bool due = cfg.snapshot_every <= 0.0 || s.t - last_snap >= cfg.snapshot_every ||
                         s.t >= cfg.t_end - 1e-14;
        if (due && !record(s)) return traj;

        if (min_slope(s, spec) <= cfg.slope_stop) {
            if (traj.snapshots.back().state.t < s.t && !record(s)) return traj;
            traj.termination = Termination::SlopeStop;
            return traj;
        }
    }
    if (traj.snapshots.back().state.t < s.t) record(s);
    traj.termination = Termination::ReachedTEnd;
    return traj;
}

} // namespace bwave

#endif
