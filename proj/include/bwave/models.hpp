#ifndef BWAVE_MODELS_HPP
#define BWAVE_MODELS_HPP

#include <array>
#include <optional>
#include <string>

#include "bwave/multiplier.hpp"

namespace bwave {

enum class ModelId {
    ShallowWater,
    KdV,
    Whitham,
    BoussinesqWhitham,
    Boussinesq,
    MainSystem,
    BW1,
    BW2,
    SautBW,
    Burgers,
};

/// Equation selection plus parameters.
///
/// Scalar models (KdV, Whitham) evolve eta alone. BW1/BW2 are second order in
/// time and evolve (eta, w = d eta/dt) with w stored in the u slot. MainSystem
/// suppresses the nonlinearity parameter a. Burgers is MainSystem with the
/// nonlocal coupling switched off (pure transport hierarchy), used as an
/// exactly solvable reference.
///
/// Caveat recorded as stated: the linear initial value problem of BW1 is
/// reported ill-posed in the periodic setting; the model is runnable here but
/// not suitable for wave-packet studies.
struct ModelSpec {
    ModelId model_id = ModelId::MainSystem;
    double a = 1.0; // nonlinearity parameter, >= 0
    std::string notes;

    bool linear_only = false;       // drop quadratic terms (diagnostics)
    bool split_hilbert = false;     // MainSystem: assemble M d/dx as -H + R
    bool remainder_enabled = true;  // with split_hilbert: include R
};

inline int model_arity(ModelId id) {
    switch (id) {
        case ModelId::KdV:
        case ModelId::Whitham:
            return 1;
        default:
            return 2;
    }
}

/// Which component steepens and drives breaking diagnostics / CFL control.
inline bool steepening_field_is_u(ModelId id) {
    return model_arity(id) == 2 && id != ModelId::BW1 && id != ModelId::BW2;
}

/// (eta, u, t) triple; u absent for scalar models.
struct SimState {
    RealField eta;
    std::optional<RealField> u;
    double t = 0.0;

    const GridSpec& grid() const { return eta.grid; }

    bool all_finite() const {
        if (!eta.all_finite()) return false;
        if (u && !u->all_finite()) return false;
        return true;
    }

    const RealField& steepening_field(const ModelSpec& spec) const {
        return steepening_field_is_u(spec.model_id) ? *u : eta;
    }
};

/// Time derivative of a SimState (same shape, no clock).
struct StateDeriv {
    RealField deta;
    std::optional<RealField> du;
};

inline void check_arity(const ModelSpec& spec, const SimState& s) {
    const int arity = model_arity(spec.model_id);
    if (arity == 2 && !s.u)
        throw config_error("rhs: model needs (eta, u) but u is absent");
    if (arity == 1 && s.u)
        throw config_error("rhs: scalar model cannot carry a u component");
    if (s.u && !(s.u->grid == s.eta.grid))
        throw config_error("rhs: eta and u live on different grids");
}

namespace detail {

// pointwise product with two-thirds dealiasing on inputs and output
inline RealField product_dealiased(const RealField& a, const RealField& b) {
    RealField ta = inverse(dealias(forward(a)));
    RealField tb = inverse(dealias(forward(b)));
    return inverse(dealias(forward(pointwise(ta, tb))));
}

// d/dx of the dealiased square, the conservative form of u du/dx
inline RealField half_square_dx(const RealField& u) {
    return derivative(detail::product_dealiased(0.5 * u, u), 1);
}

} // namespace detail

/// Assemble the time derivative of state s under the chosen model. Quadratic
/// terms are formed pointwise after two-thirds dealiasing; divergence-form
/// terms are assembled as exact spectral derivatives so their means are
/// conserved to roundoff.
inline StateDeriv rhs(const ModelSpec& spec, const SimState& s) {
    check_arity(spec, s);
    const bool nl = !spec.linear_only;
    StateDeriv out;

    switch (spec.model_id) {
        case ModelId::ShallowWater: {
            const RealField& u = *s.u;
            RealField flux = u; // u (1 + a eta)
            if (nl) flux = u + spec.a * detail::product_dealiased(u, s.eta);
            out.deta = -1.0 * derivative(flux, 1);
            out.du = -1.0 * derivative(s.eta, 1);
            if (nl) *out.du = *out.du - spec.a * detail::half_square_dx(u);
            break;
        }
        case ModelId::KdV: {
            // d eta/dt = -(1 + a/6 dxx) dx eta - (3a/4) dx(eta^2)
            RealField lin = derivative(s.eta, 1) + (spec.a / 6.0) * derivative(s.eta, 3);
            out.deta = -1.0 * lin;
            if (nl)
                out.deta = out.deta - (1.5 * spec.a) * detail::half_square_dx(s.eta);
            break;
        }
        case ModelId::Whitham: {
            out.deta = -1.0 * apply_multiplier(derivative(s.eta, 1), multiplier_m_half());
            if (nl)
                out.deta = out.deta - (1.5 * spec.a) * detail::half_square_dx(s.eta);
            break;
        }
        case ModelId::BoussinesqWhitham: {
            const RealField& u = *s.u;
            RealField flux = u;
            if (nl) flux = u + spec.a * detail::product_dealiased(u, s.eta);
            out.deta = -1.0 * derivative(flux, 1);
            out.du = -1.0 * apply_multiplier(s.eta, m_dx());
            if (nl) *out.du = *out.du - spec.a * detail::half_square_dx(u);
            break;
        }
        case ModelId::Boussinesq: {
            const RealField& u = *s.u;
            RealField flux = u;
            if (nl) flux = u + spec.a * detail::product_dealiased(u, s.eta);
            out.deta = -1.0 * derivative(flux, 1);
            RealField forcing = derivative(s.eta, 1);
            if (nl) forcing = forcing + spec.a * detail::half_square_dx(u);
            // (1 - a/3 dxx) du/dt = -forcing, exact spectral division
            const double a3 = spec.a / 3.0;
            MultiplierSymbol elliptic{
                [a3](double xi) { return complexd(1.0 / (1.0 + a3 * xi * xi), 0.0); },
                Parity::EvenReal};
            out.du = -1.0 * apply_multiplier(forcing, elliptic);
            break;
        }
        case ModelId::MainSystem:
        case ModelId::Burgers: {
            const RealField& u = *s.u;
            out.deta = -1.0 * derivative(u, 1);
            if (nl)
                out.deta = out.deta - detail::product_dealiased(u, derivative(s.eta, 1));
            if (spec.model_id == ModelId::MainSystem) {
                if (spec.split_hilbert) {
                    out.du = apply_multiplier(s.eta, hilbert());
                    if (spec.remainder_enabled)
                        *out.du = *out.du - apply_multiplier(s.eta, remainder_r());
                } else {
                    out.du = -1.0 * apply_multiplier(s.eta, m_dx());
                }
            } else {
                out.du = RealField(s.grid());
            }
            if (nl) *out.du = *out.du - detail::half_square_dx(u);
            break;
        }
        case ModelId::BW1: {
            // (eta, w): dw/dt = M dxx eta + (3a/2) dxx(eta^2)
            out.deta = *s.u;
            RealField core = apply_multiplier(derivative(s.eta, 2), multiplier_m());
            if (nl) {
                RealField sq = detail::product_dealiased(s.eta, s.eta);
                core = core + (1.5 * spec.a) * derivative(sq, 2);
            }
            out.du = core;
            break;
        }
        case ModelId::BW2: {
            // (eta, w): dw/dt = M(dxx eta + (3a/2) dxx(eta^2))
            out.deta = *s.u;
            RealField inner = derivative(s.eta, 2);
            if (nl) {
                RealField sq = detail::product_dealiased(s.eta, s.eta);
                inner = inner + (1.5 * spec.a) * derivative(sq, 2);
            }
            out.du = apply_multiplier(inner, multiplier_m());
            break;
        }
        case ModelId::SautBW: {
            const RealField& u = *s.u;
            out.deta = -1.0 * apply_multiplier(u, m_dx());
            if (nl) {
                RealField ue = detail::product_dealiased(u, s.eta);
                out.deta = out.deta - spec.a * derivative(ue, 1);
            }
            out.du = -1.0 * derivative(s.eta, 1);
            if (nl) *out.du = *out.du - spec.a * detail::half_square_dx(u);
            break;
        }
    }
    return out;
}

/// Generator of the linearization about the quiescent state: the spectrum of
/// (eta, u) (or of eta alone) evolves as dY/dt = A(xi) Y. Scalar models fill
/// only a00.
struct LinearSymbol {
    int arity = 2;
    std::function<std::array<complexd, 4>(double)> matrix; // row-major 2x2
};

inline LinearSymbol linear_symbol(const ModelSpec& spec) {
    const double a = spec.a;
    switch (spec.model_id) {
        case ModelId::ShallowWater:
            return {2, [](double xi) {
                        const complexd ix(0.0, xi);
                        return std::array<complexd, 4>{0.0, -ix, -ix, 0.0};
                    }};
        case ModelId::KdV:
            return {1, [a](double xi) {
                        const complexd lam(0.0, -xi + a / 6.0 * xi * xi * xi);
                        return std::array<complexd, 4>{lam, 0.0, 0.0, 0.0};
                    }};
        case ModelId::Whitham:
            return {1, [](double xi) {
                        const complexd lam(0.0, -xi * std::sqrt(cww_squared(xi)));
                        return std::array<complexd, 4>{lam, 0.0, 0.0, 0.0};
                    }};
        case ModelId::BoussinesqWhitham:
        case ModelId::MainSystem:
            return {2, [](double xi) {
                        return std::array<complexd, 4>{0.0, complexd(0.0, -xi),
                                                       complexd(0.0, -std::tanh(xi)), 0.0};
                    }};
        case ModelId::Boussinesq:
            return {2, [a](double xi) {
                        const double denom = 1.0 + a / 3.0 * xi * xi;
                        return std::array<complexd, 4>{0.0, complexd(0.0, -xi),
                                                       complexd(0.0, -xi / denom), 0.0};
                    }};
        case ModelId::BW1:
        case ModelId::BW2:
            return {2, [](double xi) {
                        return std::array<complexd, 4>{0.0, 1.0,
                                                       complexd(-xi * std::tanh(xi), 0.0), 0.0};
                    }};
        case ModelId::SautBW:
            return {2, [](double xi) {
                        return std::array<complexd, 4>{0.0, complexd(0.0, -std::tanh(xi)),
                                                       complexd(0.0, -xi), 0.0};
                    }};
        case ModelId::Burgers:
            return {2, [](double xi) {
                        return std::array<complexd, 4>{0.0, complexd(0.0, -xi), 0.0, 0.0};
                    }};
    }
    throw config_error("linear_symbol: unknown model");
}

/// Signed phase speed of the rightward branch at frequency xi.
inline double phase_speed(const ModelSpec& spec, double xi) {
    switch (spec.model_id) {
        case ModelId::ShallowWater:
            return 1.0;
        case ModelId::KdV:
            return 1.0 - spec.a / 6.0 * xi * xi;
        case ModelId::Whitham:
        case ModelId::BoussinesqWhitham:
        case ModelId::MainSystem:
        case ModelId::BW1:
        case ModelId::BW2:
        case ModelId::SautBW:
            return std::sqrt(cww_squared(xi));
        case ModelId::Boussinesq:
            return 1.0 / std::sqrt(1.0 + spec.a / 3.0 * xi * xi);
        case ModelId::Burgers:
            return 0.0;
    }
    throw config_error("phase_speed: unknown model");
}

struct DispersionRow {
    double xi;
    double speed;
};

inline std::vector<DispersionRow> dispersion_report(const ModelSpec& spec,
                                                    const std::vector<double>& xi_grid) {
    std::vector<DispersionRow> rows;
    rows.reserve(xi_grid.size());
    for (double xi : xi_grid) rows.push_back({xi, phase_speed(spec, xi)});
    return rows;
}

inline std::string model_name(ModelId id) {
    switch (id) {
        case ModelId::ShallowWater: return "shallow_water";
        case ModelId::KdV: return "kdv";
        case ModelId::Whitham: return "whitham";
        case ModelId::BoussinesqWhitham: return "boussinesq_whitham";
        case ModelId::Boussinesq: return "boussinesq";
        case ModelId::MainSystem: return "main_system";
        case ModelId::BW1: return "bw1";
        case ModelId::BW2: return "bw2";
        case ModelId::SautBW: return "saut_bw";
        case ModelId::Burgers: return "burgers";
    }
    return "unknown";
}

inline ModelId model_from_name(const std::string& name) {
    for (ModelId id : {ModelId::ShallowWater, ModelId::KdV, ModelId::Whitham,
                       ModelId::BoussinesqWhitham, ModelId::Boussinesq, ModelId::MainSystem,
                       ModelId::BW1, ModelId::BW2, ModelId::SautBW, ModelId::Burgers})
        if (model_name(id) == name) return id;
    throw config_error("unknown model name: " + name);
}

} // namespace bwave

#endif
