#ifndef BWAVE_MULTIPLIER_HPP
#define BWAVE_MULTIPLIER_HPP

#include <functional>

#include "bwave/fft.hpp"
#include "bwave/grid.hpp"

namespace bwave {

/// Phase speed squared of linear water waves, tanh(xi)/xi, with the removable
/// singularity filled in at xi = 0. Even; values in (0, 1].
inline double cww_squared(double xi) {
    const double a = std::abs(xi);
    if (a < 1e-4) {
        // tanh(x)/x = 1 - x^2/3 + 2x^4/15 - ...
        const double x2 = xi * xi;
        return 1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0;
    }
    return std::tanh(a) / a;
}

enum class Parity { EvenReal, OddImaginary };

/// A Fourier multiplier: pointwise factor on the spectrum. Even-real and
/// odd-imaginary symbols both map real fields to real fields; anything else
/// surfaces as an imaginary residual and is rejected.
struct MultiplierSymbol {
    std::function<complexd(double)> evaluator;
    Parity parity = Parity::EvenReal;
};

inline MultiplierSymbol multiplier_m() {
    return {[](double xi) { return complexd(cww_squared(xi), 0.0); }, Parity::EvenReal};
}

inline MultiplierSymbol multiplier_m_half() {
    return {[](double xi) { return complexd(std::sqrt(cww_squared(xi)), 0.0); },
            Parity::EvenReal};
}

/// Hilbert transform, symbol -i sgn(xi); sgn(0) = 0 kills the mean mode.
inline MultiplierSymbol hilbert() {
    return {[](double xi) {
                const double s = xi > 0 ? 1.0 : (xi < 0 ? -1.0 : 0.0);
                return complexd(0.0, -s);
            },
            Parity::OddImaginary};
}

/// Lambda = H d/dx, symbol |xi|; defines the half-derivative quadratic form.
inline MultiplierSymbol lambda_op() {
    return {[](double xi) { return complexd(std::abs(xi), 0.0); }, Parity::EvenReal};
}

/// Remainder R with M d/dx = -H + R, symbol i(tanh(xi) - sgn(xi));
/// exponentially small at high frequency and 0 at xi = 0.
inline MultiplierSymbol remainder_r() {
    return {[](double xi) {
                const double s = xi > 0 ? 1.0 : (xi < 0 ? -1.0 : 0.0);
                return complexd(0.0, std::tanh(xi) - s);
            },
            Parity::OddImaginary};
}

/// M d/dx as a single symbol, i tanh(xi).
inline MultiplierSymbol m_dx() {
    return {[](double xi) { return complexd(0.0, std::tanh(xi)); }, Parity::OddImaginary};
}

inline MultiplierSymbol derivative_symbol(int n) {
    return {[n](double xi) {
                complexd ix(0.0, xi);
                complexd p(1.0, 0.0);
                for (int k = 0; k < n; ++k) p *= ix;
                return p;
            },
            n % 2 == 0 ? Parity::EvenReal : Parity::OddImaginary};
}

/// Apply a symbol on the spectral side. The Nyquist mode is zeroed for
/// odd-imaginary symbols (its sign is ill-defined), preserving realness.
inline SpectralField apply_symbol(const SpectralField& F, const MultiplierSymbol& s) {
    SpectralField out(F.grid);
    const int n = F.grid.n_points;
    for (int i = 0; i < n; ++i) {
        if (s.parity == Parity::OddImaginary && F.grid.mode_number(i) == -n / 2) {
            out.coeffs[i] = 0.0;
            continue;
        }
        out.coeffs[i] = s.evaluator(F.wavenumber(i)) * F.coeffs[i];
    }
    return out;
}

inline RealField apply_multiplier(const RealField& f, const MultiplierSymbol& s) {
    SpectralField F = apply_symbol(forward(f), s);
    std::vector<complexd> tmp;
    detail::inverse_complex(F, tmp);
    RealField out(f.grid);
    double imag_max = 0.0;
    for (int j = 0; j < f.grid.n_points; ++j) {
        out.samples[j] = tmp[j].real();
        imag_max = std::max(imag_max, std::abs(tmp[j].imag()));
    }
    // scaled by the output too: unbounded symbols amplify roundoff along
    // with the signal
    if (imag_max > 1e-10 * std::max({1.0, f.max_abs(), out.max_abs()}))
        throw numeric_error("apply_multiplier: imaginary residual " + std::to_string(imag_max));
    return out;
}

/// Spectral n-th derivative; derivative(f, 0) == f.
inline RealField derivative(const RealField& f, int n) {
    if (n < 0) throw domain_error("derivative: order must be >= 0");
    if (n == 0) return f;
    return apply_multiplier(f, derivative_symbol(n));
}

inline SpectralField derivative(const SpectralField& F, int n) {
    return apply_symbol(F, derivative_symbol(n));
}

/// Discrete H^s norm, (sum (1+xi^2)^s |c_k|^2)^(1/2); s = 0 is the L2 norm.
inline double sobolev_norm(const SpectralField& F, double s) {
    if (s < 0.0) throw domain_error("sobolev_norm: s must be >= 0");
    double acc = 0.0;
    for (int i = 0; i < F.grid.n_points; ++i) {
        const double xi = F.wavenumber(i);
        acc += std::pow(1.0 + xi * xi, s) * std::norm(F.coeffs[i]);
    }
    return std::sqrt(acc);
}

inline double sobolev_norm(const RealField& f, double s) {
    return sobolev_norm(forward(f), s);
}

/// Two-thirds rule: zero every mode with |k| > N/3.
inline SpectralField dealias(SpectralField F) {
    const int n = F.grid.n_points;
    for (int i = 0; i < n; ++i)
        if (3 * std::abs(F.grid.mode_number(i)) > n) F.coeffs[i] = 0.0;
    return F;
}

/// Band-limited (trigonometric) point evaluation of a real field's spectrum.
/// Exact for any function resolvable on the grid.
inline double eval_at(const SpectralField& F, double x) {
    const GridSpec& g = F.grid;
    const int n = g.n_points;
    const double xr = g.wrap(x);
    const double scale = 1.0 / std::sqrt(2.0 * g.half_length);
    const complexd w = std::exp(complexd(0.0, std::numbers::pi * xr / g.half_length));
    complexd z = w;
    double acc = F.coeffs[0].real();
    for (int k = 1; k < n / 2; ++k) {
        acc += 2.0 * (F.coeffs[k] * z).real();
        z *= w;
    }
    // Nyquist basis interpolated as cos(xi_{N/2} (x + L)); real for real fields
    // since N is a multiple of 4.
    const double xi_ny = std::numbers::pi * (n / 2) / g.half_length;
    acc += F.coeffs[n / 2].real() * std::cos(xi_ny * (xr + g.half_length));
    return scale * acc;
}

inline double eval_at(const RealField& f, double x) { return eval_at(forward(f), x); }

/// Grid max of |f| refined by one Newton step on the trigonometric
/// interpolant (the grid max underestimates the sup by O(h^2)).
inline double refined_sup_abs(const RealField& f) {
    const int n = f.grid.n_points;
    int j0 = 0;
    for (int j = 1; j < n; ++j)
        if (std::abs(f.samples[j]) > std::abs(f.samples[j0])) j0 = j;
    SpectralField F = forward(f);
    SpectralField F1 = derivative(F, 1);
    SpectralField F2 = derivative(F, 2);
    const double x0 = f.grid.x(j0);
    double best = std::abs(f.samples[j0]);
    const double d1 = eval_at(F1, x0);
    const double d2 = eval_at(F2, x0);
    if (d2 != 0.0) {
        double x1 = x0 - d1 / d2;
        if (std::abs(x1 - x0) <= f.grid.spacing)
            best = std::max(best, std::abs(eval_at(F, x1)));
    }
    return best;
}

struct RefinedMin {
    double x = 0.0;
    double value = 0.0;
};

/// Grid argmin refined by a parabola through the argmin and its neighbors.
inline RefinedMin refined_min(const RealField& f) {
    const int n = f.grid.n_points;
    int j0 = 0;
    for (int j = 1; j < n; ++j)
        if (f.samples[j] < f.samples[j0]) j0 = j;
    const double ym = f.samples[(j0 - 1 + n) % n];
    const double y0 = f.samples[j0];
    const double yp = f.samples[(j0 + 1) % n];
    const double denom = ym - 2.0 * y0 + yp;
    RefinedMin out{f.grid.x(j0), y0};
    if (denom > 0.0) {
        const double delta = 0.5 * (ym - yp) / denom; // in units of h, |delta| <= 1/2
        out.x = f.grid.wrap(f.grid.x(j0) + delta * f.grid.spacing);
        out.value = y0 - 0.25 * (ym - yp) * delta;
    }
    return out;
}

} // namespace bwave

#endif
