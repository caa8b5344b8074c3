#ifndef BWAVE_GRID_HPP
#define BWAVE_GRID_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "bwave/errors.hpp"

namespace bwave {

using complexd = std::complex<double>;

/// Uniform periodic grid on [-L, L) with N equispaced nodes.
///
/// Wavenumbers are xi_k = pi*k/L for k = -N/2 .. N/2-1. Spectral data is kept
/// in FFT storage order (k = 0, 1, ..., N/2-1, -N/2, ..., -1), so index i maps
/// to k = i for i < N/2 and k = i - N otherwise.
struct GridSpec {
    double half_length = 0.0; // L
    int n_points = 0;         // N, power of two >= 16
    double spacing = 0.0;     // 2L/N

    double x(int j) const { return -half_length + j * spacing; }

    int mode_number(int i) const { return i < n_points / 2 ? i : i - n_points; }

    double wavenumber(int i) const {
        return std::numbers::pi * mode_number(i) / half_length;
    }

    /// Wavenumber list in ascending order, k = -N/2 .. N/2-1.
    std::vector<double> wavenumbers() const {
        std::vector<double> xs(n_points);
        for (int k = -n_points / 2; k < n_points / 2; ++k)
            xs[k + n_points / 2] = std::numbers::pi * k / half_length;
        return xs;
    }

    /// Reduce x modulo the period into [-L, L).
    double wrap(double xx) const {
        const double period = 2.0 * half_length;
        double y = xx - period * std::floor((xx + half_length) / period);
        if (y >= half_length) y -= period; // guard roundoff at the seam
        return y;
    }

    bool operator==(const GridSpec& o) const {
        return half_length == o.half_length && n_points == o.n_points;
    }
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline GridSpec make_grid(double half_length, int n_points) {
    if (!(half_length > 0.0))
        throw config_error("make_grid: half_length must be positive");
    if (n_points < 16 || !is_power_of_two(n_points))
        throw config_error("make_grid: n_points must be a power of two >= 16");
    GridSpec g;
    g.half_length = half_length;
    g.n_points = n_points;
    g.spacing = 2.0 * half_length / n_points;
    return g;
}

/// Samples of a real-valued function on a GridSpec.
struct RealField {
    GridSpec grid;
    std::vector<double> samples;

    RealField() = default;
    explicit RealField(const GridSpec& g) : grid(g), samples(g.n_points, 0.0) {}

    template <class F>
    static RealField from_function(const GridSpec& g, F&& f) {
        RealField out(g);
        for (int j = 0; j < g.n_points; ++j) out.samples[j] = f(g.x(j));
        return out;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : samples) m = std::max(m, std::abs(v));
        return m;
    }

    double min_value() const {
        double m = samples.empty() ? 0.0 : samples[0];
        for (double v : samples) m = std::min(m, v);
        return m;
    }

    /// Trapezoidal (= rectangle, on a periodic grid) integral over the period.
    double integral() const {
        double s = 0.0;
        for (double v : samples) s += v;
        return s * grid.spacing;
    }

    /// Discrete L2 norm, (h * sum f_j^2)^(1/2).
    double l2_norm() const {
        double s = 0.0;
        for (double v : samples) s += v * v;
        return std::sqrt(s * grid.spacing);
    }

    bool all_finite() const {
        for (double v : samples)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline RealField operator+(RealField a, const RealField& b) {
    for (int j = 0; j < a.grid.n_points; ++j) a.samples[j] += b.samples[j];
    return a;
}

inline RealField operator-(RealField a, const RealField& b) {
    for (int j = 0; j < a.grid.n_points; ++j) a.samples[j] -= b.samples[j];
    return a;
}

inline RealField operator*(double c, RealField a) {
    for (double& v : a.samples) v *= c;
    return a;
}

/// Pointwise product of two fields on the same grid (no dealiasing here).
inline RealField pointwise(const RealField& a, const RealField& b) {
    RealField out(a.grid);
    for (int j = 0; j < a.grid.n_points; ++j)
        out.samples[j] = a.samples[j] * b.samples[j];
    return out;
}

/// Complex spectrum of a real field, unitary normalization:
/// coeffs satisfy sum |c_k|^2 = h * sum f_j^2 (discrete Parseval) and
/// f(x) = (2L)^(-1/2) * sum_k c_k exp(i xi_k x).
struct SpectralField {
    GridSpec grid;
    std::vector<complexd> coeffs; // FFT storage order

    SpectralField() = default;
    explicit SpectralField(const GridSpec& g) : grid(g), coeffs(g.n_points) {}

    double wavenumber(int i) const { return grid.wavenumber(i); }

    double l2_norm() const {
        double s = 0.0;
        for (const complexd& c : coeffs) s += std::norm(c);
        return std::sqrt(s);
    }
};

inline SpectralField operator+(SpectralField a, const SpectralField& b) {
    for (int i = 0; i < a.grid.n_points; ++i) a.coeffs[i] += b.coeffs[i];
    return a;
}

inline SpectralField operator*(double c, SpectralField a) {
    for (complexd& v : a.coeffs) v *= c;
    return a;
}

} // namespace bwave

#endif
