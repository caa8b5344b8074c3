#ifndef BWAVE_FFT_HPP
#define BWAVE_FFT_HPP

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "bwave/grid.hpp"

namespace bwave {

namespace detail {

// One cached c2c plan pair per transform size. FFTW's planner is not
// thread-safe and new-array execution has alignment caveats, so each cached
// entry owns its buffers and a lock is held across copy-execute-copy.
class FftCache {
  public:
    static FftCache& instance() {
        static FftCache cache;
        return cache;
    }

    void forward(int n, const complexd* in, complexd* out) { run(n, in, out, +1); }
    void backward(int n, const complexd* in, complexd* out) { run(n, in, out, -1); }

  private:
    struct Entry {
        fftw_complex* buf_in = nullptr;
        fftw_complex* buf_out = nullptr;
        fftw_plan fwd = nullptr;
        fftw_plan bwd = nullptr;
    };

    std::mutex mutex_;
    std::map<int, Entry> entries_;

    Entry& get(int n) {
        auto it = entries_.find(n);
        if (it != entries_.end()) return it->second;
        Entry e;
        e.buf_in = fftw_alloc_complex(n);
        e.buf_out = fftw_alloc_complex(n);
        e.fwd = fftw_plan_dft_1d(n, e.buf_in, e.buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
        e.bwd = fftw_plan_dft_1d(n, e.buf_in, e.buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
        return entries_.emplace(n, e).first->second;
    }

    void run(int n, const complexd* in, complexd* out, int direction) {
        std::lock_guard<std::mutex> lock(mutex_);
        Entry& e = get(n);
        for (int j = 0; j < n; ++j) {
            e.buf_in[j][0] = in[j].real();
            e.buf_in[j][1] = in[j].imag();
        }
        fftw_execute(direction > 0 ? e.fwd : e.bwd);
        for (int j = 0; j < n; ++j) out[j] = complexd(e.buf_out[j][0], e.buf_out[j][1]);
    }

    ~FftCache() {
        for (auto& [n, e] : entries_) {
            fftw_destroy_plan(e.fwd);
            fftw_destroy_plan(e.bwd);
            fftw_free(e.buf_in);
            fftw_free(e.buf_out);
        }
    }
};

// Inverse transform keeping the imaginary residual, for parity checks.
inline void inverse_complex(const SpectralField& F, std::vector<complexd>& out) {
    const int n = F.grid.n_points;
    const double scale = 1.0 / std::sqrt(2.0 * F.grid.half_length);
    std::vector<complexd> tw(n);
    // exp(i xi_k x_j) picks up (-1)^k from the x = -L grid offset
    for (int i = 0; i < n; ++i)
        tw[i] = (i % 2 == 0) ? F.coeffs[i] : -F.coeffs[i];
    out.resize(n);
    FftCache::instance().backward(n, tw.data(), out.data());
    for (complexd& v : out) v *= scale;
}

} // namespace detail

/// Forward transform. Throws numeric_error on non-finite input.
/// The spectrum is Hermitian-symmetrized so real-to-real multiplier chains
/// stay exactly conjugate-paired no matter how strongly a symbol amplifies.
inline SpectralField forward(const RealField& f) {
    const int n = f.grid.n_points;
    if (!f.all_finite()) throw numeric_error("forward: non-finite sample");
    std::vector<complexd> in(n), out(n);
    for (int j = 0; j < n; ++j) in[j] = complexd(f.samples[j], 0.0);
    detail::FftCache::instance().forward(n, in.data(), out.data());
    SpectralField F(f.grid);
    const double scale = f.grid.spacing / std::sqrt(2.0 * f.grid.half_length);
    for (int i = 0; i < n; ++i)
        F.coeffs[i] = (i % 2 == 0 ? scale : -scale) * out[i];
    F.coeffs[0] = complexd(F.coeffs[0].real(), 0.0);
    F.coeffs[n / 2] = complexd(F.coeffs[n / 2].real(), 0.0);
    for (int i = 1; i < n / 2; ++i) {
        const complexd avg = 0.5 * (F.coeffs[i] + std::conj(F.coeffs[n - i]));
        F.coeffs[i] = avg;
        F.coeffs[n - i] = std::conj(avg);
    }
    return F;
}

/// Inverse transform; imaginary parts are dropped (they are roundoff for
/// Hermitian spectra; multiplier application checks them explicitly).
inline RealField inverse(const SpectralField& F) {
    std::vector<complexd> tmp;
    detail::inverse_complex(F, tmp);
    RealField f(F.grid);
    for (int j = 0; j < F.grid.n_points; ++j) f.samples[j] = tmp[j].real();
    return f;
}

} // namespace bwave

#endif
