#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "bwave/fft.hpp"
#include "bwave/grid.hpp"
#include "bwave/multiplier.hpp"
#include "oracles.hpp"

using namespace bwave;
using std::numbers::pi;

TEST_CASE("make_grid basics", "[spectral]") {
    GridSpec g = make_grid(pi, 16);
    CHECK(g.spacing == Catch::Approx(2.0 * pi / 16).epsilon(1e-15));
    CHECK(g.spacing * g.n_points == Catch::Approx(2.0 * g.half_length));

    GridSpec big = make_grid(32.0 * pi, 4096);
    auto xs = big.wavenumbers();
    CHECK(xs.front() == Catch::Approx(-64.0));
    CHECK(xs.back() == Catch::Approx(64.0 - 1.0 / 32.0));
    CHECK(xs[1] - xs[0] == Catch::Approx(1.0 / 32.0));

    CHECK_THROWS_AS(make_grid(pi, 17), config_error);
    CHECK_THROWS_AS(make_grid(pi, 8), config_error);
    CHECK_THROWS_AS(make_grid(-1.0, 64), config_error);
}

TEST_CASE("forward/inverse round trip and pure modes", "[spectral]") {
    GridSpec g = make_grid(pi, 64);

    RealField zero(g);
    SpectralField Fz = forward(zero);
    CHECK(Fz.l2_norm() == 0.0);

    RealField c = RealField::from_function(g, [](double x) { return std::cos(x); });
    RealField back = inverse(forward(c));
    for (int j = 0; j < g.n_points; ++j)
        CHECK(back.samples[j] == Catch::Approx(c.samples[j]).margin(1e-12));

    // cos(3x) against the direct-summation oracle: all content in k = +-3
    RealField c3 = RealField::from_function(g, [](double x) { return std::cos(3 * x); });
    SpectralField F = forward(c3);
    auto ref = oracles::naive_dft(c3);
    for (int k = -g.n_points / 2; k < g.n_points / 2; ++k) {
        int i = k >= 0 ? k : k + g.n_points; // storage order
        CHECK(std::abs(F.coeffs[i] - ref[k + g.n_points / 2]) < 1e-12);
        if (std::abs(k) != 3)
            CHECK(std::abs(F.coeffs[i]) < 1e-12);
        else
            CHECK(std::abs(F.coeffs[i]) == Catch::Approx(std::sqrt(2.0 * pi) / 2).epsilon(1e-12));
    }

    RealField bad(g);
    bad.samples[3] = std::nan("");
    CHECK_THROWS_AS(forward(bad), numeric_error);
}

TEST_CASE("round trip and Parseval on random band-limited fields", "[spectral]") {
    GridSpec g = make_grid(2.0 * pi, 128);
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 1000; ++trial) {
        RealField f = oracles::random_band_limited(g, 40, rng, trial % 3 == 0 ? 1.0 : 0.0);
        SpectralField F = forward(f);
        RealField back = inverse(F);
        double err = 0.0;
        for (int j = 0; j < g.n_points; ++j)
            err = std::max(err, std::abs(back.samples[j] - f.samples[j]));
        CHECK(err <= 1e-12 * f.max_abs());
        CHECK(F.l2_norm() == Catch::Approx(f.l2_norm()).epsilon(1e-12));
    }
}

TEST_CASE("cww_squared values and Taylor window", "[spectral]") {
    CHECK(cww_squared(0.0) == 1.0);
    CHECK(cww_squared(50.0) == Catch::Approx(std::tanh(50.0) / 50.0).epsilon(1e-15));
    CHECK(cww_squared(50.0) == Catch::Approx(0.02).epsilon(1e-3));
    double prev = cww_squared(0.0);
    for (double xi = 0.25; xi <= 60.0; xi += 0.25) {
        const double v = cww_squared(xi);
        CHECK(v < prev);
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
        CHECK(cww_squared(-xi) == v);
        prev = v;
    }
    for (double xi = -0.5; xi <= 0.5; xi += 0.01) {
        const double c = std::sqrt(cww_squared(xi));
        const double taylor = 1.0 - xi * xi / 6.0;
        CHECK(std::abs(c - taylor) <= 0.06 * std::pow(xi, 4) + 1e-15);
    }
}

TEST_CASE("multipliers on pure modes", "[spectral]") {
    GridSpec g = make_grid(pi, 128);

    for (int k : {1, 2, 5}) {
        RealField c = RealField::from_function(g, [k](double x) { return std::cos(k * x); });
        RealField h = apply_multiplier(c, hilbert());
        for (int j = 0; j < g.n_points; ++j)
            CHECK(h.samples[j] == Catch::Approx(std::sin(k * g.x(j))).margin(1e-12));
    }

    RealField cst = RealField::from_function(g, [](double) { return 2.5; });
    RealField m = apply_multiplier(cst, multiplier_m());
    for (double v : m.samples) CHECK(v == Catch::Approx(2.5).margin(1e-12));

    for (int k : {1, 3, 8}) {
        RealField c = RealField::from_function(g, [k](double x) { return std::cos(k * x); });
        RealField r = apply_multiplier(c, remainder_r());
        CHECK(r.max_abs() <= std::exp(-double(k)) + 1e-14);
    }

    // symbol decay bound at every grid wavenumber
    auto rs = remainder_r();
    for (int i = 0; i < g.n_points; ++i) {
        const double xi = g.wavenumber(i);
        CHECK(std::abs(rs.evaluator(xi)) <= std::exp(-std::abs(xi)) + 1e-15);
    }
}

TEST_CASE("multiplier contraction and Hilbert involution", "[spectral]") {
    GridSpec g = make_grid(pi, 128);
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 50; ++trial) {
        RealField f = oracles::random_band_limited(g, 40, rng);
        CHECK(apply_multiplier(f, multiplier_m()).l2_norm() <= f.l2_norm() * (1 + 1e-12));
        CHECK(apply_multiplier(f, m_dx()).l2_norm() <= f.l2_norm() * (1 + 1e-12));
        RealField hh = apply_multiplier(apply_multiplier(f, hilbert()), hilbert());
        for (int j = 0; j < g.n_points; ++j)
            CHECK(hh.samples[j] == Catch::Approx(-f.samples[j]).margin(1e-10));
    }
}

TEST_CASE("parity violation is rejected", "[spectral]") {
    GridSpec g = make_grid(pi, 64);
    RealField f = RealField::from_function(g, [](double x) { return std::cos(x); });
    MultiplierSymbol broken{[](double) { return complexd(0.0, 1.0); }, Parity::EvenReal};
    CHECK_THROWS_AS(apply_multiplier(f, broken), numeric_error);
}

TEST_CASE("spectral derivatives", "[spectral]") {
    GridSpec g = make_grid(pi, 128);
    RealField s = RealField::from_function(g, [](double x) { return std::sin(x); });
    RealField d = derivative(s, 1);
    for (int j = 0; j < g.n_points; ++j)
        CHECK(d.samples[j] == Catch::Approx(std::cos(g.x(j))).margin(1e-10));

    RealField cst = RealField::from_function(g, [](double) { return 4.0; });
    CHECK(derivative(cst, 1).max_abs() < 1e-12);

    RealField s2 = RealField::from_function(g, [](double x) { return std::sin(2 * x); });
    RealField d2 = derivative(s2, 2);
    for (int j = 0; j < g.n_points; ++j)
        CHECK(d2.samples[j] == Catch::Approx(-4.0 * std::sin(2 * g.x(j))).margin(1e-9));

    RealField same = derivative(s, 0);
    for (int j = 0; j < g.n_points; ++j) CHECK(same.samples[j] == s.samples[j]);
}

TEST_CASE("sobolev norms", "[spectral]") {
    GridSpec g = make_grid(pi, 128);
    RealField zero(g);
    CHECK(sobolev_norm(zero, 0.0) == 0.0);
    CHECK(sobolev_norm(zero, 2.5) == 0.0);

    RealField c = RealField::from_function(g, [](double x) { return std::cos(x); });
    CHECK(sobolev_norm(c, 0.0) == Catch::Approx(c.l2_norm()).epsilon(1e-12));
    // single mode at xi = 1: H^1 weight (1 + 1)
    const double h0 = sobolev_norm(c, 0.0);
    const double h1 = sobolev_norm(c, 1.0);
    CHECK(h1 * h1 == Catch::Approx(2.0 * h0 * h0).epsilon(1e-12));
}

TEST_CASE("band-limited point evaluation", "[spectral]") {
    GridSpec g = make_grid(pi, 64);
    RealField c = RealField::from_function(g, [](double x) { return std::cos(x); });
    SpectralField F = forward(c);
    for (int j = 0; j < g.n_points; j += 7)
        CHECK(eval_at(F, g.x(j)) == Catch::Approx(c.samples[j]).margin(1e-12));
    CHECK(eval_at(F, pi / 3.0) == Catch::Approx(0.5).margin(1e-10));

    RealField cst = RealField::from_function(g, [](double) { return -1.75; });
    SpectralField Fc = forward(cst);
    for (double x : {-3.0, -0.1, 0.77, 2.9})
        CHECK(eval_at(Fc, x) == Catch::Approx(-1.75).margin(1e-12));

    // periodic wrap
    CHECK(eval_at(F, pi / 3.0 + 2.0 * pi) == Catch::Approx(0.5).margin(1e-10));
}

TEST_CASE("dealias two-thirds rule", "[spectral]") {
    GridSpec g = make_grid(pi, 64);
    RealField zero(g);
    CHECK(dealias(forward(zero)).l2_norm() == 0.0);

    const int n = g.n_points;
    RealField hi = RealField::from_function(g, [n](double x) { return std::cos((n / 2 - 1) * x); });
    CHECK(dealias(forward(hi)).l2_norm() < 1e-12);

    RealField lo = RealField::from_function(g, [](double x) { return std::cos(x); });
    SpectralField L0 = forward(lo);
    SpectralField L1 = dealias(L0);
    for (int i = 0; i < n; ++i) {
        if (3 * std::abs(g.mode_number(i)) <= n)
            CHECK(L1.coeffs[i] == L0.coeffs[i]);
        else
            CHECK(L1.coeffs[i] == complexd(0.0, 0.0));
    }
}

TEST_CASE("refined extrema beat grid sampling", "[spectral]") {
    GridSpec g = make_grid(pi, 64);
    // offset peak falls between grid points
    RealField f = RealField::from_function(g, [](double x) { return std::cos(3.0 * (x - 0.02)); });
    double grid_max = f.max_abs();
    double refined = refined_sup_abs(f);
    CHECK(refined >= grid_max);
    CHECK(refined == Catch::Approx(1.0).margin(1e-8));

    RealField s = RealField::from_function(g, [](double x) { return std::sin(x + 0.013); });
    auto mn = refined_min(derivative(s, 1));
    CHECK(mn.value == Catch::Approx(-1.0).margin(1e-4));
}
