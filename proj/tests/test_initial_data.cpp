#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "bwave/initial_data.hpp"

using namespace bwave;
using std::numbers::pi;

TEST_CASE("gevrey bump profile values and support", "[initial_data]") {
    GridSpec g = make_grid(4.0 * pi, 512);
    GevreyBumpSpec spec;
    spec.alpha = 0.6;
    spec.amplitude = 2.0;
    spec.center = 0.5;
    spec.width = 1.5;
    RealField f = gevrey_bump(spec, g);

    for (int j = 0; j < g.n_points; ++j) {
        const double x = g.x(j);
        if (x <= spec.center - spec.width || x >= spec.center + spec.width)
            CHECK(f.samples[j] == 0.0);
    }
    CHECK(eval_at(f, spec.center) ==
          Catch::Approx(2.0 * std::exp(-1.0)).margin(1e-8));

    GevreyBumpSpec wide = spec;
    wide.center = 4.0 * pi - 2.0; // support hits the margin band
    CHECK_THROWS_AS(gevrey_bump(wide, g), config_error);
    GevreyBumpSpec bad = spec;
    bad.alpha = 1.2;
    CHECK_THROWS_AS(gevrey_bump(bad, g), config_error);
}

TEST_CASE("gevrey bump spectral tail matches its index", "[initial_data]") {
    GridSpec g = make_grid(4.0 * pi, 1024);
    GevreyBumpSpec spec;
    spec.alpha = 0.6;
    spec.width = 1.5;
    SpectralField F = forward(gevrey_bump(spec, g));

    // fit log|f_hat| = c0 - c1 xi^alpha' over a mid-decade window
    const double top = F.l2_norm();
    std::vector<double> xis, logs;
    for (int i = 1; i < g.n_points / 2; ++i) {
        const double mag = std::abs(F.coeffs[i]);
        if (mag > 1e-11 * top && mag < 1e-3 * top) {
            xis.push_back(F.wavenumber(i));
            logs.push_back(std::log(mag));
        }
    }
    REQUIRE(xis.size() > 20);
    double best_alpha = 0.0, best_sse = 1e300;
    for (double ap = 0.25; ap <= 0.95; ap += 0.005) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = (int)xis.size();
        for (int i = 0; i < n; ++i) {
            const double t = std::pow(xis[i], ap);
            sx += t;
            sy += logs[i];
            sxx += t * t;
            sxy += t * logs[i];
        }
        const double denom = n * sxx - sx * sx;
        const double slope = (n * sxy - sx * sy) / denom;
        const double icept = (sy - slope * sx) / n;
        double sse = 0;
        for (int i = 0; i < n; ++i) {
            const double r = logs[i] - (icept + slope * std::pow(xis[i], ap));
            sse += r * r;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best_alpha = ap;
        }
    }
    CHECK(std::abs(best_alpha - spec.alpha) <= 0.2 * spec.alpha);
}

TEST_CASE("derivative norms grow like n^(1/alpha)", "[initial_data]") {
    GridSpec g = make_grid(4.0 * pi, 1024);
    GevreyBumpSpec spec;
    spec.alpha = 0.6;
    spec.width = 1.5;
    RealField f = gevrey_bump(spec, g);

    // regression of log(|f^(n+1)|/|f^(n)|) against log n
    std::vector<double> ln, lr;
    double prev = refined_sup_abs(f);
    for (int n = 1; n <= 8; ++n) {
        const double cur = refined_sup_abs(derivative(f, n));
        if (n >= 2) {
            ln.push_back(std::log((double)(n - 1)));
            lr.push_back(std::log(cur / prev));
        }
        prev = cur;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = (int)ln.size();
    for (int i = 0; i < n; ++i) {
        sx += ln[i];
        sy += lr[i];
        sxx += ln[i] * ln[i];
        sxy += ln[i] * lr[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double expected = 1.0 / spec.alpha;
    CHECK(std::abs(slope - expected) <= 0.3 * expected);
}

TEST_CASE("steep profile calibration", "[initial_data]") {
    GridSpec g = make_grid(4.0 * pi, 2048);
    RealField u1 = steep_profile(-1.0, 1.0, g);
    const double m1 = detail::refined_min_slope(u1);
    CHECK(m1 >= -1.01);
    CHECK(m1 <= -0.99);

    RealField u2 = steep_profile(-2.0, 1.0, g);
    const double m2 = detail::refined_min_slope(u2);
    CHECK(m2 == Catch::Approx(2.0 * m1).epsilon(0.01));

    // compact support survives the scaling
    int support_cells = 0;
    for (double v : u2.samples)
        if (v != 0.0) ++support_cells;
    CHECK(support_cells * g.spacing <= 2.0 + 4.0 * g.spacing);

    // a width far below the grid scale cannot be calibrated
    CHECK_THROWS_AS(steep_profile(-1.0, 12.0 * g.spacing, g), resolution_error);
    CHECK_THROWS_AS(steep_profile(1.0, 1.0, g), config_error);
}

TEST_CASE("hypothesis report on zero data", "[initial_data]") {
    GridSpec g = make_grid(4.0 * pi, 256);
    RealField zero(g);
    AssumptionReport rep = check_assumptions(zero, zero, 0.1, 0.55, 1.0, 4);
    CHECK(rep.sigma == Catch::Approx(1.5 + 0.6));
    CHECK(rep.n_max_checked == 4);
    for (const auto& r : rep.records) {
        if (r.id.rfind("A:u", 0) == 0 || r.id.rfind("A:h", 0) == 0)
            CHECK(r.satisfied); // 0 < positive bound
        if (r.id == "A:m1" || r.id == "A:m2" || r.id == "A:m3")
            CHECK_FALSE(r.satisfied); // inf u0' = 0
    }
    CHECK_FALSE(rep.all_satisfied());
}

TEST_CASE("A:m1 arithmetic on synthetic norms", "[initial_data]") {
    TheoremNorms norms;
    norms.min_du = -200.0;
    norms.du_inf = 200.0;
    norms.eta_h2 = 3.0;
    norms.un_inf = {0.0, 0.0};  // n = 2, 3
    norms.etan_inf = {0.0, 0.0, 0.0};
    AssumptionReport rep = check_assumptions_from_norms(norms, 0.1, 0.55, 1.0);
    const AssumptionRecord* m1 = rep.find("A:m1");
    REQUIRE(m1 != nullptr);
    CHECK(m1->lhs == Catch::Approx(400.0));
    CHECK(m1->rhs == Catch::Approx(4.0));
    CHECK(m1->satisfied);
}

TEST_CASE("A:m3 fails before A:m2 as the slope relaxes", "[initial_data]") {
    auto probe = [&](double m0) {
        TheoremNorms norms;
        norms.min_du = m0;
        norms.du_inf = -m0;
        norms.un_inf = {0.0, 0.0};
        norms.etan_inf = {0.0, 0.0, 0.0};
        return check_assumptions_from_norms(norms, 0.1, 0.6, 1.0);
    };
    // thresholds for eps = 0.1, alpha = 0.6, b = 1: A:m2 at -m0 ~ 5.8e9,
    // A:m3 at -m0 ~ 2.9e10
    AssumptionReport high = probe(-5e10);
    CHECK(high.find("A:m2")->satisfied);
    CHECK(high.find("A:m3")->satisfied);
    AssumptionReport mid = probe(-1e10);
    CHECK(mid.find("A:m2")->satisfied);
    CHECK_FALSE(mid.find("A:m3")->satisfied);
    AssumptionReport low = probe(-1e9);
    CHECK_FALSE(low.find("A:m2")->satisfied);
    CHECK_FALSE(low.find("A:m3")->satisfied);
}

TEST_CASE("enlarging b weakly enlarges the satisfied set", "[initial_data]") {
    TheoremNorms norms;
    norms.min_du = -1e11;
    norms.du_inf = 1e11;
    norms.eta_inf = 1.0;
    norms.un_inf = {30.0, 900.0};          // n = 2, 3
    norms.etan_inf = {2.0, 40.0, 2000.0};  // n = 1, 2, 3
    AssumptionReport b1 = check_assumptions_from_norms(norms, 0.05, 0.6, 1.0);
    AssumptionReport b2 = check_assumptions_from_norms(norms, 0.05, 0.6, 2.0);
    for (size_t i = 0; i < b1.records.size(); ++i)
        if (b1.records[i].satisfied &&
            (b1.records[i].id.rfind("A:un", 0) == 0 || b1.records[i].id.rfind("A:hn", 0) == 0))
            CHECK(b2.records[i].satisfied);
}

TEST_CASE("alpha window recorded", "[initial_data]") {
    TheoremNorms norms;
    norms.min_du = -1.0;
    norms.un_inf = {0.0, 0.0};
    norms.etan_inf = {0.0, 0.0, 0.0};
    AssumptionReport rep = check_assumptions_from_norms(norms, 0.01, 0.55, 1.0);
    CHECK(rep.find("alpha-window lower")->satisfied);  // 0.505 < 0.55
    CHECK(rep.find("alpha-window upper")->satisfied);  // 0.55 < 0.5733
    AssumptionReport narrow = check_assumptions_from_norms(norms, 0.01, 0.6, 1.0);
    CHECK_FALSE(narrow.find("alpha-window upper")->satisfied); // 0.6 > 0.5733
}
