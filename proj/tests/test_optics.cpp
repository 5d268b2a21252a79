#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "owcsa/errors.hpp"
#include "owcsa/montecarlo.hpp"
#include "owcsa/numerics.hpp"
#include "owcsa/optics.hpp"

using namespace owcsa;

namespace {
constexpr double kDeg = M_PI / 180.0;

SystemConfig table_config(double phi_deg = 60.0, double D = 4.0,
                          double L = 3.0) {
    SystemConfig cfg;  // optics defaults are the reference values
    cfg.optics.Phi_half = phi_deg * kDeg;
    cfg.geometry.D = D;
    cfg.geometry.L = L;
    return cfg;
}
} // namespace

TEST_CASE("lambertian order") {
    CHECK(optics::lambertian_order(60.0 * kDeg) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // oracle: -ln 2 / ln cos(30 deg), frozen from high-precision evaluation
    const double oracle = -std::log(2.0) / std::log(std::cos(30.0 * kDeg));
    CHECK(optics::lambertian_order(30.0 * kDeg) ==
          doctest::Approx(oracle).epsilon(1e-14));
    CHECK(optics::lambertian_order(30.0 * kDeg) ==
          doctest::Approx(4.81884167930642).epsilon(1e-9));
    // wide-open semi-angle drives the order to 0+
    const double m89 = optics::lambertian_order(89.9 * kDeg);
    CHECK(m89 > 0.0);
    CHECK(m89 < 0.2);
    CHECK_THROWS_AS(optics::lambertian_order(0.0), std::domain_error);
    CHECK_THROWS_AS(optics::lambertian_order(90.0 * kDeg), std::domain_error);
}

TEST_CASE("concentrator gain") {
    CHECK(optics::concentrator_gain(20.0 * kDeg, 1.5, 90.0 * kDeg) ==
          doctest::Approx(2.25).epsilon(1e-15));
    CHECK(optics::concentrator_gain(60.0 * kDeg + 0.01, 1.5, 60.0 * kDeg) ==
          0.0);
    CHECK(optics::concentrator_gain(10.0 * kDeg, 1.5, 60.0 * kDeg) ==
          doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("geometry constant against direct arithmetic") {
    const auto cfg = table_config();
    const double m = 1.0;
    // oracle: A_r (m+1) R_r / (2 pi) * T_s * g * L^(m+1) with the reference
    // values, evaluated independently
    const double oracle =
        1e-4 * 2.0 * 0.4 / (2.0 * M_PI) * 1.0 * 2.25 * 9.0;
    const double x = optics::geometry_constant(cfg.optics, cfg.geometry, m);
    CHECK(x == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(x == doctest::Approx(2.5783100780887046e-4).epsilon(1e-10));

    auto doubled = cfg;
    doubled.optics.T_s = 2.0;
    CHECK(optics::geometry_constant(doubled.optics, doubled.geometry, m) ==
          doctest::Approx(2.0 * x).epsilon(1e-12));

    // L = 1 leaves only the L^(m+1) = 1 factor
    auto unit = cfg;
    unit.geometry.L = 1.0;
    CHECK(optics::geometry_constant(unit.optics, unit.geometry, 1.0) ==
          doctest::Approx(1e-4 * 2.0 * 0.4 / (2.0 * M_PI) * 2.25)
              .epsilon(1e-12));

    // atan(D/L) beyond the FoV invalidates the constant-factor form
    auto narrow = cfg;
    narrow.optics.Psi = 40.0 * kDeg;  // atan(4/3) = 53.1 deg
    CHECK_THROWS_AS(
        optics::geometry_constant(narrow.optics, narrow.geometry, m),
        ConfigError);
}

TEST_CASE("derived constants and channel gain") {
    const auto c = optics::derive_constants(table_config());
    CHECK(c.m == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.sigma_n2 == doctest::Approx(2e-16).epsilon(1e-12));
    CHECK(c.mu == doctest::Approx(2.88e12).epsilon(1e-12));
    // support endpoints, frozen from independent evaluation
    CHECK(c.gamma_min == doctest::Approx(0.49012036181167357).epsilon(1e-9));
    CHECK(c.gamma_max == doctest::Approx(29.180500888993286).epsilon(1e-9));

    CHECK(optics::channel_gain(0.0, c) ==
          doctest::Approx(c.h_max).epsilon(1e-15));
    CHECK(optics::channel_gain(c.D, c) ==
          doctest::Approx(c.h_min).epsilon(1e-15));
    double prev = optics::channel_gain(0.0, c);
    for (double r = 0.4; r <= c.D; r += 0.4) {
        const double h = optics::channel_gain(r, c);
        CHECK(h < prev);
        prev = h;
    }
    CHECK_THROWS_AS(optics::channel_gain(-0.1, c), std::out_of_range);
    CHECK_THROWS_AS(optics::channel_gain(c.D + 0.1, c), std::out_of_range);

    // recomputation is pure: bit-identical constants
    const auto c2 = optics::derive_constants(table_config());
    CHECK(c2.X == c.X);
    CHECK(c2.gamma_min == c.gamma_min);
    CHECK(c2.gamma_max == c.gamma_max);
}

TEST_CASE("snr pdf normalization and support") {
    const auto c = optics::derive_constants(table_config());
    const double total = num::integrate(
        [&](double g) { return optics::snr_pdf(g, c); }, c.gamma_min,
        c.gamma_max, 1e-9);
    CHECK(std::fabs(total - 1.0) < 1e-6);
    CHECK(optics::snr_pdf(c.gamma_min * 0.99, c) == 0.0);
    CHECK(optics::snr_pdf(c.gamma_max * 1.01, c) == 0.0);
}

TEST_CASE("snr cdf endpoints, derivative and quantile") {
    const auto c = optics::derive_constants(table_config());
    CHECK(optics::snr_cdf(c.gamma_min, c) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(optics::snr_cdf(c.gamma_max, c) == 1.0);
    CHECK(optics::snr_cdf(0.1, c) == 0.0);
    CHECK(optics::snr_cdf(100.0, c) == 1.0);

    // d/dgamma CDF = pdf by finite differences on an interior grid
    for (int i = 1; i <= 19; ++i) {
        const double g = c.gamma_min +
                         (c.gamma_max - c.gamma_min) * (i / 20.0);
        const double h = 1e-5 * g;
        const double fd =
            (optics::snr_cdf(g + h, c) - optics::snr_cdf(g - h, c)) /
            (2.0 * h);
        CHECK(fd == doctest::Approx(optics::snr_pdf(g, c)).epsilon(1e-5));
    }

    for (double p : {0.0, 0.1, 0.5, 0.9, 1.0})
        CHECK(optics::snr_cdf(optics::snr_quantile(p, c), c) ==
              doctest::Approx(p).epsilon(1e-12));

    // monotone nondecreasing, bounded
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double g = c.gamma_min +
                         (c.gamma_max - c.gamma_min) * (i / 100.0);
        const double f = optics::snr_cdf(g, c);
        CHECK(f >= prev);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        prev = f;
    }
}

TEST_CASE("snr mean closed form matches quadrature") {
    const auto c = optics::derive_constants(table_config());
    const double quad = num::integrate(
        [&](double g) { return g * optics::snr_pdf(g, c); }, c.gamma_min,
        c.gamma_max, 1e-9);
    CHECK(optics::snr_mean(c) == doctest::Approx(quad).epsilon(1e-9));
}

TEST_CASE("sample radius endpoints and distribution") {
    CHECK(optics::sample_radius(0.0, 4.0) == 0.0);
    CHECK(optics::sample_radius(1.0, 4.0) == 4.0);
    CHECK(optics::sample_radius(0.25, 4.0) ==
          doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(optics::sample_radius(-0.1, 4.0), std::domain_error);

    // Kolmogorov-Smirnov against F(r) = r^2 / D^2
    const double D = 4.0;
    const std::size_t n = 1000000;
    std::vector<double> rs(n);
    for (std::size_t i = 0; i < n; ++i) {
        mc::SlotRng rng(99, i);
        rs[i] = optics::sample_radius(rng.uniform(), D);
    }
    std::sort(rs.begin(), rs.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = rs[i] * rs[i] / (D * D);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        ks = std::max({ks, std::fabs(f - lo), std::fabs(f - hi)});
    }
    CHECK(ks <= 2e-3);
}

TEST_CASE("snr samples reproduce the closed-form density and median") {
    const auto c = optics::derive_constants(table_config());
    const std::size_t n = 1000000;
    std::vector<double> snr(n);
    for (std::size_t i = 0; i < n; ++i) {
        mc::SlotRng rng(1234, i);
        const double r = optics::sample_radius(rng.uniform(), c.D);
        const double h = optics::channel_gain(r, c);
        snr[i] = c.mu * h * h;
    }

    // binned density against the CDF difference per bin
    const int bins = 64;
    const double w = (c.gamma_max - c.gamma_min) / bins;
    std::vector<double> hist(bins, 0.0);
    for (double g : snr) {
        int b = static_cast<int>((g - c.gamma_min) / w);
        b = std::clamp(b, 0, bins - 1);
        hist[b] += 1.0;
    }
    for (int b = 0; b < bins; ++b) {
        const double lo = c.gamma_min + b * w, hi = lo + w;
        const double expect =
            (optics::snr_cdf(hi, c) - optics::snr_cdf(lo, c)) / w;
        const double got = hist[b] / (n * w);
        CHECK(std::fabs(got - expect) <= 1e-2);
    }

    std::nth_element(snr.begin(), snr.begin() + n / 2, snr.end());
    const double median = snr[n / 2];
    CHECK(std::fabs(optics::snr_cdf(median, c) - 0.5) <= 5e-3);
}

TEST_CASE("empirical snr cdf tracks the closed form everywhere") {
    const auto c = optics::derive_constants(table_config());
    const std::size_t n = 1000000;
    std::vector<double> snr(n);
    for (std::size_t i = 0; i < n; ++i) {
        mc::SlotRng rng(777, i);
        const double h =
            optics::channel_gain(optics::sample_radius(rng.uniform(), c.D), c);
        snr[i] = c.mu * h * h;
    }
    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i)
        grid.push_back(c.gamma_min +
                       (c.gamma_max - c.gamma_min) * (i / 200.0));
    const auto emp = mc::empirical_cdf(snr, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::fabs(emp[i] - optics::snr_cdf(grid[i], c)) <= 0.01);
}

TEST_CASE("config validation names the failing field") {
    auto cfg = table_config();
    cfg.optics.Psi = 100.0 * kDeg;
    CHECK_THROWS_WITH_AS(cfg.validate(),
                         doctest::Contains("Psi_deg"), ConfigError);

    auto fov = table_config();
    fov.optics.Psi = 40.0 * kDeg;
    CHECK_THROWS_WITH_AS(fov.validate(),
                         doctest::Contains("field-of-view"), ConfigError);

    auto neg = table_config();
    neg.geometry.D = -1.0;
    CHECK_THROWS_WITH_AS(neg.validate(), doctest::Contains("D_m"),
                         ConfigError);
}
