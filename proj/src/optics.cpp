#include "owcsa/optics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "owcsa/errors.hpp"

namespace owcsa {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 1.57079632679489661923;

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}
} // namespace

void OpticalFrontend::validate() const {
    require(P_t > 0, "optics.P_t_mW: must be > 0");
    require(eta > 0, "optics.eta: must be > 0");
    require(A_r > 0, "optics.A_r_cm2: must be > 0");
    require(R_r > 0, "optics.R_r_A_per_W: must be > 0");
    require(T_s > 0, "optics.T_s: must be > 0");
    require(zeta > 0, "optics.zeta: must be > 0");
    require(Psi > 0 && Psi <= kHalfPi,
            "optics.Psi_deg: must be in (0, 90] degrees");
    require(Phi_half > 0 && Phi_half < kHalfPi,
            "optics.Phi_half_deg: must be in (0, 90) degrees");
    require(N0 > 0, "optics.N0_W_per_Hz: must be > 0");
    require(B > 0, "optics.B_kHz: must be > 0");
}

void CellGeometry::validate() const {
    require(D > 0, "geometry.D_m: must be > 0");
    require(L > 0, "geometry.L_m: must be > 0");
}

void SystemConfig::validate() const {
    optics.validate();
    geometry.validate();
    if (std::atan(geometry.D / geometry.L) > optics.Psi)
        throw ConfigError(
            "geometry: field-of-view violation, atan(D/L) exceeds Psi; "
            "devices at the cell edge would fall outside the receiver FoV");
}

} // namespace owcsa

namespace owcsa::optics {

double lambertian_order(double phi_half) {
    if (!(phi_half > 0.0 && phi_half < kHalfPi))
        throw std::domain_error("lambertian_order: Phi_half outside (0, pi/2)");
    return -std::log(2.0) / std::log(std::cos(phi_half));
}

double concentrator_gain(double psi, double zeta, double Psi) {
    if (psi < 0.0)
        throw std::domain_error("concentrator_gain: negative incidence angle");
    if (psi > Psi) return 0.0;
    const double s = std::sin(Psi);
    return zeta * zeta / (s * s);
}

double geometry_constant(const OpticalFrontend& fe, const CellGeometry& geom,
                         double m) {
    if (std::atan(geom.D / geom.L) > fe.Psi)
        throw ConfigError(
            "geometry: field-of-view violation, atan(D/L) exceeds Psi; "
            "the placement-independent gain factor is not valid");
    // All devices are inside the FoV, so the concentrator response is the
    // in-FoV constant.
    const double g = concentrator_gain(0.0, fe.zeta, fe.Psi);
    return fe.A_r * (m + 1.0) * fe.R_r / (2.0 * kPi) * fe.T_s * g *
           std::pow(geom.L, m + 1.0);
}

DerivedConstants derive_constants(const SystemConfig& config) {
    config.validate();
    const auto& fe = config.optics;
    const auto& geom = config.geometry;

    DerivedConstants c;
    c.m = lambertian_order(fe.Phi_half);
    c.X = geometry_constant(fe, geom, c.m);
    c.sigma_n2 = fe.N0 * fe.B;
    c.mu = fe.P_t * fe.P_t * fe.eta * fe.eta / c.sigma_n2;
    c.mu_X2 = c.mu * c.X * c.X;
    c.D = geom.D;
    c.L = geom.L;
    c.h_max = c.X / std::pow(geom.L, c.m + 3.0);
    c.h_min = c.X / std::pow(geom.D * geom.D + geom.L * geom.L,
                             0.5 * (c.m + 3.0));
    c.gamma_max = c.mu * c.h_max * c.h_max;
    c.gamma_min = c.mu * c.h_min * c.h_min;
    return c;
}

double channel_gain(double r, const DerivedConstants& c) {
    if (r < 0.0 || r > c.D)
        throw std::out_of_range("channel_gain: r outside [0, D]");
    return c.X / std::pow(r * r + c.L * c.L, 0.5 * (c.m + 3.0));
}

double snr_pdf(double gamma, const DerivedConstants& c) {
    if (gamma < c.gamma_min || gamma > c.gamma_max) return 0.0;
    const double a = std::pow(c.mu_X2, 1.0 / (c.m + 3.0)) /
                     (c.D * c.D * (c.m + 3.0));
    return a * std::pow(gamma, -(c.m + 4.0) / (c.m + 3.0));
}

double snr_cdf(double gamma, const DerivedConstants& c) {
    if (gamma < c.gamma_min) return 0.0;
    if (gamma >= c.gamma_max) return 1.0;
    const double w = std::pow(c.mu_X2 / gamma, 1.0 / (c.m + 3.0));
    const double v = 1.0 + (c.L * c.L - w) / (c.D * c.D);
    return std::fmin(1.0, std::fmax(0.0, v));
}

double snr_quantile(double p, const DerivedConstants& c) {
    if (p < 0.0 || p > 1.0)
        throw std::domain_error("snr_quantile: p outside [0, 1]");
    const double w = c.L * c.L + c.D * c.D * (1.0 - p);
    return c.mu_X2 / std::pow(w, c.m + 3.0);
}

double snr_mean(const DerivedConstants& c) {
    const double e = (c.m + 2.0) / (c.m + 3.0);
    return std::pow(c.mu_X2, 1.0 / (c.m + 3.0)) /
           (c.D * c.D * (c.m + 2.0)) *
           (std::pow(c.gamma_max, e) - std::pow(c.gamma_min, e));
}

double snr_partial_mean(double x, const DerivedConstants& c) {
    if (x <= c.gamma_min) return 0.0;
    const double hi = std::fmin(x, c.gamma_max);
    const double e = (c.m + 2.0) / (c.m + 3.0);
    return std::pow(c.mu_X2, 1.0 / (c.m + 3.0)) /
           (c.D * c.D * (c.m + 2.0)) *
           (std::pow(hi, e) - std::pow(c.gamma_min, e));
}

double sample_radius(double u, double D) {
    if (u < 0.0 || u > 1.0)
        throw std::domain_error("sample_radius: u outside [0, 1]");
    return D * std::sqrt(u);
}

} // namespace owcsa::optics
