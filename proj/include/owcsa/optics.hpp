#pragma once

#include "owcsa/config.hpp"

namespace owcsa::optics {

// Quantities derived once from a SystemConfig. Pure function of the config:
// the same input yields bit-identical constants.
struct DerivedConstants {
    double m = 0.0;          // Lambertian order
    double X = 0.0;          // placement-independent channel-gain factor
    double sigma_n2 = 0.0;   // noise power N0*B [W]
    double mu = 0.0;         // P_t^2 eta^2 / sigma_n2
    double mu_X2 = 0.0;      // mu * X^2 (single-user SNR scale)
    double h_min = 0.0, h_max = 0.0;          // channel-gain support
    double gamma_min = 0.0, gamma_max = 0.0;  // single-user SNR support
    double D = 0.0, L = 0.0; // geometry copied for the closed forms
};

// m = -ln 2 / ln cos(phi_half); requires 0 < phi_half < pi/2.
double lambertian_order(double phi_half);

// zeta^2 / sin^2(Psi) inside the field of view, 0 outside.
double concentrator_gain(double psi, double zeta, double Psi);

// The factor X = A_r (m+1) R_r / (2 pi) * T_s * g * L^(m+1).
// Throws ConfigError if atan(D/L) > Psi (constant-X model invalid).
double geometry_constant(const OpticalFrontend& fe, const CellGeometry& geom,
                         double m);

DerivedConstants derive_constants(const SystemConfig& config);

// h(r) = X / (r^2 + L^2)^((m+3)/2); throws std::out_of_range unless 0<=r<=D.
double channel_gain(double r, const DerivedConstants& c);

// Density/CDF of the single-user SNR gamma = mu h^2 on [gamma_min, gamma_max].
double snr_pdf(double gamma, const DerivedConstants& c);
double snr_cdf(double gamma, const DerivedConstants& c);

// Closed-form SNR quantile (inverse of snr_cdf), p in [0,1].
double snr_quantile(double p, const DerivedConstants& c);

// Closed-form mean of the single-user SNR.
double snr_mean(const DerivedConstants& c);

// Closed-form partial first moment: integral of gamma * pdf over
// [gamma_min, min(x, gamma_max)].
double snr_partial_mean(double x, const DerivedConstants& c);

// Inverse-transform sampling of the radial distance: r = D sqrt(u).
double sample_radius(double u, double D);

} // namespace owcsa::optics
