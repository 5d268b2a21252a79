#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "owcsa/optics.hpp"

namespace owcsa::sinrstats {

using optics::DerivedConstants;

// Discretization of the Fourier inversion. The t-grid and the gamma-grid are
// FFT-paired: delta_t * delta_x = 2 pi / n_points, so t_max doubles with
// n_points while delta_t stays fixed.
struct CfGrid {
    double t_max = 0.0;
    std::size_t n_points = 0;  // power of two, >= 2^12
    double delta_t = 0.0;      // = 2 t_max / n_points

    void validate() const;
};

struct CfOptions {
    std::size_t n_initial = std::size_t{1} << 15;
    std::size_t n_max = std::size_t{1} << 20;
    double tail_tol = 1e-8;   // target |cf_interference(t_max)|
    double support_pad = 1.05;
};

// Characteristic function of the single-user SNR, by adaptive quadrature of
// its defining integral over [gamma_min, gamma_max].
std::complex<double> cf_single(double t, const DerivedConstants& c);

// CF of the aggregate interference with u_a - 1 i.i.d. interferers:
// cf_single(t)^(u_a - 1); identically 1 for u_a = 1.
std::complex<double> cf_interference(double t, int u_a,
                                     const DerivedConstants& c);

// Gridded density of the aggregate interference gamma_I.
struct InterferenceDistribution {
    int u_a = 0;
    std::vector<double> gamma_grid;   // uniform, covering the support
    std::vector<double> pdf_values;
    double support_lo = 0.0, support_hi = 0.0;  // (u_a-1)*[g_min, g_max]
    double norm_defect_raw = 0.0;  // |integral before clamping - 1|
    double renorm_factor = 1.0;    // applied after clamping negative ripple
    CfGrid grid_used;

    double pdf_at(double gamma) const;  // linear interp, 0 outside support
    double mean() const;
};

// Density of gamma_I via Fourier inversion of cf_interference on an
// adaptively sized FFT grid (u_a >= 2). Negative ripple is clamped to zero
// and the density renormalized; a renormalization factor farther than 1e-2
// from 1 raises NumericError. For u_a = 2 the sum is a single interferer,
// whose density is the closed form sampled directly.
InterferenceDistribution invert_cf(int u_a, const DerivedConstants& c,
                                   const CfOptions& opts = {});

// As above but on a caller-fixed grid (no adaptive doubling).
InterferenceDistribution invert_cf(int u_a, const CfGrid& grid,
                                   const DerivedConstants& c);

// Conditional distribution of SINR = gamma_1 / (gamma_I + 1) given U_a.
struct SinrDistribution {
    int u_a = 0;
    std::vector<double> sinr_grid;  // log-spaced over the support
    std::vector<double> pdf_values;
    std::vector<double> cdf_values;
    double support_lo = 0.0, support_hi = 0.0;

    double pdf_at(double x) const;
    double cdf_at(double x) const;  // 0 below support, 1 above
};

// Pointwise conditional density/CDF. u_a = 1 is the interference-free closed
// form; u_a >= 2 integrates over lambda = gamma_I + 1 using `interference`
// (required in that case).
double sinr_pdf_conditional(double x, int u_a, const DerivedConstants& c,
                            const InterferenceDistribution* interference);
double sinr_cdf_conditional(double gamma, int u_a, const DerivedConstants& c,
                            const InterferenceDistribution* interference);

namespace detail {

// Equal-probability partition of lambda = gamma_I + 1, used to evaluate
// expectations over the interference as midpoint-in-measure sums.
struct LambdaPanels {
    std::vector<double> edges;        // n+1 quantile edges (lambda)
    std::vector<double> mids;         // n measure midpoints (lambda)
    double mass = 0.0;                // probability per full panel
    std::vector<double> lambda_grid;  // fine grid for partial-panel masses
    std::vector<double> lambda_cdf;

    double cdf_at(double lam) const;
};

LambdaPanels make_lambda_panels(const InterferenceDistribution& dist,
                                std::size_t n);

} // namespace detail

struct SinrDistributionOptions {
    std::size_t grid_points = 2048;
    std::size_t lambda_quantiles = 2048;
    CfOptions cf;
};

SinrDistribution make_sinr_distribution(int u_a, const DerivedConstants& c,
                                        const SinrDistributionOptions& = {});

// Same, reusing an already-inverted interference distribution (u_a >= 2).
SinrDistribution make_sinr_distribution(
    const InterferenceDistribution& interference,
    const detail::LambdaPanels& panels, const DerivedConstants& c,
    std::size_t grid_points = 2048);

// Two-column text dump: "# gamma pdf" header then one "x value" pair per
// line, for external plotting.
void dump_distribution(std::ostream& os, const std::vector<double>& grid,
                       const std::vector<double>& values,
                       const char* value_name = "pdf");

} // namespace owcsa::sinrstats
