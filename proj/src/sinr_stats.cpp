#include "owcsa/sinr_stats.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "owcsa/errors.hpp"
#include "owcsa/numerics.hpp"

namespace owcsa::sinrstats {

namespace {

constexpr double kPi = 3.14159265358979323846;
using cplx = std::complex<double>;

// E1(th) = int_0^1 e^{i th u} du, E2(th) = int_0^1 u e^{i th u} du.
// Series below the switch point, stable closed forms above.
cplx filon_e1(double th) {
    if (std::fabs(th) < 1e-2) {
        cplx it(0.0, th), term(1.0, 0.0), sum(1.0, 0.0);
        for (int k = 1; k <= 8; ++k) {
            term *= it / static_cast<double>(k);
            sum += term / static_cast<double>(k + 1);
        }
        return sum;
    }
    const cplx w(-2.0 * std::sin(0.5 * th) * std::sin(0.5 * th), std::sin(th));
    return w / cplx(0.0, th);
}

cplx filon_e2(double th) {
    if (std::fabs(th) < 1e-2) {
        cplx it(0.0, th), term(1.0, 0.0), sum(0.5, 0.0);
        for (int k = 1; k <= 8; ++k) {
            term *= it / static_cast<double>(k);
            sum += term / static_cast<double>(k + 2);
        }
        return sum;
    }
    const cplx it(0.0, th);
    const cplx eith(std::cos(th), std::sin(th));
    return (eith * (it - 1.0) + 1.0) / (it * it);
}

// Exact integral of e^{i t x} times the linear interpolant through
// (a, fa), (a+h, fb).
cplx filon_panel(double a, double h, double fa, double fb, double t) {
    if (h <= 0.0) return {0.0, 0.0};
    const double th = t * h;
    const cplx phase(std::cos(t * a), std::sin(t * a));
    return phase * h * (fa * filon_e1(th) + (fb - fa) * filon_e2(th));
}

// Samples of the single-user SNR characteristic function at t_j = j*dt,
// j = 0..N/2, with dt = 2*pi/x_max. Computed as the exact Fourier transform
// of the piecewise-linear interpolant of the closed-form density on the
// uniform x-grid (one FFT for the node sum, explicit corrections for the
// support-edge panels), then normalized so phi(0) = 1.
// sum_count/window_offset place the below-grid point mass so that the
// all-below-grid component of the sum_count-fold sum falls on a node of
// the reconstruction window, where it inverts without ringing.
std::vector<cplx> cf_samples_on_grid(const DerivedConstants& c, std::size_t n,
                                     double x_max, int sum_count,
                                     double window_offset) {
    const double dx = x_max / static_cast<double>(n);
    const double dt = 2.0 * kPi / x_max;

    const auto k0 = static_cast<std::size_t>(std::ceil(c.gamma_min / dx));
    const auto k1 = static_cast<std::size_t>(std::floor(c.gamma_max / dx));
    if (k1 >= n)
        throw NumericError("cf grid does not cover the SNR support");
    if (k0 + 1 >= k1)
        throw NumericError("cf grid too coarse for the SNR support");

    std::vector<cplx> buf(n, cplx(0.0, 0.0));
    for (std::size_t i = k0; i <= k1; ++i)
        buf[i] = optics::snr_pdf(static_cast<double>(i) * dx, c);
    const double f_k0 = buf[k0].real();
    const double f_k1 = buf[k1].real();
    num::fft_inplace(buf, +1);

    const double x_k0 = static_cast<double>(k0) * dx;
    const double x_k1 = static_cast<double>(k1) * dx;
    const double f_hi = optics::snr_pdf(c.gamma_max, c);

    // Mass between gamma_min and the first grid node enters as a point mass
    // at its conditional mean. On steep supports (narrow semi-angles give
    // the density many decades of range) this below-grid chunk can carry a
    // large share of the probability; all of it lies within one grid cell
    // of zero interference, so a point mass represents it exactly at the
    // resolution the grid can carry.
    const double below_mass = optics::snr_cdf(x_k0, c);
    double below_mean = 0.0;
    if (below_mass > 0.0) {
        below_mean = optics::snr_partial_mean(x_k0, c) / below_mass;
        // snap upward so sum_count * below_mean sits on a window node
        const double target = sum_count * below_mean - window_offset;
        below_mean =
            (window_offset + std::ceil(target / dx - 1e-9) * dx) / sum_count;
    }

    std::vector<cplx> cf(n / 2 + 1);
    for (std::size_t j = 0; j <= n / 2; ++j) {
        const double t = static_cast<double>(j) * dt;
        const double half = 0.5 * t * dx;
        double sinc2 = 1.0;
        if (half != 0.0) {
            const double s = std::sin(half) / half;
            sinc2 = s * s;
        }
        cplx phi = dx * sinc2 * buf[j];
        // remove the interpolant's spill-over ramps outside [x_k0, x_k1]
        phi -= filon_panel(x_k0 - dx, dx, 0.0, f_k0, t);
        phi -= filon_panel(x_k1, dx, f_k1, 0.0, t);
        // true partial panel up to gamma_max, point mass below the grid
        phi += filon_panel(x_k1, c.gamma_max - x_k1, f_k1, f_hi, t);
        if (below_mass > 0.0)
            phi += below_mass * cplx(std::cos(t * below_mean),
                                     std::sin(t * below_mean));
        cf[j] = phi;
    }
    const double norm = cf[0].real();
    for (auto& v : cf) v /= norm;
    return cf;
}

cplx ipow(cplx z, int e) {
    cplx r(1.0, 0.0);
    while (e > 0) {
        if (e & 1) r *= z;
        z *= z;
        e >>= 1;
    }
    return r;
}

std::size_t next_pow2(double x) {
    std::size_t n = 1;
    while (static_cast<double>(n) < x) n <<= 1;
    return n;
}

double interp(const std::vector<double>& xs, const std::vector<double>& ys,
              double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin() || it == xs.end()) return 0.0;
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

} // namespace

void CfGrid::validate() const {
    if (!num::is_power_of_two(n_points) || n_points < (std::size_t{1} << 12))
        throw ConfigError("cf_grid.n_points: must be a power of two >= 4096");
    if (!(t_max > 0)) throw ConfigError("cf_grid.t_max: must be > 0");
}

std::complex<double> cf_single(double t, const DerivedConstants& c) {
    if (t == 0.0) return {1.0, 0.0};
    // Direct quadrature of the definition. The integrand oscillates with
    // ~|t| (gamma_max - gamma_min) / 2pi periods, so the tolerance budget
    // scales with the oscillation count.
    const double span = c.gamma_max - c.gamma_min;
    const double cycles = std::fabs(t) * span / (2.0 * kPi);
    const int depth = 28 + static_cast<int>(std::ceil(std::log2(1.0 + cycles)));
    return num::integrate_complex(
        [&](double g) {
            return cplx(std::cos(t * g), std::sin(t * g)) *
                   optics::snr_pdf(g, c);
        },
        c.gamma_min, c.gamma_max, 1e-10, depth);
}

std::complex<double> cf_interference(double t, int u_a,
                                     const DerivedConstants& c) {
    if (u_a < 1) throw std::domain_error("cf_interference: u_a must be >= 1");
    if (u_a == 1) return {1.0, 0.0};
    return ipow(cf_single(t, c), u_a - 1);
}

double InterferenceDistribution::pdf_at(double gamma) const {
    if (gamma < support_lo || gamma > support_hi) return 0.0;
    return interp(gamma_grid, pdf_values, gamma);
}

double InterferenceDistribution::mean() const {
    double s = 0.0;
    for (std::size_t i = 1; i < gamma_grid.size(); ++i) {
        const double dx = gamma_grid[i] - gamma_grid[i - 1];
        s += 0.5 * dx * (gamma_grid[i] * pdf_values[i] +
                         gamma_grid[i - 1] * pdf_values[i - 1]);
    }
    return s;
}

namespace {

InterferenceDistribution finalize_interference(
    int u_a, const DerivedConstants& c, std::vector<double>&& grid,
    std::vector<double>&& raw, const CfGrid& grid_used) {
    InterferenceDistribution out;
    out.u_a = u_a;
    out.support_lo = (u_a - 1) * c.gamma_min;
    out.support_hi = (u_a - 1) * c.gamma_max;
    out.grid_used = grid_used;

    const double integral_raw = num::trapezoid(grid, raw);
    out.norm_defect_raw = std::fabs(integral_raw - 1.0);
    for (auto& v : raw) v = std::fmax(v, 0.0);
    const double integral_clamped = num::trapezoid(grid, raw);
    if (!(integral_clamped > 0.0))
        throw NumericError("invert_cf: clamped density has zero mass");
    out.renorm_factor = 1.0 / integral_clamped;
    if (std::fabs(out.renorm_factor - 1.0) > 1e-2)
        throw NumericError(
            "invert_cf: renormalization factor deviates from 1 by more than "
            "1e-2; the CF grid resolution is inadequate for u_a = " +
            std::to_string(u_a));
    for (auto& v : raw) v *= out.renorm_factor;

    out.gamma_grid = std::move(grid);
    out.pdf_values = std::move(raw);
    return out;
}

// Inverts cf^j on the window [sigma, sigma + x_win): the spectrum is
// modulated by e^{-i t sigma} so the n-point grid needs to span only the
// window, not [0, sigma + x_win). `stride` picks every stride-th CF sample
// (the CF grid may be finer to resolve the single-user density).
InterferenceDistribution invert_on(std::size_t n, double x_win, double sigma,
                                   std::size_t stride, int u_a,
                                   const DerivedConstants& c,
                                   const std::vector<cplx>& cf) {
    const int j = u_a - 1;
    const double dx = x_win / static_cast<double>(n);
    const double dt = 2.0 * kPi / x_win;

    std::vector<cplx> spec(n);
    for (std::size_t m = 0; m <= n / 2; ++m) {
        const double t = static_cast<double>(m) * dt;
        const cplx shift(std::cos(t * sigma), -std::sin(t * sigma));
        spec[m] = ipow(cf[m * stride], j) * shift;
    }
    for (std::size_t m = n / 2 + 1; m < n; ++m)
        spec[m] = std::conj(spec[n - m]);
    num::fft_inplace(spec, -1);

    const double lo = j * c.gamma_min, hi = j * c.gamma_max;
    const double scale = dt / (2.0 * kPi);
    // raw density at an arbitrary point of the window, by interpolation
    auto raw_at = [&](double x) {
        const double pos = (x - sigma) / dx;
        const auto i = static_cast<std::size_t>(
            std::clamp(pos, 0.0, static_cast<double>(n - 2)));
        const double w = pos - static_cast<double>(i);
        return (spec[i].real() * (1.0 - w) + spec[i + 1].real() * w) * scale;
    };
    std::vector<double> grid, vals;
    grid.reserve(n / 2);
    vals.reserve(n / 2);
    grid.push_back(lo);
    vals.push_back(raw_at(lo));
    for (std::size_t i = 0; i < n; ++i) {
        const double x = sigma + static_cast<double>(i) * dx;
        if (x <= lo || x > hi) continue;
        grid.push_back(x);
        vals.push_back(spec[i].real() * scale);
    }
    if (grid.size() < 3)
        throw NumericError("invert_cf: support not resolved by the grid");
    if (grid.back() < hi) {
        grid.push_back(hi);
        vals.push_back(raw_at(hi));
    }
    CfGrid used{0.5 * static_cast<double>(n) * dt, n, dt};
    return finalize_interference(u_a, c, std::move(grid), std::move(vals),
                                 used);
}

} // namespace

InterferenceDistribution invert_cf(int u_a, const DerivedConstants& c,
                                   const CfOptions& opts) {
    if (u_a < 2) throw std::domain_error("invert_cf: u_a must be >= 2");
    const int j = u_a - 1;

    if (j == 1) {
        // One interferer: gamma_I is a single gamma_i, so the closed form is
        // the exact answer and Fourier inversion would only add Gibbs error
        // at the density's jump discontinuities. Supports spanning more than
        // three decades get log spacing, which a uniform grid cannot hold
        // to trapezoid accuracy for this power-law density.
        const std::size_t n = opts.n_initial;
        const bool log_spaced = c.gamma_max / c.gamma_min > 1e3;
        std::vector<double> grid(n), vals(n);
        const double lr = std::log(c.gamma_max / c.gamma_min);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = static_cast<double>(i) / static_cast<double>(n - 1);
            const double x = log_spaced
                                 ? c.gamma_min * std::exp(lr * u)
                                 : c.gamma_min + (c.gamma_max - c.gamma_min) * u;
            grid[i] = x;
            vals[i] = optics::snr_pdf(x, c);
        }
        return finalize_interference(u_a, c, std::move(grid), std::move(vals),
                                     CfGrid{0.0, n, 0.0});
    }

    const double width = c.gamma_max - c.gamma_min;
    const double span = j * width;
    // Reconstruction window hugging the support: for narrow supports (large
    // gamma relative to their width) this avoids gridding the empty range
    // [0, j gamma_min).
    double sigma = j * c.gamma_min - 0.15 * span;
    if (sigma < 0.0) sigma = 0.0;
    const double x_win = (j * c.gamma_max - sigma) * (opts.support_pad + 0.10);

    // Grid spacing must resolve the single-user density (steep near
    // gamma_min when the support spans a wide ratio) and the gamma_I grid.
    const double rho = c.gamma_max / c.gamma_min;
    const double nodes_f = rho >= 1.5 ? 4096.0 : 1024.0;
    const double delta_max =
        std::min({width / nodes_f, c.gamma_min / 8.0, span / 4096.0});

    std::size_t n = std::max(opts.n_initial, next_pow2(x_win / delta_max));
    n = std::min(n, opts.n_max);

    // The CF-sampling grid shares the spacing delta but must cover the
    // whole single-user support; it gets its own (larger) size budget.
    const std::size_t n_f_max = std::max(opts.n_max, std::size_t{1} << 22);
    for (;; n <<= 1) {
        const double delta = x_win / static_cast<double>(n);
        const std::size_t n_f =
            std::max(n, next_pow2(1.02 * c.gamma_max / delta));
        if (n_f > n_f_max)
            throw NumericError(
                "invert_cf: the support ratio gamma_max/width exceeds the "
                "CF grid budget for u_a = " + std::to_string(u_a));
        const std::size_t stride = n_f / n;
        std::vector<cplx> cf = cf_samples_on_grid(
            c, n_f, static_cast<double>(n_f) * delta, j, sigma);
        const double tail = std::abs(ipow(cf[(n / 2) * stride], j));
        if (tail <= opts.tail_tol || n >= opts.n_max)
            return invert_on(n, x_win, sigma, stride, u_a, c, cf);
    }
}

InterferenceDistribution invert_cf(int u_a, const CfGrid& grid,
                                   const DerivedConstants& c) {
    if (u_a < 2) throw std::domain_error("invert_cf: u_a must be >= 2");
    grid.validate();
    const double x_max = 2.0 * kPi / grid.delta_t;
    std::vector<cplx> cf =
        cf_samples_on_grid(c, grid.n_points, x_max, u_a - 1, 0.0);
    return invert_on(grid.n_points, x_max, 0.0, 1, u_a, c, cf);
}

double sinr_pdf_conditional(double x, int u_a, const DerivedConstants& c,
                            const InterferenceDistribution* interference) {
    if (!(x > 0)) throw std::domain_error("sinr_pdf_conditional: x must be > 0");
    if (u_a == 1) return optics::snr_pdf(x, c);
    const int j = u_a - 1;
    if (x < c.gamma_min / (j * c.gamma_max + 1.0) ||
        x > c.gamma_max / (j * c.gamma_min + 1.0))
        return 0.0;
    if (interference == nullptr || interference->u_a != u_a)
        throw std::invalid_argument(
            "sinr_pdf_conditional: interference distribution for this u_a "
            "required when u_a >= 2");

    const double lam_lo =
        std::fmax(interference->support_lo + 1.0, c.gamma_min / x);
    const double lam_hi =
        std::fmin(interference->support_hi + 1.0, c.gamma_max / x);
    if (lam_lo >= lam_hi) return 0.0;

    const auto& grid = interference->gamma_grid;
    auto integrand = [&](double lam) {
        return lam * optics::snr_pdf(x * lam, c) *
               interference->pdf_at(lam - 1.0);
    };
    // Trapezoid over the inversion grid nodes inside [lam_lo, lam_hi] plus
    // the partial end panels.
    auto lo_it = std::lower_bound(grid.begin(), grid.end(), lam_lo - 1.0);
    auto hi_it = std::upper_bound(grid.begin(), grid.end(), lam_hi - 1.0);
    double sum = 0.0;
    double prev_x = lam_lo, prev_f = integrand(lam_lo);
    for (auto it = lo_it; it != hi_it; ++it) {
        const double lam = *it + 1.0;
        if (lam <= prev_x) continue;
        const double f = integrand(lam);
        sum += 0.5 * (f + prev_f) * (lam - prev_x);
        prev_x = lam;
        prev_f = f;
    }
    if (lam_hi > prev_x)
        sum += 0.5 * (integrand(lam_hi) + prev_f) * (lam_hi - prev_x);
    return sum;
}

double sinr_cdf_conditional(double gamma, int u_a, const DerivedConstants& c,
                            const InterferenceDistribution* interference) {
    if (gamma < 0)
        throw std::domain_error("sinr_cdf_conditional: gamma must be >= 0");
    if (gamma == 0) return 0.0;
    if (u_a == 1) return optics::snr_cdf(gamma, c);
    const int j = u_a - 1;
    if (gamma < c.gamma_min / (j * c.gamma_max + 1.0)) return 0.0;
    if (gamma >= c.gamma_max / (j * c.gamma_min + 1.0)) return 1.0;
    if (interference == nullptr || interference->u_a != u_a)
        throw std::invalid_argument(
            "sinr_cdf_conditional: interference distribution for this u_a "
            "required when u_a >= 2");

    // P[gamma_1 <= gamma * lambda] integrated over the interference density;
    // equal to the integral of the conditional pdf from 0 to gamma.
    const auto& grid = interference->gamma_grid;
    const auto& pdf = interference->pdf_values;
    double sum = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double f0 = optics::snr_cdf(gamma * (grid[i - 1] + 1.0), c);
        const double f1 = optics::snr_cdf(gamma * (grid[i] + 1.0), c);
        sum += 0.5 * (f0 * pdf[i - 1] + f1 * pdf[i]) * (grid[i] - grid[i - 1]);
    }
    return std::fmin(1.0, std::fmax(0.0, sum));
}

double SinrDistribution::pdf_at(double x) const {
    if (x < support_lo || x > support_hi) return 0.0;
    return interp(sinr_grid, pdf_values, x);
}

double SinrDistribution::cdf_at(double x) const {
    if (x < support_lo) return 0.0;
    if (x >= support_hi) return 1.0;
    auto it = std::upper_bound(sinr_grid.begin(), sinr_grid.end(), x);
    if (it == sinr_grid.begin()) return cdf_values.front();
    if (it == sinr_grid.end()) return cdf_values.back();
    const std::size_t i = static_cast<std::size_t>(it - sinr_grid.begin());
    const double w = (x - sinr_grid[i - 1]) / (sinr_grid[i] - sinr_grid[i - 1]);
    return cdf_values[i - 1] + w * (cdf_values[i] - cdf_values[i - 1]);
}

namespace detail {

LambdaPanels make_lambda_panels(const InterferenceDistribution& dist,
                                std::size_t n) {
    // Equal-probability partition of lambda = gamma_I + 1 from the gridded
    // CDF of gamma_I. Panel representatives are the measure midpoints.
    const auto& grid = dist.gamma_grid;
    const auto& pdf = dist.pdf_values;
    std::vector<double> cdf(grid.size(), 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i)
        cdf[i] = cdf[i - 1] +
                 0.5 * (pdf[i] + pdf[i - 1]) * (grid[i] - grid[i - 1]);
    const double total = cdf.back();
    for (auto& v : cdf) v /= total;

    auto quantile = [&](double p) {
        auto it = std::lower_bound(cdf.begin(), cdf.end(), p);
        if (it == cdf.begin()) return grid.front();
        if (it == cdf.end()) return grid.back();
        const std::size_t i = static_cast<std::size_t>(it - cdf.begin());
        const double c0 = cdf[i - 1], c1 = cdf[i];
        const double w = (c1 > c0) ? (p - c0) / (c1 - c0) : 0.0;
        return grid[i - 1] + w * (grid[i] - grid[i - 1]);
    };

    LambdaPanels panels;
    panels.mass = 1.0 / static_cast<double>(n);
    panels.edges.resize(n + 1);
    panels.mids.resize(n);
    for (std::size_t i = 0; i <= n; ++i)
        panels.edges[i] =
            quantile(static_cast<double>(i) / static_cast<double>(n)) + 1.0;
    for (std::size_t i = 0; i < n; ++i)
        panels.mids[i] = quantile((static_cast<double>(i) + 0.5) /
                                  static_cast<double>(n)) +
                         1.0;
    // cdf lookup for partial panels
    panels.lambda_grid.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        panels.lambda_grid[i] = grid[i] + 1.0;
    panels.lambda_cdf = std::move(cdf);
    return panels;
}

double LambdaPanels::cdf_at(double lam) const {
    if (lam <= lambda_grid.front()) return 0.0;
    if (lam >= lambda_grid.back()) return 1.0;
    auto it = std::upper_bound(lambda_grid.begin(), lambda_grid.end(), lam);
    const std::size_t i = static_cast<std::size_t>(it - lambda_grid.begin());
    const double w =
        (lam - lambda_grid[i - 1]) / (lambda_grid[i] - lambda_grid[i - 1]);
    return lambda_cdf[i - 1] + w * (lambda_cdf[i] - lambda_cdf[i - 1]);
}

} // namespace detail

SinrDistribution make_sinr_distribution(int u_a, const DerivedConstants& c,
                                        const SinrDistributionOptions& opts) {
    if (u_a < 1)
        throw std::domain_error("make_sinr_distribution: u_a must be >= 1");

    SinrDistribution out;
    out.u_a = u_a;
    const std::size_t n = opts.grid_points;

    if (u_a == 1) {
        out.support_lo = c.gamma_min;
        out.support_hi = c.gamma_max;
        out.sinr_grid.resize(n);
        out.pdf_values.resize(n);
        out.cdf_values.resize(n);
        const double lr = std::log(out.support_hi / out.support_lo);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = out.support_lo *
                             std::exp(lr * static_cast<double>(i) /
                                      static_cast<double>(n - 1));
            out.sinr_grid[i] = x;
            out.pdf_values[i] = optics::snr_pdf(x, c);
            out.cdf_values[i] = optics::snr_cdf(x, c);
        }
        out.cdf_values.back() = 1.0;
        return out;
    }

    InterferenceDistribution interference = invert_cf(u_a, c, opts.cf);
    detail::LambdaPanels panels =
        detail::make_lambda_panels(interference, opts.lambda_quantiles);
    return make_sinr_distribution(interference, panels, c, n);
}

SinrDistribution make_sinr_distribution(
    const InterferenceDistribution& interference,
    const detail::LambdaPanels& panels, const DerivedConstants& c,
    std::size_t grid_points) {
    const int u_a = interference.u_a;
    const int j = u_a - 1;
    const std::size_t n = grid_points;
    SinrDistribution out;
    out.u_a = u_a;
    out.support_lo = c.gamma_min / (j * c.gamma_max + 1.0);
    out.support_hi = c.gamma_max / (j * c.gamma_min + 1.0);
    out.sinr_grid.resize(n);
    out.pdf_values.assign(n, 0.0);
    out.cdf_values.assign(n, 0.0);
    const double lr = std::log(out.support_hi / out.support_lo);
    const std::size_t np = panels.mids.size();

    for (std::size_t i = 0; i < n; ++i) {
        const double x = out.support_lo * std::exp(lr * static_cast<double>(i) /
                                                   static_cast<double>(n - 1));
        out.sinr_grid[i] = x;

        // CDF: E_lambda[ F_gamma1(x * lambda) ]
        double cdf = 0.0;
        for (std::size_t p = 0; p < np; ++p)
            cdf += optics::snr_cdf(x * panels.mids[p], c);
        out.cdf_values[i] = std::fmin(1.0, cdf * panels.mass);

        // PDF: E_lambda[ lambda f_gamma1(x * lambda) ] restricted to the
        // lambda window where f_gamma1 is nonzero.
        const double lam_a = std::fmax(panels.edges.front(), c.gamma_min / x);
        const double lam_b = std::fmax(
            lam_a, std::fmin(panels.edges.back(), c.gamma_max / x));
        if (lam_a >= lam_b) continue;
        auto first = std::upper_bound(panels.edges.begin(), panels.edges.end(),
                                      lam_a);
        std::size_t p = (first == panels.edges.begin())
                            ? 0
                            : static_cast<std::size_t>(
                                  first - panels.edges.begin()) - 1;
        double pdf = 0.0;
        for (; p < np && panels.edges[p] < lam_b; ++p) {
            const double lo = std::fmax(panels.edges[p], lam_a);
            const double hi = std::fmin(panels.edges[p + 1], lam_b);
            if (hi <= lo) continue;
            double mass, rep;
            if (lo == panels.edges[p] && hi == panels.edges[p + 1]) {
                mass = panels.mass;
                rep = panels.mids[p];
            } else {
                mass = panels.cdf_at(hi) - panels.cdf_at(lo);
                rep = 0.5 * (lo + hi);
            }
            pdf += mass * rep * optics::snr_pdf(x * rep, c);
        }
        out.pdf_values[i] = pdf;
    }
    // enforce monotonicity against roundoff
    for (std::size_t i = 1; i < n; ++i)
        out.cdf_values[i] = std::fmax(out.cdf_values[i], out.cdf_values[i - 1]);
    return out;
}

void dump_distribution(std::ostream& os, const std::vector<double>& grid,
                       const std::vector<double>& values,
                       const char* value_name) {
    os << "# gamma " << value_name << "\n";
    char line[96];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.12g %.12g\n", grid[i], values[i]);
        os << line;
    }
}

} // namespace owcsa::sinrstats
