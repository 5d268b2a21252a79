#include "owcsa/fbl.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "owcsa/errors.hpp"

namespace owcsa::fbl {

namespace {
const double kLog2e = 1.0 / std::log(2.0);
const double kLog2e2 = kLog2e * kLog2e;
const double kSqrt2 = std::sqrt(2.0);
} // namespace

void FblParams::validate() const {
    if (n < 1) throw ConfigError("fbl.n: must be >= 1");
    if (n < 100 && !allow_small_n)
        throw ConfigError(
            "fbl.n: the normal approximation drops the O(log n / n) term, "
            "which needs n >= 100; set fbl.allow_small_n = true to override");
    if (!(R > 0)) throw ConfigError("fbl.R: must be > 0");
    if (!(eps_th > 0 && eps_th < 1))
        throw ConfigError("fbl.eps_th: must be in (0, 1)");
}

double capacity(double gamma) {
    if (gamma < 0) throw std::domain_error("capacity: negative SINR");
    return std::log1p(gamma) * kLog2e;
}

double dispersion(double gamma, DispersionKind kind) {
    if (gamma < 0) throw std::domain_error("dispersion: negative SINR");
    switch (kind) {
        case DispersionKind::nearest_neighbor:
            return 2.0 * gamma / (1.0 + gamma) * kLog2e2;
        case DispersionKind::awgn: {
            const double q = 1.0 + gamma;
            return gamma * (gamma + 2.0) / (q * q) * kLog2e2;
        }
        case DispersionKind::awgn_as_printed:
            return gamma * gamma / (1.0 + gamma * gamma) * kLog2e2;
    }
    return 0.0;
}

double q_func(double z) { return 0.5 * std::erfc(z / kSqrt2); }

double q_inv(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("q_inv: p must be in (0, 1)");
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (q_func(mid) > p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15 * (1.0 + std::fabs(lo))) break;
    }
    return 0.5 * (lo + hi);
}

double error_prob_instant(double gamma, const FblParams& params) {
    if (gamma <= 0.0) return 1.0;  // C = 0 < R: certain failure
    const double v = dispersion(gamma, params.dispersion);
    if (v <= 0.0) return 1.0;
    const double z = std::sqrt(static_cast<double>(params.n) / v) *
                     (capacity(gamma) - params.R);
    return q_func(z);
}

double sinr_threshold(const FblParams& params) {
    if (!(params.eps_th > 0.0 && params.eps_th <= 0.5))
        throw std::domain_error("sinr_threshold: eps_th must be in (0, 0.5]");
    double hi = 1.0;
    while (error_prob_instant(hi, params) > params.eps_th) {
        hi *= 2.0;
        if (hi > 1e12)
            throw NumericError(
                "sinr_threshold: eps_th unreachable below gamma = 1e12; "
                "check n, R, eps_th consistency");
    }
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (error_prob_instant(mid, params) > params.eps_th)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15 * hi) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace owcsa::fbl
