#include "owcsa/numerics.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "owcsa/errors.hpp"

namespace owcsa::num {

namespace {

// K15 nodes on [-1,1] (positive half; node 0 is the center) and weights.
// The G7 rule shares the odd-indexed nodes.
constexpr double kKronrodNodes[8] = {
    0.000000000000000000000000000000000,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
};
constexpr double kKronrodWeights[8] = {
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
};
constexpr double kGaussWeights[4] = {
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
};

template <typename T>
struct PanelResult {
    T k15;
    double err;
};

template <typename T, typename F>
PanelResult<T> gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T k15 = kKronrodWeights[0] * fc;
    T g7 = kGaussWeights[0] * fc;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * kKronrodNodes[i];
        T fsum = f(c - dx) + f(c + dx);
        k15 += kKronrodWeights[i] * fsum;
        if (i % 2 == 0) g7 += kGaussWeights[i / 2] * fsum;
    }
    k15 *= h;
    g7 *= h;
    return {k15, std::abs(k15 - g7)};
}

template <typename T, typename F>
T adaptive(const F& f, double a, double b, double abs_tol, int max_depth,
           int depth) {
    PanelResult<T> r = gk15<T>(f, a, b);
    if (r.err <= abs_tol || b - a < 1e-15 * (std::abs(a) + std::abs(b)))
        return r.k15;
    if (depth >= max_depth)
        throw NumericError("quadrature did not converge on [" +
                           std::to_string(a) + ", " + std::to_string(b) +
                           "], error estimate " + std::to_string(r.err));
    const double c = 0.5 * (a + b);
    return adaptive<T>(f, a, c, 0.5 * abs_tol, max_depth, depth + 1) +
           adaptive<T>(f, c, b, 0.5 * abs_tol, max_depth, depth + 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    return adaptive<double>(f, a, b, abs_tol, max_depth, 0);
}

std::complex<double> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double abs_tol, int max_depth) {
    if (a == b) return {0.0, 0.0};
    return adaptive<std::complex<double>>(f, a, b, abs_tol, max_depth, 0);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_inplace(std::vector<std::complex<double>>& data, int sign) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n))
        throw std::invalid_argument("fft size must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = data[i + k];
                std::complex<double> v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return s;
}

} // namespace owcsa::num
