#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace owcsa::num {

// Adaptive Gauss-Kronrod (G7/K15) quadrature on a finite interval.
// Bisects until the K15-G7 error estimate of every panel is below its
// share of abs_tol. Throws NumericError if max_depth is exhausted with
// the estimate still above tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-9, int max_depth = 50);

// Same scheme for complex-valued integrands (real/imag share the panels).
std::complex<double> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double abs_tol = 1e-9, int max_depth = 50);

// In-place radix-2 complex FFT, size must be a power of two.
// sign = -1: X_k = sum_j x_j e^{-2*pi*i*jk/N}; sign = +1: positive exponent.
// No 1/N normalization in either direction.
void fft_inplace(std::vector<std::complex<double>>& data, int sign);

// Trapezoid integral of samples y on grid x (monotone x).
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

bool is_power_of_two(std::size_t n);

} // namespace owcsa::num
