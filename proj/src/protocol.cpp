#include "owcsa/protocol.hpp"

#include <cmath>
#include <stdexcept>

#include "owcsa/errors.hpp"

namespace owcsa::protocol {

void ProtocolConfig::validate() const {
    if (U < 1) throw ConfigError("protocol.U: must be >= 1");
    if (!(p_a >= 0.0 && p_a <= 1.0))
        throw ConfigError("protocol.p_a: must be in [0, 1]");
}

double active_prob(int k, int U, double p_a) {
    if (k < 0 || k > U)
        throw std::out_of_range("active_prob: k outside [0, U]");
    if (p_a <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (p_a >= 1.0) return k == U ? 1.0 : 0.0;
    const double log_c = std::lgamma(U + 1.0) - std::lgamma(k + 1.0) -
                         std::lgamma(U - k + 1.0);
    return std::exp(log_c + k * std::log(p_a) +
                    (U - k) * std::log1p(-p_a));
}

double throughput_capture(double R, int U, double p_a, double epsilon) {
    const double activity = 1.0 - std::pow(1.0 - p_a, U);
    return std::fmax(0.0, R * (activity - epsilon));
}

double throughput_no_capture(double R, int U, double p_a, double eps_single) {
    const double p1 = active_prob(1, U, p_a);
    return std::fmax(0.0, R * p1 * (1.0 - eps_single));
}

double reliability(double p_out) {
    if (!(p_out >= 0.0 && p_out <= 1.0))
        throw std::domain_error("reliability: p_out outside [0, 1]");
    return 1.0 - p_out;
}

} // namespace owcsa::protocol
