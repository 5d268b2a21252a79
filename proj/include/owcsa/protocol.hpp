#pragma once

#include <vector>

namespace owcsa::protocol {

struct ProtocolConfig {
    int U = 50;          // total device count
    double p_a = 0.05;   // per-slot activation probability
    bool capture = true; // false: classical collision-channel slotted ALOHA

    void validate() const;
};

// P[U_a = k] = C(U,k) p^k (1-p)^(U-k), evaluated in log space so it stays
// finite for U up to 1e4. Throws std::out_of_range for k outside [0, U].
double active_prob(int k, int U, double p_a);

// Throughput with capture: R * ((1 - (1-p)^U) - epsilon), clamped at 0.
double throughput_capture(double R, int U, double p_a, double epsilon);

// Throughput without capture: only singleton slots can be decoded, so
// T = R * P[U_a = 1] * (1 - eps_single), with eps_single the single-user
// (interference-free) error probability.
double throughput_no_capture(double R, int U, double p_a, double eps_single);

double reliability(double p_out);

// Audit row of the binomial mixture: which U_a = k values contribute what.
struct PerKRow {
    int k = 0;
    double weight = 0.0;   // P[U_a = k]
    double epsilon = 0.0;  // eps(U_a = k)
    double p_out = 0.0;    // P_out(U_a = k)
};

struct MetricsReport {
    double epsilon = 0.0;
    double throughput = 0.0;      // clamped at 0
    double throughput_raw = 0.0;  // unclamped value kept for audit
    double p_out = 0.0;
    double reliability = 1.0;
    std::vector<PerKRow> per_k;
};

} // namespace owcsa::protocol
