#pragma once

namespace owcsa::fbl {

// Channel-dispersion variant. nearest_neighbor is the default (interference
// is not Gaussian and the receiver uses nearest-neighbor decoding);
// awgn is the standard AWGN dispersion (1 - (1+g)^-2) log2^2 e;
// awgn_as_printed keeps the (1 - 1/(1+g^2)) variant some texts print, for
// replication runs only.
enum class DispersionKind { nearest_neighbor, awgn, awgn_as_printed };

struct FblParams {
    int n = 128;             // block length [channel uses]
    double R = 0.5;          // code rate [bits/channel use]
    DispersionKind dispersion = DispersionKind::nearest_neighbor;
    double eps_th = 1e-3;    // target error probability for outage threshold
    bool allow_small_n = false;  // permit n < 100 (normal approximation
                                 // drops the O(log n / n) term)

    void validate() const;
};

// Shannon capacity log2(1 + gamma), gamma >= 0.
double capacity(double gamma);

// Channel dispersion V(gamma) in squared bits.
double dispersion(double gamma, DispersionKind kind);

// Gaussian tail Q(z) and its inverse (bracketed root solve; the round trip
// |Q(q_inv(p)) - p| holds to 1e-12).
double q_func(double z);
double q_inv(double p);

// Normal-approximation block error probability
//   Q( sqrt(n / V(gamma)) * (C(gamma) - R) ),
// with the continuous limits eps(0) = 1 and eps(inf) = 0.
double error_prob_instant(double gamma, const FblParams& params);

// The SINR threshold gamma_th solving error_prob_instant(gamma) = eps_th,
// by bisection. Requires 0 < eps_th <= 0.5. Throws NumericError if no
// bracket exists below gamma = 1e12.
double sinr_threshold(const FblParams& params);

} // namespace owcsa::fbl
