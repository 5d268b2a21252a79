#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "owcsa/fbl.hpp"
#include "owcsa/optics.hpp"
#include "owcsa/protocol.hpp"

namespace owcsa::mc {

// The RNG algorithm is part of the reproducibility contract: changing it is
// a breaking change for every pinned empirical value.
inline constexpr const char* kRngVersion = "splitmix64/v1";

// Counter-based per-slot stream: the state is keyed on (seed, slot_index),
// so slot i produces the same draws no matter which thread runs it.
class SlotRng {
public:
    SlotRng(std::uint64_t seed, std::uint64_t slot_index);

    // Uniform double in [0, 1).
    double uniform();

private:
    std::uint64_t state_;
};

// One slot outcome. u_a == 0 marks an empty slot (no user active); the
// remaining fields are zero in that case.
struct SlotSample {
    int u_a = 0;
    double reference_gamma = 0.0;
    double interference_sum = 0.0;
    double sinr = 0.0;
};

struct SimConfig {
    std::uint64_t n_slots = 1000000;
    std::uint64_t seed = 1;
    std::optional<int> condition_u_a;  // fix U_a instead of drawing it
    int n_threads = 0;                 // 0: hardware concurrency

    void validate() const;
};

// Draw order per slot is fixed (activity flags in user order, then radii in
// active-user order, then the reference index): reordering it would change
// every pinned result.
std::optional<SlotSample> simulate_slot(std::uint64_t seed,
                                        std::uint64_t slot_index,
                                        const optics::DerivedConstants& c,
                                        const protocol::ProtocolConfig& proto,
                                        std::optional<int> condition_u_a);

// Simulate cfg.n_slots slots in parallel over disjoint index ranges.
// Returns one entry per slot in slot order; empty slots have u_a == 0.
std::vector<SlotSample> simulate(const SimConfig& cfg,
                                 const optics::DerivedConstants& c,
                                 const protocol::ProtocolConfig& proto);

// Fraction of samples <= each grid point (grid must be sorted).
std::vector<double> empirical_cdf(std::vector<double> samples,
                                  const std::vector<double>& grid);

struct MetricsEstimate {
    double epsilon = 0.0, se_epsilon = 0.0;
    double throughput = 0.0, se_throughput = 0.0;
    double p_out = 0.0, se_p_out = 0.0;
    double activity_freq = 0.0;
    std::uint64_t n_slots = 0;
    const char* rng_version = kRngVersion;
};

// Plug-in estimators over a slot stream (empty-slot markers included):
//   eps_hat  = mean over slots of 1{active} * error_prob_instant(sinr)
//   T_hat    = R * (activity_freq - eps_hat)
//   Pout_hat = mean over slots of 1{active, sinr < gamma_th}
// with standard errors of the per-slot means.
MetricsEstimate estimate_metrics(const std::vector<SlotSample>& slots,
                                 const fbl::FblParams& params,
                                 double gamma_th);

} // namespace owcsa::mc
