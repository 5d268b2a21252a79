#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "owcsa/config.hpp"
#include "owcsa/fbl.hpp"
#include "owcsa/protocol.hpp"
#include "owcsa/sinr_stats.hpp"

namespace owcsa {

struct AnalyticOptions {
    int u_a_cap = 32;              // largest U_a given its own distribution;
                                   // k beyond the cap reuse the cap's metrics
    double weight_cutoff = 1e-12;  // P[U_a = k] below this is skipped
    sinrstats::CfOptions cf;
    std::size_t sinr_grid_points = 2048;
    std::size_t lambda_quantiles = 2048;
    std::size_t gamma1_quantiles = 512;
};

// Per-k conditional metrics for one FBL parameter set, reusable across
// activation probabilities (the conditional distributions do not depend
// on p_a or U).
struct ConditionalTable {
    int kmax = 0;                  // conditional metrics built for k <= kmax
    double gamma_th = 0.0;
    std::vector<double> eps_k;     // eps(U_a = k), index k-1
    std::vector<double> pout_k;    // P_out(U_a = k), index k-1
    double eps_single = 0.0;       // interference-free route (no-capture)
    double pout_single = 0.0;
};

// Analytic pipeline for one fixed geometry/front-end: conditional SINR
// statistics per U_a (cached), the binomial mixture over the activation
// process, and the derived metrics. Thread-safe; distributions are
// immutable once built.
class AnalyticEngine {
public:
    explicit AnalyticEngine(const SystemConfig& system,
                            AnalyticOptions opts = {});

    const optics::DerivedConstants& constants() const { return c_; }
    const AnalyticOptions& options() const { return opts_; }

    // eps(U_a) = E[ error_prob_instant(SINR) | U_a ].
    double error_prob_conditional(int u_a, const fbl::FblParams& p) const;

    // P_out(U_a) = F_SINR(gamma_th | U_a).
    double outage_conditional(int u_a, double gamma_th) const;

    // Single-user error probability integrated against the closed-form SNR
    // density (the interference-free route used by the no-capture variant).
    double error_prob_single_user(const fbl::FblParams& p) const;

    double error_prob_unconditional(const protocol::ProtocolConfig& proto,
                                    const fbl::FblParams& p) const;
    double outage_unconditional(const protocol::ProtocolConfig& proto,
                                double gamma_th) const;

    protocol::MetricsReport metrics(const protocol::ProtocolConfig& proto,
                                    const fbl::FblParams& p) const;

    ConditionalTable conditional_table(const fbl::FblParams& p,
                                       int kmax) const;

    const sinrstats::SinrDistribution& sinr_distribution(int u_a) const;
    const sinrstats::InterferenceDistribution& interference(int u_a) const;

    // Conditional SINR support endpoints (closed form).
    double support_lo(int u_a) const;
    double support_hi(int u_a) const;

private:
    struct KState {
        sinrstats::InterferenceDistribution interference;
        sinrstats::detail::LambdaPanels panels;
        std::unique_ptr<sinrstats::SinrDistribution> dist;
    };
    KState& state(int u_a) const;

    SystemConfig system_;
    AnalyticOptions opts_;
    optics::DerivedConstants c_;
    std::vector<double> gamma1_mids_;  // quantile midpoints of gamma_1
    mutable std::mutex mutex_;
    mutable std::map<int, std::unique_ptr<KState>> cache_;
};

// Assemble the mixture metrics for one (U, p_a) point from a conditional
// table (k > table.kmax reuses the metrics at kmax).
protocol::MetricsReport assemble_metrics(const ConditionalTable& table,
                                         const protocol::ProtocolConfig& proto,
                                         const fbl::FblParams& p,
                                         double weight_cutoff = 1e-12);

// Conditional error probability integrated against a gridded SINR
// distribution (panel-wise Gauss rule on the interpolated density).
double error_prob_conditional(const sinrstats::SinrDistribution& sinr,
                              const fbl::FblParams& p);

// Conditional outage from a gridded SINR distribution.
double outage_conditional(const sinrstats::SinrDistribution& sinr,
                          double gamma_th);

} // namespace owcsa
