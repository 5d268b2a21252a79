#include "owcsa/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "owcsa/errors.hpp"
#include "owcsa/numerics.hpp"

namespace owcsa {

AnalyticEngine::AnalyticEngine(const SystemConfig& system, AnalyticOptions opts)
    : system_(system), opts_(opts), c_(optics::derive_constants(system)) {
    if (opts_.u_a_cap < 1) throw ConfigError("analysis.u_a_cap: must be >= 1");
    gamma1_mids_.resize(opts_.gamma1_quantiles);
    const auto n1 = static_cast<double>(opts_.gamma1_quantiles);
    for (std::size_t i = 0; i < opts_.gamma1_quantiles; ++i)
        gamma1_mids_[i] =
            optics::snr_quantile((static_cast<double>(i) + 0.5) / n1, c_);
}

double AnalyticEngine::support_lo(int u_a) const {
    return c_.gamma_min / ((u_a - 1) * c_.gamma_max + 1.0);
}

double AnalyticEngine::support_hi(int u_a) const {
    return c_.gamma_max / ((u_a - 1) * c_.gamma_min + 1.0);
}

AnalyticEngine::KState& AnalyticEngine::state(int u_a) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(u_a);
    if (it != cache_.end()) return *it->second;
    auto st = std::make_unique<KState>();
    st->interference = sinrstats::invert_cf(u_a, c_, opts_.cf);
    st->panels = sinrstats::detail::make_lambda_panels(st->interference,
                                                       opts_.lambda_quantiles);
    auto [pos, inserted] = cache_.emplace(u_a, std::move(st));
    return *pos->second;
}

double AnalyticEngine::error_prob_conditional(int u_a,
                                              const fbl::FblParams& p) const {
    if (u_a < 1)
        throw std::domain_error("error_prob_conditional: u_a must be >= 1");
    const double hi = support_hi(u_a);
    const double lo = support_lo(u_a);
    // The support bounds give monotone bounds on the expectation.
    const double eps_at_hi = fbl::error_prob_instant(hi, p);
    if (eps_at_hi > 1.0 - 1e-9) return 1.0;
    const double eps_at_lo = fbl::error_prob_instant(lo, p);
    if (eps_at_lo < 1e-12) return 0.0;

    if (u_a == 1) {
        double sum = 0.0;
        for (double g1 : gamma1_mids_) sum += fbl::error_prob_instant(g1, p);
        return sum / static_cast<double>(gamma1_mids_.size());
    }
    const auto& panels = state(u_a).panels;
    double sum = 0.0;
    for (double lam : panels.mids) {
        double inner = 0.0;
        for (double g1 : gamma1_mids_)
            inner += fbl::error_prob_instant(g1 / lam, p);
        sum += inner;
    }
    return sum / static_cast<double>(gamma1_mids_.size() *
                                     panels.mids.size());
}

double AnalyticEngine::outage_conditional(int u_a, double gamma_th) const {
    if (!(gamma_th > 0))
        throw std::domain_error("outage_conditional: gamma_th must be > 0");
    if (gamma_th <= support_lo(u_a)) return 0.0;
    if (gamma_th >= support_hi(u_a)) return 1.0;
    if (u_a == 1) return optics::snr_cdf(gamma_th, c_);
    const auto& panels = state(u_a).panels;
    double sum = 0.0;
    for (double lam : panels.mids)
        sum += optics::snr_cdf(gamma_th * lam, c_);
    return std::fmin(1.0, sum / static_cast<double>(panels.mids.size()));
}

double AnalyticEngine::error_prob_single_user(const fbl::FblParams& p) const {
    return num::integrate(
        [&](double g) {
            return fbl::error_prob_instant(g, p) * optics::snr_pdf(g, c_);
        },
        c_.gamma_min, c_.gamma_max, 1e-10);
}

ConditionalTable AnalyticEngine::conditional_table(const fbl::FblParams& p,
                                                   int kmax) const {
    p.validate();
    ConditionalTable t;
    t.kmax = std::min(kmax, opts_.u_a_cap);
    t.gamma_th = fbl::sinr_threshold(p);
    t.eps_k.resize(t.kmax);
    t.pout_k.resize(t.kmax);
    for (int k = 1; k <= t.kmax; ++k) {
        t.eps_k[k - 1] = error_prob_conditional(k, p);
        t.pout_k[k - 1] = outage_conditional(k, t.gamma_th);
    }
    t.eps_single = error_prob_single_user(p);
    t.pout_single = optics::snr_cdf(t.gamma_th, c_);
    return t;
}

protocol::MetricsReport assemble_metrics(const ConditionalTable& table,
                                         const protocol::ProtocolConfig& proto,
                                         const fbl::FblParams& p,
                                         double weight_cutoff) {
    proto.validate();
    protocol::MetricsReport r;

    if (!proto.capture) {
        const double p1 = protocol::active_prob(1, proto.U, proto.p_a);
        r.epsilon = table.eps_single * p1;
        r.p_out = table.pout_single * p1;
        r.throughput_raw = p.R * (p1 - r.epsilon);
        r.throughput = std::fmax(0.0, r.throughput_raw);
        r.reliability = protocol::reliability(r.p_out);
        r.per_k.push_back({1, p1, table.eps_single, table.pout_single});
        return r;
    }

    double eps = 0.0, pout = 0.0;
    for (int k = 1; k <= proto.U; ++k) {
        const double w = protocol::active_prob(k, proto.U, proto.p_a);
        if (w < weight_cutoff) continue;
        const int kk = std::min(k, table.kmax);
        eps += w * table.eps_k[kk - 1];
        pout += w * table.pout_k[kk - 1];
        r.per_k.push_back({k, w, table.eps_k[kk - 1], table.pout_k[kk - 1]});
    }
    r.epsilon = eps;
    r.p_out = std::fmin(1.0, pout);  // mixture roundoff can overshoot 1
    const double activity = 1.0 - std::pow(1.0 - proto.p_a, proto.U);
    r.throughput_raw = p.R * (activity - eps);
    r.throughput = std::fmax(0.0, r.throughput_raw);
    r.reliability = protocol::reliability(r.p_out);
    return r;
}

double AnalyticEngine::error_prob_unconditional(
    const protocol::ProtocolConfig& proto, const fbl::FblParams& p) const {
    proto.validate();
    p.validate();
    if (!proto.capture)
        return error_prob_single_user(p) *
               protocol::active_prob(1, proto.U, proto.p_a);
    double eps = 0.0;
    for (int k = 1; k <= proto.U; ++k) {
        const double w = protocol::active_prob(k, proto.U, proto.p_a);
        if (w < opts_.weight_cutoff) continue;
        eps += w * error_prob_conditional(std::min(k, opts_.u_a_cap), p);
    }
    return eps;
}

double AnalyticEngine::outage_unconditional(
    const protocol::ProtocolConfig& proto, double gamma_th) const {
    proto.validate();
    if (!proto.capture)
        return optics::snr_cdf(gamma_th, c_) *
               protocol::active_prob(1, proto.U, proto.p_a);
    double pout = 0.0;
    for (int k = 1; k <= proto.U; ++k) {
        const double w = protocol::active_prob(k, proto.U, proto.p_a);
        if (w < opts_.weight_cutoff) continue;
        pout += w * outage_conditional(std::min(k, opts_.u_a_cap), gamma_th);
    }
    return pout;
}

protocol::MetricsReport AnalyticEngine::metrics(
    const protocol::ProtocolConfig& proto, const fbl::FblParams& p) const {
    return assemble_metrics(conditional_table(p, proto.U), proto, p,
                            opts_.weight_cutoff);
}

const sinrstats::SinrDistribution& AnalyticEngine::sinr_distribution(
    int u_a) const {
    if (u_a < 1)
        throw std::domain_error("sinr_distribution: u_a must be >= 1");
    sinrstats::SinrDistributionOptions o;
    o.grid_points = opts_.sinr_grid_points;
    o.lambda_quantiles = opts_.lambda_quantiles;
    o.cf = opts_.cf;
    if (u_a == 1) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(1);
        if (it == cache_.end()) {
            auto st = std::make_unique<KState>();
            st->dist = std::make_unique<sinrstats::SinrDistribution>(
                sinrstats::make_sinr_distribution(1, c_, o));
            it = cache_.emplace(1, std::move(st)).first;
        } else if (!it->second->dist) {
            it->second->dist = std::make_unique<sinrstats::SinrDistribution>(
                sinrstats::make_sinr_distribution(1, c_, o));
        }
        return *it->second->dist;
    }
    KState& st = state(u_a);
    std::lock_guard<std::mutex> lock(mutex_);
    if (!st.dist)
        st.dist = std::make_unique<sinrstats::SinrDistribution>(
            sinrstats::make_sinr_distribution(st.interference, st.panels, c_,
                                              opts_.sinr_grid_points));
    return *st.dist;
}

const sinrstats::InterferenceDistribution& AnalyticEngine::interference(
    int u_a) const {
    if (u_a < 2)
        throw std::domain_error("interference: u_a must be >= 2");
    return state(u_a).interference;
}

double error_prob_conditional(const sinrstats::SinrDistribution& sinr,
                              const fbl::FblParams& p) {
    // 3-point Gauss per grid panel; the density is linear within a panel.
    static const double nodes[3] = {-0.7745966692414834, 0.0,
                                    0.7745966692414834};
    static const double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const auto& xs = sinr.sinr_grid;
    double sum = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double a = xs[i - 1], b = xs[i];
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        double panel = 0.0;
        for (int q = 0; q < 3; ++q) {
            const double x = c + h * nodes[q];
            panel += weights[q] * fbl::error_prob_instant(x, p) *
                     sinr.pdf_at(x);
        }
        sum += panel * h;
    }
    return std::fmin(1.0, std::fmax(0.0, sum));
}

double outage_conditional(const sinrstats::SinrDistribution& sinr,
                          double gamma_th) {
    if (!(gamma_th > 0))
        throw std::domain_error("outage_conditional: gamma_th must be > 0");
    return sinr.cdf_at(gamma_th);
}

} // namespace owcsa
