#include "owcsa/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "owcsa/errors.hpp"

namespace owcsa::mc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

SlotRng::SlotRng(std::uint64_t seed, std::uint64_t slot_index)
    : state_(mix64(seed ^ (kGolden * (slot_index + 1)))) {}

double SlotRng::uniform() {
    state_ += kGolden;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

void SimConfig::validate() const {
    if (n_slots < 1) throw ConfigError("sim.n_slots: must be >= 1");
    if (condition_u_a && *condition_u_a < 1)
        throw ConfigError("sim.condition_u_a: must be >= 1 when set");
}

std::optional<SlotSample> simulate_slot(std::uint64_t seed,
                                        std::uint64_t slot_index,
                                        const optics::DerivedConstants& c,
                                        const protocol::ProtocolConfig& proto,
                                        std::optional<int> condition_u_a) {
    SlotRng rng(seed, slot_index);

    int u_a = 0;
    if (condition_u_a) {
        u_a = *condition_u_a;
    } else {
        for (int u = 0; u < proto.U; ++u)
            if (rng.uniform() < proto.p_a) ++u_a;
    }
    if (u_a == 0) return std::nullopt;

    double gamma_sum = 0.0;
    double gammas_small[8];
    std::vector<double> gammas_big;
    double* gammas = gammas_small;
    if (u_a > 8) {
        gammas_big.resize(u_a);
        gammas = gammas_big.data();
    }
    for (int i = 0; i < u_a; ++i) {
        const double r = optics::sample_radius(rng.uniform(), c.D);
        const double h = optics::channel_gain(r, c);
        gammas[i] = c.mu * h * h;
        gamma_sum += gammas[i];
    }
    int ref = static_cast<int>(rng.uniform() * u_a);
    if (ref >= u_a) ref = u_a - 1;

    SlotSample s;
    s.u_a = u_a;
    s.reference_gamma = gammas[ref];
    s.interference_sum = gamma_sum - gammas[ref];
    s.sinr = s.reference_gamma / (s.interference_sum + 1.0);
    return s;
}

std::vector<SlotSample> simulate(const SimConfig& cfg,
                                 const optics::DerivedConstants& c,
                                 const protocol::ProtocolConfig& proto) {
    cfg.validate();
    proto.validate();

    std::vector<SlotSample> out(cfg.n_slots);
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned n_threads = cfg.n_threads > 0
                             ? static_cast<unsigned>(cfg.n_threads)
                             : std::min(hw, 16u);
    if (cfg.n_slots < 4096) n_threads = 1;

    auto worker = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            auto s = simulate_slot(cfg.seed, i, c, proto, cfg.condition_u_a);
            if (s) out[i] = *s;
        }
    };
    if (n_threads == 1) {
        worker(0, cfg.n_slots);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        const std::uint64_t chunk = (cfg.n_slots + n_threads - 1) / n_threads;
        for (unsigned t = 0; t < n_threads; ++t) {
            const std::uint64_t lo = t * chunk;
            const std::uint64_t hi = std::min<std::uint64_t>(lo + chunk,
                                                             cfg.n_slots);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

std::vector<double> empirical_cdf(std::vector<double> samples,
                                  const std::vector<double>& grid) {
    if (samples.empty())
        throw std::invalid_argument("empirical_cdf: no samples");
    std::sort(samples.begin(), samples.end());
    std::vector<double> out(grid.size());
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto it =
            std::upper_bound(samples.begin(), samples.end(), grid[i]);
        out[i] = static_cast<double>(it - samples.begin()) / n;
    }
    return out;
}

MetricsEstimate estimate_metrics(const std::vector<SlotSample>& slots,
                                 const fbl::FblParams& params,
                                 double gamma_th) {
    if (slots.empty())
        throw std::invalid_argument("estimate_metrics: no slots");

    // Sequential reduction in slot order keeps the result independent of
    // how the simulation was threaded.
    double se = 0.0, se2 = 0.0;   // per-slot error contribution
    double st = 0.0, st2 = 0.0;   // per-slot throughput contribution
    double so = 0.0;              // outage indicator (so2 == so)
    double sa = 0.0;              // activity indicator
    for (const auto& s : slots) {
        if (s.u_a >= 1) {
            const double e = fbl::error_prob_instant(s.sinr, params);
            const double t = params.R * (1.0 - e);
            se += e;
            se2 += e * e;
            st += t;
            st2 += t * t;
            if (s.sinr < gamma_th) so += 1.0;
            sa += 1.0;
        }
    }
    const double n = static_cast<double>(slots.size());
    auto se_of_mean = [n](double sum, double sumsq) {
        const double mean = sum / n;
        const double var = std::fmax(0.0, sumsq / n - mean * mean);
        return std::sqrt(var / n);
    };

    MetricsEstimate m;
    m.n_slots = slots.size();
    m.activity_freq = sa / n;
    m.epsilon = se / n;
    m.se_epsilon = se_of_mean(se, se2);
    m.throughput = st / n;
    m.se_throughput = se_of_mean(st, st2);
    m.p_out = so / n;
    m.se_p_out = se_of_mean(so, so);  // indicator: sum of squares == sum
    return m;
}

} // namespace owcsa::mc
