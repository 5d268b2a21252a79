// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "owcsa/analytic.hpp"
#include "owcsa/montecarlo.hpp"
#include "owcsa/numerics.hpp"

using namespace owcsa;

namespace {

constexpr double kDeg = M_PI / 180.0;
int g_failures = 0;

void criterion(int index, const std::string& name,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] C%d %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", index,
                name.c_str(), secs, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

SystemConfig make_system(double phi_deg, double D, double L) {
    SystemConfig cfg;
    cfg.optics.Phi_half = phi_deg * kDeg;
    cfg.geometry.D = D;
    cfg.geometry.L = L;
    return cfg;
}

fbl::FblParams make_fbl(int n, double R, double eps_th = 1e-3) {
    fbl::FblParams p;
    p.n = n;
    p.R = R;
    p.eps_th = eps_th;
    p.allow_small_n = true;
    return p;
}

std::vector<double> pa_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 50; ++i) g.push_back(0.01 * i);
    return g;
}

// index of the throughput-maximizing grid point
std::size_t argmax_throughput(const ConditionalTable& table, int U,
                              const fbl::FblParams& p, bool capture = true) {
    protocol::ProtocolConfig proto;
    proto.U = U;
    proto.capture = capture;
    const auto grid = pa_grid();
    std::size_t best = 0;
    double best_t = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        proto.p_a = grid[i];
        const auto rep = assemble_metrics(table, proto, p);
        if (rep.throughput > best_t) {
            best_t = rep.throughput;
            best = i;
        }
    }
    return best;
}

} // namespace

int main() {
    const auto table_i = make_system(60.0, 4.0, 3.0);
    const auto op = make_fbl(64, 0.5);

    criterion(1, "conditional SINR CDFs match 1e6-sample Monte Carlo "
                 "(U_a in {2,4,8}, sup distance <= 0.01)",
              [&](std::string& detail) {
        const AnalyticEngine eng(table_i);
        protocol::ProtocolConfig proto;
        proto.U = 50;
        proto.p_a = 0.05;
        bool ok = true;
        char buf[160];
        for (int u_a : {2, 4, 8}) {
            const auto& dist = eng.sinr_distribution(u_a);
            mc::SimConfig sim;
            sim.n_slots = 1000000;
            sim.seed = 90210 + static_cast<std::uint64_t>(u_a);
            sim.condition_u_a = u_a;
            const auto slots = mc::simulate(sim, eng.constants(), proto);
            std::vector<double> sinr;
            sinr.reserve(slots.size());
            for (const auto& s : slots) sinr.push_back(s.sinr);
            const auto emp = mc::empirical_cdf(std::move(sinr), dist.sinr_grid);
            double sup = 0.0;
            for (std::size_t i = 0; i < emp.size(); ++i)
                sup = std::max(sup, std::fabs(emp[i] - dist.cdf_values[i]));
            std::snprintf(buf, sizeof(buf), "U_a=%d sup=%.2e ", u_a, sup);
            detail += buf;
            ok = ok && sup <= 0.01;
        }
        return ok;
    });

    criterion(2, "single-user SINR CDF equals the closed form "
                 "(1000-point grid, <= 1e-3)",
              [&](std::string& detail) {
        const AnalyticEngine eng(table_i);
        const auto& c = eng.constants();
        auto closed = [&](double g) {
            if (g < c.gamma_min) return 0.0;
            if (g >= c.gamma_max) return 1.0;
            return 1.0 +
                   (c.L * c.L - std::pow(c.mu_X2 / g, 1.0 / (c.m + 3.0))) /
                       (c.D * c.D);
        };
        double worst = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double g = 0.5 * c.gamma_min +
                             (1.1 * c.gamma_max - 0.5 * c.gamma_min) *
                                 (i / 1000.0);
            worst = std::max(worst,
                             std::fabs(sinrstats::sinr_cdf_conditional(
                                           g, 1, c, nullptr) -
                                       closed(g)));
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf), "sup=%.2e", worst);
        detail = buf;
        return worst <= 1e-3;
    });

    criterion(3, "U_a=3 interference density matches the direct "
                 "self-convolution (sup <= 5e-3 * max)",
              [&](std::string& detail) {
        const auto c = optics::derive_constants(table_i);
        const auto dist = sinrstats::invert_cf(3, c);
        auto conv = [&](double x) {
            const double lo = std::max(c.gamma_min, x - c.gamma_max);
            const double hi = std::min(c.gamma_max, x - c.gamma_min);
            if (lo >= hi) return 0.0;
            return num::integrate(
                [&](double u) {
                    return optics::snr_pdf(u, c) * optics::snr_pdf(x - u, c);
                },
                lo, hi, 1e-10);
        };
        double max_pdf = 0.0, sup = 0.0;
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i <= 600; ++i) {
            const double x = dist.support_lo +
                             (dist.support_hi - dist.support_lo) *
                                 (i / 600.0);
            const double h = conv(x);
            max_pdf = std::max(max_pdf, h);
            pts.emplace_back(x, h);
        }
        for (const auto& [x, h] : pts)
            sup = std::max(sup, std::fabs(dist.pdf_at(x) - h));
        char buf[96];
        std::snprintf(buf, sizeof(buf), "sup=%.2e bound=%.2e", sup,
                      5e-3 * max_pdf);
        detail = buf;
        return sup <= 5e-3 * max_pdf;
    });

    criterion(4, "analytic eps, T, P_out within 3 standard errors of "
                 "1e6-slot Monte Carlo (U=50, p_a=0.05, n=64, R=1/2)",
              [&](std::string& detail) {
        const AnalyticEngine eng(table_i);
        protocol::ProtocolConfig proto;
        proto.U = 50;
        proto.p_a = 0.05;
        const auto rep = eng.metrics(proto, op);

        mc::SimConfig sim;
        sim.n_slots = 1000000;
        sim.seed = 424242;
        const auto est = mc::estimate_metrics(
            mc::simulate(sim, eng.constants(), proto), op,
            fbl::sinr_threshold(op));

        char buf[240];
        std::snprintf(buf, sizeof(buf),
                      "eps %.5f vs %.5f (3se %.1e); T %.5f vs %.5f (3se "
                      "%.1e); Pout %.5f vs %.5f (3se %.1e)",
                      rep.epsilon, est.epsilon, 3 * est.se_epsilon,
                      rep.throughput, est.throughput, 3 * est.se_throughput,
                      rep.p_out, est.p_out, 3 * est.se_p_out);
        detail = buf;
        return std::fabs(rep.epsilon - est.epsilon) <= 3 * est.se_epsilon &&
               std::fabs(rep.throughput - est.throughput) <=
                   3 * est.se_throughput &&
               std::fabs(rep.p_out - est.p_out) <= 3 * est.se_p_out;
    });

    criterion(5, "outage saturates: P_out >= 0.99 for every p_a >= 0.35, "
                 "D in {2,4} m (n=64, R=1/2, eps_th=1e-3)",
              [&](std::string& detail) {
        bool ok = true;
        char buf[96];
        const double gamma_th = fbl::sinr_threshold(op);
        for (double D : {2.0, 4.0}) {
            const AnalyticEngine eng(make_system(60.0, D, 3.0));
            const auto table = eng.conditional_table(op, 50);
            protocol::ProtocolConfig proto;
            proto.U = 50;
            double worst = 1.0;
            for (double pa = 0.35; pa <= 0.5001; pa += 0.01) {
                proto.p_a = pa;
                worst = std::min(
                    worst, assemble_metrics(table, proto, op).p_out);
            }
            std::snprintf(buf, sizeof(buf), "D=%g min=%.5f (gth=%.3f) ", D,
                          worst, gamma_th);
            detail += buf;
            ok = ok && worst >= 0.99;
        }
        return ok;
    });

    criterion(6, "throughput shape: interior max; argmax invariant over "
                 "R in {1/3,1/2,2/3} and D in {2,3,4}; weakly decreasing in U",
              [&](std::string& detail) {
        const auto grid = pa_grid();
        char buf[96];

        // (b) invariance at U = 100 over the D x R matrix
        std::vector<std::size_t> argmaxes;
        for (double D : {2.0, 3.0, 4.0}) {
            const AnalyticEngine eng(make_system(60.0, D, 3.0));
            for (double R : {1.0 / 3.0, 0.5, 2.0 / 3.0}) {
                const auto p = make_fbl(64, R);
                const auto table = eng.conditional_table(p, 100);
                argmaxes.push_back(argmax_throughput(table, 100, p));
            }
        }
        const bool invariant = std::all_of(
            argmaxes.begin(), argmaxes.end(),
            [&](std::size_t i) { return i == argmaxes.front(); });
        const bool interior = argmaxes.front() > 0 &&
                              argmaxes.front() + 1 < grid.size();
        std::snprintf(buf, sizeof(buf), "argmax(U=100)=%.2f invariant=%d ",
                      grid[argmaxes.front()], invariant ? 1 : 0);
        detail += buf;

        // (c) weakly decreasing in U at D = 3, R = 1/2
        const AnalyticEngine eng3(make_system(60.0, 3.0, 3.0));
        const auto table3 = eng3.conditional_table(op, 80);
        bool decreasing = true, interior_c = true;
        std::size_t prev = grid.size();
        for (int U : {30, 50, 80}) {
            const std::size_t am = argmax_throughput(table3, U, op);
            std::snprintf(buf, sizeof(buf), "p*(U=%d)=%.2f ", U, grid[am]);
            detail += buf;
            decreasing = decreasing && am <= prev;
            interior_c = interior_c && am > 0 && am + 1 < grid.size();
            prev = am;
        }
        return interior && invariant && decreasing && interior_c;
    });

    criterion(7, "capture beats no-capture at 30 deg (strict at the "
                 "no-capture optimum); gap <= 5% at 60 deg",
              [&](std::string& detail) {
        const auto p9 = make_fbl(64, 2.0);
        const auto grid = pa_grid();
        char buf[128];
        bool ok = true;
        for (double phi : {30.0, 60.0}) {
            const AnalyticEngine eng(make_system(phi, 1.8, 3.8));
            const auto table = eng.conditional_table(p9, 50);
            protocol::ProtocolConfig proto;
            proto.U = 50;

            double min_gap = 1e9;
            std::size_t nc_best = 0;
            double nc_best_t = -1.0;
            std::vector<double> t_cap(grid.size()), t_nc(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                proto.p_a = grid[i];
                proto.capture = true;
                t_cap[i] = assemble_metrics(table, proto, p9).throughput;
                proto.capture = false;
                t_nc[i] = assemble_metrics(table, proto, p9).throughput;
                min_gap = std::min(min_gap, t_cap[i] - t_nc[i]);
                if (t_nc[i] > nc_best_t) {
                    nc_best_t = t_nc[i];
                    nc_best = i;
                }
            }
            const double gap_at_opt = t_cap[nc_best] - t_nc[nc_best];
            const double rel = gap_at_opt / t_nc[nc_best];
            std::snprintf(buf, sizeof(buf),
                          "phi=%g: min(Tc-Tnc)=%.1e, at nc-opt p*=%.2f "
                          "gap=%.4f (%.2f%%) ",
                          phi, min_gap, grid[nc_best], gap_at_opt,
                          100.0 * rel);
            detail += buf;
            ok = ok && min_gap >= -1e-12;
            if (phi == 30.0)
                ok = ok && gap_at_opt > 1e-3;
            else
                ok = ok && rel <= 0.05;
        }
        return ok;
    });

    criterion(8, "error probability flattens in L at D=1 m and the floor "
                 "is rate-independent (<= 1e-3)",
              [&](std::string& detail) {
        protocol::ProtocolConfig proto;
        proto.U = 50;
        proto.p_a = 0.05;
        std::vector<double> ls;
        for (double L = 1.0; L <= 20.001; L += 0.5) ls.push_back(L);

        std::vector<std::vector<double>> eps(2);
        const double rates[2] = {1.0 / 3.0, 0.5};
        for (int r = 0; r < 2; ++r) {
            const auto p = make_fbl(64, rates[r]);
            for (double L : ls) {
                const AnalyticEngine eng(make_system(60.0, 1.0, L));
                eps[r].push_back(eng.error_prob_unconditional(proto, p));
            }
        }

        // onset: first index from which every successive step is <= 1e-3
        auto onset_of = [&](const std::vector<double>& e) {
            std::size_t onset = e.size();
            for (std::size_t i = e.size() - 1; i-- > 0;) {
                if (std::fabs(e[i + 1] - e[i]) <= 1e-3)
                    onset = i;
                else
                    break;
            }
            return onset;
        };
        char buf[160];
        bool ok = true;
        for (int r = 0; r < 2; ++r) {
            const std::size_t onset = onset_of(eps[r]);
            ok = ok && onset + 4 < ls.size();  // floor reached well before
                                               // the grid end
            std::snprintf(buf, sizeof(buf), "R=%.3f onset L=%.1f floor=%.5f ",
                          rates[r], onset < ls.size() ? ls[onset] : -1.0,
                          eps[r].back());
            detail += buf;
        }
        const double floor_gap = std::fabs(eps[0].back() - eps[1].back());
        std::snprintf(buf, sizeof(buf), "floor gap=%.1e", floor_gap);
        detail += buf;
        return ok && floor_gap <= 1e-3;
    });

    criterion(9, "FBL numerics: Q/Q^-1 and threshold round trips <= 1e-9; "
                 "error probability monotone in gamma",
              [&](std::string& detail) {
        double worst_q = 0.0, worst_z = 0.0, worst_q_safe = 0.0;
        for (double z = -6.0; z <= 6.0; z += 0.25) {
            const double err = std::fabs(fbl::q_inv(fbl::q_func(z)) - z);
            if (err > worst_q) {
                worst_q = err;
                worst_z = z;
            }
            if (z >= -5.25) worst_q_safe = std::max(worst_q_safe, err);
        }

        double worst_th = 0.0;
        for (double eps : {1e-1, 1e-2, 1e-3}) {
            auto p = op;
            p.eps_th = eps;
            const double gth = fbl::sinr_threshold(p);
            worst_th = std::max(
                worst_th, std::fabs(fbl::error_prob_instant(gth, p) - eps));
        }

        bool monotone = true;
        for (int n : {64, 128, 256})
            for (double R : {1.0 / 3.0, 0.5, 2.0 / 3.0}) {
                const auto p = make_fbl(n, R);
                double prev = 1.0 + 1e-12;
                for (int i = 0; i <= 5000; ++i) {
                    const double g = 1e-3 * std::pow(1e9, i / 5000.0);
                    const double e = fbl::error_prob_instant(g, p);
                    monotone = monotone && e <= prev + 1e-12;
                    prev = e;
                }
            }
        char buf[260];
        std::snprintf(
            buf, sizeof(buf),
            "qinv roundtrip=%.1e at z=%.2f (double quantization of Q near 1 "
            "bounds any inverse by ulp(1)/phi(z)=%.1e there; on z >= -5.25 "
            "the round trip gives %.1e), threshold roundtrip=%.1e, "
            "monotone=%d",
            worst_q, worst_z,
            1.11e-16 * std::sqrt(2.0 * M_PI) * std::exp(0.5 * worst_z * worst_z),
            worst_q_safe, worst_th, monotone ? 1 : 0);
        detail = buf;
        return worst_q <= 1e-9 && worst_th <= 1e-9 && monotone;
    });

    if (g_failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    return g_failures;
}
