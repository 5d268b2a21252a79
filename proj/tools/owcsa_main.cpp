#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "owcsa/errors.hpp"
#include "owcsa/experiment.hpp"
#include "owcsa/montecarlo.hpp"
#include "owcsa/sinr_stats.hpp"

namespace {

using namespace owcsa;

int show_preset(const std::string& name) {
    const cli::Preset* p = cli::find_preset(name);
    if (!p) {
        std::cerr << "unknown preset '" << name << "'; available:";
        for (const auto& q : cli::presets()) std::cerr << ' ' << q.name;
        std::cerr << '\n';
        return 1;
    }
    std::cout << "preset " << p->name << ": " << p->description << "\n";
    if (!p->assumptions.empty()) {
        std::cout << "\nassumptions (parameters the source figure does not "
                     "state):\n";
        for (const auto& a : p->assumptions) std::cout << "  - " << a << "\n";
    }
    for (const auto& r : p->runs) {
        std::cout << "\n--- run " << r.label << " ---\n" << r.config_text;
    }
    return 0;
}

void dump_sinr_dist(const cli::ExperimentSpec& spec, int u_a,
                    const std::string& path) {
    AnalyticEngine engine(spec.system, spec.analysis);
    const auto& dist = engine.sinr_distribution(u_a);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("output: cannot open '" + path + "'");
    sinrstats::dump_distribution(out, dist.sinr_grid, dist.pdf_values);
}

void dump_samples(const cli::ExperimentSpec& spec, const std::string& path) {
    const auto c = optics::derive_constants(spec.system);
    mc::SimConfig sim;
    sim.n_slots = spec.n_slots;
    sim.seed = spec.seed.value_or(1);
    sim.n_threads = spec.n_threads;
    const auto slots = mc::simulate(sim, c, spec.protocol);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("output: cannot open '" + path + "'");
    out << "# u_a sinr (rng " << mc::kRngVersion << ")\n";
    char line[64];
    for (const auto& s : slots) {
        if (s.u_a == 0) continue;
        std::snprintf(line, sizeof(line), "%d %.12g\n", s.u_a, s.sinr);
        out << line;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"slotted-ALOHA capture analysis for an indoor optical "
                 "wireless cell"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand(
        "run", "evaluate a configuration or a figure preset");
    std::string config_path, preset_name, show_name, mode_str, out_path;
    std::string dump_dist_path, dump_samples_path;
    std::uint64_t seed = 0, mc_slots = 0;
    bool have_seed = false, validate_only = false;
    int dump_dist_ua = 0, n_threads = 0;

    run->add_option("config", config_path, "config file (key = value)");
    run->add_option("--preset", preset_name,
                    "figure preset name (fig2..fig9)");
    run->add_option("--mode", mode_str, "analytic | mc | both");
    run->add_option("--seed", seed, "Monte Carlo seed")
        ->each([&](const std::string&) { have_seed = true; });
    run->add_option("--out", out_path, "output CSV path (or preset stem)");
    run->add_option("--mc-slots", mc_slots, "override sim.n_slots");
    run->add_option("--threads", n_threads, "worker thread count");
    run->add_flag("--validate-only", validate_only,
                  "check the config and exit");
    run->add_option("--show-preset", show_name,
                    "print a preset definition and exit");
    run->add_option("--dump-dist-ua", dump_dist_ua,
                    "write the conditional SINR pdf for this U_a");
    run->add_option("--dump-dist-path", dump_dist_path,
                    "output path for --dump-dist-ua");
    run->add_option("--dump-samples", dump_samples_path,
                    "write (u_a, sinr) sample pairs from a Monte Carlo run");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!show_name.empty()) return show_preset(show_name);

        if (!preset_name.empty() && !config_path.empty()) {
            std::cerr << "config error: give either a config file or "
                         "--preset, not both\n";
            return 1;
        }

        std::optional<cli::RunMode> mode;
        if (!mode_str.empty()) {
            if (mode_str == "analytic") mode = cli::RunMode::analytic;
            else if (mode_str == "mc") mode = cli::RunMode::montecarlo;
            else if (mode_str == "both") mode = cli::RunMode::both;
            else throw ConfigError("run.mode: expected analytic, mc or both");
        }

        if (!preset_name.empty()) {
            const cli::Preset* p = cli::find_preset(preset_name);
            if (!p) {
                std::cerr << "unknown preset '" << preset_name
                          << "'; available:";
                for (const auto& q : cli::presets())
                    std::cerr << ' ' << q.name;
                std::cerr << '\n';
                return 1;
            }
            cli::PresetOverrides ov;
            ov.mode = mode;
            if (have_seed) ov.seed = seed;
            if (mc_slots > 0) ov.n_slots = mc_slots;
            if (!out_path.empty()) ov.out_stem = out_path;
            ov.n_threads = n_threads;
            const auto written = cli::run_preset(*p, ov);
            for (const auto& w : written) std::cout << w << '\n';
            return 0;
        }

        if (config_path.empty()) {
            std::cerr << "config error: a config file or --preset is "
                         "required\n";
            return 1;
        }
        cli::ExperimentSpec spec = cli::load_config(config_path);
        if (mode) spec.mode = *mode;
        if (have_seed) spec.seed = seed;
        if (mc_slots > 0) spec.n_slots = mc_slots;
        if (n_threads > 0) spec.n_threads = n_threads;
        if (!out_path.empty()) spec.output_path = out_path;
        if (spec.fbl.n < 100 && spec.fbl.allow_small_n)
            std::cerr << "warning: fbl.n = " << spec.fbl.n
                      << " < 100; the dropped O(log n / n) term is not "
                         "negligible at this block length\n";
        spec.validate();
        if (validate_only) {
            std::cout << "config ok: " << config_path << '\n';
            return 0;
        }

        if (dump_dist_ua > 0 || !dump_dist_path.empty()) {
            if (dump_dist_ua <= 0 || dump_dist_path.empty())
                throw ConfigError(
                    "--dump-dist-ua and --dump-dist-path go together");
            dump_sinr_dist(spec, dump_dist_ua, dump_dist_path);
            std::cout << dump_dist_path << '\n';
            return 0;
        }
        if (!dump_samples_path.empty()) {
            if (!spec.seed)
                throw ConfigError("sim.seed: required for --dump-samples");
            dump_samples(spec, dump_samples_path);
            std::cout << dump_samples_path << '\n';
            return 0;
        }

        const auto rows = cli::run_experiment(spec);
        cli::emit_csv(rows, spec.output_path);
        if (spec.mode != cli::RunMode::analytic)
            std::cerr << "rng: " << mc::kRngVersion << ", seed "
                      << *spec.seed << ", " << spec.n_slots
                      << " slots per point\n";
        std::cout << spec.output_path << '\n';
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
