#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "owcsa/analytic.hpp"
#include "owcsa/config.hpp"
#include "owcsa/fbl.hpp"
#include "owcsa/protocol.hpp"

namespace owcsa::cli {

enum class RunMode { analytic, montecarlo, both };

struct SweepSpec {
    std::string param = "p_a";
    std::vector<double> values;  // ascending
};

struct ExperimentSpec {
    SystemConfig system;
    protocol::ProtocolConfig protocol;
    fbl::FblParams fbl;
    SweepSpec sweep;
    RunMode mode = RunMode::analytic;
    std::optional<std::uint64_t> seed;
    std::uint64_t n_slots = 1000000;
    int n_threads = 0;
    AnalyticOptions analysis;
    std::string output_path = "results.csv";

    void validate() const;
};

// Sweepable config fields. geometry_affecting marks parameters that change
// the derived constants (each sweep point then needs its own engine).
struct SweepParamInfo {
    const char* name;
    bool geometry_affecting;
    bool integer_valued;
};
const std::vector<SweepParamInfo>& sweep_params();

// Parse the key-value config text (INI-style sections, '#' comments).
// Unknown sections/keys and invariant violations raise ConfigError with the
// field path. `source` names the input in error messages.
ExperimentSpec parse_config(std::string_view text,
                            const std::string& source = "<config>");
ExperimentSpec load_config(const std::string& path);

struct ResultRow {
    std::string sweep_param;
    double sweep_value = 0.0;
    std::string mode;  // "analytic" | "mc"
    double epsilon = 0.0;
    double throughput = 0.0;
    double p_out = 0.0;
    double reliability = 0.0;
    std::optional<double> se_epsilon, se_throughput, se_p_out;
};

// Evaluate every sweep point in ascending order; in `both` mode the
// analytic row precedes the mc row of the same point. Geometry sweeps are
// dispatched to a worker pool; rows always come back in sweep order.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

// CSV with header sweep_param,sweep_value,mode,epsilon,throughput,p_out,
// reliability,se_epsilon,se_throughput,se_p_out; 12 significant digits;
// SE fields empty for analytic rows.
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::string format_csv(const std::vector<ResultRow>& rows);

// Figure presets: parameter sets as config documents, one run per curve.
// Parameters the source figures leave unstated are recorded as assumptions.
struct PresetRun {
    std::string label;
    std::string config_text;
};
struct Preset {
    std::string name;
    std::string description;
    std::vector<std::string> assumptions;
    std::vector<PresetRun> runs;
    bool emits_sinr_cdf = false;   // fig2: CDF grids instead of sweep rows
    std::vector<int> u_a_list;     // for emits_sinr_cdf
};
const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

struct PresetOverrides {
    std::optional<RunMode> mode;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> n_slots;
    std::optional<std::string> out_stem;
    int n_threads = 0;
};

// Run every curve of a preset; returns the paths written. Sweep presets
// write <stem>_<label>.csv; fig2 writes <stem>_ua<K>.csv files with
// "# sinr cdf_analytic cdf_mc" rows.
std::vector<std::string> run_preset(const Preset& preset,
                                    const PresetOverrides& overrides = {});

} // namespace owcsa::cli
