#include "owcsa/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "owcsa/errors.hpp"
#include "owcsa/montecarlo.hpp"

namespace owcsa::cli {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

double parse_double(const std::string& v, const std::string& path) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(path + ": not a number: '" + v + "'");
    return x;
}

std::int64_t parse_int(const std::string& v, const std::string& path) {
    const double x = parse_double(v, path);
    const double r = std::round(x);
    if (std::fabs(x - r) > 1e-9)
        throw ConfigError(path + ": expected an integer, got '" + v + "'");
    return static_cast<std::int64_t>(r);
}

bool parse_bool(const std::string& v, const std::string& path) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(path + ": expected true/false, got '" + v + "'");
}

struct SweepRange {
    bool has_range = false;
    double min = 0.0, max = 0.0, step = 0.0;
    std::vector<double> values;
};

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += v[i];
    }
    return out;
}

} // namespace

const std::vector<SweepParamInfo>& sweep_params() {
    static const std::vector<SweepParamInfo> params = {
        {"p_a", false, false},        {"U", false, true},
        {"n", false, true},           {"R", false, false},
        {"eps_th", false, false},     {"D_m", true, false},
        {"L_m", true, false},         {"Phi_half_deg", true, false},
        {"Psi_deg", true, false},     {"P_t_mW", true, false},
        {"A_r_cm2", true, false},     {"R_r_A_per_W", true, false},
        {"T_s", true, false},         {"zeta", true, false},
        {"eta", true, false},         {"N0_W_per_Hz", true, false},
        {"B_kHz", true, false},
    };
    return params;
}

namespace {

const SweepParamInfo& sweep_param_info(const std::string& name) {
    for (const auto& p : sweep_params())
        if (name == p.name) return p;
    std::vector<std::string> names;
    for (const auto& p : sweep_params()) names.emplace_back(p.name);
    throw ConfigError("sweep.param: unknown field '" + name +
                      "'; valid fields: " + join(names));
}

void apply_sweep_value(ExperimentSpec& spec, const std::string& param,
                       double v) {
    if (param == "p_a") spec.protocol.p_a = v;
    else if (param == "U") spec.protocol.U = static_cast<int>(std::llround(v));
    else if (param == "n") spec.fbl.n = static_cast<int>(std::llround(v));
    else if (param == "R") spec.fbl.R = v;
    else if (param == "eps_th") spec.fbl.eps_th = v;
    else if (param == "D_m") spec.system.geometry.D = v;
    else if (param == "L_m") spec.system.geometry.L = v;
    else if (param == "Phi_half_deg") spec.system.optics.Phi_half = v * kDegToRad;
    else if (param == "Psi_deg") spec.system.optics.Psi = v * kDegToRad;
    else if (param == "P_t_mW") spec.system.optics.P_t = v * 1e-3;
    else if (param == "A_r_cm2") spec.system.optics.A_r = v * 1e-4;
    else if (param == "R_r_A_per_W") spec.system.optics.R_r = v;
    else if (param == "T_s") spec.system.optics.T_s = v;
    else if (param == "zeta") spec.system.optics.zeta = v;
    else if (param == "eta") spec.system.optics.eta = v;
    else if (param == "N0_W_per_Hz") spec.system.optics.N0 = v;
    else if (param == "B_kHz") spec.system.optics.B = v * 1e3;
    else sweep_param_info(param);  // throws with the valid-name list
}

} // namespace

void ExperimentSpec::validate() const {
    system.validate();
    protocol.validate();
    fbl.validate();
    const auto& info = sweep_param_info(sweep.param);
    if (sweep.values.empty())
        throw ConfigError("sweep: no values to evaluate");
    if (!std::is_sorted(sweep.values.begin(), sweep.values.end()))
        throw ConfigError("sweep: values must be ascending");
    if (info.integer_valued)
        for (double v : sweep.values)
            if (std::fabs(v - std::round(v)) > 1e-9)
                throw ConfigError("sweep: parameter '" + sweep.param +
                                  "' takes integer values");
    ExperimentSpec probe = *this;
    probe.sweep.values.clear();  // avoid recursion
    for (double v : sweep.values) {
        apply_sweep_value(probe, sweep.param, v);
        probe.system.validate();
        probe.protocol.validate();
        probe.fbl.validate();
    }
    if (mode == RunMode::analytic && seed)
        throw ConfigError(
            "sim.seed: not used in analytic mode; remove it or set run.mode "
            "to mc or both");
    if (mode != RunMode::analytic && !seed)
        throw ConfigError("sim.seed: required when run.mode is mc or both");
    if (n_slots < 1) throw ConfigError("sim.n_slots: must be >= 1");
}

ExperimentSpec parse_config(std::string_view text, const std::string& source) {
    ExperimentSpec spec;
    SweepRange sweep;
    bool has_sweep_section = false;

    static const std::map<std::string, std::vector<std::string>> valid_keys = {
        {"optics",
         {"P_t_mW", "eta", "A_r_cm2", "R_r_A_per_W", "T_s", "zeta", "Psi_deg",
          "Phi_half_deg", "N0_W_per_Hz", "B_kHz"}},
        {"geometry", {"D_m", "L_m"}},
        {"protocol", {"U", "p_a", "capture"}},
        {"fbl", {"n", "R", "dispersion", "eps_th", "allow_small_n"}},
        {"sweep", {"param", "min", "max", "step", "values"}},
        {"run", {"mode", "out"}},
        {"sim", {"n_slots", "seed", "n_threads"}},
        {"analysis", {"u_a_cap"}},
    };

    std::string section;
    std::size_t lineno = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string line = trim(raw);
        if (line.empty()) continue;
        const std::string where =
            source + ":" + std::to_string(lineno);

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(where + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (valid_keys.find(section) == valid_keys.end()) {
                std::vector<std::string> names;
                for (const auto& [k, v] : valid_keys) names.push_back(k);
                throw ConfigError(where + ": unknown section [" + section +
                                  "]; valid sections: " + join(names));
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError(where + ": key '" + key +
                              "' outside any [section]");
        const auto& keys = valid_keys.at(section);
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError(where + ": unknown key '" + section + "." + key +
                              "'; valid keys: " + join(keys));
        const std::string path = section + "." + key;

        if (section == "optics") {
            auto& o = spec.system.optics;
            if (key == "P_t_mW") o.P_t = parse_double(value, path) * 1e-3;
            else if (key == "eta") o.eta = parse_double(value, path);
            else if (key == "A_r_cm2") o.A_r = parse_double(value, path) * 1e-4;
            else if (key == "R_r_A_per_W") o.R_r = parse_double(value, path);
            else if (key == "T_s") o.T_s = parse_double(value, path);
            else if (key == "zeta") o.zeta = parse_double(value, path);
            else if (key == "Psi_deg") o.Psi = parse_double(value, path) * kDegToRad;
            else if (key == "Phi_half_deg")
                o.Phi_half = parse_double(value, path) * kDegToRad;
            else if (key == "N0_W_per_Hz") o.N0 = parse_double(value, path);
            else if (key == "B_kHz") o.B = parse_double(value, path) * 1e3;
        } else if (section == "geometry") {
            if (key == "D_m") spec.system.geometry.D = parse_double(value, path);
            else spec.system.geometry.L = parse_double(value, path);
        } else if (section == "protocol") {
            if (key == "U")
                spec.protocol.U = static_cast<int>(parse_int(value, path));
            else if (key == "p_a") spec.protocol.p_a = parse_double(value, path);
            else spec.protocol.capture = parse_bool(value, path);
        } else if (section == "fbl") {
            if (key == "n") spec.fbl.n = static_cast<int>(parse_int(value, path));
            else if (key == "R") spec.fbl.R = parse_double(value, path);
            else if (key == "eps_th") spec.fbl.eps_th = parse_double(value, path);
            else if (key == "allow_small_n")
                spec.fbl.allow_small_n = parse_bool(value, path);
            else {
                if (value == "nearest_neighbor")
                    spec.fbl.dispersion = fbl::DispersionKind::nearest_neighbor;
                else if (value == "awgn")
                    spec.fbl.dispersion = fbl::DispersionKind::awgn;
                else if (value == "awgn_as_printed")
                    spec.fbl.dispersion = fbl::DispersionKind::awgn_as_printed;
                else
                    throw ConfigError(path +
                                      ": expected nearest_neighbor, awgn or "
                                      "awgn_as_printed, got '" + value + "'");
            }
        } else if (section == "sweep") {
            has_sweep_section = true;
            if (key == "param") {
                sweep_param_info(value);  // validates, lists names on error
                spec.sweep.param = value;
            } else if (key == "min") { sweep.min = parse_double(value, path); sweep.has_range = true; }
            else if (key == "max") { sweep.max = parse_double(value, path); sweep.has_range = true; }
            else if (key == "step") { sweep.step = parse_double(value, path); sweep.has_range = true; }
            else {
                std::istringstream vs(value);
                double v;
                while (vs >> v) sweep.values.push_back(v);
                if (sweep.values.empty())
                    throw ConfigError(path + ": empty value list");
            }
        } else if (section == "run") {
            if (key == "mode") {
                if (value == "analytic") spec.mode = RunMode::analytic;
                else if (value == "mc") spec.mode = RunMode::montecarlo;
                else if (value == "both") spec.mode = RunMode::both;
                else
                    throw ConfigError(path +
                                      ": expected analytic, mc or both, got '" +
                                      value + "'");
            } else {
                spec.output_path = value;
            }
        } else if (section == "sim") {
            if (key == "n_slots")
                spec.n_slots = static_cast<std::uint64_t>(parse_int(value, path));
            else if (key == "seed")
                spec.seed = static_cast<std::uint64_t>(parse_int(value, path));
            else spec.n_threads = static_cast<int>(parse_int(value, path));
        } else if (section == "analysis") {
            spec.analysis.u_a_cap = static_cast<int>(parse_int(value, path));
        }
    }

    if (has_sweep_section) {
        if (!sweep.values.empty() && sweep.has_range)
            throw ConfigError("sweep: give either min/max/step or values, "
                              "not both");
        if (!sweep.values.empty()) {
            spec.sweep.values = sweep.values;
            std::sort(spec.sweep.values.begin(), spec.sweep.values.end());
        } else {
            if (!(sweep.step > 0))
                throw ConfigError("sweep.step: must be > 0");
            if (sweep.max < sweep.min)
                throw ConfigError("sweep.max: must be >= sweep.min");
            const auto count = static_cast<std::size_t>(
                std::floor((sweep.max - sweep.min) / sweep.step + 1.5));
            for (std::size_t i = 0; i < count; ++i) {
                const double v = sweep.min + static_cast<double>(i) * sweep.step;
                if (v > sweep.max + 1e-9 * sweep.step) break;
                spec.sweep.values.push_back(v);
            }
        }
    } else {
        // no sweep: evaluate the base configuration as a single point
        spec.sweep.param = "p_a";
        spec.sweep.values = {spec.protocol.p_a};
    }

    spec.validate();
    return spec;
}

ExperimentSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

namespace {

ResultRow analytic_row(const ExperimentSpec& point,
                       const ConditionalTable& table,
                       const std::string& param, double value) {
    const auto rep =
        assemble_metrics(table, point.protocol, point.fbl,
                         point.analysis.weight_cutoff);
    ResultRow row;
    row.sweep_param = param;
    row.sweep_value = value;
    row.mode = "analytic";
    row.epsilon = rep.epsilon;
    row.throughput = rep.throughput;
    row.p_out = std::fmin(1.0, rep.p_out);
    row.reliability = rep.reliability;
    return row;
}

ResultRow mc_row(const ExperimentSpec& point, std::uint64_t point_seed,
                 const std::string& param, double value) {
    const auto c = optics::derive_constants(point.system);
    mc::SimConfig sim;
    sim.n_slots = point.n_slots;
    sim.seed = point_seed;
    sim.n_threads = point.n_threads;
    const auto slots = mc::simulate(sim, c, point.protocol);
    const double gamma_th = fbl::sinr_threshold(point.fbl);
    auto est = mc::estimate_metrics(slots, point.fbl, gamma_th);

    ResultRow row;
    row.sweep_param = param;
    row.sweep_value = value;
    row.mode = "mc";
    row.epsilon = est.epsilon;
    row.throughput = est.throughput;
    row.p_out = est.p_out;
    row.reliability = 1.0 - est.p_out;
    row.se_epsilon = est.se_epsilon;
    row.se_throughput = est.se_throughput;
    row.se_p_out = est.se_p_out;
    return row;
}

// Per-point MC seeds are derived from (base seed, point index) so that
// sweep points use independent, reproducible streams.
std::uint64_t point_seed(std::uint64_t base, std::size_t index) {
    return base ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1));
}

} // namespace

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const auto& info = sweep_param_info(spec.sweep.param);
    const std::size_t npoints = spec.sweep.values.size();
    const bool want_analytic = spec.mode != RunMode::montecarlo;
    const bool want_mc = spec.mode != RunMode::analytic;

    std::vector<ResultRow> analytic_rows(want_analytic ? npoints : 0);
    std::vector<ResultRow> mc_rows(want_mc ? npoints : 0);

    auto point_spec = [&](std::size_t i) {
        ExperimentSpec p = spec;
        apply_sweep_value(p, spec.sweep.param, spec.sweep.values[i]);
        return p;
    };

    if (want_analytic) {
        if (info.geometry_affecting) {
            // each point has its own constants: dispatch to a pool,
            // results land at their index
            unsigned hw = std::thread::hardware_concurrency();
            if (hw == 0) hw = 1;
            unsigned n_threads = spec.n_threads > 0
                                     ? static_cast<unsigned>(spec.n_threads)
                                     : std::min(hw, 8u);
            n_threads = std::min<unsigned>(n_threads,
                                           static_cast<unsigned>(npoints));
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(n_threads);
            for (unsigned t = 0; t < n_threads; ++t) {
                pool.emplace_back([&, t]() {
                    try {
                        for (;;) {
                            const std::size_t i = next.fetch_add(1);
                            if (i >= npoints) break;
                            ExperimentSpec p = point_spec(i);
                            AnalyticEngine eng(p.system, p.analysis);
                            const auto table = eng.conditional_table(
                                p.fbl, std::min(p.protocol.U,
                                                p.analysis.u_a_cap));
                            analytic_rows[i] = analytic_row(
                                p, table, spec.sweep.param,
                                spec.sweep.values[i]);
                        }
                    } catch (...) {
                        errors[t] = std::current_exception();
                    }
                });
            }
            for (auto& th : pool) th.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
        } else {
            AnalyticEngine eng(spec.system, spec.analysis);
            const bool fbl_varies = spec.sweep.param == "n" ||
                                    spec.sweep.param == "R" ||
                                    spec.sweep.param == "eps_th";
            int max_u = spec.protocol.U;
            if (spec.sweep.param == "U")
                max_u = static_cast<int>(std::llround(spec.sweep.values.back()));
            ConditionalTable shared;
            if (!fbl_varies)
                shared = eng.conditional_table(
                    spec.fbl, std::min(max_u, spec.analysis.u_a_cap));
            for (std::size_t i = 0; i < npoints; ++i) {
                ExperimentSpec p = point_spec(i);
                const ConditionalTable& table =
                    fbl_varies ? (shared = eng.conditional_table(
                                      p.fbl, std::min(p.protocol.U,
                                                      p.analysis.u_a_cap)))
                               : shared;
                analytic_rows[i] = analytic_row(p, table, spec.sweep.param,
                                                spec.sweep.values[i]);
            }
        }
    }

    if (want_mc) {
        for (std::size_t i = 0; i < npoints; ++i) {
            ExperimentSpec p = point_spec(i);
            mc_rows[i] = mc_row(p, point_seed(*spec.seed, i),
                                spec.sweep.param, spec.sweep.values[i]);
        }
    }

    std::vector<ResultRow> rows;
    rows.reserve(analytic_rows.size() + mc_rows.size());
    for (std::size_t i = 0; i < npoints; ++i) {
        if (want_analytic) rows.push_back(std::move(analytic_rows[i]));
        if (want_mc) rows.push_back(std::move(mc_rows[i]));
    }
    return rows;
}

namespace {

void append_field(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out += buf;
}

void append_opt(std::string& out, const std::optional<double>& v) {
    out += ',';
    if (v) append_field(out, *v);
}

} // namespace

std::string format_csv(const std::vector<ResultRow>& rows) {
    std::string out =
        "sweep_param,sweep_value,mode,epsilon,throughput,p_out,reliability,"
        "se_epsilon,se_throughput,se_p_out\n";
    for (const auto& r : rows) {
        out += r.sweep_param;
        out += ',';
        append_field(out, r.sweep_value);
        out += ',';
        out += r.mode;
        out += ',';
        append_field(out, r.epsilon);
        out += ',';
        append_field(out, r.throughput);
        out += ',';
        append_field(out, r.p_out);
        out += ',';
        append_field(out, r.reliability);
        append_opt(out, r.se_epsilon);
        append_opt(out, r.se_throughput);
        append_opt(out, r.se_p_out);
        out += '\n';
    }
    return out;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    if (rows.empty()) throw ConfigError("emit_csv: no rows to write");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("output: cannot open '" + path + "'");
    out << format_csv(rows);
    if (!out) throw ConfigError("output: write failed for '" + path + "'");
}

} // namespace owcsa::cli
