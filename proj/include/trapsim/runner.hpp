// Copyright 2026 The trapsim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trapsim/config.hpp"

namespace trapsim {

/// Everything derived from a config before any protocol runs.
struct Prepared {
    RunConfig cfg;
    DerivedTrap trap;
    ModeSpace modes;
    ThermalSpec thermal;
    QubitVibState initial;
    double flux_sigma = 0.0;
    RateMatrices rates;
    CapturedFraction fl_capture;
    CapturedFraction sc_capture;
    double carrier_offset = 0.0;
    std::optional<CarrierScanResult> carrier_scan;

    Prepared() = default;
    Prepared(const Prepared&) = delete;
    Prepared& operator=(const Prepared&) = delete;

    /// Settings for the standard pulse builders.
    PulseSettings pulse_settings() const
    {
        PulseSettings s;
        s.delta = cfg.protocol.delta_pulses;
        s.rabi = cfg.protocol.rabi;
        s.carrier_offset = carrier_offset;
        s.phase = cfg.protocol.phase;
        return s;
    }
};

inline std::unique_ptr<Prepared> prepare(const RunConfig& cfg)
{
    cfg.validate();
    auto p = std::make_unique<Prepared>();
    p->cfg = cfg;
    p->trap = derive_trap(cfg.constants, cfg.trap);
    p->modes = enumerate_modes(cfg.trap, p->trap, cfg.constants.kB);
    p->thermal = ThermalSpec::from_temperature(cfg.trap.temperature, cfg.constants.kB);
    p->initial = thermal_state(p->modes, p->thermal);
    p->flux_sigma = scattering_prefactor(cfg.constants, p->trap, cfg.scattering);

    std::vector<ChannelRates> chans;
    if (cfg.noise.enabled && cfg.noise.xi2() > 0)
        chans.push_back(fluct_rates(p->modes, cfg.noise));
    if (cfg.scattering.enabled && p->flux_sigma > 0)
        chans.push_back(scatter_rates(p->modes, cfg.scattering, p->flux_sigma, cfg.threads));
    for (const auto& ch : chans) {
        const auto f = captured_fraction(ch);
        (ch.channel == Channel::fluctuation ? p->fl_capture : p->sc_capture) = f;
    }
    if (cfg.closed_box)
        for (auto& ch : chans)
            ch = close_box(std::move(ch));
    p->rates = assemble_rates(std::move(chans), p->modes.size());

    const auto& pc = cfg.protocol;
    switch (pc.carrier) {
    case CarrierMode::thermal_mean:
        p->carrier_offset = thermal_mean_delta_omega(p->modes, p->thermal);
        break;
    case CarrierMode::ground: p->carrier_offset = p->modes.delta_omega_ground(); break;
    case CarrierMode::offset: p->carrier_offset = pc.carrier_offset; break;
    case CarrierMode::scan: {
        const double lo = pc.carrier_offset - 0.5 * pc.scan_span;
        const double hi = pc.carrier_offset + 0.5 * pc.scan_span;
        p->carrier_scan = scan_carrier(p->modes, p->initial, pc.rabi, lo, hi, pc.scan_steps);
        p->carrier_offset = p->carrier_scan->best_offset;
        break;
    }
    }
    return p;
}

/// Out-rates of the vibrational ground mode per channel. Out-rates do not
/// depend on the box, so a single-mode space suffices.
struct GroundRates {
    double fluctuation = 0.0;
    double scattering = 0.0;
};

inline GroundRates ground_rates(const RunConfig& cfg, const DerivedTrap& trap)
{
    GroundRates g;
    const ModeSpace one({1, 1, 1}, trap);
    g.fluctuation = fluct_rates(one, cfg.noise).gamma_out[0];
    ScatteringModel m = cfg.scattering;
    m.check_convergence = false;
    m.enabled = true;
    g.scattering = cfg.scattering.enabled
                       ? scatter_rates(one, m, scattering_prefactor(cfg.constants, trap, m)).gamma_out[0]
                       : 0.0;
    return g;
}

/// Builds the protocol for one gap value.
inline std::function<Protocol(double)> protocol_factory(const Prepared& p, const std::string& kind)
{
    const auto s = p.pulse_settings();
    const auto areas = p.cfg.protocol.ramsey_areas;
    if (kind == "ramsey")
        return [s, areas](double gap) { return make_ramsey(gap, s, areas[0], areas[1]); };
    if (kind == "echo")
        return [s](double gap) { return make_echo(gap, s); };
    throw ConfigError("no gap scan for protocol '" + kind + "'");
}

inline Protocol custom_protocol(const Prepared& p)
{
    const auto& pc = p.cfg.protocol;
    if (pc.events.empty())
        throw ConfigError("protocol.events is empty");
    Protocol out;
    out.name = "custom";
    double t = 0.0;
    for (const auto& e : pc.events) {
        if (e.is_pulse) {
            PulseSpec ps = e.duration > 0
                               ? PulseSpec::rectangular(e.area / e.duration, e.duration,
                                                        pc.phase + e.phase, p.carrier_offset, t)
                               : PulseSpec::delta(e.area, pc.phase + e.phase, p.carrier_offset, t);
            out.events.emplace_back(ps);
            t += e.duration;
        }
        else {
            out.events.emplace_back(FreeGap{e.duration, e.sample_every});
            t += e.duration;
        }
    }
    return out;
}

/// Continuous drive sampled at rabi_sample: row k is the state after a
/// rectangular pulse of length k * rabi_sample.
inline TimeSeries rabi_series(const Prepared& p)
{
    const auto& pc = p.cfg.protocol;
    TimeSeries ts;
    const auto n = static_cast<long long>(std::floor(pc.rabi_duration / pc.rabi_sample + 1e-9));
    for (long long k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * pc.rabi_sample;
        QubitVibState st = p.initial;
        if (t > 0)
            apply_pulse(st, p.modes, PulseSpec::rectangular(pc.rabi, t, pc.phase, p.carrier_offset, 0.0));
        ts.push(t, populations(st), coherence_magnitude(st, p.modes));
    }
    return ts;
}

inline std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

/// Runs one protocol kind (rabi | ramsey | echo | custom) and attaches the
/// run metadata.
inline TimeSeries simulate(const Prepared& p, const std::string& kind)
{
    const auto& pc = p.cfg.protocol;
    const MasterEquation eq(p.modes, p.rates);
    TimeSeries ts;
    std::string time_axis;
    if (kind == "rabi") {
        ts = rabi_series(p);
        time_axis = "drive_time";
    }
    else if (kind == "ramsey" || kind == "echo") {
        const auto gaps = pc.gaps();
        if (kind == "ramsey" && pc.trajectory_scan) {
            const auto s = p.pulse_settings();
            const auto proto = make_ramsey(0.0, s, pc.ramsey_areas[0], pc.ramsey_areas[1]);
            ts = scan_ramsey_trajectory(std::get<PulseSpec>(proto.events.front()),
                                        std::get<PulseSpec>(proto.events.back()), gaps, p.initial,
                                        eq, p.cfg.evolution);
        }
        else {
            ts = scan_gaps(protocol_factory(p, kind), gaps, p.initial, eq, p.cfg.evolution,
                           p.cfg.threads);
        }
        time_axis = kind == "echo" ? "gap_between_pulses" : "gap";
    }
    else if (kind == "custom") {
        ts = run_protocol(custom_protocol(p), p.initial, eq, p.cfg.evolution);
        time_axis = "absolute";
    }
    else {
        throw ConfigError("unknown protocol '" + kind + "'");
    }

    const auto& t = p.trap;
    ts.add_meta("protocol", kind);
    ts.add_meta("time_axis", time_axis);
    ts.add_meta("config_hash", config_hash(p.cfg));
    ts.add_meta("pulse_shape", pc.delta_pulses ? "delta" : "rect");
    if (kind == "ramsey")
        ts.add_meta("ramsey_areas_pi", fmt(pc.ramsey_areas[0] / pi) + "," + fmt(pc.ramsey_areas[1] / pi));
    ts.add_meta("carrier_mode", carrier_mode_name(pc.carrier));
    ts.add_meta("carrier_offset_rad_s", fmt(p.carrier_offset));
    if (kind == "ramsey" || kind == "echo")
        ts.add_meta("gap_step_s", fmt(pc.gap_step));
    ts.add_meta("depth_K", fmt(t.depth / p.cfg.constants.kB));
    if (p.cfg.depth_assumed)
        ts.add_meta("assumption", "trap depth not given; using |U0| = 300 uK");
    ts.add_meta("temperature_K", fmt(p.cfg.trap.temperature));
    ts.add_meta("s_diff", fmt(t.s_diff));
    ts.add_meta("levels", std::to_string(p.modes.levels(Axis::x)) + "x" +
                              std::to_string(p.modes.levels(Axis::y)) + "x" +
                              std::to_string(p.modes.levels(Axis::z)));
    ts.add_meta("captured_weight", fmt(p.initial.captured_weight));
    ts.add_meta("truncation_leakage", fmt(1.0 - p.initial.captured_weight));
    ts.add_meta("fl_captured_out_rate_min", fmt(p.fl_capture.min));
    ts.add_meta("sc_captured_out_rate_min", fmt(p.sc_capture.min));
    ts.add_meta("sc_captured_out_rate_mean", fmt(p.sc_capture.weighted_mean));
    ts.add_meta("boundary", p.cfg.closed_box ? "closed" : "open");
    ts.add_meta("flux_sigma0_per_s", fmt(p.flux_sigma));
    return ts;
}

// ---------------------------------------------------------------------------
// output

inline void write_svg(std::ostream& os, const TimeSeries& ts, const std::string& title)
{
    const double W = 640, H = 400, L = 60, R = 20, T = 30, B = 50;
    double t0 = ts.time.empty() ? 0.0 : ts.time.front();
    double t1 = ts.time.empty() ? 1.0 : ts.time.back();
    if (!(t1 > t0))
        t1 = t0 + 1.0;
    auto X = [&](double t) { return L + (t - t0) / (t1 - t0) * (W - L - R); };
    auto Y = [&](double y) { return T + (1.0 - std::clamp(y, 0.0, 1.0)) * (H - T - B); };
    auto line = [&](const std::vector<double>& y, double scale, const char* colour) {
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < y.size(); ++i)
            os << std::fixed << std::setprecision(2) << X(ts.time[i]) << ',' << Y(scale * y[i]) << ' ';
        os << "\"/>\n";
    };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
       << "</text>\n"
       << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double y = k / 4.0;
        os << "<text x=\"" << L - 8 << "\" y=\"" << Y(y) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
           << std::setprecision(2) << std::defaultfloat << y << "</text>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        const double t = t0 + (t1 - t0) * k / 4.0;
        os << "<text x=\"" << X(t) << "\" y=\"" << H - B + 16
           << "\" text-anchor=\"middle\" font-size=\"11\">" << std::setprecision(3)
           << std::defaultfloat << t * 1e3 << "</text>\n";
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\" font-size=\"12\">time (ms)</text>\n";
    line(ts.p_a, 1.0, "#1f77b4");
    line(ts.coh_aggregate, 2.0, "#d62728");
    os << "<text x=\"" << W - R - 150 << "\" y=\"" << T + 14
       << "\" font-size=\"11\" fill=\"#1f77b4\">P_a</text>\n"
       << "<text x=\"" << W - R - 150 << "\" y=\"" << T + 28
       << "\" font-size=\"11\" fill=\"#d62728\">2 |coherence|</text>\n"
       << "</svg>\n";
}

/// Output directory: explicit flag, then SIM_OUT_DIR, then the config.
inline std::filesystem::path resolve_out_dir(const RunConfig& cfg, const std::string& flag)
{
    if (!flag.empty())
        return flag;
    if (const char* env = std::getenv("SIM_OUT_DIR"); env && *env)
        return env;
    return cfg.output.dir;
}

inline void write_run_csv(std::ostream& os, const TimeSeries& ts, const RunConfig& cfg)
{
    TimeSeries copy = ts;
    std::istringstream lines(serialize_config(cfg));
    for (std::string line; std::getline(lines, line);)
        if (!line.empty())
            copy.add_meta("config", line);
    copy.write_csv(os);
}

/// Recovers the embedded config from a run CSV.
inline std::string embedded_config(std::istream& is)
{
    std::string out, line;
    while (std::getline(is, line)) {
        if (line.rfind("# config=", 0) == 0)
            out += line.substr(9) + '\n';
    }
    return out;
}

struct RunResult {
    TimeSeries series;
    double halftime = 0.0;
    std::filesystem::path csv;
};

inline RunResult run_and_write(const Prepared& p, const std::string& kind,
                               const std::filesystem::path& dir, const std::string& stem)
{
    RunResult r;
    r.series = simulate(p, kind);
    r.halftime = kind == "rabi" ? std::numeric_limits<double>::infinity()
                                : coherence_halftime(r.series);
    std::filesystem::create_directories(dir);
    r.csv = dir / (stem + ".csv");
    {
        std::ofstream f(r.csv, std::ios::binary);
        write_run_csv(f, r.series, p.cfg);
        if (!f)
            throw std::runtime_error("cannot write " + r.csv.string());
    }
    if (p.cfg.output.plot) {
        std::ofstream f(dir / (stem + ".svg"), std::ios::binary);
        write_svg(f, r.series, p.cfg.output.prefix + " " + kind);
    }
    if (p.cfg.output.state_csv) {
        std::ofstream f(dir / (stem + "_initial_state.csv"), std::ios::binary);
        write_state_csv(f, p.initial, p.modes);
    }
    if (p.cfg.output.rates_csv) {
        std::ofstream f(dir / (stem + "_rates.csv"), std::ios::binary);
        write_rates_csv(f, p.rates);
    }
    if (p.cfg.output.json) {
        nlohmann::ordered_json j;
        j["protocol"] = kind;
        j["config_hash"] = config_hash(p.cfg);
        j["config"] = serialize_config(p.cfg);
        nlohmann::ordered_json meta;
        for (const auto& [k, v] : r.series.metadata)
            meta[k] = v;
        j["metadata"] = meta;
        j["halftime_s"] = std::isinf(r.halftime) ? nlohmann::ordered_json("inf")
                                                 : nlohmann::ordered_json(r.halftime);
        j["samples"] = r.series.size();
        std::ofstream f(dir / (stem + ".json"), std::ios::binary);
        f << j.dump(2) << '\n';
    }
    return r;
}

// ---------------------------------------------------------------------------
// subcommands

struct ConstantsReport {
    double gamma0 = 0, sigma0 = 0, flux = 0, flux_sigma = 0, s_diff = 0, dw0 = 0;
    AxisArray eta{}, omega_a{}, omega_b{}, x_zpf{};
    double detuning = 0, d0 = 0, gamma_nat = 0, identity_rel_err = 0;
    GroundRates ground;
    double ground_overlap = 0;
};

inline ConstantsReport compute_constants(const RunConfig& cfg)
{
    cfg.validate();
    const auto& k = cfg.constants;
    const auto t = derive_trap(k, cfg.trap);
    ConstantsReport r;
    r.gamma0 = gamma0(k);
    r.sigma0 = total_cross_section(t.omega_L, t.omega_0, t.d0, k.hbar, k.c);
    r.flux = photon_flux_from_depth(t.depth, t.detuning, t.d0, t.omega_L, k.hbar, k.c);
    r.flux_sigma = r.sigma0 * r.flux;
    r.s_diff = t.s_diff;
    r.dw0 = delta_omega_v({0, 0, 0}, t);
    r.eta = t.eta;
    r.omega_a = t.omega_a;
    r.omega_b = t.omega_b;
    r.x_zpf = t.x_zpf;
    r.detuning = t.detuning;
    r.d0 = t.d0;
    r.gamma_nat = gamma_nat(k, t.omega_L);
    const double lhs = r.flux_sigma * k.hbar * std::abs(t.detuning) / t.depth;
    r.identity_rel_err = std::abs(lhs - r.gamma_nat) / r.gamma_nat;
    r.ground = ground_rates(cfg, t);
    r.ground_overlap = mode_overlap_diagnostic({0, 0, 0}, t);
    return r;
}

inline nlohmann::ordered_json constants_json(const RunConfig& cfg, const ConstantsReport& r)
{
    nlohmann::ordered_json j;
    auto q = [](double v, const char* unit) {
        return nlohmann::ordered_json{{"value", v}, {"unit", unit}};
    };
    j["config_hash"] = config_hash(cfg);
    j["depth_assumed"] = cfg.depth_assumed;
    j["gamma0"] = q(r.gamma0, "Hz");
    j["sigma0"] = q(r.sigma0, "m^2");
    j["photon_flux"] = q(r.flux, "1/(m^2 s)");
    j["flux_sigma0"] = q(r.flux_sigma, "1/s");
    j["gamma_nat_at_omega_L"] = q(r.gamma_nat, "1/s");
    j["identity_rel_err"] = q(r.identity_rel_err, "1");
    j["s_diff"] = q(r.s_diff, "1");
    j["detuning"] = q(r.detuning, "rad/s");
    j["d0"] = q(r.d0, "C m");
    j["delta_omega_0"] = q(r.dw0, "rad/s");
    j["delta_omega_0_Hz"] = q(r.dw0 / two_pi, "Hz");
    for (int a = 0; a < 3; ++a) {
        const std::string n = axis_name(static_cast<Axis>(a));
        j["eta_" + n] = q(r.eta[a], "1");
        j["x_zpf_" + n] = q(r.x_zpf[a], "m");
        j["omega_a_" + n] = q(r.omega_a[a], "rad/s");
        j["omega_b_" + n] = q(r.omega_b[a], "rad/s");
    }
    j["gamma_000_fl"] = q(r.ground.fluctuation, "1/s");
    j["gamma_000_sc"] = q(r.ground.scattering, "1/s");
    j["ground_mode_overlap"] = q(r.ground_overlap, "1");
    return j;
}

inline void cmd_constants(const RunConfig& cfg, std::ostream& out, const std::filesystem::path& dir)
{
    const auto r = compute_constants(cfg);
    auto row = [&](const std::string& name, double v, const std::string& unit) {
        out << std::left << std::setw(26) << name << std::right << std::setw(24)
            << std::setprecision(10) << v << "  " << unit << '\n';
    };
    out << "# config_hash=" << config_hash(cfg) << '\n';
    if (cfg.depth_assumed)
        out << "# assumption: trap depth not given; using |U0| = 300 uK\n";
    row("Gamma0", r.gamma0, "Hz");
    row("sigma0", r.sigma0, "m^2");
    row("photon flux", r.flux, "1/(m^2 s)");
    row("flux * sigma0", r.flux_sigma, "1/s");
    row("Gamma_nat(omega_L)", r.gamma_nat, "1/s");
    row("identity rel. error", r.identity_rel_err, "");
    row("s_diff", r.s_diff, "");
    row("detuning", r.detuning, "rad/s");
    row("d0", r.d0, "C m");
    row("delta_omega_0", r.dw0, "rad/s");
    row("delta_omega_0 / 2pi", r.dw0 / two_pi, "Hz");
    for (int a = 0; a < 3; ++a) {
        const std::string n = axis_name(static_cast<Axis>(a));
        row("eta_" + n, r.eta[a], "");
        row("x_zpf_" + n, r.x_zpf[a], "m");
        row("omega_a_" + n + " / 2pi", r.omega_a[a] / two_pi, "Hz");
        row("omega_b_" + n + " / 2pi", r.omega_b[a] / two_pi, "Hz");
    }
    row("Gamma_000 (fl)", r.ground.fluctuation, "1/s");
    row("Gamma_000 (sc)", r.ground.scattering, "1/s");
    row("ground overlap <b|a>", r.ground_overlap, "");
    std::filesystem::create_directories(dir);
    std::ofstream f(dir / (cfg.output.prefix + "_constants.json"), std::ios::binary);
    f << constants_json(cfg, r).dump(2) << '\n';
}

inline RunResult cmd_run(const RunConfig& cfg, const std::string& kind,
                         const std::filesystem::path& dir)
{
    const auto p = prepare(cfg);
    return run_and_write(*p, kind, dir, cfg.output.prefix + "_" + kind);
}

/// Config for one sweep point. Depths and temperatures in uK, carrier
/// offsets in kHz.
inline RunConfig sweep_variant(const RunConfig& cfg, const std::string& axis, double value)
{
    RunConfig out = cfg;
    if (axis == "depth") {
        if (!(value > 0))
            throw ConfigError("sweep depth values must be positive");
        out.trap = cfg.trap.with_depth(value * units::microkelvin * cfg.constants.kB);
        out.depth_assumed = false;
    }
    else if (axis == "temperature") {
        if (!(value >= 0))
            throw ConfigError("sweep temperatures must be >= 0");
        out.trap.temperature = value * units::microkelvin;
    }
    else if (axis == "carrier") {
        out.protocol.carrier = CarrierMode::offset;
        out.protocol.carrier_offset = detail::kHz(value);
    }
    else {
        throw ConfigError("sweep axis must be depth, temperature or carrier");
    }
    out.validate();
    return out;
}

struct SweepRow {
    double value = 0.0;
    double halftime = 0.0;
    double final_pa = 0.0;
    double gamma000_fl = 0.0;
    double gamma000_sc = 0.0;
    double captured_weight = 0.0;
    std::size_t modes = 0;
    std::filesystem::path csv;
};

inline std::vector<SweepRow> cmd_sweep(const RunConfig& cfg, const std::string& axis,
                                       const std::vector<double>& values,
                                       const std::filesystem::path& dir, std::ostream* log = nullptr)
{
    if (values.empty())
        throw ConfigError("sweep needs at least one value");
    const std::string kind = cfg.sweep.protocol;
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto vcfg = sweep_variant(cfg, axis, values[i]);
        const auto p = prepare(vcfg);
        std::ostringstream stem;
        stem << cfg.output.prefix << "_" << kind << "_" << axis << "_" << i;
        const auto r = run_and_write(*p, kind, dir, stem.str());
        SweepRow row;
        row.value = values[i];
        row.halftime = r.halftime;
        row.final_pa = r.series.p_a.empty() ? 0.0 : r.series.p_a.back();
        const auto g = ground_rates(vcfg, p->trap);
        row.gamma000_fl = g.fluctuation;
        row.gamma000_sc = g.scattering;
        row.captured_weight = p->initial.captured_weight;
        row.modes = p->modes.size();
        row.csv = r.csv;
        rows.push_back(row);
        if (log)
            *log << axis << " = " << values[i] << ": halftime " << row.halftime << " s\n";
    }
    std::ofstream f(dir / (cfg.output.prefix + "_sweep_" + axis + ".csv"), std::ios::binary);
    f.precision(17);
    f << "# config_hash=" << config_hash(cfg) << "\n# protocol=" << kind << "\n";
    f << "value,halftime_s,final_P_a,gamma000_fl,gamma000_sc,captured_weight,modes,csv\n";
    for (const auto& r : rows)
        f << r.value << ',' << r.halftime << ',' << r.final_pa << ',' << r.gamma000_fl << ','
          << r.gamma000_sc << ',' << r.captured_weight << ',' << r.modes << ','
          << r.csv.filename().string() << '\n';
    return rows;
}

} // namespace trapsim
