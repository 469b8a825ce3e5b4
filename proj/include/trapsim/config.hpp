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

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <toml.hpp>

#include "trapsim/evolution.hpp"

namespace trapsim {

enum class CarrierMode { thermal_mean, ground, scan, offset };

inline const char* carrier_mode_name(CarrierMode m)
{
    switch (m) {
    case CarrierMode::thermal_mean: return "thermal_mean";
    case CarrierMode::ground: return "ground";
    case CarrierMode::scan: return "scan";
    default: return "offset";
    }
}

/// One entry of a user-defined event list.
struct CustomEvent {
    bool is_pulse = true;
    double area = 0.0;         // rad
    double phase = 0.0;        // rad
    double duration = 0.0;     // s; 0 for delta pulses
    double sample_every = 0.0; // s, gaps only
};

struct ProtocolConfig {
    bool delta_pulses = true;
    double rabi = two_pi * 1.5e3;
    CarrierMode carrier = CarrierMode::thermal_mean;
    double carrier_offset = 0.0; // rad/s, used by CarrierMode::offset
    double scan_span = two_pi * 2e3;
    int scan_steps = 81;
    double phase = 0.0;
    std::array<double, 2> ramsey_areas{1.5 * pi, 0.5 * pi};
    double gap_start = 0.0;
    double gap_stop = 10e-3;
    double gap_step = 50e-6;
    bool trajectory_scan = false;
    double rabi_duration = 2e-3;
    double rabi_sample = 10e-6;
    std::vector<CustomEvent> events;

    std::vector<double> gaps() const
    {
        std::vector<double> out;
        const auto n = static_cast<long long>(std::floor((gap_stop - gap_start) / gap_step + 1e-9));
        for (long long k = 0; k <= n; ++k)
            out.push_back(gap_start + static_cast<double>(k) * gap_step);
        return out;
    }

    void validate() const
    {
        if (!(rabi > 0))
            throw ConfigError("protocol.rabi_kHz must be positive");
        if (!(scan_span >= 0) || scan_steps < 1)
            throw ConfigError("carrier scan needs span >= 0 and at least one step");
        if (!(gap_start >= 0) || !(gap_stop >= gap_start) || !(gap_step > 0))
            throw ConfigError("gap grid needs 0 <= gap_start <= gap_stop and gap_step > 0");
        if ((gap_stop - gap_start) / gap_step > 1e7)
            throw ConfigError("gap grid has more than 1e7 points");
        if (!(rabi_duration > 0) || !(rabi_sample > 0))
            throw ConfigError("rabi_duration_us and rabi_sample_us must be positive");
        if (trajectory_scan && !delta_pulses)
            throw ConfigError("trajectory scans need delta pulses");
    }
};

struct OutputConfig {
    std::string dir = "out";
    std::string prefix = "run";
    bool plot = false;
    bool state_csv = false;
    bool rates_csv = false;
    bool json = true;
};

struct SweepConfig {
    std::string axis = "depth";
    std::vector<double> values; // uK for depth/temperature, kHz for carrier
    std::string protocol = "ramsey";
};

struct RunConfig {
    PhysicalConstants constants;
    TrapConfig trap;
    /// true when the trap depth was not given and the default was used
    bool depth_assumed = true;
    NoiseModel noise;
    ScatteringModel scattering;
    ProtocolConfig protocol;
    StepControl evolution;
    /// renormalize out-rates to the in-box destinations
    bool closed_box = false;
    unsigned threads = 1;
    OutputConfig output;
    SweepConfig sweep;

    void validate() const
    {
        constants.validate();
        trap.validate();
        noise.validate();
        scattering.validate();
        protocol.validate();
        evolution.validate();
        if (threads == 0 || threads > 1024)
            throw ConfigError("evolution.threads must lie in [1, 1024]");
        if (output.prefix.empty())
            throw ConfigError("output.prefix must not be empty");
        static const std::set<std::string> axes{"depth", "temperature", "carrier"};
        if (!axes.count(sweep.axis))
            throw ConfigError("sweep.axis must be depth, temperature or carrier");
        if (sweep.protocol != "ramsey" && sweep.protocol != "echo" && sweep.protocol != "rabi")
            throw ConfigError("sweep.protocol must be ramsey, echo or rabi");
    }
};

namespace detail {

/// Reads typed keys from one TOML table and rejects anything it did not read.
class TableReader {
public:
    TableReader(const toml::table* t, std::string name) : t_(t), name_(std::move(name)) {}

    std::optional<double> number(const std::string& key)
    {
        const toml::node* n = get(key);
        if (!n)
            return std::nullopt;
        if (auto v = n->value<double>(); v && (n->is_floating_point() || n->is_integer()))
            return *v;
        throw ConfigError(where(key) + " must be a number");
    }

    std::optional<long long> integer(const std::string& key)
    {
        const toml::node* n = get(key);
        if (!n)
            return std::nullopt;
        if (n->is_integer())
            return n->value<long long>();
        if (n->is_floating_point()) {
            const double d = *n->value<double>();
            if (d == std::floor(d) && std::abs(d) < 9e15)
                return static_cast<long long>(d);
        }
        throw ConfigError(where(key) + " must be an integer");
    }

    std::optional<bool> boolean(const std::string& key)
    {
        const toml::node* n = get(key);
        if (!n)
            return std::nullopt;
        if (!n->is_boolean())
            throw ConfigError(where(key) + " must be true or false");
        return n->value<bool>();
    }

    std::optional<std::string> string(const std::string& key)
    {
        const toml::node* n = get(key);
        if (!n)
            return std::nullopt;
        if (!n->is_string())
            throw ConfigError(where(key) + " must be a string");
        return n->value<std::string>();
    }

    std::optional<std::vector<double>> numbers(const std::string& key)
    {
        const toml::node* n = get(key);
        if (!n)
            return std::nullopt;
        const auto* arr = n->as_array();
        if (!arr)
            throw ConfigError(where(key) + " must be an array of numbers");
        std::vector<double> out;
        for (const auto& e : *arr) {
            if (!(e.is_integer() || e.is_floating_point()))
                throw ConfigError(where(key) + " must be an array of numbers");
            out.push_back(*e.value<double>());
        }
        return out;
    }

    const toml::array* array(const std::string& key)
    {
        const toml::node* n = get(key);
        if (!n)
            return nullptr;
        if (!n->is_array())
            throw ConfigError(where(key) + " must be an array");
        return n->as_array();
    }

    void finish() const
    {
        if (!t_)
            return;
        for (const auto& [k, v] : *t_) {
            const std::string key(k.str());
            if (!used_.count(key))
                throw ConfigError("unknown key '" + key + "' in [" + name_ + "]");
        }
    }

    std::string where(const std::string& key) const { return name_ + "." + key; }

private:
    const toml::node* get(const std::string& key)
    {
        used_.insert(key);
        if (!t_)
            return nullptr;
        return t_->get(key);
    }

    const toml::table* t_;
    std::string name_;
    std::set<std::string> used_;
};

inline double kHz(double f) { return two_pi * 1e3 * f; }
inline double to_kHz(double w) { return w / (two_pi * 1e3); }

inline CarrierMode parse_carrier(const std::string& s)
{
    if (s == "thermal_mean")
        return CarrierMode::thermal_mean;
    if (s == "ground")
        return CarrierMode::ground;
    if (s == "scan")
        return CarrierMode::scan;
    if (s == "offset")
        return CarrierMode::offset;
    throw ConfigError("protocol.carrier must be thermal_mean, ground, scan or offset");
}

} // namespace detail

/// Parses a TOML document. Units at the boundary: uK for depths and
/// temperatures, kHz for (ordinary, not angular) frequencies, nm and um for
/// lengths, us for times, pulse areas and phases in units of pi.
inline RunConfig parse_config(const std::string& text, const std::string& source = "<config>")
{
    toml::table root;
    try {
        root = toml::parse(text, source);
    }
    catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << "cannot parse " << source << ": " << e.description() << " (line "
            << e.source().begin.line << ")";
        throw ConfigError(msg.str());
    }
    static const std::set<std::string> blocks{"constants", "trap",     "noise",  "scattering",
                                              "protocol",  "evolution", "output", "sweep"};
    for (const auto& [k, v] : root) {
        if (!blocks.count(std::string(k.str())))
            throw ConfigError("unknown block [" + std::string(k.str()) + "]");
        if (!v.is_table())
            throw ConfigError("[" + std::string(k.str()) + "] must be a table");
    }
    auto table = [&](const char* name) { return root[name].as_table(); };

    RunConfig cfg;
    const double kB = [&] {
        detail::TableReader r(table("constants"), "constants");
        auto& k = cfg.constants;
        if (auto v = r.number("hbar")) k.hbar = *v;
        if (auto v = r.number("c")) k.c = *v;
        if (auto v = r.number("kB")) k.kB = *v;
        if (auto v = r.number("muB")) k.muB = *v;
        if (auto v = r.number("g_electron")) k.g_electron = *v;
        if (auto v = r.number("atom_mass_kg")) k.atom_mass = *v;
        if (auto v = r.number("nuclear_spin")) k.nuclear_spin = *v;
        if (auto v = r.number("hyperfine_kHz")) k.omega_hpf = detail::kHz(*v);
        if (auto v = r.number("d1_kHz")) k.omega_D1 = detail::kHz(*v);
        if (auto v = r.number("d2_kHz")) k.omega_D2 = detail::kHz(*v);
        if (auto v = r.number("gamma_d2_per_s")) k.gamma_D2 = *v;
        r.finish();
        return k.kB;
    }();

    {
        detail::TableReader r(table("trap"), "trap");
        auto& t = cfg.trap;
        if (auto v = r.number("depth_uK")) {
            t.depth = *v * units::microkelvin * kB;
            cfg.depth_assumed = false;
        }
        else {
            t.depth = 300.0 * units::microkelvin * kB;
        }
        if (auto v = r.number("waist_um")) t.waist = *v * units::micrometer;
        if (auto v = r.number("wavelength_nm")) t.wavelength = *v * units::nanometer;
        if (auto v = r.number("omega_perp_kHz")) t.omega_perp = detail::kHz(*v);
        if (auto v = r.number("omega_par_kHz")) t.omega_par = detail::kHz(*v);
        if (auto v = r.number("temperature_uK")) t.temperature = *v * units::microkelvin;
        if (auto v = r.numbers("vmax")) {
            if (v->size() != 3)
                throw ConfigError("trap.vmax needs three entries");
            Mode m{};
            for (int i = 0; i < 3; ++i) {
                if ((*v)[i] != std::floor((*v)[i]))
                    throw ConfigError("trap.vmax entries must be integers");
                m[i] = static_cast<int>((*v)[i]);
            }
            t.vmax = m;
        }
        if (auto v = r.number("occupancy_eps")) t.occupancy_eps = *v;
        if (auto v = r.number("s_diff")) t.s_diff = *v;
        if (auto v = r.numbers("eta")) {
            if (v->size() != 3)
                throw ConfigError("trap.eta needs three entries");
            t.eta = AxisArray{(*v)[0], (*v)[1], (*v)[2]};
        }
        if (auto v = r.number("min_detuning_ratio")) t.min_detuning_ratio = *v;
        if (auto v = r.integer("max_modes")) {
            if (*v <= 0)
                throw ConfigError("trap.max_modes must be positive");
            t.max_modes = static_cast<std::size_t>(*v);
        }
        r.finish();
        if (!t.vmax && !t.occupancy_eps)
            t.occupancy_eps = 1e-3;
    }

    {
        detail::TableReader r(table("noise"), "noise");
        if (auto v = r.boolean("enabled")) cfg.noise.enabled = *v;
        if (auto v = r.number("rin_psd")) cfg.noise.rin_psd = *v;
        if (auto v = r.string("psd_convention")) {
            if (*v == "two_sided")
                cfg.noise.convention = PsdConvention::two_sided;
            else if (*v == "one_sided")
                cfg.noise.convention = PsdConvention::one_sided;
            else
                throw ConfigError("noise.psd_convention must be two_sided or one_sided");
        }
        r.finish();
    }

    {
        detail::TableReader r(table("scattering"), "scattering");
        auto& s = cfg.scattering;
        if (auto v = r.boolean("enabled")) s.enabled = *v;
        if (auto v = r.number("sigma0_m2")) s.sigma0 = *v;
        if (auto v = r.number("photon_flux")) s.photon_flux = *v;
        if (auto v = r.integer("n_theta")) s.n_theta = static_cast<int>(*v);
        if (auto v = r.integer("n_phi")) s.n_phi = static_cast<int>(*v);
        if (auto v = r.integer("dv_max")) s.dv_max = static_cast<int>(*v);
        if (auto v = r.boolean("check_convergence")) s.check_convergence = *v;
        if (auto v = r.number("convergence_tol")) s.convergence_tol = *v;
        r.finish();
    }

    {
        detail::TableReader r(table("protocol"), "protocol");
        auto& p = cfg.protocol;
        if (auto v = r.string("pulse_shape")) {
            if (*v == "delta")
                p.delta_pulses = true;
            else if (*v == "rect")
                p.delta_pulses = false;
            else
                throw ConfigError("protocol.pulse_shape must be delta or rect");
        }
        if (auto v = r.number("rabi_kHz")) p.rabi = detail::kHz(*v);
        if (auto v = r.string("carrier")) p.carrier = detail::parse_carrier(*v);
        if (auto v = r.number("carrier_offset_kHz")) p.carrier_offset = detail::kHz(*v);
        if (auto v = r.number("scan_span_kHz")) p.scan_span = detail::kHz(*v);
        if (auto v = r.integer("scan_steps")) p.scan_steps = static_cast<int>(*v);
        if (auto v = r.number("phase_pi")) p.phase = *v * pi;
        if (auto v = r.numbers("ramsey_areas_pi")) {
            if (v->size() != 2)
                throw ConfigError("protocol.ramsey_areas_pi needs two entries");
            p.ramsey_areas = {(*v)[0] * pi, (*v)[1] * pi};
        }
        if (auto v = r.number("gap_start_us")) p.gap_start = *v * units::microsecond;
        if (auto v = r.number("gap_stop_us")) p.gap_stop = *v * units::microsecond;
        if (auto v = r.number("gap_step_us")) p.gap_step = *v * units::microsecond;
        if (auto v = r.string("scan_mode")) {
            if (*v == "rerun")
                p.trajectory_scan = false;
            else if (*v == "trajectory")
                p.trajectory_scan = true;
            else
                throw ConfigError("protocol.scan_mode must be rerun or trajectory");
        }
        if (auto v = r.number("rabi_duration_us")) p.rabi_duration = *v * units::microsecond;
        if (auto v = r.number("rabi_sample_us")) p.rabi_sample = *v * units::microsecond;
        if (const auto* arr = r.array("events")) {
            int idx = 0;
            for (const auto& e : *arr) {
                const auto* et = e.as_table();
                if (!et)
                    throw ConfigError("protocol.events entries must be tables");
                detail::TableReader er(et, "protocol.events[" + std::to_string(idx++) + "]");
                CustomEvent ev;
                const auto type = er.string("type").value_or("");
                if (type == "pulse") {
                    ev.is_pulse = true;
                    ev.area = er.number("area_pi").value_or(0.0) * pi;
                    ev.phase = er.number("phase_pi").value_or(0.0) * pi;
                    ev.duration = er.number("duration_us").value_or(0.0) * units::microsecond;
                }
                else if (type == "gap") {
                    ev.is_pulse = false;
                    ev.duration = er.number("duration_us").value_or(0.0) * units::microsecond;
                    ev.sample_every = er.number("sample_us").value_or(0.0) * units::microsecond;
                }
                else {
                    throw ConfigError(er.where("type") + " must be pulse or gap");
                }
                er.finish();
                p.events.push_back(ev);
            }
        }
        r.finish();
    }

    {
        detail::TableReader r(table("evolution"), "evolution");
        if (auto v = r.number("step_fraction")) cfg.evolution.step_fraction = *v;
        if (auto v = r.integer("max_steps")) {
            if (*v <= 0)
                throw ConfigError("evolution.max_steps must be positive");
            cfg.evolution.max_steps = static_cast<std::size_t>(*v);
        }
        if (auto v = r.string("boundary")) {
            if (*v == "open")
                cfg.closed_box = false;
            else if (*v == "closed")
                cfg.closed_box = true;
            else
                throw ConfigError("evolution.boundary must be open or closed");
        }
        if (auto v = r.integer("threads")) {
            if (*v < 1)
                throw ConfigError("evolution.threads must be >= 1");
            cfg.threads = static_cast<unsigned>(*v);
        }
        r.finish();
    }

    {
        detail::TableReader r(table("output"), "output");
        auto& o = cfg.output;
        if (auto v = r.string("dir")) o.dir = *v;
        if (auto v = r.string("prefix")) o.prefix = *v;
        if (auto v = r.boolean("plot")) o.plot = *v;
        if (auto v = r.boolean("state_csv")) o.state_csv = *v;
        if (auto v = r.boolean("rates_csv")) o.rates_csv = *v;
        if (auto v = r.boolean("json")) o.json = *v;
        r.finish();
    }

    {
        detail::TableReader r(table("sweep"), "sweep");
        if (auto v = r.string("axis")) cfg.sweep.axis = *v;
        if (auto v = r.numbers("values")) cfg.sweep.values = *v;
        if (auto v = r.string("protocol")) cfg.sweep.protocol = *v;
        r.finish();
    }

    cfg.validate();
    return cfg;
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

namespace detail {

inline std::string num(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    std::string s = os.str();
    // keep TOML floats recognisable as floats
    if (s.find_first_of(".eEn") == std::string::npos)
        s += ".0";
    return s;
}

inline std::string quoted(const std::string& s)
{
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\')
            out += '\\';
        out += ch;
    }
    return out + '"';
}

} // namespace detail

/// Fully resolved config as TOML, in the same units the parser accepts. The
/// output re-parses to an equivalent RunConfig.
inline std::string serialize_config(const RunConfig& cfg)
{
    using detail::num;
    std::ostringstream os;
    const auto& k = cfg.constants;
    os << "[constants]\n"
       << "hbar = " << num(k.hbar) << "\n"
       << "c = " << num(k.c) << "\n"
       << "kB = " << num(k.kB) << "\n"
       << "muB = " << num(k.muB) << "\n"
       << "g_electron = " << num(k.g_electron) << "\n"
       << "atom_mass_kg = " << num(k.atom_mass) << "\n"
       << "nuclear_spin = " << num(k.nuclear_spin) << "\n"
       << "hyperfine_kHz = " << num(detail::to_kHz(k.omega_hpf)) << "\n"
       << "d1_kHz = " << num(detail::to_kHz(k.omega_D1)) << "\n"
       << "d2_kHz = " << num(detail::to_kHz(k.omega_D2)) << "\n"
       << "gamma_d2_per_s = " << num(k.gamma_D2) << "\n";

    const auto& t = cfg.trap;
    os << "\n[trap]\n";
    if (!cfg.depth_assumed)
        os << "depth_uK = " << num(t.depth / (units::microkelvin * k.kB)) << "\n";
    os << "waist_um = " << num(t.waist / units::micrometer) << "\n"
       << "wavelength_nm = " << num(t.wavelength / units::nanometer) << "\n";
    if (t.omega_perp)
        os << "omega_perp_kHz = " << num(detail::to_kHz(*t.omega_perp)) << "\n"
           << "omega_par_kHz = " << num(detail::to_kHz(*t.omega_par)) << "\n";
    os << "temperature_uK = " << num(t.temperature / units::microkelvin) << "\n";
    if (t.vmax)
        os << "vmax = [" << (*t.vmax)[0] << ", " << (*t.vmax)[1] << ", " << (*t.vmax)[2] << "]\n";
    if (t.occupancy_eps)
        os << "occupancy_eps = " << num(*t.occupancy_eps) << "\n";
    if (t.s_diff)
        os << "s_diff = " << num(*t.s_diff) << "\n";
    if (t.eta)
        os << "eta = [" << num((*t.eta)[0]) << ", " << num((*t.eta)[1]) << ", " << num((*t.eta)[2])
           << "]\n";
    os << "min_detuning_ratio = " << num(t.min_detuning_ratio) << "\n"
       << "max_modes = " << t.max_modes << "\n";

    os << "\n[noise]\n"
       << "enabled = " << (cfg.noise.enabled ? "true" : "false") << "\n"
       << "rin_psd = " << num(cfg.noise.rin_psd) << "\n"
       << "psd_convention = "
       << (cfg.noise.convention == PsdConvention::two_sided ? "\"two_sided\"" : "\"one_sided\"")
       << "\n";

    const auto& s = cfg.scattering;
    os << "\n[scattering]\n"
       << "enabled = " << (s.enabled ? "true" : "false") << "\n";
    if (s.sigma0)
        os << "sigma0_m2 = " << num(*s.sigma0) << "\n";
    if (s.photon_flux)
        os << "photon_flux = " << num(*s.photon_flux) << "\n";
    os << "n_theta = " << s.n_theta << "\n"
       << "n_phi = " << s.n_phi << "\n"
       << "dv_max = " << s.dv_max << "\n"
       << "check_convergence = " << (s.check_convergence ? "true" : "false") << "\n"
       << "convergence_tol = " << num(s.convergence_tol) << "\n";

    const auto& p = cfg.protocol;
    os << "\n[protocol]\n"
       << "pulse_shape = " << (p.delta_pulses ? "\"delta\"" : "\"rect\"") << "\n"
       << "rabi_kHz = " << num(detail::to_kHz(p.rabi)) << "\n"
       << "carrier = \"" << carrier_mode_name(p.carrier) << "\"\n"
       << "carrier_offset_kHz = " << num(detail::to_kHz(p.carrier_offset)) << "\n"
       << "scan_span_kHz = " << num(detail::to_kHz(p.scan_span)) << "\n"
       << "scan_steps = " << p.scan_steps << "\n"
       << "phase_pi = " << num(p.phase / pi) << "\n"
       << "ramsey_areas_pi = [" << num(p.ramsey_areas[0] / pi) << ", "
       << num(p.ramsey_areas[1] / pi) << "]\n"
       << "gap_start_us = " << num(p.gap_start / units::microsecond) << "\n"
       << "gap_stop_us = " << num(p.gap_stop / units::microsecond) << "\n"
       << "gap_step_us = " << num(p.gap_step / units::microsecond) << "\n"
       << "scan_mode = " << (p.trajectory_scan ? "\"trajectory\"" : "\"rerun\"") << "\n"
       << "rabi_duration_us = " << num(p.rabi_duration / units::microsecond) << "\n"
       << "rabi_sample_us = " << num(p.rabi_sample / units::microsecond) << "\n";
    if (!p.events.empty()) {
        os << "events = [\n";
        for (const auto& e : p.events) {
            if (e.is_pulse)
                os << "  { type = \"pulse\", area_pi = " << num(e.area / pi)
                   << ", phase_pi = " << num(e.phase / pi)
                   << ", duration_us = " << num(e.duration / units::microsecond) << " },\n";
            else
                os << "  { type = \"gap\", duration_us = " << num(e.duration / units::microsecond)
                   << ", sample_us = " << num(e.sample_every / units::microsecond) << " },\n";
        }
        os << "]\n";
    }

    os << "\n[evolution]\n"
       << "step_fraction = " << num(cfg.evolution.step_fraction) << "\n"
       << "max_steps = " << cfg.evolution.max_steps << "\n"
       << "boundary = " << (cfg.closed_box ? "\"closed\"" : "\"open\"") << "\n"
       << "threads = " << cfg.threads << "\n";

    const auto& o = cfg.output;
    os << "\n[output]\n"
       << "dir = " << detail::quoted(o.dir) << "\n"
       << "prefix = " << detail::quoted(o.prefix) << "\n"
       << "plot = " << (o.plot ? "true" : "false") << "\n"
       << "state_csv = " << (o.state_csv ? "true" : "false") << "\n"
       << "rates_csv = " << (o.rates_csv ? "true" : "false") << "\n"
       << "json = " << (o.json ? "true" : "false") << "\n";

    os << "\n[sweep]\n"
       << "axis = " << detail::quoted(cfg.sweep.axis) << "\n"
       << "values = [";
    for (std::size_t i = 0; i < cfg.sweep.values.size(); ++i)
        os << (i ? ", " : "") << num(cfg.sweep.values[i]);
    os << "]\n"
       << "protocol = " << detail::quoted(cfg.sweep.protocol) << "\n";
    return os.str();
}

/// 64-bit FNV-1a of a byte string.
inline std::uint64_t fnv1a64(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string config_hash(const RunConfig& cfg)
{
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << fnv1a64(serialize_config(cfg));
    return os.str();
}

} // namespace trapsim
