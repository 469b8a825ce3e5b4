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

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "trapsim/pulses.hpp"
#include "trapsim/rates.hpp"

namespace trapsim {

struct StepControl {
    /// h <= step_fraction / max rate and step_fraction / max |dw_v - dw_v'|
    double step_fraction = 0.1;
    std::size_t max_steps = 50'000'000;

    void validate() const
    {
        if (!(step_fraction > 0 && step_fraction <= 1))
            throw ConfigError("step_fraction must lie in (0, 1]");
        if (max_steps == 0)
            throw ConfigError("max_steps must be positive");
    }
};

/// The reduced master equation on one mode space: out-rates, in-rates and
/// the per-mode precession offsets entering the in-coherence terms.
class MasterEquation {
public:
    MasterEquation(const ModeSpace& modes, RateMatrices rates)
        : modes_(&modes), rates_(std::move(rates))
    {
        if (rates_.n != modes.size())
            throw std::invalid_argument("MasterEquation: rates built on a different mode space");
        for (std::size_t v = 0; v < rates_.n; ++v)
            for (std::size_t k = rates_.gamma_in.row_ptr[v]; k < rates_.gamma_in.row_ptr[v + 1]; ++k)
                max_dw_ = std::max(max_dw_, std::abs(modes.delta_omega(v) -
                                                     modes.delta_omega(rates_.gamma_in.src[k])));
        max_gamma_ = rates_.max_gamma_out();
    }

    const ModeSpace& modes() const { return *modes_; }
    const RateMatrices& rates() const { return rates_; }
    bool trivial() const { return rates_.is_zero(); }
    double max_gamma() const { return max_gamma_; }
    /// max |dw_v - dw_v'| over pairs connected by an in-rate
    double max_pair_detuning() const { return max_dw_; }

    /// Right-hand side at absolute time t.
    void derivative(double t, const QubitVibState& y, QubitVibState& dy,
                    std::vector<cplx>& ph_minus) const
    {
        const std::size_t n = rates_.n;
        const auto& g = rates_.gamma_out;
        const auto& in = rates_.gamma_in;
        modes_->phase_factors(t, -1.0, ph_minus);
        for (std::size_t v = 0; v < n; ++v) {
            double saa = 0.0, sbb = 0.0;
            cplx sba = 0.0;
            for (std::size_t k = in.row_ptr[v]; k < in.row_ptr[v + 1]; ++k) {
                const std::size_t s = in.src[k];
                const double r = in.rate[k];
                saa += r * y.rho_aa[s];
                sbb += r * y.rho_bb[s];
                sba += r * (ph_minus[s] * y.rho_ba[s]);
            }
            dy.rho_aa[v] = -g[v] * y.rho_aa[v] + saa;
            dy.rho_bb[v] = -g[v] * y.rho_bb[v] + sbb;
            // e^{+i dw_v t} restores the destination phase
            dy.rho_ba[v] = -g[v] * y.rho_ba[v] + std::conj(ph_minus[v]) * sba;
        }
    }

    /// Largest stable step for a gap of the given duration.
    double max_step(double duration, const StepControl& c) const
    {
        double h = duration / 4.0;
        if (max_gamma_ > 0)
            h = std::min(h, c.step_fraction / max_gamma_);
        if (max_dw_ > 0)
            h = std::min(h, c.step_fraction / max_dw_);
        return h;
    }

private:
    const ModeSpace* modes_;
    RateMatrices rates_;
    double max_gamma_ = 0.0;
    double max_dw_ = 0.0;
};

namespace detail {

inline void axpy(QubitVibState& out, const QubitVibState& y, double a, const QubitVibState& k)
{
    for (std::size_t i = 0; i < y.size(); ++i) {
        out.rho_aa[i] = y.rho_aa[i] + a * k.rho_aa[i];
        out.rho_bb[i] = y.rho_bb[i] + a * k.rho_bb[i];
        out.rho_ba[i] = y.rho_ba[i] + a * k.rho_ba[i];
    }
}

} // namespace detail

/// Advances the state through a free-evolution interval with classical RK4
/// at a fixed step. With all rates zero the stored (slow-frame) state does
/// not change at all and only the clock moves.
inline void free_evolve(QubitVibState& st, double duration, const MasterEquation& eq,
                        const StepControl& control = {})
{
    if (duration < 0)
        throw std::invalid_argument("free_evolve: negative duration");
    if (st.size() != eq.modes().size())
        throw std::invalid_argument("free_evolve: state and rates live on different mode spaces");
    if (duration == 0.0)
        return;
    const double t_end = st.time + duration;
    if (eq.trivial()) {
        st.time = t_end;
        return;
    }
    const double hmax = eq.max_step(duration, control);
    const double nsteps = std::ceil(duration / hmax);
    if (nsteps > static_cast<double>(control.max_steps)) {
        std::ostringstream msg;
        msg << "free evolution over " << duration << " s needs " << nsteps
            << " RK4 steps (limit " << control.max_steps
            << "); use coarser sampling, a smaller basis or a larger step_fraction";
        throw ConvergenceError(msg.str());
    }
    const auto steps = static_cast<std::size_t>(nsteps);
    const double h = duration / static_cast<double>(steps);
    const std::size_t n = st.size();
    QubitVibState k1(n), k2(n), k3(n), k4(n), tmp(n);
    std::vector<cplx> ph;
    const double t0 = st.time;
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = t0 + static_cast<double>(s) * h;
        eq.derivative(t, st, k1, ph);
        detail::axpy(tmp, st, 0.5 * h, k1);
        eq.derivative(t + 0.5 * h, tmp, k2, ph);
        detail::axpy(tmp, st, 0.5 * h, k2);
        eq.derivative(t + 0.5 * h, tmp, k3, ph);
        detail::axpy(tmp, st, h, k3);
        eq.derivative(t + h, tmp, k4, ph);
        const double w = h / 6.0;
        for (std::size_t i = 0; i < n; ++i) {
            st.rho_aa[i] += w * (k1.rho_aa[i] + 2.0 * (k2.rho_aa[i] + k3.rho_aa[i]) + k4.rho_aa[i]);
            st.rho_bb[i] += w * (k1.rho_bb[i] + 2.0 * (k2.rho_bb[i] + k3.rho_bb[i]) + k4.rho_bb[i]);
            st.rho_ba[i] += w * (k1.rho_ba[i] + 2.0 * (k2.rho_ba[i] + k3.rho_ba[i]) + k4.rho_ba[i]);
        }
    }
    st.time = t_end;
}

struct TimeSeries {
    std::vector<double> time;
    std::vector<double> p_a;
    std::vector<double> p_b;
    std::vector<double> coh_aggregate;
    std::vector<double> coh_total;
    std::vector<std::pair<std::string, std::string>> metadata;

    std::size_t size() const { return time.size(); }

    void push(double t, const Populations& p, const CoherenceMagnitude& c)
    {
        time.push_back(t);
        p_a.push_back(p.a);
        p_b.push_back(p.b);
        coh_aggregate.push_back(c.aggregate);
        coh_total.push_back(c.total);
    }

    void add_meta(std::string key, std::string value)
    {
        metadata.emplace_back(std::move(key), std::move(value));
    }

    void write_csv(std::ostream& os) const
    {
        const auto old = os.precision(17);
        for (const auto& [k, v] : metadata)
            os << "# " << k << '=' << v << '\n';
        os << "time_s,P_a,P_b,coh_aggregate,coh_total\n";
        for (std::size_t i = 0; i < size(); ++i)
            os << time[i] << ',' << p_a[i] << ',' << p_b[i] << ',' << coh_aggregate[i] << ','
               << coh_total[i] << '\n';
        os.precision(old);
    }
};

inline void record(TimeSeries& ts, const QubitVibState& st, const ModeSpace& modes)
{
    if (!ts.time.empty() && !(st.time > ts.time.back()))
        return;
    ts.push(st.time, populations(st), coherence_magnitude(st, modes));
}

/// Runs a protocol from `initial`, recording observables at the start, at
/// the requested cadence inside gaps, and at the end.
inline TimeSeries run_protocol(const Protocol& protocol, const QubitVibState& initial,
                               const MasterEquation& eq, const StepControl& control = {})
{
    protocol.validate(initial.time);
    const auto& modes = eq.modes();
    QubitVibState st = initial;
    TimeSeries ts;
    record(ts, st, modes);
    for (const auto& ev : protocol.events) {
        if (const auto* p = std::get_if<PulseSpec>(&ev)) {
            apply_pulse(st, modes, *p);
            continue;
        }
        const auto& g = std::get<FreeGap>(ev);
        if (g.sample_every > 0) {
            const double t_begin = st.time;
            const double t_end = st.time + g.duration;
            record(ts, st, modes);
            for (std::size_t k = 1;; ++k) {
                const double target = std::min(t_end, t_begin + static_cast<double>(k) * g.sample_every);
                free_evolve(st, target - st.time, eq, control);
                record(ts, st, modes);
                if (target >= t_end)
                    break;
            }
            st.time = t_end;
        }
        else {
            free_evolve(st, g.duration, eq, control);
        }
    }
    record(ts, st, modes);
    return ts;
}

/// Final state after a protocol, with the coherence measured just before
/// the last event when that event is a pulse.
struct ProtocolOutcome {
    QubitVibState state;
    CoherenceMagnitude coherence_before_readout;
};

inline ProtocolOutcome run_to_end(const Protocol& protocol, const QubitVibState& initial,
                                  const MasterEquation& eq, const StepControl& control = {})
{
    protocol.validate(initial.time);
    const auto& modes = eq.modes();
    ProtocolOutcome out{initial, {}};
    auto& st = out.state;
    for (std::size_t i = 0; i < protocol.events.size(); ++i) {
        const auto& ev = protocol.events[i];
        const bool last = i + 1 == protocol.events.size();
        if (const auto* p = std::get_if<PulseSpec>(&ev)) {
            if (last)
                out.coherence_before_readout = coherence_magnitude(st, modes);
            apply_pulse(st, modes, *p);
        }
        else {
            free_evolve(st, std::get<FreeGap>(ev).duration, eq, control);
            if (last)
                out.coherence_before_readout = coherence_magnitude(st, modes);
        }
    }
    if (protocol.events.empty())
        out.coherence_before_readout = coherence_magnitude(st, modes);
    return out;
}

/// Scan over gap values. Every gap is an independent run from `initial`;
/// runs are spread over `threads` workers. Row i holds the gap value, the
/// populations after the readout pulse and the coherence just before it.
inline TimeSeries scan_gaps(const std::function<Protocol(double)>& make,
                            const std::vector<double>& gaps, const QubitVibState& initial,
                            const MasterEquation& eq, const StepControl& control = {},
                            unsigned threads = 1)
{
    for (std::size_t i = 1; i < gaps.size(); ++i)
        if (!(gaps[i] > gaps[i - 1]))
            throw ConfigError("gap values must be strictly increasing");
    std::vector<Populations> pops(gaps.size());
    std::vector<CoherenceMagnitude> cohs(gaps.size());
    std::vector<std::exception_ptr> errors(gaps.size());
    auto work = [&](std::size_t i) {
        try {
            const auto out = run_to_end(make(gaps[i]), initial, eq, control);
            pops[i] = populations(out.state);
            cohs[i] = out.coherence_before_readout;
        }
        catch (...) {
            errors[i] = std::current_exception();
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(gaps.size())));
    if (threads <= 1) {
        for (std::size_t i = 0; i < gaps.size(); ++i)
            work(i);
    }
    else {
        std::vector<std::thread> pool;
        for (unsigned id = 0; id < threads; ++id)
            pool.emplace_back([&, id] {
                for (std::size_t i = id; i < gaps.size(); i += threads)
                    work(i);
            });
        for (auto& th : pool)
            th.join();
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    TimeSeries ts;
    for (std::size_t i = 0; i < gaps.size(); ++i)
        ts.push(gaps[i], pops[i], cohs[i]);
    return ts;
}

/// Ramsey scan from a single trajectory: the readout delta pulse does not
/// act on the past, so each gap's outcome is the trajectory state at that
/// time with the readout applied to a copy. Valid only for delta readout.
inline TimeSeries scan_ramsey_trajectory(const PulseSpec& first, const PulseSpec& readout,
                                         const std::vector<double>& gaps,
                                         const QubitVibState& initial, const MasterEquation& eq,
                                         const StepControl& control = {})
{
    if (!readout.is_delta())
        throw ConfigError("trajectory Ramsey scans need a delta readout pulse");
    for (std::size_t i = 1; i < gaps.size(); ++i)
        if (!(gaps[i] > gaps[i - 1]))
            throw ConfigError("gap values must be strictly increasing");
    if (!gaps.empty() && gaps.front() < 0)
        throw ConfigError("gap values must be >= 0");
    const auto& modes = eq.modes();
    QubitVibState st = initial;
    PulseSpec p1 = first;
    p1.start = st.time;
    apply_pulse(st, modes, p1);
    const double t_gap0 = st.time;
    TimeSeries ts;
    for (double g : gaps) {
        free_evolve(st, t_gap0 + g - st.time, eq, control);
        st.time = t_gap0 + g;
        const auto coh = coherence_magnitude(st, modes);
        PulseSpec p2 = readout;
        p2.start = st.time;
        ts.push(g, populations_after(st, modes, p2), coh);
    }
    return ts;
}

// ---------------------------------------------------------------------------
// closed-form Ramsey signal and summaries

struct RamseyOracleParams {
    double area1 = 1.5 * pi;
    double area2 = 0.5 * pi;
    double phase1 = 0.0;
    double phase2 = 0.0;
    double carrier_offset = 0.0;
};

/// P_a after two delta pulses separated by t, starting from a thermal state
/// in |a>, without dissipation. For one mode
///
///   P_a = c1^2 c2^2 + s1^2 s2^2 - 2 c1 c2 s1 s2 cos(phi1 - phi2 + Delta_v t),
///
/// with c_i = cos(A_i/2), s_i = sin(A_i/2), Delta_v = omega - omega_hpf - dw_v.
/// The thermal sum over the box factorizes into one truncated geometric
/// series per axis because dw_v is linear in v.
inline double ramsey_dephasing_oracle(const ModeSpace& modes, const ThermalSpec& thermal,
                                      const RamseyOracleParams& p, double t)
{
    const auto& trap = modes.trap();
    const double c1 = std::cos(0.5 * p.area1), s1 = std::sin(0.5 * p.area1);
    const double c2 = std::cos(0.5 * p.area2), s2 = std::sin(0.5 * p.area2);
    // sum_v w_v exp(-i dw_v t)
    cplx z = std::polar(1.0, -modes.delta_omega_ground() * t);
    for (int a = 0; a < 3; ++a) {
        const int N = modes.levels(static_cast<Axis>(a));
        const double x =
            std::isinf(thermal.beta) ? 0.0 : std::exp(-thermal.beta * trap.hbar * trap.omega_a[a]);
        const cplx q = x * std::polar(1.0, -modes.delta_omega_step(static_cast<Axis>(a)) * t);
        if (x == 0.0)
            continue; // ground level only
        z *= ((1.0 - std::pow(q, N)) / (1.0 - q)) / ((1.0 - std::pow(x, N)) / (1.0 - x));
    }
    const cplx f = std::polar(1.0, p.phase1 - p.phase2 + p.carrier_offset * t) * z;
    return c1 * c1 * c2 * c2 + s1 * s1 * s2 * s2 - 2.0 * c1 * c2 * s1 * s2 * f.real();
}

/// Thermal mean of dw_v over the truncated box.
inline double thermal_mean_delta_omega(const ModeSpace& modes, const ThermalSpec& thermal)
{
    const auto& trap = modes.trap();
    double mean = modes.delta_omega_ground();
    if (std::isinf(thermal.beta))
        return mean;
    for (int a = 0; a < 3; ++a) {
        const int N = modes.levels(static_cast<Axis>(a));
        const double x = std::exp(-thermal.beta * trap.hbar * trap.omega_a[a]);
        double s0 = 0.0, s1 = 0.0, w = 1.0;
        for (int n = 0; n < N; ++n) {
            s0 += w;
            s1 += n * w;
            w *= x;
        }
        mean += modes.delta_omega_step(static_cast<Axis>(a)) * s1 / s0;
    }
    return mean;
}

/// First time the series falls to half of its first value, by linear
/// interpolation between samples; +infinity if it never does.
inline double coherence_halftime(const std::vector<double>& time, const std::vector<double>& value)
{
    if (time.size() != value.size())
        throw std::invalid_argument("coherence_halftime: size mismatch");
    if (time.empty())
        return std::numeric_limits<double>::infinity();
    const double half = 0.5 * value.front();
    for (std::size_t i = 1; i < time.size(); ++i)
        if (value[i] <= half) {
            const double y0 = value[i - 1], y1 = value[i];
            if (y0 == y1)
                return time[i];
            return time[i - 1] + (y0 - half) / (y0 - y1) * (time[i] - time[i - 1]);
        }
    return std::numeric_limits<double>::infinity();
}

inline double coherence_halftime(const TimeSeries& ts)
{
    return coherence_halftime(ts.time, ts.coh_aggregate);
}

struct ExponentialFit {
    double amplitude = 0.0;
    double tau = 0.0;
    double max_residual = 0.0;
    double rms_residual = 0.0;
};

/// Least-squares fit of y = A exp(-(t - t0)/tau), t0 the first sample. A is
/// solved linearly for each tau; tau is found by a log-spaced scan refined
/// by golden section.
inline ExponentialFit fit_single_exponential(const std::vector<double>& t,
                                             const std::vector<double>& y)
{
    if (t.size() != y.size() || t.size() < 3)
        throw std::invalid_argument("fit_single_exponential: need at least three samples");
    const double t0 = t.front();
    const double span = t.back() - t0;
    if (!(span > 0))
        throw std::invalid_argument("fit_single_exponential: zero time span");
    auto amp = [&](double tau) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double e = std::exp(-(t[i] - t0) / tau);
            num += y[i] * e;
            den += e * e;
        }
        return num / den;
    };
    auto sse = [&](double log_tau) {
        const double tau = std::exp(log_tau);
        const double a = amp(tau);
        double s = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double r = y[i] - a * std::exp(-(t[i] - t0) / tau);
            s += r * r;
        }
        return s;
    };
    const double lo = std::log(span * 1e-4), hi = std::log(span * 1e4);
    const int grid = 400;
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= grid; ++k) {
        const double v = sse(lo + (hi - lo) * k / grid);
        if (v < best_val) {
            best_val = v;
            best = k;
        }
    }
    double a = lo + (hi - lo) * std::max(0, best - 1) / grid;
    double b = lo + (hi - lo) * std::min(grid, best + 1) / grid;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = sse(x1), f2 = sse(x2);
    for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = sse(x1);
        }
        else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = sse(x2);
        }
    }
    ExponentialFit fit;
    fit.tau = std::exp(0.5 * (a + b));
    fit.amplitude = amp(fit.tau);
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = y[i] - fit.amplitude * std::exp(-(t[i] - t0) / fit.tau);
        fit.max_residual = std::max(fit.max_residual, std::abs(r));
        s += r * r;
    }
    fit.rms_residual = std::sqrt(s / static_cast<double>(t.size()));
    return fit;
}

} // namespace trapsim
