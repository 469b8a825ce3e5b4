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

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "trapsim/state.hpp"

namespace trapsim {

using cplx = std::complex<double>;

/// Microwave pulse. The carrier is stored as its offset from omega_hpf,
/// omega - omega_hpf, which keeps full precision on the ~Hz scale where all
/// the physics happens.
struct PulseSpec {
    double rabi = 0.0;           // |Omega|, rad/s
    double phase = 0.0;          // rad
    double carrier_offset = 0.0; // omega - omega_hpf, rad/s
    double duration = 0.0;       // s; 0 selects the delta-pulse limit
    double area = 0.0;           // rad, used when duration == 0
    double start = 0.0;          // s

    bool is_delta() const { return duration == 0.0; }
    /// Pulse area |Omega| tau for rectangular pulses, the stored area otherwise.
    double effective_area() const { return is_delta() ? area : rabi * duration; }

    static PulseSpec delta(double area, double phase, double carrier_offset, double start)
    {
        PulseSpec p;
        p.area = area;
        p.phase = phase;
        p.carrier_offset = carrier_offset;
        p.start = start;
        return p;
    }

    static PulseSpec rectangular(double rabi, double duration, double phase, double carrier_offset,
                                 double start)
    {
        if (!(duration > 0) || !(rabi >= 0))
            throw std::invalid_argument("rectangular pulse needs duration > 0 and rabi >= 0");
        PulseSpec p;
        p.rabi = rabi;
        p.duration = duration;
        p.phase = phase;
        p.carrier_offset = carrier_offset;
        p.start = start;
        p.area = rabi * duration;
        return p;
    }
};

/// 2x2 spin matrix in the (b, a) ordering.
struct SpinMatrix {
    cplx bb, ba, ab, aa;

    SpinMatrix adjoint() const { return {std::conj(bb), std::conj(ab), std::conj(ba), std::conj(aa)}; }

    friend SpinMatrix operator*(const SpinMatrix& l, const SpinMatrix& r)
    {
        return {l.bb * r.bb + l.ba * r.ab, l.bb * r.ba + l.ba * r.aa, l.ab * r.bb + l.aa * r.ab,
                l.ab * r.ba + l.aa * r.aa};
    }
};

/// Evolution over a rectangular pulse of duration tau starting at t = 0 for
/// one vibrational block, detuning Delta_v = omega - omega_hpf - dw_v:
///
///   U_bb = [cos(W t/2) + i (D/W) sin(W t/2)] e^{-i D t/2}
///   U_ba = i (|Om|/W) sin(W t/2) e^{i phi - i D t/2}
///   U_ab = i (|Om|/W) sin(W t/2) e^{-i phi + i D t/2}
///   U_aa = [cos(W t/2) - i (D/W) sin(W t/2)] e^{i D t/2}
///
/// with W = sqrt(|Om|^2 + D^2).
inline SpinMatrix block_unitary(const PulseSpec& p, double detuning)
{
    const double tau = p.duration;
    const double W = std::sqrt(p.rabi * p.rabi + detuning * detuning);
    if (W == 0.0)
        return {1.0, 0.0, 0.0, 1.0};
    const double c = std::cos(0.5 * W * tau);
    const double s = std::sin(0.5 * W * tau);
    const cplx em = std::polar(1.0, -0.5 * detuning * tau);
    const cplx ep = std::conj(em);
    const cplx i1(0.0, 1.0);
    const double r = p.rabi / W;
    return {cplx(c, detuning / W * s) * em, i1 * r * s * std::polar(1.0, p.phase) * em,
            i1 * r * s * std::polar(1.0, -p.phase) * ep, cplx(c, -detuning / W * s) * ep};
}

/// Delta-pulse rotation of area A with phase phi.
inline SpinMatrix delta_rotation(double area, double phase)
{
    const double c = std::cos(0.5 * area);
    const double s = std::sin(0.5 * area);
    const cplx i1(0.0, 1.0);
    return {c, i1 * s * std::polar(1.0, phase), i1 * s * std::polar(1.0, -phase), c};
}

namespace detail {

struct Block {
    double aa, bb;
    cplx ba;
};

/// u rho u^dagger for one 2x2 block.
inline Block conjugated(double aa, double bb, cplx ba, const SpinMatrix& u)
{
    const cplx ab = std::conj(ba);
    const cplx m11 = u.bb * bb + u.ba * ab;
    const cplx m12 = u.bb * ba + u.ba * aa;
    const cplx m21 = u.ab * bb + u.aa * ab;
    const cplx m22 = u.ab * ba + u.aa * aa;
    return {(m21 * std::conj(u.ab) + m22 * std::conj(u.aa)).real(),
            (m11 * std::conj(u.bb) + m12 * std::conj(u.ba)).real(),
            m11 * std::conj(u.ab) + m12 * std::conj(u.aa)};
}

inline void conjugate_block(QubitVibState& st, std::size_t i, const SpinMatrix& u)
{
    const Block r = conjugated(st.rho_aa[i], st.rho_bb[i], st.rho_ba[i], u);
    st.rho_aa[i] = r.aa;
    st.rho_bb[i] = r.bb;
    st.rho_ba[i] = r.ba;
}

inline void check_time(const QubitVibState& st, double start)
{
    if (std::abs(st.time - start) > 1e-12 * (1.0 + std::abs(start))) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "pulse starts at t = " << start << " s but the state is at t = " << st.time << " s";
        throw TimeMismatchError(msg.str());
    }
}

/// Calls f(i, u_i) with the stored-frame unitary of every block for a pulse
/// starting at t0. A delta pulse is the same rotation for every mode in the
/// lab frame, which in the stored frame shows up as the phase
/// phi - Delta_v t0; finite pulses get the same shift on top of the
/// closed-form block solution for a start at t = 0.
template <class F>
void for_each_block_unitary(const ModeSpace& modes, const PulseSpec& p, double t0, F&& f)
{
    if (p.is_delta()) {
        const double c = std::cos(0.5 * p.area);
        const double s = std::sin(0.5 * p.area);
        const cplx i1(0.0, 1.0);
        const cplx common = std::polar(1.0, p.phase - p.carrier_offset * t0);
        modes.for_each_phase_factor(t0, 1.0, [&](std::size_t i, cplx ph) {
            const cplx e = common * ph; // e^{i(phi - Delta_v t0)}
            f(i, SpinMatrix{c, i1 * s * e, i1 * s * std::conj(e), c});
        });
        return;
    }
    PulseSpec local = p;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const double det = p.carrier_offset - modes.delta_omega(i);
        local.phase = p.phase - det * t0;
        f(i, block_unitary(local, det));
    }
}

} // namespace detail

/// Delta pulse at the state's current time.
inline void apply_delta_pulse(QubitVibState& st, const ModeSpace& modes, double area, double phase,
                              double carrier_offset)
{
    detail::for_each_block_unitary(modes, PulseSpec::delta(area, phase, carrier_offset, st.time),
                                   st.time, [&](std::size_t i, const SpinMatrix& u) {
                                       detail::conjugate_block(st, i, u);
                                   });
}

/// Applies one pulse to every vibrational block and advances the clock by
/// its duration.
inline void apply_pulse(QubitVibState& st, const ModeSpace& modes, const PulseSpec& p)
{
    detail::check_time(st, p.start);
    st.time = p.start;
    detail::for_each_block_unitary(modes, p, p.start, [&](std::size_t i, const SpinMatrix& u) {
        detail::conjugate_block(st, i, u);
    });
    st.time = p.start + p.duration;
}

/// Spin populations the pulse would leave behind, without touching `st`.
inline Populations populations_after(const QubitVibState& st, const ModeSpace& modes,
                                     const PulseSpec& p)
{
    detail::check_time(st, p.start);
    Populations out;
    detail::for_each_block_unitary(modes, p, p.start, [&](std::size_t i, const SpinMatrix& u) {
        const auto r = detail::conjugated(st.rho_aa[i], st.rho_bb[i], st.rho_ba[i], u);
        out.a += r.aa;
        out.b += r.bb;
    });
    return out;
}

/// Free-evolution interval of a protocol. `sample_every` > 0 requests
/// observables at that cadence inside the gap.
struct FreeGap {
    double duration = 0.0;
    double sample_every = 0.0;
};

using ProtocolEvent = std::variant<PulseSpec, FreeGap>;

struct Protocol {
    std::string name = "custom";
    std::vector<ProtocolEvent> events;

    /// Checks that events are time-ordered and contiguous from `t_begin`.
    void validate(double t_begin = 0.0) const
    {
        double t = t_begin;
        for (const auto& ev : events) {
            if (const auto* p = std::get_if<PulseSpec>(&ev)) {
                if (p->duration < 0)
                    throw ConfigError("pulse duration must be >= 0");
                if (std::abs(p->start - t) > 1e-12 * (1.0 + std::abs(t)))
                    throw ConfigError("protocol events overlap or leave holes");
                t = p->start + p->duration;
            }
            else {
                const auto& g = std::get<FreeGap>(ev);
                if (g.duration < 0 || g.sample_every < 0)
                    throw ConfigError("gap durations must be >= 0");
                t += g.duration;
            }
        }
    }

    double end_time(double t_begin = 0.0) const
    {
        double t = t_begin;
        for (const auto& ev : events) {
            if (const auto* p = std::get_if<PulseSpec>(&ev))
                t = p->start + p->duration;
            else
                t += std::get<FreeGap>(ev).duration;
        }
        return t;
    }
};

/// How pulses of a standard protocol are realized.
struct PulseSettings {
    bool delta = true;
    double rabi = two_pi * 1.5e3; // used for rectangular pulses: tau = area / rabi
    double carrier_offset = 0.0;
    double phase = 0.0;
};

/// Appends pulses and gaps while keeping the running clock.
class ProtocolBuilder {
public:
    explicit ProtocolBuilder(std::string name, const PulseSettings& s, double t0 = 0.0)
        : settings_(s), t_(t0)
    {
        protocol_.name = std::move(name);
    }

    ProtocolBuilder& pulse(double area, double extra_phase = 0.0)
    {
        const double phase = settings_.phase + extra_phase;
        if (settings_.delta) {
            protocol_.events.emplace_back(
                PulseSpec::delta(area, phase, settings_.carrier_offset, t_));
        }
        else {
            const auto p = PulseSpec::rectangular(settings_.rabi, area / settings_.rabi, phase,
                                                  settings_.carrier_offset, t_);
            protocol_.events.emplace_back(p);
            t_ = p.start + p.duration;
        }
        return *this;
    }

    ProtocolBuilder& gap(double duration, double sample_every = 0.0)
    {
        protocol_.events.emplace_back(FreeGap{duration, sample_every});
        t_ += duration;
        return *this;
    }

    Protocol build() const { return protocol_; }

private:
    Protocol protocol_;
    PulseSettings settings_;
    double t_;
};

/// Ramsey: area1 pulse, gap, area2 pulse. The default first pulse is 3pi/2,
/// so the ideal sequence returns the atom to |a>.
inline Protocol make_ramsey(double gap, const PulseSettings& s, double area1 = 1.5 * pi,
                            double area2 = 0.5 * pi, double sample_every = 0.0)
{
    return ProtocolBuilder("ramsey", s).pulse(area1).gap(gap, sample_every).pulse(area2).build();
}

/// Spin echo: pi/2, gap, pi, gap, pi/2.
inline Protocol make_echo(double gap, const PulseSettings& s, double sample_every = 0.0)
{
    return ProtocolBuilder("echo", s)
        .pulse(0.5 * pi)
        .gap(gap, sample_every)
        .pulse(pi)
        .gap(gap, sample_every)
        .pulse(0.5 * pi)
        .build();
}

/// Continuous drive for `drive_time`.
inline Protocol make_rabi(double drive_time, const PulseSettings& s)
{
    Protocol p;
    p.name = "rabi";
    if (drive_time > 0)
        p.events.emplace_back(
            PulseSpec::rectangular(s.rabi, drive_time, s.phase, s.carrier_offset, 0.0));
    return p;
}

struct CarrierScanResult {
    double best_offset = 0.0; // omega - omega_hpf, rad/s
    std::vector<double> offsets;
    std::vector<double> contrasts;
};

namespace detail {

inline double rabi_pb(const QubitVibState& initial, const ModeSpace& modes, double rabi,
                      double offset, double t)
{
    if (t <= 0.0)
        return populations(initial).b;
    return populations_after(initial, modes, PulseSpec::rectangular(rabi, t, 0.0, offset, initial.time)).b;
}

/// Golden-section refinement of an extremum of f on [lo, hi].
template <class F>
double golden_extremum(F&& f, double lo, double hi, bool maximize)
{
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    const double sgn = maximize ? 1.0 : -1.0;
    // near an extremum the value error is quadratic in the position error
    const double tol = 1e-7 * (hi - lo);
    for (int it = 0; it < 80 && (hi - lo) > tol; ++it) {
        if (sgn * f1 > sgn * f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
        else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    return maximize ? std::max(f1, f2) : std::min(f1, f2);
}

} // namespace detail

/// Rabi-contrast carrier optimization: for each candidate offset a
/// continuous drive is simulated over the first two nominal Rabi periods,
/// and the contrast max(P_b) - min(P_b) is taken (coarse samples refined by
/// golden section). Ties resolve toward the lower carrier.
inline CarrierScanResult scan_carrier(const ModeSpace& modes, const QubitVibState& initial,
                                      double rabi, double offset_lo, double offset_hi, int steps,
                                      int samples = 64)
{
    if (steps < 1 || !(offset_hi >= offset_lo))
        throw ConfigError("scan_carrier: empty range");
    if (!(rabi > 0))
        throw ConfigError("scan_carrier: rabi frequency must be positive");
    CarrierScanResult r;
    const double window = 2.0 * two_pi / rabi;
    const double dt = window / samples;
    double best = -1.0;
    for (int k = 0; k < steps; ++k) {
        const double off =
            steps == 1 ? offset_lo : offset_lo + k * ((offset_hi - offset_lo) / (steps - 1));
        auto pb = [&](double t) { return detail::rabi_pb(initial, modes, rabi, off, t); };
        int imax = 0, imin = 0;
        std::vector<double> v(samples + 1);
        for (int j = 0; j <= samples; ++j) {
            v[j] = pb(j * dt);
            if (v[j] > v[imax])
                imax = j;
            if (v[j] < v[imin])
                imin = j;
        }
        auto bracket = [&](int j) {
            return std::pair{std::max(0.0, (j - 1) * dt), std::min(window, (j + 1) * dt)};
        };
        const auto [ahi, bhi] = bracket(imax);
        const auto [alo, blo] = bracket(imin);
        const double vmax = std::max(v[imax], detail::golden_extremum(pb, ahi, bhi, true));
        const double vmin = std::min(v[imin], detail::golden_extremum(pb, alo, blo, false));
        const double contrast = vmax - vmin;
        r.offsets.push_back(off);
        r.contrasts.push_back(contrast);
        if (contrast > best) {
            best = contrast;
            r.best_offset = off;
        }
    }
    return r;
}

} // namespace trapsim
