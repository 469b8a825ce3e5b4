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
#include <limits>
#include <ostream>
#include <utility>
#include <vector>

#include "trapsim/mode_space.hpp"

namespace trapsim {

enum class Spin { a, b };

/// Inverse temperature and initial spin for the thermal preparation.
/// beta = +inf means T = 0.
struct ThermalSpec {
    double beta = std::numeric_limits<double>::infinity();
    Spin initial = Spin::a;

    static ThermalSpec from_temperature(double kelvin, double kB = 1.380649e-23,
                                        Spin spin = Spin::a)
    {
        ThermalSpec t;
        t.beta = kelvin > 0 ? 1.0 / (kB * kelvin) : std::numeric_limits<double>::infinity();
        t.initial = spin;
        return t;
    }
};

/// Spin-vibration density matrix, diagonal in the vibrational index, kept in
/// the slowly varying frame where free motion under the trap Hamiltonian
/// leaves every element constant. Per mode v the 2x2 block is
///
///   [ rho_bb  rho_ba ]
///   [ rho_ab  rho_aa ]       rho_ab = conj(rho_ba)
///
/// stored as structure-of-arrays. rho_ab is not stored, so Hermiticity holds
/// exactly.
struct QubitVibState {
    std::vector<double> rho_aa;
    std::vector<double> rho_bb;
    std::vector<std::complex<double>> rho_ba;
    /// absolute time in s; the frame phases refer to it
    double time = 0.0;
    /// truncated / untruncated partition function at preparation
    double captured_weight = 1.0;

    QubitVibState() = default;
    explicit QubitVibState(std::size_t modes) : rho_aa(modes, 0.0), rho_bb(modes, 0.0), rho_ba(modes) {}

    std::size_t size() const { return rho_aa.size(); }
    std::complex<double> rho_ab(std::size_t i) const { return std::conj(rho_ba[i]); }

    double trace() const
    {
        double t = 0.0;
        for (std::size_t i = 0; i < size(); ++i)
            t += rho_aa[i] + rho_bb[i];
        return t;
    }

    /// Smallest eigenvalue over all 2x2 blocks.
    double min_block_eigenvalue() const
    {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < size(); ++i) {
            const double mean = 0.5 * (rho_aa[i] + rho_bb[i]);
            const double half = 0.5 * (rho_bb[i] - rho_aa[i]);
            best = std::min(best, mean - std::sqrt(half * half + std::norm(rho_ba[i])));
        }
        return best;
    }
};

/// Thermal state exp(-beta eps_v) over the truncated box, normalized on it.
/// The box is a product of per-axis ladders, so weights factorize; the
/// captured weight is the product of per-axis geometric-series fractions.
inline QubitVibState thermal_state(const ModeSpace& modes, const ThermalSpec& thermal)
{
    if (modes.empty())
        throw std::invalid_argument("thermal_state: empty mode space");
    const auto& trap = modes.trap();
    std::array<std::vector<double>, 3> w;
    double captured = 1.0;
    for (int a = 0; a < 3; ++a) {
        const int n = modes.levels(static_cast<Axis>(a));
        w[a].assign(n, 0.0);
        w[a][0] = 1.0;
        if (std::isinf(thermal.beta))
            continue;
        const double x = std::exp(-thermal.beta * trap.hbar * trap.omega_a[a]);
        double sum = 1.0;
        for (int k = 1; k < n; ++k) {
            w[a][k] = w[a][k - 1] * x;
            sum += w[a][k];
        }
        for (double& v : w[a])
            v /= sum;
        captured *= 1.0 - std::pow(x, n);
    }

    QubitVibState s(modes.size());
    auto& pop = thermal.initial == Spin::a ? s.rho_aa : s.rho_bb;
    std::size_t i = 0;
    for (int x = 0; x < modes.levels(Axis::x); ++x)
        for (int y = 0; y < modes.levels(Axis::y); ++y)
            for (int z = 0; z < modes.levels(Axis::z); ++z)
                pop[i++] = w[0][x] * w[1][y] * w[2][z];
    s.captured_weight = captured;
    return s;
}

struct Populations {
    double a = 0.0;
    double b = 0.0;
};

inline Populations populations(const QubitVibState& s)
{
    Populations p;
    for (std::size_t i = 0; i < s.size(); ++i) {
        p.a += s.rho_aa[i];
        p.b += s.rho_bb[i];
    }
    return p;
}

struct CoherenceMagnitude {
    /// |sum_v rho_ba,v exp(-i dw_v t)|: the fringe-contrast-relevant sum,
    /// with each mode's precession restored
    double aggregate = 0.0;
    /// sum_v |rho_ba,v|: insensitive to dephasing
    double total = 0.0;
};

inline CoherenceMagnitude coherence_magnitude(const QubitVibState& s, const ModeSpace& modes)
{
    std::complex<double> agg = 0.0;
    CoherenceMagnitude out;
    modes.for_each_phase_factor(s.time, -1.0, [&](std::size_t i, std::complex<double> e) {
        agg += s.rho_ba[i] * e;
        out.total += std::sqrt(std::norm(s.rho_ba[i]));
    });
    out.aggregate = std::abs(agg);
    return out;
}

/// Columnar dump: mode indices then the four block entries.
inline void write_state_csv(std::ostream& os, const QubitVibState& s, const ModeSpace& modes)
{
    const auto old = os.precision(17);
    os << "# time_s=" << s.time << "\n";
    os << "vx,vy,vz,rho_aa,rho_bb,rho_ba_re,rho_ba_im,rho_ab_re,rho_ab_im\n";
    // "+ 0.0" folds -0 into 0 so conjugated zeros print the same
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Mode v = modes.mode(i);
        const auto ab = s.rho_ab(i);
        os << v[0] << ',' << v[1] << ',' << v[2] << ',' << s.rho_aa[i] << ',' << s.rho_bb[i] << ','
           << s.rho_ba[i].real() + 0.0 << ',' << s.rho_ba[i].imag() + 0.0 << ','
           << ab.real() + 0.0 << ',' << ab.imag() + 0.0 << '\n';
    }
    os.precision(old);
}

} // namespace trapsim
